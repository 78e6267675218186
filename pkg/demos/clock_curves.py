"""Plot the stationary clock time against wave number for two shell widths.

The curve dips to about 0.105 a.u. just above the resonance needle and
blows up on it; both landmarks are marked, together with the wave number
of the bound state released into the continuum.
"""

import argparse
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tunneltimes import (
    Interval,
    WellSpec,
    clock_curve_extrema,
    ionization_scenario,
    solve_ground_state,
)

WELLS = (WellSpec(7.0, 1.0, 3.0), WellSpec(7.0, 1.0, 5.0))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="clock_curves.png")
    args = ap.parse_args()

    fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.0), sharey=True)
    k_top = math.sqrt(7.0)
    for ax, well in zip(axes, WELLS):
        bundle = ionization_scenario(well)
        ks = np.linspace(0.02, 3.2, 2500)
        taus = np.asarray(bundle.clock.evaluator(ks))
        ax.semilogy(ks, taus, lw=1.0, color="tab:blue")
        minima, maxima = clock_curve_extrema(
            bundle.clock, Interval(1e-3, k_top - 1e-9), n_grid=4096)
        for k_min, tau_min in minima:
            ax.plot([k_min], [tau_min], "v", color="tab:red",
                    label=f"dip {tau_min:.3f} a.u.")
        for k_max, _ in maxima:
            ax.axvline(k_max, color="tab:red", ls=":", lw=0.8,
                       label="resonance")
        k0 = solve_ground_state(well).k0
        ax.axvline(k0, color="tab:green", ls="--", lw=0.8,
                   label=f"bound state $k_0$ = {k0:.4f}")
        ax.axvline(k_top, color="k", ls="-.", lw=0.8,
                   label=r"barrier top $\sqrt{V_0}$")
        ax.set_title(f"shell width {well.barrier_width:g} a.u.")
        ax.set_xlabel("wave number $k$  [a.u.]")
        ax.legend(fontsize=7, loc="upper left")
    axes[0].set_ylabel(r"clock time $t_c$  [a.u.]")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
