"""Spectral densities of the released states, with the barrier top marked.

Left: the ground state of the deep well released into the continuum, a
needle at the resonance wave number.  Right: a confined sine state in a
thinner shell; the fraction of its weight above the barrier top is
printed on the panel.
"""

import argparse
import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from tunneltimes import InitialStateSpec, WellSpec, ionization_scenario

CASES = (
    (WellSpec(7.0, 1.0, 3.0), None, "ground state, $V_0=7$"),
    (WellSpec(11.0, 1.0, 2.0),
     InitialStateSpec(kind="confined_sine", k0_override=math.pi),
     r"confined sine $k_0=\pi$, $V_0=11$"),
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="spectral_densities.png")
    args = ap.parse_args()

    fig, axes = plt.subplots(1, 2, figsize=(10.0, 4.0))
    for ax, (well, initial, label) in zip(axes, CASES):
        bundle = ionization_scenario(well, initial)
        ax.semilogy(bundle.rho.grid, bundle.rho.density, lw=0.9,
                    color="tab:blue")
        ax.axvline(math.sqrt(well.V0), color="k", ls="--", lw=0.9,
                   label=r"barrier top $\sqrt{V_0}$")
        ax.set_title(label)
        ax.set_xlabel("wave number $k$  [a.u.]")
        ax.text(0.97, 0.92,
                f"above-barrier weight {bundle.above_barrier_weight:.3f}",
                ha="right", transform=ax.transAxes, fontsize=8)
        ax.legend(fontsize=8, loc="lower left")
    axes[0].set_ylabel(r"$\rho(k)$  [a.u.]")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
