"""Zoom on the short-time peak of the decay-time distribution.

Fine bins over the first half atomic unit of time resolve the peak that
sits at the dip of the clock curve, about 0.105 a.u. or 5.1 attoseconds.
A second axis restates the time scale in attoseconds.
"""

import argparse

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from tunneltimes import (
    ATTOSECONDS_PER_AU,
    HistogramSpec,
    WellSpec,
    ionization_scenario,
    sample_times,
    to_attoseconds,
)

WELL = WellSpec(7.0, 1.0, 3.0)
DIP = 0.105  # a.u.


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--out", default="short_time_zoom.png")
    args = ap.parse_args()

    bundle = ionization_scenario(WELL)
    spec = HistogramSpec(bin_width=0.0031, lo=0.0, hi=0.5)
    dist = sample_times(bundle.rho, bundle.clock, args.samples, args.seed,
                        bins=spec)

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.stairs(dist.counts / args.samples, dist.bin_edges, fill=True,
              alpha=0.6, color="tab:orange")
    ax.axvline(DIP, color="k", ls="--", lw=0.9,
               label=f"clock-curve dip {DIP} a.u. "
                     f"= {to_attoseconds(DIP):.1f} as")
    ax.set_xlim(0.0, 0.5)
    ax.set_xlabel(r"decay time $\tau$  [a.u.]")
    ax.set_ylabel("fraction per bin")
    sec = ax.secondary_xaxis(
        "top", functions=(lambda t: t * ATTOSECONDS_PER_AU,
                          lambda t: t / ATTOSECONDS_PER_AU))
    sec.set_xlabel("decay time  [as]")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
