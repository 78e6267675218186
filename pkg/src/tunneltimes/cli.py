"""Command-line front end.

Subcommands
-----------
run <config-file|preset>   build a scenario, sample it, write outputs
presets [--show NAME]      list the built-in presets / print one
stats <samples-file>       re-summarize a plain text column of times
convert <value> [--to ..]  convert a time between a.u. and attoseconds

Config documents are INI text with sections [model], [barrier],
[packet], [well], [initial], [sampling] and [output]; every number is
in Rydberg atomic units.  Unknown sections or keys are rejected by
name, never ignored.  Exit codes: 0 success, 2 config errors, 3
computation errors, 4 i/o errors.
"""
from __future__ import annotations

import argparse
import configparser
import hashlib
import os
import sys
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from . import __version__
from .barrier import BarrierSpec, GaussianPacketSpec
from .distribution import (HistogramSpec, TimeDistribution,
                           cdf_of_times_batch, sample_times, summarize)
from .ionization import InitialStateSpec, WellSpec
from .numerics import Interval, NonConvergenceError
from .ionization import BranchJumpError
from .presets import PRESETS, preset_names, preset_text
from .scenarios import ScenarioBundle, barrier_scenario, ionization_scenario
from .units import ATTOSECONDS_PER_AU, from_attoseconds, to_attoseconds

__all__ = ["ConfigError", "ScenarioConfig", "parse_config", "run_scenario",
           "main"]


class ConfigError(ValueError):
    """Malformed or invalid configuration document."""


#: Allowed keys per section; anything else is rejected by name.
_SCHEMA = {
    "model": {"kind"},
    "barrier": {"v0", "width"},
    "packet": {"k0", "sigma", "x0"},
    "well": {"v0", "a", "b"},
    "initial": {"kind", "k0"},
    "sampling": {"n_samples", "seed", "bin_width", "n_bins", "hist_lo",
                 "hist_hi", "support_lo", "support_hi", "n_grid"},
    "output": {"outputs"},
}

_OUTPUTS = ("density_k", "clock_curve", "time_histogram", "time_cdf", "stats")
#: time_samples is opt-in: a raw column of sampled times for `stats`.
_EXTRA_OUTPUTS = ("time_samples",)


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario description, ready to run."""

    kind: str
    barrier: Optional[BarrierSpec] = None
    packet: Optional[GaussianPacketSpec] = None
    well: Optional[WellSpec] = None
    initial: Optional[InitialStateSpec] = None
    n_samples: int = 1_000_000
    seed: int = 12345
    bins: HistogramSpec = HistogramSpec()
    outputs: Tuple[str, ...] = _OUTPUTS
    support: Optional[Interval] = None
    n_grid: int = 4096


def _float_of(section: str, key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(
            f"[{section}] {key} = {raw!r} is not a number") from None


def _int_of(section: str, key: str, raw: str) -> int:
    val = _float_of(section, key, raw)
    if val != int(val):
        raise ConfigError(f"[{section}] {key} = {raw!r} must be an integer")
    return int(val)


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate an INI config document."""
    cp = configparser.ConfigParser(interpolation=None,
                                   inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config document is not valid INI: {exc}") from None

    unknown_sections = [s for s in cp.sections() if s not in _SCHEMA]
    if unknown_sections:
        raise ConfigError("unknown config sections: "
                          + ", ".join(sorted(unknown_sections)))
    for sec in cp.sections():
        bad = [k for k in cp[sec] if k not in _SCHEMA[sec]]
        if bad:
            raise ConfigError(
                f"unknown keys in [{sec}]: " + ", ".join(sorted(bad)))

    if "model" not in cp or "kind" not in cp["model"]:
        raise ConfigError("missing model: add a [model] section with "
                          "kind = barrier | ionization")
    kind = cp["model"]["kind"].strip()
    if kind not in ("barrier", "ionization"):
        raise ConfigError(
            f"[model] kind must be 'barrier' or 'ionization', got {kind!r}")

    def need(section: str, key: str) -> str:
        if section not in cp or key not in cp[section]:
            raise ConfigError(f"missing [{section}] {key} for kind={kind}")
        return cp[section][key]

    barrier = packet = well = initial = None
    try:
        if kind == "barrier":
            if "well" in cp or "initial" in cp:
                raise ConfigError(
                    "[well]/[initial] sections do not apply to kind=barrier")
            barrier = BarrierSpec.from_width(
                _float_of("barrier", "v0", need("barrier", "v0")),
                _float_of("barrier", "width", need("barrier", "width")))
            x0 = None
            if "packet" in cp and "x0" in cp["packet"]:
                x0 = _float_of("packet", "x0", cp["packet"]["x0"])
            packet = GaussianPacketSpec(
                _float_of("packet", "k0", need("packet", "k0")),
                _float_of("packet", "sigma", need("packet", "sigma")),
                x0=x0)
        else:
            if "barrier" in cp or "packet" in cp:
                raise ConfigError(
                    "[barrier]/[packet] sections do not apply to "
                    "kind=ionization")
            well = WellSpec(
                _float_of("well", "v0", need("well", "v0")),
                _float_of("well", "a", need("well", "a")),
                _float_of("well", "b", need("well", "b")))
            state_kind = "ground_state"
            k0_override = None
            if "initial" in cp:
                state_kind = cp["initial"].get("kind", "ground_state").strip()
                if "k0" in cp["initial"]:
                    k0_override = _float_of("initial", "k0",
                                            cp["initial"]["k0"])
            initial = InitialStateSpec(kind=state_kind,
                                       k0_override=k0_override)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    samp = cp["sampling"] if "sampling" in cp else {}
    n_samples = _int_of("sampling", "n_samples",
                        samp.get("n_samples", "1000000"))
    if n_samples < 1:
        raise ConfigError(f"[sampling] n_samples must be >= 1, got {n_samples}")
    seed = _int_of("sampling", "seed", samp.get("seed", "12345"))
    n_grid = _int_of("sampling", "n_grid", samp.get("n_grid", "4096"))
    if n_grid < 16:
        raise ConfigError(f"[sampling] n_grid must be >= 16, got {n_grid}")

    hist_lo = hist_hi = None
    if "hist_lo" in samp:
        hist_lo = _float_of("sampling", "hist_lo", samp["hist_lo"])
    if "hist_hi" in samp:
        hist_hi = _float_of("sampling", "hist_hi", samp["hist_hi"])
    if "n_bins" in samp:
        if "bin_width" in samp:
            raise ConfigError(
                "[sampling] bin_width and n_bins are mutually exclusive")
        bins = HistogramSpec(bin_width=None,
                             n_bins=_int_of("sampling", "n_bins",
                                            samp["n_bins"]),
                             lo=hist_lo, hi=hist_hi)
    else:
        width = _float_of("sampling", "bin_width",
                          samp.get("bin_width", "0.0031"))
        if not width > 0.0:
            raise ConfigError(
                f"[sampling] bin_width must be > 0, got {width}")
        bins = HistogramSpec(bin_width=width, lo=hist_lo, hi=hist_hi)

    support = None
    has_lo, has_hi = "support_lo" in samp, "support_hi" in samp
    if has_lo != has_hi:
        raise ConfigError(
            "[sampling] support_lo and support_hi must be given together")
    if has_lo:
        try:
            support = Interval(
                _float_of("sampling", "support_lo", samp["support_lo"]),
                _float_of("sampling", "support_hi", samp["support_hi"]))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    outputs = _OUTPUTS
    if "output" in cp and "outputs" in cp["output"]:
        tokens = cp["output"]["outputs"].replace(",", " ").split()
        bad = [t for t in tokens
               if t not in _OUTPUTS and t not in _EXTRA_OUTPUTS]
        if bad:
            raise ConfigError(
                "unknown outputs: " + ", ".join(sorted(set(bad)))
                + "; valid: " + ", ".join(_OUTPUTS + _EXTRA_OUTPUTS))
        if not tokens:
            raise ConfigError("[output] outputs must not be empty")
        outputs = tuple(dict.fromkeys(tokens))

    return ScenarioConfig(kind=kind, barrier=barrier, packet=packet,
                          well=well, initial=initial, n_samples=n_samples,
                          seed=seed, bins=bins, outputs=outputs,
                          support=support, n_grid=n_grid)


# ---------------------------------------------------------------------------
# output writers
# ---------------------------------------------------------------------------

def _g(x: float) -> str:
    # 17 significant digits round-trip a double exactly
    return f"{x:.17g}"


def _header(title: str, columns: str, config: ScenarioConfig) -> list[str]:
    return [
        f"# tunneltimes {__version__}",
        f"# {title}",
        f"# columns: {columns}",
        "# units: Rydberg atomic units; *_as columns in attoseconds",
        f"# seed = {config.seed}, n_samples = {config.n_samples}",
    ]


def _write(path: str, lines: list[str]) -> Tuple[str, str]:
    data = "\n".join(lines) + "\n"
    with open(path, "w", encoding="ascii") as fh:
        fh.write(data)
    digest = hashlib.sha256(data.encode("ascii")).hexdigest()
    return path, digest


def _stats_lines(dist: TimeDistribution, bundle: ScenarioBundle,
                 config: ScenarioConfig) -> list[str]:
    s = dist.stats
    time_keys = [("mean", s.mean), ("median", s.median), ("q1", s.q1),
                 ("q3", s.q3), ("min", s.minimum), ("max", s.maximum)]
    time_keys += [(f"p{lvl}", val) for lvl, val in sorted(s.percentiles.items())]
    if dist.light_time is not None:
        time_keys.append(("light_time", dist.light_time))

    lines = [f"# tunneltimes {__version__}",
             "# summary statistics, key=value; times in Rydberg a.u. "
             "with *_as attosecond duplicates",
             f"n_samples={dist.n_samples}",
             f"seed={dist.seed}",
             f"rng_algorithm={dist.rng_algorithm}"]
    for key, val in time_keys:
        lines.append(f"{key}={_g(val)}")
        lines.append(f"{key}_as={_g(to_attoseconds(val))}")
    if dist.superluminal_prob is not None:
        lines.append(f"superluminal_prob={_g(dist.superluminal_prob)}")
    if dist.superluminal_prob_exact is not None:
        lines.append(
            f"superluminal_prob_exact={_g(dist.superluminal_prob_exact)}")
    if config.bins.n_bins is not None:
        lines.append(f"n_bins={config.bins.n_bins}")
    else:
        lines.append(f"bin_width={_g(config.bins.bin_width)}")
    lines.append(f"n_underflow={dist.n_underflow}")
    lines.append(f"n_overflow={dist.n_overflow}")
    lines.append(f"norm_residual={_g(bundle.rho.norm_residual)}")
    if bundle.above_barrier_weight is not None:
        lines.append(
            f"above_barrier_weight={_g(bundle.above_barrier_weight)}")
    return lines


def build_bundle(config: ScenarioConfig) -> ScenarioBundle:
    if config.kind == "barrier":
        return barrier_scenario(config.barrier, config.packet,
                                support=config.support, n_grid=config.n_grid)
    return ionization_scenario(config.well, config.initial,
                               support=config.support, n_grid=config.n_grid)


def run_scenario(config: ScenarioConfig, out_dir: str = ".") -> list:
    """Run the full pipeline and write the requested outputs.

    Returns the manifest: a list of (path, sha256 hex digest) pairs, one
    per written file, in output order.
    """
    bundle = build_bundle(config)
    dist = sample_times(bundle.rho, bundle.clock, config.n_samples,
                        config.seed, bins=config.bins, light=bundle.light)
    os.makedirs(out_dir, exist_ok=True)
    manifest = []
    for name in config.outputs:
        path = os.path.join(out_dir, _FILENAMES[name])
        manifest.append(_WRITERS[name](path, bundle, dist, config))
    return manifest


def _write_density(path, bundle, dist, config):
    lines = _header("normalized wave-number density of the time distribution"
                    " pipeline", "k, rho", config)
    lines += [f"{_g(k)},{_g(r)}"
              for k, r in zip(bundle.rho.grid, bundle.rho.density)]
    return _write(path, lines)


def _write_clock(path, bundle, dist, config):
    lines = _header("clock curve on the density grid",
                    "k, tau_au, tau_as", config)
    lines += [f"{_g(k)},{_g(t)},{_g(to_attoseconds(t))}"
              for k, t in zip(bundle.clock.k_table, bundle.clock.tau_table)]
    return _write(path, lines)


def _write_hist(path, bundle, dist, config):
    lines = _header("histogram of sampled times",
                    "bin_lo, bin_hi, count, freq", config)
    lines.append(f"# underflow = {dist.n_underflow}, "
                 f"overflow = {dist.n_overflow}")
    n = dist.n_samples
    lines += [f"{_g(lo)},{_g(hi)},{int(c)},{_g(c / n)}"
              for lo, hi, c in zip(dist.bin_edges[:-1], dist.bin_edges[1:],
                                   dist.counts)]
    return _write(path, lines)


def _write_cdf(path, bundle, dist, config):
    taus = np.linspace(float(bundle.clock.tau_table.min()),
                       float(bundle.clock.tau_table.max()), 512)
    cdf = cdf_of_times_batch(taus, bundle.rho, bundle.clock)
    lines = _header("deterministic distribution function of the clock time",
                    "tau, F", config)
    lines += [f"{_g(t)},{_g(F)}" for t, F in zip(taus, cdf)]
    return _write(path, lines)


def _write_stats(path, bundle, dist, config):
    return _write(path, _stats_lines(dist, bundle, config))


def _write_samples(path, bundle, dist, config):
    lines = _header("sampled clock times, one per line", "tau", config)
    lines += [_g(t) for t in dist.samples]
    return _write(path, lines)


_FILENAMES = {
    "density_k": "density_k.csv",
    "clock_curve": "clock_curve.csv",
    "time_histogram": "time_hist.csv",
    "time_cdf": "time_cdf.csv",
    "stats": "stats.txt",
    "time_samples": "time_samples.csv",
}

_WRITERS = {
    "density_k": _write_density,
    "clock_curve": _write_clock,
    "time_histogram": _write_hist,
    "time_cdf": _write_cdf,
    "stats": _write_stats,
    "time_samples": _write_samples,
}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_EXIT_CONFIG, _EXIT_COMPUTE, _EXIT_IO = 2, 3, 4


def _cmd_run(args) -> int:
    if os.path.exists(args.target):
        try:
            with open(args.target, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: cannot read {args.target}: {exc}", file=sys.stderr)
            return _EXIT_IO
    elif args.target in PRESETS:
        text = preset_text(args.target)
    else:
        print(f"error: {args.target!r} is neither a config file nor a "
              f"preset; presets: {', '.join(preset_names())}",
              file=sys.stderr)
        return _EXIT_CONFIG

    try:
        config = parse_config(text)
        if args.samples is not None:
            if args.samples < 1:
                raise ConfigError("--samples must be >= 1")
            config = replace(config, n_samples=args.samples)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        if args.bins is not None:
            if not args.bins > 0.0:
                raise ConfigError("--bins must be a positive bin width")
            config = replace(config, bins=replace(config.bins,
                                                  bin_width=args.bins,
                                                  n_bins=None))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG

    try:
        manifest = run_scenario(config, out_dir=args.out_dir)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return _EXIT_IO
    except (NonConvergenceError, BranchJumpError, ArithmeticError,
            ValueError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return _EXIT_COMPUTE
    for path, digest in manifest:
        print(f"wrote {path}  sha256={digest}")
    return 0


def _cmd_presets(args) -> int:
    if args.show is not None:
        if args.show not in PRESETS:
            print(f"error: unknown preset {args.show!r}; presets: "
                  f"{', '.join(preset_names())}", file=sys.stderr)
            return _EXIT_CONFIG
        sys.stdout.write(preset_text(args.show))
        return 0
    width = max(len(n) for n in preset_names())
    for name in preset_names():
        print(f"{name:<{width}}  {PRESETS[name].description}")
    return 0


def _cmd_stats(args) -> int:
    try:
        with open(args.samples_file, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return _EXIT_IO
    values = []
    try:
        for line in raw.splitlines():
            body = line.split("#", 1)[0]
            values.extend(float(tok)
                          for tok in body.replace(",", " ").split())
    except ValueError as exc:
        print(f"config error: samples file is not numeric: {exc}",
              file=sys.stderr)
        return _EXIT_CONFIG
    if not values:
        print("config error: samples file contains no values",
              file=sys.stderr)
        return _EXIT_CONFIG
    bins = HistogramSpec(bin_width=args.bins) if args.bins else None
    try:
        dist = summarize(np.asarray(values), bins=bins)
    except ValueError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return _EXIT_COMPUTE
    s = dist.stats
    print(f"n_samples={dist.n_samples}")
    for key, val in [("mean", s.mean), ("median", s.median), ("q1", s.q1),
                     ("q3", s.q3), ("min", s.minimum), ("max", s.maximum)]:
        print(f"{key}={_g(val)}")
        print(f"{key}_as={_g(to_attoseconds(val))}")
    for lvl, val in sorted(s.percentiles.items()):
        print(f"p{lvl}={_g(val)}")
        print(f"p{lvl}_as={_g(to_attoseconds(val))}")
    return 0


def _cmd_convert(args) -> int:
    if args.to == "as":
        print(_g(to_attoseconds(args.value)))
    else:
        print(_g(from_attoseconds(args.value)))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tunneltimes",
        description="Tunneling-time distributions from a quantum clock; "
                    "all quantities in Rydberg atomic units.")
    parser.add_argument("--version", action="version",
                        version=f"tunneltimes {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario from a config file "
                                       "or preset name")
    p_run.add_argument("target", help="config file path or preset name")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--samples", type=int, default=None)
    p_run.add_argument("--out-dir", default=".")
    p_run.add_argument("--bins", type=float, default=None,
                       help="histogram bin width in a.u.")
    p_run.set_defaults(func=_cmd_run)

    p_pre = sub.add_parser("presets", help="list built-in presets")
    p_pre.add_argument("--show", default=None, metavar="NAME",
                       help="print the config document of one preset")
    p_pre.set_defaults(func=_cmd_presets)

    p_stats = sub.add_parser("stats", help="summarize a text column of "
                                           "times (a.u.)")
    p_stats.add_argument("samples_file")
    p_stats.add_argument("--bins", type=float, default=None,
                         help="histogram bin width in a.u.")
    p_stats.set_defaults(func=_cmd_stats)

    p_conv = sub.add_parser("convert", help="convert a time value")
    p_conv.add_argument("value", type=float)
    p_conv.add_argument("--to", choices=("as", "au"), default="as",
                        help="'as': a.u. to attoseconds (default); "
                             "'au': attoseconds to a.u.")
    p_conv.set_defaults(func=_cmd_convert)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
