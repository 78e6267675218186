"""From momentum densities to clock-time distributions.

A scenario is described by a normalized momentum density rho(k) and a
clock curve tau = t_c(k).  The induced time density is the
change-of-variables sum over the roots k_j of t_c(k) = tau,

    rho_t(tau) = sum_j rho(k_j) / |t_c'(k_j)|,

which diverges at critical values of the clock curve; the cumulative

    F(tau) = integral of rho(k) over {k : t_c(k) <= tau}

is finite everywhere and is the canonical object tested here.  Sampling
draws k from rho by inverse-CDF lookup and pushes it through the clock
curve, which reproduces F without ever touching the divergences.

Times are in Rydberg atomic units throughout; light-cone comparisons and
attosecond conversions come from the units module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from . import numerics
from .numerics import Bracket, Interval
from .units import ATTOSECONDS_PER_AU, C_RYDBERG, to_attoseconds

__all__ = [
    "SpectralDensity",
    "ClockCurve",
    "LightCone",
    "HistogramSpec",
    "SummaryStats",
    "TimeDistribution",
    "density_of_times",
    "cdf_of_times",
    "cdf_of_times_batch",
    "sample_times",
    "summarize",
    "clock_curve_extrema",
]

#: RNG algorithm used by sample_times; recorded in every TimeDistribution.
RNG_ALGORITHM = "numpy PCG64 (SeedSequence substreams)"

#: Fixed sampling chunk size; chunk layout depends only on n, never on
#: worker count, so parallel filling cannot change the stream.
_SAMPLE_CHUNK = 1 << 18

#: Refinement factor of the inverse-CDF table over the density grid.
_FINE_FACTOR = 16

#: Slopes below this are treated as critical points of the clock curve.
_SLOPE_FLOOR = 1e-12


@dataclass(frozen=True)
class SpectralDensity:
    """Normalized momentum density tabulated on a strictly increasing grid.

    The grid may be uniform or locally refined (extra points packed
    around narrow spectral peaks).  The trapezoid integral of the table
    is one (enforced within 1e-8).  norm_residual records the relative
    difference between the trapezoid norm and an independent quadrature
    of the continuous integrand; truncation_loss records probability
    lost outside the support (known for densities with an exact
    total-probability identity); quad_seeds are k values marking narrow
    features, offered as split points to later quadratures.

    A 16x cell-refined cumulative table is precomputed once and shared
    by the deterministic CDF and the sampler, so both describe the
    identical distribution.
    """

    grid: np.ndarray
    density: np.ndarray
    support: Interval
    norm_residual: float = 0.0
    truncation_loss: float = 0.0
    quad_seeds: tuple = ()
    _fine_k: np.ndarray = field(init=False, repr=False, compare=False)
    _fine_cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        density = np.asarray(self.density, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", density)
        if grid.ndim != 1 or grid.shape != density.shape or grid.size < 2:
            raise ValueError("grid and density must be equal-length 1-d arrays")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if np.any(density < 0.0) or not np.all(np.isfinite(density)):
            raise ValueError("density values must be finite and non-negative")
        total = float(np.trapezoid(density, grid))
        if abs(total - 1.0) > 1e-8:
            raise ValueError(f"density table must integrate to 1, got {total!r}")
        # refine each cell, not the span, so clustered grids keep their
        # local resolution in the shared cumulative table
        steps = np.arange(_FINE_FACTOR) / _FINE_FACTOR
        fine_k = (grid[:-1, None] + np.diff(grid)[:, None] * steps).ravel()
        fine_k = np.append(fine_k, grid[-1])
        fine_rho = np.interp(fine_k, grid, density)
        seg = 0.5 * np.diff(fine_k) * (fine_rho[1:] + fine_rho[:-1])
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        cum /= cum[-1]
        object.__setattr__(self, "_fine_k", fine_k)
        object.__setattr__(self, "_fine_cum", cum)

    def cumulative(self, k) -> np.ndarray | float:
        """P(wave number <= k), from the shared refined table."""
        out = np.interp(k, self._fine_k, self._fine_cum, left=0.0, right=1.0)
        return float(out) if np.ndim(k) == 0 else out

    def weight_above(self, k: float) -> float:
        """Probability carried by wave numbers above k."""
        return 1.0 - float(self.cumulative(k))

    def interp(self, k) -> np.ndarray | float:
        """Linear interpolation of the density table (zero outside)."""
        out = np.interp(k, self.grid, self.density, left=0.0, right=0.0)
        return float(out) if np.ndim(k) == 0 else out


@dataclass(frozen=True)
class ClockCurve:
    """Clock time as a function of wave number, with a cached table.

    evaluator maps k (scalar or array) to tau; the cached table holds its
    values on a fixed grid and is used to bracket roots of
    t_c(k) = tau.  derivative_scale is the step scale for numerical
    slopes of the curve: 1e-6 for closed-form curves, 1e-5 for curves
    built on matching conditions, whose evaluation noise is larger.
    """

    evaluator: Callable
    k_table: np.ndarray
    tau_table: np.ndarray
    derivative_scale: float = 1e-6

    @classmethod
    def build(
        cls,
        evaluator: Callable,
        grid: np.ndarray,
        derivative_scale: float = 1e-6,
    ) -> "ClockCurve":
        grid = np.asarray(grid, dtype=float)
        taus = _eval_clock(evaluator, grid)
        return cls(evaluator=evaluator, k_table=grid, tau_table=taus,
                   derivative_scale=derivative_scale)

    def __call__(self, k):
        return self.evaluator(k)


def _eval_clock(evaluator: Callable, k: np.ndarray) -> np.ndarray:
    """Evaluate a clock callable on an array, tolerating scalar-only ones."""
    try:
        out = np.asarray(evaluator(k), dtype=float)
        if out.shape == k.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(evaluator(float(kk))) for kk in k])


@dataclass(frozen=True)
class LightCone:
    """Light crossing time of the barrier region in Rydberg a.u."""

    barrier_width: float
    c_ryd: float = C_RYDBERG
    light_time: float = field(init=False)

    def __post_init__(self) -> None:
        if not self.barrier_width > 0.0:
            raise ValueError(f"barrier width must be > 0, got {self.barrier_width}")
        object.__setattr__(self, "light_time", self.barrier_width / self.c_ryd)


@dataclass(frozen=True)
class HistogramSpec:
    """Uniform histogram layout.

    Either a bin width (edges snap to multiples of it, covering the
    sample range or the explicit [lo, hi]) or a fixed bin count over the
    sample range.  Defaults to the 0.0031 a.u. width used for the
    narrow time histograms.

    An explicit [lo, hi] window may cut off part of the sample range (a
    close view); samples outside it are tallied as underflow/overflow
    rather than silently dropped, so the bin counts plus the two tallies
    always account for every sample.
    """

    bin_width: float | None = 0.0031
    n_bins: int | None = None
    lo: float | None = None
    hi: float | None = None

    MAX_BINS = 5_000_000

    def edges(self, samples: np.ndarray) -> np.ndarray:
        lo = float(np.min(samples)) if self.lo is None else self.lo
        hi = float(np.max(samples)) if self.hi is None else self.hi
        if self.n_bins is not None:
            if self.n_bins < 1:
                raise ValueError("n_bins must be >= 1")
            if hi <= lo:
                hi = lo + 1.0
            return np.linspace(lo, hi, self.n_bins + 1)
        if self.bin_width is None or not self.bin_width > 0.0:
            raise ValueError("histogram needs a positive bin_width or n_bins")
        w = self.bin_width
        first = math.floor(lo / w)
        last = math.floor(hi / w) + 1
        count = last - first
        if count > self.MAX_BINS:
            raise ValueError(
                f"bin width {w} over [{lo}, {hi}] would produce {count} bins; "
                f"pass a wider bin_width or an explicit range"
            )
        return (first + np.arange(count + 1)) * w


@dataclass(frozen=True)
class SummaryStats:
    """Percentile summary of a sample of clock times (Rydberg a.u.)."""

    mean: float
    median: float
    q1: float
    q3: float
    minimum: float
    maximum: float
    percentiles: Dict[int, float]

    #: Percentile levels reported: 1, 5, 10, ..., 95, 99.
    LEVELS = (1, *range(5, 100, 5), 99)


@dataclass(frozen=True)
class TimeDistribution:
    """Monte Carlo sample of clock times plus its summaries.

    superluminal_prob is the sampled fraction of times below the light
    crossing time; superluminal_prob_exact is the deterministic CDF at
    the light time when the density and clock curve were supplied.  Both
    are None when no light cone is attached.
    """

    samples: np.ndarray
    bin_edges: np.ndarray
    counts: np.ndarray
    stats: SummaryStats
    seed: int | None
    n_samples: int
    rng_algorithm: str = RNG_ALGORITHM
    light_time: float | None = None
    superluminal_prob: float | None = None
    superluminal_prob_exact: float | None = None
    n_underflow: int = 0
    n_overflow: int = 0

    def __post_init__(self) -> None:
        tally = int(self.counts.sum()) + self.n_underflow + self.n_overflow
        if tally != self.n_samples:
            raise ValueError("histogram counts must sum to the sample count")


# ---------------------------------------------------------------------------
# root location on the clock curve
# ---------------------------------------------------------------------------

def _scalar_eval(evaluator: Callable, k: float) -> float:
    return float(np.asarray(evaluator(k)).reshape(()))

def _clock_roots(tau: float, rho: SpectralDensity, clock: ClockCurve) -> List[float]:
    """All solutions of t_c(k) = tau on the support, via the cached table.

    Sign changes between adjacent table nodes are refined with Brent's
    method on the live evaluator; exact hits on table nodes come back as
    degenerate brackets.  Structure finer than the table spacing is
    invisible, as for any grid scan.
    """
    g = clock.tau_table - tau
    roots: List[float] = []
    zero_nodes = np.flatnonzero(g == 0.0)
    for i in zero_nodes:
        roots.append(float(clock.k_table[i]))
    sign_change = np.flatnonzero(g[:-1] * g[1:] < 0.0)
    for i in sign_change:
        lo, hi = float(clock.k_table[i]), float(clock.k_table[i + 1])
        br = Bracket(lo, hi, float(g[i]), float(g[i + 1]))
        roots.append(numerics.find_root(
            lambda kk: _scalar_eval(clock.evaluator, kk) - tau, br))
    roots.sort()
    return roots


def density_of_times(tau: float, rho: SpectralDensity, clock: ClockCurve) -> float:
    """Clock-time density rho_t(tau) by the change-of-variables sum.

    Returns 0.0 when t_c(k) = tau has no solution on the support and
    math.inf when tau is a critical value (some root has
    |t_c'| < 1e-12); the infinity is an in-memory sentinel only and is
    never written to output files.
    """
    roots = _clock_roots(tau, rho, clock)
    if not roots:
        return 0.0
    total = 0.0
    for r in roots:
        slope = numerics.derivative(
            lambda kk: _scalar_eval(clock.evaluator, kk), r,
            scale=clock.derivative_scale)
        if abs(slope) < _SLOPE_FLOOR:
            return math.inf
        total += float(rho.interp(r)) / abs(slope)
    return total


def cdf_of_times(tau: float, rho: SpectralDensity, clock: ClockCurve) -> float:
    """F(tau): probability that the clock time does not exceed tau.

    The support is cut at the roots of t_c(k) = tau and each piece is
    kept if the clock curve lies at or below tau at its midpoint; kept
    pieces contribute their rho-measure from the shared cumulative
    table.  Monotone in tau and finite even at critical values.
    """
    roots = _clock_roots(tau, rho, clock)
    cuts = [rho.support.lo, *roots, rho.support.hi]
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi <= lo:
            continue
        mid = 0.5 * (lo + hi)
        if _scalar_eval(clock.evaluator, mid) <= tau:
            total += float(rho.cumulative(hi)) - float(rho.cumulative(lo))
    return min(1.0, max(0.0, total))


def cdf_of_times_batch(taus, rho: SpectralDensity, clock: ClockCurve) -> np.ndarray:
    """Vectorized F(tau) on an array of times.

    Same slicing construction as cdf_of_times, but all brackets for a
    block of tau values are refined together by vectorized bisection on
    the clock evaluator (55 halvings of a table cell, well below any
    tolerance of interest).  Agrees with the scalar routine to the
    bisection width; a unit test pins the two together.
    """
    taus = np.asarray(taus, dtype=float)
    out = np.empty(taus.shape, dtype=float)
    flat = taus.reshape(-1)
    res = out.reshape(-1)
    kt, tt = clock.k_table, clock.tau_table
    block = 256
    for start in range(0, flat.size, block):
        tb = flat[start:start + block]
        g = tt[None, :] - tb[:, None]
        row, col = np.nonzero(g[:, :-1] * g[:, 1:] < 0.0)
        lo, hi = kt[col].copy(), kt[col + 1].copy()
        glo = g[row, col].copy()
        for _ in range(55):
            mid = 0.5 * (lo + hi)
            gm = _eval_clock(clock.evaluator, mid) - tb[row]
            # root in the left half when the sign change (or an exact
            # zero) falls between glo and gm; glo itself is never zero
            left = glo * gm <= 0.0
            hi = np.where(left, mid, hi)
            lo = np.where(left, lo, mid)
            glo = np.where(left, glo, gm)
        root = 0.5 * (lo + hi)
        for j, tau in enumerate(tb):
            mask = row == j
            nodes = np.sort(root[mask])
            exact = kt[g[j] == 0.0]
            if exact.size:
                nodes = np.sort(np.concatenate([nodes, exact]))
            cuts = np.concatenate(([rho.support.lo], nodes, [rho.support.hi]))
            mids = 0.5 * (cuts[:-1] + cuts[1:])
            inside = _eval_clock(clock.evaluator, mids) <= tau
            cum = rho.cumulative(cuts)
            res[start + j] = min(1.0, max(0.0, float(
                np.sum((cum[1:] - cum[:-1])[inside]))))
    return out


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _draw_uniforms(n: int, seed: int) -> np.ndarray:
    """n uniforms from per-chunk PCG64 substreams of the master seed.

    Chunks are a fixed 2^18 draws each and are concatenated in chunk
    order, so the result is bit-identical no matter how many workers
    would fill them.
    """
    n_chunks = max(1, (n + _SAMPLE_CHUNK - 1) // _SAMPLE_CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    parts = []
    remaining = n
    for child in children:
        take = min(_SAMPLE_CHUNK, remaining)
        parts.append(np.random.Generator(np.random.PCG64(child)).random(take))
        remaining -= take
    return np.concatenate(parts)


def sample_times(
    rho: SpectralDensity,
    clock: ClockCurve,
    n: int,
    seed: int,
    bins: HistogramSpec | None = None,
    light: LightCone | None = None,
) -> TimeDistribution:
    """Draw n clock times: k from rho by inverse CDF, then tau = t_c(k).

    Deterministic given (n, seed): the inverse-CDF lookup runs on the
    density's shared 16x-refined cumulative table and the uniforms come
    from per-chunk substreams of the master seed.  Returns the samples
    with histogram and summary statistics attached.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    u = _draw_uniforms(n, seed)
    k = np.interp(u, rho._fine_cum, rho._fine_k)
    taus = _eval_clock(clock.evaluator, k)
    return summarize(taus, light=light, bins=bins, rho=rho, clock=clock, seed=seed)


def summarize(
    samples,
    light: LightCone | None = None,
    bins: HistogramSpec | None = None,
    rho: SpectralDensity | None = None,
    clock: ClockCurve | None = None,
    seed: int | None = None,
) -> TimeDistribution:
    """Histogram and percentile summary of a sample of clock times.

    With a light cone attached the sampled superluminal fraction
    P(tau < light_time) is reported; if the density and clock curve are
    also supplied, the exact value from the deterministic CDF is
    reported alongside it.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or samples.size == 0:
        raise ValueError("summarize needs a non-empty 1-d sample array")
    bins = bins or HistogramSpec()
    edges = bins.edges(samples)
    counts, _ = np.histogram(samples, bins=edges)
    n_under = int(np.count_nonzero(samples < edges[0]))
    n_over = int(samples.size - counts.sum() - n_under)
    levels = list(SummaryStats.LEVELS)
    pct = np.percentile(samples, levels)
    stats = SummaryStats(
        mean=float(np.mean(samples)),
        median=float(np.median(samples)),
        q1=float(pct[levels.index(25)]),
        q3=float(pct[levels.index(75)]),
        minimum=float(np.min(samples)),
        maximum=float(np.max(samples)),
        percentiles={lvl: float(v) for lvl, v in zip(levels, pct)},
    )
    light_time = None
    p_super = None
    p_exact = None
    if light is not None:
        light_time = light.light_time
        p_super = float(np.mean(samples < light_time))
        if rho is not None and clock is not None:
            p_exact = cdf_of_times(light_time, rho, clock)
    return TimeDistribution(
        samples=samples,
        bin_edges=edges,
        counts=counts,
        stats=stats,
        seed=seed,
        n_samples=int(samples.size),
        light_time=light_time,
        superluminal_prob=p_super,
        superluminal_prob_exact=p_exact,
        n_underflow=n_under,
        n_overflow=n_over,
    )


def clock_curve_extrema(
    clock: ClockCurve,
    interval: Interval | None = None,
    n_grid: int = 2048,
) -> Tuple[List[Tuple[float, float]], List[Tuple[float, float]]]:
    """Interior local minima and maxima of the clock curve.

    Scans tau on a uniform grid over the interval (default: the cached
    table range), then polishes each discrete extremum with Brent's
    method on the numerical derivative.  Returns (minima, maxima) as
    lists of (k, tau) pairs.
    """
    if interval is None:
        interval = Interval(float(clock.k_table[0]), float(clock.k_table[-1]))
    ks = np.linspace(interval.lo, interval.hi, n_grid)
    taus = _eval_clock(clock.evaluator, ks)
    d = np.diff(taus)

    def slope(kk: float) -> float:
        return numerics.derivative(
            lambda x: _scalar_eval(clock.evaluator, x), kk,
            scale=clock.derivative_scale)

    minima: List[Tuple[float, float]] = []
    maxima: List[Tuple[float, float]] = []
    for i in range(1, n_grid - 1):
        falling, rising = d[i - 1] < 0.0, d[i] > 0.0
        if not (falling == rising):
            continue
        s_lo, s_hi = slope(float(ks[i - 1])), slope(float(ks[i + 1]))
        if s_lo * s_hi < 0.0:
            k_star = numerics.find_root(
                slope, Bracket(float(ks[i - 1]), float(ks[i + 1]), s_lo, s_hi),
                rel_tol=1e-10)
        else:
            k_star = float(ks[i])
        pair = (k_star, _scalar_eval(clock.evaluator, k_star))
        (minima if rising else maxima).append(pair)
    return minima, maxima
