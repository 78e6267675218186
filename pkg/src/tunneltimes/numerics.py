"""Self-contained numerical kernel.

Adaptive quadrature, grid bracket scanning, bracketed root finding and
Richardson-refined numerical differentiation.  Everything in here is a
pure function of its arguments (no module state), uses only the standard
library, and is shared by the physics modules so that tolerances are
controlled in one place.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, List

__all__ = [
    "Interval",
    "Bracket",
    "NonConvergenceError",
    "integrate",
    "find_brackets",
    "find_root",
    "derivative",
]


@dataclass(frozen=True)
class Interval:
    """Finite interval [lo, hi] with lo strictly below hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(
                f"interval endpoints must be finite, got [{self.lo}, {self.hi}]"
            )
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class Bracket:
    """Root bracket [lo, hi] with the function values at both ends.

    Either f_lo * f_hi < 0 strictly, or the bracket is degenerate:
    lo == hi sitting on an exact zero of f.  Degenerate brackets are what
    find_brackets emits when a grid node hits a zero exactly, and
    find_root returns their location unchanged.  Endpoints are stored
    directly (not as an Interval) so the degenerate case is representable.
    """

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if self.lo == self.hi:
            if self.f_lo != 0.0 or self.f_hi != 0.0:
                raise ValueError("width-zero bracket must sit on an exact zero of f")
            return
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo <= hi, got [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0.0:
            raise ValueError(
                f"bracket [{self.lo}, {self.hi}] has no sign change: "
                f"f_lo={self.f_lo}, f_hi={self.f_hi}"
            )

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi


class NonConvergenceError(RuntimeError):
    """An iterative routine exhausted its budget.

    Carries the best estimate reached so far and, for quadrature, the
    associated error bound, so callers can decide whether the partial
    result is still usable.
    """

    def __init__(self, message: str, estimate: float | None = None,
                 error_bound: float | None = None) -> None:
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
# Positive abscissae in decreasing order; the rule is symmetric.
_XGK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WGK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
# Gauss weights for the odd-indexed Kronrod abscissae plus the centre.
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod 7/15 panel: returns (kronrod, |kronrod - gauss|)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(mid)
    kronrod = _WGK[7] * fc
    gauss = _WG[3] * fc
    for i in range(7):
        dx = half * _XGK[i]
        fsum = f(mid - dx) + f(mid + dx)
        kronrod += _WGK[i] * fsum
        if i % 2 == 1:
            gauss += _WG[i // 2] * fsum
    kronrod *= half
    gauss *= half
    return kronrod, abs(kronrod - gauss)


def integrate(
    f: Callable[[float], float],
    interval: Interval,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
    max_subdivisions: int = 2000,
) -> float:
    """Adaptive quadrature of f over a finite interval.

    Globally adaptive bisection driven by the embedded 7/15 Gauss-Kronrod
    error estimate: the panel with the largest error is split until the
    summed error estimate drops below max(abs_tol, rel_tol * |I|).

    Raises NonConvergenceError (carrying the best estimate and its error
    bound) when the subdivision budget runs out first.
    """
    val, err = _gk15(f, interval.lo, interval.hi)
    # heap entries: (-error, sequence number, a, b, value, error)
    heap = [(-err, 0, interval.lo, interval.hi, val, err)]
    total_val, total_err = val, err
    count = 0
    while total_err > max(abs_tol, rel_tol * abs(total_val)):
        if count >= max_subdivisions:
            raise NonConvergenceError(
                f"quadrature did not converge after {max_subdivisions} "
                f"subdivisions: estimate={total_val!r}, error bound={total_err!r}",
                estimate=total_val,
                error_bound=total_err,
            )
        _, _, a, b, val, err = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        lval, lerr = _gk15(f, a, mid)
        rval, rerr = _gk15(f, mid, b)
        total_val += lval + rval - val
        total_err += lerr + rerr - err
        count += 1
        heapq.heappush(heap, (-lerr, 2 * count, a, mid, lval, lerr))
        heapq.heappush(heap, (-rerr, 2 * count + 1, mid, b, rval, rerr))
    return total_val


def find_brackets(
    f: Callable[[float], float],
    interval: Interval,
    n_grid: int,
) -> List[Bracket]:
    """Scan f on a uniform n_grid-point grid and collect root brackets.

    Every sign change between adjacent nodes yields one bracket; a node
    where f is exactly zero yields a degenerate width-zero bracket (its
    neighbours then carry no sign change of their own, so no root is
    reported twice).  Roots that keep f's sign (tangencies) and pairs of
    roots falling inside one grid cell are invisible at this resolution.
    """
    if n_grid < 2:
        raise ValueError(f"bracket scan needs at least 2 grid points, got {n_grid}")
    step = interval.width / (n_grid - 1)
    xs = [interval.lo + i * step for i in range(n_grid - 1)] + [interval.hi]
    fs = [f(x) for x in xs]
    for x, fx in zip(xs, fs):
        if math.isnan(fx):
            raise ValueError(f"bracket scan hit a NaN at x={x!r}")
    out: List[Bracket] = []
    for i in range(n_grid):
        if fs[i] == 0.0:
            out.append(Bracket(xs[i], xs[i], 0.0, 0.0))
        if i + 1 < n_grid and fs[i] * fs[i + 1] < 0.0:
            out.append(Bracket(xs[i], xs[i + 1], fs[i], fs[i + 1]))
    return out


def find_root(
    f: Callable[[float], float],
    bracket: Bracket,
    rel_tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Brent root refinement inside a sign-change bracket.

    Inverse-quadratic / secant steps with a guaranteed bisection
    fallback; the returned point confines the sign change to a width of
    at most rel_tol * max(1, |root|).  A degenerate bracket is returned
    unchanged.
    """
    if bracket.is_degenerate:
        return bracket.lo
    a, b = bracket.lo, bracket.hi
    fa, fb = bracket.f_lo, bracket.f_hi
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 0.5 * rel_tol * max(1.0, abs(b))
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise NonConvergenceError(
        f"root refinement did not converge after {max_iter} iterations "
        f"in [{bracket.lo}, {bracket.hi}]",
        estimate=b,
    )


def derivative(
    f: Callable[[float], float],
    x: float,
    scale: float = 1e-6,
) -> float:
    """Central difference with one Richardson extrapolation level.

    The step is scale * max(1, |x|); the h and h/2 central differences
    are combined as (4 D(h/2) - D(h)) / 3, which is exact for
    polynomials through degree four.  Non-finite samples raise.
    """
    h = scale * max(1.0, abs(x))
    fp, fm = f(x + h), f(x - h)
    fp2, fm2 = f(x + 0.5 * h), f(x - 0.5 * h)
    for v, dx in ((fp, h), (fm, -h), (fp2, 0.5 * h), (fm2, -0.5 * h)):
        if not math.isfinite(v):
            raise ValueError(f"derivative sample f({x + dx!r}) is not finite: {v!r}")
    d_h = (fp - fm) / (2.0 * h)
    d_h2 = (fp2 - fm2) / h
    return (4.0 * d_h2 - d_h) / 3.0
