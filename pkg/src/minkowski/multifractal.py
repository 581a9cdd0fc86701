"""Stern-Brocot pressure, its Legendre transform and the dimension spectrum.

``L_n(t) = log sum_T lambda(T)^t`` over the level-n intervals, and the
pressure is the growth rate of ``L_n``.  It is estimated from the increments
``L_n - L_{n-1}`` with Aitken's delta-squared acceleration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import CapExceeded, DomainError
from .sternbrocot import Chunk, fold_level, frontier, locate, map_chunks, template

__all__ = [
    "Constants",
    "constants",
    "pressure_level",
    "level_sum_exact",
    "PressureEstimate",
    "pressure",
    "aitken",
    "golden_section_max",
    "LegendreResult",
    "legendre_hat",
    "SpectrumPoint",
    "dimension",
    "spectrum_table",
    "pressure_slope",
    "holder_regression",
    "PRESSURE_CAP",
    "T_MIN",
]

LOG2 = math.log(2.0)
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
PRESSURE_CAP = 30
LADDER_CAP = 24
DEFAULT_DEPTH = 22
T_MIN = -40.0


# ---------------------------------------------------------------------------
# closed-form constants


def _bisect(g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    g_lo = g(lo)
    if g_lo * g(hi) > 0:
        raise DomainError("bisection bracket does not change sign")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class Constants:
    two_log_golden: float  # maximal Stern-Brocot growth rate, attained by noble numbers
    holder_exponent: float  # log 2 / (2 log golden)
    digit_average_threshold: float  # 2 log2(golden), below which Q' = infinity
    rho: float  # (1 + rho)^(1/rho) = sqrt(2), above which Q' = 0
    h_top: float = LOG2

    def as_dict(self) -> dict:
        return {
            "two_log_golden": self.two_log_golden,
            "holder_exponent": self.holder_exponent,
            "digit_average_threshold": self.digit_average_threshold,
            "rho": self.rho,
            "h_top": self.h_top,
        }


@lru_cache(maxsize=1)
def constants() -> Constants:
    two_log_g = 2.0 * math.log(GOLDEN)
    rho = _bisect(lambda r: math.log1p(r) / r - 0.5 * LOG2, 1.0, 20.0, 1e-12)
    return Constants(two_log_g, LOG2 / two_log_g, 2.0 * math.log2(GOLDEN), rho)


# ---------------------------------------------------------------------------
# level sums


def level_sum_exact(t: int, n: int) -> Fraction:
    """``sum_T lambda(T)^t`` over level n as an exact rational, for integer ``t >= 0``."""
    if t < 0 or int(t) != t:
        raise DomainError("exact level sums need a non-negative integer exponent")
    t = int(t)
    return fold_level(n, lambda a, b: Fraction(1, (a * b) ** t), lambda x, y: x + y, cap=22)


def _log_products_chunk(chunk: Chunk) -> np.ndarray:
    logt = np.log(chunk.den.astype(np.float64))
    return logt[:-1] + logt[1:]


@lru_cache(maxsize=6)
def _half_level(n: int) -> np.ndarray:
    """``log(t_left t_right)`` over the left half of level n.

    Reflection x -> 1 - x preserves denominators, so the right half repeats
    these values.
    """
    if n == 0:
        return np.zeros(1)
    d = min(n - 1, 16)
    u, v = template(d)
    pieces = []
    for sl, tl, sr, tr in frontier(n - d):
        if 2 * sl >= tl:
            break  # reached x >= 1/2
        logt = np.log((u * tl + v * tr).astype(np.float64))
        pieces.append(logt[:-1] + logt[1:])
    out = np.concatenate(pieces)
    out.setflags(write=False)
    return out


def _logsumexp_merge(parts: Sequence[tuple[float, float]]) -> float:
    """Merge ``(max, sum of exp(a - max))`` partials in order."""
    top = max(m for m, _ in parts)
    return top + math.log(math.fsum(s * math.exp(m - top) for m, s in parts))


def pressure_level(t: float, n: int, *, workers: int = 1, cap: int = PRESSURE_CAP) -> float:
    """``L_n(t) = log sum_T (t_left t_right)^-t`` in the log domain."""
    if n < 0:
        raise DomainError("level must be non-negative")
    if n > cap:
        raise CapExceeded(f"level {n} exceeds the pressure cap {cap}")
    if t == 1:
        return 0.0  # the level partitions [0, 1]
    if t == 0:
        return n * LOG2
    if n == 0:
        return 0.0
    if n <= LADDER_CAP:
        a = -t * _half_level(n)
        top = float(a.max())
        return top + math.log(float(np.sum(np.exp(a - top)))) + LOG2

    def partial(chunk: Chunk) -> tuple[float, float]:
        a = -t * _log_products_chunk(chunk)
        top = float(a.max())
        return top, float(np.sum(np.exp(a - top)))

    parts = map_chunks(n, partial, workers=workers, chunk_depth=min(n, 18), cap=cap)
    return _logsumexp_merge(parts)


# ---------------------------------------------------------------------------
# limit extraction


def aitken(d0: float, d1: float, d2: float) -> float:
    """Aitken's delta-squared extrapolation of three successive terms."""
    denom = (d2 - d1) - (d1 - d0)
    if denom == 0.0 or abs(denom) < 1e-14 * max(1.0, abs(d2)):
        return d2
    return d2 - (d2 - d1) ** 2 / denom


@dataclass(frozen=True)
class PressureEstimate:
    t: float
    levels: tuple[int, ...]
    ladder: tuple[float, ...]  # L_n for each level
    value: float
    error: float
    converged: bool = True
    increments: tuple[float, ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "levels": list(self.levels),
            "L_n": list(self.ladder),
            "increments": list(self.increments),
            "P": self.value,
            "error": self.error,
            "converged": self.converged,
        }


def pressure(t: float, n_max: int = DEFAULT_DEPTH, *, workers: int = 1, tol: float = 1e-10) -> PressureEstimate:
    """Estimate ``P(t)`` from levels ``n_max - 4 .. n_max``.

    For ``t >= 1`` the pressure vanishes and 0 is returned without numerics.
    """
    if n_max > PRESSURE_CAP:
        raise CapExceeded(f"depth {n_max} exceeds the pressure cap {PRESSURE_CAP}")
    if t >= 1:
        return PressureEstimate(t, (n_max,), (0.0,), 0.0, 0.0, True, (0.0,))
    if n_max < 5:
        raise DomainError("pressure estimation needs n_max >= 5")
    levels = tuple(range(n_max - 4, n_max + 1))
    ladder = tuple(pressure_level(t, n, workers=workers) for n in levels)
    inc = [b - a for a, b in zip(ladder, ladder[1:])]
    acc_prev = aitken(inc[0], inc[1], inc[2])
    acc_last = aitken(inc[1], inc[2], inc[3])
    steps = [b - a for a, b in zip(inc, inc[1:])]
    slack = tol * max(1.0, abs(inc[-1]))
    # increments may alternate, but their changes must shrink
    mags = [abs(s) for s in steps]
    converged = mags[-1] <= slack or (mags[-1] < mags[-2] < mags[-3])
    return PressureEstimate(t, levels, ladder, acc_last, abs(acc_last - acc_prev), converged, tuple(inc))


# ---------------------------------------------------------------------------
# Legendre transform and spectrum


def golden_section_max(
    g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-9
) -> tuple[float, float]:
    """Maximise a unimodal ``g`` on ``[lo, hi]``; returns ``(argmax, max)``."""
    inv = 1.0 / GOLDEN
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol:
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - inv * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + inv * (b - a)
            gd = g(d)
    # compare the interior optimum with the end points so boundary maxima are seen
    best = max(((g(lo), lo), (gc, c), (gd, d), (g(hi), hi)), key=lambda p: p[0])
    return best[1], best[0]


@dataclass(frozen=True)
class LegendreResult:
    t_star: float
    value: float
    flags: tuple[str, ...] = ()


def legendre_hat(
    s: float,
    pressure_fn: Callable[[float], float] | None = None,
    *,
    t_min: float = T_MIN,
    t_max: float = 1.0,
    tol: float = 1e-9,
    depth: int = DEFAULT_DEPTH,
) -> LegendreResult:
    """``sup_t (s t - P(t))`` over ``[t_min, t_max]`` by golden-section search."""
    if pressure_fn is None:
        pressure_fn = _pressure_fn(depth)
    t_star, value = golden_section_max(lambda t: s * t - pressure_fn(t), t_min, t_max, tol)
    flags = []
    slack = max(10 * tol, 1e-6)
    if t_star - t_min <= slack:
        flags.append("boundary-tmin")
    if t_max - t_star <= slack:
        flags.append("boundary-tmax")
    return LegendreResult(t_star, value, tuple(flags))


@lru_cache(maxsize=4)
def _pressure_fn(depth: int) -> Callable[[float], float]:
    @lru_cache(maxsize=4096)
    def p(t: float) -> float:
        return pressure(t, depth).value

    return p


@dataclass(frozen=True)
class SpectrumPoint:
    s: float
    t_star: float
    legendre: float  # the transform evaluated at -s
    d: float
    flags: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {"s": self.s, "t_star": self.t_star, "legendre": self.legendre, "d": self.d, "flags": list(self.flags)}


def dimension(
    s: float,
    *,
    depth: int = DEFAULT_DEPTH,
    t_min: float = T_MIN,
    pressure_fn: Callable[[float], float] | None = None,
) -> SpectrumPoint:
    """``d(s) = -P^(-s)/s``, with ``d(0) = 1`` and ``d = 0`` off ``[0, 2 log golden)``."""
    upper = constants().two_log_golden
    if s == 0:
        return SpectrumPoint(0.0, 1.0, 0.0, 1.0, ("convention",))
    if s < 0 or s >= upper:
        return SpectrumPoint(s, float("nan"), float("nan"), 0.0, ("outside-support",))
    res = legendre_hat(-s, pressure_fn, t_min=t_min, depth=depth)
    d = -res.value / s
    return SpectrumPoint(s, res.t_star, res.value, min(1.0, max(0.0, d)), res.flags)


def spectrum_table(
    grid: Sequence[float],
    *,
    depth: int = DEFAULT_DEPTH,
    t_min: float = T_MIN,
) -> list[SpectrumPoint]:
    """``d`` on a grid of ``s`` values; points that break monotonicity are flagged."""
    fn = _pressure_fn(depth)
    points = [dimension(s, depth=depth, t_min=t_min, pressure_fn=fn) for s in grid]
    out = []
    prev = None
    for p in sorted(points, key=lambda q: q.s):
        if prev is not None and p.d > prev.d + 1e-9:
            p = SpectrumPoint(p.s, p.t_star, p.legendre, p.d, p.flags + ("non-monotone",))
        out.append(p)
        prev = p
    return out


def pressure_slope(t: float, *, h: float = 1e-2, depth: int = DEFAULT_DEPTH) -> float:
    """Central-difference derivative of the estimated pressure."""
    p = _pressure_fn(depth)
    return (p(t + h) - p(t - h)) / (2.0 * h)


def holder_regression(x, levels: Sequence[int]) -> float:
    """Least-squares slope of ``log nu_F(T_n(x))`` against ``log lambda(T_n(x))``."""
    log_nu = np.array([-n * LOG2 for n in levels])
    log_len = []
    for n in levels:
        iv = locate(x, n)
        log_len.append(-math.log(iv.t_left * iv.t_right))
    slope, _ = np.polyfit(np.array(log_len), log_nu, 1)
    return float(slope)
