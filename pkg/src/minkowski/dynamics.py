"""Farey, tent and Gauss maps, Birkhoff sums and Stern-Brocot quotients."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .cf import CFSpec, DyadicRational, convergents, digit_sum, gauss_map
from .errors import DomainError, InsufficientDigits
from .question import q_eval
from .sternbrocot import _runs, _Walker, locate

__all__ = [
    "farey_map",
    "tent_map",
    "inverse_branches",
    "conjugacy_check",
    "farey_symbols",
    "Orbit",
    "orbit",
    "BirkhoffRecord",
    "birkhoff",
    "ell_n",
    "ell_series",
    "WindowStats",
    "window_stats",
    "log_int",
]

HALF = Fraction(1, 2)
Point = Union[Fraction, int, CFSpec]


def log_int(n: int) -> float:
    """Natural log of a positive integer of any size (one rounding)."""
    if n <= 0:
        raise DomainError("log of a non-positive integer")
    return math.log(n)


def _unit(x) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"expected a point of [0, 1], got {x}")
    return x


def farey_map(x: Point) -> Fraction | CFSpec:
    """``x/(1-x)`` on [0, 1/2] and ``(1-x)/x`` on [1/2, 1].

    On a :class:`CFSpec` the map acts on digits: ``[a_1, ...]`` goes to
    ``[a_1 - 1, ...]`` when ``a_1 >= 2`` and to ``[a_2, ...]`` when ``a_1 = 1``.
    """
    if isinstance(x, CFSpec):
        if x.is_rational:
            return farey_map(x.value())
        a1 = x.digit(1)
        if a1 >= 2:
            return CFSpec((a1 - 1,) + x.prefix[1:], x.tail) if x.prefix else _drop_first(x, a1 - 1)
        return x.shift(1)
    x = _unit(x)
    if x <= HALF:
        return x / (1 - x)
    return (1 - x) / x


def _drop_first(x: CFSpec, new_first: int) -> CFSpec:
    rest = x.shift(1)
    return CFSpec((new_first,) + rest.prefix, rest.tail)


def tent_map(y):
    """``2y`` on [0, 1/2] and ``2 - 2y`` on (1/2, 1]; keeps the input type."""
    if isinstance(y, DyadicRational):
        if not DyadicRational(0) <= y <= DyadicRational(1):
            raise DomainError(f"tent map needs 0 <= y <= 1, got {y}")
        doubled = DyadicRational(y.mantissa, y.exponent - 1) if y.exponent else y * 2
        return doubled if y <= DyadicRational(1, 1) else 2 - doubled
    y = _unit(y)
    return 2 * y if y <= HALF else 2 - 2 * y


def inverse_branches(x: Point) -> tuple[Fraction, Fraction]:
    """The two Farey preimages ``x/(x+1)`` and ``1/(x+1)``."""
    x = _unit(x)
    return x / (x + 1), 1 / (x + 1)


def conjugacy_check(x: Point) -> bool:
    """Exact test of ``T(Q(x)) == Q(F(x))``."""
    x = _unit(x)
    return tent_map(q_eval(x)) == q_eval(farey_map(x))


def farey_symbols(x: Point, steps: int) -> str:
    """Branch symbols of the Farey orbit: ``0`` for the left branch, ``1`` for the right.

    The orbit stops early if it reaches 0.
    """
    x = _unit(x)
    out = []
    for _ in range(steps):
        if x == 0:
            break
        out.append("0" if x <= HALF else "1")
        x = farey_map(x)
    return "".join(out)


# ---------------------------------------------------------------------------
# orbits


_MAPS: dict[str, Callable] = {
    "farey": farey_map,
    "tent": tent_map,
    "gauss": gauss_map,
}


@dataclass(frozen=True)
class Orbit:
    map_name: str
    initial: object
    points: tuple = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.points)


def orbit(map_name: str, x, steps: int) -> Orbit:
    """``x, f(x), ..., f^steps(x)`` computed exactly."""
    try:
        f = _MAPS[map_name]
    except KeyError:
        raise DomainError(f"unknown map {map_name!r}; choose from {sorted(_MAPS)}") from None
    if isinstance(x, CFSpec) and map_name == "tent":
        raise DomainError("the tent map acts on Q-values; give a rational or dyadic point")
    points = [x]
    for _ in range(steps):
        cur = points[-1]
        if isinstance(cur, CFSpec) and not cur.is_rational and not cur.has_digits(2):
            raise InsufficientDigits(f"{cur.describe()}: orbit leaves the digit table")
        points.append(f(cur))
    return Orbit(map_name, x, tuple(points))


# ---------------------------------------------------------------------------
# Birkhoff sums and Stern-Brocot quotients


@dataclass(frozen=True)
class BirkhoffRecord:
    """Birkhoff sums over the first ``n`` Gauss-orbit points.

    ``sum_I`` is the sum of ``log|G'|`` and ``sum_N`` the digit sum; ``ell``
    is the Stern-Brocot quotient at level ``sum_N``.
    """

    n: int
    sum_I: float
    sum_N: int
    ell: float
    sum_I_error: float = 0.0

    @property
    def ratio(self) -> float:
        return self.sum_I / self.sum_N


_LOOKAHEAD = 64


def _tail_value(x: CFSpec, n: int) -> tuple[float, float]:
    """Float enclosure midpoint and half-width of ``G^n(x) = [a_{n+1}, a_{n+2}, ...]``."""
    if x.is_rational and not x.has_digits(n + 1):
        return 0.0, 0.0
    digits = []
    i = n + 1
    while len(digits) < _LOOKAHEAD and x.has_digits(i):
        digits.append(x.digit(i))
        i += 1
    exact_end = x.is_rational and not x.has_digits(i)
    ends = (0.0,) if exact_end or len(digits) == _LOOKAHEAD else (0.0, 1.0)
    values = []
    for seed in ends:
        y = seed
        for a in reversed(digits):
            y = 1.0 / (a + y)
        values.append(y)
    lo, hi = min(values), max(values)
    return 0.5 * (lo + hi), 0.5 * (hi - lo)


def birkhoff(x: CFSpec, n: int, *, with_ell: bool = True) -> BirkhoffRecord:
    """Birkhoff sums of ``log|G'|`` and of the first digit along the Gauss orbit.

    The product of the remainders ``r_1 ... r_n`` equals ``q_n + q_{n-1} G^n(x)``,
    so the sum of ``log|G'|`` is ``2 log(q_n + q_{n-1} G^n(x))``: one big-integer
    log plus a ``log1p`` correction.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not x.has_digits(n):
        raise InsufficientDigits(f"{x.describe()} has fewer than {n} Gauss-orbit steps")
    triples = convergents(x, n)
    q_n = triples[-1].q
    q_prev = triples[-2].q if n >= 2 else 1
    y, err = _tail_value(x, n)
    ratio = q_prev / q_n if q_n < 2**1000 else math.exp(log_int(q_prev) - log_int(q_n))
    s_i = 2.0 * (log_int(q_n) + math.log1p(ratio * y))
    s_i_err = 2.0 * ratio * err
    a_sum = digit_sum(x, n)
    ell = float("nan")
    if with_ell:
        ell = ell_n(x, a_sum) if not x.is_rational else ell_n(x.value(), a_sum)
    return BirkhoffRecord(n, s_i, a_sum, ell, s_i_err)


def ell_n(x: Point, n: int) -> float:
    """``(1/n) log(1/lambda(T_n(x)))`` with ``lambda(T) = 1/(t_left t_right)``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    iv = locate(x, n)
    return log_int(iv.t_left * iv.t_right) / n


def ell_series(x: Point, n: int) -> list[float]:
    """``[l_1(x), ..., l_n(x)]`` from a single descent."""
    if n < 1:
        raise DomainError("n must be >= 1")
    w = _Walker()
    out = []
    for direction, m in _runs(x, n):
        for _ in range(m):
            if direction == "L":
                w.left_run(1)
            else:
                w.right_run(1)
            out.append(log_int(w.b * w.d) / w.level)
    return out


@dataclass(frozen=True)
class WindowStats:
    """Extremes and mean of a series over its trailing window.

    The minimum and maximum stand in for liminf and limsup; they are never
    reported as a limit.
    """

    start: int
    stop: int
    low: float
    high: float
    mean: float
    last: float


def window_stats(series, tail: float = 0.25) -> WindowStats:
    if not series:
        raise DomainError("empty series")
    if not 0 < tail <= 1:
        raise DomainError("tail fraction must lie in (0, 1]")
    n = len(series)
    start = max(0, n - max(1, int(round(tail * n))))
    window = list(series[start:])
    return WindowStats(start + 1, n, min(window), max(window), math.fsum(window) / len(window), window[-1])
