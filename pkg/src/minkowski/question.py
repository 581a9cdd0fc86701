"""Minkowski's question mark function Q.

On rationals Q takes exact dyadic values.  At irrational points only dyadic
enclosures are available: Q maps the level-N Stern-Brocot interval with index k
onto ``[k 2^-N, (k+1) 2^-N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Union

from .cf import CFSpec, DyadicRational, cf_expand
from .errors import DomainError
from .sternbrocot import SBInterval, _Walker, locate

__all__ = [
    "DyadicEnclosure",
    "q_eval",
    "q_recursion_step",
    "q_convergent_values",
    "q_enclose",
    "q_inverse",
    "mediant_identity_check",
]

ZERO = DyadicRational(0)
ONE = DyadicRational(1)


@dataclass(frozen=True)
class DyadicEnclosure:
    lower: DyadicRational
    upper: DyadicRational
    level: int

    def __post_init__(self) -> None:
        if self.upper - self.lower != DyadicRational(1, self.level):
            raise DomainError("enclosure width must be exactly 2^-level")

    @property
    def width(self) -> DyadicRational:
        return self.upper - self.lower

    @property
    def midpoint(self) -> DyadicRational:
        return (self.lower + self.upper).half()

    def contains(self, y: DyadicRational | Fraction) -> bool:
        return self.lower <= y <= self.upper

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"


def q_recursion_step(q_prev: DyadicRational, q_cur: DyadicRational, a_next: int, k: int) -> DyadicRational:
    """``Q(p_{k+1}/q_{k+1})`` from the two previous convergent values.

    The step moves from ``Q_{k-1}`` by ``(1 - 2^-a_{k+1}) |Q_k - Q_{k-1}|``,
    upwards for odd ``k`` and downwards for even ``k``.
    """
    if k < 1:
        raise DomainError("the recursion starts at k = 1")
    gap = abs(q_cur - q_prev)
    step = gap - gap * DyadicRational(1, a_next)
    return q_prev + step if k % 2 else q_prev - step


def q_convergent_values(digits) -> list[DyadicRational]:
    """``[Q(p_1/q_1), ..., Q(p_m/q_m)]`` for the given digits."""
    digits = list(digits)
    if not digits:
        return []
    values = [ZERO, DyadicRational(1, digits[0] - 1)]
    for k, a in enumerate(digits[1:], start=1):
        values.append(q_recursion_step(values[-2], values[-1], a, k))
    return values[1:]


def q_eval(x: Union[Fraction, int, CFSpec]) -> DyadicRational:
    """Exact value of Q at a rational point of [0, 1]."""
    if isinstance(x, CFSpec):
        x = x.value()
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"Q is defined on [0, 1], got {x}")
    if x == 0:
        return ZERO
    if x == 1:
        return ONE
    return q_convergent_values(cf_expand(x))[-1]


def q_enclose(x: Union[Fraction, CFSpec], level: int) -> DyadicEnclosure:
    """The dyadic interval ``Q(T_N(x))`` of width ``2^-N``.

    For every point of ``T_N(x)`` (closure included) the value of Q lies in it.
    """
    iv = locate(x, level)
    lower = DyadicRational(iv.index, level)
    return DyadicEnclosure(lower, lower + DyadicRational(1, level), level)


def q_inverse(y: Union[DyadicRational, Fraction]) -> Fraction:
    """The rational ``x`` with ``Q(x) = y``, for dyadic ``y`` in [0, 1]."""
    if not isinstance(y, DyadicRational):
        y = Fraction(y)
        if y.denominator & (y.denominator - 1):
            raise DomainError(f"{y} is not dyadic; only dyadic values have rational preimages")
        y = DyadicRational.from_fraction(y)
    if not ZERO <= y <= ONE:
        raise DomainError(f"Q takes values in [0, 1], got {y}")
    if y == ONE:
        return Fraction(1)
    if y == ZERO:
        return Fraction(0)
    # y = k / 2^e with k odd: the left endpoint of T_{e,k}
    w = _Walker()
    bits = format(y.mantissa, f"0{y.exponent}b")
    for bit, run in groupby(bits):
        m = len(list(run))
        if bit == "0":
            w.left_run(m)
        else:
            w.right_run(m)
    return Fraction(w.a, w.b)


def mediant_identity_check(iv: SBInterval) -> bool:
    """Q at the mediant is the mean of Q at the endpoints."""
    mid = q_eval(iv.mediant)
    return mid == (q_eval(iv.left) + q_eval(iv.right)).half()
