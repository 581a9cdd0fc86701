"""The measures nu_F (mass 2^-n per level-n interval), m_G (Gauss) and Lebesgue.

Integrals against Q are Riemann-Stieltjes sums over Stern-Brocot intervals:
every level-n interval carries nu_F-mass exactly ``2**-n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple, Union

import numpy as np

from .cf import CFSpec, DyadicRational, convergents, digit_sum
from .errors import CapExceeded, DomainError
from .question import q_eval
from .sternbrocot import Chunk, locate, map_chunks

__all__ = [
    "QuadratureResult",
    "ExponentRatio",
    "nu_F",
    "delta_gauss",
    "stieltjes_vs_Q",
    "expectation_delta_gauss",
    "chi_nu_F",
    "dim_nu_F",
    "kinney_dimension",
    "E_mG_Q",
    "quotient_B",
    "quotient_B_direct",
    "nu_over_lambda",
    "integrals",
    "QUADRATURE_CAP",
]

LOG2 = math.log(2.0)
QUADRATURE_CAP = 30
DEFAULT_DEPTH = 22


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    depth: int
    error_bound: float
    previous: float = float("nan")


class ExponentRatio(NamedTuple):
    """The ratio ``numerator / 2**exponent``, kept exact."""

    numerator: int
    exponent: int
    log_ratio: float

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)


def nu_F(a, b) -> DyadicRational:
    """``nu_F([a, b)) = Q(b) - Q(a)``."""
    a, b = Fraction(a), Fraction(b)
    if not 0 <= a <= b <= 1:
        raise DomainError(f"need 0 <= a <= b <= 1, got [{a}, {b})")
    return q_eval(b) - q_eval(a)


def delta_gauss(x) -> float:
    """Distribution function ``log(1+x)/log 2`` of the Gauss measure."""
    if isinstance(x, np.ndarray):
        return np.log1p(x) / LOG2
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"delta_gauss needs 0 <= x <= 1, got {x}")
    return math.log1p(float(x)) / LOG2


def _check_depth(n: int, cap: int) -> None:
    if n < 1:
        raise DomainError("quadrature depth must be >= 1")
    if n > cap:
        raise CapExceeded(f"depth {n} exceeds the quadrature cap {cap}")


def _nodes(points: np.ndarray, rule: str) -> np.ndarray:
    if rule == "midpoint":
        return 0.5 * (points[:-1] + points[1:])
    if rule == "left":
        return points[:-1]
    if rule == "right":
        return points[1:]
    raise DomainError(f"unknown rule {rule!r}")


def stieltjes_vs_Q(
    f: Callable[[np.ndarray], np.ndarray],
    depth: int,
    *,
    rule: str = "midpoint",
    workers: int = 1,
    cap: int = QUADRATURE_CAP,
) -> QuadratureResult:
    """``int f dQ`` as ``2^-n * sum f(xi_T)`` over the level-n intervals.

    ``f`` must accept and return numpy arrays.  The level n-1 sum is taken in
    the same pass; ``error_bound`` is the difference of the two levels.
    """
    _check_depth(depth, cap)

    def partial(chunk: Chunk) -> tuple[float, float]:
        x = chunk.num / chunk.den
        fine = float(np.sum(f(_nodes(x, rule))))
        coarse = float(np.sum(f(_nodes(x[::2], rule))))
        return fine, coarse

    parts = map_chunks(depth, partial, workers=workers, chunk_depth=min(depth, 16), cap=cap)
    fine = math.ldexp(math.fsum(p[0] for p in parts), -depth)
    coarse = math.ldexp(math.fsum(p[1] for p in parts), 1 - depth)
    return QuadratureResult(fine, depth, abs(fine - coarse), coarse)


@lru_cache(maxsize=16)
def expectation_delta_gauss(depth: int = DEFAULT_DEPTH, workers: int = 1) -> QuadratureResult:
    """``E_{nu_F}(log2(1+x))``."""
    return stieltjes_vs_Q(delta_gauss, depth, workers=workers)


def chi_nu_F(depth: int = DEFAULT_DEPTH, workers: int = 1) -> float:
    """Lyapunov exponent of the Farey map under nu_F: ``int log|F'| dnu_F``."""
    return 2.0 * LOG2 * expectation_delta_gauss(depth, workers).value


def dim_nu_F(depth: int = DEFAULT_DEPTH, workers: int = 1) -> float:
    """``log 2 / chi``."""
    return LOG2 / chi_nu_F(depth, workers)


def kinney_dimension(depth: int = DEFAULT_DEPTH, workers: int = 1) -> float:
    """``(2 int log2(1+x) dQ)^-1``; algebraically the same number as :func:`dim_nu_F`."""
    return 1.0 / (2.0 * expectation_delta_gauss(depth, workers).value)


@lru_cache(maxsize=16)
def E_mG_Q(depth: int = DEFAULT_DEPTH, workers: int = 1) -> QuadratureResult:
    """``int Q dm_G`` bracketed by dyadic steps.

    On the level-n interval with index k, Q ranges over ``[k, k+1] * 2^-n``.
    Weighting the centre ``(k + 1/2) 2^-n`` by the Gauss mass of the interval
    gives an estimate within ``2^-(n+1)`` of the integral.  The Gauss mass is
    ``log1p(1 / (t_r (t_l + s_l))) / log 2``, which avoids cancellation.
    """
    _check_depth(depth, QUADRATURE_CAP)

    def partial(chunk: Chunk) -> float:
        s, t = chunk.num, chunk.den
        mass = np.log1p(1.0 / (t[1:].astype(np.float64) * (t[:-1] + s[:-1]).astype(np.float64)))
        k = chunk.start + np.arange(len(mass), dtype=np.float64) + 0.5
        return float(np.dot(k, mass))

    parts = map_chunks(depth, partial, workers=workers, chunk_depth=min(depth, 16))
    value = math.ldexp(math.fsum(parts), -depth) / LOG2
    return QuadratureResult(value, depth, math.ldexp(1.0, -depth - 1))


# ---------------------------------------------------------------------------
# derivative diagnostics


def quotient_B(x: CFSpec, k: int) -> ExponentRatio:
    """Ratio of nu_F to Lebesgue measure between the convergents ``k`` and ``k+1``.

    Equals ``2 q_k q_{k+1} / 2^(a_1 + ... + a_{k+1})``.
    """
    if k < 0:
        raise DomainError("k must be >= 0")
    triples = convergents(x, k + 1)
    q_next = triples[-1].q
    q_k = triples[-2].q if k >= 1 else 1
    num = 2 * q_k * q_next
    exponent = digit_sum(x, k + 1)
    return ExponentRatio(num, exponent, math.log(num) - exponent * LOG2)


def quotient_B_direct(x: CFSpec, k: int) -> Fraction:
    """The same ratio measured directly with Q, as an exact rational."""
    if k < 0:
        raise DomainError("k must be >= 0")
    triples = convergents(x, k + 1)
    here = triples[-2].value if k >= 1 else Fraction(0)
    there = triples[-1].value
    dq = abs((q_eval(there) - q_eval(here)).to_fraction())
    return dq / abs(there - here)


def nu_over_lambda(x: Union[Fraction, CFSpec], n: int) -> ExponentRatio:
    """``nu_F(T_n(x)) / lambda(T_n(x)) = t_left t_right / 2^n``."""
    iv = locate(x, n)
    prod = iv.t_left * iv.t_right
    return ExponentRatio(prod, n, math.log(prod) - n * LOG2)


def integrals(depth: int = DEFAULT_DEPTH, workers: int = 1) -> dict:
    """The expectations, Lyapunov exponent and dimension as a JSON-ready dict."""
    e_delta = expectation_delta_gauss(depth, workers)
    e_q = E_mG_Q(depth, workers)
    chi = 2.0 * LOG2 * e_delta.value
    return {
        "depth": depth,
        "E_nuF_deltaG": e_delta.value,
        "E_mG_Q": e_q.value,
        "chi": chi,
        "dim_nuF": LOG2 / chi,
        "kinney_dim": 1.0 / (2.0 * e_delta.value),
        "identity_residual": e_q.value + e_delta.value - 1.0,
        "error_bounds": {
            "E_nuF_deltaG": e_delta.error_bound,
            "E_mG_Q": e_q.error_bound,
            "chi": 2.0 * LOG2 * e_delta.error_bound,
            "dim_nuF": LOG2 / chi**2 * 2.0 * LOG2 * e_delta.error_bound,
        },
    }
