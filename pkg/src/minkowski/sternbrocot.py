"""Stern-Brocot sequences and intervals of the unit interval.

Level ``n`` splits [0, 1] into ``2**n`` half-open intervals ``[s_k/t_k,
s_{k+1}/t_{k+1})`` by repeated mediant insertion.  Two ways of walking a level
are offered: an exact integer fold (:func:`fold_level`) and a numpy chunk
engine (:func:`iter_chunks`) used by the pressure and quadrature code.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, NamedTuple, TypeVar, Union

import numpy as np

from .cf import CFSpec
from .errors import CapExceeded, DomainError, InsufficientDigits

__all__ = [
    "SBInterval",
    "DenominatorPair",
    "sb_sequence",
    "sb_children",
    "root_interval",
    "locate",
    "descent_path",
    "type_change",
    "frontier",
    "fold_level",
    "template",
    "iter_chunks",
    "map_chunks",
    "SEQUENCE_CAP",
    "FOLD_CAP",
]

SEQUENCE_CAP = 20
FOLD_CAP = 34
INT64_CAP = 44  # Fib(46)**2 still fits in a signed 64-bit product

Point = Union[Fraction, int, CFSpec]
T = TypeVar("T")


class SBInterval(NamedTuple):
    """The interval ``T_{n,k} = [left, right)``."""

    level: int
    index: int
    left: Fraction
    right: Fraction

    @property
    def t_left(self) -> int:
        return self.left.denominator

    @property
    def t_right(self) -> int:
        return self.right.denominator

    @property
    def length(self) -> Fraction:
        """Lebesgue measure ``1 / (t_left * t_right)``."""
        return Fraction(1, self.t_left * self.t_right)

    @property
    def mediant(self) -> Fraction:
        return Fraction(self.left.numerator + self.right.numerator, self.t_left + self.t_right)

    def determinant(self) -> int:
        return self.right.numerator * self.t_left - self.left.numerator * self.t_right

    def contains(self, x: Fraction) -> bool:
        return self.left <= x < self.right


class DenominatorPair(NamedTuple):
    t_left: int
    t_right: int

    @property
    def product(self) -> int:
        return self.t_left * self.t_right


def root_interval() -> SBInterval:
    return SBInterval(0, 0, Fraction(0), Fraction(1))


def sb_sequence(n: int, cap: int = SEQUENCE_CAP) -> list[Fraction]:
    """The ``2**n + 1`` level-n Stern-Brocot rationals in increasing order."""
    if n < 0:
        raise DomainError("level must be non-negative")
    if n > cap:
        raise CapExceeded(f"level {n} exceeds the sequence cap {cap}")
    seq = [(0, 1), (1, 1)]
    for _ in range(n):
        nxt = []
        for (a, b), (c, d) in zip(seq, seq[1:]):
            nxt.append((a, b))
            nxt.append((a + c, b + d))
        nxt.append(seq[-1])
        seq = nxt
    return [Fraction(p, q) for p, q in seq]


def sb_children(iv: SBInterval) -> tuple[SBInterval, SBInterval]:
    mid = iv.mediant
    n, k = iv.level + 1, 2 * iv.index
    return SBInterval(n, k, iv.left, mid), SBInterval(n, k + 1, mid, iv.right)


# ---------------------------------------------------------------------------
# descent


class _Walker:
    """Mutable descent state ``[a/b, c/d)`` with dyadic index."""

    __slots__ = ("a", "b", "c", "d", "index", "level")

    def __init__(self) -> None:
        self.a, self.b, self.c, self.d = 0, 1, 1, 1
        self.index = 0
        self.level = 0

    def left_run(self, m: int) -> None:
        self.c += m * self.a
        self.d += m * self.b
        self.index <<= m
        self.level += m

    def right_run(self, m: int) -> None:
        self.a += m * self.c
        self.b += m * self.d
        self.index = ((self.index + 1) << m) - 1
        self.level += m

    def interval(self) -> SBInterval:
        return SBInterval(self.level, self.index, Fraction(self.a, self.b), Fraction(self.c, self.d))


def _runs_rational(x: Fraction, n: int) -> Iterator[tuple[str, int]]:
    """Direction runs of the descent of a rational, computed in O(1) per run."""
    p, q = x.numerator, x.denominator
    w = _Walker()
    remaining = n
    while remaining > 0:
        below = p * w.b - q * w.a  # q*b*(x - a/b) >= 0
        above = q * w.c - p * w.d  # q*d*(c/d - x) > 0
        mediant_num, mediant_den = w.a + w.c, w.b + w.d
        if p * mediant_den < q * mediant_num:
            m = remaining if below == 0 else min(remaining, (above - 1) // below)
            w.left_run(m)
            yield "L", m
        else:
            m = min(remaining, below // above)
            w.right_run(m)
            yield "R", m
        remaining -= m


def _runs_cf(x: CFSpec, n: int) -> Iterator[tuple[str, int]]:
    """Runs ``L^{a_1-1} R^{a_2} L^{a_3} ...`` of an irrational point, truncated to ``n`` steps."""
    remaining = n
    i = 1
    while remaining > 0:
        direction = "L" if i % 2 else "R"
        if not x.has_digits(i):
            # a_i >= 1 whatever it is, so one more step is still decided
            if remaining == 1:
                yield direction, 1
                return
            raise InsufficientDigits(
                f"{x.describe()}: level {n} needs more digits than the tail provides"
            )
        m = min(x.digit(i) - (1 if i == 1 else 0), remaining)
        if m:
            yield direction, m
        remaining -= m
        i += 1


def _runs(x: Point, n: int) -> Iterator[tuple[str, int]]:
    if isinstance(x, CFSpec):
        if x.is_rational:
            yield from _runs_rational(x.value(), n)
        else:
            yield from _runs_cf(x, n)
        return
    x = Fraction(x)
    if x == 1:
        raise DomainError("x = 1 lies in no half-open Stern-Brocot interval")
    if not 0 <= x < 1:
        raise DomainError(f"locate needs 0 <= x < 1, got {x}")
    yield from _runs_rational(x, n)


def locate(x: Point, n: int) -> SBInterval:
    """The unique level-n interval ``T_n(x)`` containing ``x``."""
    if n < 0:
        raise DomainError("level must be non-negative")
    w = _Walker()
    for direction, m in _runs(x, n):
        if direction == "L":
            w.left_run(m)
        else:
            w.right_run(m)
    return w.interval()


def descent_path(x: Point, n: int) -> str:
    """The first ``n`` left/right choices of the descent as a string of L and R."""
    return "".join(direction * m for direction, m in _runs(x, n))


def type_change(x: Point, n: int) -> bool:
    """Whether the descent direction flips between steps ``n`` and ``n + 1``."""
    if n < 1:
        raise DomainError("type changes are indexed from n = 1")
    path = descent_path(x, n + 1)
    return path[n - 1] != path[n]


# ---------------------------------------------------------------------------
# whole-level traversal


def frontier(m: int) -> list[tuple[int, int, int, int]]:
    """Endpoint data ``(s_left, t_left, s_right, t_right)`` of all level-m intervals."""
    seq = [(0, 1), (1, 1)]
    for _ in range(m):
        nxt = []
        for (a, b), (c, d) in zip(seq, seq[1:]):
            nxt.append((a, b))
            nxt.append((a + c, b + d))
        nxt.append(seq[-1])
        seq = nxt
    return [(a, b, c, d) for (a, b), (c, d) in zip(seq, seq[1:])]


def _fold_subtree(tl: int, tr: int, depth: int, leaf, combine):
    acc = None
    stack = [(tl, tr, depth)]
    pop, push = stack.pop, stack.append
    while stack:
        a, b, k = pop()
        if k == 0:
            value = leaf(a, b)
            acc = value if acc is None else combine(acc, value)
            continue
        k -= 1
        # right child pushed first so the left child is visited first
        push((a + b, b, k))
        push((a, a + b, k))
    return acc


def fold_level(
    n: int,
    leaf: Callable[[int, int], T],
    combine: Callable[[T, T], T],
    *,
    workers: int = 1,
    split: int | None = None,
    cap: int = FOLD_CAP,
) -> T:
    """Fold ``leaf(t_left, t_right)`` over all level-n intervals, left to right.

    The level is cut at depth ``split`` (default ``min(n, 12)``) into
    independent subtrees.  Their partial results are merged in left-to-right
    order whatever the number of workers, so the result does not depend on
    scheduling.  ``combine`` must be associative.
    """
    if n < 0:
        raise DomainError("level must be non-negative")
    if n > cap:
        raise CapExceeded(f"level {n} exceeds the fold cap {cap}")
    m = min(n, 12) if split is None else max(0, min(split, n))
    roots = [(tl, tr) for _, tl, _, tr in frontier(m)]
    depth = n - m

    def job(pair):
        return _fold_subtree(pair[0], pair[1], depth, leaf, combine)

    if workers > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(job, roots))
    else:
        partials = [job(r) for r in roots]
    acc = partials[0]
    for part in partials[1:]:
        acc = combine(acc, part)
    return acc


@lru_cache(maxsize=8)
def template(depth: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients ``(U, V)`` expressing level-``depth`` boundary points of a
    subtree in terms of its endpoints: ``boundary = U*left + V*right`` in the
    numerator/denominator sense."""
    if depth > INT64_CAP:
        raise CapExceeded(f"template depth {depth} too large")
    s = np.array([0, 1], dtype=np.int64)
    t = np.array([1, 1], dtype=np.int64)
    for _ in range(depth):
        s2 = np.empty(2 * len(s) - 1, dtype=np.int64)
        t2 = np.empty_like(s2)
        s2[0::2], t2[0::2] = s, t
        s2[1::2], t2[1::2] = s[:-1] + s[1:], t[:-1] + t[1:]
        s, t = s2, t2
    u, v = t - s, s
    u.setflags(write=False)
    v.setflags(write=False)
    return u, v


class Chunk(NamedTuple):
    """Boundary numerators/denominators of ``2**depth`` consecutive intervals."""

    start: int  # index of the first interval at the full level
    num: np.ndarray
    den: np.ndarray


def _chunk_depth(n: int, chunk_depth: int | None) -> int:
    if chunk_depth is None:
        chunk_depth = 16
    return max(0, min(n, chunk_depth))


def iter_chunks(n: int, chunk_depth: int | None = None, cap: int = FOLD_CAP) -> Iterator[Chunk]:
    """Yield the level-n boundary points in left-to-right chunks.

    Consecutive chunks share their boundary point, so chunk ``i`` covers the
    intervals ``start .. start + len(den) - 2``.
    """
    if n > min(cap, INT64_CAP):
        raise CapExceeded(f"level {n} exceeds the chunk cap {min(cap, INT64_CAP)}")
    d = _chunk_depth(n, chunk_depth)
    u, v = template(d)
    for i, (sl, tl, sr, tr) in enumerate(frontier(n - d)):
        yield Chunk(i << d, u * sl + v * sr, u * tl + v * tr)


def map_chunks(
    n: int,
    func: Callable[[Chunk], T],
    *,
    workers: int = 1,
    chunk_depth: int | None = None,
    cap: int = FOLD_CAP,
) -> list[T]:
    """Apply ``func`` to every chunk of level ``n``; results come back in order."""
    chunks = iter_chunks(n, chunk_depth, cap)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, chunks))
    return [func(c) for c in chunks]
