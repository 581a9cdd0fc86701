"""Exact rational/dyadic arithmetic and regular continued fractions on (0, 1).

Points of the unit interval are :class:`fractions.Fraction` values.  Irrational
points only exist as :class:`CFSpec` objects: a finite digit prefix followed by
a tail rule.  Nothing in this module converts to floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence, Union

from .errors import DomainError, InsufficientDigits

__all__ = [
    "DyadicRational",
    "Finite",
    "Periodic",
    "Constant",
    "Explicit",
    "CFSpec",
    "ConvergentTriple",
    "cf_expand",
    "cf_eval",
    "convergents",
    "convergent",
    "intermediate_convergent",
    "micro_intermediate_convergent",
    "remainder",
    "digit_sum",
    "gauss_map",
    "parse_rational",
]


# ---------------------------------------------------------------------------
# dyadic rationals


@dataclass(frozen=True, order=False)
class DyadicRational:
    """The number ``mantissa / 2**exponent``, kept in canonical form.

    Canonical means the mantissa is odd, or the value is zero with exponent 0.
    Non-canonical input is reduced on construction, so ``DyadicRational(6, 4)``
    equals ``DyadicRational(3, 3)``.
    """

    mantissa: int
    exponent: int = 0

    def __post_init__(self) -> None:
        m, e = int(self.mantissa), int(self.exponent)
        if m == 0:
            e = 0
        else:
            tz = (m & -m).bit_length() - 1
            if e < 0:
                m <<= -e
                e = 0
            shift = min(tz, e)
            m >>= shift
            e -= shift
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> DyadicRational:
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise DomainError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> DyadicRational:
        """Parse ``m/2^e``, ``p/q`` with q a power of two, or an integer."""
        text = text.strip()
        match = re.fullmatch(r"(-?\d+)\s*/\s*2\s*\^\s*(\d+)", text)
        if match:
            return cls(int(match.group(1)), int(match.group(2)))
        return cls.from_fraction(Fraction(text))

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.exponent)

    def _aligned(self, other: DyadicRational) -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.mantissa << (e - self.exponent), other.mantissa << (e - other.exponent), e

    @staticmethod
    def _coerce(other: object) -> DyadicRational:
        if isinstance(other, DyadicRational):
            return other
        if isinstance(other, int):
            return DyadicRational(other, 0)
        if isinstance(other, Fraction):
            return DyadicRational.from_fraction(other)
        raise TypeError(f"cannot combine DyadicRational with {type(other).__name__}")

    def __add__(self, other: object) -> DyadicRational:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __sub__(self, other: object) -> DyadicRational:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a - b, e)

    def __rsub__(self, other: object) -> DyadicRational:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __mul__(self, other: object) -> DyadicRational:
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return DyadicRational(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self) -> DyadicRational:
        return DyadicRational(-self.mantissa, self.exponent)

    def __abs__(self) -> DyadicRational:
        return DyadicRational(abs(self.mantissa), self.exponent)

    def half(self) -> DyadicRational:
        return DyadicRational(self.mantissa, self.exponent + 1)

    def _cmp(self, other: object) -> int:
        if isinstance(other, (DyadicRational, int)):
            a, b, _ = self._aligned(self._coerce(other))
            return (a > b) - (a < b)
        if isinstance(other, Fraction):
            f = self.to_fraction()
            return (f > other) - (f < other)
        raise TypeError

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DyadicRational):
            return self.mantissa == other.mantissa and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other: object) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: object) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: object) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: object) -> bool:
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return math.ldexp(self.mantissa, -self.exponent) if self.mantissa.bit_length() < 1000 else float(self.to_fraction())

    def __str__(self) -> str:
        return f"{self.mantissa}/2^{self.exponent}"

    def __repr__(self) -> str:
        return f"DyadicRational({self.mantissa}, {self.exponent})"


# ---------------------------------------------------------------------------
# continued-fraction specifications


@dataclass(frozen=True)
class Finite:
    """No digits after the prefix: the point is rational."""

    def __str__(self) -> str:
        return ""


@dataclass(frozen=True)
class Periodic:
    block: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "block", tuple(int(b) for b in self.block))
        if not self.block:
            raise DomainError("periodic block must be non-empty")


@dataclass(frozen=True)
class Constant:
    digit: int


@dataclass(frozen=True)
class Explicit:
    """A bounded table of further digits; reading past its end is an error."""

    table: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", tuple(int(b) for b in self.table))


Tail = Union[Finite, Periodic, Constant, Explicit]
FINITE = Finite()


@dataclass(frozen=True)
class CFSpec:
    """``x = [a_1, a_2, ...]`` given as a digit prefix plus a tail rule.

    Construction normalises the representation:

    * a finite expansion never ends in the digit 1 (``[2, 1]`` becomes ``[3]``);
    * a periodic block made of one repeated digit becomes :class:`Constant`;
    * prefix digits that merely repeat the periodic block are absorbed into
      it, so equal points compare equal.
    """

    prefix: tuple[int, ...]
    tail: Tail = FINITE

    def __post_init__(self) -> None:
        prefix = tuple(int(a) for a in self.prefix)
        tail = self.tail
        if any(a < 1 for a in prefix):
            raise DomainError(f"continued fraction digits must be >= 1: {prefix}")
        if isinstance(tail, Periodic):
            if any(b < 1 for b in tail.block):
                raise DomainError("periodic digits must be >= 1")
            if len(set(tail.block)) == 1:
                tail = Constant(tail.block[0])
        if isinstance(tail, Constant):
            if tail.digit < 1:
                raise DomainError("constant digit must be >= 1")
            while prefix and prefix[-1] == tail.digit:
                prefix = prefix[:-1]
        elif isinstance(tail, Periodic):
            block = tail.block
            while prefix and prefix[-1] == block[-1]:
                prefix = prefix[:-1]
                block = block[-1:] + block[:-1]
            tail = Periodic(block)
        elif isinstance(tail, Explicit):
            if any(b < 1 for b in tail.table):
                raise DomainError("explicit digits must be >= 1")
            if not tail.table:
                raise DomainError("explicit table must be non-empty; use Finite for rationals")
        elif isinstance(tail, Finite):
            if not prefix:
                raise DomainError("a finite expansion needs at least one digit")
            if len(prefix) > 1 and prefix[-1] == 1:
                prefix = prefix[:-2] + (prefix[-2] + 1,)
            if prefix == (1,):
                raise DomainError("[1] = 1 lies outside (0, 1); handle x = 1 explicitly")
        else:
            raise TypeError(f"unknown tail rule {tail!r}")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail", tail)

    # -- constructors -----------------------------------------------------

    @classmethod
    def finite(cls, digits: Sequence[int]) -> CFSpec:
        return cls(tuple(digits), FINITE)

    @classmethod
    def constant(cls, digit: int, prefix: Sequence[int] = ()) -> CFSpec:
        return cls(tuple(prefix), Constant(digit))

    @classmethod
    def periodic(cls, block: Sequence[int], prefix: Sequence[int] = ()) -> CFSpec:
        return cls(tuple(prefix), Periodic(tuple(block)))

    @classmethod
    def explicit(cls, table: Sequence[int], prefix: Sequence[int] = ()) -> CFSpec:
        return cls(tuple(prefix), Explicit(tuple(table)))

    @classmethod
    def from_rational(cls, x: Fraction) -> CFSpec:
        return cls.finite(cf_expand(x))

    @classmethod
    def parse(cls, text: str) -> CFSpec:
        """Parse ``"a1,...,am"`` with an optional ``;tail=const:c``,
        ``;tail=periodic:b1,b2,...`` or ``;tail=explicit:b1,b2,...`` suffix."""
        head, _, rest = text.strip().partition(";")
        digits = tuple(int(a) for a in head.split(",") if a.strip())
        rest = rest.strip()
        if not rest:
            return cls.finite(digits)
        match = re.fullmatch(r"tail\s*=\s*(const|periodic|explicit)\s*:\s*([\d,\s]+)", rest)
        if not match:
            raise DomainError(f"cannot parse tail rule {rest!r}")
        kind, body = match.groups()
        values = tuple(int(b) for b in body.split(",") if b.strip())
        if kind == "const":
            if len(values) != 1:
                raise DomainError("const tail takes exactly one digit")
            return cls(digits, Constant(values[0]))
        if kind == "periodic":
            return cls(digits, Periodic(values))
        return cls(digits, Explicit(values))

    def __str__(self) -> str:
        head = ",".join(map(str, self.prefix))
        if isinstance(self.tail, Finite):
            return head
        if isinstance(self.tail, Constant):
            return f"{head};tail=const:{self.tail.digit}"
        if isinstance(self.tail, Periodic):
            return f"{head};tail=periodic:{','.join(map(str, self.tail.block))}"
        return f"{head};tail=explicit:{','.join(map(str, self.tail.table))}"

    # -- digit access -----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return isinstance(self.tail, Finite)

    @property
    def available(self) -> int | None:
        """Number of readable digits, or ``None`` when unbounded."""
        if isinstance(self.tail, Finite):
            return len(self.prefix)
        if isinstance(self.tail, Explicit):
            return len(self.prefix) + len(self.tail.table)
        return None

    def has_digits(self, n: int) -> bool:
        avail = self.available
        return avail is None or n <= avail

    def digit(self, i: int) -> int:
        """The digit ``a_i`` (1-based)."""
        if i < 1:
            raise DomainError(f"digit index must be >= 1, got {i}")
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        j = i - len(self.prefix) - 1
        tail = self.tail
        if isinstance(tail, Constant):
            return tail.digit
        if isinstance(tail, Periodic):
            return tail.block[j % len(tail.block)]
        if isinstance(tail, Explicit) and j < len(tail.table):
            return tail.table[j]
        raise InsufficientDigits(f"{self.describe()} has only {self.available} digits; a_{i} requested")

    def digits(self, n: int) -> list[int]:
        """The first ``n`` digits."""
        if not self.has_digits(n):
            raise InsufficientDigits(f"{self.describe()} has only {self.available} digits; {n} requested")
        return [self.digit(i) for i in range(1, n + 1)]

    def iter_digits(self) -> Iterator[int]:
        i = 1
        while self.has_digits(i):
            yield self.digit(i)
            i += 1

    def shift(self, k: int) -> CFSpec:
        """Drop the first ``k`` digits (``k`` applications of the Gauss map)."""
        if k < 0:
            raise DomainError("shift must be non-negative")
        if k == 0:
            return self
        if not self.has_digits(k + 1):
            raise InsufficientDigits(f"cannot shift {self.describe()} by {k}: tail exhausted")
        if k <= len(self.prefix):
            return CFSpec(self.prefix[k:], self.tail)
        j = k - len(self.prefix)
        tail = self.tail
        if isinstance(tail, Constant):
            return CFSpec((), tail)
        if isinstance(tail, Periodic):
            r = j % len(tail.block)
            return CFSpec((), Periodic(tail.block[r:] + tail.block[:r]))
        assert isinstance(tail, Explicit)
        return CFSpec((), Explicit(tail.table[j:]))

    def value(self) -> Fraction:
        """Exact value of a finite expansion."""
        if not self.is_rational:
            raise DomainError(f"{self.describe()} is irrational; only enclosures are available")
        return cf_eval(self.prefix)

    def truncation(self, n: int) -> Fraction:
        """The convergent ``p_n / q_n``."""
        return cf_eval(self.digits(n))

    def describe(self) -> str:
        text = str(self)
        return f"[{text[:60]}...]" if len(text) > 64 else f"[{text}]"


# ---------------------------------------------------------------------------
# expansions and convergents


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def cf_expand(x: Fraction) -> list[int]:
    """Canonical continued-fraction digits of a rational ``0 < x < 1``."""
    x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError(f"cf_expand needs 0 < x < 1, got {x}")
    p, q = x.numerator, x.denominator
    digits = []
    while p:
        a, r = divmod(q, p)
        digits.append(a)
        q, p = p, r
    return digits


def cf_eval(digits: Sequence[int]) -> Fraction:
    """Value of ``[a_1, ..., a_m]``.

    Zero digits are accepted after the first position (they merge their
    neighbours), which is convenient for degenerate identities.
    """
    if not digits:
        raise DomainError("empty digit list")
    p_prev, q_prev, p, q = 1, 0, 0, 1
    for a in digits:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
    return Fraction(p, q)


class ConvergentTriple(NamedTuple):
    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def _digits_of(x: CFSpec | Sequence[int], n: int) -> list[int]:
    if isinstance(x, CFSpec):
        return x.digits(n)
    if len(x) < n:
        raise InsufficientDigits(f"{n} digits requested, {len(x)} given")
    return list(x[:n])


def convergents(x: CFSpec | Sequence[int], k_max: int) -> list[ConvergentTriple]:
    """Convergents ``p_k / q_k`` for ``k = 1..k_max``."""
    digits = _digits_of(x, k_max)
    out = []
    p_prev, q_prev, p, q = 1, 0, 0, 1
    for k, a in enumerate(digits, start=1):
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        out.append(ConvergentTriple(k, p, q))
    return out


def convergent(x: CFSpec | Sequence[int], k: int) -> tuple[int, int]:
    """``(p_k, q_k)`` for ``k >= -1`` with seeds ``p_{-1}=1, q_{-1}=0, p_0=0, q_0=1``."""
    if k < -1:
        raise DomainError("convergent index must be >= -1")
    if k == -1:
        return 1, 0
    if k == 0:
        return 0, 1
    last = convergents(x, k)[-1]
    return last.p, last.q


def _two_convergents(x: CFSpec | Sequence[int], k: int) -> tuple[int, int, int, int]:
    """``(p_{k-1}, q_{k-1}, p_k, q_k)``."""
    if k == 0:
        return 1, 0, 0, 1
    triples = convergents(x, k)
    p_prev, q_prev = (triples[-2].p, triples[-2].q) if k >= 2 else (0, 1)
    return p_prev, q_prev, triples[-1].p, triples[-1].q


def intermediate_convergent(x: CFSpec | Sequence[int], k: int, m: int) -> Fraction:
    """``(m p_k + p_{k-1}) / (m q_k + q_{k-1})`` for ``0 <= m <= a_{k+1}``."""
    if k < 0:
        raise DomainError("k must be >= 0")
    digits = _digits_of(x, k + 1)
    a_next = digits[k]
    if not 0 <= m <= a_next:
        raise DomainError(f"m must lie in [0, a_{k + 1}] = [0, {a_next}], got {m}")
    if k == 0 and m == 0:
        raise DomainError("p_{-1}/q_{-1} = 1/0 is not a point of the unit interval")
    p_prev, q_prev, p, q = _two_convergents(digits, k)
    return Fraction(m * p + p_prev, m * q + q_prev)


def micro_intermediate_convergent(x: CFSpec | Sequence[int], k: int, n: int) -> Fraction:
    """``(n p_{k+1} - p_k) / (n q_{k+1} - q_k)`` for ``n >= 1``.

    Its expansion is ``[a_1, ..., a_k, a_{k+1} - 1, 1, n - 1]``; for ``n = 1``
    it coincides with the intermediate convergent with ``m = a_{k+1} - 1``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if k < 0:
        raise DomainError("k must be >= 0")
    digits = _digits_of(x, k + 1)
    p, q, p_next, q_next = _two_convergents(digits, k + 1)
    num, den = n * p_next - p, n * q_next - q
    if den == 0:
        raise DomainError("degenerate micro-intermediate convergent (a_1 = 1, n = 1)")
    return Fraction(num, den)


def remainder(x: CFSpec, n: int) -> CFSpec:
    """The n-th remainder ``r_n = [a_n; a_{n+1}, ...]``.

    The returned spec lists ``a_n`` first; read it with a semicolon, i.e. as
    ``a_n + [a_{n+1}, ...]``.
    """
    if n < 1:
        raise DomainError("remainder index must be >= 1")
    return x.shift(n - 1)


def digit_sum(x: CFSpec | Sequence[int], n: int) -> int:
    return sum(_digits_of(x, n))


def gauss_map(x: Fraction | CFSpec) -> Fraction | CFSpec:
    """``x -> 1/x mod 1``; ``G(0) = 0`` by convention.  On a :class:`CFSpec`
    this is the digit shift."""
    if isinstance(x, CFSpec):
        if x.is_rational and len(x.prefix) == 1:
            return Fraction(0)
        return x.shift(1)
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"gauss_map needs 0 <= x <= 1, got {x}")
    if x == 0:
        return Fraction(0)
    inv = 1 / x
    return inv - math.floor(inv)
