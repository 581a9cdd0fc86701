"""Numerical classification of points by the behaviour of Q' .

A point falls in one of three sets: Q' = 0, Q' = infinity, or no derivative
even in the generalised sense.  The sufficient criteria used here involve true
limits, so a verdict only records that a criterion held on the trailing window
of a finite horizon with a safety margin.  Every report names the rule that
fired and the margin it fired with.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

from .cf import CFSpec
from .dynamics import WindowStats, window_stats
from .errors import DegenerateInput, DomainError, InsufficientDigits

__all__ = [
    "Verdict",
    "Diagnostics",
    "ClassificationReport",
    "diagnostics",
    "classify",
    "witness_straddle",
    "witness",
    "SalemReport",
    "salem_liminf_check",
    "THRESHOLD",
]

LOG2 = math.log(2.0)
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
THRESHOLD = 1.0 / LOG2  # critical value of A_n / (2 log q_n)
DIGIT_AVG_LOW = 2.0 * math.log2(GOLDEN)


def _rho() -> float:
    from .multifractal import constants

    return constants().rho


class Verdict(str, enum.Enum):
    LAMBDA0 = "Lambda0"
    LAMBDA_INF = "LambdaInf"
    LAMBDA_TILDE = "LambdaTilde"
    UNDETERMINED = "Undetermined"


# rule tags
RATIO_BELOW = "growth-ratio-below"
RATIO_ABOVE = "growth-ratio-above"
RATIO_STRADDLE = "growth-ratio-straddle"
QUOTIENT_VANISHING = "convergent-quotient-vanishing"
DIGITS_LOW = "digit-average-below"
DIGITS_HIGH = "digit-average-above"


@dataclass
class Diagnostics:
    """Per-index series for ``n = 1 .. horizon``.

    ``ratio[n-1] = A_n / (2 log q_n)`` (infinite while ``q_n = 1``),
    ``log_quotient[n-1]`` is the log of ``2 q_{n-1} q_n / 2^A_n``,
    ``ell[n-1]`` is the Stern-Brocot quotient at level ``A_n`` and
    ``digit_mean[n-1] = A_n / n``.  ``next_digit_log`` holds ``log a_{n+1}``
    where that digit is available.
    """

    horizon: int
    ratio: list[float]
    log_quotient: list[float]
    ell: list[float]
    digit_mean: list[float]
    next_digit_log: list[float]
    digit_sum: int

    def window(self, name: str, tail: float) -> WindowStats:
        return window_stats(getattr(self, name), tail)


def diagnostics(x: CFSpec, horizon: int) -> Diagnostics:
    """Exact-integer convergent recursion with float logs taken at each step."""
    if x.is_rational:
        raise DegenerateInput(f"{x.describe()} is rational; its derivative behaviour is not a limit question")
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    if not x.has_digits(horizon):
        raise InsufficientDigits(f"{x.describe()} has fewer than {horizon} digits")
    ratio, log_quot, ell, mean, nxt = [], [], [], [], []
    q_prev, q = 0, 1  # (q_{-1}, q_0)
    total = 0
    for n in range(1, horizon + 1):
        a = x.digit(n)
        q_prev, q = q, a * q + q_prev
        total += a
        log_q = math.log(q)
        log_prev = math.log(q_prev)
        ratio.append(total / (2.0 * log_q) if q > 1 else math.inf)
        log_quot.append(LOG2 + log_prev + log_q - total * LOG2)
        ell.append((log_q + math.log(q + q_prev)) / total)
        mean.append(total / n)
        nxt.append(math.log(x.digit(n + 1)) if x.has_digits(n + 1) else math.nan)
    return Diagnostics(horizon, ratio, log_quot, ell, mean, nxt, total)


@dataclass
class ClassificationReport:
    input: str
    horizon: int
    verdict: Verdict
    rule: Optional[str]
    margin: float
    fired: list[str]
    corroboration: list[str]
    windows: dict
    settings: dict
    diagnostics: Diagnostics = field(repr=False)

    def as_dict(self, include_series: bool = True) -> dict:
        out = {
            "input": self.input,
            "horizon": self.horizon,
            "verdict": self.verdict.value,
            "rule": self.rule,
            "margin": self.margin,
            "fired": self.fired,
            "corroboration": self.corroboration,
            "windows": self.windows,
            "settings": self.settings,
        }
        if include_series:
            d = asdict(self.diagnostics)
            out["diagnostics"] = {k: [_finite(v) for v in d[k]] if isinstance(d[k], list) else d[k] for k in d}
        return out


def _finite(v: float):
    return v if math.isfinite(v) else None


def _trend_down(values: Sequence[float], tail: float, level: float) -> tuple[bool, float]:
    """Whether the trailing maxima of ``values`` sit below ``level`` and keep falling."""
    n = len(values)
    cut = max(1, int(round(tail * n)))
    later = [v for v in values[n - cut :] if not math.isnan(v)]
    earlier = [v for v in values[max(0, n - 2 * cut) : n - cut] if not math.isnan(v)]
    if not later or not earlier:
        return False, 0.0
    hi_late, hi_early = max(later), max(earlier)
    return hi_late < level and hi_late < hi_early, level - hi_late


def classify(
    x: CFSpec,
    horizon: int,
    margin: float = 0.05,
    tail: float = 0.25,
    straddle_tail: float = 0.75,
) -> ClassificationReport:
    """Apply the sufficient criteria to the first ``horizon`` digits of ``x``.

    * ``growth-ratio-below``: the trailing window of ``A_n/(2 log q_n)`` stays
      below ``1/log 2 - margin`` (Q' infinite).
    * ``growth-ratio-above``: it stays above ``1/log 2 + margin`` (Q' zero).
    * ``convergent-quotient-vanishing``: ``a_{n+1}`` times the convergent
      quotient falls below ``margin`` and keeps falling (Q' zero).
    * ``growth-ratio-straddle``: over the longer straddle window the ratio goes
      both above ``1/log 2 + margin`` and below ``1/log 2 - margin`` (no
      derivative).  A straddle contradicts the existence of a limit, so it takes
      precedence over the two one-sided ratio rules.

    Conflicting verdicts give ``Undetermined``.  The digit-average rules are
    only recorded as corroboration.
    """
    if not 0 < tail <= 1 or not 0 < straddle_tail <= 1:
        raise DomainError("window fractions must lie in (0, 1]")
    diag = diagnostics(x, horizon)
    short = diag.window("ratio", tail)
    long = diag.window("ratio", straddle_tail)
    fired: dict[str, tuple[Verdict, float]] = {}

    straddle_margin = min(long.high - THRESHOLD, THRESHOLD - long.low)
    if straddle_margin >= margin:
        fired[RATIO_STRADDLE] = (Verdict.LAMBDA_TILDE, straddle_margin)
    else:
        if THRESHOLD - short.high >= margin:
            fired[RATIO_BELOW] = (Verdict.LAMBDA_INF, THRESHOLD - short.high)
        if short.low - THRESHOLD >= margin:
            fired[RATIO_ABOVE] = (Verdict.LAMBDA0, short.low - THRESHOLD)
        product = [lq + la for lq, la in zip(diag.log_quotient, diag.next_digit_log)]
        ok, slack = _trend_down(product, tail, math.log(margin))
        if ok and slack >= margin:
            fired[QUOTIENT_VANISHING] = (Verdict.LAMBDA0, slack)

    verdicts = {v for v, _ in fired.values()}
    if len(verdicts) == 1:
        verdict = verdicts.pop()
        rule, (_, best) = max(fired.items(), key=lambda kv: kv[1][1])
        # ratio rules are the primary ones; report them when they fired
        for tag in (RATIO_STRADDLE, RATIO_BELOW, RATIO_ABOVE):
            if tag in fired:
                rule, best = tag, fired[tag][1]
                break
    else:
        verdict, rule = Verdict.UNDETERMINED, None
        best = max((THRESHOLD - short.high, short.low - THRESHOLD, straddle_margin))

    means = diag.window("digit_mean", tail)
    corroboration = []
    if means.high < DIGIT_AVG_LOW:
        corroboration.append(DIGITS_LOW)
    if means.low > _rho():
        corroboration.append(DIGITS_HIGH)

    windows = {
        "ratio": asdict(short),
        "ratio_straddle": asdict(long),
        "digit_mean": asdict(means),
        "log_quotient": asdict(diag.window("log_quotient", tail)),
        "ell": asdict(diag.window("ell", tail)),
    }
    settings = {"margin": margin, "tail": tail, "straddle_tail": straddle_tail, "threshold": THRESHOLD}
    return ClassificationReport(
        str(x), horizon, verdict, rule, best, sorted(fired), corroboration, windows, settings, diag
    )


# ---------------------------------------------------------------------------
# witnesses


def _block_lengths(rho: float, growth: float, length: int) -> list[tuple[int, int]]:
    """``(ones, c)`` block lengths until the total reaches ``length``."""
    out, total, j = [], 0, 0
    while total < length:
        big = max(1, int(round(growth**j)))
        ones = max(1, int(round(rho * growth**j)))
        out.append((ones, big))
        total += ones + big
        j += 1
    return out


def _model_window(rho: float, c: int, growth: float, horizon: int, window: float) -> tuple[float, float]:
    """Float model of the ratio window: each digit 1 adds ``2 log golden`` to
    ``2 log q`` and each digit c adds ``2 log`` of the fixed point of ``c + 1/y``."""
    up_one = 2.0 * math.log(GOLDEN)
    up_c = 2.0 * math.log((c + math.sqrt(c * c + 4.0)) / 2.0)
    start = horizon - int(round(window * horizon))
    a_sum, log_sum, n = 0.0, 0.0, 0
    lo, hi = math.inf, -math.inf
    for ones, big in _block_lengths(rho, growth, horizon):
        for digit, step, count in ((1, up_one, ones), (c, up_c, big)):
            for _ in range(count):
                n += 1
                a_sum += digit
                log_sum += step
                if n > start:
                    r = a_sum / log_sum
                    lo, hi = min(lo, r), max(hi, r)
                if n >= horizon:
                    return lo, hi
    return lo, hi


def witness_straddle(
    c: int = 8,
    growth: float = 2.0,
    length: int = 50_000,
    *,
    horizon: int = 10_000,
    margin: float = 0.05,
    window: float = 0.75,
) -> CFSpec:
    """A point alternating blocks of 1s and blocks of a large digit ``c``.

    Blocks of 1s pull ``A_n/(2 log q_n)`` toward ``1/(2 log golden)``, below the
    threshold ``1/log 2``; blocks of ``c`` pull it above.  Block lengths grow
    geometrically so the swings persist.  The ratio of 1s to ``c``s per cycle
    is tuned so that the straddle window at ``horizon`` clears the threshold by
    the same amount on both sides.  Raises ``ValueError`` when that common
    amount is below ``margin`` (``c`` too small or too few digits).
    """
    if c < 2:
        raise DomainError("c must be >= 2: blocks of 1s alone cannot rise above the threshold")
    if growth <= 1:
        raise DomainError("blocks must grow: growth must exceed 1")
    if length < horizon:
        raise DomainError("length must cover the horizon")
    limit_c = c / (2.0 * math.log((c + math.sqrt(c * c + 4.0)) / 2.0))
    if limit_c <= THRESHOLD + margin:
        raise DomainError(f"digit {c} cannot lift the ratio above the threshold (its limit is {limit_c:.4f})")

    def imbalance(rho: float) -> float:
        lo, hi = _model_window(rho, c, growth, horizon, window)
        return (THRESHOLD - lo) - (hi - THRESHOLD)

    lo_r, hi_r = 0.05, 200.0
    for _ in range(60):
        mid = math.sqrt(lo_r * hi_r)
        if imbalance(mid) < 0:
            lo_r = mid
        else:
            hi_r = mid
    rho = math.sqrt(lo_r * hi_r)
    digits: list[int] = []
    for ones, big in _block_lengths(rho, growth, length):
        digits.extend([1] * ones)
        digits.extend([c] * big)
    spec = CFSpec.explicit(digits[1:length], prefix=digits[:1])
    diag = diagnostics(spec, horizon)
    stats = diag.window("ratio", window)
    achieved = min(stats.high - THRESHOLD, THRESHOLD - stats.low)
    if achieved < margin:
        raise DomainError(
            f"c={c}, growth={growth}: best straddle margin {achieved:.4f} at horizon {horizon} is below {margin}"
        )
    return spec


def witness(kind: str, **kwargs) -> CFSpec:
    """A representative point for ``inf``, ``zero`` or ``tilde``."""
    if kind == "inf":
        return CFSpec.constant(1)
    if kind == "zero":
        return CFSpec.constant(6)
    if kind == "tilde":
        return witness_straddle(**kwargs)
    raise DomainError(f"unknown witness kind {kind!r}; choose inf, zero or tilde")


# ---------------------------------------------------------------------------
# upper and lower derivative trends


@dataclass(frozen=True)
class SalemReport:
    horizon: int
    upward: bool  # trailing maxima of the log quotient keep rising above 0
    downward: bool  # trailing minima keep falling below 0
    early: tuple[float, float]  # (min, max) over (H/4, H/2]
    late: tuple[float, float]  # (min, max) over (H/2, H]


def salem_liminf_check(x: CFSpec, horizon: int) -> SalemReport:
    """Trends of the convergent quotient ``2 q_k q_{k+1} / 2^A_{k+1}``.

    An unbounded upper trend signals an infinite upper derivative, an
    unbounded lower trend a vanishing lower derivative.  Informational only.
    """
    series = diagnostics(x, horizon).log_quotient
    quarter, half = horizon // 4, horizon // 2
    early = series[quarter:half]
    late = series[half:]
    if not early or not late:
        raise DomainError("horizon too short for trend windows")
    e_lo, e_hi = min(early), max(early)
    l_lo, l_hi = min(late), max(late)
    return SalemReport(
        horizon,
        upward=l_hi > 0 and l_hi > e_hi,
        downward=l_lo < 0 and l_lo < e_lo,
        early=(e_lo, e_hi),
        late=(l_lo, l_hi),
    )
