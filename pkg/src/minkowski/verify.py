"""Self-check suites: exact identities and numeric golden values.

Each suite returns a :class:`SuiteResult`.  A fault can be injected into any
suite by name, which flips one sign inside it; this exercises the failure path
of the harness.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cf import CFSpec, DyadicRational, convergents
from .dynamics import conjugacy_check, ell_n, farey_map, tent_map
from .measures import integrals, nu_F
from .multifractal import constants
from .question import mediant_identity_check, q_eval
from .sternbrocot import SBInterval, fold_level, sb_sequence

__all__ = ["SuiteResult", "SUITES", "run_suite", "run_all"]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "seconds": round(self.seconds, 3),
            "failures": self.failures[:10],
        }


def _conjugacy(qmax: int, fault: bool) -> tuple[int, list[str]]:
    bad, count = [], 0
    for q in range(1, qmax + 1):
        for p in range(0, q + 1):
            if math.gcd(p, q) != 1:
                continue
            x = Fraction(p, q)
            count += 1
            if fault:
                ok = tent_map(q_eval(x)) == 1 - q_eval(farey_map(x))
            else:
                ok = conjugacy_check(x)
            if not ok:
                bad.append(str(x))
    return count, bad


def _distribution(nmax: int, fault: bool) -> tuple[int, list[str]]:
    bad, count = [], 0
    for n in range(nmax + 1):
        seq = sb_sequence(n)
        step = DyadicRational(1, n)
        for k, x in enumerate(seq):
            count += 1
            expected = DyadicRational(k, n)
            if fault:
                expected = -expected
            if q_eval(x) != expected:
                bad.append(f"Q({x}) at level {n}")
            if k and nu_F(seq[k - 1], x) != step:
                bad.append(f"nu_F(T_{n},{k - 1})")
    return count, bad


def _mediant(nmax: int, fault: bool) -> tuple[int, list[str]]:
    bad, count = [], 0
    for n in range(nmax + 1):
        seq = sb_sequence(n)
        for k, (left, right) in enumerate(zip(seq, seq[1:])):
            count += 1
            iv = SBInterval(n, k, left, right)
            ok = mediant_identity_check(iv)
            if fault:
                ok = q_eval(iv.mediant) == q_eval(left) + q_eval(right)
            if not ok:
                bad.append(f"T_{n},{k}")
    return count, bad


def _determinant(samples: int, fault: bool) -> tuple[int, list[str]]:
    rng = random.Random(20240611)
    bad, count = [], 0
    for _ in range(samples):
        prefix = [rng.randint(1, 9) for _ in range(rng.randint(0, 5))]
        kind = rng.choice(["const", "periodic", "explicit"])
        if kind == "const":
            x = CFSpec.constant(rng.randint(1, 9), prefix)
        elif kind == "periodic":
            x = CFSpec.periodic([rng.randint(1, 9) for _ in range(rng.randint(1, 4))], prefix)
        else:
            x = CFSpec.explicit([rng.randint(1, 50) for _ in range(60)], prefix)
        triples = convergents(x, 50)
        p_prev, q_prev = 0, 1
        for t in triples:
            count += 1
            sign = -1 if fault else 1
            if t.p * q_prev - p_prev * t.q != sign * (-1) ** (t.index - 1):
                bad.append(f"{x.describe()} k={t.index}")
            p_prev, q_prev = t.p, t.q
    return count, bad


def _partition(nmax: int, fault: bool) -> tuple[int, list[str]]:
    bad, count = [], 0
    for n in range(nmax + 1):
        count += 1
        total = fold_level(n, lambda a, b: Fraction(1, a * b), lambda x, y: x + y)
        if (total != 1) ^ fault:
            bad.append(f"level {n}: sum {total}")
    return count, bad


def _eq_b(budget: int, fault: bool) -> tuple[int, list[str]]:
    """Every digit string with sum <= budget: the convergent quotient formula
    against Q measured by the alternating digit sum, on a common dyadic scale."""
    bad: list[str] = []
    count = 0
    scale = budget + 1
    # state: digits, A, (p_prev, q_prev, p, q), scaled Q of the last convergent, next sign
    stack = [((), 0, (1, 0, 0, 1), 0, 1)]
    while stack:
        digits, total, (p0, q0, p1, q1), qs_cur, sign = stack.pop()
        for a in range(1, budget - total + 1):
            a_sum = total + a
            p2, q2 = a * p1 + p0, a * q1 + q0
            # Q(p_k/q_k) = -2 sum_{i<=k} (-1)^i 2^-A_i, scaled by 2^scale
            qs_next = qs_cur + sign * (2 << (scale - a_sum))
            here = digits + (a,)
            count += 1
            det = abs(p2 * q1 - p1 * q2)
            d_q = abs(qs_next - qs_cur)
            rhs = 2 * det << scale
            if fault:
                rhs = -rhs
            if d_q << a_sum != rhs:
                bad.append(",".join(map(str, here)))
            stack.append((here, a_sum, (p1, q1, p2, q2), qs_next, -sign))
    return count, bad


def _golden(_: int, fault: bool) -> tuple[int, list[str]]:
    bad = []
    c = constants()
    checks = [
        ("2 log golden", c.two_log_golden, 0.9624, 1e-4),
        ("holder exponent", c.holder_exponent, 0.7202, 1e-4),
        ("rho", c.rho, 5.3197, 1e-4),
    ]
    res = integrals(18)
    checks += [
        ("E_nuF(delta_G)", res["E_nuF_deltaG"], 0.571612, 5e-3),
        ("chi", res["chi"], 0.792, 5e-3),
        ("dim", res["dim_nuF"], 0.875, 5e-3),
        ("ell_2000(golden)", ell_n(CFSpec.constant(1), 2000), c.two_log_golden, 1e-3),
    ]
    for name, got, want, tol in checks:
        if fault:
            got = -got
        if abs(got - want) > tol:
            bad.append(f"{name}: {got} vs {want}")
    return len(checks), bad


SUITES: dict[str, tuple[Callable[[int, bool], tuple[int, list[str]]], int]] = {
    "conjugacy": (_conjugacy, 500),
    "distribution": (_distribution, 12),
    "mediant": (_mediant, 10),
    "determinant": (_determinant, 200),
    "partition": (_partition, 20),
    "eq_b": (_eq_b, 20),
    "golden": (_golden, 0),
}


def run_suite(name: str, size: int | None = None, fault: bool = False) -> SuiteResult:
    try:
        func, default = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    start = time.perf_counter()
    count, bad = func(default if size is None else size, fault)
    return SuiteResult(name, not bad, count, time.perf_counter() - start, bad)


def run_all(sizes: dict[str, int] | None = None, fault: str | None = None) -> list[SuiteResult]:
    sizes = sizes or {}
    return [run_suite(name, sizes.get(name), fault == name) for name in SUITES]
