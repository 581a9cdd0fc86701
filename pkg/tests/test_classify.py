import json
import math

import pytest

from minkowski.cf import CFSpec
from minkowski.classify import (
    QUOTIENT_VANISHING,
    RATIO_ABOVE,
    RATIO_BELOW,
    RATIO_STRADDLE,
    THRESHOLD,
    Verdict,
    classify,
    diagnostics,
    salem_liminf_check,
    witness,
    witness_straddle,
)
from minkowski.dynamics import ell_series
from minkowski.errors import DegenerateInput, DomainError, InsufficientDigits
from minkowski.measures import nu_over_lambda

from oracles import fib, golden_ratio_limit


@pytest.fixture(scope="module")
def straddle():
    return witness_straddle(c=8)


class TestDiagnostics:
    def test_golden_matches_fibonacci(self):
        diag = diagnostics(CFSpec.constant(1), 300)
        for n in (2, 10, 100, 300):
            assert math.isclose(diag.ratio[n - 1], n / (2 * math.log(fib(n + 1))), rel_tol=1e-13)
        assert diag.ratio[0] == math.inf
        assert diag.digit_sum == 300

    @pytest.mark.parametrize("c", [1, 2, 6, 9])
    def test_constant_ratio_limit(self, c):
        diag = diagnostics(CFSpec.constant(c), 5000)
        assert abs(diag.ratio[-1] - golden_ratio_limit(c)) < 1e-3

    def test_quotient_series(self):
        x = CFSpec.periodic([2, 3])
        diag = diagnostics(x, 6)
        q = [2, 7, 16, 55, 126, 433]  # q_1 .. q_6
        a_sum = [2, 5, 7, 10, 12, 15]
        prev = [1] + q[:-1]
        for n in range(2, 7):
            expected = math.log(2 * prev[n - 1] * q[n - 1]) - a_sum[n - 1] * math.log(2)
            assert math.isclose(diag.log_quotient[n - 1], expected, rel_tol=1e-12)

    def test_rational_rejected(self):
        with pytest.raises(DegenerateInput):
            diagnostics(CFSpec.finite([2, 3]), 1)
        with pytest.raises(DegenerateInput):
            classify(CFSpec.finite([2, 3, 4]), 100)

    def test_short_explicit(self):
        with pytest.raises(InsufficientDigits):
            diagnostics(CFSpec.explicit([1, 2]), 10)


class TestVerdicts:
    def test_golden_infinite(self):
        r = classify(CFSpec.constant(1), 10_000)
        assert r.verdict is Verdict.LAMBDA_INF
        assert r.rule == RATIO_BELOW and r.margin >= 0.05

    def test_six_zero(self):
        r = classify(CFSpec.constant(6), 10_000)
        assert r.verdict is Verdict.LAMBDA0
        assert RATIO_ABOVE in r.fired or QUOTIENT_VANISHING in r.fired
        assert r.margin >= 0.05
        assert "digit-average-above" in r.corroboration

    def test_straddle(self, straddle):
        r = classify(straddle, 10_000)
        assert r.verdict is Verdict.LAMBDA_TILDE
        assert r.rule == RATIO_STRADDLE and r.margin >= 0.05
        w = r.windows["ratio_straddle"]
        assert w["low"] < THRESHOLD - 0.05 < THRESHOLD + 0.05 < w["high"]

    def test_horizon_doubling_stable(self, straddle):
        for x in (CFSpec.constant(1), CFSpec.constant(6), straddle):
            seen = {classify(x, h).verdict for h in (10_000, 20_000, 40_000)}
            assert not {Verdict.LAMBDA0, Verdict.LAMBDA_INF} <= seen

    def test_nothing_fires(self):
        # [4, 4, 5] repeated sits just below the threshold, inside the margin
        r = classify(CFSpec.periodic([4, 4, 5]), 4000)
        assert r.verdict is Verdict.UNDETERMINED and r.rule is None and r.fired == []

    def test_report_is_json(self):
        r = classify(CFSpec.periodic([1, 2]), 500)
        text = json.dumps(r.as_dict())
        back = json.loads(text)
        assert back["verdict"] == "LambdaInf"
        assert back["diagnostics"]["ratio"][0] is None
        assert "diagnostics" not in r.as_dict(include_series=False)

    def test_bad_window(self):
        with pytest.raises(DomainError):
            classify(CFSpec.constant(1), 100, tail=0)


class TestConsistency:
    @pytest.mark.parametrize("x", [CFSpec.constant(1), CFSpec.periodic([1, 2]), CFSpec.periodic([1, 1, 3])])
    def test_infinite_verdict_means_rising_density(self, x):
        assert classify(x, 4000).verdict is Verdict.LAMBDA_INF
        # log(nu_F / lambda) at level n is n * ell_n - n log 2
        n_max = 2000
        series = [n * e - n * math.log(2) for n, e in enumerate(ell_series(x, n_max), start=1)]
        tail = series[3 * n_max // 4 :]
        ends = [min(tail[:50]), max(tail[-50:])]
        assert ends[1] > ends[0]
        assert nu_over_lambda(x, n_max).log_ratio > nu_over_lambda(x, 3 * n_max // 4).log_ratio

    def test_deterministic(self, straddle):
        a = classify(straddle, 5000).as_dict()
        b = classify(straddle, 5000).as_dict()
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


class TestWitness:
    def test_kinds(self):
        assert witness("inf") == CFSpec.constant(1)
        assert witness("zero") == CFSpec.constant(6)
        with pytest.raises(DomainError):
            witness("other")

    def test_structure(self, straddle):
        digits = straddle.digits(10_000)
        assert set(digits) == {1, 8}

    def test_larger_digit(self):
        x = witness_straddle(c=20, growth=3)
        assert classify(x, 10_000).verdict is Verdict.LAMBDA_TILDE

    def test_rejections(self):
        with pytest.raises(DomainError):
            witness_straddle(c=1)
        with pytest.raises(DomainError):
            witness_straddle(c=3)  # the ratio for constant 3 never exceeds the threshold
        with pytest.raises(DomainError):
            witness_straddle(growth=1.0)
        with pytest.raises(DomainError):
            witness_straddle(c=5)  # oscillation too shallow for margin 0.05


class TestSalem:
    def test_trends(self, straddle):
        w = salem_liminf_check(straddle, 10_000)
        assert w.upward and w.downward
        g = salem_liminf_check(CFSpec.constant(1), 10_000)
        assert g.upward and not g.downward
        z = salem_liminf_check(CFSpec.constant(6), 10_000)
        assert z.downward and not z.upward

    def test_too_short(self):
        with pytest.raises(DomainError):
            salem_liminf_check(CFSpec.constant(1), 1)
