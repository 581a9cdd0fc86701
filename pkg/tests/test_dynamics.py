import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkowski.cf import CFSpec, DyadicRational, cf_eval, convergents
from minkowski.dynamics import (
    birkhoff,
    conjugacy_check,
    ell_n,
    ell_series,
    farey_map,
    farey_symbols,
    inverse_branches,
    log_int,
    orbit,
    tent_map,
    window_stats,
)
from minkowski.errors import DomainError, InsufficientDigits
from minkowski.question import q_eval
from minkowski.sternbrocot import descent_path

from oracles import cf_digits, locate_brute

F = Fraction
LOG_GOLDEN = math.log((1 + math.sqrt(5)) / 2)
rationals = st.fractions(min_value=0, max_value=1, max_denominator=3000)
digit_lists = st.lists(st.integers(1, 9), min_size=2, max_size=12)


class TestMaps:
    def test_farey_examples(self):
        assert farey_map(F(1, 3)) == F(1, 2)
        assert farey_map(F(1, 2)) == 1
        assert farey_map(F(2, 3)) == F(1, 2)
        assert farey_map(F(1)) == 0

    def test_tent_examples(self):
        assert tent_map(F(3, 8)) == F(3, 4)
        assert tent_map(F(3, 4)) == F(1, 2)
        assert tent_map(DyadicRational(5, 3)) == DyadicRational(3, 2)
        with pytest.raises(DomainError):
            tent_map(F(3, 2))

    @given(digit_lists)
    def test_farey_on_digits(self, digits):
        x = CFSpec.periodic(digits)
        image = farey_map(x)
        # compare on a long rational truncation
        trunc = cf_eval(x.digits(30))
        img_trunc = farey_map(trunc)
        assert abs(float(img_trunc) - float(image.truncation(28))) < 1e-9

    @given(rationals)
    def test_conjugacy(self, x):
        assert conjugacy_check(x)
        assert tent_map(q_eval(x)) == q_eval(farey_map(x))

    @given(rationals)
    def test_inverse_branches(self, x):
        left, right = inverse_branches(x)
        assert left <= F(1, 2) <= right
        assert farey_map(left) == x and farey_map(right) == x

    def test_symbols_follow_descent(self):
        digits = [3, 1, 4, 1, 5, 9, 2, 6]
        x = cf_eval(digits + [10**6])
        n = sum(digits)
        path = "L" + descent_path(x, n)
        # the right branch reverses orientation, so a 1 marks a turn in the path
        turns = "".join("1" if u != v else "0" for u, v in zip(path, path[1:]))
        assert farey_symbols(x, n) == turns


class TestOrbit:
    def test_gauss_fixed_point(self):
        gold = CFSpec.constant(1)
        assert all(p == gold for p in orbit("gauss", gold, 5).points)

    def test_farey_rational(self):
        o = orbit("farey", F(2, 5), 4)
        assert o.points == (F(2, 5), F(2, 3), F(1, 2), F(1), F(0))
        assert len(o) == 5

    def test_tent_dyadic(self):
        o = orbit("tent", DyadicRational(3, 3), 3)
        assert [p.to_fraction() for p in o.points] == [F(3, 8), F(3, 4), F(1, 2), F(1)]

    def test_unknown_map(self):
        with pytest.raises(DomainError):
            orbit("baker", F(1, 2), 2)

    def test_explicit_runs_out(self):
        with pytest.raises(InsufficientDigits):
            orbit("gauss", CFSpec.explicit([2, 3], prefix=[1]), 5)


def _gauss_log_sum(digits, n):
    """``-2 sum log G^k x`` for k < n along the exact Gauss orbit of a rational."""
    x = cf_eval(digits)
    total = 0.0
    for _ in range(n):
        total -= 2 * (math.log(x.numerator) - math.log(x.denominator))
        x = 1 / x - (x.denominator // x.numerator)
    return total


class TestBirkhoff:
    def test_golden(self):
        rec = birkhoff(CFSpec.constant(1), 500)
        assert rec.sum_N == 500
        assert math.isclose(rec.ratio, 2 * LOG_GOLDEN, rel_tol=1e-12)

    @given(st.lists(st.integers(1, 40), min_size=3, max_size=25), st.integers(1, 20))
    def test_matches_orbit_sum(self, digits, n):
        if digits[-1] == 1:
            digits[-1] = 2
        n = min(n, len(digits) - 1)
        rec = birkhoff(CFSpec.finite(digits), n, with_ell=False)
        assert rec.sum_N == sum(digits[:n])
        assert math.isclose(rec.sum_I, _gauss_log_sum(digits, n), rel_tol=1e-12, abs_tol=1e-12)

    def test_irrational_error_bound(self):
        x = CFSpec.periodic([2, 7, 1])
        rec = birkhoff(x, 30)
        oracle = _gauss_log_sum(x.digits(200), 30)
        assert abs(rec.sum_I - oracle) <= rec.sum_I_error + 1e-12

    def test_ell_at_convergent(self):
        digits = [3, 1, 4, 1, 5]
        x = CFSpec.periodic(digits)
        rec = birkhoff(x, 5)
        tri = convergents(x, 5)
        expected = math.log(tri[-1].q * (tri[-1].q + tri[-2].q)) / sum(digits)
        assert math.isclose(rec.ell, expected, rel_tol=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            birkhoff(CFSpec.constant(1), 0)
        with pytest.raises(InsufficientDigits):
            birkhoff(CFSpec.finite([2, 3]), 3)


class TestEll:
    def test_matches_brute(self):
        for x in [F(2, 7), F(355, 1133), F(1, 50)]:
            for n in (1, 7, 40):
                left, right, _ = locate_brute(x, n)
                assert math.isclose(ell_n(x, n), math.log(left.denominator * right.denominator) / n)

    def test_series_matches_pointwise(self):
        x = CFSpec.periodic([2, 1, 3])
        series = ell_series(x, 60)
        assert len(series) == 60
        for n in (1, 2, 17, 60):
            assert math.isclose(series[n - 1], ell_n(x, n), rel_tol=1e-14)

    def test_golden_limit(self):
        assert abs(ell_n(CFSpec.constant(1), 4000) - 2 * LOG_GOLDEN) < 1e-3

    def test_log_int_big(self):
        assert math.isclose(log_int(10**400), 400 * math.log(10))
        with pytest.raises(DomainError):
            log_int(0)


class TestWindow:
    def test_stats(self):
        ws = window_stats(list(range(1, 101)), tail=0.25)
        assert (ws.start, ws.stop, ws.low, ws.high, ws.last) == (76, 100, 76, 100, 100)
        assert ws.mean == 88.0

    def test_bad_tail(self):
        with pytest.raises(DomainError):
            window_stats([1.0], tail=0)
        with pytest.raises(DomainError):
            window_stats([], tail=0.5)


def test_rational_orbit_digits():
    # the Farey map strips one unit of digit sum per step
    x = F(13, 47)
    steps = sum(cf_digits(x))
    assert orbit("farey", x, steps).points[-1] in (0, 1)


@pytest.mark.slow
def test_jump_chain_exhaustive():
    # the Farey orbit spends a_k - 1 left steps, then one right step, per digit
    for q in range(2, 501):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            digits = cf_digits(F(p, q))
            expected = "".join("0" * (a - 1) + "1" for a in digits)
            assert farey_symbols(F(p, q), sum(digits)) == expected


@given(rationals)
def test_branch_inverses_grid(x):
    for y in inverse_branches(x):
        assert farey_map(y) == x
