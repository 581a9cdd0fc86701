import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkowski.cf import CFSpec, DyadicRational, cf_eval
from minkowski.errors import DomainError
from minkowski.question import (
    DyadicEnclosure,
    mediant_identity_check,
    q_convergent_values,
    q_enclose,
    q_eval,
    q_inverse,
    q_recursion_step,
)
from minkowski.sternbrocot import SBInterval, sb_sequence

from oracles import q_alternating, q_inverse_bisect

F = Fraction
rationals = st.fractions(min_value=0, max_value=1, max_denominator=5000)
dyadics = st.builds(lambda e, k: F(k % (2**e + 1), 2**e), st.integers(0, 40), st.integers(0, 2**41))


class TestEval:
    @pytest.mark.parametrize(
        "x, y",
        [(F(0), F(0)), (F(1), F(1)), (F(1, 2), F(1, 2)), (F(1, 3), F(1, 4)), (F(2, 3), F(3, 4)),
         (F(2, 5), F(3, 8)), (F(3, 5), F(5, 8)), (F(1, 4), F(1, 8))],
    )
    def test_examples(self, x, y):
        assert q_eval(x) == y

    def test_accepts_finite_spec(self):
        assert q_eval(CFSpec.finite([2, 2])) == F(3, 8)

    @pytest.mark.parametrize("bad", [F(-1, 3), F(4, 3)])
    def test_domain(self, bad):
        with pytest.raises(DomainError):
            q_eval(bad)

    @given(rationals)
    def test_matches_alternating_sum(self, x):
        assert q_eval(x) == q_alternating(x)

    @given(rationals, rationals)
    def test_monotone(self, x, y):
        if x < y:
            assert q_eval(x) < q_eval(y)

    @given(rationals)
    def test_symmetry(self, x):
        assert q_eval(1 - x) == 1 - q_eval(x)

    @given(rationals)
    def test_half_scaling(self, x):
        # Q(x / (1 + x)) = Q(x) / 2
        assert q_eval(x / (1 + x)) == q_eval(x).half()


class TestRecursion:
    @given(st.lists(st.integers(1, 30), min_size=1, max_size=15))
    def test_convergent_values(self, digits):
        values = q_convergent_values(digits)
        for k in range(1, len(digits) + 1):
            assert values[k - 1] == q_alternating(cf_eval(digits[:k]))

    def test_step_rejects_k0(self):
        with pytest.raises(DomainError):
            q_recursion_step(DyadicRational(0), DyadicRational(1, 1), 2, 0)


class TestDistribution:
    @pytest.mark.parametrize("n", range(0, 13))
    def test_level_points_are_dyadic_grid(self, n):
        for k, x in enumerate(sb_sequence(n)):
            assert q_eval(x) == DyadicRational(k, n)

    def test_mediant_identity(self):
        for n in range(9):
            seq = sb_sequence(n)
            for k, (a, b) in enumerate(zip(seq, seq[1:])):
                assert mediant_identity_check(SBInterval(n, k, a, b))


class TestEnclose:
    def test_golden(self):
        x = CFSpec.constant(1)  # 1/golden ratio, Q = 2/3
        for n in (1, 10, 64, 200):
            enc = q_enclose(x, n)
            assert enc.contains(F(2, 3))
            assert enc.width == DyadicRational(1, n)

    def test_quadratic_surds(self):
        # [2, 2, 2, ...] = sqrt(2) - 1 has Q = 2/5; [1, 2, 1, 2, ...] has Q = 6/7
        assert q_enclose(CFSpec.constant(2), 120).contains(F(2, 5))
        assert q_enclose(CFSpec.periodic([1, 2]), 120).contains(F(6, 7))

    def test_rational_enclosure_contains_value(self):
        for x in [F(2, 7), F(13, 21), F(1, 100)]:
            for n in (3, 10, 30):
                assert q_enclose(x, n).contains(q_eval(x))

    def test_width_checked(self):
        with pytest.raises(DomainError):
            DyadicEnclosure(DyadicRational(0), DyadicRational(1, 2), 3)

    def test_nested(self):
        x = CFSpec.periodic([3, 1, 4])
        prev = q_enclose(x, 0)
        for n in range(1, 60):
            cur = q_enclose(x, n)
            assert prev.lower <= cur.lower and cur.upper <= prev.upper
            prev = cur


class TestInverse:
    @given(dyadics)
    def test_round_trip(self, y):
        x = q_inverse(y)
        assert q_eval(x) == y

    @given(dyadics)
    def test_matches_bisection(self, y):
        if y.denominator <= 2**30:
            assert q_inverse(y) == q_inverse_bisect(y, depth=80)

    @given(rationals)
    def test_inverse_of_eval(self, x):
        assert q_inverse(q_eval(x)) == x

    def test_examples(self):
        assert q_inverse(F(3, 8)) == F(2, 5)
        assert q_inverse(DyadicRational(1, 10)) == F(1, 11)

    def test_domain(self):
        with pytest.raises(DomainError):
            q_inverse(F(1, 3))
        with pytest.raises(DomainError):
            q_inverse(F(3, 2))


def test_derivative_vanishes_at_rationals():
    # Q(1/n) = 2^(1-n): the difference quotient at 0 goes to zero
    ratios = [float(q_eval(F(1, n))) * n for n in (10, 20, 40)]
    assert ratios[0] > ratios[1] > ratios[2]
    assert math.isclose(ratios[2], 40 * 2.0**-39)


def _all_rationals(qmax):
    return sorted({F(p, q) for q in range(1, qmax + 1) for p in range(q + 1)})


def test_monotone_and_symmetric_exhaustive():
    xs = _all_rationals(300)
    ys = [q_eval(x) for x in xs]
    assert all(a < b for a, b in zip(ys, ys[1:]))
    lookup = dict(zip(xs, ys))
    assert all(lookup[x] + lookup[1 - x] == 1 for x in xs)


def test_golden_enclosure_precision():
    enc = q_enclose(CFSpec.constant(1), 45)
    assert abs(enc.midpoint.to_fraction() - F(2, 3)) <= F(1, 2**40)


@pytest.mark.slow
def test_inverse_exhaustive_level_20():
    # Q^-1 of the dyadic grid k / 2^20 is exactly the level-20 sequence
    seq = sb_sequence(20)
    assert all(q_inverse(DyadicRational(k, 20)) == x for k, x in enumerate(seq))
