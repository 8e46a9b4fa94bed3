import math

import pytest
from hypothesis import given, settings, strategies as st

from stabgain.errors import EmptySample
from stabgain.stats import (
    describe,
    normal_cdf,
    quantile,
    regularized_incomplete_beta,
    student_t_cdf,
    student_t_quantile,
    student_t_two_sided_p,
)


def t_cdf_df1(t):
    return 0.5 + math.atan(t) / math.pi


def t_cdf_df2(t):
    return 0.5 + t / (2 * math.sqrt(2 + t * t))


def normal_tail_asymptotic(z):
    # lower tail for z << 0, series truncated after the z^-6 term
    z2 = z * z
    return math.exp(-z2 / 2) / (abs(z) * math.sqrt(2 * math.pi)) * (1 - 1 / z2 + 3 / z2**2 - 15 / z2**3)


def bisect(f, target, lo, hi, iters=200):
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestDescribe:
    def test_small(self):
        s = describe([1, 2, 3])
        assert (s.n, s.mean, s.sd, s.min, s.median, s.max) == (3, 2, 1, 1, 2, 3)

    def test_singleton(self):
        s = describe([5])
        assert (s.mean, s.min, s.median, s.max, s.sd) == (5, 5, 5, 5, None)

    def test_even_median(self):
        assert describe([1, 2, 3, 4]).median == 2.5

    def test_empty(self):
        with pytest.raises(EmptySample):
            describe([])

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
    def test_reversal_invariant(self, xs):
        a = describe(xs)
        assert a == describe(xs[::-1])
        assert a.min <= a.median <= a.max
        assert a.sd is None or a.sd >= 0


def test_quantile_linear_interpolation():
    assert quantile([1, 2, 3, 4], 0.25) == 1.75
    assert quantile([1, 2, 3, 4], 0.75) == 3.25


class TestNormal:
    def test_center(self):
        assert normal_cdf(0) == 0.5

    def test_far_tail_against_asymptotic_series(self):
        for z in (-7.77, -8.5, -10.0):
            assert normal_cdf(z) == pytest.approx(normal_tail_asymptotic(z), rel=2e-5)
        assert normal_cdf(-7.77) == pytest.approx(3.92e-15, rel=5e-3)

    def test_quantile_crosscheck(self):
        z = bisect(normal_cdf, 0.975, 0, 5)
        assert z == pytest.approx(1.959964, abs=1e-6)
        assert normal_cdf(1.959964) == pytest.approx(0.975, abs=1e-7)

    def test_no_underflow(self):
        assert normal_cdf(-10) > 0

    @given(st.floats(-10, 10))
    def test_symmetry(self, z):
        assert normal_cdf(z) + normal_cdf(-z) == pytest.approx(1.0, abs=1e-14)


class TestIncompleteBeta:
    def test_boundaries(self):
        assert regularized_incomplete_beta(2.5, 3.5, 0) == 0
        assert regularized_incomplete_beta(2.5, 3.5, 1) == 1

    def test_uniform(self):
        assert regularized_incomplete_beta(1, 1, 0.3) == pytest.approx(0.3, abs=1e-15)

    def test_half_threehalves_closed_form(self):
        # I_x(1/2, 3/2) = (2/pi)(theta + sin(theta)cos(theta)), theta = asin(sqrt(x))
        for x in (0.01, 0.25, 0.5, 0.9):
            th = math.asin(math.sqrt(x))
            assert regularized_incomplete_beta(0.5, 1.5, x) == pytest.approx(
                2 / math.pi * (th + math.sin(th) * math.cos(th)), rel=1e-12)

    def test_arctan_relation(self):
        # t-CDF with df=1: P(|T| > t) = I_{1/(1+t^2)}(1/2, 1/2)
        for t in (0.1, 1.0, 3.0, 40.0):
            x = 1 / (1 + t * t)
            assert regularized_incomplete_beta(0.5, 0.5, x) == pytest.approx(2 * (1 - t_cdf_df1(t)), rel=1e-10)

    @given(a=st.floats(0.1, 50), b=st.floats(0.1, 50), x=st.floats(1e-3, 1 - 1e-3))
    def test_symmetry(self, a, b, x):
        assert regularized_incomplete_beta(a, b, x) == pytest.approx(
            1 - regularized_incomplete_beta(b, a, 1 - x), abs=1e-12)


class TestStudentT:
    def test_center(self):
        for df in (1, 5, 79):
            assert student_t_cdf(0, df) == 0.5

    def test_df2_closed_form(self):
        assert student_t_cdf(3.4641, 2) == pytest.approx(t_cdf_df2(3.4641), abs=1e-12)
        assert student_t_cdf(3.4641, 2) == pytest.approx(0.9629, abs=5e-5)

    def test_far_tail_df79(self):
        assert student_t_two_sided_p(11.428, 79) / 2.22e-18 == pytest.approx(1, abs=0.5)

    @given(st.floats(-30, 30), st.sampled_from([1, 2, 3, 10, 79]))
    def test_symmetry(self, t, df):
        assert student_t_cdf(-t, df) == pytest.approx(1 - student_t_cdf(t, df), abs=1e-12)

    @pytest.mark.parametrize("z", [-3, -1.5, -0.2, 0.7, 2, 3])
    def test_large_df_near_normal(self, z):
        assert abs(student_t_cdf(z, 1000) - normal_cdf(z)) <= 1e-3


class TestQuantile:
    def test_center(self):
        assert student_t_quantile(0.5, 7) == 0

    def test_df79(self):
        q = student_t_quantile(0.975, 79)
        assert q == pytest.approx(bisect(lambda t: student_t_cdf(t, 79), 0.975, 0, 10), abs=1e-9)
        assert q == pytest.approx(1.9905, abs=5e-5)

    def test_df1(self):
        assert student_t_quantile(0.975, 1) == pytest.approx(math.tan(math.pi * 0.475), rel=1e-10)

    @settings(max_examples=200)
    @given(st.floats(0.001, 0.999), st.sampled_from([1, 2, 10, 79]))
    def test_inverse(self, p, df):
        assert student_t_cdf(student_t_quantile(p, df), df) == pytest.approx(p, abs=1e-9)
