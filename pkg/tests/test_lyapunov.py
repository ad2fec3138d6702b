import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import compproc as cp

LV = cp.TypeIModel(1, 1, 1, 1)
T2 = cp.TypeIIModel(1, 1, 1, 1, 1, 1)
OK = cp.TypeIIModel(1, 1, 0, 0, 1, 1)


class TestTestFunctions:
    def test_power_branches(self):
        f = cp.PowerLyapunov(0.3, 0.6)
        assert f((8, 0)) == pytest.approx(8**-0.3 - 8**-0.6, rel=1e-15)
        assert f((8, 1)) == pytest.approx(8**-0.3, rel=1e-15)
        assert f((8, 2)) == f((8, 9)) == 1.0
        assert math.isinf(f((0, 1)))

    def test_power_window_validated(self):
        with pytest.raises(ValueError):
            cp.PowerLyapunov(0.6, 0.3)
        with pytest.raises(ValueError):
            cp.PowerLyapunov(0.0, 0.5)

    def test_power_positive_and_eventually_decreasing(self):
        # y = 1 branch decreases everywhere; the y = 0 branch rises from 0 to
        # a hump at (mu/nu)**(1/(mu-nu)) and decreases past it, which is the
        # range where the confinement argument evaluates it
        f = cp.PowerLyapunov(0.3, 0.6)
        xs = np.arange(1, 10**4, dtype=float)
        v1 = f.value_level(1, xs)
        assert np.all(v1 > 0) and np.all(np.diff(v1) < 0)
        v0 = f.value_level(0, xs)
        assert v0[0] == 0.0 and np.all(v0[1:] > 0)
        hump = math.ceil((0.6 / 0.3) ** (1 / (0.6 - 0.3)))
        assert np.all(np.diff(v0[hump:]) < 0)
        assert np.all(np.diff(v0[:hump - 1]) > 0)

    def test_log_branches(self):
        g = cp.LogLyapunov(2.0, 1.0)
        x = 50
        lx = math.log(x)
        assert g((x, 2)) == pytest.approx(1 / lx, rel=1e-15)
        assert g((x, 1)) == pytest.approx(1 / lx - 1 / lx**3, rel=1e-15)
        assert g((x, 0)) == pytest.approx(
            1 / lx - 1 / lx**3 - 2.0 / (x * lx**2) + 1 / (x * lx**3), rel=1e-14)
        assert g((x, 3)) == 1.0
        assert math.isinf(g((1, 0)))
        vec = g.value_level(1, np.array([1.0, 2.0]))
        assert math.isinf(vec[0]) and np.isfinite(vec[1])


class TestApplyGenerator:
    def test_kills_constants(self):
        for s in [(0, 0), (3, 7), (100, 1)]:
            assert cp.apply_generator(T2, lambda _: 4.2, s) == 0.0

    def test_matches_axis_formula_transcription(self):
        # closed form at (x, 0) for the non-linear model with identity
        # interaction: (l1+a1*x) * (power differences) + l2 * x**-mu
        f = cp.PowerLyapunov(0.3, 0.6)
        for x in (5, 50, 500):
            expected = (1 + x) * ((x + 1)**-0.3 - x**-0.3
                                  - (x + 1)**-0.6 + x**-0.6) + x**-0.6
            assert cp.apply_generator(LV, f, (x, 0)) == \
                pytest.approx(expected, rel=1e-12)

    def test_projection_equals_mean_drift(self):
        for s in [(4, 9), (1, 1), (30, 2)]:
            drift = cp.mean_drift(T2, s)
            assert cp.apply_generator(T2, lambda st: st[0], s) == drift[0]
            assert cp.apply_generator(T2, lambda st: st[1], s) == drift[1]

    def test_domain_error_names_the_state(self):
        f = cp.PowerLyapunov(0.3, 0.6)
        with pytest.raises(cp.GeneratorDomainError) as err:
            cp.apply_generator(LV, f, (1, 1))  # left target (0, 1) singular
        assert err.value.state == (0, 1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 200), st.integers(0, 200),
           st.floats(-3, 3, allow_nan=False), st.floats(-3, 3, allow_nan=False))
    def test_linearity(self, x, y, a, b):
        f = lambda s: math.sqrt(s[0] + 1) + s[1]
        g = lambda s: s[0] * s[1] / 7.0
        combo = lambda s: a * f(s) + b * g(s)
        lhs = cp.apply_generator(T2, combo, (x, y))
        gf = cp.apply_generator(T2, f, (x, y))
        gg = cp.apply_generator(T2, g, (x, y))
        # cancellation inside the rate-weighted sum scales with the
        # intermediate magnitudes, not with the (possibly tiny) result
        total = cp.enumerate_transitions(T2, (x, y)).total
        scale = total * (abs(a) * abs(f((x, y))) + abs(b) * abs(g((x, y))) + 1.0)
        assert lhs == pytest.approx(a * gf + b * gg, abs=1e-13 * scale)

    @pytest.mark.parametrize("model,f,y", [
        (LV, cp.PowerLyapunov(0.3, 0.6), 0),
        (LV, cp.PowerLyapunov(0.3, 0.6), 1),
        (T2, cp.PowerLyapunov(0.3, 0.6), 1),
        (OK, cp.LogLyapunov(1, 1), 0),
        (OK, cp.LogLyapunov(1, 1), 2),
    ])
    def test_vectorised_level_matches_pointwise(self, model, f, y):
        xs = np.array([3, 4, 10, 117, 9999], dtype=float)
        vec = cp.generator_on_level(model, f, y, xs)
        for i, x in enumerate(xs.astype(int)):
            assert vec[i] == pytest.approx(
                cp.apply_generator(model, f, (int(x), y)), rel=1e-12, abs=1e-14)


class TestCertify:
    def test_lv_power_certificate(self):
        rep = cp.certify(LV, cp.PowerLyapunov(0.3, 0.6), {0, 1}, 10**4)
        assert rep.certified
        assert 0 < rep.minimal_N < 10**3
        assert rep.stability_flag
        assert rep.scan_start == {0: 1, 1: 2}
        assert rep.violations == []

    def test_type2_power_certificate(self):
        rep = cp.certify(T2, cp.PowerLyapunov(0.3, 0.6), {0, 1}, 10**4)
        assert rep.certified and rep.stability_flag

    def test_okcorral_log_certificate(self):
        rep = cp.certify(OK, cp.LogLyapunov(1, 1), {0, 1, 2}, 10**4)
        assert rep.certified and rep.stability_flag
        assert rep.scan_start == {0: 2, 1: 3, 2: 3}

    def test_not_certified_reported_not_raised(self):
        # with zero birth slope the power function has positive drift at
        # level 0 for all large x, so no threshold exists
        rep = cp.certify(OK, cp.PowerLyapunov(0.3, 0.6), {0}, 2000,
                         check_stability=False)
        assert not rep.certified
        assert rep.minimal_N is None
        assert rep.violations

    def test_constant_function_certifies_trivially(self):
        class Const:
            function_id = "const"
            def __call__(self, s):
                return 1.0
            def value_level(self, y, xs):
                return np.ones_like(np.asarray(xs, dtype=float))
        rep = cp.certify(T2, Const(), {0, 1}, 2000)
        assert rep.certified and rep.minimal_N == 0 and rep.stability_flag

    def test_summary_lines_render(self):
        rep = cp.certify(T2, cp.PowerLyapunov(0.3, 0.6), {0, 1}, 3000)
        text = "\n".join(rep.summary_lines())
        assert "certified" in text and "minimal_N" in text


class TestLeadingOrder:
    def test_type2_power_level0(self):
        term = cp.leading_order(T2, cp.PowerLyapunov(0.3, 0.6), 0)
        assert term.coefficient == pytest.approx(-0.3)
        assert term.negative

    def test_type1_power_level1_exponent(self):
        term = cp.leading_order(LV, cp.PowerLyapunov(0.3, 0.6), 1)
        assert term.coefficient == pytest.approx(-1.0)
        assert "x^0.4" in term.scale
        assert term.negative

    def test_log_level1_ratio_coefficient(self):
        m = cp.TypeIIModel(3, 2, 0, 0, 1, 1.5)
        term = cp.leading_order(m, cp.LogLyapunov(3, 2), 1)
        assert term.coefficient == pytest.approx(-1.5 * 3 / 2)
        assert term.negative

    def test_unsupported_pairings(self):
        with pytest.raises(ValueError):
            cp.leading_order(OK, cp.PowerLyapunov(0.3, 0.6), 0)
        with pytest.raises(ValueError):
            cp.leading_order(T2, cp.LogLyapunov(1, 1), 0)
        with pytest.raises(ValueError):
            cp.leading_order(T2, cp.PowerLyapunov(0.3, 0.6), 5)
        with pytest.raises(ValueError):
            # window violated: mu >= min(rho1, rho2)
            cp.leading_order(cp.TypeIModel(1, 1, 1, 1,
                                           g2=cp.InteractionFunction(1, 0.5)),
                             cp.PowerLyapunov(0.3, 0.6), 0)


class TestHittingBound:
    REGION = staticmethod(lambda s: (s[0] >= 1 and s[1] >= 4)
                          or (s[1] >= 1 and s[0] >= 4))

    def test_lv_drift_bound_verified(self):
        hb = cp.expected_hitting_bound(LV, lambda s: s[0] + s[1], self.REGION,
                                       1.0, 120, 120)
        assert hb.verified
        assert hb.bound((50, 50)) == pytest.approx(100.0)
        assert hb.bound((0, 0)) == 0.0

    def test_epsilon_too_large_reports_violation(self):
        hb = cp.expected_hitting_bound(LV, lambda s: s[0] + s[1], self.REGION,
                                       1.5, 120, 120)
        assert not hb.verified
        assert hb.violation == ((1, 4), pytest.approx(-1.0))
        with pytest.raises(ValueError):
            hb.bound((50, 50))

    def test_empty_region_vacuous(self):
        hb = cp.expected_hitting_bound(LV, lambda s: s[0] + s[1],
                                       lambda s: False, 1.0, 50, 50)
        assert hb.verified and hb.states_checked == 0
        assert hb.bound((10, 10)) == 0.0
