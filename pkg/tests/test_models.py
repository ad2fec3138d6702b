import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import compproc as cp
from compproc.models import _transitions, level_moves


def lotka_volterra():
    return cp.TypeIModel(1, 1, 1, 1)


class TestEnumerate:
    def test_type2_worked_example(self):
        # hand enumeration of the linear model at (3, 2)
        m = cp.TypeIIModel(1, 1, 0, 0, 1, 1)
        tr = cp.enumerate_transitions(m, (3, 2))
        assert tr.entries == (((4, 2), 1.0), ((3, 3), 1.0), ((2, 2), 2.0), ((3, 1), 3.0))
        assert tr.total == pytest.approx(7.0, rel=1e-12)

    def test_type1_axis_state_omits_dead_moves(self):
        # g(0) = 0 kills the x1-death move at (5, 0); no x2 death either
        tr = cp.enumerate_transitions(lotka_volterra(), (5, 0))
        assert tr.entries == (((6, 0), 6.0), ((5, 1), 1.0))

    def test_urn_jump_probabilities(self):
        tr = cp.enumerate_transitions(cp.AuxUrnModel(5, 1), (2, 1))
        assert tr.entries[0][1] == pytest.approx(11 / 18, rel=1e-12)
        assert tr.entries[1][1] == pytest.approx(7 / 18, rel=1e-12)
        assert tr.total == pytest.approx(1.0, rel=1e-12)

    def test_absorbing_origin(self):
        m = cp.TypeIIModel(0, 0, 1, 1, 1, 1)
        with pytest.raises(cp.AbsorbingStateError):
            cp.enumerate_transitions(m, (0, 0))

    def test_reuter_six_moves(self):
        m = cp.ReuterModel(a=lambda x, y: 1.0, b=lambda x, y: 2.0,
                           c=lambda x, y: 3.0 * x, d=lambda x, y: 4.0 * y,
                           e=lambda x, y: 0.5 * x * y, f=lambda x, y: 0.25 * x * y)
        tr = cp.enumerate_transitions(m, (2, 3))
        targets = [t for t, _ in tr.entries]
        assert targets == [(3, 3), (2, 4), (1, 3), (2, 2), (1, 4), (3, 2)]
        assert tr.total == pytest.approx(1 + 2 + 6 + 12 + 3 + 1.5, rel=1e-12)
        # boundary gating: c, e off at x1 = 0; d, f off at x2 = 0
        tr0 = cp.enumerate_transitions(m, (0, 3))
        assert all(t[0] >= 0 for t, _ in tr0.entries)
        assert [t for t, _ in tr0.entries] == [(1, 3), (0, 4), (0, 2)]

    def test_negative_rate_callback_rejected(self):
        m = cp.ReuterModel(a=lambda x, y: -1.0, b=lambda x, y: 1.0,
                           c=lambda x, y: 0.0, d=lambda x, y: 0.0)
        with pytest.raises(cp.ModelValidationError):
            cp.enumerate_transitions(m, (1, 1))

    def test_state_checks(self):
        with pytest.raises(ValueError):
            cp.enumerate_transitions(lotka_volterra(), (-1, 2))
        with pytest.raises(cp.StateOverflowError):
            cp.enumerate_transitions(lotka_volterra(), (2**63 - 1, 1))


class TestMeanDrift:
    def test_lv_symmetric_point(self):
        drift = cp.mean_drift(lotka_volterra(), (10, 10))
        assert drift == pytest.approx([-89.0, -89.0], rel=1e-12)

    def test_zero_for_absorbing(self):
        m = cp.TypeIIModel(0, 0, 1, 1, 1, 1)
        assert cp.mean_drift(m, (0, 0)) == pytest.approx([0.0, 0.0], abs=0)

    def test_type2_interior(self):
        m = cp.TypeIIModel(1, 1, 2, 2, 1, 1)
        assert cp.mean_drift(m, (4, 4)) == pytest.approx([5.0, 5.0], rel=1e-12)


class TestValidate:
    def test_strict_theorem2_lambda(self):
        m = cp.TypeIIModel(0, 1, 1, 1, 1, 1, strict_theorem2=True)
        assert any("lambda1>0" in v for v in cp.validate(m))
        assert cp.validate(cp.TypeIIModel(0, 1, 1, 1, 1, 1)) == []

    def test_interaction_index_positive(self):
        m = cp.TypeIModel(1, 1, 1, 1, g1=cp.InteractionFunction(index=0.0))
        assert any("index must be positive" in v for v in cp.validate(m))

    def test_ok_corral_with_resurrection_valid(self):
        m = cp.TypeIIModel(1, 1, 0, 0, 1, 1, strict_theorem2=True)
        assert cp.validate(m) == []

    def test_beta_required_positive(self):
        assert any("beta1" in v for v in cp.validate(cp.TypeIIModel(1, 1, 1, 1, 0, 1)))

    def test_urn(self):
        assert cp.validate(cp.AuxUrnModel(0, 1)) == []
        assert any("alpha+beta" in v for v in cp.validate(cp.AuxUrnModel(0, 0)))


class TestInteractionFunction:
    def test_zero_at_origin_even_with_negative_log_exponent(self):
        g = cp.InteractionFunction(2.0, 0.5, -1.5)
        assert g(0) == 0.0
        assert g(np.array([0.0, 1.0]))[0] == 0.0

    def test_lotka_volterra_identity(self):
        g = cp.InteractionFunction()
        assert g(7) == pytest.approx(7.0, rel=1e-15)

    def test_power_log_value(self):
        g = cp.InteractionFunction(2.0, 1.5, 2.0)
        z = 3.0
        assert g(z) == pytest.approx(2.0 * z**1.5 * np.log1p(z) ** 2.0, rel=1e-15)

    def test_monotone_for_nonneg_eta(self):
        g = cp.InteractionFunction(1.0, 0.7, 1.0)
        vals = g(np.arange(0, 50, dtype=float))
        assert np.all(np.diff(vals) > 0)


@st.composite
def type2_models(draw):
    pos = st.floats(0.05, 8.0, allow_nan=False)
    return cp.TypeIIModel(draw(pos), draw(pos), draw(pos), draw(pos),
                          draw(pos), draw(pos))


@settings(max_examples=60, deadline=None)
@given(type2_models(), st.integers(0, 400), st.integers(0, 400))
def test_transitions_invariants(m, x, y):
    tr = _transitions(m, (x, y))
    assert all(rate > 0 and np.isfinite(rate) for _, rate in tr.entries)
    assert tr.total == pytest.approx(sum(r for _, r in tr.entries), rel=1e-12)
    for (tx, ty), _ in tr.entries:
        assert abs(tx - x) + abs(ty - y) == 1
        assert tx >= 0 and ty >= 0


@settings(max_examples=60, deadline=None)
@given(type2_models(), st.integers(1, 500), st.integers(1, 500))
def test_type2_interior_total_is_R(m, x, y):
    tr = cp.enumerate_transitions(m, (x, y))
    assert tr.total == pytest.approx(cp.total_rate_type2(m, (x, y)), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 60), st.integers(0, 60))
def test_urn_probabilities_sum_to_one(x, y):
    if x + y == 0:
        return
    tr = _transitions(cp.AuxUrnModel(3.5, 1.25), (x, y))
    assert tr.total == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("model", [
    lotka_volterra(),
    cp.TypeIModel(1.5, 0.7, 2.0, 0.3, cp.InteractionFunction(2, 1.5, 1.0),
                  cp.InteractionFunction(0.5, 0.8, 0.0)),
    cp.TypeIIModel(1, 2, 3, 0.5, 0.25, 4),
    cp.TypeIIModel(1, 1, 0, 0, 1, 1),
])
@pytest.mark.parametrize("y", [0, 1, 2, 7])
def test_level_moves_match_pointwise(model, y):
    xs = np.array([1, 2, 3, 17, 256], dtype=float)
    vector = {(dx, dy): r for dx, dy, r in level_moves(model, y, xs)}
    for i, x in enumerate(xs.astype(int)):
        tr = _transitions(model, (int(x), y))
        pointwise = {(t[0] - int(x), t[1] - y): r for t, r in tr.entries}
        collected = {mv: r[i] for mv, r in vector.items() if r[i] > 0}
        assert collected == pytest.approx(pointwise, rel=1e-12)


def test_swapped_models():
    m = cp.TypeIIModel(1, 2, 3, 4, 5, 6)
    s = m.swapped()
    assert (s.lambda1, s.lambda2, s.alpha1, s.alpha2, s.beta1, s.beta2) == \
        (2, 1, 4, 3, 6, 5)
    tr = cp.enumerate_transitions(m, (3, 8))
    trs = cp.enumerate_transitions(s, (8, 3))
    flipped = tuple((((ty, tx), r)) for (tx, ty), r in trs.entries)
    assert sorted(flipped) == sorted(tr.entries)
