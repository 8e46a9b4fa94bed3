import math
import random
import sys

import pytest
from hypothesis import given, settings, strategies as st

from stabgain.errors import (
    DenominatorBelowOne,
    DuplicateKey,
    EmptyDataset,
    InvalidCoefficients,
    MissingField,
    NegativeBarrier,
    NonFinite,
    OutOfRange,
)
from stabgain.scoring import (
    CoefficientSet,
    Observation,
    barrier_term,
    damping_denominator,
    generalized_score,
    reduced_score,
    score_dataset,
    score_observation,
    validate_observation,
)

from conftest import obs

DEFAULTS = CoefficientSet()
EPS = sys.float_info.epsilon
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def raw(**overrides):
    base = {"model_id": "m", "scenario_id": "s", "utility": 0.9355, "entropy": 0.1574,
            "integration": 0.7724, "reflective": 0.7857}
    base.update(overrides)
    return base


def test_default_coefficients():
    assert (DEFAULTS.alpha, DEFAULTS.beta, DEFAULTS.gamma, DEFAULTS.lambda_) == (1.0, 1.0, 0.5, 0.5)


@pytest.mark.parametrize("bad", [-0.1, math.inf, math.nan])
def test_coefficients_rejected(bad):
    with pytest.raises(InvalidCoefficients):
        CoefficientSet(gamma=bad)


class TestValidate:
    def test_accepts_table_bounds_unchanged(self):
        o = validate_observation(raw())
        assert (o.utility, o.entropy, o.integration, o.reflective) == (0.9355, 0.1574, 0.7724, 0.7857)

    def test_clamps_within_tolerance(self):
        assert validate_observation(raw(utility=1.0 + 1e-12)).utility == 1.0
        assert validate_observation(raw(entropy=-1e-10)).entropy == 0.0

    def test_rejects_beyond_bound(self):
        with pytest.raises(OutOfRange):
            validate_observation(raw(entropy=1.2))

    def test_custom_tolerance(self):
        with pytest.raises(OutOfRange):
            validate_observation(raw(utility=1.0 + 1e-12), tolerance=0.0)
        assert validate_observation(raw(utility=1.01), tolerance=0.05).utility == 1.0

    @pytest.mark.parametrize("value", ["nan", math.inf, "abc"])
    def test_non_finite(self, value):
        with pytest.raises(NonFinite):
            validate_observation(raw(utility=value))

    def test_missing(self):
        r = raw()
        del r["reflective"]
        with pytest.raises(MissingField):
            validate_observation(r)

    def test_parses_strings(self):
        assert validate_observation(raw(utility="0.5")).utility == 0.5


class TestComponents:
    def test_barrier(self):
        assert barrier_term(DEFAULTS, 0.8594, 0.9530) == pytest.approx(0.9062, abs=5e-5)
        assert barrier_term(DEFAULTS, 0.8785, 0.9018) == pytest.approx(0.8901, abs=5e-5)
        assert barrier_term(CoefficientSet(gamma=0, lambda_=0), 0.7, 0.3) == 0.0

    def test_denominator(self):
        assert damping_denominator(0.9062) == pytest.approx(1.9062, abs=1e-15)
        assert damping_denominator(0.9539) == pytest.approx(1.9539, abs=1e-15)
        assert damping_denominator(0.0) == 1.0
        with pytest.raises(NegativeBarrier):
            damping_denominator(-0.01)

    def test_reduced(self):
        assert reduced_score(DEFAULTS, 0.9545, 0.1480) == pytest.approx(0.8065, abs=5e-5)
        assert reduced_score(DEFAULTS, 0.9895, 0.0120) == pytest.approx(0.9775, abs=5e-5)
        assert reduced_score(DEFAULTS, 0.42, 0.0) == 0.42

    def test_generalized(self):
        assert generalized_score(0.9695, 0.0517, 1.9062) == pytest.approx(0.9424, abs=5e-5)
        assert generalized_score(0.9545, 0.1480, 1.8485) == pytest.approx(0.8744, abs=5e-5)
        assert generalized_score(0.42, 0.0, 1.7) == 0.42
        with pytest.raises(DenominatorBelowOne):
            generalized_score(0.5, 0.1, 0.99)


def test_score_observation_deepseek_row():
    rec = score_observation(obs(u=0.9695, s=0.0517, i=0.8594, c=0.9530))
    assert rec.barrier == pytest.approx(0.9062, abs=5e-5)
    assert rec.denominator == pytest.approx(1.9062, abs=5e-5)
    assert rec.reduced == pytest.approx(0.9178, abs=5e-5)
    assert rec.generalized == pytest.approx(0.9424, abs=5e-5)
    assert rec.gain == pytest.approx(0.0246, abs=5e-5)


def test_score_observation_trivial_and_grok():
    rec = score_observation(obs(u=1, s=0, i=0, c=0))
    assert (rec.barrier, rec.denominator, rec.reduced, rec.generalized, rec.gain) == (0, 1, 1, 1, 0)
    assert score_observation(obs(u=0.9895, s=0.0120, i=0.7968, c=0.9069)).gain == pytest.approx(0.0055, abs=5e-5)


class TestScoreDataset:
    def test_canonical_order_independent_of_input(self, paper_data):
        shuffled = list(paper_data)
        random.Random(7).shuffle(shuffled)
        assert score_dataset(shuffled) == score_dataset(paper_data)

    def test_paper_data_all_positive(self, paper_data):
        recs = score_dataset(paper_data)
        assert len(recs) == 80
        assert all(r.observation.entropy > 0 for r in recs)
        assert all(r.gain > 0 for r in recs)

    def test_single(self):
        o = obs()
        assert score_dataset([o]) == [score_observation(o)]

    def test_errors(self):
        with pytest.raises(EmptyDataset):
            score_dataset([])
        with pytest.raises(DuplicateKey):
            score_dataset([obs(), obs(u=0.1)])


@settings(max_examples=300)
@given(u=unit, s=unit, i=unit, c=unit, g=unit, lam=unit)
def test_record_invariants(u, s, i, c, g, lam):
    rec = score_observation(Observation("m", "s", u, s, i, c), CoefficientSet(1, 1, g, lam))
    assert rec.denominator == 1 + rec.barrier
    assert rec.gain == rec.generalized - rec.reduced
    assert rec.denominator >= 1
    assert rec.gain == pytest.approx(s * rec.barrier / (1 + rec.barrier), abs=1e-12)
    # strictness needs the gain to be resolvable next to U and S
    if s * rec.barrier / (1 + rec.barrier) > 4 * EPS:
        assert rec.generalized > rec.reduced
    if s == 0 or rec.barrier == 0:
        assert rec.gain == 0


@settings(max_examples=200)
@given(u=unit, s=unit, b1=st.floats(0, 2), b2=st.floats(0, 2))
def test_generalized_monotone_in_barrier(u, s, b1, b2):
    lo, hi = sorted((b1, b2))
    assert generalized_score(u, s, 1 + lo) <= generalized_score(u, s, 1 + hi)
    if s * (hi - lo) / ((1 + hi) * (1 + lo)) > 4 * EPS:
        assert generalized_score(u, s, 1 + lo) < generalized_score(u, s, 1 + hi)
