"""Reduced and entropy-damped stability scores for benchmark observations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .errors import (
    DenominatorBelowOne,
    DuplicateKey,
    EmptyDataset,
    InvalidCoefficients,
    MissingField,
    NegativeBarrier,
    NonFinite,
    OutOfRange,
)

NUMERIC_FIELDS = ("utility", "entropy", "integration", "reflective")
DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True, order=True)
class Observation:
    model_id: str
    scenario_id: str
    utility: float
    entropy: float
    integration: float
    reflective: float

    @property
    def key(self) -> tuple[str, str]:
        return (self.model_id, self.scenario_id)


@dataclass(frozen=True)
class CoefficientSet:
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.5
    lambda_: float = 0.5

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "lambda_"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidCoefficients(f"{name.rstrip('_')} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class ScoreRecord:
    observation: Observation
    barrier: float
    denominator: float
    reduced: float
    generalized: float
    gain: float


def validate_observation(raw: Mapping[str, Any] | Observation, tolerance: float = DEFAULT_TOLERANCE) -> Observation:
    """Build an :class:`Observation` from a mapping, checking bounds.

    Values that overshoot ``[0, 1]`` by no more than ``tolerance`` are clamped
    onto the bound; anything further out raises :class:`OutOfRange`.
    """
    if isinstance(raw, Observation):
        raw = {
            "model_id": raw.model_id,
            "scenario_id": raw.scenario_id,
            **{f: getattr(raw, f) for f in NUMERIC_FIELDS},
        }
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    for name in ("model_id", "scenario_id", *NUMERIC_FIELDS):
        if name not in raw or raw[name] is None or raw[name] == "":
            raise MissingField(name)
    values = {}
    for name in NUMERIC_FIELDS:
        try:
            value = float(raw[name])
        except (TypeError, ValueError) as exc:
            raise NonFinite(f"{name}: not a number: {raw[name]!r}") from exc
        if not math.isfinite(value):
            raise NonFinite(f"{name}: {value!r}")
        if value < -tolerance or value > 1.0 + tolerance:
            raise OutOfRange(f"{name}={value!r} outside [0, 1]")
        values[name] = min(max(value, 0.0), 1.0)
    return Observation(str(raw["model_id"]), str(raw["scenario_id"]), **values)


def barrier_term(coeffs: CoefficientSet, integration: float, reflective: float) -> float:
    return coeffs.gamma * integration + coeffs.lambda_ * reflective


def damping_denominator(barrier: float) -> float:
    if barrier < 0:
        raise NegativeBarrier(f"barrier must be >= 0, got {barrier!r}")
    return 1.0 + barrier


def reduced_score(coeffs: CoefficientSet, utility: float, entropy: float) -> float:
    return coeffs.alpha * utility - coeffs.beta * entropy


def generalized_score(utility: float, entropy: float, denominator: float) -> float:
    if not denominator >= 1.0:
        raise DenominatorBelowOne(f"denominator must be >= 1, got {denominator!r}")
    return utility - entropy / denominator


def score_observation(obs: Observation, coeffs: CoefficientSet | None = None) -> ScoreRecord:
    coeffs = coeffs or CoefficientSet()
    b = barrier_term(coeffs, obs.integration, obs.reflective)
    d = damping_denominator(b)
    e = reduced_score(coeffs, obs.utility, obs.entropy)
    e_star = generalized_score(obs.utility, obs.entropy, d)
    return ScoreRecord(obs, b, d, e, e_star, e_star - e)


def canonical_order(observations: Iterable[Observation]) -> list[Observation]:
    """Sort by (model_id, scenario_id), rejecting empty input and duplicate keys."""
    ordered = sorted(observations, key=lambda o: o.key)
    if not ordered:
        raise EmptyDataset("no observations")
    for prev, cur in zip(ordered, ordered[1:]):
        if prev.key == cur.key:
            raise DuplicateKey(f"duplicate (model, scenario): {cur.key}")
    return ordered


def score_dataset(observations: Iterable[Observation], coeffs: CoefficientSet | None = None) -> list[ScoreRecord]:
    coeffs = coeffs or CoefficientSet()
    return [score_observation(o, coeffs) for o in canonical_order(observations)]
