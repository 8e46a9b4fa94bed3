"""Stability scoring of benchmark observations under linear and entropy-damped formulations."""

__version__ = "0.1.0"

from .errors import StabgainError, ValidationError, NonConvergence
from .scoring import (
    CoefficientSet,
    Observation,
    ScoreRecord,
    barrier_term,
    damping_denominator,
    generalized_score,
    reduced_score,
    score_dataset,
    score_observation,
    validate_observation,
)

__all__ = [
    "CoefficientSet",
    "NonConvergence",
    "Observation",
    "ScoreRecord",
    "StabgainError",
    "ValidationError",
    "barrier_term",
    "damping_denominator",
    "generalized_score",
    "reduced_score",
    "score_dataset",
    "score_observation",
    "validate_observation",
]
