"""Sweeps of the damping coefficients over a (gamma, lambda) grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import stats
from .errors import EmptyLevels, SingleModel, ValidationError
from .scoring import CoefficientSet, Observation, ScoreRecord, canonical_order, score_dataset

PAPER_LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)
# settings reported individually alongside the grid
SELECTED_SETTINGS = ((0.0, 0.0), (0.0, 0.25), (0.5, 0.5), (1.0, 1.0))


@dataclass(frozen=True)
class SensitivityCell:
    gamma: float
    lambda_: float
    mean_gain: float
    min_gain: float
    mean_generalized: float
    proportion_positive: float
    model_ranking: tuple[str, ...]


@dataclass(frozen=True)
class SensitivityGrid:
    grid_values: tuple[float, ...]
    cells: tuple[tuple[SensitivityCell, ...], ...]  # cells[i][j]: gamma=levels[i], lambda=levels[j]

    def cell(self, gamma: float, lambda_: float) -> SensitivityCell:
        return self.cells[self.grid_values.index(gamma)][self.grid_values.index(lambda_)]

    def iter_cells(self) -> Iterable[SensitivityCell]:
        for row in self.cells:
            yield from row


@dataclass(frozen=True)
class MonotonicityViolation:
    axis: str  # "lambda" (along a row) or "gamma" (down a column)
    before: tuple[float, float]
    after: tuple[float, float]
    drop: float


@dataclass(frozen=True)
class RankingStability:
    groups: dict[tuple[str, ...], list[tuple[float, float]]] = field(default_factory=dict)

    @property
    def stable(self) -> bool:
        return len(self.groups) == 1

    @property
    def ranking(self) -> tuple[str, ...] | None:
        return next(iter(self.groups)) if self.stable else None


def rank_models(records: Sequence[ScoreRecord]) -> tuple[str, ...]:
    """Model ids by mean generalized score, highest first; ties by id."""
    by_model: dict[str, list[float]] = {}
    for rec in records:
        by_model.setdefault(rec.observation.model_id, []).append(rec.generalized)
    means = {m: stats.mean(v) for m, v in by_model.items()}
    return tuple(sorted(means, key=lambda m: (-means[m], m)))


def summarize_cell(records: Sequence[ScoreRecord], gamma: float, lambda_: float) -> SensitivityCell:
    gains = [r.gain for r in records]
    return SensitivityCell(
        gamma=gamma,
        lambda_=lambda_,
        mean_gain=stats.mean(gains),
        min_gain=min(gains),
        mean_generalized=stats.mean([r.generalized for r in records]),
        proportion_positive=sum(1 for g in gains if g > 0) / len(gains),
        model_ranking=rank_models(records),
    )


def evaluate_cell(
    observations: Iterable[Observation],
    gamma: float,
    lambda_: float,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> SensitivityCell:
    coeffs = CoefficientSet(alpha, beta, gamma, lambda_)
    return summarize_cell(score_dataset(observations, coeffs), gamma, lambda_)


def evaluate_grid(
    observations: Iterable[Observation],
    levels: Sequence[float] = PAPER_LEVELS,
    alpha: float = 1.0,
    beta: float = 1.0,
) -> SensitivityGrid:
    levels = tuple(sorted(float(v) for v in levels))
    if not levels:
        raise EmptyLevels("no coefficient levels given")
    if levels[0] < 0:
        raise ValidationError("coefficient levels must be >= 0")
    if len(set(levels)) != len(levels):
        raise ValidationError("coefficient levels must be distinct")
    ordered = canonical_order(observations)
    cells = tuple(
        tuple(evaluate_cell(ordered, g, lam, alpha, beta) for lam in levels)
        for g in levels
    )
    return SensitivityGrid(levels, cells)


def check_monotonicity(grid: SensitivityGrid) -> list[MonotonicityViolation]:
    """Report every adjacent pair where mean gain decreases along an axis."""
    violations = []
    k = len(grid.grid_values)
    for i in range(k):
        for j in range(k - 1):
            a, b = grid.cells[i][j], grid.cells[i][j + 1]
            if b.mean_gain < a.mean_gain:
                violations.append(MonotonicityViolation(
                    "lambda", (a.gamma, a.lambda_), (b.gamma, b.lambda_), a.mean_gain - b.mean_gain))
    for j in range(k):
        for i in range(k - 1):
            a, b = grid.cells[i][j], grid.cells[i + 1][j]
            if b.mean_gain < a.mean_gain:
                violations.append(MonotonicityViolation(
                    "gamma", (a.gamma, a.lambda_), (b.gamma, b.lambda_), a.mean_gain - b.mean_gain))
    return violations


def ranking_stability(grid: SensitivityGrid) -> RankingStability:
    groups: dict[tuple[str, ...], list[tuple[float, float]]] = {}
    for cell in grid.iter_cells():
        if len(cell.model_ranking) < 2:
            raise SingleModel("ranking stability needs at least two models")
        groups.setdefault(cell.model_ranking, []).append((cell.gamma, cell.lambda_))
    return RankingStability(groups)


def grid_from_values(levels: Sequence[float], mean_gains: Sequence[Sequence[float]]) -> SensitivityGrid:
    """Wrap a published matrix of mean gains (rows gamma, columns lambda) as a grid."""
    cells = tuple(
        tuple(
            SensitivityCell(g, lam, mean_gains[i][j], mean_gains[i][j], float("nan"), float("nan"), ())
            for j, lam in enumerate(levels)
        )
        for i, g in enumerate(levels)
    )
    return SensitivityGrid(tuple(levels), cells)
