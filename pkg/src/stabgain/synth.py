"""Seeded synthetic benchmark data calibrated to per-model target means."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidBounds, InvalidSpec
from .scoring import Observation, canonical_order

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
TRUNCATION_ATTEMPTS = 1000
RECENTER_ROUNDS = 50

VARIABLES = ("u", "s", "i", "c")


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (new_state, 64-bit output)."""
    state = (state + GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def prng_next(state: int) -> tuple[int, float]:
    """Advance the generator and return a uniform double in [0, 1)."""
    state, out = splitmix64(state)
    return state, (out >> 11) * 2.0**-53


def sample_truncated_normal(state: int, mean: float, sd: float, low: float, high: float) -> tuple[int, float]:
    """Box-Muller draws rejected until inside [low, high]; clamp after the cap."""
    if not low < high:
        raise InvalidBounds(f"need low < high, got [{low}, {high}]")
    if sd < 0:
        raise InvalidBounds(f"sd must be >= 0, got {sd}")
    if sd == 0:
        return state, min(max(mean, low), high)
    value = mean
    for _ in range(TRUNCATION_ATTEMPTS):
        state, u1 = prng_next(state)
        state, u2 = prng_next(state)
        z = math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2)
        value = mean + sd * z
        if low <= value <= high:
            return state, value
    return state, min(max(value, low), high)


@dataclass(frozen=True)
class ModelProfile:
    model_id: str
    mean_u: float
    mean_s: float
    mean_i: float
    mean_c: float
    sd_u: float = 0.0
    sd_s: float = 0.0
    sd_i: float = 0.0
    sd_c: float = 0.0

    def validate(self) -> None:
        for v in VARIABLES:
            m = getattr(self, f"mean_{v}")
            sd = getattr(self, f"sd_{v}")
            if not (math.isfinite(m) and 0.0 <= m <= 1.0):
                raise InvalidSpec(f"{self.model_id}: mean_{v}={m!r} outside [0, 1]")
            if not (math.isfinite(sd) and sd >= 0):
                raise InvalidSpec(f"{self.model_id}: sd_{v}={sd!r} must be >= 0")


@dataclass(frozen=True)
class SyntheticSpec:
    profiles: tuple[ModelProfile, ...]
    scenarios_per_model: int = 20
    seed: int = 42

    def validate(self) -> None:
        if not self.profiles:
            raise InvalidSpec("at least one model profile is required")
        if self.scenarios_per_model < 1:
            raise InvalidSpec("scenarios_per_model must be >= 1")
        if not 0 <= self.seed <= MASK64:
            raise InvalidSpec("seed must be an unsigned 64-bit integer")
        ids = [p.model_id for p in self.profiles]
        if len(set(ids)) != len(ids):
            raise InvalidSpec("model ids must be unique")
        for p in self.profiles:
            p.validate()


# Model means from the published per-model table; pooled SDs from the
# descriptive table, halved for within-model spread.
PAPER_MEANS = {
    "DeepSeek-V3": (0.9695, 0.0517, 0.8594, 0.9530),
    "GPT-4o": (0.9845, 0.0440, 0.9597, 0.9482),
    "Gemini-1.5": (0.9545, 0.1480, 0.8981, 0.7990),
    "Grok-3": (0.9895, 0.0120, 0.7968, 0.9069),
}
POOLED_SD = (0.0180, 0.0514, 0.0620, 0.0633)
WITHIN_MODEL_SD_SCALE = 0.5
# keeps entropy strictly positive for low-entropy models
MAX_ENTROPY_CV = 1.0 / 3.0


def paper_profiles() -> tuple[ModelProfile, ...]:
    profiles = []
    for model_id, means in PAPER_MEANS.items():
        sds = [WITHIN_MODEL_SD_SCALE * sd for sd in POOLED_SD]
        sds[1] = min(sds[1], MAX_ENTROPY_CV * means[1])
        profiles.append(ModelProfile(model_id, *means, *sds))
    return tuple(profiles)


def paper_spec(seed: int = 42, scenarios_per_model: int = 20) -> SyntheticSpec:
    return SyntheticSpec(paper_profiles(), scenarios_per_model, seed)


def generic_spec(n_models: int, scenarios_per_model: int, seed: int = 42) -> SyntheticSpec:
    """Cycle through the paper profiles, suffixing ids once they repeat."""
    if n_models < 1:
        raise InvalidSpec("need at least one model")
    base = paper_profiles()
    profiles = []
    for k in range(n_models):
        p = base[k % len(base)]
        if k >= len(base):
            p = ModelProfile(f"{p.model_id}-{k // len(base) + 1}", *(getattr(p, f) for f in (
                "mean_u", "mean_s", "mean_i", "mean_c", "sd_u", "sd_s", "sd_i", "sd_c")))
        profiles.append(p)
    return SyntheticSpec(tuple(profiles), scenarios_per_model, seed)


def _recenter(values: list[float], target: float) -> list[float]:
    # shift onto the target mean, clamp into [0, 1], repeat while clamping
    # keeps pulling the mean away
    for _ in range(RECENTER_ROUNDS):
        current = sum(values) / len(values)
        shift = target - current
        if abs(shift) < 1e-15:
            break
        values = [min(max(v + shift, 0.0), 1.0) for v in values]
    return values


def scenario_ids(count: int) -> list[str]:
    width = max(2, len(str(count)))
    return [f"S{k + 1:0{width}d}" for k in range(count)]


def generate_dataset(spec: SyntheticSpec) -> list[Observation]:
    """Observations for every profile x scenario, in canonical order.

    Draw order is fixed: profiles as listed, scenarios ascending, variables
    U, S, I, C within a scenario.
    """
    spec.validate()
    state = spec.seed
    ids = scenario_ids(spec.scenarios_per_model)
    rows: list[Observation] = []
    for p in spec.profiles:
        columns: dict[str, list[float]] = {v: [] for v in VARIABLES}
        for _ in ids:
            for v in VARIABLES:
                state, x = sample_truncated_normal(state, getattr(p, f"mean_{v}"), getattr(p, f"sd_{v}"), 0.0, 1.0)
                columns[v].append(x)
        for v in VARIABLES:
            columns[v] = _recenter(columns[v], getattr(p, f"mean_{v}"))
        for k, sid in enumerate(ids):
            rows.append(Observation(p.model_id, sid, columns["u"][k], columns["s"][k], columns["i"][k], columns["c"][k]))
    return canonical_order(rows)
