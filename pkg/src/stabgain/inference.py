"""Paired t-test, Wilcoxon signed-rank test and Pearson correlation."""

from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass
from typing import Sequence

from . import stats
from .errors import (
    AllZeroDifferences,
    LengthMismatch,
    TooFewObservations,
    ValidationError,
    ZeroVariance,
)

P_FLOOR = sys.float_info.min * sys.float_info.epsilon  # smallest positive double
EXACT_WILCOXON_MAX_N = 12


@dataclass(frozen=True)
class PairedTestResult:
    n: int
    mean_diff: float
    sd_diff: float
    t_statistic: float
    df: int
    p_two_sided: float
    ci_low: float
    ci_high: float
    ci_level: float


@dataclass(frozen=True)
class WilcoxonResult:
    n_effective: int
    w_plus: float
    w_minus: float
    z_statistic: float
    p_two_sided: float
    exact: bool = False


@dataclass(frozen=True)
class CorrelationResult:
    n: int
    r: float
    t_statistic: float
    df: int
    p_two_sided: float
    degenerate: bool = False


def _floor_p(p: float) -> float:
    return max(p, P_FLOOR)


def _paired_lengths(a: Sequence[float], b: Sequence[float]) -> None:
    if len(a) != len(b):
        raise LengthMismatch(f"samples have lengths {len(a)} and {len(b)}")


def paired_t_from_summary(n: int, mean_diff: float, sd_diff: float, ci_level: float = 0.95) -> PairedTestResult:
    """Paired t-test from the moments of the differences alone."""
    if n < 2:
        raise TooFewObservations("paired t-test needs n >= 2")
    if not sd_diff > 0:
        raise ZeroVariance("differences have zero variance")
    if not 0 < ci_level < 1:
        raise ValidationError(f"ci_level must lie in (0, 1), got {ci_level!r}")
    df = n - 1
    se = sd_diff / math.sqrt(n)
    t = mean_diff / se
    half = stats.student_t_quantile((1 + ci_level) / 2, df) * se
    return PairedTestResult(
        n=n,
        mean_diff=mean_diff,
        sd_diff=sd_diff,
        t_statistic=t,
        df=df,
        p_two_sided=_floor_p(stats.student_t_two_sided_p(t, df)),
        ci_low=mean_diff - half,
        ci_high=mean_diff + half,
        ci_level=ci_level,
    )


def paired_t_test(a: Sequence[float], b: Sequence[float], ci_level: float = 0.95) -> PairedTestResult:
    _paired_lengths(a, b)
    if len(a) < 2:
        raise TooFewObservations("paired t-test needs n >= 2")
    diffs = [x - y for x, y in zip(a, b)]
    sd = stats.sample_sd(diffs)
    return paired_t_from_summary(len(diffs), stats.mean(diffs), sd, ci_level)


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks, ties receiving the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = rank
        i = j + 1
    return ranks


def _exact_wilcoxon_p(ranks: list[float], w_plus: float) -> float:
    # enumerate every sign assignment; extreme = at least as far from the
    # null mean as the observed W+
    mu = sum(ranks) / 2.0
    observed = abs(w_plus - mu)
    hits = 0
    total = 0
    for signs in itertools.product((0, 1), repeat=len(ranks)):
        w = sum(r for r, s in zip(ranks, signs) if s)
        if abs(w - mu) >= observed - 1e-9:
            hits += 1
        total += 1
    return hits / total


def wilcoxon_signed_rank(a: Sequence[float], b: Sequence[float], exact: bool = False) -> WilcoxonResult:
    """Wilcoxon signed-rank test on the paired differences a - b.

    Zero differences are dropped. The default normal approximation applies
    the tie correction to the variance and no continuity correction.
    ``exact=True`` enumerates all sign assignments instead (n <= 12 only).
    """
    _paired_lengths(a, b)
    diffs = [x - y for x, y in zip(a, b) if x != y]
    n = len(diffs)
    if n == 0:
        raise AllZeroDifferences("all paired differences are zero")
    ranks = average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    w_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)

    mu = n * (n + 1) / 4.0
    var = n * (n + 1) * (2 * n + 1) / 24.0
    tie_sizes: dict[float, int] = {}
    for r in ranks:
        tie_sizes[r] = tie_sizes.get(r, 0) + 1
    var -= sum(t**3 - t for t in tie_sizes.values()) / 48.0
    z = (min(w_plus, w_minus) - mu) / math.sqrt(var) if var > 0 else 0.0

    if exact:
        if n > EXACT_WILCOXON_MAX_N:
            raise ValidationError(f"exact mode supports n <= {EXACT_WILCOXON_MAX_N}, got {n}")
        p = _exact_wilcoxon_p(ranks, w_plus)
    else:
        p = min(1.0, 2.0 * stats.normal_cdf(z))
    return WilcoxonResult(n, w_plus, w_minus, z, _floor_p(p), exact)


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    _paired_lengths(x, y)
    n = len(x)
    if n < 3:
        raise TooFewObservations("correlation needs n >= 3")
    mx = stats.mean(x)
    my = stats.mean(y)
    sxx = syy = sxy = 0.0
    for xi, yi in zip(x, y):
        dx = xi - mx
        dy = yi - my
        sxx += dx * dx
        syy += dy * dy
        sxy += dx * dy
    if sxx == 0 or syy == 0:
        raise ZeroVariance("correlation undefined for a constant sample")
    r = max(-1.0, min(1.0, sxy / math.sqrt(sxx * syy)))
    df = n - 2
    if abs(r) == 1.0:
        return CorrelationResult(n, r, math.copysign(math.inf, r), df, 0.0, degenerate=True)
    t = r * math.sqrt(df) / math.sqrt(1.0 - r * r)
    return CorrelationResult(n, r, t, df, _floor_p(stats.student_t_two_sided_p(t, df)))


def correlation_from_r(r: float, n: int) -> CorrelationResult:
    """Significance of a published correlation coefficient."""
    if n < 3:
        raise TooFewObservations("correlation needs n >= 3")
    if not -1.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [-1, 1], got {r!r}")
    df = n - 2
    if abs(r) == 1.0:
        return CorrelationResult(n, r, math.copysign(math.inf, r), df, 0.0, degenerate=True)
    t = r * math.sqrt(df) / math.sqrt(1.0 - r * r)
    return CorrelationResult(n, r, t, df, _floor_p(stats.student_t_two_sided_p(t, df)))
