"""Statistical battery: group comparisons, correlation and density estimation.

Everything here is a pure function over immutable inputs. Tail
probabilities come from scipy.special (erfc / incomplete-beta based),
accurate far beyond the 1e-10 the tests require; no lookup tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from scipy import special

from .corpus import Gender
from .errors import DegenerateStatisticsError, ValidationError


class TestKind(str, Enum):
    Z_PROPORTIONS = "z_proportions"
    T_INDEPENDENT = "t_independent"
    MANN_WHITNEY_U = "mann_whitney_u"


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    test_kind: TestKind

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p-value out of [0,1]: {self.p_value}")


@dataclass(frozen=True)
class PointBiserialResult:
    r_pb: float
    n_m: int
    n_f: int
    t_stat: float
    p_value: float

    @property
    def n(self) -> int:
        return self.n_m + self.n_f

    def __post_init__(self) -> None:
        if abs(self.r_pb) > 1 + 1e-12:
            raise ValidationError(f"|r_pb| must be <= 1, got {self.r_pb}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p-value out of [0,1]: {self.p_value}")


@dataclass(frozen=True)
class DensityCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float


@dataclass(frozen=True)
class DescriptiveStats:
    count: int
    pct_zero: float
    mean: float
    median: float
    max: float
    stdev: float
    iqr: float


def _normal_sf(z: float) -> float:
    """Upper-tail probability of the standard normal."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _t_sf(t: float, df: int) -> float:
    """Upper-tail probability of Student's t with df degrees of freedom."""
    return float(special.stdtr(df, -t))


def point_biserial(fss: Sequence[float], genders: Sequence[Gender]) -> PointBiserialResult:
    """Correlation between a continuous score and binary gender.

    r = (mean_M - mean_F) / SD * sqrt(n_M * n_F / (N * (N - 1)))

    with SD the sample (N-1) standard deviation of the whole sample, so
    the value is identical to the Pearson correlation of the scores
    against a 0/1 male indicator. Significance is two-sided via
    t = r * sqrt((N - 2) / (1 - r^2)) on N - 2 degrees of freedom.
    """
    values = np.asarray(fss, dtype=float)
    if len(values) != len(genders):
        raise ValidationError("fss and genders must have equal length")
    male = np.array([g is Gender.M for g in genders])
    n_m = int(male.sum())
    n_f = len(values) - n_m
    if n_m < 2 or n_f < 2:
        raise DegenerateStatisticsError(
            f"point-biserial needs >= 2 members per gender, got M={n_m}, F={n_f}"
        )
    sd = float(values.std(ddof=1))
    if sd == 0.0:
        raise DegenerateStatisticsError("point-biserial undefined: zero variance sample")

    n = n_m + n_f
    r = (float(values[male].mean()) - float(values[~male].mean())) / sd * math.sqrt(
        n_m * n_f / (n * (n - 1.0))
    )
    df = n - 2
    if 1.0 - r * r <= 0.0:
        t_stat = math.copysign(math.inf, r)
        p_value = 0.0
    else:
        t_stat = r * math.sqrt(df / (1.0 - r * r))
        p_value = 2.0 * _t_sf(abs(t_stat), df)
    return PointBiserialResult(r, n_m, n_f, t_stat, min(p_value, 1.0))


def z_test_proportions(k1: int, n1: int, k2: int, n2: int) -> TestResult:
    """Two-sided pooled z-test for equality of two proportions."""
    for k, n, label in ((k1, n1, "1"), (k2, n2, "2")):
        if n < 1:
            raise ValidationError(f"group {label}: n must be >= 1, got {n}")
        if not 0 <= k <= n:
            raise ValidationError(f"group {label}: need 0 <= k <= n, got k={k}, n={n}")
    pooled = (k1 + k2) / (n1 + n2)
    if pooled in (0.0, 1.0):
        raise DegenerateStatisticsError(
            f"z-test undefined: pooled proportion is {pooled:g}"
        )
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (k1 / n1 - k2 / n2) / se
    return TestResult(z, min(2.0 * _normal_sf(abs(z)), 1.0), TestKind.Z_PROPORTIONS)


def t_test_independent(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Pooled-variance Student's t-test, two-sided, df = nA + nB - 2."""
    xs = np.asarray(a, dtype=float)
    ys = np.asarray(b, dtype=float)
    if len(xs) < 2 or len(ys) < 2:
        raise ValidationError("each sample needs >= 2 values")
    df = len(xs) + len(ys) - 2
    pooled_var = ((len(xs) - 1) * xs.var(ddof=1) + (len(ys) - 1) * ys.var(ddof=1)) / df
    if pooled_var <= 0.0:
        raise DegenerateStatisticsError("t-test undefined: zero pooled variance")
    t = (float(xs.mean()) - float(ys.mean())) / math.sqrt(
        pooled_var * (1.0 / len(xs) + 1.0 / len(ys))
    )
    return TestResult(t, min(2.0 * _t_sf(abs(t), df), 1.0), TestKind.T_INDEPENDENT)


def mann_whitney_u(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Rank-sum test via the tie-corrected normal approximation.

    The reported statistic is the z score of U for the first sample; no
    continuity correction, matching the asymptotic two-sided procedure.
    """
    xs = np.asarray(a, dtype=float)
    ys = np.asarray(b, dtype=float)
    if len(xs) < 2 or len(ys) < 2:
        raise ValidationError("each sample needs >= 2 values")
    from scipy.stats import rankdata

    n1, n2 = len(xs), len(ys)
    n = n1 + n2
    ranks = rankdata(np.concatenate([xs, ys]), method="average")
    u1 = float(ranks[:n1].sum()) - n1 * (n1 + 1) / 2.0
    _, tie_counts = np.unique(np.concatenate([xs, ys]), return_counts=True)
    tie_term = float(((tie_counts**3) - tie_counts).sum()) / (n * (n - 1.0))
    variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_term)
    if variance <= 0.0:
        raise DegenerateStatisticsError("rank-sum test undefined: all values tied")
    z = (u1 - n1 * n2 / 2.0) / math.sqrt(variance)
    return TestResult(z, min(2.0 * _normal_sf(abs(z)), 1.0), TestKind.MANN_WHITNEY_U)


def silverman_bandwidth(data: Sequence[float]) -> float:
    """Silverman's rule of thumb: 0.9 * min(sd, IQR/1.34) * n^(-1/5).

    Falls back to the standard deviation alone when the IQR is zero but
    the spread is not.
    """
    xs = np.asarray(data, dtype=float)
    if len(xs) < 2:
        raise ValidationError("bandwidth needs >= 2 values")
    sd = float(xs.std(ddof=1))
    q75, q25 = np.percentile(xs, [75, 25])
    iqr = float(q75 - q25)
    scale = min(sd, iqr / 1.34) if iqr > 0 else sd
    return 0.9 * scale * len(xs) ** (-0.2)


def epanechnikov_kde(
    values: Sequence[float],
    grid_points: int = 512,
    bandwidth: float | None = None,
) -> DensityCurve:
    """Parabolic-kernel density of the log-transformed positive values.

    K(u) = 0.75 * (1 - u^2) on |u| <= 1, zero outside, evaluated on an
    ascending grid spanning the log data plus one bandwidth on each side
    (so the full kernel mass lies inside the grid). Bandwidth defaults to
    Silverman's rule on the log data; samples with zero spread need an
    explicit bandwidth.
    """
    xs = np.asarray(values, dtype=float)
    if len(xs) < 2:
        raise ValidationError("density estimation needs >= 2 values")
    if np.any(xs <= 0):
        raise ValidationError("values must be strictly positive (zeros are excluded upstream)")
    if grid_points < 2:
        raise ValidationError(f"grid_points must be >= 2, got {grid_points}")
    logs = np.log(xs)
    if bandwidth is None:
        bandwidth = silverman_bandwidth(logs)
        if bandwidth <= 0.0:
            raise DegenerateStatisticsError(
                "all values equal: zero spread, supply an explicit bandwidth"
            )
    elif bandwidth <= 0.0:
        raise ValidationError(f"bandwidth must be > 0, got {bandwidth}")

    grid = np.linspace(logs.min() - bandwidth, logs.max() + bandwidth, grid_points)
    u = (grid[:, None] - logs[None, :]) / bandwidth
    kernel = np.where(np.abs(u) <= 1.0, 0.75 * (1.0 - u * u), 0.0)
    density = kernel.sum(axis=1) / (len(logs) * bandwidth)
    return DensityCurve(grid, density, bandwidth)


def descriptive_stats(sample: Sequence[float]) -> DescriptiveStats:
    """Count, %zero, mean, median, max, sample stdev and type-7 IQR."""
    xs = np.asarray(sample, dtype=float)
    if len(xs) == 0:
        raise ValidationError("sample must be nonempty")
    q75, q25 = np.percentile(xs, [75, 25])
    return DescriptiveStats(
        count=len(xs),
        pct_zero=100.0 * float((xs == 0).sum()) / len(xs),
        mean=float(xs.mean()),
        median=float(np.median(xs)),
        max=float(xs.max()),
        stdev=float(xs.std(ddof=1)) if len(xs) > 1 else 0.0,
        iqr=float(q75 - q25),
    )


def significance_stars(p_value: float | None) -> str:
    """Table-legend stars: '***' below 0.01, '**' below 0.05, else ''."""
    if p_value is None:
        return ""
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    return ""
