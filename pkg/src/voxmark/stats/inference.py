"""
Inference Module - voxmark
--------------------------
One-way ANOVA with eta squared and the paired t-test with Cohen's d. Upper
tail probabilities come from the regularized incomplete beta function.
"""
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.special import betainc

from ..errors import DegenerateInput, LengthMismatch, TooFewSamples, ZeroVariance


@dataclass(frozen=True)
class AnovaResult:
    f_value: float
    eta_squared: float
    p_value: float
    df_between: int
    df_within: int

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class PairedTResult:
    t_value: float
    cohens_d: float
    p_value: float
    df: int

    def to_dict(self):
        return asdict(self)


def f_survival(f_value: float, df_between: int, df_within: int) -> float:
    """P(F >= f_value) for the F(df_between, df_within) distribution."""
    if f_value <= 0:
        return 1.0
    if math.isinf(f_value):
        return 0.0
    x = df_within / (df_within + df_between * f_value)
    return float(betainc(df_within / 2.0, df_between / 2.0, x))


def t_two_sided(t_value: float, df: int) -> float:
    """P(|T| >= |t_value|) for Student's t with df degrees of freedom."""
    if math.isinf(t_value):
        return 0.0
    x = df / (df + t_value * t_value)
    return float(betainc(df / 2.0, 0.5, x))


def _finite(values, what):
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise DegenerateInput(f"{what} must be one-dimensional")
    if not np.all(np.isfinite(values)):
        raise DegenerateInput(f"{what} contains non-finite values")
    return values


def anova_oneway(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """Between-groups one-way ANOVA.

    Both sums of squares zero gives F = 0 (p = 1); only the within-group sum
    zero gives F = inf (eta squared 1, p = 0).
    """
    if len(groups) < 2:
        raise TooFewSamples(f"ANOVA needs at least 2 groups, got {len(groups)}")
    arrays = [np.sort(_finite(g, f"group {i}")) for i, g in enumerate(groups)]
    for i, g in enumerate(arrays):
        if g.size < 2:
            raise TooFewSamples(f"group {i} has {g.size} value(s); need at least 2")

    sizes = np.array([g.size for g in arrays], dtype=np.float64)
    n = int(sizes.sum())
    k = len(arrays)
    means = np.array([g.mean() for g in arrays])
    grand = float(np.sort(np.concatenate(arrays)).mean())

    ss_within = float(sum(((g - m) ** 2).sum() for g, m in zip(arrays, means)))
    ss_between = 0.0 if np.ptp(means) == 0 else float((sizes * (means - grand) ** 2).sum())
    df_between, df_within = k - 1, n - k

    if ss_between == 0.0:
        return AnovaResult(0.0, 0.0, 1.0, df_between, df_within)
    if ss_within == 0.0:
        return AnovaResult(math.inf, 1.0, 0.0, df_between, df_within)
    f_value = (ss_between / df_between) / (ss_within / df_within)
    eta = ss_between / (ss_between + ss_within)
    return AnovaResult(f_value, eta, f_survival(f_value, df_between, df_within), df_between, df_within)


def paired_t(a: Sequence[float], b: Sequence[float]) -> PairedTResult:
    """Two-sided paired t-test on a - b with sample SD of the differences."""
    a = _finite(a, "a")
    b = _finite(b, "b")
    if a.size != b.size:
        raise LengthMismatch(f"paired samples differ in length: {a.size} vs {b.size}")
    if a.size < 2:
        raise TooFewSamples("paired t-test needs at least 2 pairs")
    diff = a - b
    df = diff.size - 1
    if np.ptp(diff) == 0:
        if diff[0] == 0:
            return PairedTResult(0.0, 0.0, 1.0, df)
        raise ZeroVariance("all paired differences are equal and nonzero")
    mean = float(diff.mean())
    sd = float(diff.std(ddof=1))
    t_value = mean / (sd / math.sqrt(diff.size))
    return PairedTResult(t_value, mean / sd, t_two_sided(t_value, df), df)


def group_descriptives(values: Sequence[float]) -> dict:
    """n, mean and sample SD with missing values skipped."""
    values = np.asarray(values, dtype=np.float64)
    values = values[~np.isnan(values)]
    n = int(values.size)
    return {
        "n": n,
        "mean": float(values.mean()) if n else None,
        "sd": float(values.std(ddof=1)) if n > 1 else None,
    }
