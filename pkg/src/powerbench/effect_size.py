"""Standardized effect sizes from summary statistics.

Input summaries (group mean/SD/n, paired differences, variance
components) are validated dataclasses; every computed effect comes back
as an :class:`EffectSize` carrying its kind, value, a human-readable
derivation and any warnings raised along the way, so downstream reports
can show how each number was obtained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence


class EffectKind(Enum):
    """Which standardized effect-size convention a value uses."""

    D = "d"
    DZ = "dz"
    F = "f"
    F_SQUARED = "f_squared"


def _check_finite(value: float, name: str) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def _check_positive(value: float, name: str) -> float:
    value = _check_finite(value, name)
    if value <= 0.0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def _check_count(value: int, name: str, minimum: int = 2) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value!r}")
    return value


@dataclass(frozen=True)
class GroupSummary:
    """Mean, standard deviation and size of one group."""

    mean: float
    sd: float
    n: int

    def __post_init__(self) -> None:
        _check_finite(self.mean, "mean")
        _check_positive(self.sd, "sd")
        _check_count(self.n, "n")


@dataclass(frozen=True)
class PairedDiffSummary:
    """Mean and standard deviation of within-pair differences over n pairs."""

    mean_diff: float
    sd_diff: float
    n: int

    def __post_init__(self) -> None:
        _check_finite(self.mean_diff, "mean_diff")
        _check_positive(self.sd_diff, "sd_diff")
        _check_count(self.n, "n")


@dataclass(frozen=True)
class VarianceComponents:
    """Sums of squares for an effect and its error term."""

    ss_effect: float
    ss_error: float

    def __post_init__(self) -> None:
        ss_effect = _check_finite(self.ss_effect, "ss_effect")
        if ss_effect < 0.0:
            raise ValueError(f"ss_effect must be >= 0, got {ss_effect!r}")
        _check_positive(self.ss_error, "ss_error")


@dataclass(frozen=True)
class EffectSize:
    """A standardized effect size together with how it was obtained."""

    kind: EffectKind
    value: float
    derivation: str = "direct input"
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        value = _check_finite(self.value, "value")
        if value < 0.0:
            raise ValueError(f"effect size value must be >= 0, got {value!r}")


def sd_from_se(se: float, n: int) -> float:
    """Recover a standard deviation from a standard error: SD = SE * sqrt(n)."""
    se = _check_positive(se, "se")
    n = _check_count(n, "n", minimum=1)
    return se * math.sqrt(n)


def cohen_d(group1: GroupSummary, group2: GroupSummary) -> EffectSize:
    """Cohen's d between two independent groups.

    With equal group sizes the denominator is sqrt((sd1^2 + sd2^2) / 2);
    with unequal sizes it is the (n-1)-weighted pooled SD and a warning is
    attached, since the two conventions no longer coincide.
    """
    warnings: tuple[str, ...] = ()
    if group1.n == group2.n:
        denom = math.sqrt((group1.sd**2 + group2.sd**2) / 2.0)
        how = "sqrt((sd1^2 + sd2^2) / 2) denominator (equal group sizes)"
    else:
        denom = pooled_sd([group1, group2])
        how = "(n-1)-weighted pooled SD denominator (unequal group sizes)"
        warnings = (
            f"group sizes differ (n1={group1.n}, n2={group2.n}); "
            "used the (n-1)-weighted pooled SD",
        )
    value = abs(group1.mean - group2.mean) / denom
    return EffectSize(
        kind=EffectKind.D,
        value=value,
        derivation=f"d = |mean1 - mean2| / s with {how}",
        warnings=warnings,
    )


def cohen_dz(paired: PairedDiffSummary) -> EffectSize:
    """Cohen's dz for paired observations: |mean_diff| / sd_diff."""
    value = abs(paired.mean_diff) / paired.sd_diff
    return EffectSize(
        kind=EffectKind.DZ,
        value=value,
        derivation="dz = |mean_diff| / sd_diff",
    )


def pooled_sd(groups: Sequence[GroupSummary]) -> float:
    """(n-1)-weighted pooled standard deviation across two or more groups."""
    if len(groups) < 2:
        raise ValueError(f"pooled SD needs at least 2 groups, got {len(groups)}")
    num = sum((g.n - 1) * g.sd**2 for g in groups)
    den = sum(g.n for g in groups) - len(groups)
    return math.sqrt(num / den)


def cohen_f_from_means(
    groups: Sequence[GroupSummary], sd_within: float | None = None
) -> EffectSize:
    """Cohen's f across k groups: sigma_means / sd_within.

    sigma_means is the size-weighted SD of the group means around the
    size-weighted grand mean, sqrt(sum n_i (m_i - m_bar)^2 / N).  When
    ``sd_within`` is not supplied it defaults to the pooled SD of the
    groups, and a warning records that choice.
    """
    if len(groups) < 2:
        raise ValueError(f"Cohen's f needs at least 2 groups, got {len(groups)}")
    warnings: tuple[str, ...] = ()
    if sd_within is None:
        sd_within = pooled_sd(groups)
        warnings = ("sd_within not supplied; pooled the group SDs",)
        how = "pooled group SDs"
    else:
        sd_within = _check_positive(sd_within, "sd_within")
        how = "supplied sd_within"
    total = sum(g.n for g in groups)
    grand = sum(g.n * g.mean for g in groups) / total
    sigma_means = math.sqrt(sum(g.n * (g.mean - grand) ** 2 for g in groups) / total)
    return EffectSize(
        kind=EffectKind.F,
        value=sigma_means / sd_within,
        derivation=f"f = sigma_means / sd_within with sd_within from {how}",
        warnings=warnings,
    )


def f_squared_from_variances(components: VarianceComponents) -> EffectSize:
    """Effect size f^2 from variance components: ss_effect / ss_error."""
    return EffectSize(
        kind=EffectKind.F_SQUARED,
        value=components.ss_effect / components.ss_error,
        derivation="f^2 = ss_effect / ss_error",
    )
