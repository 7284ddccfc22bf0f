"""Post-hoc power, a-priori sample sizes, and p-value / power curves.

Four designs are covered: two-group independent t, paired t, one-way
between-subjects ANOVA, and the within-subjects effect of a repeated
measures ANOVA (with a sphericity correction factor).  Each design is a
frozen dataclass that validates its own parameters; power evaluation,
minimum-sample-size search, drop-rate inflation and the p-value/power
curve are free functions over those designs.

Sample-size searches step the quantity the design reports: per-group n
for the independent t (balanced groups), pair count for the paired t,
and total N in multiples of k (balanced groups) for the ANOVA families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Union

from powerbench.distributions import (
    f_quantile,
    ncf_cdf,
    nct_cdf,
    t_cdf,
    t_quantile,
)
from powerbench.effect_size import (
    EffectKind,
    EffectSize,
    PairedDiffSummary,
    cohen_dz,
)

# Hard cap on any searched sample size (per-group or total).
_SEARCH_CAP = 10_000_000


class Tails(Enum):
    """Whether a t test rejects in one tail or both."""

    ONE = "one"
    TWO = "two"


class Family(Enum):
    """The four supported designs."""

    INDEPENDENT_T = "independent_t"
    PAIRED_T = "paired_t"
    ONEWAY_ANOVA = "oneway_anova"
    RM_WITHIN = "rm_within"


class Granularity(Enum):
    """What unit a minimum sample size is counted in."""

    PER_GROUP = "per_group"
    PAIRS = "pairs"
    TOTAL = "total"


class UnreachableTargetError(ValueError):
    """No sample size within the search cap reaches the target power."""


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if math.isnan(alpha) or not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    return alpha


def _check_int(value: int, name: str, minimum: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value!r}")
    return value


def _check_kind(effect: EffectSize, kind: EffectKind) -> EffectSize:
    if not isinstance(effect, EffectSize):
        raise ValueError(f"expected an EffectSize, got {effect!r}")
    if effect.kind is not kind:
        raise ValueError(
            f"expected an effect of kind {kind.value!r}, got {effect.kind.value!r}"
        )
    return effect


def _check_tails(tails: Tails) -> Tails:
    if not isinstance(tails, Tails):
        raise ValueError(f"tails must be a Tails value, got {tails!r}")
    return tails


@dataclass(frozen=True)
class PowerResult:
    """Outcome of a post-hoc power evaluation."""

    effect: EffectSize
    noncentrality: float
    df1: float
    df2: float | None
    critical_value: float
    power: float


@dataclass(frozen=True)
class SampleSizeResult:
    """Outcome of an a-priori minimum sample size search."""

    min_n: int
    granularity: Granularity
    achieved_power: float
    drop_rate: float
    final_n: int


@dataclass(frozen=True)
class CurvePoint:
    """One sample size on a p-value / power curve."""

    n: int
    t_stat: float
    p_value: float
    power: float


@dataclass(frozen=True)
class IndependentTDesign:
    """Two independent groups compared by a t test on Cohen's d."""

    effect: EffectSize
    alpha: float
    tails: Tails = Tails.TWO
    n1: int | None = None
    n2: int | None = None

    def __post_init__(self) -> None:
        _check_kind(self.effect, EffectKind.D)
        _check_alpha(self.alpha)
        _check_tails(self.tails)
        if self.n1 is not None:
            _check_int(self.n1, "n1", 2)
        if self.n2 is not None:
            _check_int(self.n2, "n2", 2)

    family = Family.INDEPENDENT_T


@dataclass(frozen=True)
class PairedTDesign:
    """Paired observations compared by a t test on Cohen's dz."""

    effect: EffectSize
    alpha: float
    tails: Tails = Tails.TWO
    n_pairs: int | None = None

    def __post_init__(self) -> None:
        _check_kind(self.effect, EffectKind.DZ)
        _check_alpha(self.alpha)
        _check_tails(self.tails)
        if self.n_pairs is not None:
            _check_int(self.n_pairs, "n_pairs", 2)

    family = Family.PAIRED_T


@dataclass(frozen=True)
class OneWayAnovaDesign:
    """k independent groups compared by a one-way F test on Cohen's f."""

    effect: EffectSize
    alpha: float
    k: int = 2
    total_n: int | None = None

    def __post_init__(self) -> None:
        _check_kind(self.effect, EffectKind.F)
        _check_alpha(self.alpha)
        _check_int(self.k, "k", 2)
        if self.total_n is not None:
            _check_int(self.total_n, "total_n", self.k + 1)

    family = Family.ONEWAY_ANOVA


@dataclass(frozen=True)
class RmWithinDesign:
    """Within-subjects effect of a repeated measures ANOVA on f^2.

    ``k`` is the number of groups, ``m`` the number of repeated
    measurements, and ``epsilon`` the sphericity correction factor in
    [1/(m-1), 1].
    """

    effect: EffectSize
    alpha: float
    k: int = 1
    m: int = 2
    epsilon: float = 1.0
    total_n: int | None = None

    def __post_init__(self) -> None:
        _check_kind(self.effect, EffectKind.F_SQUARED)
        _check_alpha(self.alpha)
        _check_int(self.k, "k", 1)
        _check_int(self.m, "m", 2)
        eps = float(self.epsilon)
        lower = 1.0 / (self.m - 1)
        if math.isnan(eps) or not lower <= eps <= 1.0:
            raise ValueError(
                f"epsilon must lie in [{lower!r}, 1] for m={self.m}, got {eps!r}"
            )
        if self.total_n is not None:
            _check_int(self.total_n, "total_n", self.k + 1)

    family = Family.RM_WITHIN


DesignSpec = Union[
    IndependentTDesign, PairedTDesign, OneWayAnovaDesign, RmWithinDesign
]


def _t_tail_power(
    delta: float, df: float, alpha: float, tails: Tails
) -> tuple[float, float]:
    """Critical value and rejection probability of a t test at noncentrality delta."""
    if tails is Tails.TWO:
        critical = t_quantile(1.0 - alpha / 2.0, df)
        power = 1.0 - nct_cdf(critical, df, delta) + nct_cdf(-critical, df, delta)
    else:
        critical = t_quantile(1.0 - alpha, df)
        power = 1.0 - nct_cdf(critical, df, delta)
    return critical, min(1.0, max(0.0, power))


def power_independent_t(
    d: EffectSize, n1: int, n2: int, alpha: float, tails: Tails = Tails.TWO
) -> PowerResult:
    """Power of the independent two-group t test.

    df = n1 + n2 - 2 and the noncentrality is
    delta = d * sqrt(n1 n2 / (n1 + n2)).
    """
    _check_kind(d, EffectKind.D)
    _check_int(n1, "n1", 2)
    _check_int(n2, "n2", 2)
    alpha = _check_alpha(alpha)
    _check_tails(tails)
    df = float(n1 + n2 - 2)
    delta = d.value * math.sqrt(n1 * n2 / (n1 + n2))
    critical, power = _t_tail_power(delta, df, alpha, tails)
    return PowerResult(
        effect=d,
        noncentrality=delta,
        df1=df,
        df2=None,
        critical_value=critical,
        power=power,
    )


def power_paired_t(
    dz: EffectSize, n_pairs: int, alpha: float, tails: Tails = Tails.TWO
) -> PowerResult:
    """Power of the paired t test: df = N - 1, delta = dz * sqrt(N)."""
    _check_kind(dz, EffectKind.DZ)
    _check_int(n_pairs, "n_pairs", 2)
    alpha = _check_alpha(alpha)
    _check_tails(tails)
    df = float(n_pairs - 1)
    delta = dz.value * math.sqrt(n_pairs)
    critical, power = _t_tail_power(delta, df, alpha, tails)
    return PowerResult(
        effect=dz,
        noncentrality=delta,
        df1=df,
        df2=None,
        critical_value=critical,
        power=power,
    )


def power_oneway_anova(
    f: EffectSize, k: int, total_n: int, alpha: float
) -> PowerResult:
    """Power of the one-way between-subjects ANOVA F test.

    df1 = k - 1, df2 = N - k, noncentrality lambda = f^2 * N.
    """
    _check_kind(f, EffectKind.F)
    _check_int(k, "k", 2)
    _check_int(total_n, "total_n", k + 1)
    alpha = _check_alpha(alpha)
    df1 = float(k - 1)
    df2 = float(total_n - k)
    lam = f.value**2 * total_n
    critical = f_quantile(1.0 - alpha, df1, df2)
    power = 1.0 - ncf_cdf(critical, df1, df2, lam)
    return PowerResult(
        effect=f,
        noncentrality=lam,
        df1=df1,
        df2=df2,
        critical_value=critical,
        power=min(1.0, max(0.0, power)),
    )


def power_rm_within(
    f2: EffectSize,
    k: int,
    m: int,
    total_n: int,
    epsilon: float,
    alpha: float,
) -> PowerResult:
    """Power of the within-subjects effect in a repeated measures ANOVA.

    With sphericity correction epsilon: df1 = (m - 1) * epsilon,
    df2 = (N - k) * (m - 1) * epsilon, and lambda = f^2 * N * epsilon.
    """
    _check_kind(f2, EffectKind.F_SQUARED)
    _check_int(k, "k", 1)
    _check_int(m, "m", 2)
    _check_int(total_n, "total_n", k + 1)
    alpha = _check_alpha(alpha)
    eps = float(epsilon)
    lower = 1.0 / (m - 1)
    if math.isnan(eps) or not lower <= eps <= 1.0:
        raise ValueError(f"epsilon must lie in [{lower!r}, 1] for m={m}, got {eps!r}")
    df1 = (m - 1) * eps
    df2 = (total_n - k) * (m - 1) * eps
    lam = f2.value * total_n * eps
    critical = f_quantile(1.0 - alpha, df1, df2)
    power = 1.0 - ncf_cdf(critical, df1, df2, lam)
    return PowerResult(
        effect=f2,
        noncentrality=lam,
        df1=df1,
        df2=df2,
        critical_value=critical,
        power=min(1.0, max(0.0, power)),
    )


def power_of_design(design: DesignSpec) -> PowerResult:
    """Post-hoc power of a fully specified design (sizes included)."""
    if isinstance(design, IndependentTDesign):
        if design.n1 is None or design.n2 is None:
            raise ValueError("n1 and n2 are required to evaluate power")
        return power_independent_t(
            design.effect, design.n1, design.n2, design.alpha, design.tails
        )
    if isinstance(design, PairedTDesign):
        if design.n_pairs is None:
            raise ValueError("n_pairs is required to evaluate power")
        return power_paired_t(
            design.effect, design.n_pairs, design.alpha, design.tails
        )
    if isinstance(design, OneWayAnovaDesign):
        if design.total_n is None:
            raise ValueError("total_n is required to evaluate power")
        return power_oneway_anova(
            design.effect, design.k, design.total_n, design.alpha
        )
    if isinstance(design, RmWithinDesign):
        if design.total_n is None:
            raise ValueError("total_n is required to evaluate power")
        return power_rm_within(
            design.effect,
            design.k,
            design.m,
            design.total_n,
            design.epsilon,
            design.alpha,
        )
    raise ValueError(f"unsupported design {design!r}")


def _search_plan(
    design: DesignSpec,
) -> tuple[Granularity, Callable[[int], int], Callable[[int], float], int]:
    """Granularity, counted-N mapping, power evaluator and unit cap for a search.

    The search variable is always a balanced per-unit count g >= 2: group
    size for the independent t and pair count for the paired t (reported
    as-is), per-group size for the ANOVA families (reported as total
    N = k * g).  The cap keeps the reported N at or under _SEARCH_CAP.
    """
    if isinstance(design, IndependentTDesign):
        return (
            Granularity.PER_GROUP,
            lambda g: g,
            lambda g: power_independent_t(
                design.effect, g, g, design.alpha, design.tails
            ).power,
            _SEARCH_CAP,
        )
    if isinstance(design, PairedTDesign):
        return (
            Granularity.PAIRS,
            lambda g: g,
            lambda g: power_paired_t(
                design.effect, g, design.alpha, design.tails
            ).power,
            _SEARCH_CAP,
        )
    if isinstance(design, OneWayAnovaDesign):
        return (
            Granularity.TOTAL,
            lambda g: design.k * g,
            lambda g: power_oneway_anova(
                design.effect, design.k, design.k * g, design.alpha
            ).power,
            _SEARCH_CAP // design.k,
        )
    if isinstance(design, RmWithinDesign):
        return (
            Granularity.TOTAL,
            lambda g: design.k * g,
            lambda g: power_rm_within(
                design.effect,
                design.k,
                design.m,
                design.k * g,
                design.epsilon,
                design.alpha,
            ).power,
            _SEARCH_CAP // design.k,
        )
    raise ValueError(f"unsupported design {design!r}")


def solve_min_n(
    design: DesignSpec, target_power: float, drop_rate: float = 0.0
) -> SampleSizeResult:
    """Smallest sample size whose power reaches ``target_power``.

    Searches by doubling until the target is bracketed, then binary
    search, exploiting that power is nondecreasing in N.  The searched
    quantity is per-group n / pair count for the t families and total N
    in balanced multiples of k for the ANOVA families.  ``drop_rate``
    inflates the result to final_n = ceil(min_n / (1 - drop_rate)).
    """
    target = float(target_power)
    if math.isnan(target) or not 0.0 < target < 1.0:
        raise ValueError(f"target_power must lie in (0, 1), got {target_power!r}")
    if target <= design.alpha:
        raise ValueError(
            f"target_power must exceed alpha, got {target_power!r} <= {design.alpha!r}"
        )
    if design.effect.value == 0.0:
        raise UnreachableTargetError(
            "effect size is zero, so no sample size reaches the target power"
        )

    granularity, to_n, power_at, cap = _search_plan(design)
    cache: dict[int, float] = {}

    def cached_power(g: int) -> float:
        if g not in cache:
            cache[g] = power_at(g)
        return cache[g]

    if cap < 2:
        raise UnreachableTargetError(
            f"no valid sample size at or under the hard cap {_SEARCH_CAP}"
        )

    if cached_power(2) >= target:
        best = 2
    else:
        lo, hi = 2, 4
        while True:
            if hi >= cap:
                hi = cap
                if cached_power(hi) < target:
                    raise UnreachableTargetError(
                        f"target power {target!r} is not reached by any sample "
                        f"size at or under the hard cap {_SEARCH_CAP}"
                    )
                break
            if cached_power(hi) >= target:
                break
            lo, hi = hi, hi * 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if cached_power(mid) >= target:
                hi = mid
            else:
                lo = mid
        best = hi

    min_n = to_n(best)
    return SampleSizeResult(
        min_n=min_n,
        granularity=granularity,
        achieved_power=cached_power(best),
        drop_rate=float(drop_rate),
        final_n=apply_drop_rate(min_n, drop_rate),
    )


def apply_drop_rate(min_n: int, drop_rate: float) -> int:
    """Inflate a minimum sample size for attrition: ceil(min_n / (1 - drop_rate)).

    The division is done in exact rational arithmetic on the decimal
    value of ``drop_rate``, so e.g. a 10% rate never over-rounds sizes
    that divide evenly.
    """
    _check_int(min_n, "min_n", 1)
    rate = float(drop_rate)
    if math.isnan(rate) or not 0.0 <= rate < 1.0:
        raise ValueError(f"drop_rate must lie in [0, 1), got {drop_rate!r}")
    return math.ceil(min_n / (1 - Fraction(str(rate))))


def pvalue_power_curve(
    paired: PairedDiffSummary,
    n_min: int,
    n_max: int,
    alpha: float,
    tails: Tails = Tails.TWO,
) -> list[CurvePoint]:
    """p-value and power of the paired t test at every N in [n_min, n_max].

    At each N the t statistic is mean_diff / (sd_diff / sqrt(N)), the
    p-value is its central-t tail probability at df = N - 1, and the
    power comes from power_paired_t with dz = |mean_diff| / sd_diff.
    """
    if not isinstance(paired, PairedDiffSummary):
        raise ValueError(f"expected a PairedDiffSummary, got {paired!r}")
    _check_int(n_min, "n_min", 2)
    _check_int(n_max, "n_max", 2)
    if n_min > n_max:
        raise ValueError(f"n_min must be <= n_max, got {n_min!r} > {n_max!r}")
    alpha = _check_alpha(alpha)
    _check_tails(tails)
    dz = cohen_dz(paired)
    points = []
    for n in range(n_min, n_max + 1):
        t_stat = paired.mean_diff / (paired.sd_diff / math.sqrt(n))
        df = float(n - 1)
        tail = 1.0 - t_cdf(abs(t_stat), df)
        p_value = 2.0 * tail if tails is Tails.TWO else tail
        power = power_paired_t(dz, n, alpha, tails).power
        points.append(
            CurvePoint(
                n=n,
                t_stat=t_stat,
                p_value=min(1.0, max(0.0, p_value)),
                power=power,
            )
        )
    return points
