"""Statistical power workbench for t-test and ANOVA designs.

Computes standardized effect sizes from summary statistics, post-hoc power,
a-priori minimum sample sizes (with drop-rate inflation), and p-value /
power curves, using self-contained central and noncentral t and F
distributions.  Batch audits of summary tables are available through
:mod:`powerbench.audit`, a command line through :mod:`powerbench.cli`, and
an HTTP service through :mod:`powerbench.service`.
"""

from powerbench.distributions import (
    ConvergenceError,
    f_cdf,
    f_quantile,
    ncf_cdf,
    nct_cdf,
    reg_inc_beta,
    t_cdf,
    t_quantile,
)
from powerbench.effect_size import (
    EffectKind,
    EffectSize,
    GroupSummary,
    PairedDiffSummary,
    VarianceComponents,
    cohen_d,
    cohen_dz,
    cohen_f_from_means,
    f_squared_from_variances,
    pooled_sd,
    sd_from_se,
)
from powerbench.power import (
    CurvePoint,
    Family,
    Granularity,
    IndependentTDesign,
    OneWayAnovaDesign,
    PairedTDesign,
    PowerResult,
    RmWithinDesign,
    SampleSizeResult,
    Tails,
    UnreachableTargetError,
    apply_drop_rate,
    power_independent_t,
    power_of_design,
    power_oneway_anova,
    power_paired_t,
    power_rm_within,
    pvalue_power_curve,
    solve_min_n,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "CurvePoint",
    "EffectKind",
    "EffectSize",
    "Family",
    "Granularity",
    "GroupSummary",
    "IndependentTDesign",
    "OneWayAnovaDesign",
    "PairedDiffSummary",
    "PairedTDesign",
    "PowerResult",
    "RmWithinDesign",
    "SampleSizeResult",
    "Tails",
    "UnreachableTargetError",
    "VarianceComponents",
    "apply_drop_rate",
    "cohen_d",
    "cohen_dz",
    "cohen_f_from_means",
    "f_cdf",
    "f_quantile",
    "f_squared_from_variances",
    "ncf_cdf",
    "nct_cdf",
    "pooled_sd",
    "power_independent_t",
    "power_of_design",
    "power_oneway_anova",
    "power_paired_t",
    "power_rm_within",
    "pvalue_power_curve",
    "reg_inc_beta",
    "sd_from_se",
    "solve_min_n",
    "t_cdf",
    "t_quantile",
]
