"""Tests for powerbench.power.

Covers the df/noncentrality bindings of all four test families, the
alpha-degeneration of power at zero effect, monotonicity properties,
the minimum-sample-size search (including its minimality guarantee at
the granularity it steps in), attrition inflation against an exact
rational oracle, and the paired p-value / power curve.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from oracles import final_n_exact
from powerbench.effect_size import (
    EffectKind,
    EffectSize,
    PairedDiffSummary,
)
from powerbench.power import (
    Granularity,
    IndependentTDesign,
    OneWayAnovaDesign,
    PairedTDesign,
    RmWithinDesign,
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


def _d(value: float) -> EffectSize:
    return EffectSize(kind=EffectKind.D, value=value)


def _dz(value: float) -> EffectSize:
    return EffectSize(kind=EffectKind.DZ, value=value)


def _f(value: float) -> EffectSize:
    return EffectSize(kind=EffectKind.F, value=value)


def _f2(value: float) -> EffectSize:
    return EffectSize(kind=EffectKind.F_SQUARED, value=value)


# =============================================================================
# df and noncentrality bindings
# =============================================================================

class TestBindings:
    """Each family maps (effect, sizes) to the documented df and delta."""

    def test_independent_t(self):
        result = power_independent_t(_d(0.5), n1=10, n2=14, alpha=0.05)
        assert result.df1 == 22.0
        assert result.df2 is None
        assert result.noncentrality == pytest.approx(
            0.5 * math.sqrt(10 * 14 / 24), rel=1e-15
        )

    def test_paired_t(self):
        result = power_paired_t(_dz(0.4), n_pairs=27, alpha=0.05)
        assert result.df1 == 26.0
        assert result.df2 is None
        assert result.noncentrality == pytest.approx(
            0.4 * math.sqrt(27), rel=1e-15
        )

    def test_oneway_anova(self):
        result = power_oneway_anova(_f(0.3), k=3, total_n=66, alpha=0.05)
        assert result.df1 == 2.0
        assert result.df2 == 63.0
        assert result.noncentrality == pytest.approx(0.09 * 66, rel=1e-12)

    def test_rm_within_full_sphericity(self):
        result = power_rm_within(
            _f2(0.0775), k=3, m=26, total_n=78, epsilon=1.0, alpha=0.05
        )
        assert result.df1 == 25.0
        assert result.df2 == 75.0 * 25.0
        assert result.noncentrality == pytest.approx(0.0775 * 78, rel=1e-12)

    def test_rm_within_corrected(self):
        """epsilon scales both df and the noncentrality."""
        result = power_rm_within(
            _f2(0.0775), k=3, m=26, total_n=78, epsilon=0.5, alpha=0.05
        )
        assert result.df1 == 12.5
        assert result.df2 == 75.0 * 25.0 * 0.5
        assert result.noncentrality == pytest.approx(0.0775 * 78 * 0.5, rel=1e-12)

    def test_critical_value_matches_tails(self):
        two = power_paired_t(_dz(0.4), 27, 0.05, Tails.TWO)
        one = power_paired_t(_dz(0.4), 27, 0.05, Tails.ONE)
        assert two.critical_value > one.critical_value


# =============================================================================
# Zero effect degenerates to the significance level
# =============================================================================

class TestZeroEffect:
    """With no effect the rejection probability is exactly alpha."""

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.2])
    def test_independent_t(self, alpha):
        for tails in (Tails.ONE, Tails.TWO):
            result = power_independent_t(_d(0.0), 12, 9, alpha, tails)
            assert result.power == pytest.approx(alpha, abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.2])
    def test_paired_t(self, alpha):
        for tails in (Tails.ONE, Tails.TWO):
            result = power_paired_t(_dz(0.0), 27, alpha, tails)
            assert result.power == pytest.approx(alpha, abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.2])
    def test_oneway_anova(self, alpha):
        result = power_oneway_anova(_f(0.0), 3, 48, alpha)
        assert result.power == pytest.approx(alpha, abs=1e-9)

    @pytest.mark.parametrize("alpha", [0.01, 0.05, 0.2])
    def test_rm_within(self, alpha):
        result = power_rm_within(_f2(0.0), 3, 26, 78, 1.0, alpha)
        assert result.power == pytest.approx(alpha, abs=1e-9)


# =============================================================================
# Ordering and monotonicity
# =============================================================================

class TestMonotonicity:

    def test_one_tail_beats_two_tail(self):
        one = power_paired_t(_dz(0.45), 27, 0.05, Tails.ONE).power
        two = power_paired_t(_dz(0.45), 27, 0.05, Tails.TWO).power
        assert one > two

    @settings(max_examples=50)
    @given(
        d=hs.floats(0.05, 2.0),
        n=hs.integers(2, 150),
        alpha=hs.floats(0.005, 0.2),
    )
    def test_power_rises_with_n(self, d, n, alpha):
        smaller = power_independent_t(_d(d), n, n, alpha).power
        larger = power_independent_t(_d(d), n + 1, n + 1, alpha).power
        assert larger >= smaller - 1e-12

    @settings(max_examples=50)
    @given(
        dz=hs.floats(0.05, 2.0),
        n=hs.integers(2, 150),
        alpha=hs.floats(0.005, 0.2),
    )
    def test_power_rises_with_effect(self, dz, n, alpha):
        smaller = power_paired_t(_dz(dz), n, alpha).power
        larger = power_paired_t(_dz(dz * 1.1), n, alpha).power
        assert larger >= smaller - 1e-12

    @settings(max_examples=50)
    @given(
        f=hs.floats(0.05, 1.5),
        k=hs.integers(2, 5),
        g=hs.integers(2, 40),
        alpha=hs.floats(0.005, 0.2),
    )
    def test_power_rises_with_alpha(self, f, k, g, alpha):
        strict = power_oneway_anova(_f(f), k, k * g, alpha).power
        lenient = power_oneway_anova(_f(f), k, k * g, min(alpha * 1.5, 0.5)).power
        assert lenient >= strict - 1e-12


# =============================================================================
# Minimum sample size search
# =============================================================================

class TestSolveMinN:

    def test_independent_t_anchor(self):
        """d derived from two equal groups of 8 needs 96 per group for 80%."""
        d = 0.07 / math.sqrt((0.1414**2 + 0.1980**2) / 2.0)
        design = IndependentTDesign(effect=_d(d), alpha=0.05, tails=Tails.TWO)
        result = solve_min_n(design, target_power=0.8, drop_rate=0.10)
        assert result.min_n == 96
        assert result.granularity is Granularity.PER_GROUP
        assert result.final_n == 107

    def test_paired_t_anchor(self):
        """dz = 0.29/0.64 needs 41 pairs for 80%, 46 after 10% attrition."""
        design = PairedTDesign(effect=_dz(0.29 / 0.64), alpha=0.05)
        result = solve_min_n(design, target_power=0.8, drop_rate=0.10)
        assert result.min_n == 41
        assert result.granularity is Granularity.PAIRS
        assert result.final_n == 46

    def test_anova_counts_total_in_group_multiples(self):
        design = OneWayAnovaDesign(effect=_f(0.25), alpha=0.05, k=3)
        result = solve_min_n(design, target_power=0.8)
        assert result.granularity is Granularity.TOTAL
        assert result.min_n % 3 == 0

    def test_rm_counts_total_in_group_multiples(self):
        design = RmWithinDesign(
            effect=_f2(0.0775), alpha=0.05, k=3, m=26, epsilon=1.0
        )
        result = solve_min_n(design, target_power=0.8)
        assert result.granularity is Granularity.TOTAL
        assert result.min_n % 3 == 0

    @pytest.mark.parametrize(
        "design,step",
        [
            (IndependentTDesign(effect=_d(0.4069), alpha=0.05), 1),
            (PairedTDesign(effect=_dz(0.453125), alpha=0.05), 1),
            (PairedTDesign(effect=_dz(0.9), alpha=0.01, tails=Tails.ONE), 1),
            (OneWayAnovaDesign(effect=_f(0.62), alpha=0.05, k=3), 3),
            (
                RmWithinDesign(
                    effect=_f2(0.0775), alpha=0.05, k=3, m=26, epsilon=1.0
                ),
                3,
            ),
        ],
        ids=["ind-t", "paired-t", "paired-t-one-tail", "anova", "rm-within"],
    )
    def test_minimality_at_search_step(self, design, step):
        """min_n reaches the target and the next size down (one search
        step, i.e. one unit per group) does not."""
        result = solve_min_n(design, target_power=0.8)
        at = power_of_design(_with_size(design, result.min_n)).power
        assert at >= 0.8
        assert result.achieved_power == pytest.approx(at, rel=1e-12)
        below = result.min_n - step
        if below >= 2 * step:
            under = power_of_design(_with_size(design, below)).power
            assert under < 0.8

    def test_achieved_power_is_at_least_target(self):
        design = PairedTDesign(effect=_dz(0.453125), alpha=0.05)
        result = solve_min_n(design, target_power=0.8)
        assert result.achieved_power >= 0.8

    def test_final_n_consistent_with_drop_rate(self):
        design = PairedTDesign(effect=_dz(0.3), alpha=0.05)
        for rate in (0.0, 0.1, 0.25):
            result = solve_min_n(design, target_power=0.8, drop_rate=rate)
            assert result.final_n == apply_drop_rate(result.min_n, rate)

    def test_zero_effect_is_unreachable(self):
        design = PairedTDesign(effect=_dz(0.0), alpha=0.05)
        with pytest.raises(UnreachableTargetError):
            solve_min_n(design, target_power=0.8)

    def test_vanishing_effect_hits_the_cap(self):
        design = PairedTDesign(effect=_dz(1e-5), alpha=0.05)
        with pytest.raises(UnreachableTargetError):
            solve_min_n(design, target_power=0.8)

    def test_rejects_degenerate_targets(self):
        design = PairedTDesign(effect=_dz(0.5), alpha=0.05)
        with pytest.raises(ValueError):
            solve_min_n(design, target_power=1.0)
        with pytest.raises(ValueError):
            solve_min_n(design, target_power=0.04)
        with pytest.raises(ValueError):
            solve_min_n(design, target_power=0.05)

    def test_easy_target_floors_at_two(self):
        """An overwhelming effect needs the smallest admissible size,
        never less.  (dz = 10 genuinely needs 3 pairs: with df = 1 the
        critical value is 12.7, which delta = 10 sqrt(2) misses often.)"""
        design = PairedTDesign(effect=_dz(100.0), alpha=0.05)
        result = solve_min_n(design, target_power=0.8)
        assert result.min_n == 2
        assert solve_min_n(
            PairedTDesign(effect=_dz(10.0), alpha=0.05), target_power=0.8
        ).min_n == 3


def _with_size(design, n):
    """Copy of a (sizeless) search design with a concrete sample size."""
    if isinstance(design, IndependentTDesign):
        return IndependentTDesign(
            effect=design.effect, alpha=design.alpha, tails=design.tails,
            n1=n, n2=n,
        )
    if isinstance(design, PairedTDesign):
        return PairedTDesign(
            effect=design.effect, alpha=design.alpha, tails=design.tails,
            n_pairs=n,
        )
    if isinstance(design, OneWayAnovaDesign):
        return OneWayAnovaDesign(
            effect=design.effect, alpha=design.alpha, k=design.k, total_n=n
        )
    return RmWithinDesign(
        effect=design.effect, alpha=design.alpha, k=design.k, m=design.m,
        epsilon=design.epsilon, total_n=n,
    )


# =============================================================================
# Attrition inflation
# =============================================================================

class TestApplyDropRate:

    @pytest.mark.parametrize(
        "min_n,rate,expected",
        [
            (96, 0.10, 107),
            (41, 0.10, 46),
            (15701, 0.10, 17446),
            (9, 0.10, 10),
            (18, 0.10, 20),
            (33, 0.0, 33),
        ],
    )
    def test_anchors(self, min_n, rate, expected):
        assert apply_drop_rate(min_n, rate) == expected

    @pytest.mark.parametrize(
        "rate", ["0", "0.05", "0.1", "0.15", "0.2", "0.25", "0.33"]
    )
    def test_matches_exact_rational_arithmetic(self, rate):
        """ceil(n / (1 - rate)) in exact rationals, for every n to 10000."""
        for n in range(1, 10_001):
            assert apply_drop_rate(n, float(rate)) == final_n_exact(n, rate)

    def test_never_shrinks(self):
        for n in (1, 7, 96, 500):
            assert apply_drop_rate(n, 0.17) >= n

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            apply_drop_rate(10, 1.0)
        with pytest.raises(ValueError):
            apply_drop_rate(10, -0.1)
        with pytest.raises(ValueError):
            apply_drop_rate(0, 0.1)


# =============================================================================
# p-value / power curve
# =============================================================================

class TestCurve:

    summary = PairedDiffSummary(mean_diff=-0.29, sd_diff=0.64, n=27)

    def test_covers_the_full_range(self):
        points = pvalue_power_curve(self.summary, 3, 41, alpha=0.05)
        assert [p.n for p in points] == list(range(3, 42))

    def test_t_statistic_identity(self):
        """t^2 equals n * dz^2 at every point."""
        dz = 0.29 / 0.64
        for point in pvalue_power_curve(self.summary, 3, 41, alpha=0.05):
            assert point.t_stat**2 == pytest.approx(
                point.n * dz * dz, rel=1e-12
            )

    def test_t_statistic_keeps_the_sign(self):
        points = pvalue_power_curve(self.summary, 5, 10, alpha=0.05)
        assert all(p.t_stat < 0.0 for p in points)

    def test_p_falls_and_power_rises(self):
        points = pvalue_power_curve(self.summary, 3, 41, alpha=0.05)
        for prev, cur in zip(points, points[1:]):
            assert cur.p_value < prev.p_value
            assert cur.power > prev.power

    def test_single_point_range(self):
        points = pvalue_power_curve(self.summary, 27, 27, alpha=0.05)
        assert len(points) == 1
        assert points[0].n == 27

    def test_zero_difference(self):
        """No effect: two-sided p is 1 and power equals alpha at every N."""
        flat = PairedDiffSummary(mean_diff=0.0, sd_diff=0.64, n=27)
        for point in pvalue_power_curve(flat, 5, 12, alpha=0.05):
            assert point.t_stat == 0.0
            assert point.p_value == pytest.approx(1.0, abs=1e-12)
            assert point.power == pytest.approx(0.05, abs=1e-9)

    def test_rejects_bad_ranges(self):
        with pytest.raises(ValueError):
            pvalue_power_curve(self.summary, 10, 5, alpha=0.05)
        with pytest.raises(ValueError):
            pvalue_power_curve(self.summary, 1, 5, alpha=0.05)


# =============================================================================
# power_of_design requires sizes
# =============================================================================

class TestPowerOfDesign:

    def test_missing_sizes_raise(self):
        with pytest.raises(ValueError):
            power_of_design(IndependentTDesign(effect=_d(0.5), alpha=0.05))
        with pytest.raises(ValueError):
            power_of_design(PairedTDesign(effect=_dz(0.5), alpha=0.05))
        with pytest.raises(ValueError):
            power_of_design(OneWayAnovaDesign(effect=_f(0.5), alpha=0.05, k=3))
        with pytest.raises(ValueError):
            power_of_design(
                RmWithinDesign(effect=_f2(0.1), alpha=0.05, k=3, m=4)
            )

    def test_dispatches_every_family(self):
        specs = [
            IndependentTDesign(effect=_d(0.5), alpha=0.05, n1=20, n2=20),
            PairedTDesign(effect=_dz(0.5), alpha=0.05, n_pairs=20),
            OneWayAnovaDesign(effect=_f(0.4), alpha=0.05, k=3, total_n=45),
            RmWithinDesign(
                effect=_f2(0.1), alpha=0.05, k=3, m=4, total_n=45
            ),
        ]
        for spec in specs:
            result = power_of_design(spec)
            assert 0.0 < result.power < 1.0

    def test_effect_kind_mismatch_rejected(self):
        with pytest.raises(ValueError):
            IndependentTDesign(effect=_dz(0.5), alpha=0.05, n1=8, n2=8)
