"""JSON request/response layer shared by the command line and the service.

A request is a plain dict (parsed JSON) naming an analysis
(``post_hoc``, ``a_priori`` or ``curve``), a test family, and either raw
summary statistics or a pre-computed effect size.  :func:`analyze_json`
validates it, runs the engine, and returns a JSON-ready response dict
that echoes the request, the derived effect size (with its derivation
trace and warnings) and the result, plus the engine version.

Shape problems (missing or mistyped fields, unknown enum values, both
payload forms at once) raise :class:`RequestError`; values that are the
right shape but violate domain invariants raise plain ``ValueError``
from the engine layer.  The HTTP service maps those to 400 and 422.
"""

from __future__ import annotations

from typing import Any, Sequence

from powerbench import __version__
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
    sd_from_se,
)
from powerbench.power import (
    CurvePoint,
    Family,
    IndependentTDesign,
    OneWayAnovaDesign,
    PairedTDesign,
    PowerResult,
    RmWithinDesign,
    SampleSizeResult,
    Tails,
    power_of_design,
    pvalue_power_curve,
    solve_min_n,
)

_ANALYSES = ("post_hoc", "a_priori", "curve")

_EFFECT_KIND_FOR_FAMILY = {
    Family.INDEPENDENT_T: EffectKind.D,
    Family.PAIRED_T: EffectKind.DZ,
    Family.ONEWAY_ANOVA: EffectKind.F,
    Family.RM_WITHIN: EffectKind.F_SQUARED,
}

# Paper-style defaults applied when a request omits the optional knobs.
DEFAULT_TAILS = "two"
DEFAULT_TARGET_POWER = 0.8
DEFAULT_DROP_RATE = 0.10


class RequestError(ValueError):
    """The request is malformed: wrong shape, missing fields, unknown enums."""

    def __init__(self, message: str, missing: Sequence[str] = ()):
        super().__init__(message)
        self.missing = tuple(missing)


def _need(payload: dict, *names: str) -> None:
    missing = [name for name in names if payload.get(name) is None]
    if missing:
        raise RequestError(
            "missing required field(s): " + ", ".join(missing), missing
        )


def _as_number(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RequestError(f"{name} must be a number, got {value!r}")
    return float(value)


def _as_int(value: Any, name: str) -> int:
    if isinstance(value, bool):
        raise RequestError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise RequestError(f"{name} must be an integer, got {value!r}")


def _as_choice(value: Any, name: str, choices: Sequence[str]) -> str:
    if value not in choices:
        raise RequestError(
            f"{name} must be one of {', '.join(choices)}, got {value!r}"
        )
    return value


def _as_group(value: Any, name: str) -> GroupSummary:
    if not isinstance(value, dict):
        raise RequestError(f"{name} must be an object with mean, sd (or se), n")
    missing = [key for key in ("mean", "n") if value.get(key) is None]
    has_sd = value.get("sd") is not None
    has_se = value.get("se") is not None
    if not has_sd and not has_se:
        missing.append("sd")
    if missing:
        raise RequestError(
            f"{name} is missing field(s): " + ", ".join(missing),
            [f"{name}.{key}" for key in missing],
        )
    if has_sd and has_se:
        raise RequestError(f"{name} must give sd or se, not both")
    mean = _as_number(value["mean"], f"{name}.mean")
    n = _as_int(value["n"], f"{name}.n")
    if has_sd:
        sd = _as_number(value["sd"], f"{name}.sd")
    else:
        sd = sd_from_se(_as_number(value["se"], f"{name}.se"), n)
    return GroupSummary(mean=mean, sd=sd, n=n)


def _as_effect(value: Any, kind: EffectKind) -> EffectSize:
    if not isinstance(value, dict):
        raise RequestError("effect must be an object with kind and value")
    _need({"effect.kind": value.get("kind"), "effect.value": value.get("value")},
          "effect.kind", "effect.value")
    got = _as_choice(
        value["kind"], "effect.kind", [k.value for k in EffectKind]
    )
    if got != kind.value:
        raise RequestError(
            f"effect kind {got!r} does not fit this family (expected {kind.value!r})"
        )
    return EffectSize(kind=kind, value=_as_number(value["value"], "effect.value"))


def _effect_dict(effect: EffectSize) -> dict:
    return {
        "kind": effect.kind.value,
        "value": effect.value,
        "derivation": effect.derivation,
        "warnings": list(effect.warnings),
    }


def _power_result_dict(result: PowerResult) -> dict:
    return {
        "power": result.power,
        "noncentrality": result.noncentrality,
        "df1": result.df1,
        "df2": result.df2,
        "critical_value": result.critical_value,
    }


def _size_result_dict(result: SampleSizeResult) -> dict:
    return {
        "min_n": result.min_n,
        "granularity": result.granularity.value,
        "achieved_power": result.achieved_power,
        "drop_rate": result.drop_rate,
        "final_n": result.final_n,
    }


def _curve_dict(points: list[CurvePoint]) -> dict:
    return {
        "points": [
            {"n": p.n, "t_stat": p.t_stat, "p_value": p.p_value, "power": p.power}
            for p in points
        ]
    }


def _build_design(payload: dict, family: Family, analysis: str, alpha: float,
                  tails: Tails):
    """Effect size and design for a post_hoc or a_priori request."""
    kind = _EFFECT_KIND_FOR_FAMILY[family]
    effect_given = payload.get("effect") is not None
    raw_fields = {
        Family.INDEPENDENT_T: ("group1", "group2"),
        Family.PAIRED_T: ("mean_diff", "sd_diff"),
        Family.ONEWAY_ANOVA: ("groups",),
        Family.RM_WITHIN: ("ss_effect", "ss_error"),
    }[family]
    raw_given = any(payload.get(name) is not None for name in raw_fields)
    if effect_given and raw_given:
        raise RequestError(
            "provide either a pre-computed effect or raw summaries, not both"
        )
    if not effect_given and not raw_given:
        raise RequestError(
            f"missing payload: provide effect or raw summaries "
            f"({', '.join(raw_fields)})",
            raw_fields,
        )
    post_hoc = analysis == "post_hoc"

    if family is Family.INDEPENDENT_T:
        if effect_given:
            effect = _as_effect(payload["effect"], kind)
            if post_hoc:
                _need(payload, "n1", "n2")
            n1 = _as_int(payload["n1"], "n1") if payload.get("n1") is not None else None
            n2 = _as_int(payload["n2"], "n2") if payload.get("n2") is not None else None
        else:
            _need(payload, "group1", "group2")
            group1 = _as_group(payload["group1"], "group1")
            group2 = _as_group(payload["group2"], "group2")
            effect = cohen_d(group1, group2)
            n1, n2 = group1.n, group2.n
        return effect, IndependentTDesign(
            effect=effect, alpha=alpha, tails=tails, n1=n1, n2=n2
        )

    if family is Family.PAIRED_T:
        if effect_given:
            effect = _as_effect(payload["effect"], kind)
            if post_hoc:
                _need(payload, "n")
        else:
            _need(payload, "mean_diff", "sd_diff")
            if post_hoc:
                _need(payload, "n")
            n_for_summary = (
                _as_int(payload["n"], "n") if payload.get("n") is not None else 2
            )
            effect = cohen_dz(
                PairedDiffSummary(
                    mean_diff=_as_number(payload["mean_diff"], "mean_diff"),
                    sd_diff=_as_number(payload["sd_diff"], "sd_diff"),
                    n=n_for_summary,
                )
            )
        n_pairs = _as_int(payload["n"], "n") if payload.get("n") is not None else None
        return effect, PairedTDesign(
            effect=effect, alpha=alpha, tails=tails, n_pairs=n_pairs
        )

    if family is Family.ONEWAY_ANOVA:
        if effect_given:
            effect = _as_effect(payload["effect"], kind)
            _need(payload, "k")
            if post_hoc:
                _need(payload, "n_total")
            k = _as_int(payload["k"], "k")
            total_n = (
                _as_int(payload["n_total"], "n_total")
                if payload.get("n_total") is not None
                else None
            )
        else:
            _need(payload, "groups")
            raw_groups = payload["groups"]
            if not isinstance(raw_groups, list) or len(raw_groups) < 2:
                raise RequestError("groups must be a list of at least 2 group objects")
            groups = [
                _as_group(g, f"groups[{i}]") for i, g in enumerate(raw_groups)
            ]
            sd_within = (
                _as_number(payload["sd_within"], "sd_within")
                if payload.get("sd_within") is not None
                else None
            )
            effect = cohen_f_from_means(groups, sd_within)
            k = len(groups)
            total_n = sum(g.n for g in groups)
        return effect, OneWayAnovaDesign(
            effect=effect, alpha=alpha, k=k, total_n=total_n
        )

    # Family.RM_WITHIN
    if effect_given:
        effect = _as_effect(payload["effect"], kind)
        _need(payload, "k", "m")
    else:
        _need(payload, "ss_effect", "ss_error", "k", "m")
        effect = f_squared_from_variances(
            VarianceComponents(
                ss_effect=_as_number(payload["ss_effect"], "ss_effect"),
                ss_error=_as_number(payload["ss_error"], "ss_error"),
            )
        )
    if post_hoc:
        _need(payload, "n_total")
    epsilon = (
        _as_number(payload["epsilon"], "epsilon")
        if payload.get("epsilon") is not None
        else 1.0
    )
    total_n = (
        _as_int(payload["n_total"], "n_total")
        if payload.get("n_total") is not None
        else None
    )
    return effect, RmWithinDesign(
        effect=effect,
        alpha=alpha,
        k=_as_int(payload["k"], "k"),
        m=_as_int(payload["m"], "m"),
        epsilon=epsilon,
        total_n=total_n,
    )


def analyze_json(payload: Any) -> dict:
    """Validate a request dict, run the engine, and build the response dict."""
    if not isinstance(payload, dict):
        raise RequestError("request body must be a JSON object")
    _need(payload, "analysis", "family", "alpha")
    analysis = _as_choice(payload["analysis"], "analysis", _ANALYSES)
    family = Family(
        _as_choice(payload["family"], "family", [f.value for f in Family])
    )
    alpha = _as_number(payload["alpha"], "alpha")
    tails = Tails(
        _as_choice(
            payload.get("tails", DEFAULT_TAILS), "tails", [t.value for t in Tails]
        )
    )

    if analysis == "curve":
        if family is not Family.PAIRED_T:
            raise RequestError("curve analysis supports only the paired_t family")
        _need(payload, "mean_diff", "sd_diff", "n_min", "n_max")
        n_min = _as_int(payload["n_min"], "n_min")
        n_max = _as_int(payload["n_max"], "n_max")
        summary = PairedDiffSummary(
            mean_diff=_as_number(payload["mean_diff"], "mean_diff"),
            sd_diff=_as_number(payload["sd_diff"], "sd_diff"),
            n=max(n_max, 2),
        )
        effect = cohen_dz(summary)
        result = _curve_dict(pvalue_power_curve(summary, n_min, n_max, alpha, tails))
    else:
        effect, design = _build_design(payload, family, analysis, alpha, tails)
        if analysis == "post_hoc":
            result = _power_result_dict(power_of_design(design))
        else:
            target_power = _as_number(
                payload.get("target_power", DEFAULT_TARGET_POWER), "target_power"
            )
            drop_rate = _as_number(
                payload.get("drop_rate", DEFAULT_DROP_RATE), "drop_rate"
            )
            result = _size_result_dict(solve_min_n(design, target_power, drop_rate))

    return {
        "engine_version": __version__,
        "request": payload,
        "effect": _effect_dict(effect),
        "result": result,
        "warnings": list(effect.warnings),
    }
