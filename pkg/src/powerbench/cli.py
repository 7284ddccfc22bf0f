"""Command-line front end for the power workbench.

Five subcommands cover the whole engine:

``posthoc``
    Achieved power for a study that was already run (effect size or raw
    summary statistics, plus the sample size actually used).
``apriori``
    Minimum sample size for a target power, with the drop-rate-inflated
    recruitment target.
``curve``
    Per-sample-size p-value and power table for a paired design,
    emitted as CSV for plotting.
``audit``
    Batch re-analysis of a study CSV (see the schemas in
    :mod:`powerbench.audit`), printed as text or CSV.
``serve``
    The same analyses over HTTP for the browser workbench.

Every analysis subcommand builds the same JSON request the HTTP service
accepts and feeds it through :func:`powerbench.api.analyze_json`, so the
command line and the service cannot drift apart.

Exit status: 0 on success, 2 for unusable requests (unknown flags,
missing or contradictory fields), 1 for domain or I/O errors (invalid
values, unreadable files, unreachable targets).
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from powerbench import __version__
from powerbench.api import (
    DEFAULT_DROP_RATE,
    DEFAULT_TARGET_POWER,
    RequestError,
    analyze_json,
)
from powerbench.audit import (
    audit,
    parse_study_csv,
    render_report_csv,
    render_report_text,
)
from powerbench.power import Family, Tails

_FAMILY_CHOICES = ("independent-t", "paired-t", "oneway-anova", "rm-within")

# CLI effect flag -> JSON effect kind, in family order.
_EFFECT_FLAGS = (("d", "d"), ("dz", "dz"), ("f", "f"), ("f2", "f_squared"))

_GRANULARITY_LABEL = {"per_group": "per group", "pairs": "pairs", "total": "total"}


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _add_design_flags(sub: argparse.ArgumentParser) -> None:
    """Flags shared by posthoc and apriori (effect or raw summaries)."""
    sub.add_argument("family", choices=_FAMILY_CHOICES, help="test family")
    sub.add_argument("--alpha", type=float, default=0.05,
                     help="significance level (default 0.05)")
    sub.add_argument("--tails", choices=("one", "two"), default="two",
                     help="sidedness for t tests (default two)")

    effect = sub.add_argument_group("pre-computed effect size (pick one)")
    effect.add_argument("--d", type=float, help="standardized mean difference")
    effect.add_argument("--dz", type=float, help="standardized paired difference")
    effect.add_argument("--f", type=float, help="between-group effect f")
    effect.add_argument("--f2", type=float, help="variance-ratio effect f squared")

    ind = sub.add_argument_group("independent-t summaries")
    for g in (1, 2):
        ind.add_argument(f"--m{g}", type=float, help=f"group {g} mean")
        ind.add_argument(f"--sd{g}", type=float, help=f"group {g} SD")
        ind.add_argument(f"--se{g}", type=float,
                         help=f"group {g} SE (converted to SD)")
        ind.add_argument(f"--n{g}", type=int, help=f"group {g} size")

    paired = sub.add_argument_group("paired-t summaries")
    paired.add_argument("--mean-diff", type=float, help="mean of the differences")
    paired.add_argument("--sd-diff", type=float, help="SD of the differences")
    paired.add_argument("--n", type=int, help="number of pairs")

    anova = sub.add_argument_group("oneway-anova summaries")
    anova.add_argument("--means", type=_float_list,
                       help="comma-separated group means")
    anova.add_argument("--sds", type=_float_list,
                       help="comma-separated group SDs")
    anova.add_argument("--ns", type=_int_list,
                       help="comma-separated group sizes")
    anova.add_argument("--sd-within", type=float,
                       help="within-group SD overriding the pooled estimate")
    anova.add_argument("--n-total", type=int, help="total sample size")

    rm = sub.add_argument_group("rm-within summaries")
    rm.add_argument("--ss-effect", type=float, help="effect sum of squares")
    rm.add_argument("--ss-error", type=float, help="error sum of squares")
    rm.add_argument("--k", type=int, help="number of groups")
    rm.add_argument("--m", type=int, help="number of repeated measurements")
    rm.add_argument("--epsilon", type=float,
                    help="sphericity correction (default 1.0)")


def _put(payload: dict, name: str, value) -> None:
    if value is not None:
        payload[name] = value


def _group_payload(args: argparse.Namespace, g: int) -> dict | None:
    fields = {}
    _put(fields, "mean", getattr(args, f"m{g}"))
    _put(fields, "sd", getattr(args, f"sd{g}"))
    _put(fields, "se", getattr(args, f"se{g}"))
    _put(fields, "n", getattr(args, f"n{g}"))
    return fields or None


def _design_payload(args: argparse.Namespace, analysis: str,
                    parser: argparse.ArgumentParser) -> dict:
    payload = {
        "analysis": analysis,
        "family": args.family.replace("-", "_"),
        "alpha": args.alpha,
        "tails": args.tails,
    }

    given = [(flag, kind) for flag, kind in _EFFECT_FLAGS
             if getattr(args, flag) is not None]
    if len(given) > 1:
        parser.error("give at most one of --d, --dz, --f, --f2")
    if given:
        flag, kind = given[0]
        payload["effect"] = {"kind": kind, "value": getattr(args, flag)}

    _put(payload, "group1", _group_payload(args, 1))
    _put(payload, "group2", _group_payload(args, 2))
    _put(payload, "mean_diff", args.mean_diff)
    _put(payload, "sd_diff", args.sd_diff)
    _put(payload, "n", args.n)
    if args.means is not None or args.sds is not None or args.ns is not None:
        if None in (args.means, args.sds, args.ns) or not (
            len(args.means) == len(args.sds) == len(args.ns)
        ):
            parser.error("--means, --sds and --ns must all be given, same length")
        payload["groups"] = [
            {"mean": m, "sd": s, "n": n}
            for m, s, n in zip(args.means, args.sds, args.ns)
        ]
    _put(payload, "sd_within", args.sd_within)
    _put(payload, "n_total", args.n_total)
    _put(payload, "ss_effect", args.ss_effect)
    _put(payload, "ss_error", args.ss_error)
    _put(payload, "k", args.k)
    _put(payload, "m", args.m)
    _put(payload, "epsilon", args.epsilon)

    if analysis == "a_priori":
        payload["target_power"] = args.power
        payload["drop_rate"] = args.drop_rate
    return payload


def _block(lines: list[tuple[str, str]]) -> str:
    return "\n".join(f"{label + ':':<16}{value}" for label, value in lines) + "\n"


def _fmt_df(df1: float, df2: float | None) -> str:
    return f"{df1:g}" if df2 is None else f"{df1:g}, {df2:g}"


def _alpha_line(response: dict) -> str:
    request = response["request"]
    alpha = f"{request['alpha']:g}"
    if request["family"] in ("independent_t", "paired_t"):
        return f"{alpha} ({request.get('tails', 'two')}-tailed)"
    return alpha


def _print_warnings(response: dict) -> None:
    for warning in response["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)


def _cmd_posthoc(args: argparse.Namespace,
                 parser: argparse.ArgumentParser) -> int:
    response = analyze_json(_design_payload(args, "post_hoc", parser))
    effect, result = response["effect"], response["result"]
    _print_warnings(response)
    sys.stdout.write(_block([
        ("family", response["request"]["family"]),
        ("effect", f"{effect['kind']} = {effect['value']:.4f}"),
        ("alpha", _alpha_line(response)),
        ("df", _fmt_df(result["df1"], result["df2"])),
        ("noncentrality", f"{result['noncentrality']:.4f}"),
        ("critical value", f"{result['critical_value']:.4f}"),
        ("power", f"{result['power']:.4f}"),
    ]))
    return 0


def _cmd_apriori(args: argparse.Namespace,
                 parser: argparse.ArgumentParser) -> int:
    response = analyze_json(_design_payload(args, "a_priori", parser))
    effect, result = response["effect"], response["result"]
    unit = _GRANULARITY_LABEL[result["granularity"]]
    _print_warnings(response)
    sys.stdout.write(_block([
        ("family", response["request"]["family"]),
        ("effect", f"{effect['kind']} = {effect['value']:.4f}"),
        ("alpha", _alpha_line(response)),
        ("target power", f"{args.power:g}"),
        ("min N", f"{result['min_n']} {unit}"),
        ("achieved power", f"{result['achieved_power']:.4f}"),
        ("drop rate", f"{result['drop_rate']:g}"),
        ("final N", f"{result['final_n']} {unit}"),
    ]))
    return 0


def _cmd_curve(args: argparse.Namespace,
               parser: argparse.ArgumentParser) -> int:
    payload = {
        "analysis": "curve",
        "family": args.family.replace("-", "_"),
        "alpha": args.alpha,
        "tails": args.tails,
        "mean_diff": args.mean_diff,
        "sd_diff": args.sd_diff,
        "n_min": args.n_min,
        "n_max": args.n_max,
    }
    response = analyze_json(payload)
    _print_warnings(response)
    print("n,t_stat,p_value,power")
    for point in response["result"]["points"]:
        print(f"{point['n']},{point['t_stat']!r},"
              f"{point['p_value']!r},{point['power']!r}")
    return 0


def _cmd_audit(args: argparse.Namespace,
               parser: argparse.ArgumentParser) -> int:
    with open(args.csv, encoding="utf-8") as handle:
        content = handle.read()
    rows = parse_study_csv(content, Family(args.family.replace("-", "_")))
    report = audit(
        rows,
        alpha=args.alpha,
        tails=Tails(args.tails),
        target_power=args.power,
        drop_rate=args.drop_rate,
    )
    render = render_report_csv if args.format == "csv" else render_report_text
    sys.stdout.write(render(report))
    return 0


def _cmd_serve(args: argparse.Namespace,
               parser: argparse.ArgumentParser) -> int:
    from powerbench.service import serve

    serve(args.host, args.port, args.static)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="powerbench",
        description="Power and sample-size workbench over summary statistics.",
    )
    parser.add_argument("--version", action="version",
                        version=f"powerbench {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    posthoc = commands.add_parser(
        "posthoc", help="achieved power at the sample size actually used")
    _add_design_flags(posthoc)
    posthoc.set_defaults(handler=_cmd_posthoc)

    apriori = commands.add_parser(
        "apriori", help="minimum sample size for a target power")
    _add_design_flags(apriori)
    apriori.add_argument("--power", type=float, default=DEFAULT_TARGET_POWER,
                         help="target power (default 0.8)")
    apriori.add_argument("--drop-rate", type=float, default=DEFAULT_DROP_RATE,
                         help="expected drop rate (default 0.10)")
    apriori.set_defaults(handler=_cmd_apriori)

    curve = commands.add_parser(
        "curve", help="p-value and power per sample size, as CSV")
    curve.add_argument("family", choices=("paired-t",),
                       help="test family (paired-t only)")
    curve.add_argument("--mean-diff", type=float, required=True,
                       help="mean of the differences")
    curve.add_argument("--sd-diff", type=float, required=True,
                       help="SD of the differences")
    curve.add_argument("--n-min", type=int, required=True,
                       help="smallest pair count (>= 2)")
    curve.add_argument("--n-max", type=int, required=True,
                       help="largest pair count")
    curve.add_argument("--alpha", type=float, default=0.05,
                       help="significance level (default 0.05)")
    curve.add_argument("--tails", choices=("one", "two"), default="two",
                       help="sidedness (default two)")
    curve.set_defaults(handler=_cmd_curve)

    audit_cmd = commands.add_parser(
        "audit", help="re-analyze every row of a study CSV")
    audit_cmd.add_argument("--family", choices=_FAMILY_CHOICES, required=True,
                           help="schema the CSV follows")
    audit_cmd.add_argument("--csv", required=True, help="path to the study CSV")
    audit_cmd.add_argument("--format", choices=("text", "csv"), default="text",
                           help="report format (default text)")
    audit_cmd.add_argument("--alpha", type=float, default=0.05,
                           help="significance level (default 0.05)")
    audit_cmd.add_argument("--tails", choices=("one", "two"), default="two",
                           help="sidedness for t tests (default two)")
    audit_cmd.add_argument("--power", type=float, default=DEFAULT_TARGET_POWER,
                           help="target power (default 0.8)")
    audit_cmd.add_argument("--drop-rate", type=float, default=DEFAULT_DROP_RATE,
                           help="expected drop rate (default 0.10)")
    audit_cmd.set_defaults(handler=_cmd_audit)

    serve_cmd = commands.add_parser(
        "serve", help="serve the analyses (and optionally the UI) over HTTP")
    serve_cmd.add_argument("--host", default="127.0.0.1",
                           help="bind address (default 127.0.0.1)")
    serve_cmd.add_argument(
        "--port", type=int,
        default=int(os.environ.get("POWERBENCH_PORT", "8645")),
        help="port (default $POWERBENCH_PORT or 8645)")
    serve_cmd.add_argument("--static",
                           help="directory of UI files to serve at /")
    serve_cmd.set_defaults(handler=_cmd_serve)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except RequestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
