"""Batch audits of published summary tables.

Reads CSV transcriptions of summary rows (one schema per test family),
then regenerates the derived columns such tables usually print: effect
size, post-hoc power at the published sample size, the minimum N for a
target power, and the drop-rate-inflated final N.

Rows that cannot be reproduced from the data given (e.g. variance
components left blank) are marked as such rather than estimated, and a
zero effect is marked unreachable rather than searched for.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from powerbench.effect_size import (
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
    Family,
    Granularity,
    IndependentTDesign,
    OneWayAnovaDesign,
    PairedTDesign,
    RmWithinDesign,
    Tails,
    UnreachableTargetError,
    power_of_design,
    solve_min_n,
)


class StudyCsvError(ValueError):
    """A CSV input failed to parse; the message names line and column."""

    def __init__(self, message: str, line: int, column: str | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column!r}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class IndependentTSummary:
    """Payload of one independent-t row: two group summaries."""

    group1: GroupSummary
    group2: GroupSummary


@dataclass(frozen=True)
class OneWayAnovaSummary:
    """Payload of one one-way ANOVA row: k group summaries.

    ``sd_within`` overrides the pooled within-group SD when the source
    table prints its own value.
    """

    groups: tuple[GroupSummary, ...]
    sd_within: float | None = None

    def __post_init__(self) -> None:
        if len(self.groups) < 2:
            raise ValueError(
                f"a one-way ANOVA row needs at least 2 groups, got {len(self.groups)}"
            )
        if self.sd_within is not None:
            sd = float(self.sd_within)
            if math.isnan(sd) or math.isinf(sd) or sd <= 0.0:
                raise ValueError(f"sd_within must be > 0, got {self.sd_within!r}")


@dataclass(frozen=True)
class RmWithinSummary:
    """Payload of one repeated-measures row.

    ``components`` may be None when the source table does not publish the
    variance components; such rows are reported as not reproducible.
    """

    components: VarianceComponents | None
    k: int
    m: int
    n_total: int
    epsilon: float

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")
        if not isinstance(self.m, int) or self.m < 2:
            raise ValueError(f"m must be an integer >= 2, got {self.m!r}")
        if not isinstance(self.n_total, int) or self.n_total <= self.k:
            raise ValueError(
                f"n_total must be an integer > k={self.k}, got {self.n_total!r}"
            )
        eps = float(self.epsilon)
        lower = 1.0 / (self.m - 1)
        if math.isnan(eps) or not lower <= eps <= 1.0:
            raise ValueError(
                f"epsilon must lie in [{lower!r}, 1] for m={self.m}, got {self.epsilon!r}"
            )


StudyPayload = Union[
    IndependentTSummary, PairedDiffSummary, OneWayAnovaSummary, RmWithinSummary
]


@dataclass(frozen=True)
class StudyRow:
    """One labelled row of a summary table, ready to audit."""

    label: str
    family: Family
    payload: StudyPayload
    reported_p: str | None = None


@dataclass(frozen=True)
class AuditRow:
    """Regenerated columns for one study row."""

    label: str
    effect: EffectSize | None
    power: float | None
    min_n: int | None
    final_n: int | None
    granularity: Granularity | None
    note: str = ""


@dataclass(frozen=True)
class AuditReport:
    """Audit rows plus the configuration they were computed under."""

    rows: tuple[AuditRow, ...]
    alpha: float
    tails: Tails
    target_power: float
    drop_rate: float


def _cell(cells: Sequence[str], idx: int, column: str, line: int) -> str:
    if idx >= len(cells):
        raise StudyCsvError("missing cell", line, column)
    return cells[idx].strip()


def _cell_float(cells: Sequence[str], idx: int, column: str, line: int) -> float:
    raw = _cell(cells, idx, column, line)
    try:
        return float(raw)
    except ValueError:
        raise StudyCsvError(f"expected a number, got {raw!r}", line, column) from None


def _cell_int(cells: Sequence[str], idx: int, column: str, line: int) -> int:
    raw = _cell(cells, idx, column, line)
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        value = float(raw)
    except ValueError:
        raise StudyCsvError(f"expected an integer, got {raw!r}", line, column) from None
    if not value.is_integer():
        raise StudyCsvError(f"expected an integer, got {raw!r}", line, column)
    return int(value)


def _split_lines(content: bytes | str) -> Iterable[tuple[int, list[str]]]:
    """Physical (line number, parsed cells) pairs, skipping blanks and comments."""
    text = content.decode("utf-8") if isinstance(content, (bytes, bytearray)) else content
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        yield lineno, next(csv.reader([line]))


def parse_study_csv(content: bytes | str, family: Family) -> list[StudyRow]:
    """Parse a UTF-8 CSV of summary rows for one test family.

    Expected headers (an optional trailing ``reported_p`` column is
    passed through verbatim on every schema):

    - independent_t: ``label,mean1,sd1,n1,mean2,sd2,n2`` (``se1``/``se2``
      accepted in place of ``sd1``/``sd2``; converted via SD = SE * sqrt(n))
    - paired_t: ``label,mean_diff,sd_diff,n``
    - oneway_anova: ``label,mean1,sd1,n1,mean2,sd2,n2,...`` with two or
      more (mean, sd, n) triplets, then an optional ``sd_within``
    - rm_within: ``label,ss_effect,ss_error,k,m,n_total,epsilon`` where
      the two sums of squares may both be left empty to mark the row as
      not reproducible

    Lines that are blank or start with ``#`` are skipped.  Any unknown
    header, non-numeric cell or invariant violation raises
    :class:`StudyCsvError` naming the offending line and column.
    """
    if not isinstance(family, Family):
        raise ValueError(f"family must be a Family value, got {family!r}")
    lines = iter(_split_lines(content))
    try:
        header_line, header = next(lines)
    except StopIteration:
        return []
    cols = [c.strip() for c in header]

    check_header, parse_row = {
        Family.INDEPENDENT_T: (_independent_t_header, _independent_t_row),
        Family.PAIRED_T: (_paired_t_header, _paired_t_row),
        Family.ONEWAY_ANOVA: (_oneway_anova_header, _oneway_anova_row),
        Family.RM_WITHIN: (_rm_within_header, _rm_within_row),
    }[family]
    layout = check_header(cols, header_line)
    return [parse_row(lineno, cells, cols, layout) for lineno, cells in lines]


def _header_error(cols: list[str], want: str, idx: int, line: int) -> StudyCsvError:
    got = cols[idx] if idx < len(cols) else "<missing>"
    return StudyCsvError(
        f"expected header column {want!r}, got {got!r}", line, got
    )


def _tail_reported_p(cols: list[str], base: int, line: int) -> bool:
    """Validate that any columns beyond ``base`` are exactly ['reported_p']."""
    extra = cols[base:]
    if not extra:
        return False
    if extra == ["reported_p"]:
        return True
    raise StudyCsvError(
        f"unexpected trailing header columns {extra!r}", line, extra[0]
    )


def _opt_reported_p(cells: Sequence[str], idx: int, present: bool) -> str | None:
    if not present or idx >= len(cells):
        return None
    raw = cells[idx].strip()
    return raw if raw else None


def _independent_t_header(cols: list[str], line: int):
    if cols[:1] != ["label"]:
        raise _header_error(cols, "label", 0, line)
    se_flags = []
    for g, base in ((1, 1), (2, 4)):
        if len(cols) < base + 3 or cols[base] != f"mean{g}":
            raise _header_error(cols, f"mean{g}", base, line)
        stat = cols[base + 1]
        if stat not in (f"sd{g}", f"se{g}"):
            raise _header_error(cols, f"sd{g} or se{g}", base + 1, line)
        se_flags.append(stat == f"se{g}")
        if cols[base + 2] != f"n{g}":
            raise _header_error(cols, f"n{g}", base + 2, line)
    return se_flags, _tail_reported_p(cols, 7, line)


def _independent_t_row(lineno: int, cells: list[str], cols: list[str], layout):
    se_flags, has_p = layout
    label = _cell(cells, 0, "label", lineno)
    groups = []
    for base, is_se in ((1, se_flags[0]), (4, se_flags[1])):
        mean = _cell_float(cells, base, cols[base], lineno)
        stat = _cell_float(cells, base + 1, cols[base + 1], lineno)
        n = _cell_int(cells, base + 2, cols[base + 2], lineno)
        try:
            sd = sd_from_se(stat, n) if is_se else stat
            groups.append(GroupSummary(mean=mean, sd=sd, n=n))
        except ValueError as exc:
            raise StudyCsvError(str(exc), lineno, cols[base + 1]) from None
    return StudyRow(
        label=label,
        family=Family.INDEPENDENT_T,
        payload=IndependentTSummary(group1=groups[0], group2=groups[1]),
        reported_p=_opt_reported_p(cells, 7, has_p),
    )


def _paired_t_header(cols: list[str], line: int):
    want = ["label", "mean_diff", "sd_diff", "n"]
    for idx, name in enumerate(want):
        if idx >= len(cols) or cols[idx] != name:
            raise _header_error(cols, name, idx, line)
    return _tail_reported_p(cols, 4, line)


def _paired_t_row(lineno: int, cells: list[str], cols: list[str], layout):
    has_p = layout
    label = _cell(cells, 0, "label", lineno)
    mean_diff = _cell_float(cells, 1, "mean_diff", lineno)
    sd_diff = _cell_float(cells, 2, "sd_diff", lineno)
    n = _cell_int(cells, 3, "n", lineno)
    try:
        payload = PairedDiffSummary(mean_diff=mean_diff, sd_diff=sd_diff, n=n)
    except ValueError as exc:
        raise StudyCsvError(str(exc), lineno, "sd_diff") from None
    return StudyRow(
        label=label,
        family=Family.PAIRED_T,
        payload=payload,
        reported_p=_opt_reported_p(cells, 4, has_p),
    )


def _oneway_anova_header(cols: list[str], line: int):
    if cols[:1] != ["label"]:
        raise _header_error(cols, "label", 0, line)
    g = 0
    idx = 1
    while idx < len(cols) and cols[idx] == f"mean{g + 1}":
        g += 1
        for offset, name in ((1, f"sd{g}"), (2, f"n{g}")):
            if idx + offset >= len(cols) or cols[idx + offset] != name:
                raise _header_error(cols, name, idx + offset, line)
        idx += 3
    if g < 2:
        raise StudyCsvError(
            "a one-way ANOVA schema needs at least 2 (mean, sd, n) triplets",
            line,
            cols[idx] if idx < len(cols) else None,
        )
    has_sd_within = idx < len(cols) and cols[idx] == "sd_within"
    if has_sd_within:
        idx += 1
    return g, has_sd_within, _tail_reported_p(cols, idx, line)


def _oneway_anova_row(lineno: int, cells: list[str], cols: list[str], layout):
    group_count, has_sd_within, has_p = layout
    label = _cell(cells, 0, "label", lineno)
    groups = []
    for g in range(group_count):
        base = 1 + 3 * g
        mean = _cell_float(cells, base, cols[base], lineno)
        sd = _cell_float(cells, base + 1, cols[base + 1], lineno)
        n = _cell_int(cells, base + 2, cols[base + 2], lineno)
        try:
            groups.append(GroupSummary(mean=mean, sd=sd, n=n))
        except ValueError as exc:
            raise StudyCsvError(str(exc), lineno, cols[base + 1]) from None
    idx = 1 + 3 * group_count
    sd_within = None
    if has_sd_within:
        raw = _cell(cells, idx, "sd_within", lineno)
        if raw:
            sd_within = _cell_float(cells, idx, "sd_within", lineno)
        idx += 1
    try:
        payload = OneWayAnovaSummary(groups=tuple(groups), sd_within=sd_within)
    except ValueError as exc:
        raise StudyCsvError(str(exc), lineno, "sd_within") from None
    return StudyRow(
        label=label,
        family=Family.ONEWAY_ANOVA,
        payload=payload,
        reported_p=_opt_reported_p(cells, idx, has_p),
    )


def _rm_within_header(cols: list[str], line: int):
    want = ["label", "ss_effect", "ss_error", "k", "m", "n_total", "epsilon"]
    for idx, name in enumerate(want):
        if idx >= len(cols) or cols[idx] != name:
            raise _header_error(cols, name, idx, line)
    return _tail_reported_p(cols, 7, line)


def _rm_within_row(lineno: int, cells: list[str], cols: list[str], layout):
    has_p = layout
    label = _cell(cells, 0, "label", lineno)
    raw_effect = _cell(cells, 1, "ss_effect", lineno)
    raw_error = _cell(cells, 2, "ss_error", lineno)
    if bool(raw_effect) != bool(raw_error):
        missing = "ss_effect" if not raw_effect else "ss_error"
        raise StudyCsvError(
            "ss_effect and ss_error must be supplied together "
            "(leave both empty to mark the row not reproducible)",
            lineno,
            missing,
        )
    components = None
    if raw_effect:
        try:
            components = VarianceComponents(
                ss_effect=_cell_float(cells, 1, "ss_effect", lineno),
                ss_error=_cell_float(cells, 2, "ss_error", lineno),
            )
        except ValueError as exc:
            raise StudyCsvError(str(exc), lineno, "ss_error") from None
    k = _cell_int(cells, 3, "k", lineno)
    m = _cell_int(cells, 4, "m", lineno)
    n_total = _cell_int(cells, 5, "n_total", lineno)
    epsilon = _cell_float(cells, 6, "epsilon", lineno)
    try:
        payload = RmWithinSummary(
            components=components, k=k, m=m, n_total=n_total, epsilon=epsilon
        )
    except ValueError as exc:
        raise StudyCsvError(str(exc), lineno, "epsilon") from None
    return StudyRow(
        label=label,
        family=Family.RM_WITHIN,
        payload=payload,
        reported_p=_opt_reported_p(cells, 7, has_p),
    )


def _audit_one(
    row: StudyRow, alpha: float, tails: Tails, target_power: float, drop_rate: float
) -> AuditRow:
    payload = row.payload
    if isinstance(payload, IndependentTSummary):
        effect = cohen_d(payload.group1, payload.group2)
        design = IndependentTDesign(
            effect=effect,
            alpha=alpha,
            tails=tails,
            n1=payload.group1.n,
            n2=payload.group2.n,
        )
    elif isinstance(payload, PairedDiffSummary):
        effect = cohen_dz(payload)
        design = PairedTDesign(
            effect=effect, alpha=alpha, tails=tails, n_pairs=payload.n
        )
    elif isinstance(payload, OneWayAnovaSummary):
        effect = cohen_f_from_means(payload.groups, payload.sd_within)
        design = OneWayAnovaDesign(
            effect=effect,
            alpha=alpha,
            k=len(payload.groups),
            total_n=sum(g.n for g in payload.groups),
        )
    elif isinstance(payload, RmWithinSummary):
        if payload.components is None:
            return AuditRow(
                label=row.label,
                effect=None,
                power=None,
                min_n=None,
                final_n=None,
                granularity=None,
                note="not reproducible: missing variance components",
            )
        effect = f_squared_from_variances(payload.components)
        design = RmWithinDesign(
            effect=effect,
            alpha=alpha,
            k=payload.k,
            m=payload.m,
            epsilon=payload.epsilon,
            total_n=payload.n_total,
        )
    else:
        raise ValueError(f"unsupported payload {payload!r}")

    power = power_of_design(design).power
    if effect.value == 0.0:
        return AuditRow(
            label=row.label,
            effect=effect,
            power=power,
            min_n=None,
            final_n=None,
            granularity=None,
            note="unreachable: zero effect",
        )
    try:
        size = solve_min_n(design, target_power, drop_rate)
    except UnreachableTargetError as exc:
        return AuditRow(
            label=row.label,
            effect=effect,
            power=power,
            min_n=None,
            final_n=None,
            granularity=None,
            note=f"unreachable: {exc}",
        )
    return AuditRow(
        label=row.label,
        effect=effect,
        power=power,
        min_n=size.min_n,
        final_n=size.final_n,
        granularity=size.granularity,
        note="",
    )


def audit(
    rows: Sequence[StudyRow],
    alpha: float,
    tails: Tails,
    target_power: float,
    drop_rate: float,
) -> AuditReport:
    """Regenerate effect size, power, min N and final N for every row.

    Each row is the straight composition of the engine operations on its
    payload; rows that cannot be computed are marked in their ``note``
    instead of aborting the report.
    """
    if not rows:
        raise ValueError("audit needs at least one row")
    return AuditReport(
        rows=tuple(
            _audit_one(row, alpha, tails, target_power, drop_rate) for row in rows
        ),
        alpha=alpha,
        tails=tails,
        target_power=target_power,
        drop_rate=drop_rate,
    )


def _fmt(value, pattern: str = "{}") -> str:
    return "" if value is None else pattern.format(value)


def render_report_csv(report: AuditReport) -> str:
    """Report as CSV: a ``#`` config line, a header, one line per row."""
    out = [
        f"# alpha={report.alpha}, tails={report.tails.value}, "
        f"target_power={report.target_power}, drop_rate={report.drop_rate}",
        "label,effect_kind,effect_value,power,min_n,final_n,granularity,note",
    ]
    for row in report.rows:
        cells = [
            row.label,
            row.effect.kind.value if row.effect else "",
            _fmt(row.effect.value if row.effect else None, "{:.4f}"),
            _fmt(row.power, "{:.4f}"),
            _fmt(row.min_n),
            _fmt(row.final_n),
            row.granularity.value if row.granularity else "",
            row.note,
        ]
        out.append(",".join(_csv_quote(c) for c in cells))
    return "\n".join(out) + "\n"


def _csv_quote(cell: str) -> str:
    if any(ch in cell for ch in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def render_report_text(report: AuditReport) -> str:
    """Report as aligned text with a config header line."""
    head = (
        f"alpha={report.alpha}  tails={report.tails.value}  "
        f"target_power={report.target_power}  drop_rate={report.drop_rate}"
    )
    names = ["label", "effect", "power", "min N", "final N", "granularity", "note"]
    table = []
    for row in report.rows:
        effect = (
            f"{row.effect.kind.value}={row.effect.value:.4f}" if row.effect else ""
        )
        table.append(
            [
                row.label,
                effect,
                _fmt(row.power, "{:.4f}"),
                _fmt(row.min_n),
                _fmt(row.final_n),
                row.granularity.value if row.granularity else "",
                row.note,
            ]
        )
    widths = [
        max(len(names[i]), *(len(r[i]) for r in table)) if table else len(names[i])
        for i in range(len(names))
    ]
    lines = [head, ""]
    lines.append(
        "  ".join(names[i].ljust(widths[i]) for i in range(len(names))).rstrip()
    )
    for r in table:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(names))).rstrip())
    return "\n".join(lines) + "\n"
