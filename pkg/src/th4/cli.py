"""Command-line front end: report, batch, decompose, and ipf.

Exit codes: 0 success, 2 usage errors, 3 malformed or empty input
data, 4 non-convergence of the iterative fit, 1 other I/O failures.
"""

from __future__ import annotations

import glob as globmod
import json
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

import click

from .decompose import DecompositionResult, decompose_by_dimension
from .errors import EmptyDatasetError, FormatError
from .infocalc import (
    DIM_NAMES,
    H_SCHEMA,
    T_SCHEMA,
    EntropyReport,
    full_report,
    parse_subset,
    subset_name,
    transmission,
)
from .ingest import Dataset, drop_empty_labels, load_dataset
from .maxent import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE, ipf_fit, krippendorff_interaction
from .tables import build_table, project

EXIT_DATA_ERROR = 3
EXIT_NOT_CONVERGED = 4
# click's own usage failures exit with 2

SCHEMA_COLUMNS = tuple(f"H_{subset_name(s)}" for s in H_SCHEMA) + tuple(
    f"T_{subset_name(s)}" for s in T_SCHEMA
)
CSV_HEADER = "label,n_cases,arity," + ",".join(SCHEMA_COLUMNS)
DECOMP_HEADER = "group,n,weight,T_group,contribution,reduction"


def format_value(value: float, precision: int) -> str:
    """Fixed-point display rounding: half away from zero, no negative zero."""
    quantum = Decimal(1).scaleb(-precision)
    q = Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP)
    if q == 0:
        q = abs(q)
    return f"{q:f}"


def _csv_field(text: str) -> str:
    if any(ch in text for ch in ',"\r\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


@dataclass(frozen=True)
class RunRow:
    """One output row: label, case count, arity, then the 26 schema values."""

    label: str
    n_cases: int
    arity: int
    values: tuple[float, ...]

    @classmethod
    def from_report(cls, label: str, report: EntropyReport) -> "RunRow":
        return cls(label, report.n_cases, report.arity, report.schema_values())

    def to_csv(self, precision: int, full_precision: bool) -> str:
        if full_precision:
            rendered = [repr(v) for v in self.values]
        else:
            rendered = [format_value(v, precision) for v in self.values]
        return ",".join(
            [_csv_field(self.label), str(self.n_cases), str(self.arity), *rendered]
        )


def append_row(path: Path, row: RunRow, precision: int, full_precision: bool) -> None:
    """Append one whole-line row; a fresh (or empty) file gets the header first."""
    line = row.to_csv(precision, full_precision) + "\n"
    fresh = not path.exists() or path.stat().st_size == 0
    with open(path, "a", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n" + line if fresh else line)


def render_listing(label: str, report: EntropyReport, precision: int) -> str:
    values = report.schema_values()
    names = [f"H({subset_name(s)})" for s in H_SCHEMA] + [
        f"T({subset_name(s)})" for s in T_SCHEMA
    ]
    lines = [f"{label}: {report.n_cases} cases, {report.arity} dimensions, values in bits", ""]
    for name, value in zip(names, values):
        lines.append(f"{name:<9}{format_value(value, precision):>10}")
        if name == "H(WXYZ)":
            lines.append("")
    return "\n".join(lines) + "\n"


def report_json(label: str, report: EntropyReport) -> str:
    values = report.schema_values()
    h_block = {subset_name(s): v for s, v in zip(H_SCHEMA, values[: len(H_SCHEMA)])}
    t_block = {subset_name(s): v for s, v in zip(T_SCHEMA, values[len(H_SCHEMA):])}
    doc = {
        "label": label,
        "n_cases": report.n_cases,
        "arity": report.arity,
        "h": h_block,
        "t": t_block,
    }
    return json.dumps(doc, indent=2)


def decomposition_rows(result: DecompositionResult, precision: int) -> list[str]:
    def fmt(v: float) -> str:
        return format_value(v, precision)

    rows = []
    for g in result.groups:
        rows.append(
            ",".join(
                [
                    _csv_field(g.group_label),
                    str(g.n_g),
                    fmt(g.weight),
                    fmt(g.t_g),
                    fmt(g.contribution),
                    fmt(-g.contribution),
                ]
            )
        )
    n_total = sum(g.n_g for g in result.groups)
    rows.append(",".join(["pooled", str(n_total), fmt(1.0), fmt(result.t_pooled), "", ""]))
    rows.append(",".join(["between", "", "", fmt(result.t_between), "", ""]))
    return rows


def _fail_data(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_DATA_ERROR)


def _load(path: Path, label: str | None, drop_empty: bool) -> Dataset:
    try:
        dataset = load_dataset(path, label)
        if drop_empty:
            dataset = drop_empty_labels(dataset)
    except (FormatError, EmptyDatasetError) as exc:
        _fail_data(f"{path}: {exc}")
    return dataset


def _append(path: Path, row: RunRow, precision: int, full_precision: bool) -> None:
    try:
        append_row(path, row, precision, full_precision)
    except OSError as exc:
        click.echo(f"error: cannot write {path}: {exc}", err=True)
        sys.exit(1)


def _expand_inputs(inputs: tuple[str, ...]) -> list[str]:
    found: set[str] = set()
    for item in inputs:
        path = Path(item)
        if path.is_dir():
            found.update(str(p) for p in path.iterdir() if p.is_file())
        elif path.is_file():
            found.add(item)
        else:
            found.update(p for p in globmod.glob(item) if os.path.isfile(p))
    return sorted(found)


_input_option = click.option(
    "--input",
    "input_path",
    default="data.txt",
    show_default=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Case-record file to analyze.",
)
_precision_option = click.option(
    "--precision",
    default=2,
    show_default=True,
    type=click.IntRange(0, 17),
    help="Decimal places for displayed and written values.",
)
_drop_empty_option = click.option(
    "--drop-empty-labels",
    "drop_empty",
    is_flag=True,
    help="Skip records that carry an empty-string label.",
)


@click.group(name="th4", context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="th4", prog_name="th4")
def main():
    """Entropy and transmission statistics over categorical case records."""


@main.command()
@_input_option
@click.option(
    "--output",
    "output_path",
    default="th4.csv",
    show_default=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Results file to append to (created with a header if absent).",
)
@click.option("--label", default=None, help="Row label; defaults to the input file name.")
@_precision_option
@click.option(
    "--json",
    "as_json",
    is_flag=True,
    help="Print the full-precision report as JSON instead of the listing.",
)
@click.option(
    "--full-precision",
    "full_precision",
    is_flag=True,
    help="Write unrounded values to the output file.",
)
@_drop_empty_option
def report(input_path, output_path, label, precision, as_json, full_precision, drop_empty):
    """Compute all entropies and transmissions of one file; append one row."""
    dataset = _load(input_path, label, drop_empty)
    rep = full_report(build_table(dataset))
    row = RunRow.from_report(dataset.source_label, rep)
    _append(output_path, row, precision, full_precision)
    if as_json:
        click.echo(report_json(dataset.source_label, rep))
    else:
        click.echo(render_listing(dataset.source_label, rep, precision), nl=False)


@main.command()
@click.argument("inputs", nargs=-1, required=True)
@click.option(
    "--output",
    "output_path",
    default="th4.csv",
    show_default=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Results file to append to (created with a header if absent).",
)
@_precision_option
@click.option("--full-precision", "full_precision", is_flag=True)
@_drop_empty_option
@click.option(
    "--keep-going",
    is_flag=True,
    help="Warn about files that fail to parse instead of aborting.",
)
def batch(inputs, output_path, precision, full_precision, drop_empty, keep_going):
    """Append one row per input file, in lexicographic file-name order.

    INPUTS are files, directories, or glob patterns.
    """
    files = _expand_inputs(inputs)
    if not files:
        raise click.UsageError(f"no input files matched {' '.join(inputs)!r}")
    for path in files:
        name = os.path.basename(path)
        try:
            dataset = load_dataset(path)
            if drop_empty:
                dataset = drop_empty_labels(dataset)
            rep = full_report(build_table(dataset))
        except (FormatError, EmptyDatasetError) as exc:
            if keep_going:
                click.echo(f"warning: skipping {path}: {exc}", err=True)
                continue
            _fail_data(f"{path}: {exc}")
        _append(output_path, RunRow.from_report(name, rep), precision, full_precision)
        click.echo(f"{name}: {rep.n_cases} cases, {rep.arity} dimensions")


@main.command()
@_input_option
@click.option(
    "--output",
    "output_path",
    default=None,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Also write the decomposition rows to this CSV file.",
)
@click.option(
    "--group-by",
    "group_by",
    required=True,
    type=click.Choice(list(DIM_NAMES)),
    help="Dimension whose labels define the groups.",
)
@click.option(
    "--subset",
    required=True,
    help="Dimensions to decompose over, e.g. 'wxz' or 'w,x,z'.",
)
@_precision_option
@_drop_empty_option
def decompose(input_path, output_path, group_by, subset, precision, drop_empty):
    """Split the pooled transmission into per-group contributions."""
    dataset = _load(input_path, None, drop_empty)
    try:
        dims = parse_subset(subset)
        result = decompose_by_dimension(dataset, DIM_NAMES.index(group_by), dims)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    rows = decomposition_rows(result, precision)
    click.echo(
        f"T({subset_name(result.subset)}) grouped by {group_by}: "
        f"{dataset.arity} dimensions, {len(result.groups)} groups"
    )
    click.echo(DECOMP_HEADER)
    for line in rows:
        click.echo(line)
    if output_path is not None:
        try:
            with open(output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write("\n".join([DECOMP_HEADER, *rows]) + "\n")
        except OSError as exc:
            click.echo(f"error: cannot write {output_path}: {exc}", err=True)
            sys.exit(1)


@main.command()
@_input_option
@click.option(
    "--subset",
    required=True,
    help="Exactly three dimensions, e.g. 'wxy'.",
)
@click.option(
    "--tolerance",
    default=DEFAULT_TOLERANCE,
    show_default=True,
    type=float,
    help="Convergence threshold on the largest margin deviation.",
)
@click.option(
    "--max-iter",
    "max_iter",
    default=DEFAULT_MAX_ITERATIONS,
    show_default=True,
    type=click.IntRange(min=0),
)
@_precision_option
@click.option("--json", "as_json", is_flag=True, help="Emit the summary as JSON.")
@_drop_empty_option
def ipf(input_path, subset, tolerance, max_iter, precision, as_json, drop_empty):
    """Fit the no-three-way-interaction model; report the interaction information."""
    dataset = _load(input_path, None, drop_empty)
    try:
        dims = parse_subset(subset)
        if len(dims) != 3:
            raise ValueError("the fit needs exactly three distinct dimensions")
        table = project(build_table(dataset), dims)
        result = ipf_fit(table, tolerance=tolerance, max_iterations=max_iter)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    if not result.converged:
        click.echo(
            f"error: no convergence within {result.iterations} iterations "
            f"(max margin error {result.max_margin_error:.3e}, tolerance {tolerance:.3e})",
            err=True,
        )
        sys.exit(EXIT_NOT_CONVERGED)
    interaction = krippendorff_interaction(table, result)
    t3 = transmission(table, (0, 1, 2))
    redundancy = interaction - t3
    if as_json:
        doc = {
            "subset": subset_name(dims),
            "n_cases": table.total,
            "interaction_bits": interaction,
            "transmission_bits": t3,
            "redundancy_bits": redundancy,
            "redundancy_is_experimental": True,
            "iterations": result.iterations,
            "max_margin_error": result.max_margin_error,
            "tolerance": tolerance,
            "converged": True,
        }
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"subset: {subset_name(dims)}")
        click.echo(f"cases: {table.total}")
        click.echo(f"interaction_bits: {format_value(interaction, precision)}")
        click.echo(f"transmission_bits: {format_value(t3, precision)}")
        click.echo(f"redundancy_bits (experimental): {format_value(redundancy, precision)}")
        click.echo(f"iterations: {result.iterations}")
        click.echo(f"max_margin_error: {result.max_margin_error:.3e}")
        click.echo("converged: yes")


if __name__ == "__main__":
    main()
