"""Parsing of case-record text files.

One case per line: an identifier followed by 3 or 4 nominal category
labels, all comma-separated. Fields may be wrapped in double quotes;
the quotes are optional and carry no meaning beyond delimiting the
label:

    "id1", "1", "b", "region1", "2"
    459695,1901,5,3

Blank lines are skipped. Labels are kept as exact, case-sensitive
strings after trimming and unquoting; the empty string is a valid
label. Embedded commas, escaped quotes, and embedded newlines are not
supported: a quoted field runs from the opening quote to the next
quote, which must close the field.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EmptyDatasetError, FormatError

MIN_ARITY = 3
MAX_ARITY = 4


@dataclass(frozen=True, slots=True)
class CaseRecord:
    """A single parsed case: opaque id plus 3 or 4 category labels."""

    id: str
    labels: tuple[str, ...]
    line_number: int


@dataclass(frozen=True)
class Dataset:
    """All records of one input, with a uniform number of dimensions."""

    records: tuple[CaseRecord, ...]
    arity: int
    source_label: str


def _clean_field(raw: str, line_number: int) -> str:
    field = raw.strip()
    if field.startswith('"'):
        if len(field) < 2 or not field.endswith('"') or '"' in field[1:-1]:
            raise FormatError(line_number, f"unbalanced quote in field {field!r}")
        return field[1:-1]
    return field


def parse_line(text: str, line_number: int) -> CaseRecord | None:
    """Parse one physical line; whitespace-only lines yield None."""
    if not text.strip():
        return None
    parts = text.split(",")
    if not MIN_ARITY + 1 <= len(parts) <= MAX_ARITY + 1:
        raise FormatError(
            line_number,
            f"expected 4 or 5 comma-separated fields (id plus 3 or 4 variables), "
            f"got {len(parts)}",
        )
    fields = [_clean_field(part, line_number) for part in parts]
    return CaseRecord(id=fields[0], labels=tuple(fields[1:]), line_number=line_number)


def parse_dataset(lines: Iterable[str], source_label: str) -> Dataset:
    """Parse decoded text lines into a Dataset, skipping blank lines.

    The first record fixes the number of variables; any later record
    with a different count is a format error.
    """
    records: list[CaseRecord] = []
    first: CaseRecord | None = None
    for line_number, line in enumerate(lines, start=1):
        record = parse_line(line, line_number)
        if record is None:
            continue
        if first is None:
            first = record
        elif len(record.labels) != len(first.labels):
            raise FormatError(
                record.line_number,
                f"record has {len(record.labels)} variables, but line "
                f"{first.line_number} has {len(first.labels)}",
            )
        records.append(record)
    if first is None:
        raise EmptyDatasetError(f"no case records in {source_label!r}")
    return Dataset(records=tuple(records), arity=len(first.labels), source_label=source_label)


def _decoded_lines(path: str | os.PathLike) -> Iterator[str]:
    # Decode per physical line so UTF-8 errors carry a line number.
    with open(path, "rb") as fh:
        for line_number, raw in enumerate(fh, start=1):
            try:
                yield raw.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise FormatError(line_number, f"invalid UTF-8: {exc.reason}") from exc


def load_dataset(path: str | os.PathLike, label: str | None = None) -> Dataset:
    """Read and parse a case-record file (UTF-8)."""
    source_label = label if label is not None else os.path.basename(os.fspath(path))
    return parse_dataset(_decoded_lines(path), source_label)


def render_line(record: CaseRecord) -> str:
    """Serialize a record with every field quoted; parse_line inverts this."""
    return ",".join(f'"{field}"' for field in (record.id, *record.labels))


def drop_empty_labels(dataset: Dataset) -> Dataset:
    """Return a copy without records that carry an empty-string label."""
    kept = tuple(r for r in dataset.records if all(r.labels))
    if not kept:
        raise EmptyDatasetError(
            f"all records in {dataset.source_label!r} carry empty labels"
        )
    return Dataset(records=kept, arity=dataset.arity, source_label=dataset.source_label)
