"""Column tables and their CSV / JSON serialization.

CSV: header row, 17 significant digits, '.' decimal point, '\\n' line
endings.  Infinite values are written as ``+inf`` / ``-inf`` in both formats.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import EmptyTable


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    title: str = ""

    def column(self, name: str) -> list[Any]:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


def format_value(value: Any) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int,)) and not isinstance(value, bool):
        return str(value)
    v = float(value)
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    if v == 0:
        return "0"
    return format(v, ".17g")


def parse_value(text: str) -> Any:
    if text == "+inf":
        return math.inf
    if text == "-inf":
        return -math.inf
    try:
        return float(text)
    except ValueError:
        return text


def _json_value(value: Any) -> Any:
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    return v


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def from_csv(text: str) -> Table:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [tuple(parse_value(v) for v in row) for row in reader if row]
    return Table(tuple(header), rows)


def to_json(table: Table) -> str:
    records = [{c: _json_value(v) for c, v in zip(table.columns, row)} for row in table.rows]
    return json.dumps(records, indent=1) + "\n"


def from_json(text: str, columns: Sequence[str] | None = None) -> Table:
    records = json.loads(text)
    if columns is None:
        columns = tuple(records[0]) if records else ()
    rows = [tuple(parse_value(r[c]) if isinstance(r[c], str) else r[c] for c in columns)
            for r in records]
    return Table(tuple(columns), rows)


def require_rows(table: Table) -> None:
    if not table.rows:
        raise EmptyTable(f"table {table.title or table.columns} has no rows")
