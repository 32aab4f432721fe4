"""Tabular result container with lossless CSV and JSON round-trips.

Floats are printed with 17 significant digits so that re-parsing reproduces
the exact double.  Metadata travels as ``# key: value`` comment lines in CSV
and as a ``metadata`` object in JSON.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

Cell = float | int | str


def format_cell(value: Cell) -> str:
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def parse_cell(text: str) -> Cell:
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class RecordSet:
    """Ordered rows of named columns plus a metadata header."""

    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def append(self, *values: Cell) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} cells, got {len(values)}")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list[Cell]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv(self) -> str:
        out = io.StringIO()
        for key in sorted(self.metadata):
            out.write(f"# {key}: {self.metadata[key]}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(format_cell(v) for v in row) + "\n")
        return out.getvalue()

    def to_json(self) -> str:
        payload = {
            "metadata": dict(sorted(self.metadata.items())),
            "columns": self.columns,
            "rows": [
                {name: _json_cell(v) for name, v in zip(self.columns, row)}
                for row in self.rows
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def _json_cell(value: Cell) -> Cell:
    # keep doubles exact through a 17-significant-digit detour
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return float(format(value, ".17g"))
    return value


def from_csv(text: str) -> RecordSet:
    metadata: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[tuple] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            key, _, value = body.partition(":")
            metadata[key.strip()] = value.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            rows.append(tuple(parse_cell(c) for c in cells))
    if header is None:
        raise ValueError("CSV input has no header line")
    return RecordSet(columns=header, rows=rows, metadata=metadata)


def from_json(text: str) -> RecordSet:
    payload = json.loads(text)
    columns = payload["columns"]
    rows = [tuple(row[name] for name in columns) for row in payload["rows"]]
    return RecordSet(columns=columns, rows=rows, metadata=dict(payload.get("metadata", {})))
