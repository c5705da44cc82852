"""Tabular sweep results with CSV/JSON serialization.

CSV output is RFC-4180-style with a header row, preceded by '#'-prefixed
metadata lines.  JSON output is a single object {metadata, columns, rows}.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class ScanTable:
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(
                f"row has {len(values)} values, table has {len(self.columns)} columns"
            )
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def sorted_by(self, *names: str) -> "ScanTable":
        idx = [self.columns.index(n) for n in names]
        rows = sorted(self.rows, key=lambda r: tuple(r[i] for i in idx))
        return ScanTable(list(self.columns), rows, dict(self.metadata))

    # ---- serialization ----

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        for key, value in self.metadata.items():
            buf.write(f"# {key} = {json.dumps(value)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        writer.writerows(self.rows)
        return buf.getvalue()

    def to_json_text(self) -> str:
        return json.dumps(
            {
                "metadata": self.metadata,
                "columns": self.columns,
                "rows": [list(r) for r in self.rows],
            },
            indent=2,
        )

    def write(self, path: str | Path, fmt: str) -> None:
        text = {"csv": self.to_csv_text, "json": self.to_json_text}[fmt]()
        Path(path).write_text(text)

    @staticmethod
    def from_json_text(text: str) -> "ScanTable":
        obj = json.loads(text)
        return ScanTable(
            columns=list(obj["columns"]),
            rows=[tuple(r) for r in obj["rows"]],
            metadata=dict(obj["metadata"]),
        )

    @staticmethod
    def read_json(path: str | Path) -> "ScanTable":
        return ScanTable.from_json_text(Path(path).read_text())
