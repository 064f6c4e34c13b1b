"""CSV output with round-trip float precision."""

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, List, TextIO

FLOAT_FORMAT = "%.17e"


@dataclass
class Table:
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def records(self) -> List[dict]:
        """Rows as column -> value mappings (NaN becomes None)."""
        out = []
        for row in self.rows:
            out.append({
                c: (None if isinstance(v, float) and math.isnan(v) else v)
                for c, v in zip(self.columns, row)
            })
        return out


def format_value(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(value).lower()
    if isinstance(value, float) or hasattr(value, "dtype"):
        return FLOAT_FORMAT % float(value)
    return str(value)


def write_csv(table: Table, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])


def table_to_csv(table: Table) -> str:
    buf = io.StringIO()
    write_csv(table, buf)
    return buf.getvalue()


def write_csv_file(table: Table, path: Path | str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        write_csv(table, fh)
    return path
