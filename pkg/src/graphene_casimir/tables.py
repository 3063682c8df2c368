"""CSV output with fixed number formatting and a commented header block."""

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import OutputError

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


def format_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


@dataclass
class CsvTable:
    """Rows of one result table; ``comments`` become ``# ...`` lines above the header."""

    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def add_row(self, **values: Any) -> None:
        missing = set(self.columns) - set(values)
        if missing:
            raise ValueError(f"row lacks columns {sorted(missing)}")
        self.rows.append(values)

    def render(self) -> str:
        buffer = io.StringIO()
        for comment in self.comments:
            buffer.write(f"# {comment}\n")
        writer = csv.DictWriter(
            buffer, fieldnames=self.columns, extrasaction="ignore", lineterminator="\n"
        )
        writer.writeheader()
        for row in self.rows:
            writer.writerow({key: format_cell(row[key]) for key in self.columns})
        return buffer.getvalue()

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.render(), encoding="utf-8")
        except OSError as e:
            raise OutputError(f"cannot write {path} ({e})")
        logger.info(f"Wrote {len(self.rows)} rows to {path}")
        return path
