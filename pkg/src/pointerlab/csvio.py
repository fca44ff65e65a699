"""Deterministic CSV writing.

All numeric output uses 17 significant digits and ``\\n`` line endings so
that identical inputs produce byte-identical files on any platform.
"""

from __future__ import annotations

from pathlib import Path


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path, header, rows) -> None:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")
