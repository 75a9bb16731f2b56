"""Text formats for colorings ("n m c" + rows of colors) and cell sets ("n m" + rows of R/.)."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from gridcolor.grid import CellSet, Coloring


class GridFormatError(ValueError):
    """Malformed grid text; `line` is 1-based."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def _lines(text: str) -> list[str]:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GridFormatError("empty input", 1)
    return lines


def _header(line: str, width: int) -> list[int]:
    tokens = line.split()
    if len(tokens) != width or not all(t.isdigit() for t in tokens):
        raise GridFormatError(f"expected a header of {width} positive integers, got {line.strip()!r}", 1)
    values = [int(t) for t in tokens]
    if min(values) < 1:
        raise GridFormatError("header values must be positive", 1)
    return values


def _rows(lines: list[str], n: int) -> list[str]:
    body = lines[1:]
    if any(extra.strip() for extra in body[n:]):
        raise GridFormatError(f"unexpected content after {n} rows", n + 2)
    return body[:n]


def _require_rows(found: int, n: int) -> None:
    if found < n:
        raise GridFormatError(f"expected {n} rows, found {found}", found + 2)


def parse_coloring(text: str) -> Coloring:
    lines = _lines(text)
    n, m, c = _header(lines[0], 3)
    matrix = np.zeros((n, m), dtype=np.int16)
    for i, row in enumerate(_rows(lines, n)):
        lineno = i + 2
        tokens = row.split()
        if len(tokens) != m:
            raise GridFormatError(f"ragged row: expected {m} entries, found {len(tokens)}", lineno)
        for j, token in enumerate(tokens):
            if not token.isdigit():
                raise GridFormatError(f"color {token!r} is not an integer", lineno)
            color = int(token)
            if not 1 <= color <= c:
                raise GridFormatError(f"color {color} out of range 1..{c}", lineno)
            matrix[i, j] = color
    _require_rows(len(lines) - 1, n)
    return Coloring(matrix, c)


def serialize_coloring(coloring: Coloring) -> str:
    n, m = coloring.cells.shape
    rows = (" ".join(str(int(v)) for v in row) for row in coloring.cells)
    return f"{n} {m} {coloring.c}\n" + "\n".join(rows) + "\n"


def parse_cellset(text: str) -> CellSet:
    lines = _lines(text)
    n, m = _header(lines[0], 2)
    mask = np.zeros((n, m), dtype=bool)
    for i, row in enumerate(_rows(lines, n)):
        lineno = i + 2
        row = row.rstrip("\r")
        if len(row) != m:
            raise GridFormatError(f"ragged row: expected {m} cells, found {len(row)}", lineno)
        for j, ch in enumerate(row):
            if ch not in "R.":
                raise GridFormatError(f"cell character {ch!r} is neither 'R' nor '.'", lineno)
            mask[i, j] = ch == "R"
    _require_rows(len(lines) - 1, n)
    return CellSet(mask)


def serialize_cellset(cells: CellSet) -> str:
    n, m = cells.mask.shape
    return f"{n} {m}\n" + "\n".join(cells.to_rows()) + "\n"


def parse_grid(text: str) -> Coloring | CellSet:
    """Parse either format, told apart by the header width."""
    header = _lines(text)[0].split()
    if len(header) == 2:
        return parse_cellset(text)
    return parse_coloring(text)


def serialize(x: Coloring | CellSet) -> str:
    if isinstance(x, CellSet):
        return serialize_cellset(x)
    return serialize_coloring(x)


def read_grid(path: str | Path) -> Coloring | CellSet:
    return parse_grid(Path(path).read_text(encoding="utf-8"))


def write_grid(x: Coloring | CellSet, path: str | Path) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(serialize(x), encoding="utf-8")
