from pathlib import Path

import pytest

from gridcolor.formats import (
    GridFormatError,
    parse_cellset,
    parse_coloring,
    parse_grid,
    read_grid,
    serialize,
    write_grid,
)
from gridcolor.grid import CellSet, Coloring


def test_parse_coloring_reads_header_and_rows():
    coloring = parse_coloring("2 3 3\n1 2 3\n3 2 1\n")

    assert coloring.c == 3
    assert coloring.to_rows() == [[1, 2, 3], [3, 2, 1]]
    assert serialize(coloring) == "2 3 3\n1 2 3\n3 2 1\n"


def test_parse_cellset_reads_marks():
    cells = parse_cellset("2 3\nR.R\n.R.\n\n")

    assert cells.members == frozenset({(1, 1), (1, 3), (2, 2)})
    assert serialize(cells) == "2 3\nR.R\n.R.\n"


@pytest.mark.parametrize(
    ("text", "line", "fragment"),
    [
        ("", 1, "empty"),
        ("2 x 3\n", 1, "header"),
        ("0 2 2\n", 1, "positive"),
        ("2 2 2\n1 2\n1\n", 3, "ragged"),
        ("2 2 2\n1 3\n1 2\n", 2, "out of range"),
        ("2 2 2\n1 b\n1 2\n", 2, "not an integer"),
        ("3 2 2\n1 2\n2 1\n", 4, "expected 3 rows"),
        ("1 2 2\n1 2\n2 1\n", 3, "after 1 rows"),
    ],
)
def test_parse_coloring_reports_line(text, line, fragment):
    with pytest.raises(GridFormatError) as info:
        parse_coloring(text)

    assert info.value.line == line
    assert fragment in str(info.value)


@pytest.mark.parametrize(
    ("text", "line", "fragment"),
    [
        ("2 2\nR.\nRx\n", 3, "neither"),
        ("2 2\nR.\nR\n", 3, "ragged"),
        ("2 2 2\nR.\n", 1, "header"),
    ],
)
def test_parse_cellset_reports_line(text, line, fragment):
    with pytest.raises(GridFormatError) as info:
        parse_cellset(text)

    assert info.value.line == line
    assert fragment in str(info.value)


def test_parse_grid_dispatches_on_header_width():
    assert isinstance(parse_grid("1 2\nR.\n"), CellSet)
    assert isinstance(parse_grid("1 2 2\n1 2\n"), Coloring)


def test_read_and_write_round_trip(tmp_path: Path):
    coloring = Coloring.from_rows([[1, 2], [2, 1]])
    target = tmp_path / "nested" / "grid.grid"

    write_grid(coloring, target)

    assert read_grid(target) == coloring
