import numpy as np
import pytest

from gridcolor import bundled
from gridcolor.grid import (
    CellSet,
    Coloring,
    DomainError,
    GridDims,
    Rect,
    crop,
    find_mono_rectangle,
    find_rectangle,
    intersection_stats,
    transpose,
    trivial_coloring,
    verify_coloring,
    verify_strong,
)


def test_grid_dims_transpose_and_containment():
    dims = GridDims(5, 3)

    assert dims.transpose() == GridDims(3, 5)
    assert dims.contains(GridDims(5, 2))
    assert not dims.contains(GridDims(3, 5))
    assert dims.cells == 15
    assert str(dims) == "5x3"


def test_grid_dims_rejects_empty_grid():
    with pytest.raises(DomainError):
        GridDims(0, 4)


def test_rect_requires_increasing_pairs():
    rect = Rect((1, 3), (2, 4))

    assert rect.corners() == ((1, 2), (1, 4), (3, 2), (3, 4))
    assert rect.as_dict() == {"rows": [1, 3], "cols": [2, 4]}
    with pytest.raises(DomainError):
        Rect((2, 2), (1, 3))


def test_coloring_rejects_colors_outside_palette():
    with pytest.raises(DomainError):
        Coloring.from_rows([[1, 3]], c=2)
    with pytest.raises(DomainError):
        Coloring.from_rows([[0, 1]], c=2)
    with pytest.raises(DomainError):
        Coloring(np.ones((2, 2)), 0)


def test_coloring_cells_are_read_only():
    coloring = Coloring.from_rows([[1, 2], [2, 1]])

    with pytest.raises(ValueError):
        coloring.cells[0, 0] = 2


def test_monochromatic_square_is_found():
    coloring = Coloring.from_rows([[1, 1], [1, 1]])

    assert find_mono_rectangle(coloring) == Rect((1, 2), (1, 2))
    assert not verify_coloring(coloring)


def test_least_rectangle_is_reported_first():
    coloring = Coloring.from_rows(
        [
            [1, 2, 2, 1],
            [2, 1, 2, 1],
            [2, 2, 1, 2],
            [1, 1, 2, 1],
        ]
    )

    assert find_mono_rectangle(coloring) == Rect((1, 4), (1, 4))
    assert find_rectangle(coloring.color_class(2)) is None


def test_bundled_ten_by_ten_is_valid():
    coloring = bundled.load("g10x10-3col")

    assert verify_coloring(coloring)
    assert all(find_rectangle(coloring.color_class(t)) is None for t in range(1, 4))


def test_verify_strong_checks_shared_colors():
    twice = Coloring.from_rows([[1, 2], [1, 2]], c=2)

    assert verify_strong(twice, 2)
    assert not verify_strong(twice, 1)
    assert verify_strong(Coloring.from_rows([[1, 2], [2, 1]], c=2), 1)
    with pytest.raises(DomainError):
        verify_strong(twice, 0)
    with pytest.raises(DomainError):
        verify_strong(twice, 3)


def test_verify_strong_rejects_repeated_color():
    assert not verify_strong(Coloring.from_rows([[1, 1, 2], [1, 1, 3]], c=3), 3)


def test_intersection_stats_on_worked_example():
    cells = bundled.load("g5x17-rfset")

    stats = intersection_stats(cells, range(1, 18))

    assert stats.counts[:6] == (22, 39, 35, 16, 3, 0)
    assert stats[2] == 39
    assert stats.union_size() == 5


def test_intersection_stats_validates_columns():
    cells = CellSet(np.zeros((2, 21), dtype=bool))

    with pytest.raises(DomainError):
        intersection_stats(cells, range(1, 22))
    with pytest.raises(DomainError):
        intersection_stats(cells, [1, 1])
    with pytest.raises(DomainError):
        intersection_stats(cells, [0, 2])


def test_cellset_helpers():
    cells = CellSet.from_members(GridDims(3, 4), [(1, 1), (2, 3), (3, 3)])

    assert cells.size == len(cells) == 3
    assert cells.members == frozenset({(1, 1), (2, 3), (3, 3)})
    assert cells.column(3) == frozenset({2, 3})
    assert cells.column_counts() == [1, 0, 2, 0]
    assert cells.to_rows() == ["R...", "..R.", "..R."]
    assert CellSet.from_rows(cells.to_rows()) == cells
    assert hash(CellSet.from_rows(cells.to_rows())) == hash(cells)
    assert cells.transpose().dims == GridDims(4, 3)
    with pytest.raises(DomainError):
        CellSet.from_members(GridDims(2, 2), [(3, 1)])


def test_crop_and_transpose_helpers():
    coloring = Coloring.from_rows([[1, 2, 3], [2, 3, 1]])

    assert crop(coloring, 2, 2).to_rows() == [[1, 2], [2, 3]]
    assert transpose(coloring).to_rows() == [[1, 2], [2, 3], [3, 1]]
    assert coloring.transpose().transpose() == coloring
    assert hash(coloring.transpose().transpose()) == hash(coloring)
    assert coloring.color_class(1).members == frozenset({(1, 1), (2, 3)})
    with pytest.raises(DomainError):
        crop(coloring, 3, 1)


def test_trivial_coloring_uses_rows_or_columns():
    wide = trivial_coloring(3, 100, 3)
    tall = trivial_coloring(100, 2, 3)

    assert wide is not None and verify_coloring(wide)
    assert tall is not None and verify_coloring(tall)
    assert wide.dims == GridDims(3, 100)
    assert trivial_coloring(4, 4, 3) is None
