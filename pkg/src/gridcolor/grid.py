"""Grids, colorings, cell sets and the rectangle checks every verdict rests on."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

MAX_STATS_COLUMNS = 20


class DomainError(ValueError):
    """Raised when an operation is called outside its precondition."""


@dataclass(frozen=True, order=True)
class GridDims:
    """The grid [n] x [m]: n rows, m columns."""

    n: int
    m: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m < 1:
            raise DomainError(f"grid dimensions must be positive, got {self.n}x{self.m}")

    def transpose(self) -> GridDims:
        return GridDims(self.m, self.n)

    def contains(self, other: GridDims) -> bool:
        return self.n >= other.n and self.m >= other.m

    @property
    def cells(self) -> int:
        return self.n * self.m

    def __str__(self) -> str:
        return f"{self.n}x{self.m}"


@dataclass(frozen=True, order=True)
class Rect:
    """Two rows and two columns, 1-based, each pair strictly increasing."""

    rows: tuple[int, int]
    cols: tuple[int, int]

    def __post_init__(self) -> None:
        (r1, r2), (j1, j2) = self.rows, self.cols
        if not (1 <= r1 < r2 and 1 <= j1 < j2):
            raise DomainError(f"not a rectangle: rows {self.rows}, cols {self.cols}")

    def corners(self) -> tuple[tuple[int, int], ...]:
        (r1, r2), (j1, j2) = self.rows, self.cols
        return ((r1, j1), (r1, j2), (r2, j1), (r2, j2))

    def as_dict(self) -> dict[str, list[int]]:
        return {"rows": list(self.rows), "cols": list(self.cols)}

    def __str__(self) -> str:
        return f"Rect(rows={self.rows}, cols={self.cols})"


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Coloring:
    """An n x m matrix of colors drawn from {1..c}."""

    cells: np.ndarray
    c: int

    def __post_init__(self) -> None:
        cells = np.array(self.cells, dtype=np.int16)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise DomainError(f"a coloring needs a non-empty 2-D matrix, got shape {cells.shape}")
        if self.c < 1:
            raise DomainError(f"palette size must be positive, got {self.c}")
        if cells.min() < 1 or cells.max() > self.c:
            raise DomainError(f"colors must lie in 1..{self.c}, found {int(cells.min())}..{int(cells.max())}")
        object.__setattr__(self, "cells", _frozen(cells))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], c: int | None = None) -> Coloring:
        cells = np.array(rows, dtype=np.int16)
        return cls(cells, int(cells.max()) if c is None else c)

    @property
    def dims(self) -> GridDims:
        return GridDims(*self.cells.shape)

    def to_rows(self) -> list[list[int]]:
        return self.cells.tolist()

    def transpose(self) -> Coloring:
        return Coloring(self.cells.T, self.c)

    def crop(self, n: int, m: int) -> Coloring:
        if not self.dims.contains(GridDims(n, m)):
            raise DomainError(f"cannot crop {self.dims} to {n}x{m}")
        return Coloring(self.cells[:n, :m], self.c)

    def color_class(self, color: int) -> CellSet:
        return CellSet(self.cells == color)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.c == other.c and np.array_equal(self.cells, other.cells)

    def __hash__(self) -> int:
        return hash((self.c, self.cells.shape, self.cells.tobytes()))

    def __repr__(self) -> str:
        return f"Coloring({self.dims}, c={self.c})"


@dataclass(frozen=True, eq=False)
class CellSet:
    """A subset of [n] x [m], stored as a boolean membership matrix."""

    mask: np.ndarray

    def __post_init__(self) -> None:
        mask = np.array(self.mask, dtype=bool)
        if mask.ndim != 2 or mask.shape[0] < 1 or mask.shape[1] < 1:
            raise DomainError(f"a cell set needs a non-empty 2-D mask, got shape {mask.shape}")
        object.__setattr__(self, "mask", _frozen(mask))

    @classmethod
    def from_members(cls, dims: GridDims, members: Iterable[tuple[int, int]]) -> CellSet:
        mask = np.zeros((dims.n, dims.m), dtype=bool)
        for r, j in members:
            if not (1 <= r <= dims.n and 1 <= j <= dims.m):
                raise DomainError(f"cell ({r},{j}) lies outside {dims}")
            mask[r - 1, j - 1] = True
        return cls(mask)

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> CellSet:
        return cls(np.array([[ch == "R" for ch in row] for row in rows], dtype=bool))

    @property
    def dims(self) -> GridDims:
        return GridDims(*self.mask.shape)

    @property
    def members(self) -> frozenset[tuple[int, int]]:
        return frozenset((int(r) + 1, int(j) + 1) for r, j in np.argwhere(self.mask))

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    def column(self, j: int) -> frozenset[int]:
        """Rows of column j (the set C_j), 1-based."""
        return frozenset(int(r) + 1 for r in np.flatnonzero(self.mask[:, j - 1]))

    def column_counts(self) -> list[int]:
        return [int(x) for x in self.mask.sum(axis=0)]

    def to_rows(self) -> list[str]:
        return ["".join("R" if v else "." for v in row) for row in self.mask]

    def transpose(self) -> CellSet:
        return CellSet(self.mask.T)

    def crop(self, n: int, m: int) -> CellSet:
        if not self.dims.contains(GridDims(n, m)):
            raise DomainError(f"cannot crop {self.dims} to {n}x{m}")
        return CellSet(self.mask[:n, :m])

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        return np.array_equal(self.mask, other.mask)

    def __hash__(self) -> int:
        return hash((self.mask.shape, np.packbits(self.mask).tobytes()))

    def __repr__(self) -> str:
        return f"CellSet({self.dims}, size={self.size})"


@dataclass(frozen=True)
class IntersectionStats:
    """I_1..I_k: I_t sums |C_j1 ∩ ... ∩ C_jt| over all t-subsets of the chosen columns."""

    counts: tuple[int, ...]

    def union_size(self) -> int:
        """Size of the union of the chosen columns by inclusion-exclusion."""
        return sum((-1) ** t * count for t, count in enumerate(self.counts))

    def __getitem__(self, t: int) -> int:
        return self.counts[t - 1]


def _first_rectangle(mask: np.ndarray) -> Rect | None:
    """Lexicographically least rectangle inside a boolean mask, if any."""
    if mask.shape[0] < 2 or mask.shape[1] < 2:
        return None
    rows = mask.astype(np.int32)
    shared = np.triu(rows @ rows.T, k=1)
    hits = np.argwhere(shared >= 2)
    if hits.size == 0:
        return None
    r1, r2 = (int(v) for v in hits[0])
    j1, j2 = (int(v) for v in np.flatnonzero(mask[r1] & mask[r2])[:2])
    return Rect((r1 + 1, r2 + 1), (j1 + 1, j2 + 1))


def find_mono_rectangle(coloring: Coloring) -> Rect | None:
    """Return the least (r1, r2, j1, j2) rectangle whose four corners share a color."""
    found = (_first_rectangle(coloring.cells == color) for color in range(1, coloring.c + 1))
    return min((rect for rect in found if rect is not None), default=None)


def find_rectangle(cells: CellSet) -> Rect | None:
    """Return the least rectangle contained in the set, or None when it is rectangle-free."""
    return _first_rectangle(cells.mask)


def verify_coloring(coloring: Coloring) -> bool:
    return find_mono_rectangle(coloring) is None


def verify_strong(coloring: Coloring, c_prime: int) -> bool:
    """Check the strong (c, c')-coloring condition.

    Whenever two rows agree in two columns, the two agreeing colors must differ and both lie in 1..c'.
    """
    if not 1 <= c_prime <= coloring.c:
        raise DomainError(f"strong parameter must lie in 1..{coloring.c}, got {c_prime}")
    cells = coloring.cells
    agree = cells[:, None, :] == cells[None, :, :]
    for r1, r2 in combinations(range(cells.shape[0]), 2):
        shared = cells[r1, agree[r1, r2]]
        if shared.size < 2:
            continue
        if int(shared.max()) > c_prime or np.unique(shared).size != shared.size:
            return False
    return True


def intersection_stats(cells: CellSet, columns: Sequence[int]) -> IntersectionStats:
    """Exact I_1..I_k over the chosen columns.

    A row lying in d of the chosen columns contributes C(d, t) to I_t.
    """
    cols = list(columns)
    if len(cols) > MAX_STATS_COLUMNS:
        raise DomainError(f"intersection statistics are capped at {MAX_STATS_COLUMNS} columns, got {len(cols)}")
    if len(set(cols)) != len(cols):
        raise DomainError("columns must be distinct")
    m = cells.dims.m
    if any(not 1 <= j <= m for j in cols):
        raise DomainError(f"columns must lie in 1..{m}")
    depth = cells.mask[:, [j - 1 for j in cols]].sum(axis=1)
    return IntersectionStats(
        tuple(sum(math.comb(int(d), t) for d in depth) for t in range(1, len(cols) + 1))
    )


def transpose(x: Coloring | CellSet) -> Coloring | CellSet:
    return x.transpose()


def crop(x: Coloring | CellSet, n: int, m: int) -> Coloring | CellSet:
    return x.crop(n, m)


def trivial_coloring(n: int, m: int, c: int) -> Coloring | None:
    """With at most c rows (or columns), give each row (or column) its own color."""
    if n <= c:
        return Coloring(np.repeat(np.arange(1, n + 1)[:, None], m, axis=1), c)
    if m <= c:
        return Coloring(np.repeat(np.arange(1, m + 1)[None, :], n, axis=0), c)
    return None
