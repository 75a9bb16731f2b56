"""Exact search: rectangle-free sets by branch-and-bound, colorings by backtracking.

Every pruning rule is a consequence of rectangle-freeness, so Refuted is exact. Budget exhaustion is
reported as a Timeout outcome and never as a verdict.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from math import comb

import numpy as np

from gridcolor import bundled
from gridcolor.bounds import maxrf_upper
from gridcolor.grid import CellSet, Coloring, DomainError, GridDims, find_rectangle, verify_coloring

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 1 << 16
CLOCK_EVERY = 1 << 10


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10**9
    wall_ms: int = 600_000
    threads: int = 1

    def __post_init__(self) -> None:
        for name in ("max_nodes", "wall_ms", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


class SearchStatus(StrEnum):
    FOUND = "Found"
    REFUTED = "Refuted"
    TIMEOUT = "Timeout"


@dataclass(frozen=True)
class SearchStats:
    nodes: int = 0
    wall_ms: float = 0.0


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    witness: CellSet | Coloring | None = None
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def found(self) -> bool:
        return self.status is SearchStatus.FOUND

    @property
    def refuted(self) -> bool:
        return self.status is SearchStatus.REFUTED

    @property
    def timed_out(self) -> bool:
        return self.status is SearchStatus.TIMEOUT


class _BudgetExhausted(Exception):
    pass


class _Cancelled(Exception):
    pass


class _Tracker:
    """Node counter and deadline shared by every worker of one search."""

    def __init__(self, budget: SearchBudget, label: str) -> None:
        self.budget = budget
        self.label = label
        self.nodes = 0
        self.started = time.monotonic()
        self.deadline = self.started + budget.wall_ms / 1000
        self.stop = threading.Event()
        self._lock = threading.Lock()

    def tick(self) -> None:
        with self._lock:
            self.nodes += 1
            nodes = self.nodes
        if self.stop.is_set():
            raise _Cancelled
        if nodes > self.budget.max_nodes:
            raise _BudgetExhausted
        if nodes % CLOCK_EVERY == 0 and time.monotonic() > self.deadline:
            raise _BudgetExhausted
        if nodes % PROGRESS_EVERY == 0:
            logger.debug("%s: %d nodes expanded", self.label, nodes)

    def stats(self) -> SearchStats:
        return SearchStats(self.nodes, (time.monotonic() - self.started) * 1000)

    def outcome(self, status: SearchStatus, witness: CellSet | Coloring | None = None) -> SearchOutcome:
        stats = self.stats()
        if status is SearchStatus.TIMEOUT:
            logger.warning("%s: budget exhausted after %d nodes", self.label, stats.nodes)
        return SearchOutcome(status, witness, stats)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _pair_budget_bound(columns: int, cap: int, free_pairs: int) -> int:
    """Most cells `columns` columns of at most `cap` rows can hold using at most `free_pairs` row pairs."""
    if columns <= 0 or cap <= 0:
        return 0
    level = 1
    while level < cap and columns * comb(level + 1, 2) <= free_pairs:
        level += 1
    total = columns * level
    if level < cap:
        total += min(columns, (free_pairs - columns * comb(level, 2)) // level)
    return total


class _RectFreeSearch:
    """Columns placed left to right as row bitmasks, sizes non-increasing.

    Rows no column has touched are interchangeable, so a column takes the lowest untouched rows; the
    touched rows then always form a prefix 0..T-1.
    """

    def __init__(self, rows: int, cols: int, target: int, tracker: _Tracker) -> None:
        self.rows = rows
        self.cols = cols
        self.target = target
        self.tracker = tracker
        self.region_bound = [maxrf_upper(rows, k, closed=False) for k in range(cols + 1)]

    def branch(self, first_size: int) -> list[int] | None:
        first = (1 << first_size) - 1
        partners = [first & ~(1 << i) if i < first_size else 0 for i in range(self.rows)]
        return self._dfs([first], first_size, first_size, first_size, partners, comb(first_size, 2))

    def first_sizes(self) -> list[int]:
        return list(range(self.rows, 0, -1))

    def _bound(self, placed: int, total: int, cap: int, used_pairs: int) -> int:
        left = self.cols - placed
        free = comb(self.rows, 2) - used_pairs
        return total + min(_pair_budget_bound(left, cap, free), self.region_bound[left])

    def _cliques(self, candidates: int, need: int, partners: list[int]):
        if need == 0:
            yield 0
            return
        for i in _bits(candidates):
            rest = candidates & ~partners[i] & ~((1 << (i + 1)) - 1)
            for tail in self._cliques(rest, need - 1, partners):
                yield (1 << i) | tail

    def _dfs(
        self, columns: list[int], total: int, cap: int, touched: int, partners: list[int], used_pairs: int
    ) -> list[int] | None:
        self.tracker.tick()
        if total >= self.target:
            return columns + [0] * (self.cols - len(columns))
        # a new column meets the first one in at most one row
        cap = min(cap, self.rows + 1 - columns[0].bit_count())
        if len(columns) == self.cols or self._bound(len(columns), total, cap, used_pairs) < self.target:
            return None
        fresh = self.rows - touched
        for size in range(cap, 0, -1):
            for old in range(min(size, touched), max(0, size - fresh) - 1, -1):
                new_rows = ((1 << (size - old)) - 1) << touched
                for chosen in self._cliques((1 << touched) - 1, old, partners):
                    column = chosen | new_rows
                    child = list(partners)
                    for i in _bits(column):
                        child[i] |= column & ~(1 << i)
                    found = self._dfs(
                        columns + [column],
                        total + size,
                        size,
                        touched + size - old,
                        child,
                        used_pairs + comb(size, 2),
                    )
                    if found is not None:
                        return found
        return None


def _known_witness(n: int, m: int, a: int) -> CellSet | None:
    """A bundled rectangle-free set containing G_{n,m}, cropped, with at least a cells."""
    target = GridDims(n, m)
    for _, item in bundled.cellsets():
        for cells in (item.cellset, item.cellset.transpose()):
            if cells.dims.contains(target):
                cropped = cells.crop(n, m)
                if cropped.size >= a:
                    return cropped
    return None


def _columns_to_cellset(columns: list[int], rows: int, transposed: bool) -> CellSet:
    mask = np.array([[bool(col >> i & 1) for col in columns] for i in range(rows)], dtype=bool)
    cells = CellSet(mask)
    return cells.transpose() if transposed else cells


def exists_rect_free_of_size(n: int, m: int, a: int, budget: SearchBudget | None = None) -> SearchOutcome:
    """Decide whether G_{n,m} holds a rectangle-free set of at least a cells."""
    if not 0 <= a <= n * m:
        raise DomainError(f"size must lie in 0..{n * m}, got {a}")
    budget = budget or SearchBudget()
    tracker = _Tracker(budget, f"rect-free {n}x{m} >= {a}")
    if a == 0:
        return tracker.outcome(SearchStatus.FOUND, CellSet(np.zeros((n, m), dtype=bool)))
    if maxrf_upper(n, m, closed=False) < a:
        return tracker.outcome(SearchStatus.REFUTED)
    if (known := _known_witness(n, m, a)) is not None:
        return tracker.outcome(SearchStatus.FOUND, known)

    transposed = n > m
    rows, cols = (m, n) if transposed else (n, m)
    search = _RectFreeSearch(rows, cols, a, tracker)
    try:
        columns = _run_branches(search, tracker, budget.threads)
    except _BudgetExhausted:
        return tracker.outcome(SearchStatus.TIMEOUT)
    if columns is None:
        return tracker.outcome(SearchStatus.REFUTED)

    witness = _columns_to_cellset(columns, rows, transposed)
    if find_rectangle(witness) is not None or witness.size < a:
        raise AssertionError(f"search produced an invalid witness for {n}x{m} >= {a}")
    return tracker.outcome(SearchStatus.FOUND, witness)


def _run_branches(search: _RectFreeSearch, tracker: _Tracker, threads: int) -> list[int] | None:
    sizes = search.first_sizes()
    if threads <= 1:
        for size in sizes:
            if (found := search.branch(size)) is not None:
                return found
        return None

    def work(size: int) -> list[int] | None:
        try:
            found = search.branch(size)
        except _Cancelled:
            return None
        if found is not None:
            tracker.stop.set()
        return found

    exhausted = False
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(work, size) for size in sizes]
        results = []
        for future in futures:
            try:
                results.append(future.result())
            except _BudgetExhausted:
                exhausted = True
                tracker.stop.set()
    found = next((r for r in results if r is not None), None)
    if found is None and exhausted:
        raise _BudgetExhausted
    return found


def greedy_rect_free(n: int, m: int) -> CellSet:
    """A maximal rectangle-free set, filled column by column favouring the least used rows."""
    mask = np.zeros((n, m), dtype=bool)
    # keep columns near the average density of a largest set
    cap = max(2, -(-maxrf_upper(n, m) // m))
    partners = [0] * n
    load = [0] * n

    def fits(column: int, row: int) -> bool:
        return partners[row] & column == 0

    def add(column: int, row: int) -> int:
        for other in _bits(column):
            partners[other] |= 1 << row
        partners[row] |= column
        return column | (1 << row)

    columns = []
    for _ in range(m):
        column = 0
        for row in sorted(range(n), key=lambda r: (load[r], r)):
            if column.bit_count() < cap and fits(column, row):
                column = add(column, row)
                load[row] += 1
        columns.append(column)
    for j in range(m):
        for row in range(n):
            if not columns[j] >> row & 1 and fits(columns[j], row):
                columns[j] = add(columns[j], row)
    for j, column in enumerate(columns):
        mask[_bits(column), j] = True
    return CellSet(mask)


@dataclass(frozen=True)
class MaxrfResult:
    lower: int
    upper: int
    witness: CellSet
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def maxrf_exact(n: int, m: int, budget: SearchBudget | None = None) -> MaxrfResult:
    """Bisect between a greedy witness and maxrf_upper; a Timeout leaves the bracket open."""
    witness = greedy_rect_free(n, m)
    lower, upper = witness.size, maxrf_upper(n, m, closed=False)
    nodes, wall = 0, 0.0
    while lower < upper:
        size = (lower + upper + 1) // 2
        outcome = exists_rect_free_of_size(n, m, size, budget)
        nodes += outcome.stats.nodes
        wall += outcome.stats.wall_ms
        if outcome.found:
            witness = outcome.witness  # type: ignore[assignment]
            lower = witness.size
        elif outcome.refuted:
            upper = size - 1
        else:
            break
    logger.info("maxrf(%d,%d) in [%d, %d]", n, m, lower, upper)
    return MaxrfResult(lower, upper, witness, SearchStats(nodes, wall))


class _ColoringSearch:
    """Row-major backtracking over cells of an n x m grid with palette c.

    `pairs[t][j]` holds the columns j' for which an earlier row has color t at both j and j'.
    """

    def __init__(self, n: int, m: int, c: int, tracker: _Tracker) -> None:
        self.n, self.m, self.c = n, m, c
        self.tracker = tracker
        self.cells = [[0] * m for _ in range(n)]
        self.pairs = [[0] * m for _ in range(c + 1)]
        self.row_colors = [0] * (c + 1)
        self.counts = [0] * (c + 1)
        self.class_bound = maxrf_upper(n, m, closed=False)
        self.region = [maxrf_upper(r, m, closed=False) for r in range(n + 1)]

    def _capacity_ok(self, i: int, j: int) -> bool:
        remaining = self.n * self.m - (i * self.m + j)
        room = self.region[self.n - i - 1] + (self.m - j)
        return sum(min(self.class_bound - self.counts[t], room) for t in range(1, self.c + 1)) >= remaining

    def solve(self) -> bool:
        return self._cell(0, 0, 0)

    def _cell(self, i: int, j: int, used: int) -> bool:
        if i == self.n:
            return True
        if j == self.m:
            saved = self.row_colors
            self.row_colors = [0] * (self.c + 1)
            if self._cell(i + 1, 0, used):
                return True
            self.row_colors = saved
            return False
        self.tracker.tick()
        if not self._capacity_ok(i, j):
            return False
        # least-used colors first; colors still open in ascending order
        for t in sorted(range(1, min(used + 1, self.c) + 1), key=lambda t: (self.counts[t], t)):
            row = self.row_colors[t]
            if self.pairs[t][j] & row:
                continue
            changed = [(j, self.pairs[t][j])] + [(k, self.pairs[t][k]) for k in _bits(row)]
            self.pairs[t][j] |= row
            for k in _bits(row):
                self.pairs[t][k] |= 1 << j
            self.row_colors[t] = row | (1 << j)
            self.cells[i][j] = t
            self.counts[t] += 1
            if self._cell(i, j + 1, max(used, t)):
                return True
            self.counts[t] -= 1
            self.cells[i][j] = 0
            self.row_colors[t] = row
            for k, value in changed:
                self.pairs[t][k] = value
        return False


def colorable(n: int, m: int, c: int, budget: SearchBudget | None = None) -> SearchOutcome:
    """Decide c-colorability of G_{n,m} by exhaustive backtracking; colors open in ascending order."""
    if c < 1:
        raise DomainError(f"palette size must be positive, got {c}")
    GridDims(n, m)
    budget = budget or SearchBudget()
    tracker = _Tracker(budget, f"colorable {n}x{m} c={c}")
    transposed = m > n
    rows, cols = (m, n) if transposed else (n, m)
    search = _ColoringSearch(rows, cols, c, tracker)
    try:
        solved = search.solve()
    except _BudgetExhausted:
        return tracker.outcome(SearchStatus.TIMEOUT)
    if not solved:
        return tracker.outcome(SearchStatus.REFUTED)
    coloring = Coloring.from_rows(search.cells, c)
    if transposed:
        coloring = coloring.transpose()
    if not verify_coloring(coloring):
        raise AssertionError(f"search produced an invalid coloring for {n}x{m} c={c}")
    return tracker.outcome(SearchStatus.FOUND, coloring)
