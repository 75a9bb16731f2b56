"""Colorability classification, obstruction sets, charts and bipartite Ramsey numbers."""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from enum import StrEnum
from math import comb
from typing import Any, Iterable

from gridcolor import bundled
from gridcolor.bounds import (
    check_uncolorable,
    maxrf_upper,
    obs_cardinality_bounds,
    profile_cascade_uncolorable,
    target_size,
)
from gridcolor.cache import VerdictCache
from gridcolor.config import Settings
from gridcolor.constructions import find_construction
from gridcolor.grid import Coloring, DomainError, GridDims, trivial_coloring
from gridcolor.search import SearchBudget, colorable, exists_rect_free_of_size

logger = logging.getLogger(__name__)

RFC_BUNDLES = ("g21x12-rfset-a", "g21x12-rfset-b", "g18x18-rfset")


class Status(StrEnum):
    COLORABLE = "Colorable"
    NOT_COLORABLE = "NotColorable"
    UNKNOWN = "Unknown"

    @property
    def letter(self) -> str:
        return {"Colorable": "C", "NotColorable": "N", "Unknown": "U"}[self.value]


@dataclass(frozen=True)
class Verdict:
    """A classification of G_{n,m} under c colors and the step that decided it.

    `conditional` marks verdicts that rest on the rectangle-free conjecture.
    """

    n: int
    m: int
    c: int
    status: Status
    rule: str
    witness: Coloring | None = None
    evidence: dict[str, Any] = field(default_factory=dict)
    witness_ref: str | None = None
    conditional: bool = False

    @property
    def dims(self) -> GridDims:
        return GridDims(self.n, self.m)

    @property
    def letter(self) -> str:
        return self.status.letter

    def record(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "c": self.c,
            "status": str(self.status),
            "rule": self.rule,
            "witness_ref": self.witness_ref,
        }

    def as_dict(self) -> dict[str, Any]:
        data = self.record()
        if self.evidence:
            data["evidence"] = self.evidence
        if self.conditional:
            data["conditional"] = True
        return data

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> Verdict:
        return cls(
            record["n"],
            record["m"],
            record["c"],
            Status(record["status"]),
            record.get("rule") or "cache",
            witness_ref=record.get("witness_ref"),
        )


class Classifier:
    """Runs the classification cascade with a verdict memo shared across calls.

    Steps, cheapest first: trivial palette, cached or contained verdicts, catalog constructions,
    counting rules, the profile cascade, conjectural certificates (only with `assume_rfc`), the maxrf
    route, and finally exhaustive search under the budget.
    """

    def __init__(
        self,
        settings: Settings | None = None,
        cache: VerdictCache | None = None,
        assume_rfc: bool = False,
        search: bool = True,
        budget: SearchBudget | None = None,
    ) -> None:
        self.settings = settings or Settings()
        self.budget = budget or self.settings.budget()
        self.cache = cache
        self.assume_rfc = assume_rfc
        self.search = search
        self._memo: dict[tuple[int, int, int], Verdict] = {}
        self._lock = threading.Lock()

    def classify(self, n: int, m: int, c: int) -> Verdict:
        if min(n, m, c) < 1:
            raise DomainError(f"classify needs n, m, c >= 1, got {n}, {m}, {c}")
        if (memo := self._memo.get((n, m, c))) is not None:
            return memo
        verdict = self._cascade(n, m, c)
        logger.debug("G_%dx%d, c=%d: %s by %s", n, m, c, verdict.status, verdict.rule)
        self._remember(verdict)
        return verdict

    def _remember(self, verdict: Verdict) -> None:
        with self._lock:
            self._memo[(verdict.n, verdict.m, verdict.c)] = verdict
        if self.cache is not None and not verdict.conditional and verdict.status is not Status.UNKNOWN:
            self.cache.put(verdict.record())

    def _cascade(self, n: int, m: int, c: int) -> Verdict:
        if (trivial := trivial_coloring(n, m, c)) is not None:
            return Verdict(n, m, c, Status.COLORABLE, "trivial", trivial, witness_ref="trivial")
        for step in (self._known, self._construction, self._bounds, self._rfc, self._maxrf, self._search):
            if (verdict := step(n, m, c)) is not None:
                return verdict
        return Verdict(n, m, c, Status.UNKNOWN, "timeout")

    def _known(self, n: int, m: int, c: int) -> Verdict | None:
        target = GridDims(n, m)
        for a, b in ((n, m), (m, n)):
            if (memo := self._memo.get((a, b, c))) is not None:
                return self._relabel(memo, n, m, memo.rule, transposed=(a, b) != (n, m))
            if self.cache is not None and (record := self.cache.get(a, b, c)) is not None:
                return self._relabel(
                    Verdict.from_record(record), n, m, record.get("rule") or "cache", transposed=(a, b) != (n, m)
                )
        with self._lock:
            seen = list(self._memo.values())
        if self.cache is not None:
            seen += [Verdict.from_record(r) for s in Status for r in self.cache.known(c, str(s))]
        for other in seen:
            if other.c != c or other.status is Status.UNKNOWN:
                continue
            for dims in (other.dims, other.dims.transpose()):
                colorable_above = other.status is Status.COLORABLE and dims.contains(target)
                refuted_below = other.status is Status.NOT_COLORABLE and target.contains(dims)
                if colorable_above or refuted_below:
                    return self._relabel(other, n, m, f"containment:{other.dims}", transposed=dims != other.dims)
        return None

    @staticmethod
    def _relabel(other: Verdict, n: int, m: int, rule: str, transposed: bool = False) -> Verdict:
        witness = other.witness
        if witness is not None and transposed:
            witness = witness.transpose()
        if witness is not None:
            witness = witness.crop(n, m) if witness.dims.contains(GridDims(n, m)) else None
        same = (n, m) == (other.n, other.m)
        return Verdict(
            n,
            m,
            other.c,
            other.status,
            rule,
            witness,
            other.evidence if same else {"from": str(other.dims), "rule": other.rule},
            other.witness_ref if rule == other.rule else str(other.dims),
            other.conditional,
        )

    def _construction(self, n: int, m: int, c: int) -> Verdict | None:
        if (found := find_construction(n, m, c)) is None:
            return None
        tag, coloring = found
        return Verdict(n, m, c, Status.COLORABLE, f"construction:{tag}", coloring, witness_ref=tag)

    def _bounds(self, n: int, m: int, c: int) -> Verdict | None:
        for check in (check_uncolorable, profile_cascade_uncolorable):
            bound = check(n, m, c)
            if bound.refuted:
                return Verdict(n, m, c, Status.NOT_COLORABLE, str(bound.rule), evidence=bound.evidence)
        return None

    def _rfc(self, n: int, m: int, c: int) -> Verdict | None:
        """Under the rectangle-free conjecture a big enough rectangle-free set certifies colorability."""
        if not self.assume_rfc:
            return None
        target = GridDims(n, m)
        for name in RFC_BUNDLES:
            cells = bundled.item(name).cellset
            if cells.size < target_size(cells.dims.n, cells.dims.m, c):
                continue
            if cells.dims.contains(target) or cells.dims.transpose().contains(target):
                return Verdict(
                    n,
                    m,
                    c,
                    Status.COLORABLE,
                    f"rfc:{name}",
                    evidence={"certificate": str(cells.dims), "size": cells.size},
                    witness_ref=name,
                    conditional=True,
                )
        return None

    def _maxrf(self, n: int, m: int, c: int) -> Verdict | None:
        a = target_size(n, m, c)
        upper = maxrf_upper(n, m)
        if upper < a:
            evidence = {"maxrf_upper": upper, "target": a}
            return Verdict(n, m, c, Status.NOT_COLORABLE, "maxrf-bound", evidence=evidence)
        if not self.search:
            return None
        outcome = exists_rect_free_of_size(n, m, a, self.budget)
        if outcome.refuted:
            logger.info("G_%dx%d has no rectangle-free set of %d cells, so it is not %d-colorable", n, m, a, c)
            evidence = {"target": a, "nodes": outcome.stats.nodes}
            return Verdict(n, m, c, Status.NOT_COLORABLE, "maxrf-search", evidence=evidence)
        return None

    def _search(self, n: int, m: int, c: int) -> Verdict | None:
        if not self.search:
            return None
        outcome = colorable(n, m, c, self.budget)
        evidence = {"nodes": outcome.stats.nodes, "wall_ms": round(outcome.stats.wall_ms, 3)}
        if outcome.found:
            logger.info("search colored G_%dx%d with %d colors", n, m, c)
            return Verdict(n, m, c, Status.COLORABLE, "search", outcome.witness, evidence, "search")  # type: ignore[arg-type]
        if outcome.refuted:
            logger.info("search refuted G_%dx%d with %d colors", n, m, c)
            return Verdict(n, m, c, Status.NOT_COLORABLE, "search", evidence=evidence)
        return None


def classify(n: int, m: int, c: int, budget: SearchBudget | None = None) -> Verdict:
    return Classifier(budget=budget).classify(n, m, c)


def default_max_dim(c: int) -> int:
    """Large enough for the thin minimal grid G_{c+1, c*C(c+1,2)+1}."""
    return c * comb(c + 1, 2) + 1


@dataclass(frozen=True)
class Chart:
    c: int
    n_range: range
    m_range: range
    cells: tuple[tuple[str, ...], ...]

    def letter(self, n: int, m: int) -> str:
        return self.cells[n - self.n_range.start][m - self.m_range.start]

    def render(self) -> str:
        return render_chart(self.cells, self.n_range, self.m_range)

    def as_dict(self) -> dict[str, Any]:
        return {
            "c": self.c,
            "n_range": [self.n_range.start, self.n_range.stop - 1],
            "m_range": [self.m_range.start, self.m_range.stop - 1],
            "cells": [list(row) for row in self.cells],
        }


def render_chart(cells: Iterable[Iterable[str]], n_range: range, m_range: range) -> str:
    """Column labels across the top, one line per row label."""
    lines = [" " + "".join(f" {m:>2}" for m in m_range)]
    for n, row in zip(n_range, cells):
        lines.append(f"{n:>2}" + "".join(f" {x:>2}" for x in row))
    return "\n".join(lines) + "\n"


def chart(c: int, n_range: range, m_range: range, classifier: Classifier | None = None) -> Chart:
    classifier = classifier or Classifier()
    cells = tuple(
        tuple(classifier.classify(n, m, c).letter for m in m_range) for n in n_range
    )
    return Chart(c, n_range, m_range, cells)


@dataclass(frozen=True)
class ObsReport:
    c: int
    max_dim: int
    minimal_grids: tuple[GridDims, ...]
    unknown_frontier: tuple[GridDims, ...]
    chart: Chart
    dependencies: dict[GridDims, tuple[GridDims, ...]]
    cardinality_bounds: tuple[int, int]
    assume_rfc: bool = False

    @property
    def complete(self) -> bool:
        return not self.unknown_frontier

    def as_dict(self) -> dict[str, Any]:
        return {
            "c": self.c,
            "max_dim": self.max_dim,
            "assume_rfc": self.assume_rfc,
            "complete": self.complete,
            "minimal": [[g.n, g.m] for g in self.minimal_grids],
            "unknown": [[g.n, g.m] for g in self.unknown_frontier],
            "dependencies": {str(g): [str(d) for d in deps] for g, deps in self.dependencies.items()},
            "cardinality_bounds": list(self.cardinality_bounds),
        }


def compute_obs(c: int, max_dim: int | None = None, classifier: Classifier | None = None) -> ObsReport:
    """Classify every grid with c < n, m <= max_dim and extract the minimal non-colorable ones."""
    if c < 2:
        raise DomainError(f"compute_obs needs c >= 2, got {c}")
    max_dim = max_dim or default_max_dim(c)
    classifier = classifier or Classifier()
    box = range(c + 1, max_dim + 1)
    grid = chart(c, box, box, classifier)

    def status(n: int, m: int) -> str:
        return "C" if min(n, m) <= c else grid.letter(n, m)

    minimal = tuple(
        GridDims(n, m)
        for n in box
        for m in box
        if status(n, m) == "N" and status(n - 1, m) == "C" and status(n, m - 1) == "C"
    )
    unknown = tuple(GridDims(n, m) for n in box for m in box if status(n, m) == "U")
    dependencies = {
        u: tuple(v for v in unknown if v != u and (u.contains(v) or v.contains(u))) for u in unknown
    }
    bounds = obs_cardinality_bounds(c)
    if len(minimal) > bounds[1]:
        logger.warning("found %d minimal grids for c=%d, above the %d limit", len(minimal), c, bounds[1])
    logger.info("c=%d: %d minimal grids, %d unknown cells", c, len(minimal), len(unknown))
    return ObsReport(c, max_dim, minimal, unknown, grid, dependencies, bounds, classifier.assume_rfc)


def bipartite_ramsey2(c: int, classifier: Classifier | None = None) -> tuple[int, int]:
    """(lower, upper) on the least n with G_{n,n} not c-colorable."""
    if c < 2:
        raise DomainError(f"bipartite_ramsey2 needs c >= 2, got {c}")
    classifier = classifier or Classifier()
    largest_colorable = 0
    for n in range(1, c * c + c + 1):
        verdict = classifier.classify(n, n, c)
        if verdict.status is Status.COLORABLE:
            largest_colorable = n
        elif verdict.status is Status.NOT_COLORABLE:
            return largest_colorable + 1, n
    raise AssertionError(f"G_{c * c + c}x{c * c + c} must be refuted for c={c}")
