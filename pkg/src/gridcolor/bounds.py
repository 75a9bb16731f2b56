"""Closed-form uncolorability tests and upper bounds on maxrf.

Every bound is evaluated in exact integer arithmetic. A NotColorable verdict carries the numbers that
were substituted so the inequality can be re-checked by hand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from functools import lru_cache
from math import comb, isqrt
from typing import Any, Iterable

from gridcolor.grid import DomainError

RULE_ORDER = ("uncolor1", "uncolor2", "uncolor2a", "uncolor3", "csq")


class Outcome(StrEnum):
    NOT_COLORABLE = "NotColorable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BoundVerdict:
    outcome: Outcome
    rule: str | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def refuted(self) -> bool:
        return self.outcome is Outcome.NOT_COLORABLE

    def as_dict(self) -> dict[str, Any]:
        return {"outcome": str(self.outcome), "rule": self.rule, "evidence": self.evidence}


INCONCLUSIVE = BoundVerdict(Outcome.INCONCLUSIVE)


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def target_size(n: int, m: int, c: int) -> int:
    """Some color class of a c-coloring of G_{n,m} has at least this many cells."""
    return ceil_div(n * m, c)


def _orientations(n: int, m: int) -> list[tuple[int, int]]:
    return [(n, m)] if n == m else [(n, m), (m, n)]


def reiman_z(n: int, m: int) -> int:
    """z_{n,m} = floor((n/2)(1 + sqrt(1 + 4m(m-1)/n))) + 1, for m <= n <= C(m,2).

    Rewritten as floor((n + sqrt(n(n + 4m(m-1)))) / 2) + 1, which isqrt evaluates exactly.
    """
    if not m <= n <= comb(m, 2):
        raise DomainError(f"reiman_z needs m <= n <= C(m,2), got n={n}, m={m}")
    return (n + isqrt(n * (n + 4 * m * (m - 1)))) // 2 + 1


def _reiman_upper(n: int, m: int) -> int | None:
    bounds = [reiman_z(a, b) - 1 for a, b in _orientations(n, m) if b <= a <= comb(b, 2)]
    return min(bounds, default=None)


def density_feasible(n: int, m: int, a: int) -> bool:
    """Necessary condition for a rectangle-free a-subset of G_{n,m}, counting column pairs per row.

    With a = qn + r and 0 <= r < n, the rows use at least n*C(q,2) + r*q distinct column pairs.
    """
    if a <= 0:
        return True
    if a > n * m:
        return False
    q, r = divmod(a, n)
    return n * q * (q - 1) + 2 * r * q <= m * (m - 1)


def density_max(n: int, m: int) -> int:
    """Largest a with density_feasible(n, m, a)."""
    lo, hi = 0, n * m
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if density_feasible(n, m, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def binom_sum_ok(xs: Iterable[int], n: int) -> bool:
    """Columns with counts xs use sum C(x_j, 2) row pairs, and only C(n, 2) exist."""
    return sum(comb(x, 2) for x in xs) <= comb(n, 2)


def inex_upper(k: int, n: int, common_point: bool) -> int:
    """Upper bound on x_1 + ... + x_k for any k columns of a rectangle-free subset with n rows."""
    if k < 2 or n < 1:
        raise DomainError(f"inex_upper needs k >= 2 and n >= 1, got k={k}, n={n}")
    if not common_point:
        return n + comb(k, 2)
    return n + sum((-1) ** j * comb(k, j) for j in range(2, k + 1))


def maxrf_closed(n: int, m: int) -> int | None:
    """Exact maxrf when the smaller side is at most 6."""
    small, large = sorted((n, m))
    if small < 0 or small > 6:
        return None
    match small:
        case 0:
            return 0
        case 1:
            return large
        case 2:
            return large + 1
        case 3:
            return large + 3
        case 4:
            return large + 5 if large <= 5 else large + 6
        case 5:
            if large == 5:
                return 12
            if large <= 7:
                return large + 8
            if large <= 9:
                return large + 9
            return large + 10
    if large <= 7:
        return 2 * large + 4
    if large == 8:
        return 19
    if large <= 10:
        return large + 12
    if large <= 12:
        return large + 13
    if large <= 14:
        return large + 14
    return large + 15


def _base_upper(n: int, m: int, closed: bool) -> int:
    if n <= 0 or m <= 0:
        return 0
    if closed and (exact := maxrf_closed(n, m)) is not None:
        return exact
    candidates = [n * m, density_max(n, m), density_max(m, n)]
    if (reiman := _reiman_upper(n, m)) is not None:
        candidates.append(reiman)
    return min(candidates)


def placeable_column_count(n: int, m: int, t: int) -> int:
    """Largest k <= m such that k columns of exactly t cells pass every counting test."""
    if t <= 1:
        return m if t <= n else 0
    k = 0
    while k < m and _columns_of_t_feasible(n, k + 1, t):
        k += 1
    return k


def _columns_of_t_feasible(n: int, k: int, t: int) -> bool:
    return (
        t <= n
        and density_feasible(n, k, t * k)
        and density_feasible(k, n, t * k)
        and binom_sum_ok([t] * k, n)
    )


def profile_bound(n: int, m: int, t: int) -> int:
    """Bound on |A| when every column of A holds at most t cells."""
    if t <= 0:
        return 0
    k = placeable_column_count(n, m, t)
    return t * k + (t - 1) * (m - k)


@lru_cache(maxsize=None)
def maxrf_upper(n: int, m: int, closed: bool = True) -> int:
    """Upper bound on maxrf(n, m).

    Minimum of the closed table (when `closed`), Reiman, density inversion and one level of the
    largest-column split: either the largest column has x or more cells, giving
    x + (m-1) + U(n-x, m-1), or every column has at most x-1 cells, giving the profile bound.
    The split only applies with at least two columns.
    """
    if n <= 0 or m <= 0:
        return 0
    best = _base_upper(n, m, closed)
    if closed and maxrf_closed(n, m) is not None:
        return best
    for rows, cols in _orientations(n, m):
        if cols < 2:
            continue
        for x in range(1, rows + 1):
            split = x + cols - 1 + _base_upper(rows - x, cols - 1, closed)
            best = min(best, max(split, profile_bound(rows, cols, x - 1)))
    return best


def obs_cardinality_bounds(c: int) -> tuple[int, int]:
    """(lower, upper) on |OBS_c|.

    The lower count doubles 1 + the number of c' in 2..c for which G_{c+c', .} has a minimal
    obstruction distinct from the G_{c+c'-1, .} one.
    """
    if c < 2:
        raise DomainError(f"obs_cardinality_bounds needs c >= 2, got {c}")
    distinct = sum(
        1
        for cp in range(2, c + 1)
        if c * comb(c + cp, 2) < cp * (c // (cp - 1)) * comb(c + cp - 1, 2)
    )
    return 2 * (1 + distinct), 2 * c * c


def _uncolor1(n: int, m: int, c: int, a: int) -> dict[str, Any] | None:
    for rows, cols in _orientations(n, m):
        if cols <= rows <= comb(cols, 2):
            z = reiman_z(rows, cols)
            if z <= a:
                return {"n": rows, "m": cols, "c": c, "target": a, "z": z}
    return None


def _uncolor2(n: int, m: int, c: int, a: int) -> dict[str, Any] | None:
    for rows, cols in _orientations(n, m):
        r = a - rows
        if comb(cols, 2) < r <= rows:
            return {"n": rows, "m": cols, "c": c, "target": a, "r": r, "pair_limit": comb(cols, 2)}
    return None


def _uncolor2a(n: int, m: int, c: int, a: int) -> dict[str, Any] | None:
    for rows, cols in _orientations(n, m):
        for cp in range(1, c + 1):
            if rows == c + cp and cp * cols > c * comb(c + cp, 2):
                return {"n": rows, "m": cols, "c": c, "c_prime": cp, "width_limit": c * comb(c + cp, 2) // cp}
    return None


def _uncolor3(n: int, m: int, c: int, a: int) -> dict[str, Any] | None:
    for rows, cols in _orientations(n, m):
        q, r = divmod(a, rows)
        if q >= 2 and cols * (cols - 1) - 2 * q * r < rows * q * (q - 1):
            bound = (cols * (cols - 1) - 2 * q * r) // (q * (q - 1))
            return {"n": rows, "m": cols, "c": c, "target": a, "q": q, "r": r, "bound": bound}
    return None


def _csq(n: int, m: int, c: int, a: int) -> dict[str, Any] | None:
    side = c * c + c
    if min(n, m) >= side:
        return {"n": n, "m": m, "c": c, "side": side}
    return None


_RULES = {
    "uncolor1": _uncolor1,
    "uncolor2": _uncolor2,
    "uncolor2a": _uncolor2a,
    "uncolor3": _uncolor3,
    "csq": _csq,
}


def check_uncolorable(n: int, m: int, c: int) -> BoundVerdict:
    """Try each counting rule, both orientations, in RULE_ORDER; the first that fires wins."""
    a = target_size(n, m, c)
    for rule in RULE_ORDER:
        if (evidence := _RULES[rule](n, m, c, a)) is not None:
            return BoundVerdict(Outcome.NOT_COLORABLE, rule, evidence)
    return INCONCLUSIVE


def _cascade(n: int, m: int, a: int) -> dict[str, Any] | None:
    if m < 2:
        return None
    for cutoff in range(max(2, ceil_div(a, m)), n + 1):
        case_a = cutoff + m - 1 + maxrf_upper(n - cutoff, m - 1)
        if case_a >= a:
            continue
        t = cutoff - 1
        threshold = a - (t - 1) * m
        if threshold <= 0:
            continue
        evidence: dict[str, Any] = {
            "n": n,
            "m": m,
            "target": a,
            "cutoff": cutoff,
            "case_a_bound": case_a,
            "column_count": t,
            "threshold_k": threshold,
            "case_b_bound": t * (threshold - 1) + (t - 1) * (m - threshold + 1),
        }
        if threshold > m:
            return {**evidence, "case_b_bound": t * m, "case_c": "vacuous"}
        if threshold > placeable_column_count(n, m, t):
            return {**evidence, "case_c": {"n": n, "k": threshold, "a": t * threshold}}
    return None


def profile_cascade_uncolorable(n: int, m: int, c: int) -> BoundVerdict:
    """Close three cases on the column profile of a largest color class.

    For a cutoff x: (A) a column with x or more cells bounds |A| by x + m-1 + U(n-x, m-1);
    (B) otherwise fewer than k columns reach x-1 and counting bounds |A|; (C) k columns of x-1
    cells fail the counting tests. All three below the target refute c-colorability.
    """
    a = target_size(n, m, c)
    for rows, cols in _orientations(n, m):
        if (evidence := _cascade(rows, cols, a)) is not None:
            return BoundVerdict(Outcome.NOT_COLORABLE, "profile-cascade", {**evidence, "c": c})
    return INCONCLUSIVE
