"""Explicit c-colorings: strong colorings from pair partitions, their expansion, and the catalog."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from gridcolor import bundled
from gridcolor.fields import FiniteField, canonical_directions, is_prime
from gridcolor.grid import Coloring, DomainError, GridDims, trivial_coloring, verify_coloring, verify_strong

logger = logging.getLogger(__name__)

MAX_POINTS = 1 << 20
CATALOG_MAX_POINTS = 4096

Block = tuple[int, ...]


@dataclass(frozen=True)
class PairPartition:
    """Partitions P_1..P_k of subsets of [v] into blocks.

    `parts[i]` keeps its blocks in construction order; constructions that index p_{i,j} rely on it.
    """

    v: int
    parts: tuple[tuple[Block, ...], ...]

    @staticmethod
    def block_pairs(part: tuple[Block, ...]) -> set[tuple[int, int]]:
        return {pair for block in part for pair in combinations(sorted(block), 2)}

    def pairs(self, i: int) -> set[tuple[int, int]]:
        """pairs(P_i), 1-based."""
        return self.block_pairs(self.parts[i - 1])

    def problems(self) -> list[str]:
        """Violations of the partition invariants; empty when the input is a valid PairPartition."""
        found: list[str] = []
        seen: set[tuple[int, int]] = set()
        for i, part in enumerate(self.parts, start=1):
            points = [x for block in part for x in block]
            if len(points) != len(set(points)):
                found.append(f"P_{i} has overlapping blocks")
            if any(not 1 <= x <= self.v for x in points):
                found.append(f"P_{i} has points outside 1..{self.v}")
            if len({len(block) for block in part}) > 1:
                found.append(f"P_{i} has blocks of different sizes")
            pairs = self.block_pairs(part)
            if pairs & seen:
                found.append(f"P_{i} repeats a pair of an earlier part")
            seen |= pairs
        return found

    def covers_all_pairs(self) -> bool:
        union: set[tuple[int, int]] = set()
        for part in self.parts:
            union |= self.block_pairs(part)
        return union == set(combinations(range(1, self.v + 1), 2))

    def __len__(self) -> int:
        return len(self.parts)


def round_robin(n: int) -> PairPartition:
    """2n-1 pairwise pair-disjoint perfect matchings of [2n], rotating every point but 1."""
    if n < 1:
        raise DomainError(f"round_robin needs n >= 1, got {n}")
    v = 2 * n

    def rho(x: int, times: int) -> int:
        # cycle 2n -> 2n-1 -> ... -> 2 -> 2n
        return (x - 2 - times) % (v - 1) + 2

    parts = []
    for i in range(1, v):
        part = [(1, v - i + 1)]
        part += [(rho(j, i - 1), rho(v - j + 1, i - 1)) for j in range(2, n + 1)]
        parts.append(tuple(part))
    return PairPartition(v, tuple(parts))


def odd_partition(n: int) -> PairPartition:
    """2n+1 near-perfect matchings of [2n+1]: p_{i,j} = {i+j, i-j} mod 2n+1, with 0 read as 2n+1."""
    if n < 1:
        raise DomainError(f"odd_partition needs n >= 1, got {n}")
    v = 2 * n + 1

    def residue(x: int) -> int:
        return x % v or v

    parts = tuple(
        tuple((residue(i + j), residue(i - j)) for j in range(1, n + 1)) for i in range(1, v + 1)
    )
    return PairPartition(v, parts)


def strong_c_plus_one(c: int) -> Coloring:
    """Strong c-coloring of G_{c+1, C(c+1,2)}: column {x,y} paints rows x and y with color c."""
    if c < 2:
        raise DomainError(f"strong_c_plus_one needs c >= 2, got {c}")
    columns = list(combinations(range(c + 1), 2))
    cells = np.zeros((c + 1, len(columns)), dtype=np.int16)
    for j, pair in enumerate(columns):
        rest = iter(range(1, c))
        for row in range(c + 1):
            cells[row, j] = c if row in pair else next(rest)
    return Coloring(cells, c)


def strong_general(c: int, c_prime: int) -> Coloring:
    """Strong (c, c')-coloring of G_{c+c', C(c+c',2)}.

    Each part of a pair partition of [c+c'] contributes n columns; column j gives color t to the
    pair p_{(j+t) mod n} for t = 1..c', and the rows left over take colors c'+1..c in order.
    """
    if c < 2 or not 1 <= c_prime <= c:
        raise DomainError(f"strong_general needs c >= 2 and 1 <= c' <= c, got c={c}, c'={c_prime}")
    v = c + c_prime
    n = v // 2
    partition = round_robin(n) if v % 2 == 0 else odd_partition(n)
    columns: list[list[int]] = []
    for part in partition.parts:
        for j in range(1, n + 1):
            col = [0] * v
            for t in range(1, c_prime + 1):
                for row in part[((j + t) % n or n) - 1]:
                    col[row - 1] = t
            rest = iter(range(c_prime + 1, c + 1))
            columns.append([x or next(rest) for x in col])
    return Coloring(np.array(columns, dtype=np.int16).T, c)


def expand_strong(chi: Coloring, c_prime: int) -> Coloring:
    """Concatenate chi with its color shifts by c', 2c', ... giving an n x (c // c')m c-coloring."""
    if not verify_strong(chi, c_prime):
        raise DomainError(f"expand_strong needs a strong (c, {c_prime})-coloring")
    c = chi.c
    shifts = [((chi.cells - 1 + i * c_prime) % c) + 1 for i in range(c // c_prime)]
    return Coloring(np.hstack(shifts), c)


def partition_coloring(partitions: PairPartition, c: int) -> Coloring:
    """COL(i, j) = index of the block of P_j containing i, blocks ordered by their least element."""
    if problems := partitions.problems():
        raise DomainError("; ".join(problems))
    v = partitions.v
    cells = np.zeros((v, len(partitions)), dtype=np.int16)
    for j, part in enumerate(partitions.parts):
        covered = sorted(x for block in part for x in block)
        if len(part) != c or covered != list(range(1, v + 1)):
            raise DomainError(f"P_{j + 1} must split [{v}] into exactly {c} blocks")
        for u, block in enumerate(sorted(part, key=min), start=1):
            cells[[x - 1 for x in block], j] = u
    return Coloring(cells, c)


def gf_line_partition(p: int, s: int, d: int) -> PairPartition:
    """Parallel classes of lines in F^d over GF(p^s), points coded 1 + sum a_i (p^s)^(i-1)."""
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if d < 2 or s < 1:
        raise DomainError(f"gf_line_partition needs d >= 2 and s >= 1, got d={d}, s={s}")
    if p ** (d * s) > MAX_POINTS:
        raise DomainError(f"{p}^{d * s} points exceed the limit of {MAX_POINTS}")
    field = FiniteField(p, s)
    q = field.order
    codes = np.arange(q**d)
    place = q ** np.arange(d)
    coords = (codes[:, None] // place[None, :]) % q

    parts = []
    for direction in canonical_directions(field, d):
        pivot = next(i for i, x in enumerate(direction) if x)
        step = field.mul_table[coords[:, pivot][:, None], np.array(direction)[None, :]]
        base = field.add_table[coords, field.neg_table[step]]
        order = np.argsort(base @ place, kind="stable")
        lines = (order.reshape(q ** (d - 1), q) + 1).tolist()
        parts.append(tuple(sorted((tuple(line) for line in lines), key=min)))
    return PairPartition(q**d, tuple(parts))


def prime_power_coloring(p: int, s: int, d: int) -> Coloring:
    """c-coloring of G_{q^d, c * (q^d - 1)/(q - 1)} with q = p^s and c = q^(d-1)."""
    c = p ** (s * (d - 1))
    return expand_strong(partition_coloring(gf_line_partition(p, s, d), c), 1)


def _prime_power_params(c: int) -> list[tuple[int, int, int]]:
    """(p, s, d) with (p^s)^(d-1) = c, by ascending point count."""
    params = []
    for p in range(2, c + 1):
        if not is_prime(p):
            continue
        e, rest = 0, c
        while rest % p == 0:
            rest //= p
            e += 1
        if rest != 1:
            continue
        for s in range(1, e + 1):
            if e % s == 0 and p ** (s * (e // s + 1)) <= CATALOG_MAX_POINTS:
                params.append((p, s, e // s + 1))
    return sorted(params, key=lambda t: t[0] ** (t[1] * t[2]))


@lru_cache(maxsize=None)
def catalog(c: int) -> tuple[tuple[str, Coloring], ...]:
    """Every construction with palette c, in provenance order."""
    if c < 2:
        return ()
    entries: list[tuple[str, Coloring]] = []
    for name, item in bundled.colorings(c):
        entries.append((f"bundled:{name}", item.coloring))
        if item.c_prime is not None and c // item.c_prime > 1:
            entries.append((f"bundled:{name}+expand", expand_strong(item.coloring, item.c_prime)))
    entries.append(("cplusone", expand_strong(strong_c_plus_one(c), 1)))
    for cp in range(1, c + 1):
        entries.append((f"cplusgen:{cp}", expand_strong(strong_general(c, cp), cp)))
    for p, s, d in _prime_power_params(c):
        entries.append((f"primepower:{p},{s},{d}", prime_power_coloring(p, s, d)))
    logger.debug("catalog for c=%d holds %d colorings", c, len(entries))
    return tuple(entries)


def find_construction(n: int, m: int, c: int) -> tuple[str, Coloring] | None:
    """First catalog coloring (or its transpose) containing G_{n,m}, cropped and re-verified."""
    if (trivial := trivial_coloring(n, m, c)) is not None:
        return "trivial", trivial
    target = GridDims(n, m)
    for name, coloring in catalog(c):
        for tag, candidate in ((name, coloring), (f"{name}^T", coloring.transpose())):
            if candidate.dims.contains(target):
                cropped = candidate.crop(n, m)
                if verify_coloring(cropped):
                    return tag, cropped
                logger.warning("catalog entry %s failed verification at %s", tag, target)
    return None


def best_known_coloring(n: int, m: int, c: int) -> Coloring | None:
    found = find_construction(n, m, c)
    return None if found is None else found[1]


def strong_coloring(c: int, c_prime: int) -> Coloring:
    """The strong construction the catalog expands for (c, c')."""
    return strong_c_plus_one(c) if c_prime == 1 else strong_general(c, c_prime)


def construction_dims(c: int, c_prime: int) -> GridDims:
    return GridDims(c + c_prime, (c // c_prime) * comb(c + c_prime, 2))
