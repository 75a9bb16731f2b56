"""Finite fields GF(p^s) with lookup tables, and affine lines in F^d.

An element is an int 0..p^s-1 whose base-p digits are the polynomial coefficients, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import isqrt

import numpy as np

from gridcolor.grid import DomainError

MAX_ORDER = 1 << 10

Poly = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, isqrt(p) + 1))


def _trim(poly: list[int]) -> list[int]:
    while poly and poly[-1] == 0:
        poly.pop()
    return poly


def _poly_mod(a: Poly | list[int], b: Poly, p: int) -> list[int]:
    """Remainder of a by the monic polynomial b over Z_p."""
    rem = _trim(list(a))
    deg = len(b) - 1
    while len(rem) > deg:
        lead = rem[-1]
        shift = len(rem) - 1 - deg
        for i, coef in enumerate(b):
            rem[shift + i] = (rem[shift + i] - lead * coef) % p
        _trim(rem)
    return rem


def _monic_polys(p: int, degree: int):
    """Monic polynomials of a degree, lexicographic on coefficients lowest degree first."""
    for tail in product(range(p), repeat=degree):
        yield (*tail, 1)


def is_irreducible(poly: Poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    degree = len(poly) - 1
    if degree < 1:
        return False
    return all(
        _poly_mod(poly, divisor, p)
        for d in range(1, degree // 2 + 1)
        for divisor in _monic_polys(p, d)
    )


class FiniteField:
    """GF(p^s) with the lexicographically least monic irreducible modulus."""

    def __init__(self, p: int, s: int = 1) -> None:
        if not is_prime(p):
            raise DomainError(f"field characteristic must be prime, got {p}")
        if s < 1:
            raise DomainError(f"field degree must be positive, got {s}")
        if p**s > MAX_ORDER:
            raise DomainError(f"field order {p}^{s} exceeds {MAX_ORDER}")
        self.p = p
        self.s = s
        self.order = p**s
        self.modulus: Poly = next(f for f in _monic_polys(p, s) if is_irreducible(f, p))
        self._digits = np.array(
            [[(x // p**i) % p for i in range(s)] for x in range(self.order)], dtype=np.int64
        )
        self._weights = p ** np.arange(s, dtype=np.int64)
        self._build_tables()

    def _encode(self, digits: list[int]) -> int:
        return sum(d * self.p**i for i, d in enumerate(digits))

    def _slow_mul(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.s - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + int(x) * int(y)) % self.p
        return self._encode(_poly_mod(prod, self.modulus, self.p))

    def _build_tables(self) -> None:
        q, digits = self.order, self._digits
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % self.p) @ self._weights
        self.neg_table = ((-digits) % self.p) @ self._weights

        self.generator = self.primitive_element()
        exp = np.ones(q - 1, dtype=np.int64)
        for k in range(1, q - 1):
            exp[k] = self._slow_mul(int(exp[k - 1]), self.generator)
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)

        self.exp_table, self.log_table = exp, log
        mul = np.zeros((q, q), dtype=np.int64)
        nz = np.arange(1, q)
        mul[1:, 1:] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        self.mul_table = mul
        self.inv_table = np.zeros(q, dtype=np.int64)
        self.inv_table[nz] = exp[(-log[nz]) % (q - 1)]

    def primitive_element(self) -> int:
        """Smallest element generating the multiplicative group."""
        q = self.order
        for g in range(1, q):
            x, k = g, 1
            while x != 1:
                x = self._slow_mul(x, g)
                k += 1
            if k == q - 1:
                return g
        raise AssertionError("a finite field always has a primitive element")

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, s={self.s}, modulus={self.modulus})"


@dataclass(frozen=True)
class Line:
    """The affine line {base + f * direction : f in F} of F^d."""

    base: tuple[int, ...]
    direction: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.base) != len(self.direction):
            raise DomainError("base and direction must have the same length")
        if not any(self.direction):
            raise DomainError("a line needs a nonzero direction")

    def points(self, field: FiniteField) -> frozenset[tuple[int, ...]]:
        return frozenset(
            tuple(field.add(b, field.mul(f, y)) for b, y in zip(self.base, self.direction))
            for f in field.elements()
        )


def canonical_directions(field: FiniteField, d: int) -> list[tuple[int, ...]]:
    """One direction per parallel class: first nonzero coordinate equal to 1, in lexicographic order."""
    return [
        vec
        for vec in product(field.elements(), repeat=d)
        if any(vec) and next(x for x in vec if x) == 1
    ]


def parallel_class(field: FiniteField, direction: tuple[int, ...]) -> list[Line]:
    """All lines with a given canonical direction, one per base point with a zero pivot coordinate."""
    pivot = next(i for i, x in enumerate(direction) if x)
    d = len(direction)
    return [
        Line(base[:pivot] + (0,) + base[pivot:], direction)
        for base in product(field.elements(), repeat=d - 1)
    ]
