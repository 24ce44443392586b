"""Point counts of Z = {(X, Y) : XY = YX = 0} over small finite fields.

Fields are table-driven: GF(p) for primes p, and GF(p^e) as polynomials over
GF(p) reduced by a fixed irreducible polynomial.  Elements are integers in
``range(q)`` (base-p digits are polynomial coefficients).
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotInZ, TooLarge

CENSUS_LIMIT = 2 ** 24

# q -> (p, e, low coefficients of the monic irreducible modulus of degree e)
_FIELDS = {
    2: (2, 1, ()),
    3: (3, 1, ()),
    5: (5, 1, ()),
    7: (7, 1, ()),
    11: (11, 1, ()),
    13: (13, 1, ()),
    4: (2, 2, (1, 1)),        # x^2 + x + 1
    8: (2, 3, (1, 1, 0)),     # x^3 + x + 1
    9: (3, 2, (1, 0)),        # x^2 + 1
    16: (2, 4, (1, 1, 0, 0)),  # x^4 + x + 1
}

SUPPORTED_FIELDS = tuple(sorted(_FIELDS))


@dataclass(frozen=True)
class FiniteField:
    q: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]  # inv[0] is unused


def _digits(x: int, p: int, e: int) -> list[int]:
    return [(x // p ** i) % p for i in range(e)]


def _undigits(ds, p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(ds))


@lru_cache(maxsize=None)
def field(q: int) -> FiniteField:
    if q not in _FIELDS:
        raise ValueError(f"unsupported field size {q}; choose from {SUPPORTED_FIELDS}")
    p, e, low = _FIELDS[q]

    def mul(a: int, b: int) -> int:
        da, db = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        # x^e = -(low) reduces the top coefficients
        for deg in range(2 * e - 2, e - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i, lc in enumerate(low):
                    prod[deg - e + i] = (prod[deg - e + i] - c * lc) % p
        return _undigits(prod[:e], p)

    add = tuple(
        tuple(_undigits([(x + y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p) for b in range(q))
        for a in range(q)
    )
    mult = tuple(tuple(mul(a, b) for b in range(q)) for a in range(q))
    neg = tuple(_undigits([(-x) % p for x in _digits(a, p, e)], p) for a in range(q))
    inv = [0] * q
    for a in range(1, q):
        inv[a] = next(b for b in range(1, q) if mult[a][b] == 1)
    return FiniteField(q, add, mult, neg, tuple(inv))


Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class MatrixPair:
    n: int
    q: int
    X: Matrix
    Y: Matrix

    def __post_init__(self):
        field(self.q)
        for name in ("X", "Y"):
            m = tuple(tuple(int(v) for v in row) for row in getattr(self, name))
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise ValueError(f"{name} is not {self.n}x{self.n}")
            if any(not 0 <= v < self.q for row in m for v in row):
                raise ValueError(f"{name} has entries outside GF({self.q})")
            object.__setattr__(self, name, m)

    @classmethod
    def from_flat(cls, n: int, q: int, x: tuple[int, ...], y: tuple[int, ...]) -> "MatrixPair":
        rows = lambda v: tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))
        return cls(n, q, rows(x), rows(y))

    def transposed_swap(self) -> "MatrixPair":
        t = lambda m: tuple(zip(*m))
        return MatrixPair(self.n, self.q, t(self.Y), t(self.X))


def matmul(a: Matrix, b: Matrix, F: FiniteField) -> Matrix:
    n = len(a)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            s = 0
            for t in range(n):
                s = F.add[s][F.mul[a[i][t]][b[t][j]]]
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def is_zero(m: Matrix) -> bool:
    return all(v == 0 for row in m for v in row)


def rank(m: Matrix, F: FiniteField) -> int:
    rows = [list(row) for row in m]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        inv = F.inv[rows[rk][c]]
        rows[rk] = [F.mul[inv][v] for v in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][c]:
                f = F.neg[rows[i][c]]
                rows[i] = [F.add[v][F.mul[f][w]] for v, w in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def in_z(p: MatrixPair) -> bool:
    F = field(p.q)
    return is_zero(matmul(p.X, p.Y, F)) and is_zero(matmul(p.Y, p.X, F))


def stratum(p: MatrixPair) -> int:
    """Smallest a with (X, Y) in Z'_a, i.e. rk X + rk Y."""
    if not in_z(p):
        raise NotInZ("XY and YX must both vanish")
    F = field(p.q)
    return rank(p.X, F) + rank(p.Y, F)


def _guard(n: int, q: int) -> None:
    if n < 1:
        raise ValueError("matrix size must be positive")
    field(q)
    if q ** (2 * n * n) > CENSUS_LIMIT:
        raise TooLarge(f"q^(2n^2) = {q}^{2 * n * n} exceeds {CENSUS_LIMIT}")


def _count(n: int, q: int, xs, ys_of) -> Counter:
    counts: Counter = Counter()
    for x in xs:
        for y in ys_of():
            p = MatrixPair.from_flat(n, q, x, y)
            if in_z(p):
                counts[stratum(p)] += 1
    return counts


def census(n: int, q: int, workers: int = 1) -> dict[int, int]:
    """Exhaustive count of Z(F_q) by stratum rk X + rk Y."""
    _guard(n, q)
    cells = n * n
    all_x = list(itertools.product(range(q), repeat=cells))
    ys = lambda: itertools.product(range(q), repeat=cells)
    if workers > 1:
        chunks = [all_x[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _count(n, q, c, ys), chunks))
        counts = sum(parts, Counter())
    else:
        counts = _count(n, q, all_x, ys)
    return {a: counts.get(a, 0) for a in range(n + 1)} | {a: c for a, c in counts.items() if a > n}


def census_reversed(n: int, q: int) -> dict[int, int]:
    """Independent enumerator: Y outer, X inner, entries in reversed index order,
    membership tested entrywise without building the product matrices."""
    _guard(n, q)
    F = field(q)
    cells = n * n
    counts: Counter = Counter()
    for y in itertools.product(range(q - 1, -1, -1), repeat=cells):
        for x in itertools.product(range(q - 1, -1, -1), repeat=cells):
            ok = True
            for i in range(n):
                for j in range(n):
                    s = t = 0
                    for m in range(n):
                        s = F.add[s][F.mul[x[i * n + m]][y[m * n + j]]]
                        t = F.add[t][F.mul[y[i * n + m]][x[m * n + j]]]
                    if s or t:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                X = tuple(tuple(x[i * n:(i + 1) * n]) for i in range(n))
                Y = tuple(tuple(y[i * n:(i + 1) * n]) for i in range(n))
                counts[rank(X, F) + rank(Y, F)] += 1
    return {a: counts.get(a, 0) for a in range(n + 1)} | {a: c for a, c in counts.items() if a > n}


def transpose_symmetric(n: int, q: int) -> bool:
    """Check that (X, Y) -> (Y^T, X^T) preserves Z and the stratum, pointwise."""
    _guard(n, q)
    cells = n * n
    for x in itertools.product(range(q), repeat=cells):
        for y in itertools.product(range(q), repeat=cells):
            p = MatrixPair.from_flat(n, q, x, y)
            s = p.transposed_swap()
            if in_z(p) != in_z(s):
                return False
            if in_z(p) and stratum(p) != stratum(s):
                return False
    return True


def cumulative(counts: dict[int, int]) -> list[int]:
    """|Z'_a(F_q)| for a = 0..max stratum."""
    top = max(counts) if counts else 0
    out, acc = [], 0
    for a in range(top + 1):
        acc += counts.get(a, 0)
        out.append(acc)
    return out
