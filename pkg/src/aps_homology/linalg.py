"""Exact sparse linear algebra: Smith normal form over Z, rank over F2, homology."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping

from .errors import InconsistentComplex


@dataclass
class SparseIntegerMatrix:
    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}
        for (i, j) in self.entries:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_dense(cls, rows: list[list[int]]):
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        return cls(nr, nc, {(i, j): x for i, r in enumerate(rows) for j, x in enumerate(r) if x})

    @classmethod
    def from_triplets(cls, rows, cols, triplets: Iterable[tuple[int, int, int]]):
        ent: dict[tuple[int, int], int] = {}
        for i, j, x in triplets:
            ent[(i, j)] = ent.get((i, j), 0) + x
        return cls(rows, cols, ent)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), x in self.entries.items():
            out[i][j] = x
        return out

    def triplets(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, x) for (i, j), x in self.entries.items())

    def nnz(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "SparseIntegerMatrix") -> "SparseIntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (i, j), x in other.entries.items():
            by_row.setdefault(i, []).append((j, x))
        out: dict[tuple[int, int], int] = {}
        for (i, k), x in self.entries.items():
            for j, y in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + x * y
        return SparseIntegerMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def mod2(self) -> "BitMatrix":
        cols = [0] * self.cols
        for (i, j), x in self.entries.items():
            if x & 1:
                cols[j] ^= 1 << i
        return BitMatrix(self.rows, self.cols, cols)

    def submatrix(self, rows: list[int], cols: list[int]) -> "SparseIntegerMatrix":
        rmap = {r: a for a, r in enumerate(rows)}
        cmap = {c: b for b, c in enumerate(cols)}
        ent = {(rmap[i], cmap[j]): x for (i, j), x in self.entries.items()
               if i in rmap and j in cmap}
        return SparseIntegerMatrix(len(rows), len(cols), ent)


@dataclass
class BitMatrix:
    """Matrix over Z/2 stored as one integer bitmask per column (bit i = row i)."""

    rows: int
    cols: int
    columns: list[int]

    def rank(self) -> int:
        return rank_of_columns(self.columns)

    def to_dense(self) -> list[list[int]]:
        return [[(self.columns[j] >> i) & 1 for j in range(self.cols)] for i in range(self.rows)]

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for c in other.columns:
            acc = 0
            while c:
                low = c & -c
                acc ^= self.columns[low.bit_length() - 1]
                c ^= low
            out.append(acc)
        return BitMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __eq__(self, other):
        return (isinstance(other, BitMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.columns == other.columns)

    def submatrix(self, rows: list[int], cols: list[int]) -> "BitMatrix":
        out = []
        for c in cols:
            v = self.columns[c]
            w = 0
            for a, r in enumerate(rows):
                if (v >> r) & 1:
                    w |= 1 << a
            out.append(w)
        return BitMatrix(len(rows), len(cols), out)


def rank_of_columns(columns: Iterable[int]) -> int:
    """Rank over F2 of bit-packed vectors (xor basis keyed by lowest set bit)."""
    basis: dict[int, int] = {}
    for v in sorted(columns, key=lambda c: c.bit_count() if hasattr(c, "bit_count") else bin(c).count("1")):
        while v:
            low = (v & -v).bit_length() - 1
            b = basis.get(low)
            if b is None:
                basis[low] = v
                break
            v ^= b
    return len(basis)


def rank_mod2(m) -> int:
    if isinstance(m, BitMatrix):
        return m.rank()
    return m.mod2().rank()


# -- Smith normal form ----------------------------------------------------

def _normalize_divisors(diag: list[int]) -> list[int]:
    """Invariant factors (d1 | d2 | ...) of a diagonal matrix with nonzero entries."""
    ds = sorted(abs(x) for x in diag if x)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                a, b = ds[i], ds[j]
                if b % a:
                    g = gcd(a, b)
                    ds[i], ds[j] = g, a // g * b
                    changed = True
        ds.sort()
    return ds


def dense_diagonalize(a: list[list[int]]) -> list[int]:
    """Diagonal entries after unimodular row/column reduction (not yet a divisor chain)."""
    a = [row[:] for row in a]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    diag = []
    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                    best = (i, j)
                    if abs(x) == 1:
                        break
            if best and abs(a[best[0]][best[1]]) == 1:
                break
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            moved = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, nc):
                            ri[j] -= q * rt[j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a[t:]:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        moved = True
                        break
            if not moved:
                break
        diag.append(a[t][t])
        t += 1
    return diag


def smith_normal_form(m: SparseIntegerMatrix, pivot_order=None) -> tuple[int, list[int]]:
    """(rank, elementary divisors d1 | d2 | ... | dr), all divisors positive.

    Unit pivots are taken greedily with a Markowitz-style fill heuristic; the
    remainder (no unit entries left) is reduced densely.  ``pivot_order`` is a
    column priority list used only to fuzz the pivot choice in tests.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), x in m.entries.items():
        rows.setdefault(i, {})[j] = x
        cols.setdefault(j, set()).add(i)
    prio = {c: n for n, c in enumerate(pivot_order)} if pivot_order is not None else None

    def key(c):
        return prio.get(c, 0) if prio is not None else len(cols[c])

    heap = [(key(c), c) for c in cols]
    heapq.heapify(heap)
    ones = 0
    stuck = []
    while heap:
        k, c = heapq.heappop(heap)
        if c not in cols:
            continue
        if prio is None and k != len(cols[c]):
            heapq.heappush(heap, (len(cols[c]), c))
            continue
        units = [r for r in cols[c] if abs(rows[r][c]) == 1]
        if not units:
            stuck.append(c)
            continue
        r = min(units, key=lambda rr: len(rows[rr]))
        prow = rows.pop(r)
        p = prow[c]
        for j in prow:
            cols[j].discard(r)
        for r2 in list(cols[c]):
            row2 = rows[r2]
            f = row2[c] * p  # p == +-1, so row2 -= (row2[c] / p) * prow
            for j, x in prow.items():
                y = row2.get(j, 0) - f * x
                if y:
                    if j not in row2:
                        cols[j].add(r2)
                    row2[j] = y
                elif j in row2:
                    del row2[j]
                    cols[j].discard(r2)
            if not row2:
                del rows[r2]
        del cols[c]
        ones += 1
        for j in prow:
            if j in cols:
                if not cols[j]:
                    del cols[j]
                elif prio is None:
                    heapq.heappush(heap, (len(cols[j]), j))
        for c2 in stuck:
            if c2 in cols:
                heapq.heappush(heap, (key(c2), c2))
        stuck = []
    rest_cols = sorted(cols)
    rest_rows = sorted(rows)
    if not rest_cols:
        return ones, [1] * ones
    cidx = {c: j for j, c in enumerate(rest_cols)}
    dense = [[0] * len(rest_cols) for _ in rest_rows]
    for a, r in enumerate(rest_rows):
        for c, x in rows[r].items():
            dense[a][cidx[c]] = x
    divs = _normalize_divisors(dense_diagonalize(dense))
    return ones + len(divs), [1] * ones + divs


# -- homology --------------------------------------------------------------

@dataclass
class HomologyReport:
    ring: str
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    chain_dims: dict[int, int]
    euler_characteristic: int
    even_divisors: int = 0

    @property
    def total_rank(self) -> int:
        return sum(self.betti.values())

    def profile(self):
        """Nonzero per-degree Betti numbers and torsion, the invariance fingerprint."""
        degs = sorted(set(self.betti) | set(self.torsion))
        out = ((h, self.betti.get(h, 0), tuple(self.torsion.get(h, ()))) for h in degs)
        return tuple(t for t in out if t[1] or t[2])

    def as_dict(self) -> dict:
        return {
            "ring": self.ring,
            "betti": {str(h): b for h, b in sorted(self.betti.items())},
            "torsion": {str(h): t for h, t in sorted(self.torsion.items()) if t},
            "chain_dims": {str(h): n for h, n in sorted(self.chain_dims.items())},
            "total_rank": self.total_rank,
            "euler_characteristic": self.euler_characteristic,
        }


def _blocks(row_keys, col_keys):
    rows_by: dict = {}
    for i, kk in enumerate(row_keys):
        rows_by.setdefault(kk, []).append(i)
    cols_by: dict = {}
    for j, kk in enumerate(col_keys):
        cols_by.setdefault(kk, []).append(j)
    return [(rows_by.get(kk, []), cs) for kk, cs in sorted(cols_by.items())]


def differential_rank(mat, row_keys=None, col_keys=None, ring="F2"):
    """(rank, divisors) of one differential, split into blocks of equal grading key.

    Divisors are only computed over Z; over F2 the list is empty.
    """
    if row_keys is None:
        blocks = [(list(range(mat.rows)), list(range(mat.cols)))]
    else:
        blocks = _blocks(row_keys, col_keys)
    rank = 0
    divs: list[int] = []
    for rs, cs in blocks:
        if not rs or not cs:
            continue
        sub = mat.submatrix(rs, cs) if len(blocks) > 1 else mat
        if ring == "F2":
            rank += rank_mod2(sub)
        else:
            r, ds = smith_normal_form(sub)
            rank += r
            divs += ds
    return rank, divs


def homology(c, ring: str | None = None) -> HomologyReport:
    """Homology of an assembled complex (see ``aps_complex.ApsComplex``).

    ``ring`` is one of "Z", "Q", "F2" and defaults to the complex's ring; an F2
    complex can only be reduced over F2.
    """
    ring = ring or c.ring
    if c.ring == "F2" and ring != "F2":
        raise ValueError("an F2 complex has no integral lift")
    if not c.verify_d_squared():
        raise InconsistentComplex("differential does not square to zero")
    shift = c.n_minus
    nd = len(c.dims)
    ranks = [0] * nd
    divisors: list[list[int]] = [[] for _ in range(nd)]
    for r in range(nd - 1):
        mat = c.differentials[r]
        if c.ring != "F2" and ring == "F2":
            mat = mat.mod2()
        rk, ds = differential_rank(mat, c.grades[r + 1], c.grades[r], "F2" if ring == "F2" else "Z")
        ranks[r] = rk
        divisors[r] = ds
    betti = {}
    torsion = {}
    chain = {}
    even = 0
    for r in range(nd):
        h = r - shift
        chain[h] = c.dims[r]
        incoming = ranks[r - 1] if r > 0 else 0
        betti[h] = c.dims[r] - ranks[r] - incoming
        if ring == "Z":
            torsion[h] = sorted(x for x in (divisors[r - 1] if r > 0 else []) if x > 1)
            even += sum(1 for x in torsion[h] if x % 2 == 0)
    euler = sum((-1) ** (h % 2) * n for h, n in chain.items())
    if sum((-1) ** (h % 2) * b for h, b in betti.items()) != euler:
        raise InconsistentComplex("Euler characteristic of homology differs from chain level")
    return HomologyReport(ring, betti, torsion if ring == "Z" else {}, chain, euler, even)
