"""Exact integer linear algebra: matrices, Smith normal form, abelian groups.

All arithmetic uses Python integers, so nothing overflows.  Matrices are
small at desk scale (a few hundred rows), which keeps dense row lists fine.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        rows = [[int(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = int(v)
        return cls.from_rows(out, cols)

    @classmethod
    def vstack(cls, blocks: Sequence[IntMatrix], cols: int | None = None) -> IntMatrix:
        if cols is None:
            if not blocks:
                raise ValueError("vstack of nothing needs an explicit column count")
            cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("column mismatch in vstack")
        return cls(sum(b.rows for b in blocks), cols,
                   tuple(x for b in blocks for x in b.entries))

    @classmethod
    def hstack(cls, blocks: Sequence[IntMatrix]) -> IntMatrix:
        return cls.vstack([b.T for b in blocks]).T

    @classmethod
    def block_diag(cls, blocks: Sequence[IntMatrix]) -> IntMatrix:
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.tolist()):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(
            self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(self.rows, other.cols, tuple(
            sum(a * b for a, b in zip(self.row(i), c)) for i in range(self.rows) for c in ocols))

    def _same_shape(self, other: IntMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def mod(self, q: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(a % q for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return determinant(self.tolist())

    def inverse(self) -> IntMatrix:
        """Integer inverse of a unimodular matrix (adjugate / determinant)."""
        d = self.det()
        if d not in (1, -1):
            raise ValueError(f"matrix is not invertible over Z (det {d})")
        n = self.rows
        if n == 0:
            return self
        rows = self.tolist()
        cof = [[(-1) ** (i + j) * determinant([r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i])
                for i in range(n)] for j in range(n)]
        return IntMatrix.from_rows([[d * x for x in r] for r in cof], n)

    def to_numpy(self) -> np.ndarray:
        """int64 copy; raises if an entry does not fit."""
        if any(abs(x) >= 2 ** 62 for x in self.entries):
            raise OverflowError("entries too large for int64")
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def to_json(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.tolist()]

    @classmethod
    def from_json(cls, data: list[list[str]] | str, cols: int | None = None) -> IntMatrix:
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_rows([[int(x) for x in r] for r in data], cols)

    def __str__(self) -> str:
        if not self.entries:
            return f"[{self.rows}x{self.cols}]"
        w = max(len(str(x)) for x in self.entries)
        return "\n".join("[" + " ".join(str(x).rjust(w) for x in self.row(i)) + "]"
                         for i in range(self.rows))


def as_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    if isinstance(m, np.ndarray):
        if m.ndim != 2:
            raise ValueError("expected a 2-d array")
        return IntMatrix(m.shape[0], m.shape[1], tuple(int(x) for x in m.ravel()))
    return IntMatrix.from_rows(m)


def determinant(rows: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri = a[i]
            rk = a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def rank_bareiss(m) -> int:
    """Rank over Q by fraction-free elimination; independent of the Smith code."""
    a = as_matrix(m).tolist()
    rows = len(a)
    cols = len(a[0]) if a else 0
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        arc = a[r][c]
        for i in range(r + 1, rows):
            aic = a[i][c]
            ri = a[i]
            rr = a[r]
            for j in range(c, cols):
                ri[j] = (ri[j] * arc - aic * rr[j]) // prev
        prev = arc
        r += 1
        if r == rows:
            break
    return r


# --------------------------------------------------------------------------
# finitely generated abelian groups


def _chain(orders: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Invariant-factor form of a direct sum of cyclic groups (0 means Z)."""
    orders = [abs(int(d)) for d in orders]
    free = sum(1 for d in orders if d == 0)
    tors = [d for d in orders if d > 1]
    # pairwise gcd/lcm sweep turns any list into a divisibility chain
    for i in range(len(tors)):
        for j in range(i + 1, len(tors)):
            a, b = tors[i], tors[j]
            g = gcd(a, b)
            tors[i], tors[j] = g, a // g * b
    return free, tuple(d for d in tors if d > 1)


@dataclass(frozen=True)
class FinAb:
    """Z^free_rank plus cyclic torsion in divisibility-chain form."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        tors = tuple(int(t) for t in self.torsion)
        if any(t < 2 for t in tors):
            raise ValueError(f"torsion orders must be >= 2, got {tors}")
        if any(b % a for a, b in zip(tors, tors[1:])):
            raise ValueError(f"torsion {tors} is not a divisibility chain; use FinAb.cyclic")
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def cyclic(cls, orders: Iterable[int]) -> FinAb:
        """Direct sum of cyclic groups of the given orders (0 is Z, 1 is trivial)."""
        free, tors = _chain(orders)
        return cls(free, tors)

    @classmethod
    def zero(cls) -> FinAb:
        return cls()

    def __add__(self, other: FinAb) -> FinAb:
        return FinAb.cyclic([0] * (self.free_rank + other.free_rank)
                            + list(self.torsion) + list(other.torsion))

    def times(self, k: int) -> FinAb:
        """Direct sum of ``k`` copies."""
        return FinAb.cyclic(([0] * self.free_rank + list(self.torsion)) * k)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int | None:
        """Cardinality, or None when infinite."""
        if self.free_rank:
            return None
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def dim_mod(self, q: int) -> int:
        """dim over F_q of the group tensored with F_q (q prime)."""
        return self.free_rank + sum(1 for t in self.torsion if t % q == 0)

    def primary_decomposition(self) -> list[int]:
        """Prime-power orders of the torsion, e.g. Z/6 -> [2, 3]; display only."""
        out = []
        for t in self.torsion:
            n, f = t, 2
            while f * f <= n:
                if n % f == 0:
                    q = 1
                    while n % f == 0:
                        n //= f
                        q *= f
                    out.append(q)
                f += 1
            if n > 1:
                out.append(n)
        return sorted(out)

    def to_json(self) -> dict:
        return {"free_rank": str(self.free_rank), "torsion": [str(t) for t in self.torsion]}

    @classmethod
    def from_json(cls, data: dict) -> FinAb:
        return cls(int(data["free_rank"]), tuple(int(t) for t in data["torsion"]))

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    d: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    original_shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return sum(1 for x in self.d if x)

    def diagonal_matrix(self) -> IntMatrix:
        r, c = self.original_shape
        return IntMatrix.diagonal(self.d, r, c)


def _identity_rows(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith_core(a: list[list[int]], nrows: int, ncols: int, track: bool):
    """Reduce ``a`` in place to a diagonal; return (diagonal, L, R).

    ``L a_orig R`` equals the returned diagonal, padded.  Pivots are chosen
    with minimal absolute value to limit entry growth; with ``track`` off,
    unit pivots let the row be dropped without touching other rows.
    """
    left = _identity_rows(nrows) if track else None
    right = _identity_rows(ncols) if track else None
    diag = []
    k = min(nrows, ncols)
    t = 0
    while t < k:
        # pivot search, stopping early at a unit
        best = None
        bestv = 0
        for i in range(t, nrows):
            row = a[i]
            for j in range(t, ncols):
                v = row[j]
                if v and (best is None or abs(v) < bestv):
                    best, bestv = (i, j), abs(v)
                    if bestv == 1:
                        break
            if bestv == 1:
                break
        if best is None:
            break
        i, j = best
        if i != t:
            a[t], a[i] = a[i], a[t]
            if track:
                left[t], left[i] = left[i], left[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            if track:
                for row in right:
                    row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            # clear the column below the pivot
            rem = None
            for i in range(t + 1, nrows):
                x = a[i][t]
                if x:
                    q = x // piv
                    if q:
                        ri, rt = a[i], a[t]
                        for j in range(t, ncols):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                        if track:
                            li, lt = left[i], left[t]
                            for j in range(nrows):
                                if lt[j]:
                                    li[j] -= q * lt[j]
                    if a[i][t] and (rem is None or abs(a[i][t]) < abs(a[rem][t])):
                        rem = i
            if rem is not None:
                a[t], a[rem] = a[rem], a[t]
                if track:
                    left[t], left[rem] = left[rem], left[t]
                continue
            # clear the row right of the pivot
            rt = a[t]
            rem = None
            for j in range(t + 1, ncols):
                x = rt[j]
                if x:
                    q = x // piv
                    if q:
                        # rows below t are zero in column t, so only row t changes in a
                        rt[j] -= q * piv
                        if track:
                            for row in right:
                                if row[t]:
                                    row[j] -= q * row[t]
                    if rt[j] and (rem is None or abs(rt[j]) < abs(rt[rem])):
                        rem = j
            if rem is not None:
                for row in a:
                    row[t], row[rem] = row[rem], row[t]
                if track:
                    for row in right:
                        row[t], row[rem] = row[rem], row[t]
                continue
            break
        diag.append(a[t][t])
        t += 1
    return diag, left, right


def _normalise_diagonal(diag, left, right, track):
    """Turn a diagonal into a divisibility chain with positive entries."""
    d = list(diag)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = d[i], d[j]
            if a == 0 or b == 0:
                continue
            if b % a == 0:
                continue
            # x a + y b = g; L = [[x, y], [-b/g, a/g]], R = [[1, -y b/g], [1, x a/g]]
            g, x, y = _xgcd(a, b)
            if track:
                li, lj = left[i], left[j]
                left[i] = [x * u + y * v for u, v in zip(li, lj)]
                left[j] = [(-b // g) * u + (a // g) * v for u, v in zip(li, lj)]
                for row in right:
                    ri, rj = row[i], row[j]
                    row[i] = ri + rj
                    row[j] = (-y * b // g) * ri + (x * a // g) * rj
            d[i], d[j] = g, a // g * b
    for i in range(n):
        if d[i] < 0:
            d[i] = -d[i]
            if track:
                left[i] = [-v for v in left[i]]
    return d


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(m) -> SmithDecomposition:
    """Smith normal form with unimodular transforms: ``left @ m @ right = diag(d)``.

    ``d`` has length ``min(rows, cols)``, nonzero entries first in a
    divisibility chain, zeros last.
    """
    m = as_matrix(m)
    nrows, ncols = m.shape
    a = m.tolist()
    diag, left, right = _smith_core(a, nrows, ncols, track=True)
    d = _normalise_diagonal(diag, left, right, track=True)
    d += [0] * (min(nrows, ncols) - len(d))
    return SmithDecomposition(tuple(d), IntMatrix.from_rows(left, nrows),
                              IntMatrix.from_rows(right, ncols), (nrows, ncols))


def invariant_factors(m) -> tuple[int, ...]:
    """The ``d`` of the Smith form without building the transforms."""
    m = as_matrix(m)
    nrows, ncols = m.shape
    diag, _, _ = _smith_core(m.tolist(), nrows, ncols, track=False)
    d = _normalise_diagonal(diag, None, None, track=False)
    return tuple(d + [0] * (min(nrows, ncols) - len(d)))


def rank(m) -> int:
    return sum(1 for x in invariant_factors(m) if x)


def cokernel(m) -> FinAb:
    """Z^rows / image(m) for ``m`` viewed as a map Z^cols -> Z^rows."""
    m = as_matrix(m)
    d = invariant_factors(m)
    r = sum(1 for x in d if x)
    return FinAb(m.rows - r, tuple(x for x in d if x > 1))


def kernel_rank(m) -> int:
    m = as_matrix(m)
    return m.cols - rank(m)


def kernel_basis(m) -> IntMatrix:
    """Columns spanning the integer kernel (a saturated sublattice)."""
    m = as_matrix(m)
    snf = smith_normal_form(m)
    r = snf.rank
    keep = list(range(r, m.cols))
    return IntMatrix.from_rows([[row[j] for j in keep] for row in snf.right.tolist()], len(keep))


def _check_actions(actions: Sequence[IntMatrix]) -> int:
    if not actions:
        raise ValueError("need at least one action matrix")
    n = actions[0].rows
    for a in actions:
        if a.shape != (n, n):
            raise ValueError(f"action of shape {a.shape}, expected {(n, n)}")
    return n


def fixed_point_matrix(actions: Sequence[IntMatrix]) -> IntMatrix:
    """Vertical stack of ``a - I``; its kernel is the joint fixed lattice."""
    n = _check_actions(actions)
    eye = IntMatrix.identity(n)
    return IntMatrix.vstack([a - eye for a in actions], n)


def invariant_subgroup(actions: Sequence[IntMatrix]) -> tuple[int, IntMatrix]:
    """Rank and a basis (as columns) of the common fixed lattice of ``actions``."""
    n = _check_actions(actions)
    for a in actions:
        if a.det() not in (1, -1):
            raise ValueError("action matrices must have determinant +-1")
    basis = kernel_basis(fixed_point_matrix(actions))
    if basis.rows == 0:
        basis = IntMatrix.zeros(n, 0)
    return basis.cols, basis


def invariants_mod(actions: Sequence[IntMatrix], q: int) -> FinAb:
    """Fixed points of ``actions`` on (Z/q)^n, as an abstract abelian group."""
    n = _check_actions(actions)
    if q <= 0:
        raise ValueError("modulus must be positive")
    d = invariant_factors(fixed_point_matrix(actions))
    d = list(d) + [0] * (n - len(d))
    # in Smith coordinates the condition is d_i v_i = 0 mod q
    return FinAb.cyclic(gcd(x, q) if x else q for x in d[:n])


def exterior_power(m, q: int) -> IntMatrix:
    """q-th exterior power in the lexicographic basis of q-subsets."""
    m = as_matrix(m)
    if m.rows != m.cols:
        raise ValueError("exterior power needs a square matrix")
    n = m.rows
    if not 0 <= q <= n:
        raise ValueError(f"degree {q} out of range 0..{n}")
    subsets = list(combinations(range(n), q))
    rows = m.tolist()
    return IntMatrix.from_rows(
        [[determinant([[rows[i][j] for j in cols] for i in rset]) for cols in subsets]
         for rset in subsets], len(subsets))
