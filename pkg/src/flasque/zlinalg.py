"""Exact integer linear algebra.

Everything here works on Python ints, so no intermediate value can overflow.
Matrices act on column vectors: a map Z^m -> Z^n is an n x m ``IntMatrix``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


class IntMatrix:
    """Immutable integer matrix with an explicit shape (so 0 x n is representable)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple([tuple(map(int, r)) for r in rows])
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> IntMatrix:
        """Wrap already-validated tuple rows without copying."""
        m = cls.__new__(cls)
        m.rows, m.nrows, m.ncols = rows, len(rows), ncols
        return m

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, n: int, m: int) -> IntMatrix:
        return cls([[0] * m for _ in range(n)], m)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> list[int]:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list[int]]:
        return [self.col(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @property
    def T(self) -> IntMatrix:
        if not self.nrows:
            return IntMatrix([[] for _ in range(self.ncols)], 0)
        return IntMatrix(zip(*self.rows), self.nrows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([[r[j] for j in idx] for r in self.rows], len(idx))

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([self.rows[i] for i in idx], self.ncols)

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows, m = other.rows, other.ncols
        out = []
        for r in self.rows:
            acc = [0] * m
            for k, a in enumerate(r):
                if a:
                    row = orows[k]
                    if a == 1:
                        for j, b in enumerate(row):
                            if b:
                                acc[j] += b
                    else:
                        for j, b in enumerate(row):
                            if b:
                                acc[j] += a * b
            out.append(tuple(acc))
        return IntMatrix._raw(tuple(out), m)

    def apply(self, v: Sequence[int]) -> list[int]:
        nz = [(k, x) for k, x in enumerate(v) if x]
        return [sum(r[k] * x for k, x in nz) for r in self.rows]

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix([[k * a for a in r] for r in self.rows], self.ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntMatrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, self.rows))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"

    def det(self) -> int:
        """Fraction-free (Bareiss) determinant."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("det of non-square matrix")
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k]:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1


def hstack(*mats: IntMatrix) -> IntMatrix:
    n = mats[0].nrows
    if any(m.nrows != n for m in mats):
        raise ValueError("hstack: row counts differ")
    return IntMatrix([sum((m.rows[i] for m in mats), ()) for i in range(n)], sum(m.ncols for m in mats))


def vstack(*mats: IntMatrix) -> IntMatrix:
    m = mats[0].ncols
    if any(x.ncols != m for x in mats):
        raise ValueError("vstack: column counts differ")
    return IntMatrix([r for x in mats for r in x.rows], m)


def block_diag(*mats: IntMatrix) -> IntMatrix:
    n = sum(m.nrows for m in mats)
    k = sum(m.ncols for m in mats)
    out = [[0] * k for _ in range(n)]
    r0 = c0 = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            out[r0 + i][c0:c0 + m.ncols] = row
        r0 += m.nrows
        c0 += m.ncols
    return IntMatrix(out, k)


# ---------------------------------------------------------------------------
# Echelon core
# ---------------------------------------------------------------------------

def _echelon(vecs: list[list[int]], length: int, track: bool, modulus: int = 0):
    """Unimodular elimination among the vectors ``vecs`` (each of ``length``).

    Returns ``(pivots, zeros)``.  ``pivots`` is a list of ``(position, vector,
    transform_row)`` in increasing position order; ``zeros`` lists the
    transform rows of vectors reduced to zero.  Transform rows record each
    output vector as an integer combination of the inputs.  A positive
    ``modulus`` reduces entries mod it after every step (valid for
    congruence systems, where the vectors are equations modulo ``modulus``).
    """
    m = len(vecs)
    active = [list(v) for v in vecs]
    trans = [[int(i == j) for j in range(m)] for i in range(m)] if track else None
    if modulus:
        active = [[x % modulus for x in v] for v in active]
    idx = list(range(m))
    pivots = []
    for p in range(length):
        live = [i for i in idx if active[i][p]]
        if not live:
            continue
        while len(live) > 1:
            # smallest magnitude pivot, ties broken by lowest index
            k = min(live, key=lambda i: (abs(active[i][p]), i))
            w = active[k]
            a = w[p]
            tw = trans[k] if track else None
            nxt = [k]
            for i in live:
                if i == k:
                    continue
                v = active[i]
                q = v[p] // a
                if q:
                    v[p:] = [x - q * y for x, y in zip(v[p:], w[p:])]
                    if modulus:
                        v[p:] = [x % modulus for x in v[p:]]
                    if track:
                        trans[i] = [x - q * y for x, y in zip(trans[i], tw)]
                if v[p]:
                    nxt.append(i)
            live = nxt
        k = live[0]
        if active[k][p] < 0 and not modulus:
            active[k] = [-x for x in active[k]]
            if track:
                trans[k] = [-x for x in trans[k]]
        pivots.append((p, active[k], trans[k] if track else None))
        idx.remove(k)
    zeros = [trans[i] for i in idx] if track else [None] * len(idx)
    return pivots, zeros


@dataclass(frozen=True)
class ColumnEchelon:
    """``A @ V = H`` with H in column echelon form (pivot rows strictly increasing)."""

    H: IntMatrix
    V: IntMatrix
    rank: int
    pivot_rows: tuple[int, ...]


def column_echelon(A: IntMatrix) -> ColumnEchelon:
    n, m = A.shape
    pivots, zeros = _echelon(A.columns(), n, track=True)
    cols = [v for _, v, _ in pivots] + [[0] * n for _ in zeros]
    tcols = [t for _, _, t in pivots] + zeros
    H = IntMatrix.from_columns(cols, n)
    V = IntMatrix.from_columns(tcols, m)
    return ColumnEchelon(H, V, len(pivots), tuple(p for p, _, _ in pivots))


def row_basis(A: IntMatrix, modulus: int = 0) -> IntMatrix:
    """Basis (as rows) of the row lattice of A; with ``modulus``, of the row space mod it."""
    pivots, _ = _echelon([list(r) for r in A.rows], A.ncols, track=False, modulus=modulus)
    return IntMatrix([v for _, v, _ in pivots], A.ncols)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of the full integer kernel {x : A x = 0} (saturated)."""
    ce = column_echelon(A)
    return ce.V.select_columns(range(ce.rank, A.ncols))


def image_basis(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of the lattice spanned by the columns of A."""
    pivots, _ = _echelon(A.columns(), A.nrows, track=False)
    return IntMatrix.from_columns([v for _, v, _ in pivots], A.nrows)


def rank(A: IntMatrix) -> int:
    return len(_echelon(A.columns(), A.nrows, track=False)[0])


class LatticeSolver:
    """Solves ``B c = v`` exactly for a fixed matrix B (reused across many right-hand sides)."""

    def __init__(self, B: IntMatrix):
        self.B = B
        ce = column_echelon(B)
        self._H = ce.H
        self._V = ce.V
        self._rank = ce.rank
        self._piv = ce.pivot_rows

    def solve(self, v: Sequence[int]) -> list[int] | None:
        H, r = self._H, self._rank
        z = [0] * self.B.ncols
        res = list(v)
        for j, p in enumerate(self._piv):
            a = H[p, j]
            if res[p] % a:
                return None
            z[j] = q = res[p] // a
            if q:
                for i in range(p, H.nrows):
                    h = H[i, j]
                    if h:
                        res[i] -= q * h
        if any(res):
            return None
        return self._V.apply(z) if r else [0] * self.B.ncols

    def contains(self, v: Sequence[int]) -> bool:
        return self.solve(v) is not None


def congruence_kernel(A: IntMatrix, moduli: Sequence[int]) -> IntMatrix:
    """Basis (columns) of {x : (A x)_i = 0 mod moduli[i]}; modulus 0 means exact equality."""
    m = A.ncols
    exact = [i for i, q in enumerate(moduli) if q == 0]
    modular = [i for i, q in enumerate(moduli) if q not in (0, 1)]
    K = kernel_basis(A.select_rows(exact)) if exact else IntMatrix.identity(m)
    if not modular or K.ncols == 0:
        return K
    e = reduce(_lcm, (moduli[i] for i in modular))
    rows = []
    for i in modular:
        s = e // moduli[i]
        rows.append([s * x for x in A.rows[i]])
    Am = IntMatrix(rows, m) @ K
    G = row_basis(Am, modulus=e)
    r = G.nrows
    if r == 0:
        return K
    aug = hstack(G, IntMatrix.identity(r).scale(e))
    Z = kernel_basis(aug)
    Y = image_basis(Z.select_rows(range(K.ncols)))
    return K @ Y


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with D diagonal, each diagonal entry dividing the next."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d not in (0, 1)]


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    n, m = A.shape
    a = A.tolist()
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    V = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_op(i, j, q):  # row_i -= q * row_j
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        U[i] = [x - q * y for x, y in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in a:
            r[i] -= q * r[j]
        for r in V:
            r[i] -= q * r[j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for k in range(min(n, m)):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, m):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(k, i)
            swap_cols(k, j)
            p = a[k][k]
            dirty = False
            for i in range(k + 1, n):
                q = a[i][k] // p
                if q:
                    row_op(i, k, q)
                dirty = dirty or a[i][k] != 0
            for j in range(k + 1, m):
                q = a[k][j] // p
                if q:
                    col_op(j, k, q)
                dirty = dirty or a[k][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(k + 1, n) for j in range(k + 1, m) if a[i][j] % p), None)
            if bad is None:
                break
            # fold the offending row into the pivot row and re-reduce
            row_op(k, bad[0], -1)
        if k < n and k < m and a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            U[k] = [-x for x in U[k]]
    return SmithDecomposition(IntMatrix(U, n), IntMatrix(a, m), IntMatrix(V, m))


# ---------------------------------------------------------------------------
# Finite(ly generated) abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class FiniteAbelianGroup:
    """Z/d1 x ... x Z/dk x Z^r with d1 | d2 | ... and every di > 1.

    Despite the name, a free part is allowed; it is reported by ``free_rank``.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        if any(x <= 1 for x in d) or any(b % a for a, b in zip(d, d[1:])):
            raise ValueError(f"not a canonical invariant-factor list: {d}")

    @classmethod
    def from_orders(cls, orders: Iterable[int], free_rank: int = 0) -> FiniteAbelianGroup:
        """Canonical form of a direct sum of cyclic groups Z/o (o = 0 means Z)."""
        orders = [abs(o) for o in orders]
        free_rank += sum(1 for o in orders if o == 0)
        orders = [o for o in orders if o > 1]
        if not orders:
            return cls((), free_rank)
        snf = smith_normal_form(IntMatrix.diag(orders))
        return cls(tuple(snf.invariant_factors), free_rank)

    @property
    def order(self) -> int:
        """Order of the torsion part (the whole group when finite)."""
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    def torsion(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.invariant_factors, 0)

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " x ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors), "free_rank": self.free_rank}


def cokernel_structure(A: IntMatrix) -> FiniteAbelianGroup:
    """Structure of Z^n / image(A) for A: Z^m -> Z^n."""
    n = A.nrows
    if A.ncols == 0:
        return FiniteAbelianGroup((), n)
    G = image_basis(A)
    # a square-ish full-rank basis; SNF of it is cheap
    d = smith_normal_form(G).diagonal
    return FiniteAbelianGroup.from_orders(d, n - len(d))


@dataclass(frozen=True)
class IntegerSolution:
    particular: list[int] | None
    homogeneous: IntMatrix

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def solve_integer(A: IntMatrix, b: Sequence[int]) -> IntegerSolution:
    """One integer solution of ``A x = b`` (or None) plus a basis of the homogeneous solutions."""
    if len(b) != A.nrows:
        raise ValueError("right-hand side length does not match the row count")
    return IntegerSolution(LatticeSolver(A).solve(b), kernel_basis(A))


class Subquotient:
    """The abelian group L / N for lattices N <= L <= Z^k, with canonical coordinates.

    ``L`` and ``N`` are given by generating columns.  The group is
    presented as Z/d1 x ... x Z/dk x Z^r; ``coords`` sends a vector of L to
    its canonical coordinates (torsion coordinates reduced mod di) and
    ``generators`` lifts the canonical generators back into L.
    """

    def __init__(self, L_gens: IntMatrix, N_gens: IntMatrix):
        self.ambient = L_gens.nrows
        B = image_basis(L_gens)
        self.basis = B
        self._solver = LatticeSolver(B)
        r = B.ncols
        ycols = []
        for c in N_gens.columns():
            y = self._solver.solve(c)
            if y is None:
                raise ValueError("N is not contained in L")
            ycols.append(y)
        Y = IntMatrix.from_columns(ycols, r) if ycols else IntMatrix.zeros(r, 0)
        if r and Y.ncols:
            Yb = image_basis(Y)
            snf = smith_normal_form(Yb)
            diag = snf.diagonal + [0] * (r - min(Yb.shape))
            U = snf.U
        else:
            diag = [0] * r
            U = IntMatrix.identity(r)
        self._U = U
        Uinv = _unimodular_inverse(U)
        self.moduli = [d for d in diag if d != 1]
        self._keep = [i for i, d in enumerate(diag) if d != 1]
        gens = B @ Uinv.select_columns(self._keep) if r else IntMatrix.zeros(self.ambient, 0)
        self._gens = gens
        self.group = FiniteAbelianGroup.from_orders(self.moduli)

    @property
    def ngens(self) -> int:
        return len(self._keep)

    def generators(self) -> list[list[int]]:
        return self._gens.columns()

    def coords(self, v: Sequence[int]) -> list[int]:
        y = self._solver.solve(v)
        if y is None:
            raise ValueError("vector not in L")
        w = self._U.apply(y)
        return [w[i] % d if d else w[i] for i, d in zip(self._keep, self.moduli)]

    def contains(self, v: Sequence[int]) -> bool:
        return self._solver.contains(v)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.coords(v))

    def lift(self, c: Sequence[int]) -> list[int]:
        return self._gens.apply(c)


def _unimodular_inverse(U: IntMatrix) -> IntMatrix:
    n = U.nrows
    s = LatticeSolver(U)
    cols = [s.solve([int(i == j) for i in range(n)]) for j in range(n)]
    return IntMatrix.from_columns(cols, n)


def inverse_unimodular(U: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    if abs(U.det()) != 1:
        raise ValueError("matrix is not unimodular")
    return _unimodular_inverse(U)


def image_of_generators(images: list[list[int]], moduli: Sequence[int]) -> FiniteAbelianGroup:
    """Structure of the subgroup of Z/m1 x ... (mi = 0 means Z) generated by ``images``."""
    k = len(images)
    if not moduli or k == 0:
        return FiniteAbelianGroup()
    Phi = IntMatrix.from_columns(images, len(moduli))
    K = congruence_kernel(Phi, moduli)
    return cokernel_structure(K) if K.ncols else FiniteAbelianGroup((), k)


def lattice_equal(A: IntMatrix, B: IntMatrix) -> bool:
    """Do the columns of A and of B span the same lattice?"""
    sa, sb = LatticeSolver(A), LatticeSolver(B)
    return all(sa.contains(c) for c in B.columns()) and all(sb.contains(c) for c in A.columns())
