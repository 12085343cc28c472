"""Exact integer and rational linear algebra.

Matrices are plain lists of rows of Python ints (arbitrary precision).  Every
function accepts any sequence of sequences and returns fresh lists, so
callers never share mutable state with the library.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Optional, Sequence

Matrix = list[list[int]]
Vector = list[int]


# ----------------------------------------------------------------------------
# basic helpers
# ----------------------------------------------------------------------------

def as_matrix(M: Sequence[Sequence[int]]) -> Matrix:
    rows = [[int(x) for x in row] for row in M]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if len(M) else 0)


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(M: Sequence[Sequence[int]], cols: Optional[int] = None) -> Matrix:
    """Transpose; ``cols`` fixes the column count of an empty matrix."""
    if not len(M):
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = list(zip(*B)) if len(B) else []
    inner = len(B)
    ncols = len(B[0]) if inner else 0
    if len(A) and len(A[0]) != inner:
        raise ValueError(f"shape mismatch: {shape(A)} x {shape(B)}")
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] if inner else [0] * ncols
            for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def vecmat(x: Sequence, A: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    if not len(A):
        return []
    out = [0] * len(A[0])
    for c, row in zip(x, A):
        if c:
            for j, a in enumerate(row):
                out[j] += c * a
    return out


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """The primitive integer vector on the ray of ``v`` (``v`` nonzero)."""
    g = vector_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return [x // g for x in v]


def det(M: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    A = as_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    rows, cols = shape(A)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def solve_rational(A: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Some rational solution of ``A x = b`` (free variables set to zero), or None."""
    rows, cols = shape(A)
    if rows == 0:
        return [Fraction(0)] * cols
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = R[i][cols]
    return x


# ----------------------------------------------------------------------------
# Hermite normal form
# ----------------------------------------------------------------------------

def hnf(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U M = H``.  ``H`` is in
    row echelon form, every pivot is positive, entries above a pivot lie in
    ``[0, pivot)`` and zero rows sit at the bottom.
    """
    H = as_matrix(M)
    rows, cols = shape(H)
    U = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            H[r], H[p] = H[p], H[r]
            U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, rows):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-a for a in H[r]]
            U[r] = [-a for a in U[r]]
        for i in range(r):
            q = H[i][c] // H[r][c]
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                U[i] = [a - q * b for a, b in zip(U[i], U[r])]
        r += 1
    return H, U


def hnf_basis(M: Sequence[Sequence[int]]) -> Matrix:
    """Nonzero rows of the HNF: the canonical basis of the row lattice."""
    H, _ = hnf(M)
    return [row for row in H if any(row)]


# ----------------------------------------------------------------------------
# Smith normal form
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """``U M W = S`` with ``U``, ``W`` unimodular and ``S`` diagonal."""

    U: Matrix
    S: Matrix
    W: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(shape(self.S)))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def snf(M: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms, nonnegative divisibility chain.

    Alternates row and column Hermite reductions until the matrix is
    diagonal, then repairs the divisibility chain with 2x2 Bezout steps.
    """
    S = as_matrix(M)
    rows, cols = shape(S)
    U = identity(rows)
    W = identity(cols)
    if rows == 0 or cols == 0:
        return SmithDecomposition(U, S, W)

    def is_diagonal_pattern(A):
        # at most one nonzero per row and per column
        for row in A:
            if sum(1 for a in row if a) > 1:
                return False
        return all(sum(1 for row in A if row[j]) <= 1 for j in range(cols))

    while not is_diagonal_pattern(S):
        S, R = hnf(S)
        U = matmul(R, U)
        St, C = hnf(transpose(S))
        S = transpose(St)
        W = matmul(W, transpose(C))

    # move the nonzeros onto the main diagonal
    row_of = {j: i for i in range(rows) for j in range(cols) if S[i][j]}
    used_cols = sorted(row_of, key=lambda j: row_of[j])
    col_perm = used_cols + [j for j in range(cols) if j not in row_of]
    row_perm = [row_of[j] for j in used_cols]
    row_perm += [i for i in range(rows) if i not in row_perm]
    S = [[S[i][j] for j in col_perm] for i in row_perm]
    U = [U[i] for i in row_perm]
    W = [[row[j] for j in col_perm] for row in W]

    k = len(used_cols)
    for i in range(k):
        if S[i][i] < 0:
            S[i][i] = -S[i][i]
            U[i] = [-a for a in U[i]]
    for i in range(k):
        for j in range(i + 1, k):
            a, b = S[i][i], S[j][j]
            if b % a == 0:
                continue
            g, x, y = _xgcd(a, b)
            # [[x, y], [-b/g, a/g]] diag(a, b) [[1, -y b/g], [1, x a/g]] = diag(g, ab/g)
            Ui, Uj = U[i], U[j]
            U[i] = [x * p + y * q for p, q in zip(Ui, Uj)]
            U[j] = [(-b // g) * p + (a // g) * q for p, q in zip(Ui, Uj)]
            for row in W:
                wi, wj = row[i], row[j]
                row[i] = wi + wj
                row[j] = (-y * b // g) * wi + (x * a // g) * wj
            S[i][i], S[j][j] = g, a * b // g
    return SmithDecomposition(U, S, W)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``x a + y b = g = gcd(a, b)``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    return [d for d in snf(M).diagonal if d]


def unimodular_inverse(U: Sequence[Sequence[int]]) -> Matrix:
    n = len(U)
    H, T = hnf(U)
    if H != identity(n):
        raise ValueError("matrix is not unimodular")
    return T


# ----------------------------------------------------------------------------
# lattices
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Sublattice of ``Z^ambient`` stored by its canonical HNF row basis.

    Two lattices are equal exactly when their bases are equal.
    """

    ambient: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[int]], ambient: Optional[int] = None) -> "Lattice":
        gens = as_matrix(gens)
        if ambient is None:
            if not gens:
                raise ValueError("ambient dimension required for an empty generator list")
            ambient = len(gens[0])
        if any(len(g) != ambient for g in gens):
            raise ValueError("generator length differs from the ambient dimension")
        basis = hnf_basis(gens) if gens else []
        return cls(ambient, tuple(tuple(b) for b in basis))

    @classmethod
    def full(cls, ambient: int) -> "Lattice":
        return cls(ambient, tuple(tuple(r) for r in identity(ambient)))

    @classmethod
    def zero(cls, ambient: int) -> "Lattice":
        return cls(ambient, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        return [list(b) for b in self.basis]

    def coordinates(self, x: Sequence[int]) -> Optional[Vector]:
        return lattice_membership(x, self)

    def __contains__(self, x) -> bool:
        return lattice_membership(x, self) is not None

    def __le__(self, other: "Lattice") -> bool:
        return all(b in other for b in self.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        _check_ambient(self, other)
        return Lattice.from_generators(self.matrix() + other.matrix(), self.ambient)

    def __and__(self, other: "Lattice") -> "Lattice":
        return lattice_intersection(self, other)

    def index_in(self, other: "Lattice") -> int:
        """``[other : self]``; 0 when the index is infinite."""
        if not self <= other:
            raise ValueError("not a sublattice")
        if self.rank != other.rank:
            return 0
        coords = [other.coordinates(b) for b in self.basis]
        return abs(det(coords))

    def saturation(self) -> "Lattice":
        """``(L tensor Q) intersected with Z^m``."""
        if not self.basis:
            return self
        dual = integer_kernel(self.matrix())
        if not dual.basis:
            return Lattice.full(self.ambient)
        return integer_kernel(dual.matrix())

    def is_saturated(self) -> bool:
        return all(d == 1 for d in invariant_factors(self.matrix())) if self.basis else True

    def __str__(self) -> str:
        if not self.basis:
            return "0"
        return " + ".join("Z(" + ",".join(map(str, b)) + ")" for b in self.basis)


def _check_ambient(L1: Lattice, L2: Lattice) -> None:
    if L1.ambient != L2.ambient:
        raise ValueError(f"ambient mismatch: {L1.ambient} != {L2.ambient}")


def integer_kernel(M: Sequence[Sequence[int]], cols: Optional[int] = None) -> Lattice:
    """Saturated lattice ``{x in Z^cols : M x = 0}``."""
    M = as_matrix(M)
    if cols is None:
        if not M:
            raise ValueError("column count required for an empty matrix")
        cols = len(M[0])
    if not M:
        return Lattice.full(cols)
    H, U = hnf(transpose(M))
    gens = [U[i] for i in range(cols) if not any(H[i])]
    return Lattice.from_generators(gens, cols) if gens else Lattice.zero(cols)


def lattice_intersection(L1: Lattice, L2: Lattice) -> Lattice:
    _check_ambient(L1, L2)
    if not L1.basis or not L2.basis:
        return Lattice.zero(L1.ambient)
    B1, B2 = L1.matrix(), L2.matrix()
    k1 = len(B1)
    # (a, b) with a B1 = b B2
    stacked = transpose(B1 + [[-x for x in row] for row in B2])
    K = integer_kernel(stacked, k1 + len(B2))
    gens = [vecmat(list(v[:k1]), B1) for v in K.basis]
    return Lattice.from_generators(gens, L1.ambient) if gens else Lattice.zero(L1.ambient)


def intersect_all(lattices: Sequence[Lattice]) -> Lattice:
    it = iter(lattices)
    out = next(it)
    for L in it:
        out = lattice_intersection(out, L)
    return out


def lattice_membership(x: Sequence[int], L: Lattice) -> Optional[Vector]:
    """Coordinates ``c`` with ``c . basis = x``, or None when ``x`` is not in ``L``."""
    if len(x) != L.ambient:
        raise ValueError("vector length differs from the ambient dimension")
    rem = [int(a) for a in x]
    coords = []
    for row in L.basis:
        p = next(j for j, a in enumerate(row) if a)
        q, r = divmod(rem[p], row[p])
        if r:
            return None
        coords.append(q)
        if q:
            rem = [a - q * b for a, b in zip(rem, row)]
    return coords if not any(rem) else None


def gcd_maximal_minors(M: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all ``k x k`` minors, read off the Smith form."""
    rows, cols = shape(M)
    if k > min(rows, cols):
        raise ValueError("minor size exceeds matrix dimensions")
    if k == 0:
        return 1
    diag = snf(M).diagonal
    out = 1
    for d in diag[:k]:
        out *= d
    return out


def minors(M: Sequence[Sequence[int]], k: int):
    """Iterate all ``k x k`` minors (slow; for oracles and small inputs)."""
    rows, cols = shape(M)
    for R in combinations(range(rows), k):
        for C in combinations(range(cols), k):
            yield det([[M[i][j] for j in C] for i in R])


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[Vector]:
    """An integer solution of ``A x = b``, or None when none exists."""
    A = as_matrix(A)
    rows, cols = shape(A)
    if len(b) != rows:
        raise ValueError("right-hand side length mismatch")
    if rows == 0:
        return [0] * cols
    dec = snf(A)
    c = matvec(dec.U, b)
    y = [0] * cols
    for i in range(rows):
        d = dec.S[i][i] if i < cols else 0
        if d == 0:
            if c[i]:
                return None
        else:
            q, r = divmod(c[i], d)
            if r:
                return None
            y[i] = q
    return matvec(dec.W, y)


# ----------------------------------------------------------------------------
# exact feasibility of { x >= 0 : A x = b }
# ----------------------------------------------------------------------------

def nonnegative_solution(A: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """A rational ``x >= 0`` with ``A x = b``, or None.

    Phase one of the simplex method on exact fractions with Bland's rule, so
    it always terminates.  Adequate for the small systems met in cone
    geometry.
    """
    rows, cols = len(A), (len(A[0]) if len(A) else 0)
    if rows == 0:
        return [Fraction(0)] * cols
    T = []
    for i in range(rows):
        sgn = -1 if b[i] < 0 else 1
        row = [Fraction(sgn * a) for a in A[i]]
        row += [Fraction(int(k == i)) for k in range(rows)]
        row.append(Fraction(sgn * b[i]))
        T.append(row)
    width = cols + rows
    basis = [cols + i for i in range(rows)]
    cost = [Fraction(0)] * (width + 1)
    for row in T:
        for j in range(cols):
            cost[j] -= row[j]
        cost[width] -= row[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(rows):
            if T[i][enter] > 0:
                ratio = T[i][width] / T[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # unbounded phase-one objective cannot happen
            raise AssertionError("phase one unbounded")
        p = best[1]
        piv = T[p][enter]
        T[p] = [x / piv for x in T[p]]
        for i in range(rows):
            if i != p and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[p])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[p])]
        basis[p] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * cols
    for i, j in enumerate(basis):
        if j < cols:
            x[j] = T[i][width]
    return x
