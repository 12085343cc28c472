"""Simplicial cones and fans on the columns of a fan matrix.

Cones are index sets into the columns of a :class:`FanMatrix`; indices are
1-based, so ``Cone(1, 2, 3)`` is the cone spanned by the first three columns.
All geometry is exact (integers and fractions).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from .linalg import (
    det,
    gcd_maximal_minors,
    nonnegative_solution,
    rank,
    solve_rational,
    transpose,
    vector_gcd,
)


@dataclass(frozen=True)
class FanMatrix:
    """``n x m`` integer matrix stored by its columns (the ray generators)."""

    columns: tuple[tuple[int, ...], ...]
    n: int

    def __init__(self, columns: Sequence[Sequence[int]], n: Optional[int] = None):
        cols = tuple(tuple(int(x) for x in c) for c in columns)
        if n is None:
            if not cols:
                raise ValueError("dimension required for an empty fan matrix")
            n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("all columns must have length n")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "FanMatrix":
        return cls(transpose(rows), len(rows))

    @property
    def m(self) -> int:
        return len(self.columns)

    @property
    def r(self) -> int:
        return self.m - self.n

    def rows(self) -> list[list[int]]:
        return transpose(self.columns, self.n) if self.columns else [[] for _ in range(self.n)]

    def column(self, i: int) -> tuple[int, ...]:
        """Column ``i`` (1-based)."""
        return self.columns[i - 1]

    def submatrix(self, indices: Iterable[int]) -> list[list[int]]:
        """``n x k`` matrix of the listed (1-based) columns."""
        cols = [self.columns[i - 1] for i in indices]
        return transpose(cols, self.n) if cols else [[] for _ in range(self.n)]

    def with_column(self, v: Sequence[int]) -> "FanMatrix":
        return FanMatrix(self.columns + (tuple(v),), self.n)

    def index_of(self, v: Sequence[int]) -> Optional[int]:
        v = tuple(v)
        for i, c in enumerate(self.columns, 1):
            if c == v:
                return i
        return None

    def permuted(self, perm: Sequence[int]) -> "FanMatrix":
        """Columns reordered so that new column ``k`` is old column ``perm[k-1]``."""
        return FanMatrix([self.column(p) for p in perm], self.n)

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:>4}" for x in row) for row in self.rows())


class Cone(tuple):
    """Sorted tuple of 1-based column indices."""

    def __new__(cls, *indices):
        if len(indices) == 1 and not isinstance(indices[0], int):
            indices = tuple(indices[0])
        return super().__new__(cls, sorted(set(int(i) for i in indices)))

    def __str__(self) -> str:
        return "<" + ",".join(map(str, self)) + ">"

    def __repr__(self) -> str:
        return f"Cone{tuple(self)}"

    def complement(self, m: int) -> frozenset[int]:
        return frozenset(range(1, m + 1)) - frozenset(self)

    def facets(self) -> list["Cone"]:
        return [Cone(self[:i] + self[i + 1:]) for i in range(len(self))]


@dataclass(frozen=True)
class Fan:
    """A fan matrix with a set of maximal cones (faces implied)."""

    matrix: FanMatrix
    cones: tuple[Cone, ...]

    def __init__(self, matrix: FanMatrix, cones: Iterable[Iterable[int]]):
        cs = tuple(sorted({Cone(c) for c in cones}))
        for c in cs:
            if any(i < 1 or i > matrix.m for i in c):
                raise ValueError(f"cone {c} refers to a missing column")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "cones", cs)

    @property
    def n(self) -> int:
        return self.matrix.n

    def rays(self) -> frozenset[int]:
        return frozenset(i for c in self.cones for i in c)

    def is_pure(self) -> bool:
        return all(len(c) == self.n for c in self.cones)

    def complements(self) -> list[frozenset[int]]:
        """The index sets ``I`` with ``<V^I>`` maximal (complements of the generators)."""
        return [c.complement(self.matrix.m) for c in self.cones]

    def ridges(self) -> dict[Cone, list[Cone]]:
        """Codimension-one faces of maximal cones, each with its carrier cones."""
        out: dict[Cone, list[Cone]] = {}
        for c in self.cones:
            for f in c.facets():
                out.setdefault(f, []).append(c)
        return out

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.cones)) + "}"


# ----------------------------------------------------------------------------
# validation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    columns: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}: columns {', '.join(map(str, self.columns))}"


def positively_spans(V: FanMatrix) -> bool:
    """True when the columns generate all of ``R^n`` as a cone."""
    if V.n == 0:
        return True
    if rank(V.rows()) < V.n:
        return False
    A = V.rows()
    return all(nonnegative_solution(A, [-x for x in V.column(i)]) is not None
               for i in range(1, V.m + 1))


def validate_fan_matrix(V: FanMatrix, check_spanning: bool = False) -> list[Violation]:
    """List of violated fan-matrix conditions; empty when ``V`` is valid."""
    out = []
    if V.m and rank(V.rows()) != V.n:
        out.append(Violation("rank below n", tuple(range(1, V.m + 1))))
    for i, c in enumerate(V.columns, 1):
        g = vector_gcd(c)
        if g == 0:
            out.append(Violation("zero column", (i,)))
        elif g != 1:
            out.append(Violation("non-primitive column", (i,)))
    for i, j in combinations(range(1, V.m + 1), 2):
        a, b = V.column(i), V.column(j)
        if a == b:
            out.append(Violation("duplicate column", (i, j)))
        elif any(a) and any(b) and _same_ray(a, b):
            out.append(Violation("columns on the same ray", (i, j)))
    if check_spanning and not out and not positively_spans(V):
        out.append(Violation("columns do not positively span R^n", tuple(range(1, V.m + 1))))
    return out


def _same_ray(a, b) -> bool:
    ga, gb = vector_gcd(a), vector_gcd(b)
    return [x // ga for x in a] == [x // gb for x in b]


# ----------------------------------------------------------------------------
# cone geometry
# ----------------------------------------------------------------------------

def cone_coordinates(V: FanMatrix, c: Sequence[int], p: Sequence) -> Optional[list[Fraction]]:
    """Coordinates of ``p`` along the generators of the simplicial cone ``c``.

    None when ``p`` is outside the linear span.
    """
    if not c:
        return [] if not any(p) else None
    return solve_rational(V.submatrix(c), list(p))


def cone_contains_point(V: FanMatrix, c: Sequence[int], p: Sequence) -> bool:
    lam = cone_coordinates(V, c, p)
    return lam is not None and all(x >= 0 for x in lam)


def is_simplicial(V: FanMatrix, c: Sequence[int]) -> bool:
    return rank(V.submatrix(c)) == len(c) if c else True


@dataclass(frozen=True)
class FaceCheck:
    """Outcome of intersecting two simplicial cones.

    ``is_face`` tells whether the intersection is the cone on the shared
    indices; otherwise ``witness`` is a rational point in both cones but
    outside the shared face.
    """

    is_face: bool
    shared: Cone
    witness: Optional[tuple[Fraction, ...]] = None

    def __bool__(self) -> bool:
        return self.is_face


def common_face_intersection(V: FanMatrix, c1: Sequence[int], c2: Sequence[int]) -> FaceCheck:
    """Test whether ``cone(c1) & cone(c2) == cone(c1 & c2)``.

    A point of the intersection leaves the shared face exactly when its
    (unique) coordinates along ``c1`` charge some generator outside ``c2``.
    So we look for ``lam, mu >= 0`` with ``V_c1 lam = V_c2 mu`` and the
    ``c1 - c2`` part of ``lam`` summing to one: an exact phase-one LP.
    """
    c1, c2 = Cone(c1), Cone(c2)
    shared = Cone(set(c1) & set(c2))
    return _face_check(V, c1, c2, shared)


@lru_cache(maxsize=200_000)
def _face_check(V: FanMatrix, c1: Cone, c2: Cone, shared: Cone) -> FaceCheck:
    only1 = [i for i in c1 if i not in shared]
    only2 = [i for i in c2 if i not in shared]
    if not only1 or not only2:
        # one cone is a face of the other
        return FaceCheck(True, shared)
    k2 = len(c2)
    A = [[V.column(i)[row] for i in c1] + [-V.column(j)[row] for j in c2] for row in range(V.n)]
    A.append([1 if i in only1 else 0 for i in c1] + [0] * k2)
    b = [0] * V.n + [1]
    sol = nonnegative_solution(A, b)
    if sol is None:
        return FaceCheck(True, shared)
    point = [sum((sol[k] * V.column(i)[row] for k, i in enumerate(c1)), Fraction(0))
             for row in range(V.n)]
    return FaceCheck(False, shared, tuple(point))


def multiplicity(V: FanMatrix, c: Sequence[int]) -> int:
    """Index of the sublattice spanned by the generators in the lattice of their span."""
    c = list(c)
    if not c:
        return 1
    return gcd_maximal_minors(V.submatrix(c), len(c))


def m_sigma(fan: Fan) -> int:
    """gcd of the multiplicities of the maximal cones."""
    if not fan.cones:
        raise ValueError("empty fan")
    g = 0
    for c in fan.cones:
        g = gcd(g, multiplicity(fan.matrix, c))
    return g


# ----------------------------------------------------------------------------
# fan checks
# ----------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def is_fan(fan: Fan) -> tuple[bool, Optional[tuple[Cone, Cone]]]:
    """``(True, None)`` or ``(False, offending pair)``.

    A non-simplicial cone is reported as the pair ``(c, c)``.
    """
    V = fan.matrix
    for c in fan.cones:
        if not is_simplicial(V, c):
            return False, (c, c)
    for c1, c2 in combinations(fan.cones, 2):
        if not common_face_intersection(V, c1, c2):
            return False, (c1, c2)
    return True, None


def unpaired_ridges(fan: Fan) -> list[Cone]:
    return sorted(r for r, carriers in fan.ridges().items() if len(carriers) == 1)


def sample_points(n: int, count: int, seed: int = 0) -> list[list[Fraction]]:
    rng = random.Random(seed)
    return [[Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 997)) for _ in range(n)]
            for _ in range(count)]


def covered(fan: Fan, p: Sequence) -> bool:
    return any(cone_contains_point(fan.matrix, c, p) for c in fan.cones)


def is_complete(fan: Fan, cross_check: int = 100) -> bool:
    """Support equals ``R^n``.

    Decided combinatorially: a pure ``n``-dimensional simplicial fan is
    complete iff it is nonempty and every ridge lies in exactly two maximal
    cones.  ``cross_check`` random exact points are then located as a safety
    net.
    """
    if not fan.is_pure():
        raise ValueError("completeness is only decided for pure n-dimensional fans")
    ok, pair = is_fan(fan)
    if not ok:
        raise ValueError(f"not a fan: {pair[0]} and {pair[1]} meet badly")
    if not fan.cones:
        return fan.n == 0
    complete = all(len(c) == 2 for c in fan.ridges().values())
    if complete and cross_check:
        for p in sample_points(fan.n, cross_check):
            if not covered(fan, p):
                raise AssertionError(f"ridge pairing holds but {p} is uncovered")
    return complete


# ----------------------------------------------------------------------------
# candidate cones and complete fans
# ----------------------------------------------------------------------------

def _contains_other_column(V: FanMatrix, c: Cone) -> bool:
    return any(cone_contains_point(V, c, V.column(j)) for j in range(1, V.m + 1) if j not in c)


@lru_cache(maxsize=256)
def candidate_cones(V: FanMatrix) -> tuple[tuple[Cone, ...], tuple[Cone, ...]]:
    """All full-dimensional simplicial column cones, and the minimal ones among them.

    A candidate is minimal when it contains no column of ``V`` other than its
    own generators.
    """
    total = tuple(Cone(c) for c in combinations(range(1, V.m + 1), V.n)
                  if det(V.submatrix(c)) != 0)
    minimal = tuple(c for c in total if not _contains_other_column(V, c))
    return total, minimal


def minor_gcds(V: FanMatrix) -> tuple[int, int]:
    """gcd of ``|det|`` over all candidate cones and over the minimal ones.

    The two always agree; a mismatch raises ``AssertionError``.
    """
    total, minimal = candidate_cones(V)
    m_tot = m_min = 0
    for c in total:
        m_tot = gcd(m_tot, det(V.submatrix(c)))
    for c in minimal:
        m_min = gcd(m_min, det(V.submatrix(c)))
    if m_tot != m_min:
        raise AssertionError(f"minor gcds differ: total {m_tot}, minimal {m_min}")
    return m_tot, m_min


def ridge_normal(V: FanMatrix, ridge: Sequence[int]) -> list[int]:
    """Integer normal ``u`` of the hyperplane through ``ridge``: ``u . x = det[ridge | x]``."""
    R = V.submatrix(ridge)
    n = V.n
    u = []
    for k in range(n):
        e = [0] * n
        e[k] = 1
        u.append(det([row + [e[i]] for i, row in enumerate(R)]))
    return u


def dot(u, x):
    return sum(a * b for a, b in zip(u, x))


def opposite_sides(V: FanMatrix, ridge: Sequence[int], a: int, b: int) -> bool:
    """Columns ``a`` and ``b`` lie strictly on opposite sides of the ridge hyperplane."""
    u = ridge_normal(V, ridge)
    return dot(u, V.column(a)) * dot(u, V.column(b)) < 0


def generic_point(V: FanMatrix, seed: int = 1) -> list[Fraction]:
    """A rational point off every hyperplane spanned by ``n - 1`` columns."""
    normals = [ridge_normal(V, s) for s in combinations(range(1, V.m + 1), V.n - 1)]
    normals = [u for u in normals if any(u)]
    rng = random.Random(seed)
    while True:
        p = [Fraction(rng.randint(-10**4, 10**4), rng.randint(1, 101)) for _ in range(V.n)]
        if all(dot(u, p) != 0 for u in normals):
            return p


def complete_extensions(V: FanMatrix, start: Sequence[Cone], candidates: Sequence[Cone],
                        first_only: bool = False) -> list[Fan]:
    """Complete fans containing ``start`` whose other cones come from ``candidates``.

    Depth-first search: repeatedly pick the unpaired ridge with the fewest
    admissible partners and branch over those partners.  A partner must
    contain the ridge, sit on the other side of it and meet every chosen cone
    in a common face.
    """
    n = V.n
    by_ridge: dict[Cone, list[Cone]] = {}
    for c in candidates:
        for f in c.facets():
            by_ridge.setdefault(f, []).append(c)

    results: list[Fan] = []
    seen: set[tuple[Cone, ...]] = set()

    def compatible(c: Cone, chosen: Sequence[Cone]) -> bool:
        return all(common_face_intersection(V, c, d) for d in chosen)

    def search(chosen: list[Cone]) -> bool:
        count: dict[Cone, list[Cone]] = {}
        for c in chosen:
            for f in c.facets():
                count.setdefault(f, []).append(c)
        open_ridges = [(f, cs[0]) for f, cs in count.items() if len(cs) == 1]
        if not open_ridges:
            key = tuple(sorted(chosen))
            if key not in seen:
                seen.add(key)
                results.append(Fan(V, key))
            return first_only
        best = None
        for f, carrier in sorted(open_ridges):
            apex = next(i for i in carrier if i not in f)
            opts = []
            for d in by_ridge.get(f, ()):
                if d in chosen:
                    continue
                other = next(i for i in d if i not in f)
                if opposite_sides(V, f, apex, other) and compatible(d, chosen):
                    opts.append(d)
            if best is None or len(opts) < len(best):
                best = opts
            if not best:
                return False
        for d in best:
            if search(chosen + [d]):
                return True
        return False

    start = [Cone(c) for c in start]
    for c in start:
        if len(c) != n:
            raise ValueError("search needs full-dimensional cones")
    search(start)
    return sorted(results, key=lambda f: f.cones)


def _enumerate_from_seed(V: FanMatrix, seed: Cone, minimal: tuple[Cone, ...]) -> list[Fan]:
    return complete_extensions(V, [seed], minimal)


def enumerate_complete_fans(V: FanMatrix, jobs: int = 1) -> list[Fan]:
    """All simplicial complete fans whose rays are exactly the columns of ``V``.

    The cone of a complete fan containing a fixed generic point is unique, so
    seeding the search with each minimal candidate through that point
    partitions the answer.  Output is sorted, independent of ``jobs``.
    """
    problems = [v for v in validate_fan_matrix(V) if v.kind != "non-primitive column"]
    if problems:
        raise ValueError(f"invalid fan matrix: {problems[0]}")
    if not positively_spans(V):
        raise ValueError("columns do not positively span R^n; no complete fan exists")
    _, minimal = candidate_cones(V)
    p0 = generic_point(V)
    seeds = [c for c in minimal if cone_contains_point(V, c, p0)]
    if jobs > 1 and len(seeds) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_enumerate_from_seed, [V] * len(seeds), seeds, [minimal] * len(seeds)))
    else:
        parts = [_enumerate_from_seed(V, s, minimal) for s in seeds]
    fans = {f.cones: f for part in parts for f in part}
    return [fans[k] for k in sorted(fans)]
