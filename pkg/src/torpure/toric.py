"""Class group, Cartier and Picard lattices, and purity of a simplicial toric variety.

Input is a fan matrix ``V`` (``n x m``, ``m = n + r``) and a complete
simplicial fan on its columns.  Torus-invariant Weil divisors are ``Z^m``;
the class group is ``Z^m / L_r(V)``, presented by a weight matrix ``Q``
(free coordinates) and a torsion matrix ``Gamma`` (residues).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence

from .abelian import (
    FgAbGroup,
    FreePartVerdict,
    GroupElement,
    canonical_generators,
    contained_in_free_part,
    same_subgroup,
)
from .fans import (
    Fan,
    FanMatrix,
    enumerate_complete_fans,
    is_complete,
    is_fan,
    m_sigma,
    validate_fan_matrix,
)
from .linalg import (
    Lattice,
    det,
    integer_kernel,
    intersect_all,
    invariant_factors,
    matvec,
    snf,
    solve_integer,
    transpose,
)


class ImpureError(ValueError):
    """Raised when an operation needs a pure variety."""

    def __init__(self, report: "PurityReport"):
        super().__init__("the variety is not pure")
        self.report = report


def _check_matrix(V: FanMatrix) -> None:
    bad = validate_fan_matrix(V)
    if bad:
        raise ValueError(f"invalid fan matrix: {bad[0]}")


def _check_fan(V: FanMatrix, fan: Fan) -> None:
    if fan.matrix != V:
        raise ValueError("fan is defined on a different matrix")
    if not fan.is_pure():
        raise ValueError("maximal cones must be full-dimensional")
    ok, pair = is_fan(fan)
    if not ok:
        raise ValueError(f"not a fan: {pair[0]} and {pair[1]}")
    if not is_complete(fan):
        raise ValueError("fan is not complete")


def row_lattice(V: FanMatrix) -> Lattice:
    return Lattice.from_generators(V.rows(), V.m)


def weight_matrix(V: FanMatrix) -> list[list[int]]:
    """HNF basis of the integer kernel of ``V`` (an ``r x m`` Gale dual)."""
    _check_matrix(V)
    return integer_kernel(V.rows(), V.m).matrix()


# ----------------------------------------------------------------------------
# V = beta * Vhat
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CfDecomposition:
    Vhat: FanMatrix
    beta: tuple[tuple[int, ...], ...]

    @property
    def det_beta(self) -> int:
        return abs(det(self.beta))


def cf_decomposition(V: FanMatrix, Vhat: Optional[FanMatrix] = None) -> CfDecomposition:
    """Factor ``V = beta * Vhat`` with ``L_r(Vhat)`` the saturation of ``L_r(V)``.

    ``Vhat`` defaults to the HNF basis of the saturation; a caller-supplied
    one is checked to have that row lattice.
    """
    _check_matrix(V)
    sat = row_lattice(V).saturation()
    if Vhat is None:
        Vhat = FanMatrix.from_rows(sat.matrix())
    elif Lattice.from_generators(Vhat.rows(), V.m) != sat:
        raise ValueError("given Vhat does not span the saturation of the rows of V")
    basis = transpose(Vhat.rows())
    beta = []
    for row in V.rows():
        b = solve_integer(basis, row)
        if b is None:
            raise AssertionError("rows of V are not integer combinations of Vhat")
        beta.append(tuple(b))
    return CfDecomposition(Vhat, tuple(beta))


# ----------------------------------------------------------------------------
# class group
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassGroupPresentation:
    """``Cl = Z^m / L_r(V)`` as ``Z^r + T`` via ``x -> (Q x, Gamma x)``."""

    group: FgAbGroup
    Q: tuple[tuple[int, ...], ...]
    Gamma: tuple[tuple[int, ...], ...]

    @property
    def r(self) -> int:
        return self.group.rank

    @property
    def torsion_orders(self) -> tuple[int, ...]:
        return self.group.torsion_orders

    def image(self, x: Sequence[int]) -> GroupElement:
        free = matvec(self.Q, x) if self.Q else []
        tors = matvec(self.Gamma, x) if self.Gamma else []
        return self.group.element(free, tors)

    def _stacked(self) -> list[list[int]]:
        # [Q 0; Gamma D]: kernel gives the joint kernel, cokernel the failure of surjectivity
        k = self.group.k
        rows = [list(q) + [0] * k for q in self.Q]
        for j, (g, d) in enumerate(zip(self.Gamma, self.torsion_orders)):
            rows.append(list(g) + [d if i == j else 0 for i in range(k)])
        return rows

    def joint_kernel(self, m: int) -> Lattice:
        """``{x in Z^m : Q x = 0, Gamma x = 0 in T}``."""
        rows = self._stacked()
        if not rows:
            return Lattice.full(m)
        K = integer_kernel(rows, m + self.group.k)
        return Lattice.from_generators([b[:m] for b in K.basis], m)

    def is_surjective(self) -> bool:
        rows = self._stacked()
        return not rows or invariant_factors(rows) == [1] * len(rows)


def class_group(V: FanMatrix, Q: Optional[Sequence[Sequence[int]]] = None,
                Gamma: Optional[Sequence[Sequence[int]]] = None,
                torsion_orders: Optional[Sequence[int]] = None) -> ClassGroupPresentation:
    """Presentation of the class group.

    By default ``Q`` is :func:`weight_matrix` and ``Gamma`` comes from a Smith
    form of ``V``.  Overrides (all three, or ``Q`` alone for a free class
    group) are validated against ``V``.
    """
    _check_matrix(V)
    if Q is not None:
        Gamma = [list(g) for g in (Gamma or [])]
        orders = tuple(torsion_orders or ())
        pres = ClassGroupPresentation(
            FgAbGroup(len(Q), orders),
            tuple(tuple(int(x) for x in q) for q in Q),
            tuple(tuple(int(x) % d for x in g) for g, d in zip(Gamma, orders)),
        )
        if len(pres.Gamma) != len(orders):
            raise ValueError("torsion matrix needs one row per torsion order")
        if pres.joint_kernel(V.m) != row_lattice(V) or not pres.is_surjective():
            raise ValueError("given weight/torsion matrices do not present the class group of V")
        return pres

    dec = snf(V.rows())
    n, m = V.n, V.m
    diag = dec.diagonal
    # x -> x W splits Z^m / L_r(V) as (+) Z/d_i (+) Z^r
    Wt = transpose(dec.W)
    tors = [(i, d) for i, d in enumerate(diag) if d > 1]
    orders = tuple(d for _, d in tors)
    Gamma = tuple(tuple(x % d for x in Wt[i]) for i, d in tors)
    Qcan = tuple(tuple(q) for q in integer_kernel(V.rows(), m).matrix())
    # the free rows of W^T span the same kernel, so swapping them for Qcan
    # is an automorphism of Z^r and Gamma stays compatible
    pres = ClassGroupPresentation(FgAbGroup(m - n, orders), Qcan, Gamma)
    return pres


# ----------------------------------------------------------------------------
# Cartier and Picard
# ----------------------------------------------------------------------------

def cartier_lattice(V: FanMatrix, fan: Fan) -> Lattice:
    """Intersection over maximal cones of ``L_r(V) + E_I``, ``I`` the complement."""
    _check_fan(V, fan)
    L = V.rows()
    parts = []
    for I in fan.complements():
        gens = L + [[1 if j == i else 0 for j in range(1, V.m + 1)] for i in sorted(I)]
        parts.append(Lattice.from_generators(gens, V.m))
    return intersect_all(parts)


def picard_subgroup(V: FanMatrix, fan: Fan,
                    cg: Optional[ClassGroupPresentation] = None) -> list[GroupElement]:
    """Generators of ``Pic`` inside the class group (images of Cartier divisors)."""
    cg = cg or class_group(V)
    C = cartier_lattice(V, fan)
    return canonical_generators(cg.group, [cg.image(c) for c in C.basis])


# ----------------------------------------------------------------------------
# purity
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SufficientCertificate:
    det_beta: int
    m_sigma_hat: int

    def __str__(self) -> str:
        return f"gcd(|det beta|, m) = gcd({self.det_beta}, {self.m_sigma_hat}) = 1"


@dataclass(frozen=True)
class UniqueFanCertificate:
    fan: Fan

    def __str__(self) -> str:
        return f"the only complete fan is {self.fan}"


@dataclass(frozen=True)
class PurityReport:
    verdict: str
    via: str
    cl: FgAbGroup
    pic_generators: tuple[GroupElement, ...]
    det_beta: int
    m_sigma_hat: int
    certificate: Optional[SufficientCertificate] = None
    free_part: Optional[FreePartVerdict] = field(default=None, repr=False)

    @property
    def pure(self) -> bool:
        return self.verdict == "Pure"

    def __bool__(self) -> bool:
        return self.pure

    @property
    def witness(self) -> Optional[tuple[GroupElement, ...]]:
        return self.free_part.witness if self.free_part else None

    @property
    def failing_generator(self) -> Optional[GroupElement]:
        fp = self.free_part
        if fp is None or fp.contained:
            return None
        i = fp.failing_index
        return self.cl.element(
            [fp.profile.divisors[i] * x for x in fp.profile.free_basis[i]],
            fp.profile.offsets[i],
        )


def purity_sufficient(V: FanMatrix, fan: Fan) -> Optional[SufficientCertificate]:
    """Certificate of purity when ``gcd(|det beta|, m_Sigma_hat) = 1``."""
    _check_fan(V, fan)
    cf = cf_decomposition(V)
    m = m_sigma(Fan(cf.Vhat, fan.cones))
    if gcd(cf.det_beta, m) == 1:
        return SufficientCertificate(cf.det_beta, m)
    return None


def is_pure(V: FanMatrix, fan: Fan, cg: Optional[ClassGroupPresentation] = None) -> PurityReport:
    """Decide whether ``Pic`` lies in a free part of the class group.

    The gcd criterion is tried first; the free-part test decides otherwise.
    Both are always computed for the report when cheap, but the verdict
    follows the first conclusive path.
    """
    _check_fan(V, fan)
    cg = cg or class_group(V)
    cf = cf_decomposition(V)
    m_hat = m_sigma(Fan(cf.Vhat, fan.cones))
    gens = tuple(picard_subgroup(V, fan, cg))
    free_part = contained_in_free_part(cg.group, gens)
    if gcd(cf.det_beta, m_hat) == 1:
        cert = SufficientCertificate(cf.det_beta, m_hat)
        if not free_part:
            raise AssertionError("gcd criterion and free-part test disagree")
        return PurityReport("Pure", "sufficient-condition", cg.group, gens,
                            cf.det_beta, m_hat, cert, free_part)
    verdict = "Pure" if free_part else "Impure"
    return PurityReport(verdict, "free-part-test", cg.group, gens, cf.det_beta, m_hat,
                        None, free_part)


def unique_fan_purity(V: FanMatrix) -> Optional[UniqueFanCertificate]:
    """Certificate when exactly one complete simplicial fan uses the columns of ``V``."""
    fans = enumerate_complete_fans(V)
    return UniqueFanCertificate(fans[0]) if len(fans) == 1 else None


# ----------------------------------------------------------------------------
# Picard group through the weight matrix
# ----------------------------------------------------------------------------

def _column_lattice(Q: Sequence[Sequence[int]], I: Sequence[int]) -> Lattice:
    return Lattice.from_generators([[row[i - 1] for row in Q] for i in I], len(Q))


def pic_of_pws(Q: Sequence[Sequence[int]], fan: Fan) -> Lattice:
    """Intersection over maximal cones of the column lattices ``L_c(Q_I)``."""
    r = len(Q)
    if invariant_factors(Q) != [1] * r:
        raise ValueError("weight matrix is not surjective onto Z^r")
    return intersect_all([_column_lattice(Q, sorted(I)) for I in fan.complements()])


def a_vectors(Q: Sequence[Sequence[int]], fan: Fan, x: Sequence[int]) -> dict[frozenset, list[int]]:
    """For each complement ``I``, the unique ``a_I`` supported on ``I`` with ``Q a_I = x``."""
    m = len(Q[0])
    out = {}
    for I in fan.complements():
        idx = sorted(I)
        c = solve_integer([[row[i - 1] for i in idx] for row in Q], list(x))
        if c is None:
            raise ValueError(f"{tuple(x)} is not in the column lattice of Q_I for I = {idx}")
        a = [0] * m
        for i, v in zip(idx, c):
            a[i - 1] = v
        out[frozenset(I)] = a
    return out


def adjacent_pairs(fan: Fan) -> list[tuple[frozenset, frozenset]]:
    """Breadth-first spanning tree of the ridge graph of maximal cones, as complement pairs."""
    cones = list(fan.cones)
    if not cones:
        return []
    n = fan.n
    seen = {cones[0]}
    queue = deque([cones[0]])
    pairs = []
    m = fan.matrix.m
    while queue:
        c = queue.popleft()
        for d in cones:
            if d not in seen and len(set(c) & set(d)) == n - 1:
                seen.add(d)
                queue.append(d)
                pairs.append((c.complement(m), d.complement(m)))
    if len(seen) != len(cones):
        raise ValueError("maximal cones are not connected through ridges")
    return pairs


def u_vectors(Q: Sequence[Sequence[int]], fan: Fan, x: Sequence[int],
              pairs: Optional[Sequence[tuple[Sequence[int], Sequence[int]]]] = None
              ) -> dict[tuple[frozenset, frozenset], list[int]]:
    """``u_IJ = a_I - a_J`` over ``pairs`` (default: :func:`adjacent_pairs`)."""
    a = a_vectors(Q, fan, x)
    if pairs is None:
        pairs = adjacent_pairs(fan)
    out = {}
    for I, J in pairs:
        I, J = frozenset(I), frozenset(J)
        out[(I, J)] = [p - q for p, q in zip(a[I], a[J])]
    return out


def pic_characterization(V: FanMatrix, fan: Fan,
                         cg: Optional[ClassGroupPresentation] = None) -> Lattice:
    """``Pic`` as a sublattice of ``Z^r`` for a pure variety.

    Cut out of ``pic_of_pws(Q)`` by ``Gamma u_IJ = 0`` on a spanning chain of
    adjacent cones; cross-checked against the weights of Cartier divisors.
    """
    cg = cg or class_group(V)
    report = is_pure(V, fan, cg)
    if not report:
        raise ImpureError(report)
    Q = [list(q) for q in cg.Q]
    P = pic_of_pws(Q, fan)
    pairs = adjacent_pairs(fan)
    cols = []
    for b in P.basis:
        col = []
        for u in u_vectors(Q, fan, b, pairs).values():
            col.extend(matvec(cg.Gamma, u) if cg.Gamma else [])
        cols.append(col)
    ds = [d for _ in pairs for d in cg.torsion_orders]
    s = len(P.basis)
    if ds:
        # c in Z^s with sum c_j col_j = 0 mod ds
        rows = [[cols[j][t] for j in range(s)] + [ds[t] if i == t else 0 for i in range(len(ds))]
                for t in range(len(ds))]
        K = integer_kernel(rows, s + len(ds))
        coeffs = [b[:s] for b in K.basis]
    else:
        coeffs = [[1 if i == j else 0 for i in range(s)] for j in range(s)]
    result = Lattice.from_generators(
        [[sum(c[j] * P.basis[j][k] for j in range(s)) for k in range(len(Q))] for c in coeffs],
        len(Q),
    )
    direct = Lattice.from_generators([list(g.free) for g in report.pic_generators], len(Q))
    if result != direct:
        raise AssertionError("characterization disagrees with the Cartier lattice")
    return result


def pic_equals(cg: ClassGroupPresentation, gens: Sequence[GroupElement],
               expected: Sequence[GroupElement]) -> bool:
    return same_subgroup(cg.group, gens, expected)


__all__ = [
    "CfDecomposition",
    "ClassGroupPresentation",
    "ImpureError",
    "PurityReport",
    "SufficientCertificate",
    "UniqueFanCertificate",
    "a_vectors",
    "adjacent_pairs",
    "cartier_lattice",
    "cf_decomposition",
    "class_group",
    "is_pure",
    "pic_characterization",
    "pic_equals",
    "pic_of_pws",
    "picard_subgroup",
    "purity_sufficient",
    "row_lattice",
    "u_vectors",
    "unique_fan_purity",
    "weight_matrix",
]
