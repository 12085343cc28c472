"""Finitely generated abelian groups ``Z^r + T`` and free-part containment.

A group is given by its free rank and the invariant factors ``d_1 | ... | d_k``
of its torsion part ``T``.  Elements carry a free integer vector and a
torsion residue vector, component ``j`` reduced modulo ``d_j``.

The central question answered here: given a free subgroup ``H``, is there a
free part ``L`` (a complement ``M = L + T``) with ``H`` inside ``L``?  The
answer comes from the Smith form of the free coordinates of a basis of ``H``:
writing the basis as ``a_i f_i + t_i``, ``H`` sits in a free part exactly when
every offset ``t_i`` is divisible by ``a_i`` inside ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Optional, Sequence

from .linalg import (
    Lattice,
    as_matrix,
    hnf,
    identity,
    snf,
    unimodular_inverse,
)


@dataclass(frozen=True)
class GroupElement:
    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        s = "(" + ",".join(map(str, self.free)) + ")"
        if any(self.torsion):
            s += "+[" + ",".join(map(str, self.torsion)) + "]"
        return s

    def coords(self) -> list[int]:
        return list(self.free) + list(self.torsion)


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^rank + Z/d_1 + ... + Z/d_k`` with ``d_i >= 2`` and ``d_i | d_{i+1}``."""

    rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(d) for d in self.torsion_orders))
        if self.rank < 0:
            raise ValueError("negative rank")
        ds = self.torsion_orders
        if any(d < 2 for d in ds):
            raise ValueError("torsion orders must be at least 2")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise ValueError("torsion orders must form a divisibility chain")

    @classmethod
    def from_invariants(cls, rank: int, factors: Sequence[int]) -> "FgAbGroup":
        """Drop trivial factors (1's) from an invariant-factor list."""
        return cls(rank, tuple(d for d in factors if d != 1))

    @property
    def torsion_order(self) -> int:
        return prod(self.torsion_orders)

    @property
    def k(self) -> int:
        return len(self.torsion_orders)

    def element(self, free: Sequence[int], torsion: Sequence[int] = ()) -> GroupElement:
        if len(free) != self.rank:
            raise ValueError(f"free part must have length {self.rank}")
        torsion = list(torsion) or [0] * self.k
        if len(torsion) != self.k:
            raise ValueError(f"torsion part must have length {self.k}")
        return GroupElement(
            tuple(int(x) for x in free),
            tuple(int(t) % d for t, d in zip(torsion, self.torsion_orders)),
        )

    def zero(self) -> GroupElement:
        return self.element([0] * self.rank)

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.element([a + b for a, b in zip(x.free, y.free)],
                            [a + b for a, b in zip(x.torsion, y.torsion)])

    def scale(self, c: int, x: GroupElement) -> GroupElement:
        return self.element([c * a for a in x.free], [c * a for a in x.torsion])

    def combine(self, coeffs: Sequence[int], elements: Sequence[GroupElement]) -> GroupElement:
        out = self.zero()
        for c, x in zip(coeffs, elements):
            if c:
                out = self.add(out, self.scale(c, x))
        return out

    def torsion_elements(self):
        """Iterate every element of ``T`` as a residue tuple."""
        from itertools import product
        return product(*(range(d) for d in self.torsion_orders))

    def relations(self) -> list[list[int]]:
        """Rows ``d_j e_{r+j}`` presenting ``M`` as a quotient of ``Z^(r+k)``."""
        n = self.rank + self.k
        rows = []
        for j, d in enumerate(self.torsion_orders):
            row = [0] * n
            row[self.rank + j] = d
            rows.append(row)
        return rows

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion_orders]
        if not parts:
            return "0"
        if self.rank > 1:
            parts = [f"Z^{self.rank}"] + parts[self.rank:]
        return " + ".join(parts)


def subgroup_lattice(M: FgAbGroup, gens: Sequence[GroupElement]) -> Lattice:
    """Preimage of ``<gens>`` in ``Z^(r+k)``; equal subgroups give equal lattices."""
    rows = [g.coords() for g in gens] + M.relations()
    return Lattice.from_generators(rows, M.rank + M.k) if rows else Lattice.zero(M.rank + M.k)


def canonical_generators(M: FgAbGroup, gens: Sequence[GroupElement]) -> list[GroupElement]:
    """Generators read off the HNF of the subgroup's preimage; equal subgroups give equal lists."""
    out = []
    for row in subgroup_lattice(M, gens).basis:
        x = M.element(row[:M.rank], row[M.rank:])
        if any(x.free) or any(x.torsion):
            out.append(x)
    return out


def in_subgroup(M: FgAbGroup, x: GroupElement, gens: Sequence[GroupElement]) -> bool:
    return x.coords() in subgroup_lattice(M, gens)


def same_subgroup(M: FgAbGroup, gens1: Sequence[GroupElement], gens2: Sequence[GroupElement]) -> bool:
    return subgroup_lattice(M, gens1) == subgroup_lattice(M, gens2)


@dataclass(frozen=True)
class SubgroupProfile:
    """Smith-form description of a free subgroup ``H``.

    ``divisors[i] * free_basis[i] + offsets[i]`` (``i < h``) is a basis of
    ``H`` (more precisely of the reduced generating set ``generators``), and
    ``free_basis`` is a basis of ``Z^r``.
    """

    divisors: tuple[int, ...]
    free_basis: tuple[tuple[int, ...], ...]
    offsets: tuple[tuple[int, ...], ...]
    generators: tuple[GroupElement, ...]
    reduced: bool = False
    lost_torsion: tuple[GroupElement, ...] = field(default=())

    @property
    def h(self) -> int:
        return len(self.divisors)


def reduce_generators(M: FgAbGroup, gens: Sequence[GroupElement]) -> tuple[list[GroupElement], list[GroupElement]]:
    """Split ``gens`` into an independent set and the leftover torsion elements.

    Combinations of the generators whose free part vanishes are returned as
    the second list (only nonzero ones).  ``H`` is free exactly when that list
    is empty.
    """
    if not gens:
        return [], []
    G = [list(g.free) for g in gens]
    if M.rank == 0:
        H, U = [[] for _ in gens], identity(len(gens))
    else:
        H, U = hnf(G)
    independent, torsion = [], []
    for Hrow, Urow in zip(H, U):
        x = M.combine(Urow, gens)
        if any(Hrow):
            independent.append(x)
        elif any(x.torsion):
            torsion.append(x)
    return independent, torsion


def subgroup_profile(M: FgAbGroup, gens: Sequence[GroupElement]) -> SubgroupProfile:
    gens = [M.element(g.free, g.torsion) for g in gens]
    indep, lost = reduce_generators(M, gens)
    reduced = len(indep) != len(gens)
    h = len(indep)
    if h == 0:
        return SubgroupProfile((), tuple(tuple(r) for r in identity(M.rank)), (), (), reduced, tuple(lost))
    G = [list(g.free) for g in indep]
    dec = snf(G)
    Winv = unimodular_inverse(dec.W)
    divisors = tuple(dec.S[i][i] for i in range(h))
    offsets = []
    for i in range(h):
        t = [0] * M.k
        for c, g in zip(dec.U[i], indep):
            t = [a + c * b for a, b in zip(t, g.torsion)]
        offsets.append(tuple(a % d for a, d in zip(t, M.torsion_orders)))
    return SubgroupProfile(
        divisors=divisors,
        free_basis=tuple(tuple(r) for r in Winv),
        offsets=tuple(offsets),
        generators=tuple(indep),
        reduced=reduced,
        lost_torsion=tuple(lost),
    )


def torsion_divide(a: int, t: Sequence[int], M: FgAbGroup) -> Optional[tuple[int, ...]]:
    """Some ``u`` in ``T`` with ``a u = t``, or None.

    Componentwise, ``a u = t_j`` is solvable in ``Z/d_j`` iff ``gcd(a, d_j)``
    divides ``t_j``.
    """
    u = []
    for tj, d in zip(t, M.torsion_orders):
        g = gcd(a, d)
        if tj % g:
            return None
        if a % d == 0:
            u.append(0)
            continue
        m = d // g
        u.append(((tj // g) * pow((a // g) % m, -1, m)) % m if m > 1 else 0)
    return tuple(u)


class NotFreeError(ValueError):
    """The generators span a subgroup that meets the torsion part."""


@dataclass(frozen=True)
class FreePartVerdict:
    contained: bool
    profile: SubgroupProfile
    witness: Optional[tuple[GroupElement, ...]] = None
    failing_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.contained


def contained_in_free_part(M: FgAbGroup, gens: Sequence[GroupElement]) -> FreePartVerdict:
    """Decide whether ``<gens>`` lies in a free part of ``M``.

    When it does, ``witness`` is a basis ``f_i + u_i`` (``i <= h``), ``f_i``
    (``i > h``) of a free part containing every generator.  Otherwise
    ``failing_index`` points at the first (0-based) divisor ``a_i`` that does
    not divide its offset ``t_i``.

    Raises ``NotFreeError`` when ``<gens>`` contains nonzero torsion.
    """
    prof = subgroup_profile(M, gens)
    if prof.lost_torsion:
        raise NotFreeError(f"subgroup contains torsion element {prof.lost_torsion[0]}")
    us = []
    for i, (a, t) in enumerate(zip(prof.divisors, prof.offsets)):
        u = torsion_divide(a, t, M)
        if u is None:
            return FreePartVerdict(False, prof, failing_index=i)
        us.append(u)
    witness = []
    for i, f in enumerate(prof.free_basis):
        witness.append(M.element(f, us[i] if i < prof.h else ()))
    return FreePartVerdict(True, prof, witness=tuple(witness))


def split_coordinates(M: FgAbGroup, basis: Sequence[GroupElement], x: GroupElement) -> tuple[list[int], tuple[int, ...]]:
    """Coordinates of ``x`` in the splitting ``M = <basis> + T``.

    ``basis`` must be a free-part basis (e.g. a containment witness).  Returns
    the integer coordinates along ``basis`` and the torsion component.
    """
    from .linalg import solve_integer, transpose
    if not basis:
        return [], x.torsion
    F = transpose([list(b.free) for b in basis])
    c = solve_integer(F, list(x.free))
    if c is None:
        raise ValueError("basis does not span the free quotient")
    rest = M.add(x, M.scale(-1, M.combine(c, basis)))
    return c, rest.torsion


def quotient_invariants(M: FgAbGroup, gens: Sequence[GroupElement]) -> tuple[int, tuple[int, ...]]:
    """Free rank and invariant factors (all > 1) of ``M / <gens>``."""
    n = M.rank + M.k
    rows = as_matrix([g.coords() for g in gens] + M.relations())
    if not rows or n == 0:
        return M.rank, M.torsion_orders
    diag = snf(rows).diagonal
    nonzero = [d for d in diag if d]
    return n - len(nonzero), tuple(d for d in nonzero if d > 1)

