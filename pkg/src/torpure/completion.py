"""Extending simplicial fans by new rays, and completing fans without new rays.

:func:`extend_fan` adds rays one at a time.  A ray inside the current support
is inserted by stellar subdivision; a ray outside it is coned over the
boundary facets it can see.  Starting from a convex support this keeps the
support convex, so every step is checked for that too.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .fans import (
    Cone,
    Fan,
    FanMatrix,
    candidate_cones,
    common_face_intersection,
    complete_extensions,
    cone_coordinates,
    cone_contains_point,
    covered,
    dot,
    is_complete,
    is_fan,
    ridge_normal,
)
from .linalg import vector_gcd


class ConvexityError(ValueError):
    """The support of a fan is not a convex cone."""


@dataclass(frozen=True)
class ExtensionStep:
    """One ray insertion.

    ``kind`` is ``"stellar"`` (``cones`` holds the subdivided face ``tau``) or
    ``"visible"`` (``cones`` holds the visible boundary facets).
    """

    kind: str
    ray: int
    vector: tuple[int, ...]
    cones: tuple[Cone, ...]
    before: int
    after: int

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ray": self.ray,
            "vector": list(self.vector),
            "cones": [list(c) for c in self.cones],
            "before": self.before,
            "after": self.after,
        }

    def __str__(self) -> str:
        what = ", ".join(map(str, self.cones))
        verb = "subdivide at" if self.kind == "stellar" else "cone over"
        return f"ray {self.ray} = {self.vector}: {verb} {what} ({self.before} -> {self.after} cones)"


def _require_pure(fan: Fan) -> None:
    if not fan.cones or not fan.is_pure():
        raise ValueError("need a nonempty fan of full-dimensional cones")


def minimal_containing_cone(fan: Fan, w: Sequence[int]) -> Cone:
    """The face of ``fan`` whose relative interior contains ``w``."""
    for c in fan.cones:
        lam = cone_coordinates(fan.matrix, c, w)
        if lam is not None and all(x >= 0 for x in lam):
            return Cone(i for i, x in zip(c, lam) if x > 0)
    raise ValueError(f"{tuple(w)} is outside the support of the fan")


def _with_ray(fan: Fan, w: Sequence[int]) -> tuple[Fan, int]:
    """Same fan over a matrix that has ``w`` as a column, plus that column's index."""
    k = fan.matrix.index_of(w)
    if k is not None:
        return fan, k
    V = fan.matrix.with_column(w)
    return Fan(V, fan.cones), V.m


def stellar_subdivision(fan: Fan, w: Sequence[int], tau: Optional[Sequence[int]] = None) -> Fan:
    """Star subdivision of ``fan`` along the ray through ``w``.

    Every maximal cone ``mu`` containing ``tau`` is replaced by the cones
    ``mu - {i} + {w}`` for ``i`` in ``tau``.
    """
    w = tuple(w)
    if vector_gcd(w) != 1:
        raise ValueError("the new ray must be primitive")
    _require_pure(fan)
    found = minimal_containing_cone(fan, w)
    if tau is None:
        tau = found
    elif Cone(tau) != found:
        raise ValueError(f"{Cone(tau)} is not the minimal cone containing {w}")
    fan, k = _with_ray(fan, w)
    if tau == Cone(k):
        return fan
    cones = []
    for mu in fan.cones:
        if set(tau) <= set(mu):
            cones.extend(Cone([j for j in mu if j != i] + [k]) for i in tau)
        else:
            cones.append(mu)
    return Fan(fan.matrix, cones)


def _outer_normals(fan: Fan) -> list[tuple[Cone, Cone, list[int]]]:
    """Boundary facets with their carrier and outward normal."""
    V = fan.matrix
    out = []
    for f, carriers in sorted(fan.ridges().items()):
        if len(carriers) != 1:
            continue
        c = carriers[0]
        u = ridge_normal(V, f)
        apex = next(i for i in c if i not in f)
        if dot(u, V.column(apex)) > 0:
            u = [-x for x in u]
        out.append((f, c, u))
    return out


def is_convex_support(fan: Fan) -> bool:
    """Every boundary facet hyperplane leaves all rays on its inner side.

    For a pure full-dimensional fan this local condition is equivalent to
    convexity of the support.
    """
    _require_pure(fan)
    V = fan.matrix
    rays = sorted(fan.rays())
    return all(dot(u, V.column(j)) <= 0 for _, _, u in _outer_normals(fan) for j in rays)


def visible_facets(fan: Fan, w: Sequence[int]) -> list[tuple[Cone, Cone]]:
    """Boundary facets (with carrier) whose outer side strictly contains ``w``."""
    _require_pure(fan)
    if not is_convex_support(fan):
        raise ConvexityError("support of the fan is not convex")
    if covered(fan, w):
        raise ValueError(f"{tuple(w)} lies in the support of the fan")
    out = [(f, c) for f, c, u in _outer_normals(fan) if dot(u, w) > 0]
    if not out:
        raise AssertionError("a point outside a convex support must see some facet")
    return out


def _support_points(V: FanMatrix, rays: Sequence[int], count: int, seed: int) -> list[list[Fraction]]:
    """Random nonnegative combinations of the given columns."""
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        coeffs = [Fraction(rng.randint(0, 50), rng.randint(1, 7)) for _ in rays]
        pts.append([sum((a * V.column(i)[k] for a, i in zip(coeffs, rays)), Fraction(0))
                    for k in range(V.n)])
    return pts


def extend_fan(fan: Fan, ws: Sequence[Sequence[int]], check_points: int = 50) -> tuple[Fan, list[ExtensionStep]]:
    """Insert the rays ``ws`` in order; returns the new fan and the step log.

    The result has support ``|fan| + cone(ws)``, rays those of ``fan`` plus
    ``ws``, and contains every cone of ``fan``.  All three are asserted.
    A vector equal to a column of the matrix reuses that column's index.
    """
    _require_pure(fan)
    ok, pair = is_fan(fan)
    if not ok:
        raise ValueError(f"not a fan: {pair[0]} and {pair[1]}")
    if not is_convex_support(fan):
        raise ConvexityError("support of the initial fan is not convex")
    ws = [tuple(int(x) for x in w) for w in ws]
    for w in ws:
        if len(w) != fan.n:
            raise ValueError("ray has the wrong length")
        if vector_gcd(w) != 1:
            raise ValueError(f"ray {w} is not primitive")
        if covered(fan, w):
            raise ValueError(f"ray {w} already lies in the support of the initial fan")

    start = fan
    steps = []
    current = fan
    for w in ws:
        before = len(current.cones)
        if covered(current, w):
            tau = minimal_containing_cone(current, w)
            current = stellar_subdivision(current, w, tau)
            k = current.matrix.index_of(w)
            steps.append(ExtensionStep("stellar", k, w, (tau,), before, len(current.cones)))
        else:
            facets = visible_facets(current, w)
            current, k = _with_ray(current, w)
            new = [Cone(tuple(f) + (k,)) for f, _ in facets]
            current = Fan(current.matrix, current.cones + tuple(new))
            steps.append(ExtensionStep("visible", k, w, tuple(f for f, _ in facets),
                                       before, len(current.cones)))
        ok, pair = is_fan(current)
        if not ok:
            raise AssertionError(f"step produced a non-fan: {pair[0]} and {pair[1]}")
        if not is_convex_support(current):
            raise AssertionError("support stopped being convex")

    _check_extension(start, current, ws, check_points)
    return current, steps


def _check_extension(start: Fan, result: Fan, ws: Sequence[tuple[int, ...]], check_points: int) -> None:
    V = result.matrix
    # (b) rays
    expected = {V.column(i) for i in start.rays()} | set(ws)
    got = {V.column(i) for i in result.rays()}
    if got != expected:
        raise AssertionError("ray set of the extension is wrong")
    # (c) old cones survive as faces
    for c in start.cones:
        vecs = {start.matrix.column(i) for i in c}
        if not any(vecs <= {V.column(i) for i in d} for d in result.cones):
            raise AssertionError(f"cone {c} of the initial fan was lost")
    # (a) support is the convex hull of old support and new rays
    if check_points:
        rays = sorted(result.rays())
        for p in _support_points(V, rays, check_points, seed=len(rays)):
            if not covered(result, p):
                raise AssertionError(f"support misses {p}")


def completable_without_new_rays(fan: Fan, candidates: str = "total") -> Optional[Fan]:
    """A complete fan on the same matrix containing every cone of ``fan``, or None.

    ``candidates`` picks the cone pool for the search: ``"total"`` allows any
    full-dimensional simplicial column cone, ``"minimal"`` only those
    containing no further column.
    """
    _require_pure(fan)
    ok, pair = is_fan(fan)
    if not ok:
        raise ValueError(f"not a fan: {pair[0]} and {pair[1]}")
    if is_complete(fan):
        return fan
    total, minimal = candidate_cones(fan.matrix)
    pool = total if candidates == "total" else minimal
    found = complete_extensions(fan.matrix, fan.cones, pool, first_only=True)
    return found[0] if found else None


def facet_obstructions(fan: Fan, facet: Sequence[int]) -> list[tuple[Cone, Optional[Cone]]]:
    """For each full-dimensional candidate through ``facet``, a cone of ``fan`` it meets badly.

    ``None`` in the second slot means the candidate is compatible with the
    whole fan (or lies on the wrong side), so the facet is not obstructed by it.
    """
    V = fan.matrix
    facet = Cone(facet)
    carrier = next(c for c in fan.cones if set(facet) <= set(c))
    apex = next(i for i in carrier if i not in facet)
    u = ridge_normal(V, facet)
    out = []
    total, _ = candidate_cones(V)
    for c in total:
        if not set(facet) < set(c) or c in fan.cones:
            continue
        other = next(i for i in c if i not in facet)
        if dot(u, V.column(other)) * dot(u, V.column(apex)) >= 0:
            continue
        bad = next((d for d in fan.cones if not common_face_intersection(V, c, d)), None)
        out.append((c, bad))
    return out


__all__ = [
    "ConvexityError",
    "ExtensionStep",
    "completable_without_new_rays",
    "cone_contains_point",
    "extend_fan",
    "facet_obstructions",
    "is_convex_support",
    "minimal_containing_cone",
    "stellar_subdivision",
    "visible_facets",
]
