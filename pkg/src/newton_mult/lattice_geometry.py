"""Exact rational geometry of Newton regions.

A Newton region is a polyhedron ``conv(V) + R^n_{>=0}``.  It is stored in a
canonical form: lexicographically sorted irredundant vertices and the sorted
list of its lower-hull facets ``<w, u> >= c`` with ``c > 0`` and primitive
integer normals ``w >= 0``.  The coordinate facets ``u_i >= 0`` are implied
and never stored.  Two regions are equal iff their canonical forms are.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm

import numpy as np

from . import _hull

Vector = tuple  # tuple of Fraction


class GeometryError(ValueError):
    """Raised when a geometric precondition fails."""


class EmptyIdealError(GeometryError):
    pass


class InfiniteCovolumeError(GeometryError):
    pass


def as_vector(coords) -> Vector:
    return tuple(Fraction(x) for x in coords)


@dataclass(frozen=True)
class NewtonRegion:
    dim: int
    vertices: tuple
    facets: tuple  # ((w_1, ..., w_n), c) with int w and Fraction c > 0

    def __post_init__(self):
        if self.dim < 1:
            raise GeometryError("dimension must be positive")

    def __repr__(self):
        vs = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"NewtonRegion(dim={self.dim}, vertices=[{vs}])"

    def contains_point(self, u) -> bool:
        if any(Fraction(x) < 0 for x in u):
            return False
        return all(_dot(w, u) >= c for w, c in self.facets)

    def to_json(self):
        return {
            "dim": self.dim,
            "vertices": [[_fmt(x) for x in v] for v in self.vertices],
        }


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _dot(w, u):
    return sum(Fraction(a) * Fraction(b) for a, b in zip(w, u))


def _check_dims(*regions):
    dims = {P.dim for P in regions}
    if len(dims) != 1:
        raise GeometryError(f"dimension mismatch: {sorted(dims)}")


def _chain_2d(points):
    """Lower-left convex chain of conv(points) + orthant in the plane.

    Returns the vertices ordered by increasing first coordinate.
    """
    pts = sorted(set(points))
    # keep the lowest point per x, then drop points dominated from the left
    stair = []
    for p in pts:
        if stair and p[1] >= stair[-1][1]:
            continue
        stair.append(p)
    hull = []
    for p in stair:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            cross = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _facets_2d(chain):
    facets = []
    for (x1, y1), (x2, y2) in zip(chain, chain[1:]):
        w = _hull._primitive((y1 - y2, x2 - x1))
        facets.append((w, w[0] * x1 + w[1] * y1))
    x0, y0 = chain[0]
    if x0 > 0:
        facets.append(((1, 0), x0))
    xl, yl = chain[-1]
    if yl > 0:
        facets.append(((0, 1), yl))
    return facets


def _build(points, use_dd=False) -> NewtonRegion:
    """Region of rational points; the core hull routine."""
    pts = [as_vector(p) for p in points]
    n = len(pts[0])
    scale = 1
    for p in pts:
        for x in p:
            scale = lcm(scale, x.denominator)
    ipts = sorted(set(tuple(int(x * scale) for x in p) for p in pts))
    if n == 2 and not use_dd:
        verts = _chain_2d(ipts)
        facets = _facets_2d(verts)
    elif n == 1:
        v = min(ipts)
        verts = [v]
        facets = [((1,), v[0])] if v[0] > 0 else []
    else:
        all_facets, inserted = _hull.facets_of_points(ipts)
        verts = _hull.vertices_from_facets(inserted, all_facets, n)
        facets = [(w, c) for w, c in all_facets if c > 0]
    vertices = tuple(sorted(tuple(Fraction(x, scale) for x in v) for v in verts))
    fac = tuple(sorted((tuple(w), Fraction(c, scale)) for w, c in facets))
    return NewtonRegion(n, vertices, fac)


def region_from_generators(gens) -> NewtonRegion:
    """Newton region conv(gens) + orthant with irredundant vertices."""
    gens = list(gens)
    if not gens:
        raise EmptyIdealError("empty ideal: no generators")
    n = len(gens[0])
    for g in gens:
        if len(g) != n:
            raise GeometryError("generators of unequal length")
        if any(Fraction(x) < 0 for x in g):
            raise GeometryError(f"negative coordinate in generator {tuple(g)}")
    return _cached_build(tuple(as_vector(g) for g in gens))


@lru_cache(maxsize=4096)
def _cached_build(gens):
    return _build(gens)


def region_from_generators_dd(gens) -> NewtonRegion:
    """Same as :func:`region_from_generators` but always via double description."""
    return _build(list(gens), use_dd=True)


def orthant(n: int) -> NewtonRegion:
    return region_from_generators([(0,) * n])


def simplex(n: int = 2) -> NewtonRegion:
    """The region {u_1 + ... + u_n >= 1} of the maximal ideal."""
    return region_from_generators([tuple(int(i == j) for j in range(n)) for i in range(n)])


def scale(P: NewtonRegion, t) -> NewtonRegion:
    t = Fraction(t)
    if t <= 0:
        raise GeometryError(f"scale factor must be positive, got {t}")
    vertices = tuple(tuple(t * x for x in v) for v in P.vertices)
    facets = tuple((w, t * c) for w, c in P.facets)
    return NewtonRegion(P.dim, vertices, facets)


def minkowski_sum(P: NewtonRegion, Q: NewtonRegion) -> NewtonRegion:
    _check_dims(P, Q)
    sums = {tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices}
    return _cached_build(tuple(sorted(sums)))


def is_co_bounded(P: NewtonRegion) -> bool:
    n = P.dim
    for i in range(n):
        if not any(all(v[j] == 0 for j in range(n) if j != i) for v in P.vertices):
            return False
    return True


def _require_co_bounded(P: NewtonRegion):
    if not is_co_bounded(P):
        raise InfiniteCovolumeError(f"infinite covolume: {P!r} misses a coordinate axis")


def axis_reach(P: NewtonRegion) -> tuple:
    """Where the region meets each coordinate axis (pure-power degrees)."""
    _require_co_bounded(P)
    n = P.dim
    reach = []
    for i in range(n):
        reach.append(min(v[i] for v in P.vertices if all(v[j] == 0 for j in range(n) if j != i)))
    return tuple(reach)


def _covolume_chain_2d(P: NewtonRegion) -> Fraction:
    chain = sorted(P.vertices)
    area = Fraction(0)
    for (x1, y1), (x2, y2) in zip(chain, chain[1:]):
        area += (x2 - x1) * (y1 + y2) / 2
    return area


def _tight_sets(P: NewtonRegion):
    n = P.dim
    facets = list(P.facets) + [(tuple(int(i == j) for j in range(n)), Fraction(0)) for i in range(n)]
    sets = []
    for w, c in facets:
        sets.append(frozenset(i for i, v in enumerate(P.vertices) if _dot(w, v) == c))
    return facets, sets


def _covolume_cones(P: NewtonRegion) -> Fraction:
    """Covolume as a sum of cones from the origin over the bounded facets.

    The complement of the region in the orthant is star-shaped about the
    origin, and its non-coordinate boundary is the union of the facets with
    c > 0.  Each such facet is triangulated by recursive pulling.
    """
    n = P.dim
    V = P.vertices
    _, sets = _tight_sets(P)

    @lru_cache(maxsize=None)
    def affine_dim(S):
        pts = [V[i] for i in sorted(S)]
        if len(pts) <= 1:
            return len(pts) - 1
        base = pts[0]
        return _hull.rank([[a - b for a, b in zip(p, base)] for p in pts[1:]])

    @lru_cache(maxsize=None)
    def subfaces(S, d):
        out = set()
        for T in sets:
            F = S & T
            if F != S and F and affine_dim(F) == d - 1:
                out.add(F)
        return tuple(sorted(out, key=sorted))

    def pulling(S, d):
        if d == 0:
            return [tuple(S)]
        p = min(S)
        simplices = []
        for F in subfaces(S, d):
            if p in F:
                continue
            for s in pulling(F, d - 1):
                simplices.append((p,) + s)
        return simplices

    total = Fraction(0)
    for (w, c), S in zip(P.facets, sets):
        if c <= 0:
            continue
        for simplex_ids in pulling(S, n - 1):
            total += abs(_hull.determinant([V[i] for i in simplex_ids]))
    return total / factorial(n)


def covolume(P: NewtonRegion) -> Fraction:
    """Exact volume of the bounded complement of P in the orthant."""
    _require_co_bounded(P)
    if P.dim == 1:
        return P.vertices[0][0]
    if P.dim == 2:
        return _covolume_chain_2d(P)
    return _covolume_cones(P)


def covolume_general(P: NewtonRegion) -> Fraction:
    """Covolume via facet triangulation in every dimension (cross-check path)."""
    _require_co_bounded(P)
    if P.dim == 1:
        return P.vertices[0][0]
    return _covolume_cones(P)


def covolume_grid_oracle(P: NewtonRegion, N: int) -> Fraction:
    """Brute-force covolume: grid points of (1/N)Z^n in the box outside P, over N^n.

    For each column over a grid point of the first n-1 coordinates the points
    outside P form an initial segment, whose length is found from the facets.
    """
    _require_co_bounded(P)
    if N < 1:
        raise GeometryError("grid resolution must be positive")
    n = P.dim
    reach = axis_reach(P)
    if n == 1:
        # points j/N < reach
        return Fraction(-((-reach[0] * N) // 1), N)
    # integer data: facet w.(x/N) >= c  <=>  w.x >= c*N
    L = 1
    for _, c in P.facets:
        L = lcm(L, c.denominator)
    sizes = [int(r * N) + 1 for r in reach[:-1]]
    bound = max(int(c * N * L) for _, c in P.facets) + max(max(w) for w, _ in P.facets) * L * N * sum(reach)
    dtype = np.int64 if bound < 2**62 else object
    grids = np.meshgrid(*[np.arange(s, dtype=dtype) for s in sizes], indexing="ij")
    count = np.zeros(sizes, dtype=dtype)
    for w, c in P.facets:
        wn = w[-1]
        rhs = int(c * N * L)
        rest = sum(w[i] * L * grids[i] for i in range(n - 1)) if n > 1 else 0
        r = rhs - rest  # need wn*L*x_n >= r ; outside points: wn*L*x_n < r
        if wn == 0:
            continue
        # number of x_n >= 0 with wn*L*x_n < r is ceil(r / (wn*L)) when r > 0
        q = wn * L
        k = -((-r) // q)
        k = np.where(r > 0, k, 0)
        count = np.maximum(count, k)
    total = int(count.sum())
    return Fraction(total, N**n)


def _subset_sums(regions):
    """Yield (|S|, Minkowski sum over S) for every nonempty subset S."""
    n = len(regions)
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            acc = regions[combo[0]]
            for j in combo[1:]:
                acc = minkowski_sum(acc, regions[j])
            yield size, acc


def mixed_covolume(*regions: NewtonRegion) -> Fraction:
    """Polarized covolume, normalized so that mixed_covolume(P, ..., P) = covolume(P)."""
    if not regions:
        raise GeometryError("mixed covolume needs arguments")
    n = regions[0].dim
    _check_dims(*regions)
    if len(regions) != n:
        raise GeometryError(f"mixed covolume in dimension {n} needs {n} regions, got {len(regions)}")
    for P in regions:
        _require_co_bounded(P)
    total = Fraction(0)
    for size, S in _subset_sums(list(regions)):
        total += (-1) ** (n - size) * covolume(S)
    return total / factorial(n)


def support_value(P: NewtonRegion, w) -> Fraction:
    """min over P of <w, u>; attained at a vertex since w >= 0."""
    w = as_vector(w)
    if len(w) != P.dim:
        raise GeometryError("dimension mismatch")
    if any(x < 0 for x in w) or all(x == 0 for x in w):
        raise GeometryError(f"weight must be nonnegative and nonzero, got {w}")
    return min(_dot(w, v) for v in P.vertices)


def region_contains(P: NewtonRegion, Q: NewtonRegion) -> bool:
    """True iff Q is a subset of P."""
    _check_dims(P, Q)
    return all(_dot(w, v) >= c for v in Q.vertices for w, c in P.facets)


def interior_contains(P: NewtonRegion, u) -> bool:
    """Strict inequality on every lower-hull facet of P."""
    if len(u) != P.dim:
        raise GeometryError("dimension mismatch")
    return all(_dot(w, u) > c for w, c in P.facets)


def same_set(P: NewtonRegion, Q: NewtonRegion) -> bool:
    return region_contains(P, Q) and region_contains(Q, P)
