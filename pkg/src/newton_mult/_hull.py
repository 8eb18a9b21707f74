"""Exact double-description kernel for regions conv(V) + nonnegative orthant.

Everything here works on integer points; callers clear denominators first.
A half-space ``<w, u> >= c`` is stored as the integer vector ``(w..., c)`` and
lives in the cone

    K = {(w, c) : w >= 0, <w, v> - c >= 0 for every input point v},

whose extreme rays (other than the trivial ray ``(0, ..., 0, -1)``) are exactly
the facet inequalities of the region.  Points are fed to the double
description method lazily: only points that violate the current facet set are
ever inserted, so large staircases with few hull vertices stay cheap.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

_INT64_SAFE = 2**62


def _primitive(vec):
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g > 1:
        return tuple(x // g for x in vec)
    return tuple(vec)


class _Cone:
    """Incremental double description of the cone K above."""

    def __init__(self, n, first_point):
        self.n = n
        self.d = n + 1
        # constraint bits: 0..n-1 are w_i >= 0, then one bit per inserted point
        self.n_constraints = n
        self.points = []
        rays = [tuple([0] * n + [-1])]
        masks = [(1 << n) - 1]
        for i in range(n):
            r = [0] * (n + 1)
            r[i] = 1
            r[n] = first_point[i]
            rays.append(_primitive(r))
            masks.append(((1 << n) - 1) & ~(1 << i))
        self.rays = rays
        self.masks = masks
        self._register(first_point)
        bit = 1 << (self.n_constraints - 1)
        for j in range(1, n + 1):
            self.masks[j] |= bit

    def _register(self, point):
        self.points.append(tuple(point))
        self.n_constraints += 1

    def add_point(self, point):
        a = tuple(point) + (-1,)
        vals = [sum(x * y for x, y in zip(a, r)) for r in self.rays]
        self._register(point)
        bit = 1 << (self.n_constraints - 1)
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        if not neg:
            for i in zero:
                self.masks[i] |= bit
            return
        need = self.d - 2
        new_rays = []
        new_masks = []
        masks = self.masks
        n_rays = len(self.rays)
        for p in pos:
            mp = masks[p]
            for q in neg:
                common = mp & masks[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for r in range(n_rays):
                    if r != p and r != q and masks[r] & common == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                rp, rq = self.rays[p], self.rays[q]
                ray = _primitive([vp * y - vq * x for x, y in zip(rp, rq)])
                new_rays.append(ray)
                new_masks.append(common | bit)
        keep = pos + zero
        for i in zero:
            masks[i] |= bit
        self.rays = [self.rays[i] for i in keep] + new_rays
        self.masks = [masks[i] for i in keep] + new_masks

    def facets(self):
        n = self.n
        return [r for r in self.rays if any(r[:n])]


def _violations(facets, pts_arr, n):
    """Return, for each violated facet, the index of its most violating point."""
    if not facets:
        return []
    W = [f[:n] for f in facets]
    C = [f[n] for f in facets]
    wmax = max(abs(x) for row in W for x in row)
    cmax = max(abs(c) for c in C)
    pmax = int(np.abs(pts_arr).max()) if pts_arr.size else 0
    if wmax * pmax * n + cmax < _INT64_SAFE and pts_arr.dtype != object:
        Wa = np.array(W, dtype=np.int64)
        Ca = np.array(C, dtype=np.int64)
    else:
        Wa = np.array(W, dtype=object)
        Ca = np.array(C, dtype=object)
    slack = pts_arr @ Wa.T - Ca  # shape (points, facets)
    worst = slack.argmin(axis=0)
    out = []
    for j, i in enumerate(worst):
        if slack[i, j] < 0:
            out.append(int(i))
    return out


def facets_of_points(points):
    """Facet inequalities ``(w, c)`` of conv(points) + orthant.

    ``points`` is a nonempty sequence of equal-length integer tuples.  The
    result includes the coordinate facets ``u_i >= 0`` whenever they are
    genuine facets; normals are primitive and sorted.  Also returns the list
    of points that were inserted into the double description (a superset of
    the vertices).
    """
    pts = sorted(set(tuple(int(x) for x in p) for p in points))
    n = len(pts[0])
    big = max(abs(x) for p in pts for x in p)
    dtype = np.int64 if big < 2**40 else object
    arr = np.array(pts, dtype=dtype)
    start = min(range(len(pts)), key=lambda i: (sum(pts[i]), pts[i]))
    cone = _Cone(n, pts[start])
    inserted = {start}
    while True:
        idx = [i for i in sorted(set(_violations(cone.facets(), arr, n))) if i not in inserted]
        if not idx:
            break
        for i in idx:
            cone.add_point(pts[i])
            inserted.add(i)
    facets = sorted((tuple(r[:n]), r[n]) for r in cone.facets())
    return facets, [pts[i] for i in sorted(inserted)]


def rank(rows):
    """Exact rank of a list of rational row vectors."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][col]
        for i in range(r + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def vertices_from_facets(candidates, facets, n):
    """Points among ``candidates`` at which the tight facet normals span R^n."""
    out = []
    for p in candidates:
        tight = [w for w, c in facets if sum(x * y for x, y in zip(w, p)) == c]
        if len(tight) >= n and rank(tight) == n:
            out.append(p)
    return out


def determinant(rows):
    """Exact determinant of a square rational matrix."""
    m = [[Fraction(x) for x in row] for row in rows]
    size = len(m)
    det = Fraction(1)
    for col in range(size):
        piv = None
        for i in range(col, size):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        pv = m[col][col]
        det *= pv
        for i in range(col + 1, size):
            if m[i][col] != 0:
                f = m[i][col] / pv
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return det
