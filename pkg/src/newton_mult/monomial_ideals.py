"""Monomial ideals as minimal sets of exponent vectors.

Most bulk work goes through a *staircase*: for an ideal in n variables, the
array ``f[u_1, ..., u_{n-1}]`` holding the least exponent ``u_n`` such that
``x^u`` lies in the ideal.  Membership, minimal generators and colength all
read off this array.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, lcm, prod

import numpy as np

from . import lattice_geometry as lg
from .lattice_geometry import NewtonRegion

# staircase entries at or above this value mean "no monomial in this column"
_NONE = np.iinfo(np.int64).max // 4
_MAX_BOX = 20_000_000


class IdealError(ValueError):
    pass


class ZeroIdealError(IdealError):
    pass


class NotPrimaryError(IdealError):
    """The ideal is not primary to the maximal ideal of the origin."""


@dataclass(frozen=True)
class MonomialIdeal:
    dim: int
    generators: tuple  # sorted tuple of int tuples, minimal

    def __repr__(self):
        return f"MonomialIdeal({[list(g) for g in self.generators]})"

    def __len__(self):
        return len(self.generators)

    def to_json(self):
        return {"dim": self.dim, "generators": [list(g) for g in self.generators]}


def _bounds(gens, n):
    return [max(g[i] for g in gens) for i in range(n)]


def _staircase(gens, n, box):
    """Least last exponent per column over ``box`` (sizes of the first n-1 axes)."""
    f = np.full(box, _NONE, dtype=np.int64)
    arr = np.asarray(gens, dtype=np.int64).reshape(-1, n)
    inside = np.all(arr[:, : n - 1] < np.asarray(box), axis=1)
    arr = arr[inside]
    np.minimum.at(f, tuple(arr[:, i] for i in range(n - 1)), arr[:, n - 1])
    for axis in range(n - 1):
        f = np.minimum.accumulate(f, axis=axis)
    return f


def _minimal_from_staircase(f, n):
    """Minimal generators encoded by a (monotone) staircase array."""
    keep = f < _NONE
    for axis in range(n - 1):
        prev = np.full_like(f, _NONE + 1)
        src = [slice(None)] * (n - 1)
        dst = [slice(None)] * (n - 1)
        src[axis] = slice(0, -1)
        dst[axis] = slice(1, None)
        prev[tuple(dst)] = f[tuple(src)]
        keep &= prev > f
    idx = np.argwhere(keep)
    vals = f[keep]
    return [tuple(int(x) for x in row) + (int(v),) for row, v in zip(idx, vals)]


def _minimal_pairwise(gens):
    gens = sorted(set(gens), key=lambda g: (sum(g), g))
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return out


def _minimal(gens, n):
    gens = [tuple(int(x) for x in g) for g in gens]
    if n == 1:
        return [min(gens)]
    box = [b + 1 for b in _bounds(gens, n)[: n - 1]]
    if prod(box) <= _MAX_BOX:
        return _minimal_from_staircase(_staircase(gens, n, box), n)
    return _minimal_pairwise(gens)


def _make(gens, n) -> MonomialIdeal:
    return MonomialIdeal(n, tuple(sorted(_minimal(gens, n))))


def minimalize(gens) -> MonomialIdeal:
    """Drop generators dominated componentwise by another generator."""
    gens = [tuple(g) for g in gens]
    if not gens:
        raise ZeroIdealError("zero ideal: no generators given")
    n = len(gens[0])
    if n < 1:
        raise IdealError("dimension must be positive")
    for g in gens:
        if len(g) != n:
            raise IdealError("generators of unequal length")
        if any(int(x) != x or x < 0 for x in g):
            raise IdealError(f"generator {g} is not a nonnegative integer vector")
    return _make(gens, n)


def ideal(*gens) -> MonomialIdeal:
    """Shorthand: ``ideal((2, 0), (0, 3))``."""
    return minimalize(gens)


def maximal_ideal(n: int = 2) -> MonomialIdeal:
    return minimalize([tuple(int(i == j) for j in range(n)) for i in range(n)])


def unit_ideal(n: int = 2) -> MonomialIdeal:
    return MonomialIdeal(n, ((0,) * n,))


def _check(a: MonomialIdeal, b: MonomialIdeal):
    if a.dim != b.dim:
        raise IdealError(f"dimension mismatch: {a.dim} vs {b.dim}")


def contains_monomial(a: MonomialIdeal, u) -> bool:
    if len(u) != a.dim:
        raise IdealError("dimension mismatch")
    return any(all(x >= y for x, y in zip(u, g)) for g in a.generators)


def contains_ideal(a: MonomialIdeal, b: MonomialIdeal) -> bool:
    """True iff b is a subset of a."""
    return not outside_generators(a, b, limit=1)


def outside_generators(a: MonomialIdeal, b: MonomialIdeal, limit=None):
    """Generators of b that are not in a (at most ``limit`` of them)."""
    _check(a, b)
    n = a.dim
    B = np.asarray(b.generators, dtype=np.int64)
    box = [int(B[:, i].max()) + 1 for i in range(n - 1)]
    if n > 1 and prod(box) <= _MAX_BOX:
        # staircase of a over the box spanned by b: x^u in a iff f[u'] <= u_n
        f = _staircase(a.generators, n, box)
        bad = f[tuple(B[:, i] for i in range(n - 1))] > B[:, n - 1]
        out = [b.generators[i] for i in np.flatnonzero(bad)]
        return out if limit is None else out[:limit]
    A = np.asarray(a.generators, dtype=np.int64)
    out = []
    for start in range(0, len(b.generators), 2048):
        B = np.asarray(b.generators[start : start + 2048], dtype=np.int64)
        inside = np.any(np.all(B[:, None, :] >= A[None, :, :], axis=2), axis=1)
        for g, ok in zip(b.generators[start : start + 2048], inside):
            if not ok:
                out.append(g)
                if limit is not None and len(out) >= limit:
                    return out
    return out


def product(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check(a, b)
    n = a.dim
    A = np.asarray(a.generators, dtype=np.int64)
    B = np.asarray(b.generators, dtype=np.int64)
    if n == 1:
        return MonomialIdeal(1, ((int(A.min() + B.min()),),))
    box = [int(A[:, i].max() + B[:, i].max()) + 1 for i in range(n - 1)]
    if prod(box) > _MAX_BOX:
        sums = {tuple(x + y for x, y in zip(g, h)) for g in a.generators for h in b.generators}
        return MonomialIdeal(n, tuple(sorted(_minimal_pairwise(sums))))
    f = np.full(box, _NONE, dtype=np.int64)
    step = max(1, 4_000_000 // max(1, len(B)))
    for start in range(0, len(A), step):
        S = (A[start : start + step, None, :] + B[None, :, :]).reshape(-1, n)
        np.minimum.at(f, tuple(S[:, i] for i in range(n - 1)), S[:, n - 1])
    for axis in range(n - 1):
        f = np.minimum.accumulate(f, axis=axis)
    return MonomialIdeal(n, tuple(sorted(_minimal_from_staircase(f, n))))


def power(a: MonomialIdeal, k: int) -> MonomialIdeal:
    """a^k by repeated squaring."""
    if k < 1:
        raise IdealError(f"power exponent must be positive, got {k}")
    return _power(a, int(k))


@lru_cache(maxsize=512)
def _power(a, k):
    if k == 1:
        return a
    half = _power(a, k // 2)
    sq = product(half, half)
    return product(sq, a) if k % 2 else sq


def power_naive(a: MonomialIdeal, k: int) -> MonomialIdeal:
    out = a
    for _ in range(k - 1):
        out = product(out, a)
    return out


def ideal_sum(a: MonomialIdeal, b: MonomialIdeal) -> MonomialIdeal:
    _check(a, b)
    return _make(list(a.generators) + list(b.generators), a.dim)


def pure_power_degrees(a: MonomialIdeal):
    """Degree of the pure power of each variable in a, or None if absent."""
    n = a.dim
    out = []
    for i in range(n):
        degs = [g[i] for g in a.generators if all(g[j] == 0 for j in range(n) if j != i)]
        out.append(min(degs) if degs else None)
    return out


def is_m_primary(a: MonomialIdeal) -> bool:
    return all(d is not None for d in pure_power_degrees(a))


def _require_primary(a: MonomialIdeal, what="colength"):
    degs = pure_power_degrees(a)
    missing = [i for i, d in enumerate(degs) if d is None]
    if missing:
        raise NotPrimaryError(
            f"infinite {what}: no pure power of variable {missing[0] + 1} in {a!r}"
        )
    return degs


def colength(a: MonomialIdeal) -> int:
    """Number of monomials outside a."""
    d = _require_primary(a)
    n = a.dim
    if n == 1:
        return d[0]
    f = _staircase(a.generators, n, d[: n - 1])
    return int(f.sum())


def newton_region(a: MonomialIdeal) -> NewtonRegion:
    return _newton_region(a)


@lru_cache(maxsize=4096)
def _newton_region(a):
    return lg.region_from_generators(a.generators)


def samuel_multiplicity(a: MonomialIdeal) -> int:
    """e(a) = n! * covolume of the Newton region."""
    _require_primary(a, "multiplicity")
    e = factorial(a.dim) * lg.covolume(newton_region(a))
    if e.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity {e} for {a!r}")
    return int(e)


def samuel_oracle(a: MonomialIdeal, kmax: int) -> list:
    """n! * colength(a^k) / k^n for k = 1..kmax (tends to e(a))."""
    _require_primary(a)
    if kmax < 1:
        raise IdealError("kmax must be positive")
    n = a.dim
    return [Fraction(factorial(n) * colength(power(a, k)), k**n) for k in range(1, kmax + 1)]


def mixed_multiplicity(*ideals: MonomialIdeal) -> int:
    if not ideals:
        raise IdealError("no ideals given")
    for a in ideals:
        _require_primary(a, "multiplicity")
    n = ideals[0].dim
    e = factorial(n) * lg.mixed_covolume(*(newton_region(a) for a in ideals))
    if e.denominator != 1:
        raise ArithmeticError(f"non-integral mixed multiplicity {e}")
    return int(e)


def order(a: MonomialIdeal) -> int:
    """Order of vanishing: least total degree of a generator."""
    return min(sum(g) for g in a.generators)


def region_ideal(P: NewtonRegion, *, interior: bool = False, shift: int = 0) -> MonomialIdeal:
    """Monomials x^u with u + shift*(1,...,1) in P (or in its interior).

    With ``interior=True, shift=1`` this is Howald's description of the
    multiplier ideal attached to P; with the defaults it is the integral
    closure of any ideal whose Newton region is P.
    """
    n = P.dim
    facets = P.facets
    L = 1
    for _, c in facets:
        L = lcm(L, c.denominator)
    M = [int(-((-max(v[i] for v in P.vertices)) // 1)) for i in range(n)]
    if not facets:
        return unit_ideal(n)
    if n == 1:
        (w, c), = facets
        # w*(u+s) >= c (or >)
        r = c - w[0] * shift
        u = -((-r) // w[0]) if not interior else (r // w[0]) + 1
        return MonomialIdeal(1, ((max(0, int(u)),),))
    box = [m + 1 for m in M[: n - 1]]
    bound = (max(max(w) for w, _ in facets) * L * (sum(M) + n * (shift + 1))
             + max(int(c * L) for _, c in facets))
    dtype = np.int64 if bound < 2**60 else object
    grids = np.meshgrid(*[np.arange(b, dtype=dtype) for b in box], indexing="ij")
    f = np.zeros(box, dtype=dtype)
    blocked = np.zeros(box, dtype=bool)
    for w, c in facets:
        rest = sum(w[i] * L * (grids[i] + shift) for i in range(n - 1))
        R = int(c * L) - rest - w[-1] * L * shift
        q = w[-1] * L
        if q == 0:
            blocked |= (R >= 0) if interior else (R > 0)
            continue
        need = (R // q) + 1 if interior else -((-R) // q)
        f = np.maximum(f, need)
    f = np.where(blocked, _NONE, f).astype(np.int64)
    return MonomialIdeal(n, tuple(sorted(_minimal_from_staircase(f, n))))


def integral_closure(a: MonomialIdeal) -> MonomialIdeal:
    return region_ideal(newton_region(a))


ord = order  # noqa: A001 - the usual name for the order of vanishing
