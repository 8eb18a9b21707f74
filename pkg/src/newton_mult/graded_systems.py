"""Graded systems k -> a_k of monomial ideals and their limiting Newton regions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, floor
from typing import NamedTuple, Optional

from . import lattice_geometry as lg
from . import monomial_ideals as mi
from .lattice_geometry import NewtonRegion
from .monomial_ideals import MonomialIdeal

DEFAULT_CHAIN = tuple(2**j for j in range(7))


class GradedSystemError(ValueError):
    pass


class SuperadditivityError(GradedSystemError):
    pass


class InconsistentLimitError(GradedSystemError):
    """An asserted limit region is contradicted by some (1/k) P(a_k)."""


def divisibility_chain(base: int = 1, ratio: int = 2, length: int = 6) -> tuple:
    """base, base*ratio, ..., base*ratio**length."""
    if base < 1 or ratio < 2 or length < 0:
        raise GradedSystemError(f"bad chain spec {base}:{ratio}:{length}")
    return tuple(base * ratio**j for j in range(length + 1))


def _check_chain(chain):
    chain = tuple(int(k) for k in chain)
    if not chain or chain[0] < 1:
        raise GradedSystemError("chain must be a nonempty list of positive integers")
    for a, b in zip(chain, chain[1:]):
        if b % a or b == a:
            raise GradedSystemError(f"not a divisibility chain: {a} does not properly divide {b}")
    return chain


def system_chain(S, chain):
    """Validated chain, truncated at the last index a finite table defines."""
    chain = _check_chain(chain)
    if S.max_index is not None:
        chain = tuple(k for k in chain if k <= S.max_index)
        if not chain:
            raise GradedSystemError(f"chain starts past the last table index {S.max_index}")
    return chain


class GradedSystem:
    """Base class: subclasses define ``dim``, ``known_limit`` and ``_ideal``."""

    dim: int
    known_limit: Optional[NewtonRegion]
    max_index: Optional[int] = None

    def ideal(self, k: int) -> MonomialIdeal:
        if k < 1:
            raise GradedSystemError(f"index must be positive, got {k}")
        return _cached_ideal(self, int(k))

    def region(self, k: int) -> NewtonRegion:
        """Newton region of a_k.  Subclasses override with closed forms."""
        return mi.newton_region(self.ideal(k))

    def scaled_region(self, k: int) -> NewtonRegion:
        return lg.scale(self.region(k), Fraction(1, k))

    def m_primary_from(self, probe: int = 12):
        """Least k0 <= probe with a_k m-primary for k0 <= k <= probe, else None."""
        k0 = None
        for k in range(1, probe + 1):
            ok = lg.is_co_bounded(self.region(k))
            if ok and k0 is None:
                k0 = k
            elif not ok:
                k0 = None
        return k0


@lru_cache(maxsize=2048)
def _cached_ideal(system, k):
    return system._ideal(k)


@dataclass(frozen=True)
class PowerSystem(GradedSystem):
    """a_k = base^k."""

    base: MonomialIdeal
    known_limit: Optional[NewtonRegion] = None
    name: str = "power"

    @property
    def dim(self):
        return self.base.dim

    def _ideal(self, k):
        return mi.power(self.base, k)

    def region(self, k):
        return lg.scale(mi.newton_region(self.base), k)


@dataclass(frozen=True)
class AffineSystem(GradedSystem):
    """a_k = prod_j I_j ** max(0, floor(slope_j * k + intercept_j)).

    Superadditivity is not automatic (floor exponents need not be
    subadditive); check with :func:`validate_superadditive`.
    """

    factors: tuple  # ((MonomialIdeal, Fraction slope, Fraction intercept), ...)
    known_limit: Optional[NewtonRegion] = None
    name: str = "affine"

    def __post_init__(self):
        if not self.factors:
            raise GradedSystemError("affine family needs at least one factor")
        dims = {I.dim for I, _, _ in self.factors}
        if len(dims) != 1:
            raise GradedSystemError("factors of unequal dimension")
        for _, s, _ in self.factors:
            if Fraction(s) < 0:
                raise GradedSystemError("slopes must be nonnegative")

    @property
    def dim(self):
        return self.factors[0][0].dim

    def exponents(self, k):
        return [max(0, floor(Fraction(s) * k + Fraction(t))) for _, s, t in self.factors]

    def _ideal(self, k):
        out = mi.unit_ideal(self.dim)
        for (I, _, _), e in zip(self.factors, self.exponents(k)):
            if e:
                out = mi.product(out, mi.power(I, e))
        return out

    def region(self, k):
        out = lg.orthant(self.dim)
        for (I, _, _), e in zip(self.factors, self.exponents(k)):
            if e:
                out = lg.minkowski_sum(out, lg.scale(mi.newton_region(I), e))
        return out


@dataclass(frozen=True)
class TableSystem(GradedSystem):
    """Explicit ideals a_1, ..., a_K; superadditivity checked on construction."""

    table: tuple  # (a_1, ..., a_K)
    known_limit: Optional[NewtonRegion] = None
    name: str = "table"
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if not self.table:
            raise GradedSystemError("empty table")
        if len({a.dim for a in self.table}) != 1:
            raise GradedSystemError("table ideals of unequal dimension")
        if self.check:
            result = validate_superadditive(self, len(self.table))
            if not result:
                m, k = result.violation
                raise SuperadditivityError(f"a_{m} * a_{k} is not contained in a_{m + k}")

    @property
    def dim(self):
        return self.table[0].dim

    @property
    def max_index(self):
        return len(self.table)

    def _ideal(self, k):
        if k > len(self.table):
            raise GradedSystemError(f"table index {k} out of range 1..{len(self.table)}")
        return self.table[k - 1]


@dataclass(frozen=True)
class KW1System(GradedSystem):
    """a_k = m^k (x^k, y) in two variables, with limit region {u_1 + u_2 >= 1}."""

    known_limit: Optional[NewtonRegion] = None
    name: str = "kw1"

    @property
    def dim(self):
        return 2

    def _ideal(self, k):
        return mi.product(mi.power(mi.maximal_ideal(2), k), mi.ideal((k, 0), (0, 1)))

    def region(self, k):
        return lg.region_from_generators([(2 * k, 0), (k, 1), (0, k + 1)])


def power_system(base: MonomialIdeal, known_limit=None) -> PowerSystem:
    return PowerSystem(base, known_limit)


def m_powers(n: int = 2, assert_limit: bool = False) -> PowerSystem:
    """The system a_k = m^k."""
    return PowerSystem(mi.maximal_ideal(n), lg.simplex(n) if assert_limit else None, "m-powers")


def kw1(assert_limit: bool = True) -> KW1System:
    return KW1System(lg.simplex(2) if assert_limit else None)


def builtin(name: str, **kw) -> GradedSystem:
    if name == "kw1":
        return kw1(**kw)
    if name in ("m-powers", "m_powers"):
        return m_powers(**kw)
    raise GradedSystemError(f"unknown builtin system {name!r}")


def system_ideal(S: GradedSystem, k: int) -> MonomialIdeal:
    return S.ideal(k)


class SuperadditivityResult(NamedTuple):
    ok: bool
    violation: Optional[tuple]

    def __bool__(self):
        return self.ok


def validate_superadditive(S: GradedSystem, kmax: int) -> SuperadditivityResult:
    """Check a_m * a_k within a_{m+k} for all m + k <= kmax."""
    for total in range(2, kmax + 1):
        target = S.ideal(total)
        for m in range(1, total // 2 + 1):
            prod = mi.product(S.ideal(m), S.ideal(total - m))
            if not mi.contains_ideal(target, prod):
                return SuperadditivityResult(False, (m, total - m))
    return SuperadditivityResult(True, None)


class LimitRegionReport(NamedTuple):
    region: NewtonRegion
    stabilized: bool
    asserted: bool
    chain: list  # [(k, covolume of (1/k) P(a_k))]

    @property
    def exact(self) -> bool:
        return self.stabilized or self.asserted


def limit_region(S: GradedSystem, chain=DEFAULT_CHAIN) -> LimitRegionReport:
    """Limiting Newton region along a divisibility chain.

    Stabilization is declared when the last two chain terms coincide.  An
    asserted ``known_limit`` is checked against every chain term; it is
    necessary-condition verification only.
    """
    chain = system_chain(S, chain)
    terms = []
    rows = []
    for k in chain:
        R = S.scaled_region(k)
        if not lg.is_co_bounded(R):
            raise mi.NotPrimaryError(f"a_{k} is not m-primary")
        terms.append(R)
        rows.append((k, lg.covolume(R)))
    for (k1, _), (k2, _), R1, R2 in zip(rows, rows[1:], terms, terms[1:]):
        if not lg.region_contains(R2, R1):
            raise SuperadditivityError(
                    f"(1/{k1})P(a_{k1}) not inside (1/{k2})P(a_{k2}): not a graded system"
                )
    stabilized = len(terms) >= 2 and terms[-1] == terms[-2]
    region = terms[-1]
    asserted = False
    if S.known_limit is not None:
        for (k, _), R in zip(rows, terms):
            if not lg.region_contains(S.known_limit, R):
                raise InconsistentLimitError(f"(1/{k})P(a_{k}) is not inside the asserted limit")
        if stabilized and not lg.same_set(region, S.known_limit):
            raise InconsistentLimitError("chain stabilized at a region different from the asserted limit")
        region = S.known_limit
        asserted = True
    return LimitRegionReport(region, stabilized, asserted, rows)


class AsymptoticMultiplicity(NamedTuple):
    estimate: Fraction
    table: list  # [(k, e(a_k)/k^n)]
    exact: bool


def asymptotic_multiplicity(S: GradedSystem, chain=DEFAULT_CHAIN) -> AsymptoticMultiplicity:
    rep = limit_region(S, chain)
    n = S.dim
    table = [(k, factorial(n) * cov) for k, cov in rep.chain]
    if rep.exact:
        return AsymptoticMultiplicity(factorial(n) * lg.covolume(rep.region), table, True)
    return AsymptoticMultiplicity(table[-1][1], table, False)


def asymptotic_ord(S: GradedSystem, chain=DEFAULT_CHAIN) -> Fraction:
    rep = limit_region(S, chain)
    ones = (1,) * S.dim
    if rep.exact:
        return lg.support_value(rep.region, ones)
    k = rep.chain[-1][0]
    return lg.support_value(S.scaled_region(k), ones)


def is_stable(S: GradedSystem, chain=DEFAULT_CHAIN) -> bool:
    # a_k is never the zero ideal here: MonomialIdeal has at least one generator
    return asymptotic_ord(S, chain) > 0
