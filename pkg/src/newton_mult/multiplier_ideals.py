"""Multiplier ideals of monomial data and the asymptotic comparisons built on them.

Howald: for a monomial ideal a and c > 0, J(a^c) is spanned by the monomials
x^u with u + (1, ..., 1) in the interior of c * P(a).  Everything in this
module reduces to that criterion applied to suitable Newton regions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import factorial
from typing import NamedTuple, Optional

from . import lattice_geometry as lg
from . import monomial_ideals as mi
from .graded_systems import DEFAULT_CHAIN, GradedSystem, _check_chain, limit_region, system_chain
from .lattice_geometry import NewtonRegion
from .monomial_ideals import MonomialIdeal


class KernelConsistencyError(ArithmeticError):
    """A containment that must hold by theory failed: a kernel bug."""


def howald_multiplier(a: MonomialIdeal, c) -> MonomialIdeal:
    c = Fraction(c)
    if c <= 0:
        raise ValueError(f"coefficient must be positive, got {c}")
    return mi.region_ideal(lg.scale(mi.newton_region(a), c), interior=True, shift=1)


def multiplier_of_region(P: NewtonRegion, c=1) -> MonomialIdeal:
    """Monomials x^u with u + 1 in the interior of c * P."""
    return mi.region_ideal(lg.scale(P, Fraction(c)), interior=True, shift=1)


def demailly_approximant(P: NewtonRegion, m: int) -> MonomialIdeal:
    """J(m * phi) for the toric weight phi with Newton region P."""
    lg._require_co_bounded(P)
    if m < 1:
        raise ValueError("m must be a positive integer")
    return multiplier_of_region(P, m)


def q_chain(c, chain=DEFAULT_CHAIN, max_index=None) -> tuple:
    """Index chain used for J(c * a_.): the given chain scaled by ceil(c).

    Systems known only up to ``max_index`` are truncated there, falling back
    to the unscaled chain when the scaled one would have fewer than two terms.
    """
    base = max(1, math.ceil(Fraction(c)))
    if max_index is None:
        return tuple(base * q for q in chain)
    scaled = tuple(base * q for q in chain if base * q <= max_index)
    if len(scaled) >= 2:
        return scaled
    return tuple(q for q in chain if q <= max_index)


class AsymptoticMultiplier(NamedTuple):
    ideal: MonomialIdeal
    stabilized: bool
    provenance: str  # "chain", "region" or "chain-unstable"
    chain: tuple  # ((q, J_q), ...)
    upper: Optional[MonomialIdeal]  # ideal from an asserted limit region, if any


def asymptotic_multiplier(S: GradedSystem, c, chain=None) -> AsymptoticMultiplier:
    """b_c = J(c * a_.), the largest of J((c/q) * a_q), evaluated along a chain of q.

    The default chain is 1, 2, ..., 64 scaled by ceil(c), so that q runs well
    past c.
    """
    c = Fraction(c)
    if c <= 0:
        raise ValueError(f"coefficient must be positive, got {c}")
    chain = _check_chain(q_chain(c, max_index=S.max_index) if chain is None else chain)
    steps = []
    prev = None
    for q in chain:
        J = multiplier_of_region(S.region(q), c / q)
        if prev is not None and not mi.contains_ideal(J, prev):
            raise KernelConsistencyError(f"J(c/q a_q) decreased along the chain at q={q}")
        steps.append((q, J))
        prev = J
    last = steps[-1][1]
    stabilized = len(steps) >= 2 and steps[-2][1] == last
    provenance = "chain" if stabilized else "chain-unstable"
    upper = None
    if S.known_limit is not None:
        upper = multiplier_of_region(S.known_limit, c)
        for q, J in steps:
            if not mi.contains_ideal(upper, J):
                raise KernelConsistencyError(f"J at q={q} is not inside the limit-region candidate")
        if upper == last:
            stabilized = True
            provenance = "region"
    return AsymptoticMultiplier(last, stabilized, provenance, tuple(steps), upper)


class MultiplicityRow(NamedTuple):
    k: int
    ea: Fraction
    eb: Fraction
    gap: Fraction


class ELSReport(NamedTuple):
    rows: list
    exact_limit: Optional[Fraction]
    last_gap: Fraction
    sandwich: Optional[bool]  # None when no exact limit is available
    b_stabilized: bool

    @property
    def verdict(self) -> bool:
        """Sandwich holds (when checkable) and the gap decreases along the chain."""
        gaps = [r.gap for r in self.rows]
        decreasing = all(x >= y for x, y in zip(gaps, gaps[1:]))
        return decreasing and self.sandwich is not False


def els_check(S: GradedSystem, chain=DEFAULT_CHAIN) -> ELSReport:
    """Compare e(a_k)/k^n with e(b_k)/k^n along a chain.

    The rows bracket the exact limit n! * covol(limit region) whenever that
    limit is known.
    """
    chain = system_chain(S, chain)
    n = S.dim
    rep = limit_region(S, chain)
    exact = factorial(n) * lg.covolume(rep.region) if rep.exact else None
    rows = []
    all_stable = True
    for k in chain:
        ea = factorial(n) * lg.covolume(S.region(k)) / k**n
        b = asymptotic_multiplier(S, k)
        all_stable &= b.stabilized
        eb = Fraction(mi.samuel_multiplicity(b.ideal), k**n)
        if eb > ea:
            raise KernelConsistencyError(f"e(b_{k}) > e(a_{k})")
        rows.append(MultiplicityRow(k, ea, eb, ea - eb))
    sandwich = None
    if exact is not None:
        sandwich = all(r.eb <= exact <= r.ea for r in rows)
    return ELSReport(rows, exact, rows[-1].gap, sandwich, all_stable)


class KWReport(NamedTuple):
    C: Fraction
    D: Optional[Fraction]
    m_range: tuple
    verified: bool
    witnesses: list  # [(m, generator of b not in a_m)]
    convention: str  # "exact" or "ceil"
    failures: dict  # C -> (D tried last, witnesses)
    b_certain: bool


def _b_index(C, D, m, ceil_index):
    c = Fraction(C) * m + Fraction(D)
    return Fraction(math.ceil(c)) if ceil_index else c


def kw_constant(
    S: GradedSystem,
    C_candidates=(1, 2, 3),
    D_max=3,
    m_range=(1, 40),
    D_step=1,
    ceil_index=False,
    max_witnesses=64,
) -> KWReport:
    """Smallest grid pair (C, D) with b_{Cm+D} inside a_m for every m in range."""
    m_lo, m_hi = m_range
    Ds = []
    D = Fraction(D_step)
    while D <= Fraction(D_max):
        Ds.append(D)
        D += Fraction(D_step)
    failures = {}
    b_certain = True
    last_fail = None
    for C in sorted(Fraction(x) for x in C_candidates):
        witnesses = []
        for D in Ds:
            witnesses = []
            for m in range(m_lo, m_hi + 1):
                b = asymptotic_multiplier(S, _b_index(C, D, m, ceil_index))
                b_certain &= b.stabilized
                bad = mi.outside_generators(S.ideal(m), b.ideal)
                witnesses.extend((m, g) for g in bad)
                if bad and len(witnesses) >= max_witnesses:
                    break
            if not witnesses:
                return KWReport(C, D, (m_lo, m_hi), True, [], "ceil" if ceil_index else "exact",
                                failures, b_certain)
        failures[C] = (Ds[-1] if Ds else None, witnesses[:max_witnesses])
        last_fail = C
    C = last_fail
    D, witnesses = failures[C]
    return KWReport(C, D, (m_lo, m_hi), False, witnesses, "ceil" if ceil_index else "exact",
                    failures, b_certain)


class TamenessReport(NamedTuple):
    per_m: list  # [(m, C_m or None)]
    verdict: str  # "tame-with-C" or "inconclusive-growing"
    C: Optional[Fraction]


def tameness_constant(P: NewtonRegion, m: int) -> Optional[Fraction]:
    """Least C >= 0 with (1/m) P_m inside (1 - C/m) P.

    Here P_m is the Newton region of J(m * phi).  The bound is read off the
    facets: a vertex v of (1/m) P_m lies in t * P iff <w, v> >= t * c for every
    facet (w, c) of P.
    """
    Pm = lg.scale(mi.newton_region(demailly_approximant(P, m)), Fraction(1, m))
    if not lg.region_contains(Pm, P):
        raise KernelConsistencyError(f"P is not inside (1/{m}) P_{m}")
    C = Fraction(0)
    for v in Pm.vertices:
        for w, c in P.facets:
            C = max(C, m * (1 - lg._dot(w, v) / c))
    # C = m means 0 * P, the whole orthant, which always contains P_m
    return C


def tameness_check(P: NewtonRegion, m_range=(1, 30)) -> TamenessReport:
    lg._require_co_bounded(P)
    lo, hi = m_range
    per_m = [(m, tameness_constant(P, m)) for m in range(lo, hi + 1)]
    values = [C for _, C in per_m]
    if any(C is None for C in values):
        return TamenessReport(per_m, "inconclusive-growing", None)
    half = len(values) // 2
    first, second = values[: max(1, half)], values[max(1, half):]
    if not second or max(second) <= max(first):
        return TamenessReport(per_m, "tame-with-C", max(values))
    return TamenessReport(per_m, "inconclusive-growing", None)
