"""Monomial valuations and the b-divisor data they see.

A monomial valuation v_w sends x^u to <w, u>; on an ideal it is the support
function of the Newton region at w.  For monomial data these valuations are
enough: two Newton regions coincide iff all their support values agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd
from typing import NamedTuple

from . import lattice_geometry as lg
from . import monomial_ideals as mi
from .graded_systems import DEFAULT_CHAIN, GradedSystem, limit_region, system_chain
from .monomial_ideals import MonomialIdeal
from .multiplier_ideals import asymptotic_multiplier


class ValuationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class ValuationWeight:
    w: tuple

    def __post_init__(self):
        w = tuple(self.w)
        if not w or any(int(x) != x or x < 1 for x in w):
            raise ValuationError(f"weight must be a vector of positive integers, got {w}")
        g = 0
        for x in w:
            g = gcd(g, int(x))
        if g != 1:
            raise ValuationError(f"weight {w} is not primitive")
        object.__setattr__(self, "w", tuple(int(x) for x in w))

    @property
    def dim(self):
        return len(self.w)

    def __str__(self):
        return "(" + ",".join(map(str, self.w)) + ")"


def default_weights(n: int, bound: int = 5) -> list:
    """All primitive positive integer weights with coordinate sum <= bound."""
    out = []
    for w in itertools.product(range(1, bound + 1), repeat=n):
        if sum(w) <= bound:
            g = 0
            for x in w:
                g = gcd(g, x)
            if g == 1:
                out.append(ValuationWeight(w))
    return sorted(out)


def _as_weight(w) -> ValuationWeight:
    return w if isinstance(w, ValuationWeight) else ValuationWeight(tuple(w))


def ord_w(a: MonomialIdeal, w) -> Fraction:
    w = _as_weight(w)
    if w.dim != a.dim:
        raise ValuationError(f"dimension mismatch: weight {w} for an ideal in {a.dim} variables")
    return lg.support_value(mi.newton_region(a), w.w)


def asymptotic_ord_w(S: GradedSystem, w, chain=DEFAULT_CHAIN) -> Fraction:
    """lim ord_w(a_k)/k: exact on a known limit region, else the last chain value."""
    w = _as_weight(w)
    rep = limit_region(S, chain)
    if rep.exact:
        return lg.support_value(rep.region, w.w)
    return lg.support_value(S.scaled_region(rep.chain[-1][0]), w.w)


@dataclass(frozen=True)
class BDivisorSample:
    """Coefficients -ord_w of Z(a) (or of Z(a_.)) at sampled monomial valuations."""

    coefficients: tuple  # ((ValuationWeight, Fraction), ...)

    def __post_init__(self):
        for w, c in self.coefficients:
            if c > 0:
                raise ValuationError(f"positive coefficient {c} at {w}")

    def as_dict(self):
        return dict(self.coefficients)

    def to_json(self):
        return [
            {"weight": list(w.w), "coefficient": {"num": c.numerator, "den": c.denominator}}
            for w, c in self.coefficients
        ]


def bdivisor(a, weights, chain=DEFAULT_CHAIN) -> BDivisorSample:
    """Z(a) for an ideal, or Z(a_.) for a graded system, on the given weights."""
    ws = [_as_weight(w) for w in weights]
    if isinstance(a, MonomialIdeal):
        coeffs = [(w, -ord_w(a, w)) for w in ws]
    else:
        coeffs = [(w, -asymptotic_ord_w(a, w, chain)) for w in ws]
    return BDivisorSample(tuple(coeffs))


def _precision(w: ValuationWeight, k: int) -> Fraction:
    return Fraction(2 * sum(w.w), k)


class VEquivalence(NamedTuple):
    verdict: bool
    exact: bool
    mismatches: list  # [(weight, value1, value2)]


def v_equivalent(S1: GradedSystem, S2: GradedSystem, weights=None, chain=DEFAULT_CHAIN) -> VEquivalence:
    """Compare two systems valuatively.

    With both limit regions known, the regions are compared structurally.
    Otherwise support values are compared at the sampled weights within
    2|w|/k_last.
    """
    if S1.dim != S2.dim:
        raise ValuationError("dimension mismatch")
    chain = system_chain(S2, system_chain(S1, chain))
    r1, r2 = limit_region(S1, chain), limit_region(S2, chain)
    ws = [_as_weight(w) for w in (weights if weights is not None else default_weights(S1.dim))]
    if r1.exact and r2.exact:
        same = lg.same_set(r1.region, r2.region)
        mismatches = [] if same else [
            (w, lg.support_value(r1.region, w.w), lg.support_value(r2.region, w.w))
            for w in ws
            if lg.support_value(r1.region, w.w) != lg.support_value(r2.region, w.w)
        ]
        return VEquivalence(same, True, mismatches)
    k = chain[-1]
    mismatches = []
    for w in ws:
        x = asymptotic_ord_w(S1, w, chain)
        y = asymptotic_ord_w(S2, w, chain)
        if abs(x - y) > _precision(w, k):
            mismatches.append((w, x, y))
    return VEquivalence(not mismatches, False, mismatches)


class ABComparison(NamedTuple):
    ok: bool
    rows: list  # [(weight, a-side value, ord_w(b_k)/k, b stabilized)]


def v_equiv_ab(S: GradedSystem, weights=None, chain=DEFAULT_CHAIN) -> ABComparison:
    """Check lim ord_w(a_k)/k = lim ord_w(b_k)/k at sampled weights.

    The b-side is ord_w(b_k)/k at the last chain index; it never exceeds the
    a-side and must come within 2|w|/k of it.  An unstabilized b_k only gives
    a lower bound on b, so its value is checked one-sidedly.
    """
    chain = system_chain(S, chain)
    k = chain[-1]
    ws = [_as_weight(w) for w in (weights if weights is not None else default_weights(S.dim))]
    b = asymptotic_multiplier(S, k)
    rows = []
    ok = True
    for w in ws:
        a_val = asymptotic_ord_w(S, w, chain)
        b_val = ord_w(b.ideal, w) / k
        if b.stabilized:
            good = 0 <= a_val - b_val <= _precision(w, k)
        else:
            good = b_val <= a_val
        ok &= good
        rows.append((w, a_val, b_val, b.stabilized))
    return ABComparison(ok, rows)


class MissingLimitError(ValuationError):
    pass


def intersection_number(systems, chain=DEFAULT_CHAIN) -> Fraction:
    """<Z(a_1), ..., Z(a_n)> = -n! * mixed covolume of the limit regions."""
    systems = list(systems)
    if not systems:
        raise ValuationError("no systems given")
    n = systems[0].dim
    if len(systems) != n or any(S.dim != n for S in systems):
        raise ValuationError(f"need exactly {n} systems of dimension {n}")
    regions = []
    for S in systems:
        rep = limit_region(S, chain)
        if not rep.exact:
            raise MissingLimitError(
                "limit region not available: supply known_limit or a longer chain"
            )
        regions.append(rep.region)
    return -factorial(n) * lg.mixed_covolume(*regions)
