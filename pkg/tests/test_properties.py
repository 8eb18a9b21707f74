from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from newton_mult import lattice_geometry as lg
from newton_mult import monomial_ideals as mi
from newton_mult import multiplier_ideals as mj
from newton_mult import valuations as val
import oracles


@st.composite
def primary_ideals(draw, n=2, max_deg=6):
    gens = [tuple(draw(st.integers(1, max_deg)) if i == j else 0 for i in range(n)) for j in range(n)]
    extra = draw(st.lists(st.tuples(*[st.integers(0, max_deg - 1)] * n), max_size=3))
    return mi.minimalize(gens + [g for g in extra if any(g)])


@settings(max_examples=60, deadline=None)
@given(primary_ideals(), primary_ideals())
def test_product_region_is_minkowski_sum(a, b):
    assert lg.same_set(mi.newton_region(mi.product(a, b)),
                       lg.minkowski_sum(mi.newton_region(a), mi.newton_region(b)))


@settings(max_examples=60, deadline=None)
@given(primary_ideals(), st.fractions(F(1, 4), 6))
def test_howald_against_box(a, c):
    assert list(mj.howald_multiplier(a, c).generators) == oracles.howald(list(a.generators), c)


@settings(max_examples=60, deadline=None)
@given(primary_ideals(3, 4))
def test_integral_closure_idempotent_and_same_multiplicity(a):
    abar = mi.integral_closure(a)
    assert mi.contains_ideal(abar, a)
    assert mi.integral_closure(abar) == abar
    assert mi.samuel_multiplicity(abar) == mi.samuel_multiplicity(a)


@settings(max_examples=60, deadline=None)
@given(primary_ideals(), st.tuples(st.integers(1, 5), st.integers(1, 5)))
def test_ord_w_is_min_over_generators(a, w):
    from math import gcd
    g = gcd(*w)
    w = (w[0] // g, w[1] // g)
    assert val.ord_w(a, w) == min(w[0] * u + w[1] * v for u, v in a.generators)


@settings(max_examples=40, deadline=None)
@given(primary_ideals(), st.integers(2, 6))
def test_multiplier_grows_with_ideal_and_shrinks_with_c(a, k):
    c = F(k, 2)
    J1, J2 = mj.howald_multiplier(a, c), mj.howald_multiplier(a, c + F(1, 3))
    assert mi.contains_ideal(J1, J2)
    assert mi.contains_ideal(J1, mi.integral_closure(mi.power(a, k)))
