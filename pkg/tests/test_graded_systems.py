from fractions import Fraction as F

import pytest

from newton_mult import graded_systems as gs
from newton_mult import lattice_geometry as lg
from newton_mult import monomial_ideals as mi


def test_divisibility_chain():
    assert gs.divisibility_chain(1, 2, 6) == (1, 2, 4, 8, 16, 32, 64)
    with pytest.raises(gs.GradedSystemError):
        gs.divisibility_chain(1, 1, 3)


def test_kw1_ideal_matches_closed_form_region():
    S = gs.kw1()
    for k in (1, 2, 5):
        assert mi.newton_region(S.ideal(k)) == S.region(k)


def test_affine_region_matches_ideal():
    x2y = mi.ideal((2, 0), (0, 1))
    S = gs.AffineSystem(((mi.maximal_ideal(2), F(1), F(0)), (x2y, F(1, 2), F(0))))
    for k in (1, 3, 4):
        assert mi.newton_region(S.ideal(k)) == S.region(k)
    # floor exponents are not subadditive here: a_1 * a_1 = m^2 misses a_2
    assert gs.validate_superadditive(S, 8).violation == (1, 1)
    shifted = gs.AffineSystem(((mi.maximal_ideal(2), F(1), F(1)),))
    assert gs.validate_superadditive(shifted, 8)


def test_table_superadditivity_checked():
    m = mi.maximal_ideal(2)
    with pytest.raises(gs.SuperadditivityError):
        gs.TableSystem((m, mi.power(m, 3)))
    T = gs.TableSystem((m, mi.power(m, 2), mi.power(m, 3)))
    assert T.max_index == 3


def test_kw1_multiplicity_table():
    res = gs.asymptotic_multiplicity(gs.kw1())
    assert res.exact and res.estimate == 1
    assert res.table == [(k, 1 + F(3, k)) for k in gs.DEFAULT_CHAIN]


def test_unasserted_kw1_is_estimate_only():
    res = gs.asymptotic_multiplicity(gs.kw1(assert_limit=False))
    assert not res.exact and res.estimate == F(67, 64)


def test_power_system_stabilizes():
    rep = gs.limit_region(gs.power_system(mi.ideal((2, 0), (0, 3))))
    assert rep.stabilized and lg.covolume(rep.region) == 3


def test_wrong_asserted_limit_rejected():
    S = gs.PowerSystem(mi.maximal_ideal(2), lg.scale(lg.simplex(2), F(1, 2)))
    with pytest.raises(gs.InconsistentLimitError):
        gs.limit_region(S)


def test_not_primary_system():
    S = gs.power_system(mi.ideal((1, 0), (0, 1)))
    assert gs.is_stable(S)
    with pytest.raises(mi.NotPrimaryError):
        gs.limit_region(gs.power_system(mi.ideal((1, 1))))


def test_asymptotic_ord():
    assert gs.asymptotic_ord(gs.kw1()) == 1
    assert gs.asymptotic_ord(gs.power_system(mi.ideal((2, 0), (0, 3)))) == 2
