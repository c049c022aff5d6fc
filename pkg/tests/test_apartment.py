import cmath
import itertools
from fractions import Fraction as F

from logahoric import smallmat as sm
from logahoric.apartment import (AffineWeylElement, LaurentGroupElement, act,
                                 alcove_representative, betti_alcove_invariant,
                                 equivalent_weighted_parahorics,
                                 extended_parahoric_membership, from_matrix,
                                 identity_weyl, monomial_element,
                                 stabilizer_check)
from logahoric.liecore import weight
from logahoric.loopconn import MatSeries


def test_act_identity_and_translation():
    th = weight(F(1, 4), F(-1, 4))
    assert act(identity_weyl(2), th).entries == th.entries
    tr = AffineWeylElement((0, 1), (1, -1))
    assert act(tr, th).entries == (F(-3, 4), F(3, 4))


def test_group_action_law():
    th = weight(F(1, 3), F(-1, 2), 0)
    w1 = AffineWeylElement((1, 2, 0), (2, -1, 0))
    w2 = AffineWeylElement((2, 0, 1), (0, 3, -2))
    assert act(w1 * w2, th).entries == act(w1, act(w2, th)).entries


def test_monomial_inverse_exact():
    w1 = AffineWeylElement((1, 2, 0), (2, -1, 0))
    g = monomial_element(w1, torus=(2, 1, 1))
    prod = g.mul(g.inverse()).series.coeffs
    assert set(prod) == {0} and prod[0] == sm.eye(3)


def test_membership_examples():
    thb = weight(F(1, 2), 0)
    bad = from_matrix([[1, 0], [1, 1]])
    cert = extended_parahoric_membership(bad, thb)
    assert not cert and cert.ord_violations == [(1, 0, F(-1, 2))]
    good = LaurentGroupElement(MatSeries(2, {0: [[1, 0], [0, 1]],
                                             1: [[0, 0], [3, 0]]}, K=None))
    assert extended_parahoric_membership(good, thb)


def test_membership_multiplicative():
    thb = weight(F(1, 2), 0)
    u = LaurentGroupElement(MatSeries(2, {0: [[1, 0], [0, 1]],
                                          1: [[0, 0], [3, 0]]}, K=None))
    c = from_matrix([[2, 5], [0, 1]])
    assert extended_parahoric_membership(u, thb)
    assert extended_parahoric_membership(c, thb)
    assert extended_parahoric_membership(u.mul(c), thb)


def test_singular_limit_rejected():
    gz = LaurentGroupElement(MatSeries(2, {0: [[0, 0], [0, 1]],
                                           1: [[1, 0], [0, 0]]}, K=None))
    cert = extended_parahoric_membership(gz, weight(0, 0))
    assert not cert and cert.limit_singular


def test_stabilizer_exhaustive_a1():
    th = weight(F(1, 3), 0)
    fixing = [AffineWeylElement(w, (l0, l1))
              for w in itertools.permutations(range(2))
              for l0 in range(-2, 3) for l1 in range(-2, 3)
              if stabilizer_check(AffineWeylElement(w, (l0, l1)), th)]
    assert len(fixing) == 1  # only the identity fixes (1/3, 0)
    th3 = weight(F(1, 2), F(-1, 2))
    assert stabilizer_check(AffineWeylElement((1, 0), (1, -1)), th3)


def test_equivalence_witness_and_negative():
    g0 = from_matrix([[1, 2], [1, 3]])
    whe = AffineWeylElement((1, 0), (1, 0))
    th = weight(F(1, 3), 0)
    th2 = act(whe, th)
    up = LaurentGroupElement(MatSeries(2, {0: [[1, 0], [0, 2]],
                                           1: [[0, 0], [1, 0]]}, K=None))
    g2 = g0.mul(up).mul(monomial_element(whe).inverse())
    ok, wit = equivalent_weighted_parahorics(g0, th, g2, th2)
    assert ok is True and wit.w == (1, 0)
    ok2, _ = equivalent_weighted_parahorics(g0, th, g0, weight(F(1, 4), 0))
    assert ok2 is False


def test_self_equivalence():
    g = from_matrix([[1, 0], [0, 1]])
    th = weight(F(1, 3), 0)
    ok, wit = equivalent_weighted_parahorics(g, th, g, th)
    assert ok is True and wit.lam == (0, 0)


def test_alcove_representative():
    rep = alcove_representative(weight(F(7, 3), F(-1, 2), 1))
    assert rep.entries == (F(1, 2), F(1, 3), 0)


def test_alcove_invariant_weyl_invariance():
    tw = 2j * cmath.pi
    m = [[cmath.exp(tw / 3), 0], [0, 1]]
    inv = betti_alcove_invariant(m, weight(F(1, 2), 0))
    inv2 = betti_alcove_invariant([[1, 0], [0, cmath.exp(tw / 3)]],
                                 weight(0, F(1, 2)))
    assert inv.entries == inv2.entries


def test_alcove_invariant_resonant_example():
    tw = 2j * cmath.pi
    m = [[1, tw], [0, 1]]
    inv = betti_alcove_invariant(m, weight(1, 0))
    assert inv.entries == (0, 0)  # theta-orbit of 0: tau = (1,0) mod X_*(T)
