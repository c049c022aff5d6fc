from fractions import Fraction as F

import numpy as np
import pytest

from logahoric import smallmat as sm
from logahoric.exactnum import QQi
from logahoric.instances import random_orbit, random_parahoric_word, scrambled_connection
from logahoric.liecore import GroupSpec, weight
from logahoric.loopconn import (LaurentConnection, constant_word, exp_loop_word,
                                exp_word, gauge_transform, levi_word, lies_over,
                                membership_A_theta, torus_word, weight_zero_part)

SPEC2 = GroupSpec("GL", 2)


def test_membership_theta_zero_logarithmic():
    a = LaurentConnection({0: [[1, 2], [3, 4]], 2: [[0, 1], [0, 0]]}, 4, SPEC2)
    assert membership_A_theta(a, weight(0, 0)).ok


def test_membership_pole_order():
    # entry E12 at z^-1 has weight -1 + theta_1 - theta_2
    a = LaurentConnection({-1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    assert not membership_A_theta(a, weight(F(1, 2), 0)).ok
    assert membership_A_theta(a, weight(F(3, 2), 0)).ok


def test_weight_zero_part():
    th = weight(1, 0)
    a = LaurentConnection({0: [[F(1, 2), 0], [0, F(-1, 3)]],
                           1: [[0, 0], [QQi(1), 0]]}, 4, SPEC2)
    _, b = weight_zero_part(a, th)
    assert b == [[F(3, 2), 0], [QQi(1), F(-1, 3)]]


def test_weight_zero_theta_zero_is_residue():
    a = LaurentConnection({0: [[1, 2], [3, 4]], 1: [[0, 1], [0, 0]]}, 4, SPEC2)
    _, b = weight_zero_part(a, weight(0, 0))
    assert b == [[1, 2], [3, 4]]


def test_lies_over():
    th = weight(1, 0)
    a = LaurentConnection({0: [[F(1, 2), 0], [0, F(-1, 3)]],
                           1: [[0, 0], [QQi(1), 0]]}, 4, SPEC2)
    assert lies_over(a, th, [[F(3, 2), 0], [1, F(-1, 3)]])
    # distinct eigenvalues: diagonalizable, nilpotent entry irrelevant
    assert lies_over(a, th, [[F(3, 2), 0], [0, F(-1, 3)]])
    ares = LaurentConnection({0: [[0, 0], [0, 1]], 1: [[0, 0], [QQi(1), 0]]}, 4, SPEC2)
    assert lies_over(ares, th, [[1, 0], [1, 1]])
    assert not lies_over(ares, th, [[1, 0], [0, 1]])  # rank test


def test_constant_gauge_and_inverse():
    th = weight(1, 0)
    a = LaurentConnection({0: [[F(1, 2), 0], [0, F(-1, 3)]],
                           1: [[0, 0], [QQi(1), 0]]}, 4, SPEC2)
    c = [[1, 1], [0, 1]]
    a2 = gauge_transform(constant_word(c), a)
    expect = LaurentConnection(
        {i: sm.mmul(sm.mmul(c, a.coeff(i)), sm.inverse(c)) for i in a.coeffs},
        4, SPEC2)
    assert a2.max_abs_diff(expect) == 0
    a3 = gauge_transform(constant_word(sm.inverse(c)), a2)
    assert a3.max_abs_diff(a) == 0


def test_exp_factor_derivative_term():
    z = LaurentConnection({}, 4, SPEC2)
    th = weight(1, 0)
    we = exp_word((0, 1), QQi(F(1, 3)), 1, 2)
    assert we.certify(th)[0]
    z2 = gauge_transform(we, z)
    assert z2.coeffs == {1: [[0, QQi(F(1, 3))], [0, 0]]}
    assert gauge_transform(exp_word((0, 1), QQi(F(-1, 3)), 1, 2), z2).coeffs == {}


def test_diag_exp_factor():
    z = LaurentConnection({}, 4, SPEC2)
    wd = exp_word(None, (F(1, 2), 0), 1, 2)
    z3 = gauge_transform(wd, z)
    assert z3.coeffs == {1: [[F(1, 2), 0], [0, 0]]}


def test_torus_power():
    th = weight(1, 0)
    a = LaurentConnection({0: [[F(1, 2), 0], [0, F(-1, 3)]],
                           1: [[0, 0], [QQi(1), 0]]}, 4, SPEC2)
    at = gauge_transform(torus_word(weight(1, 0)), a)
    assert at.coeff(0) == [[F(3, 2), 0], [QQi(1), F(-1, 3)]]
    assert at.truncation == 3


def test_diagonal_torus_example():
    # g = z^lam, A = R dz/z diagonal -> (R + lam) dz/z
    a = LaurentConnection({0: [[F(1, 3), 0], [0, F(1, 5)]]}, 4, SPEC2)
    at = gauge_transform(torus_word(weight(2, -1)), a)
    assert at.coeff(0) == [[F(7, 3), 0], [0, F(-4, 5)]]


def test_levi_word_matches_conjugation():
    th = weight(1, 0)
    a = LaurentConnection({0: [[F(1, 2), 0], [0, F(-1, 3)]],
                           1: [[0, 0], [QQi(1), 0]]}, 4, SPEC2)
    h = [[2, 1], [1, 1]]
    al = gauge_transform(levi_word(h, th), a)
    al2 = gauge_transform(torus_word(-th) * constant_word(h) * torus_word(th), a)
    assert al.max_abs_diff(al2) == 0


def test_exp_loop_factor_weight_half():
    th2 = weight(F(1, 2), 0)
    wl2 = exp_loop_word([(0, [[0, QQi(1, 1)], [0, 0]])], F(1, 2), th2)
    assert wl2.certify(th2)[0]
    a5 = LaurentConnection({0: [[F(1, 4), 0], [0, F(-1, 4)]]}, 4, SPEC2)
    a6 = gauge_transform(wl2, a5)
    x = [[0, QQi(1, 1)], [0, 0]]
    gmat = sm.madd(sm.eye(2), x)
    expect = sm.mmul(sm.mmul(gmat, a5.coeff(0)), sm.inverse(gmat))
    assert sm.max_abs(sm.msub(a6.coeff(0), expect)) == 0


def test_bracket_grading():
    # product of graded matrix units lands at the sum of the loop weights
    for th in (weight(F(1, 2), 0), weight(1, F(1, 3), F(-1, 4))):
        n = len(th)
        units = [(j, k, i) for j in range(n) for k in range(n)
                 for i in range(-1, 3)]
        for (j1, k1, i1) in units:
            for (j2, k2, i2) in units:
                if k1 != j2:
                    continue  # commutator of these units is a single product
                r1 = i1 + th[j1] - th[k1]
                r2 = i2 + th[j2] - th[k2]
                # [E_{j1 k1} z^{i1}, E_{j2 k2} z^{i2}] has entry (j1,k2) at
                # degree i1+i2; its loop weight is r1 + r2
                assert (i1 + i2) + th[j1] - th[k2] == r1 + r2


def test_generator_classes_preserve_a_theta():
    rng = np.random.default_rng(5)
    for trial in range(10):
        spec = GroupSpec("GL", 2 if trial % 2 == 0 else 3)
        orb = random_orbit(rng, spec)
        a, word, _ = scrambled_connection(rng, orb)
        assert membership_A_theta(a, orb.theta, tol=0.0).ok
        assert word.certify(orb.theta)[0]


def test_gauge_group_action():
    rng = np.random.default_rng(9)
    for trial in range(8):
        spec = GroupSpec("GL", 2 if trial % 2 == 0 else 3)
        orb = random_orbit(rng, spec)
        spread = int(max(orb.theta.entries) - min(orb.theta.entries))
        a = orb.base_connection(4 + spread)
        w1 = random_parahoric_word(rng, orb.theta, spec, length=2)
        w2 = random_parahoric_word(rng, orb.theta, spec, length=2)
        lhs = gauge_transform(w1, gauge_transform(w2, a))
        rhs = gauge_transform(w1 * w2, a)
        assert lhs.max_abs_diff(rhs) < 1e-10, trial


def test_truncation_overflow_is_error():
    from logahoric.loopconn import TruncationOverflow
    a = LaurentConnection({0: [[1, 0], [0, 2]], 4: [[0, 1], [0, 0]]}, 4, SPEC2)
    with pytest.raises(TruncationOverflow):
        gauge_transform(torus_word(weight(1, 0)), a)
