import cmath
import math
from fractions import Fraction as F

from logahoric import smallmat as sm
from logahoric.liecore import (GroupSpec, ParabolicData, additive_jordan,
                               centralizer_h_theta, grade_by_weight,
                               jordan_invariants, log_semisimple,
                               log_unipotent, mat_exp, multiplicative_jordan,
                               one_param, parabolic_from_weight,
                               same_jordan_invariants, transfer_levi_class,
                               weight)


def test_grade_by_weight_reassembles():
    th = weight(1, F(1, 3), 0)
    m = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    g = grade_by_weight(m, th)
    tot = sm.zeros(3)
    for comp in g.values():
        tot = sm.madd(tot, comp)
    assert tot == m
    lams = set(g)
    assert lams <= {F(0), F(1, 3), F(-1, 3), F(2, 3), F(-2, 3), F(1), F(-1)}


def test_grade_single_root_space():
    g = grade_by_weight([[0, 1], [0, 0]], weight(F(1, 2), 0))
    assert list(g) == [F(1, 2)]


def test_parabolic_patterns():
    borel = parabolic_from_weight(weight(1, 0))
    assert borel.in_pattern(0, 1) and not borel.in_pattern(1, 0)
    assert borel.in_levi(0, 0) and not borel.in_levi(0, 1)
    full = parabolic_from_weight(weight(0, 0))
    assert all(full.in_pattern(j, k) for j in range(2) for k in range(2))
    p21 = parabolic_from_weight(weight(1, 1, 0))
    assert p21.in_levi(0, 1) and p21.in_pattern(0, 2) and not p21.in_pattern(2, 0)


def test_centralizer_h_theta():
    assert centralizer_h_theta(weight(F(1, 2), 0)) == {0: [(0, 0), (1, 1)]}
    cz = centralizer_h_theta(weight(1, 0))
    assert set(cz) == {-1, 0, 1}
    assert centralizer_h_theta(weight(0, 0))[0] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_additive_jordan():
    s, n = additive_jordan([[2, 1], [0, 2]])
    assert sm.max_abs(sm.msub(s, [[2, 0], [0, 2]])) < 1e-9
    assert sm.max_abs(sm.msub(n, [[0, 1], [0, 0]])) < 1e-9
    s2, n2 = additive_jordan([[3, 0], [0, 5]])
    assert sm.max_abs(sm.msub(s2, [[3, 0], [0, 5]])) < 1e-9
    assert sm.max_abs(n2) < 1e-9


def test_multiplicative_jordan():
    gs, gu = multiplicative_jordan([[2, 1], [0, 2]])
    assert sm.max_abs(sm.msub(gs, [[2, 0], [0, 2]])) < 1e-9
    assert sm.max_abs(sm.msub(gu, [[1, 0.5], [0, 1]])) < 1e-9


def test_exp_log():
    assert mat_exp([[0, F(1, 2)], [0, 0]]) == [[1, F(1, 2)], [0, 1]]
    lu = log_unipotent([[1, 1], [0, 1]])
    assert sm.max_abs(sm.msub(lu, [[0, 1], [0, 0]])) < 1e-12
    ls = log_semisimple([[2, 0], [0, 3]])
    assert abs(ls[0][0] - math.log(2)) < 1e-12
    g = [[1, 0.3, -0.1], [0, 1, 0.7], [0, 0, 1]]
    assert sm.max_abs(sm.msub(mat_exp(log_unipotent(g)), g)) < 1e-12


def test_one_param():
    op = one_param(weight(F(1, 2), 0), 4)
    assert abs(op[0][0] - 2) < 1e-12 and abs(op[1][1] - 1) < 1e-12
    op2 = one_param(weight(F(1, 3), 0), 1)
    assert abs(op2[0][0] - 1) < 1e-12
    e = mat_exp(sm.smul(2j * cmath.pi, [[F(1, 3), 0], [0, 0]]))
    assert abs(complex(e[0][0]) - cmath.exp(2j * cmath.pi / 3)) < 1e-12


def test_jordan_invariants():
    ji = jordan_invariants([[2, 1], [0, 2]])
    assert ji[0][1] == 2 and ji[0][2] == (1, 0)
    assert same_jordan_invariants([[2, 1], [0, 2]], [[2, 5], [0, 2]])
    assert not same_jordan_invariants([[2, 1], [0, 2]], [[2, 0], [0, 2]])


def test_transfer_levi_class():
    p0 = ParabolicData(weight(1, 0))
    rep = [[2, 0], [0, 3]]
    out = transfer_levi_class(rep, sm.eye(2), p0)
    assert sm.max_abs(sm.msub(out, rep)) < 1e-12
    g = [[1, 1], [0, 1]]  # g in P0: result conjugate to rep in the Levi
    out2 = transfer_levi_class(rep, g, p0)
    assert same_jordan_invariants(out2, rep)


def test_group_spec():
    assert GroupSpec("GL", 3).n == 3
    assert GroupSpec("SL", 2).family == "SL"
