import cmath
from fractions import Fraction as F

from logahoric import smallmat as sm
from logahoric.exactnum import QQi
from logahoric.liecore import GroupSpec, mat_exp, weight
from logahoric.loopconn import LaurentConnection, gauge_transform
from logahoric.normalform import (monodromy_of_normal, normalize,
                                  ode_monodromy_oracle, prepare_weight_zero,
                                  shear_to_logarithmic)

SPEC2 = GroupSpec("GL", 2)
TH0 = weight(0, 0)
TW = 2j * cmath.pi


def test_nonresonant_elimination():
    tau = weight(F(3, 10), 0)
    a = LaurentConnection({0: [[F(3, 10), 0], [0, 0]],
                           1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res = normalize(a, TH0, tau)
    assert res.normalized.coeffs == {0: [[F(3, 10), 0], [0, 0]]}
    terms = dict(res.gauge.factors[0].terms)
    assert terms[1][0][1] == QQi(F(-10, 7))  # x = 1/(3/10 - 1)
    # gauge certificate is exact on the rational path
    chk = gauge_transform(res.gauge, a)
    assert chk.max_abs_diff(res.normalized) == 0
    assert res.eliminated == [(0, 1, 1)] and res.retained == []


def test_resonant_retention():
    tau2 = weight(1, 0)
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res2 = normalize(a2, TH0, tau2)
    assert res2.gauge.factors == []
    assert res2.normalized.coeffs == a2.coeffs
    assert res2.retained == [(0, 1, 1)]


def test_idempotence():
    tau2 = weight(1, 0)
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res2 = normalize(a2, TH0, tau2)
    res2b = normalize(res2.normalized, TH0, tau2)
    assert res2b.gauge.factors == []


def test_already_normal_is_fixed():
    tau = weight(F(1, 5), 0)
    a = LaurentConnection({0: [[F(1, 5), 0], [0, 0]]}, 3, SPEC2)
    res = normalize(a, TH0, tau)
    assert res.gauge.factors == [] and res.normalized.coeffs == a.coeffs


def test_shear_to_logarithmic():
    tau2 = weight(1, 0)
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res2 = normalize(a2, TH0, tau2)
    lam, b = shear_to_logarithmic(res2)
    assert lam.entries == (1, 0)
    assert b.coeffs == {0: [[0, QQi(1)], [0, 0]]}


def test_monodromy_resonant():
    tau2 = weight(1, 0)
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res2 = normalize(a2, TH0, tau2)
    m, r, n = monodromy_of_normal(res2)
    assert abs(complex(m[0][0]) - 1) < 1e-12
    assert abs(complex(m[0][1]) - TW) < 1e-12
    assert n == [[0, QQi(1)], [0, 0]]


def test_monodromy_constant_exponent():
    # tau = 0, normalized = R dz/z constant -> M = e^{2 pi i R}
    sigma = (QQi(0, F(1, 4)), QQi(0, F(-1, 2)))
    a = LaurentConnection({0: [[sigma[0], 0], [0, sigma[1]]]}, 3, SPEC2)
    res = normalize(a, TH0, weight(0, 0), sigma)
    m, r, n = monodromy_of_normal(res)
    expect = mat_exp(sm.smul(TW, [[complex(sigma[0]), 0], [0, complex(sigma[1])]]))
    assert sm.max_abs(sm.msub([[complex(x) for x in row] for row in m],
                              expect)) < 1e-12


def test_ode_oracle_zero_and_diagonal():
    z = LaurentConnection({}, 2, SPEC2)
    mo = ode_monodromy_oracle(z, steps=2 ** 10)
    assert sm.max_abs(sm.msub(mo, sm.eye(2))) < 1e-10
    a = LaurentConnection({0: [[F(1, 4), 0], [0, 0]]}, 2, SPEC2)
    mo2 = ode_monodromy_oracle(a, steps=2 ** 12, tol=1e-8)
    assert abs(mo2[0][0] - 1j) < 1e-8 and abs(mo2[1][1] - 1) < 1e-10


def test_ode_oracle_matches_resonant_monodromy():
    tau2 = weight(1, 0)
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res2 = normalize(a2, TH0, tau2)
    m, _, _ = monodromy_of_normal(res2)
    mo = ode_monodromy_oracle(a2, steps=2 ** 12)
    assert sm.max_abs(sm.msub(mo, [[complex(x) for x in row] for row in m])) < 1e-6


def test_prepare_weight_zero_diagonalizes():
    a13 = LaurentConnection({0: [[0, 1], [1, 0]]}, 3, SPEC2)
    a13p, h13, dat13 = prepare_weight_zero(a13, TH0, [[1, 0], [0, -1]])
    b13 = a13p.coeff(0)
    assert abs(complex(b13[0][0]) + 1) < 1e-8
    assert abs(complex(b13[0][1])) < 1e-8


def test_prepare_weight_zero_identity_case():
    # residue already equal to the canonical (eigenvalue-sorted) representative
    a = LaurentConnection({0: [[0, 0], [0, 1]]}, 3, SPEC2)
    a2, h, dat = prepare_weight_zero(a, TH0, [[0, 0], [0, 1]])
    assert h == sm.eye(2)
    assert a2.max_abs_diff(a) == 0
