import cmath
from fractions import Fraction as F

from logahoric import smallmat as sm
from logahoric.exactnum import QQi
from logahoric.liecore import GroupSpec, same_jordan_invariants, weight
from logahoric.loopconn import LaurentConnection, weight_zero_part
from logahoric.normalform import normalize
from logahoric.rhmap import (canonical_h_theta_form, from_betti, hodge_rotation,
                             orbit_to_triple, stabilizer_correspondence,
                             to_betti, validate_enriched)

SPEC2 = GroupSpec("GL", 2)
TH0 = weight(0, 0)
TW = 2j * cmath.pi


def test_canonical_form():
    h, j, dat = canonical_h_theta_form([[0, 1], [1, 0]], TH0)
    assert sm.max_abs(sm.msub(j, [[QQi(-1), 0], [0, QQi(1)]])) == 0
    assert dat.tau.entries == (-1, 1)
    conj = sm.mmul(sm.mmul(h, [[0, 1], [1, 0]]), sm.inverse(h))
    assert sm.max_abs(sm.msub(conj, j)) < 1e-9


def test_orbit_to_triple_resonant():
    phi, pdat, crep = orbit_to_triple(TH0, [[1, 1], [0, 0]])
    assert phi.entries == (0, 1)
    assert abs(complex(crep[0][0]) - 1) < 1e-12


def test_to_betti_resonant():
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    datum = to_betti(a2, TH0, [[1, 0], [0, 0]])
    ok, diags = validate_enriched(datum)
    assert ok, diags
    assert same_jordan_invariants(datum.m, [[1, TW], [0, 1]])


def test_from_betti_resonant_inverse():
    a9, th9 = from_betti([[1, TW], [0, 1]], weight(1, 0), weight(1, 0), None)
    assert th9.entries == (0, 0)
    assert abs(complex(a9.coeff(1)[0][1]) - 1) < 1e-12
    assert abs(complex(a9.coeff(0)[0][0]) - 1) < 1e-12


def test_from_betti_diagonal():
    sigma = (QQi(0, F(1, 4)), QQi(0))
    m = [[cmath.exp(TW * (F(1, 3) + 0.25j)), 0], [0, 1]]
    a, th = from_betti(m, weight(F(1, 3), 0), weight(F(1, 3), 0), sigma)
    assert th.entries == (0, 0)
    assert len(a.coeffs) == 1  # only the residue


def test_roundtrip_m_side():
    a9, th9 = from_betti([[1, TW], [0, 1]], weight(1, 0), weight(1, 0), None)
    datum = to_betti(a9, th9, [[1, 0], [0, 0]])
    assert same_jordan_invariants(datum.m, [[1, TW], [0, 1]])


def test_validate_enriched_rejects_pattern_violation():
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    datum = to_betti(a2, TH0, [[1, 0], [0, 0]])
    bad = [list(row) for row in datum.m]
    holes = [(j, k) for j in range(2) for k in range(2)
             if not datum.parabolic.in_pattern(j, k)]
    j0, k0 = holes[0]
    bad[j0][k0] = 1.0  # outside the block pattern of P_phi
    from dataclasses import replace
    ok, diags = validate_enriched(replace(datum, m=bad))
    assert not ok


def test_stabilizer_dimensions():
    tau2 = weight(1, 0)
    a2 = LaurentConnection({0: [[1, 0], [0, 0]], 1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res2 = normalize(a2, TH0, tau2)
    d1, d2 = stabilizer_correspondence(res2)
    assert d1 == d2 == 2
    tau = weight(F(3, 10), 0)
    a = LaurentConnection({0: [[F(3, 10), 0], [0, 0]],
                           1: [[0, QQi(1)], [0, 0]]}, 4, SPEC2)
    res = normalize(a, TH0, tau)
    d3, d4 = stabilizer_correspondence(res)
    assert d3 == d4 == 2  # maximal torus


def test_hodge_rotation_table():
    tbl = hodge_rotation(weight(1, 0), None, TH0)
    assert tbl["dolbeault"]["weights"].entries == (-1, 0)
    assert tbl["derham"]["weights"].entries == (0, 0)
    assert tbl["betti"]["weights"].entries == (1, 0)
    assert abs(tbl["betti"]["eigenvalues"][0] - 1) < 1e-12
    zero = hodge_rotation(weight(0, 0), None, TH0)
    assert zero["dolbeault"]["weights"].entries == (0, 0)
    assert abs(zero["betti"]["eigenvalues"][1] - 1) < 1e-12


def test_hodge_rotation_weyl_equivariance():
    tau = weight(F(1, 3), F(-1, 2))
    th = weight(F(1, 4), 0)
    sigma = (QQi(0, F(1, 4)), QQi(0, F(-1, 2)))
    t1 = hodge_rotation(tau, sigma, th)
    t2 = hodge_rotation(weight(F(-1, 2), F(1, 3)),
                        (sigma[1], sigma[0]),
                        weight(0, F(1, 4)))
    for key in ("dolbeault", "derham", "betti"):
        w1, w2 = t1[key]["weights"].entries, t2[key]["weights"].entries
        assert (w1[1], w1[0]) == w2
