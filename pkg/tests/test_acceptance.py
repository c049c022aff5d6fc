"""Acceptance gate: one test per criterion, each printing a single
PASS/FAIL line with its stated tolerance and asserting the verdict."""

import sys

import pytest

from logahoric import suites

CRITERIA = [
    (1, suites.criterion_counts,
     "parahoric/parabolic class counts for E8 (exact: 511/256, < 1 s)"),
    (2, suites.criterion_g2_a2,
     "proper affine G2 subset of Levi type A2 (exact, < 1 s)"),
    (3, suites.criterion_roundtrips,
     "200 seeded Betti round trips on GL2/GL3 (tol 1e-8, < 30 s)"),
    (4, suites.criterion_ode_oracle,
     "ODE monodromy oracle on 20 normalized instances (tol 1e-6)"),
    (5, suites.criterion_normalization,
     "normalization: gauge replay exact / 1e-10, resonance dichotomy exact, "
     "idempotence"),
    (6, suites.criterion_gauge_invariance,
     "Betti map invariance under 50 gauge words per instance "
     "(eigenvalues 1e-7, ranks exact)"),
    (7, suites.criterion_quasi_hamiltonian,
     "QH axioms on five (G, P0) pairs (QH2 1e-8, QH3 exact dims, "
     "QH1 1e-4 decreasing, < 2 min)"),
    (8, suites.criterion_gauge_preservation,
     "generator-wise A_theta preservation (exact) and weight-zero "
     "equivariance (1e-10) on 100 cases"),
    (9, suites.criterion_apartment,
     "exhaustive A2 stabilizer lemma over W x |lambda|<=2 x 4 weights (exact)"),
    (10, suites.criterion_stabilizer_dims,
     "monodromy centralizer vs gauge stabilizer dimensions on 30 instances "
     "(exact integers)"),
    (11, suites.criterion_hodge_table,
     "three-realization parameter table on 20 random sets (exact rationals)"),
]


@pytest.mark.parametrize("num,fn,blurb", CRITERIA,
                         ids=[f"criterion_{n:02d}_{f.__name__[10:]}"
                              for n, f, _ in CRITERIA])
def test_criterion(num, fn, blurb, capsys):
    report = fn(seed=42)
    verdict = "PASS" if report["passed"] else "FAIL"
    line = f"ACCEPTANCE {num:2d} {verdict}: {blurb}"
    with capsys.disabled():  # keep the verdict line visible in pytest output
        print(line, flush=True)
    print(line, file=sys.stderr)
    assert report["passed"], report
