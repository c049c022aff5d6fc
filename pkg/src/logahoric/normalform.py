"""Weight-graded normalization of tame parahoric connections, shearing to
logarithmic form, and monodromy of normalized connections.

The normalization runs level by level over the positive loop weights
r = theta_j - theta_k + i realized below the truncation order.  At each level
the correction exp(X) is found by solving (ad_{A(0)} - z d/dz) X = a on the
non-resonant joint eigenspaces; the resonant components (ad_{tau+sigma}
eigenvalue equal to the z-degree) are retained.  An independent ODE monodromy
oracle integrates around the unit circle for cross-checking.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import smallmat as sm
from .exactnum import QQi, is_exact
from .liecore import (GroupSpec, ParabolicData, WeightVector, LieError,
                      mat_exp, multiplicative_jordan)
from .loopconn import (GaugeWord, LaurentConnection, MatSeries, exp_loop_word,
                       gauge_transform, identity_word, membership_A_theta,
                       torus_word, weight_zero_part)

RES_TOL = 1e-8  # resonance decision on the float path


class NormalizationError(ValueError):
    pass


@dataclass
class NormalFormResult:
    normalized: LaurentConnection
    gauge: GaugeWord
    levels_processed: List[Fraction]
    theta: WeightVector
    tau: WeightVector
    sigma: tuple
    retained: List[Tuple[int, int, int]] = field(default_factory=list)
    eliminated: List[Tuple[int, int, int]] = field(default_factory=list)


def _sigma_tuple(sigma, n) -> tuple:
    """Normalize sigma to a length-n tuple of scalars (QQi exact when possible)."""
    if sigma is None:
        return tuple(QQi(0) for _ in range(n))
    out = []
    for s in sigma:
        if is_exact(s):
            s = QQi(s) if not isinstance(s, QQi) else s
        out.append(s)
    return tuple(out)


def _resonance_defect(tau: WeightVector, sigma, j, k, i):
    """c = mu - i for the basis element E_jk z^i, mu = ad_{tau+sigma} eigenvalue.
    Exact when sigma is exact."""
    c_re = tau[j] - tau[k] - i
    c_im = sigma[j] - sigma[k]
    if isinstance(c_im, QQi):
        return QQi(c_re) + c_im
    return complex(c_re) + complex(c_im)


def _is_resonant(c) -> bool:
    if isinstance(c, (QQi, int, Fraction)):
        return c == 0
    return abs(complex(c)) <= RES_TOL


def check_weight_zero_form(A: LaurentConnection, theta: WeightVector,
                           tau: WeightVector, sigma, tol=1e-10):
    """Precondition of normalize: the weight-zero part of A must equal
    (tau + sigma + sum a_i z^i) dz/z with n = sum a_i nilpotent commuting with
    phi = theta + tau and sigma."""
    n = A.n
    sigma = _sigma_tuple(sigma, n)
    _, b = weight_zero_part(A, theta)
    nil = sm.mcopy(b)
    for j in range(n):
        want = theta[j] + tau[j] + sigma[j]
        if abs(complex(b[j][j]) - complex(want)) > tol:
            raise NormalizationError(
                f"weight-zero diagonal entry {j} is {b[j][j]}, expected theta+tau+sigma = {want}")
        nil[j][j] = 0
    for j in range(n):
        for k in range(n):
            if j != k and abs(complex(nil[j][k])) > tol:
                if theta[j] + tau[j] != theta[k] + tau[k]:
                    raise NormalizationError(
                        f"nilpotent part has entry ({j},{k}) not commuting with phi")
                if abs(complex(sigma[j]) - complex(sigma[k])) > tol:
                    raise NormalizationError(
                        f"nilpotent part has entry ({j},{k}) not commuting with sigma")
    p = sm.to_numpy(nil)
    if np.linalg.norm(np.linalg.matrix_power(p, n)) > 1e-8 * max(1.0, np.linalg.norm(p)) ** n:
        raise NormalizationError("weight-zero off-diagonal part is not nilpotent")
    return nil, sigma


def _realized_levels(theta: WeightVector, truncation: int) -> List[Fraction]:
    nn = len(theta)
    spread = max(theta.entries) - min(theta.entries)
    i_min = -int(math.ceil(spread))
    out = set()
    for i in range(i_min, truncation + 1):
        for j in range(nn):
            for k in range(nn):
                r = theta[j] - theta[k] + i
                if r > 0:
                    out.add(r)
    return sorted(out)


def _level_positions(theta: WeightVector, r: Fraction, truncation: int):
    nn = len(theta)
    spread = max(theta.entries) - min(theta.entries)
    i_min = -int(math.ceil(spread))
    pos = []
    for i in range(i_min, truncation + 1):
        for j in range(nn):
            for k in range(nn):
                if theta[j] - theta[k] + i == r:
                    pos.append((j, k, i))
    return pos


def _apply_s_operator(x_coeffs: Dict[int, list], p0: MatSeries, n: int) -> Dict[int, list]:
    """S(X) = [P0, X] - z X' on a loop-algebra element given by degree."""
    xs = MatSeries(n, {i: sm.mcopy(m) for i, m in x_coeffs.items()}, K=None)
    comm = p0.mul(xs).add(MatSeries(n, {i: sm.mneg(m) for i, m in xs.mul(p0).coeffs.items()},
                                    None))
    out = comm.add(MatSeries(n, {i: sm.mneg(m) for i, m in xs.zderiv().coeffs.items()}, None))
    return out.coeffs


def normalize(A: LaurentConnection, theta: WeightVector, tau: WeightVector,
              sigma=None) -> NormalFormResult:
    """Normalize A in A_theta level by level; requires the weight-zero part
    already in the (tau + sigma + nilpotent) form."""
    n = A.n
    cert = membership_A_theta(A, theta)
    if not cert.ok:
        raise NormalizationError(f"input is not in A_theta: {cert.violations[:3]}")
    nil, sigma = check_weight_zero_form(A, theta, tau, sigma)

    # P0 = tau + sigma + sum a_i z^i (the weight-zero dz/z coefficient,
    # with the nilpotent entries pushed to their ad_theta degrees)
    p0_coeffs: Dict[int, list] = {0: sm.zeros(n)}
    for j in range(n):
        p0_coeffs[0][j][j] = tau[j] + sigma[j] if isinstance(sigma[j], QQi) \
            else complex(tau[j]) + complex(sigma[j])
    for j in range(n):
        for k in range(n):
            if j != k and nil[j][k]:
                d = theta[k] - theta[j]
                assert d.denominator == 1
                tgt = p0_coeffs.setdefault(int(d), sm.zeros(n))
                tgt[j][k] = nil[j][k]
    p0 = MatSeries(n, p0_coeffs, K=None)

    acur = A
    word = identity_word()
    levels_processed: List[Fraction] = []
    retained: List[Tuple[int, int, int]] = []
    eliminated: List[Tuple[int, int, int]] = []

    for r in _realized_levels(theta, A.truncation):
        pos = [(j, k, i) for (j, k, i) in _level_positions(theta, r, A.truncation)
               if i <= acur.truncation]
        nonres = [(j, k, i) for (j, k, i) in pos
                  if not _is_resonant(_resonance_defect(tau, sigma, j, k, i))]
        a_vec = [acur.coeff(i)[j][k] for (j, k, i) in nonres]
        # inexact leftovers below the elimination tolerance count as zero
        a_vec = [0 if (v and not is_exact(v) and abs(complex(v)) < 1e-12) else v
                 for v in a_vec]
        for (j, k, i) in pos:
            if (j, k, i) not in nonres and acur.coeff(i)[j][k]:
                retained.append((j, k, i))
        if all(not v for v in a_vec):
            continue
        levels_processed.append(r)
        # matrix of S on the nonresonant positions (dropping outputs beyond
        # the representable degree range, consistent with gauge truncation)
        index = {p: col for col, p in enumerate(nonres)}
        smat = sm.zeros(len(nonres), len(nonres))
        for col, (j, k, i) in enumerate(nonres):
            e = sm.zeros(n)
            e[j][k] = 1
            img = _apply_s_operator({i: e}, p0, n)
            for d, m in img.items():
                for jj in range(n):
                    for kk in range(n):
                        if m[jj][kk] and (jj, kk, d) in index:
                            row = index[(jj, kk, d)]
                            smat[row][col] = smat[row][col] + m[jj][kk]
        x_vec = sm.solve(smat, [[v] for v in a_vec])
        x_coeffs: Dict[int, list] = {}
        any_nonzero = False
        for col, (j, k, i) in enumerate(nonres):
            v = x_vec[col][0]
            if v:
                x_coeffs.setdefault(i, sm.zeros(n))[j][k] = v
                any_nonzero = True
                eliminated.append((j, k, i))
        if not any_nonzero:
            continue
        factor = exp_loop_word(sorted(x_coeffs.items()), r, theta)
        acur = gauge_transform(factor, acur)
        word = factor * word
        # the level-r piece must now be purely resonant
        for (j, k, i) in nonres:
            v = acur.coeff(i)[j][k]
            if is_exact(v):
                assert not v, f"exact normalization left residue at {(j, k, i)}"
            else:
                assert abs(complex(v)) < 1e-9, \
                    f"normalization left residue {v} at {(j, k, i)}"

    # final certificate: every nonzero coefficient is resonant (inexact
    # entries below the elimination tolerance count as zero)
    for i, m in acur.coeffs.items():
        for j in range(n):
            for k in range(n):
                v = m[j][k]
                if not v or (not is_exact(v) and abs(complex(v)) < 1e-9):
                    continue
                if j == k and i == 0:
                    continue
                c = _resonance_defect(tau, sigma, j, k, i)
                assert _is_resonant(c), \
                    f"non-resonant coefficient survived at {(j, k, i)}: defect {c}"
    return NormalFormResult(normalized=acur, gauge=word,
                            levels_processed=levels_processed, theta=theta,
                            tau=tau, sigma=sigma, retained=sorted(set(retained)),
                            eliminated=sorted(set(eliminated)))


# ---------------------------------------------------------------------------
# weight-zero preparation
# ---------------------------------------------------------------------------

def prepare_weight_zero(A: LaurentConnection, theta: WeightVector, orbit_rep,
                        tol=1e-8):
    """Gauge A by z^{-theta} h z^{theta}, h in the centralizer of e^{2 pi i
    theta}, so its weight-zero element becomes the canonical Jordan-form
    representative shared with orbit_rep.  Returns (A', h, canonical data)."""
    from .rhmap import canonical_h_theta_form
    from .loopconn import levi_word, lies_over

    _, b = weight_zero_part(A, theta)
    hb, jb, datb = canonical_h_theta_form(b, theta)
    hr, jr, datr = canonical_h_theta_form(orbit_rep, theta)
    if sm.max_abs(sm.msub(jb, jr)) > tol:
        raise NormalizationError("connection does not lie over the orbit of orbit_rep")
    if sm.max_abs(sm.msub(sm.mmul(sm.mmul(hb, b), sm.inverse(hb)), jb)) > tol:
        raise NormalizationError("canonicalization failed to reach the Jordan form")
    if all(not isinstance(x, (float, complex)) for row in b for x in row) and b == jr:
        # already the exact representative: keep the exact path
        return A, sm.eye(A.n), datr
    word = levi_word(hb, theta)
    ok, report = word.certify(theta)
    if not ok:
        raise NormalizationError(f"canonicalizing h left the centralizer: {report}")
    a2 = gauge_transform(word, A)
    return a2, hb, datb


# ---------------------------------------------------------------------------
# shearing and monodromy
# ---------------------------------------------------------------------------

def shear_to_logarithmic(result: NormalFormResult, tau: WeightVector = None):
    """Twist by z^{-lambda}, lambda_j = floor(tau_j), so the normalized
    connection becomes logarithmic with residue semisimple part tau - lambda
    + sigma (entries of tau - lambda in [0,1))."""
    tau = result.tau if tau is None else tau
    lam = WeightVector(tuple(Fraction(math.floor(t)) for t in tau.entries))
    b = gauge_transform(torus_word(-lam), result.normalized)
    for i in b.coeffs:
        assert i >= 0, f"shear left a polar coefficient at z^{i}"
    res = b.coeff(0)
    for j in range(b.n):
        want = tau[j] - lam[j] + result.sigma[j]
        assert abs(complex(res[j][j]) - complex(want)) < 1e-9
        assert 0 <= tau[j] - lam[j] < 1
    return lam, b


def monodromy_of_normal(result: NormalFormResult, tau: WeightVector = None,
                        sigma=None):
    """(M, R, N) with N the sum of retained coefficients, R = sigma + N and
    M = e^{2 pi i tau} e^{2 pi i R}; the normalized connection has fundamental
    solution z^tau z^R."""
    tau = result.tau if tau is None else tau
    sigma = result.sigma if sigma is None else _sigma_tuple(sigma, result.normalized.n)
    n = result.normalized.n
    nmat = sm.zeros(n)
    for i, m in result.normalized.coeffs.items():
        nmat = sm.madd(nmat, m)
    for j in range(n):
        nmat[j][j] = nmat[j][j] - tau[j] - sigma[j]
    r = sm.mcopy(nmat)
    for j in range(n):
        r[j][j] = r[j][j] + sigma[j]

    t = [[cmath.exp(2j * cmath.pi * complex(tau[j])) if j == k else 0 for k in range(n)]
         for j in range(n)]
    tinv = [[cmath.exp(-2j * cmath.pi * complex(tau[j])) if j == k else 0 for k in range(n)]
            for j in range(n)]
    # Ad_t(N) = N: integer ad_tau weights on the retained coefficients
    adt = sm.mmul(sm.mmul(t, nmat), tinv)
    assert sm.max_abs(sm.msub(adt, nmat)) < 1e-10, "retained N is not Ad_t-invariant"

    e_sigma = [[cmath.exp(2j * cmath.pi * complex(sigma[j])) if j == k else 0
                for k in range(n)] for j in range(n)]
    e_n = mat_exp(sm.smul(2j * cmath.pi, nmat))
    e_r = sm.mmul(e_sigma, e_n)  # sigma and N commute
    m = sm.mmul(t, e_r)

    # M in P_phi, phi = theta + tau
    phi = result.theta + tau
    pdat = ParabolicData(phi)
    viol = pdat.violations(m, tol=1e-9)
    assert not viol, f"monodromy left the parabolic of phi at entries {viol}"

    # Jordan decomposition check: M_s = t e_sigma, M_u = e_n
    ms = sm.mmul(t, e_sigma)
    mu = sm.mmul(sm.inverse(ms), m)
    assert sm.max_abs(sm.msub(mu, e_n)) < 1e-9
    s_chk, u_chk = multiplicative_jordan(m)
    assert sm.max_abs(sm.msub(s_chk, ms)) < 1e-7, "M_s mismatch with Jordan decomposition"
    return m, r, nmat


# ---------------------------------------------------------------------------
# ODE oracle
# ---------------------------------------------------------------------------

def ode_monodromy_oracle(A: LaurentConnection, base_point=1.0, steps=2 ** 14,
                         tol=None):
    """Monodromy of dPhi = (sum A_i z^i) Phi dz/z around |z| = 1 by RK4 on
    the circle z = base * e^{i phi}, Phi(0) = Id; right-multiplier convention
    in the basis at the base point.  Richardson half-step estimate optional."""
    if steps % 2:
        raise ValueError("step count must be even")
    n = A.n
    coeffs = {i: sm.to_numpy(m) for i, m in A.coeffs.items()}

    def p_at(z):
        out = np.zeros((n, n), dtype=complex)
        for i, m in coeffs.items():
            out += (z ** i) * m
        return out

    def run(nsteps):
        h = 2 * math.pi / nsteps
        phi_mat = np.eye(n, dtype=complex)
        for s in range(nsteps):
            t0 = s * h

            def f(t, y):
                z = base_point * cmath.exp(1j * t)
                return 1j * (p_at(z) @ y)

            k1 = f(t0, phi_mat)
            k2 = f(t0 + h / 2, phi_mat + h / 2 * k1)
            k3 = f(t0 + h / 2, phi_mat + h / 2 * k2)
            k4 = f(t0 + h, phi_mat + h * k3)
            phi_mat = phi_mat + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return phi_mat

    full = run(steps)
    if tol is not None:
        half = run(steps // 2)
        est = np.max(np.abs(full - half)) / 15.0
        if est > tol:
            raise RuntimeError(
                f"ODE oracle step budget insufficient: error estimate {est:.3e} > {tol:.3e}")
    return sm.from_numpy(full)
