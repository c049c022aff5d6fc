"""Numerical verification of the quasi-Hamiltonian structure on G x P0.

Everything runs on the cover G x P0 (trivialized tangents (gamma_bar',
P') = (C'C^{-1}, p^{-1}p')) rather than on the quotient M = G x_U P0: the
two-form is pr^* omega = 1/2 (gb, Ad_p gb) + 1/2 (gb, P + Ad_p P), the moment
map is (C,p) -> (C^{-1} p C, pi(p)^{-1}), and the three axioms are checked in
pulled-back form -- QH2 analytically, QH1 by finite differences of the
two-form against mu^* eta, QH3 by rank computation of ker omega intersect ker dmu
against the U-orbit tangent space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import expm

from . import smallmat as sm
from .liecore import GroupSpec, ParabolicData, WeightVector


class QHError(ValueError):
    pass


def _np(m):
    return sm.to_numpy(m) if isinstance(m, list) else np.asarray(m, dtype=complex)


def pair(a, b, scale=1.0):
    """The invariant bilinear form: (a, b) = scale * tr(ab)."""
    return scale * complex(np.trace(_np(a) @ _np(b)))


@dataclass
class QHPoint:
    c: np.ndarray
    p: np.ndarray
    parabolic: ParabolicData
    spec: GroupSpec

    def __post_init__(self):
        self.c = _np(self.c)
        self.p = _np(self.p)
        n = self.spec.n
        viol = self.parabolic.violations(self.p.tolist(), tol=1e-10)
        if viol:
            raise QHError(f"p is outside the P0 block pattern at {viol}")
        # Levi decomposition p = h u with h block-diagonal, u block-unipotent
        self.h = _np(self.parabolic.levi_project(self.p.tolist()))
        if abs(np.linalg.det(self.h)) < 1e-12:
            raise QHError("Levi part of p is singular")
        self.u = np.linalg.solve(self.h, self.p)
        self.cinv = np.linalg.inv(self.c)
        self.pinv = np.linalg.inv(self.p)


@dataclass
class QHTangent:
    gb: np.ndarray   # gamma_bar' = C' C^{-1} in g
    pp: np.ndarray   # P' = p^{-1} p' in p0

    def __post_init__(self):
        self.gb = _np(self.gb)
        self.pp = _np(self.pp)


def _check_tangent(point: QHPoint, t: QHTangent):
    viol = point.parabolic.violations(t.pp.tolist(), tol=1e-10)
    if viol:
        raise QHError(f"P' leaves the parabolic pattern at {viol}")


def two_form(point: QHPoint, x: QHTangent, y: QHTangent, scale=1.0) -> complex:
    """omega_hat(X, Y), the antisymmetrized evaluation of
    1/2 (gb, Ad_p gb) + 1/2 (gb, P + Ad_p P)."""
    _check_tangent(point, x)
    _check_tangent(point, y)
    p, pinv = point.p, point.pinv

    def ad_p(a):
        return p @ a @ pinv

    term1 = 0.5 * (pair(x.gb, ad_p(y.gb), scale) - pair(y.gb, ad_p(x.gb), scale))
    term2 = 0.5 * (pair(x.gb, y.pp + ad_p(y.pp), scale)
                   - pair(y.gb, x.pp + ad_p(x.pp), scale))
    return term1 + term2


def two_form_expanded(point: QHPoint, x: QHTangent, y: QHTangent, scale=1.0) -> complex:
    """The proof's expansion 2 omega(X,Y) = 2(gb', Udot) + (u gb' u^{-1} +
    h^{-1} gb' h, hdot), valid for X in ker(d mu_hat)."""
    h, u = point.h, point.u
    hdot = levi_unipotent_split(point, y)[0]
    udot = levi_unipotent_split(point, y)[1]
    val = 2 * pair(x.gb, udot, scale) \
        + pair(u @ x.gb @ np.linalg.inv(u) + np.linalg.inv(h) @ x.gb @ h, hdot, scale)
    return 0.5 * val


def levi_unipotent_split(point: QHPoint, t: QHTangent):
    """P' = Ad_{u^{-1}} h' + U' with h' = pi(P') in Lie L, U' in Lie U."""
    hprime = _np(point.parabolic.levi_project(t.pp.tolist()))
    uinv = np.linalg.inv(point.u)
    uprime = t.pp - uinv @ hprime @ point.u
    return hprime, uprime


def moment(point: QHPoint):
    """mu_hat(C, p) = (C^{-1} p C, pi(p)^{-1})."""
    return point.cinv @ point.p @ point.c, np.linalg.inv(point.h)


def d_moment(point: QHPoint, t: QHTangent):
    """Left-trivialized derivative of the moment map along t:
    (mu_G^{-1} mu_G', mu_L^{-1} mu_L')."""
    c, cinv, p = point.c, point.cinv, point.p
    mug = cinv @ p @ c
    mug_prime = cinv @ (p @ t.pp + p @ t.gb - t.gb @ p) @ c
    dg = np.linalg.inv(mug) @ mug_prime
    hprime = _np(point.parabolic.levi_project(t.pp.tolist()))  # h^{-1} h'
    # mu_L = h^{-1}: mu_L^{-1} mu_L' = h (-h^{-1} h' h^{-1}) = -h' ... trivialized:
    # mu_L^{-1} d(mu_L) = -Ad_h(h^{-1} h')
    dl = -point.h @ hprime @ np.linalg.inv(point.h)
    return dg, dl


def fundamental_field(point: QHPoint, x_g: Optional[np.ndarray],
                      x_l: Optional[np.ndarray]) -> QHTangent:
    """v_X for X = (X_G, X_L) in g + Lie L; minus the flow tangent, so that
    X -> v_X is a Lie algebra homomorphism.  G acts by g(C,p) = (Cg^{-1}, p),
    L by q(C,p) = (qC, q p q^{-1})."""
    n = point.spec.n
    gb = np.zeros((n, n), dtype=complex)
    pp = np.zeros((n, n), dtype=complex)
    if x_g is not None:
        x_g = _np(x_g)
        gb += point.c @ x_g @ point.cinv
    if x_l is not None:
        x_l = _np(x_l)
        gb += -x_l
        pp += x_l - point.pinv @ x_l @ point.p
    return QHTangent(gb, pp)


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------

def check_qh2(point: QHPoint, x_g, x_l, sample_tangents: List[QHTangent],
              scale=1.0, fd_check=True) -> float:
    """max over the samples Y of |omega(v_X, Y) - 1/2 ((Theta+Theta_bar)(d mu Y), X)|."""
    vx = fundamental_field(point, x_g, x_l)
    resid = 0.0
    for y in sample_tangents:
        lhs = two_form(point, vx, y, scale)
        dg, dl = d_moment(point, y)
        if fd_check:
            _fd_dmoment_check(point, y)
        mug, mul = moment(point)
        rhs = 0.0
        if x_g is not None:
            # Theta(dmu) = dg (left-trivialized), Theta_bar(dmu) = Ad_mug dg
            rhs += 0.5 * pair(dg + mug @ dg @ np.linalg.inv(mug), x_g, scale)
        if x_l is not None:
            rhs += 0.5 * pair(dl + mul @ dl @ np.linalg.inv(mul), x_l, scale)
        resid = max(resid, abs(lhs - rhs))
    return resid


def _fd_dmoment_check(point: QHPoint, t: QHTangent, step=1e-5, tol=1e-4):
    """Central finite differences of mu_hat against the analytic d_moment."""
    def shifted(s):
        c = expm(s * t.gb) @ point.c
        p = point.p @ expm(s * t.pp)
        return QHPoint(c, p, point.parabolic, point.spec)

    plus, minus = shifted(step), shifted(-step)
    mg_p, ml_p = moment(plus)
    mg_m, ml_m = moment(minus)
    mug, mul = moment(point)
    dg_fd = np.linalg.inv(mug) @ (mg_p - mg_m) / (2 * step)
    dl_fd = np.linalg.inv(mul) @ (ml_p - ml_m) / (2 * step)
    dg, dl = d_moment(point, t)
    err = max(np.max(np.abs(dg - dg_fd)), np.max(np.abs(dl - dl_fd)))
    if err > tol:
        raise QHError(f"analytic d_moment disagrees with finite differences: {err:.2e}")


def _tangent_basis(point: QHPoint, sl=False) -> List[QHTangent]:
    """Basis of the trivialized tangent space g + p0 (gl ambient; for sl the
    checks are run at sl points inside the gl model)."""
    n = point.spec.n
    out = []
    for j in range(n):
        for k in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[j, k] = 1.0
            out.append(QHTangent(e, np.zeros((n, n))))
    for j in range(n):
        for k in range(n):
            if point.parabolic.in_pattern(j, k):
                e = np.zeros((n, n), dtype=complex)
                e[j, k] = 1.0
                out.append(QHTangent(np.zeros((n, n)), e))
    return out


def check_qh3(point: QHPoint, scale=1.0, grey_zone=(1e-10, 1e-6)):
    """(kernel_dim, dim U, subspace verdict): ker omega intersect ker dmu computed
    by rank, compared against the U-orbit tangents {gb' = X in Lie U, h' = 0,
    gb' + U' = p^{-1} gb' p}."""
    basis = _tangent_basis(point)
    nb = len(basis)
    n = point.spec.n
    omega_mat = np.zeros((nb, nb), dtype=complex)
    for a in range(nb):
        for b in range(a + 1, nb):
            v = two_form(point, basis[a], basis[b], scale)
            omega_mat[a, b] = v
            omega_mat[b, a] = -v
    dmu_rows = []
    for a in range(nb):
        dg, dl = d_moment(point, basis[a])
        dmu_rows.append(np.concatenate([dg.flatten(), dl.flatten()]))
    stacked = np.vstack([omega_mat, np.array(dmu_rows).T])
    svals = np.linalg.svd(stacked, compute_uv=False)
    top = max(1.0, svals[0])
    grey = [s for s in svals if grey_zone[0] < s / top < grey_zone[1]]
    if grey:
        raise QHError(f"rank estimation ill-conditioned: singular values {grey}")
    rank = int(np.sum(svals / top >= grey_zone[1]))
    kernel_dim = nb - rank
    dim_u = point.parabolic.dim_unipotent()

    # explicit U-orbit tangents: X in Lie U -> (gb', P') = (X, p^{-1} X p - X)
    verdict = kernel_dim == dim_u
    _, _, vh = np.linalg.svd(stacked)
    kernel = vh[rank:].conj().T  # columns span ker
    for j in range(n):
        for k in range(n):
            if not point.parabolic.in_unipotent(j, k):
                continue
            x = np.zeros((n, n), dtype=complex)
            x[j, k] = 1.0
            pp = point.pinv @ x @ point.p - x
            vec = _tangent_to_vec(point, QHTangent(x, pp), basis)
            if kernel.shape[1] == 0:
                verdict = verdict and np.linalg.norm(vec) < 1e-8
                continue
            coef, _, _, _ = np.linalg.lstsq(kernel, vec, rcond=None)
            if np.linalg.norm(kernel @ coef - vec) > 1e-7 * max(1.0, np.linalg.norm(vec)):
                verdict = False
    return kernel_dim, dim_u, verdict


def _tangent_to_vec(point: QHPoint, t: QHTangent, basis: List[QHTangent]) -> np.ndarray:
    n = point.spec.n
    pp = []
    for j in range(n):
        for k in range(n):
            if point.parabolic.in_pattern(j, k):
                pp.append(t.pp[j, k])
    return np.concatenate([t.gb.flatten(), np.array(pp, dtype=complex)])


def check_qh1(point: QHPoint, tangents: Tuple[QHTangent, QHTangent, QHTangent],
              step=1e-3, scale=1.0) -> float:
    """|d omega_hat - mu_hat^* eta| on three chart coordinate fields.

    Chart: C(t) = e^{t1 a1} e^{t2 a2} e^{t3 a3} C, p(t) = p e^{t3 b3} e^{t2 b2}
    e^{t1 b1}; the coordinate fields commute, so
    d omega(d1,d2,d3) = d1 omega(d2,d3) - d2 omega(d1,d3) + d3 omega(d1,d2),
    each derivative by central differences."""
    a = [t.gb for t in tangents]
    b = [t.pp for t in tangents]

    def omega_at_shift(axis, s, j, k):
        """omega(d_j, d_k) at the point shifted by s along chart axis `axis`."""
        ea = expm(s * a[axis])
        eb = expm(s * b[axis])
        pt = QHPoint(ea @ point.c, point.p @ eb, point.parabolic, point.spec)
        ea_inv = np.linalg.inv(ea)
        eb_inv = np.linalg.inv(eb)

        def coord_field(i):
            gb = ea @ a[i] @ ea_inv if i > axis else a[i]
            pp = eb_inv @ b[i] @ eb if i > axis else b[i]
            return QHTangent(gb, pp)

        return two_form(pt, coord_field(j), coord_field(k), scale)

    def ddir(axis, j, k):
        return (omega_at_shift(axis, step, j, k)
                - omega_at_shift(axis, -step, j, k)) / (2 * step)

    domega = ddir(0, 1, 2) - ddir(1, 0, 2) + ddir(2, 0, 1)

    # mu^* eta with eta(v1,v2,v3) = 1/2 ([theta1, theta2], theta3), theta the
    # left-trivialized values (the 1/2 matches the wedge convention that makes
    # QH2's 1/2 (Theta + Theta_bar) come out right)
    dgs, dls = [], []
    for t in tangents:
        dg, dl = d_moment(point, t)
        dgs.append(dg)
        dls.append(dl)
    eta = 0.5 * (pair(dgs[0] @ dgs[1] - dgs[1] @ dgs[0], dgs[2], scale)
                 + pair(dls[0] @ dls[1] - dls[1] @ dls[0], dls[2], scale))
    return abs(domega - eta)


# ---------------------------------------------------------------------------
# C_hat membership
# ---------------------------------------------------------------------------

def c_hat_membership(m, conjugator, parabolic: ParabolicData, class_cert,
                     spec: GroupSpec = None):
    """Represent (M, P) = (C^{-1} p C, C^{-1} P0 C) through (C, p = C M C^{-1});
    check p in the P0 pattern with pi(p) conjugate to class_cert in L, and
    moment consistency mu_G(C, p) = M."""
    from .liecore import same_jordan_invariants
    from .rhmap import _phi_blocks
    n = len(parabolic.weight)
    spec = spec or GroupSpec("GL", n)
    c = _np(conjugator)
    mnum = _np(m)
    p = c @ mnum @ np.linalg.inv(c)
    viol = parabolic.violations(p.tolist(), tol=1e-8)
    if viol:
        return False, {"pattern_violations": viol}
    pi_p = _np(parabolic.levi_project(p.tolist()))
    bad = []
    for blk in _phi_blocks(parabolic.weight):
        sub_p = [[pi_p[j, k] for k in blk] for j in blk]
        sub_c = [[_np(class_cert)[j, k] for k in blk] for j in blk]
        if not same_jordan_invariants(sub_p, sub_c):
            bad.append(blk)
    if bad:
        return False, {"mismatched_blocks": bad}
    point = QHPoint(c, p, parabolic, spec)
    mug, _ = moment(point)
    err = np.max(np.abs(mug - mnum))
    if err > 1e-8:
        return False, {"moment_mismatch": err}
    return True, {}
