"""The local Riemann-Hilbert correspondence for tame parahoric connections:
normal form -> enriched monodromy data (M, P, class certificate) and back,
orbit canonicalization inside the centralizer of e^{2 pi i theta}, stabilizer
dimension matching, and the weight/eigenvalue rotation table.
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
from .liecore import (GroupSpec, LieError, ParabolicData, WeightVector,
                      log_unipotent, mat_exp, mod_one_classes,
                      same_jordan_invariants, jordan_invariants)
from .loopconn import LaurentConnection, membership_A_theta, weight_zero_part
from .normalform import (NormalFormResult, NormalizationError, _sigma_tuple,
                         monodromy_of_normal, normalize, prepare_weight_zero)

SNAP_DENOM = 64
SNAP_TOL = 1e-7


class RHError(ValueError):
    pass


# ---------------------------------------------------------------------------
# canonical Jordan representative inside h_theta
# ---------------------------------------------------------------------------

@dataclass
class CanonicalOrbitData:
    tau: WeightVector
    sigma: tuple
    nil: list            # canonical nilpotent part (exact 0/1 entries)
    phi: WeightVector    # theta + tau
    exact: bool          # True when eigenvalues snapped to Gaussian rationals


def _snap(x: float, denom=SNAP_DENOM, tol=SNAP_TOL) -> Optional[Fraction]:
    f = Fraction(x).limit_denominator(denom)
    if abs(float(f) - x) <= tol:
        return f
    return None


def _null_basis(a: np.ndarray, tol=1e-8) -> np.ndarray:
    u, s, vh = np.linalg.svd(a)
    scale = max(1.0, s[0] if len(s) else 0.0)
    rank = int(np.sum(s > tol * scale))
    return vh[rank:].conj().T


def _in_span(v: np.ndarray, basis: np.ndarray, tol=1e-8) -> bool:
    if basis.shape[1] == 0:
        return np.linalg.norm(v) < tol
    coef, res, _, _ = np.linalg.lstsq(basis, v, rcond=None)
    return np.linalg.norm(basis @ coef - v) < tol * max(1.0, np.linalg.norm(v))


def _nilpotent_chains(nr: np.ndarray, tol=1e-8) -> List[List[np.ndarray]]:
    """Jordan chains of a (numerically) nilpotent matrix, longest first.
    Each chain is returned bottom-up: [w1, ..., ws] with nr @ w1 = 0 and
    nr @ w_l = w_{l-1}."""
    m = nr.shape[0]
    if m == 0:
        return []
    powers = [np.eye(m, dtype=complex)]
    while np.linalg.norm(powers[-1]) > tol:
        powers.append(powers[-1] @ nr)
    p = len(powers) - 1  # nr^p = 0
    kernels = [np.zeros((m, 0))] + [_null_basis(powers[s], tol) for s in range(1, p + 1)]
    chains: List[List[np.ndarray]] = []
    tops: List[Tuple[int, np.ndarray]] = []  # (length, top vector)
    for s in range(p, 0, -1):
        exclude = [kernels[s - 1]]
        for length, top in tops:
            if length > s:
                exclude.append((powers[length - s] @ top).reshape(m, 1))
        for length, top in tops:
            if length == s:
                exclude.append(top.reshape(m, 1))
        span = np.hstack(exclude) if exclude else np.zeros((m, 0))
        for c in range(kernels[s].shape[1]):
            v = kernels[s][:, c]
            if _in_span(v, span, tol):
                continue
            tops.append((s, v))
            span = np.hstack([span, v.reshape(m, 1)])
    tops.sort(key=lambda t: -t[0])
    for s, top in tops:
        chain = [powers[s - 1 - l] @ top for l in range(s)]  # w1 = nr^{s-1} top
        chains.append(chain)
    assert sum(len(c) for c in chains) == m, "Jordan chain count mismatch"
    return chains


def canonical_h_theta_form(b, theta: WeightVector, tol=1e-8):
    """Canonical Jordan representative of b in h_theta under the adjoint
    action of the centralizer of e^{2 pi i theta}.

    Returns (h, J, data): h with h b h^{-1} = J, J the canonical form
    (eigenvalues sorted, Jordan blocks longest-first per eigenvalue, blockwise
    over the mod-1 classes of theta), and the decomposition J = phi + sigma +
    n with tau = phi - theta rational (snapped)."""
    n = len(theta)
    bnum = sm.to_numpy(b)
    v_big = np.zeros((n, n), dtype=complex)
    j_exact = sm.zeros(n)
    tau_entries: List[Optional[Fraction]] = [None] * n
    sigma_entries: list = [None] * n
    exact = True
    for cls in mod_one_classes(theta):
        sub = bnum[np.ix_(cls, cls)]
        m = len(cls)
        vals = np.linalg.eigvals(sub)
        from .liecore import _spectral_projections
        projs = _spectral_projections(sub, vals)
        # sort clusters by snapped (Re, Im)
        entries = []
        for mu, proj in projs:
            re_s = _snap(mu.real)
            im_s = _snap(mu.imag)
            key = (float(re_s) if re_s is not None else mu.real,
                   float(im_s) if im_s is not None else mu.imag)
            entries.append((key, mu, re_s, im_s, proj))
        entries.sort(key=lambda e: e[0])
        cols = []
        col_vals = []
        for key, mu, re_s, im_s, proj in entries:
            basis = _orth_range(proj)
            nr = basis.conj().T @ (sub - mu * np.eye(m)) @ basis
            chains = _nilpotent_chains(nr, tol)
            for chain in chains:
                for l, w in enumerate(chain):
                    cols.append(basis @ w)
                    col_vals.append((mu, re_s, im_s, l > 0))
        v = np.column_stack(cols)
        v_big[np.ix_(cls, cls)] = v
        for t, (mu, re_s, im_s, has_super) in enumerate(col_vals):
            j = cls[t]
            if re_s is None or im_s is None:
                exact = False
                j_exact[j][j] = complex(mu)
                tau_entries[j] = None
                sigma_entries[j] = 1j * mu.imag
            else:
                j_exact[j][j] = QQi(re_s, im_s)
                tau_entries[j] = re_s - theta[j]
                sigma_entries[j] = QQi(0, im_s)
            if has_super:
                j_exact[cls[t - 1]][j] = 1
    if any(t is None for t in tau_entries):
        raise RHError("eigenvalue real parts do not snap to rationals "
                      f"(denominator bound {SNAP_DENOM}); tau must be rational")
    h = sm.from_numpy(np.linalg.inv(v_big))
    resid = np.linalg.inv(v_big) @ bnum @ v_big - sm.to_numpy(j_exact)
    if np.max(np.abs(resid)) > 1e-6 * max(1.0, np.max(np.abs(bnum))):
        raise RHError("canonicalization residual too large; eigenvalue clustering "
                      "or snapping failed")
    tau = WeightVector(tuple(tau_entries))
    nil = sm.mcopy(j_exact)
    for j in range(n):
        nil[j][j] = 0
    data = CanonicalOrbitData(tau=tau, sigma=tuple(sigma_entries), nil=nil,
                              phi=theta + tau, exact=exact)
    return h, j_exact, data


def _orth_range(proj: np.ndarray, tol=1e-8) -> np.ndarray:
    u, s, _ = np.linalg.svd(proj)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return u[:, :rank]


# ---------------------------------------------------------------------------
# enriched monodromy data
# ---------------------------------------------------------------------------

@dataclass
class EnrichedMonodromyDatum:
    m: list
    parabolic: ParabolicData
    class_rep: list            # representative of the class C in the Levi
    spec: GroupSpec
    tau: Optional[WeightVector] = None
    sigma: Optional[tuple] = None
    theta: Optional[WeightVector] = None

    @property
    def phi(self) -> WeightVector:
        return self.parabolic.weight


def _phi_blocks(phi: WeightVector) -> List[List[int]]:
    groups: Dict[Fraction, List[int]] = {}
    for j, v in enumerate(phi.entries):
        groups.setdefault(v, []).append(j)
    return [groups[k] for k in sorted(groups)]


def validate_enriched(datum: EnrichedMonodromyDatum, tol=1e-8):
    """Block-pattern membership of M and Levi-conjugacy of pi(M) with the
    class representative, blockwise by phi level."""
    diags = []
    pdat = datum.parabolic
    viol = pdat.violations(datum.m, tol=tol)
    if viol:
        return False, {"pattern_violations": viol}
    pi_m = pdat.levi_project(datum.m)
    for blk in _phi_blocks(pdat.weight):
        sub_m = [[pi_m[j][k] for k in blk] for j in blk]
        sub_c = [[datum.class_rep[j][k] for k in blk] for j in blk]
        if not same_jordan_invariants(sub_m, sub_c):
            diags.append({"block": blk,
                          "pi_m_invariants": jordan_invariants(sub_m),
                          "class_invariants": jordan_invariants(sub_c)})
    return (not diags), {"mismatched_blocks": diags}


def orbit_to_triple(theta: WeightVector, orbit_rep):
    """(phi, P_phi, class representative) determined by theta and the orbit
    of orbit_rep in h_theta; well defined up to conjugacy."""
    _, j, data = canonical_h_theta_form(orbit_rep, theta)
    n = len(theta)
    e_ts = [[cmath.exp(2j * cmath.pi * complex(data.tau[k] + (data.sigma[k]
            if not isinstance(data.sigma[k], QQi) else complex(data.sigma[k]))))
             if j_ == k else 0 for k in range(n)] for j_ in range(n)]
    e_n = mat_exp(sm.smul(2j * cmath.pi, data.nil))
    class_rep = sm.mmul(e_ts, e_n)
    return data.phi, ParabolicData(data.phi), class_rep


def to_betti(A: LaurentConnection, theta: WeightVector, orbit_rep) -> EnrichedMonodromyDatum:
    """prepare_weight_zero -> normalize -> monodromy, packaged with the class
    certificate; pi(M) in C is asserted."""
    a1, h, data = prepare_weight_zero(A, theta, orbit_rep)
    result = normalize(a1, theta, data.tau, data.sigma)
    m, r, nmat = monodromy_of_normal(result)
    phi, pdat, class_rep = orbit_to_triple(theta, orbit_rep)
    if pdat.weight.entries != data.phi.entries:
        raise RHError("orbit canonicalization disagrees between connection and orbit_rep")
    datum = EnrichedMonodromyDatum(m=m, parabolic=pdat, class_rep=class_rep,
                                   spec=A.spec, tau=data.tau, sigma=data.sigma,
                                   theta=theta)
    ok, diags = validate_enriched(datum)
    if not ok:
        raise RHError(f"pi(M) is not in the class certificate: {diags}")
    return datum


def from_betti(m, phi: WeightVector, tau: WeightVector, sigma,
               spec: GroupSpec = None, truncation: int = None):
    """Inverse direction: M in P_phi with M_s = e^{2 pi i (tau+sigma)}
    diagonal; N = log(M_s^{-1} M)/(2 pi i) decomposed along integer ad_tau
    eigenspaces gives A = (tau + sigma + sum A_i z^i) dz/z and theta = phi - tau."""
    n = len(phi)
    spec = spec or GroupSpec("GL", n)
    sigma = _sigma_tuple(sigma, n)
    pdat = ParabolicData(phi)
    viol = pdat.violations(m, tol=1e-9)
    if viol:
        raise RHError(f"M is outside the block pattern of P_phi at {viol}")
    ms = [[cmath.exp(2j * cmath.pi * (complex(tau[j]) + complex(sigma[j])))
           if j == k else 0 for k in range(n)] for j in range(n)]
    mu = sm.mmul(sm.inverse(ms), m)
    nmat = log_unipotent(mu)
    nmat = sm.smul(1 / (2j * cmath.pi), nmat)
    coeffs: Dict[int, list] = {0: sm.zeros(n)}
    for j in range(n):
        coeffs[0][j][j] = complex(tau[j]) + complex(sigma[j]) \
            if not isinstance(sigma[j], QQi) else QQi(tau[j]) + sigma[j]
    maxdeg = 0
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            v = nmat[j][k]
            if not v or abs(complex(v)) < 1e-12:
                continue
            d = tau[j] - tau[k]
            if d.denominator != 1:
                raise RHError(
                    f"N has a component at non-integer ad_tau weight {d} "
                    f"(entry ({j},{k})): Ad_t(N) != N, invalid input")
            i = int(d)
            coeffs.setdefault(i, sm.zeros(n))[j][k] = v
            maxdeg = max(maxdeg, i)
    theta = phi - tau
    trunc = truncation if truncation is not None else max(3, maxdeg)
    a = LaurentConnection(coeffs, trunc, spec)
    cert = membership_A_theta(a, theta, tol=1e-12)
    if not cert.ok:
        raise RHError(f"reconstructed connection left A_theta: {cert.violations[:3]}")
    return a, theta


def suggest_tau(args, denom=SNAP_DENOM):
    """Lift eigenvalue arguments (as fractions of a full turn) to the
    representatives of smallest absolute value; helper for from_betti callers."""
    out = []
    for x in args:
        f = x if isinstance(x, Fraction) else Fraction(x).limit_denominator(denom)
        f = f - math.floor(f)
        if f > Fraction(1, 2):
            f -= 1
        out.append(f)
    return WeightVector(tuple(out))


# ---------------------------------------------------------------------------
# stabilizer dimension correspondence
# ---------------------------------------------------------------------------

def centralizer_dim_in_parabolic(m, phi: WeightVector) -> int:
    """dim of {X in Lie P_phi : [X, M] = 0} by numeric rank."""
    n = len(phi)
    pdat = ParabolicData(phi)
    positions = [(j, k) for j in range(n) for k in range(n) if pdat.in_pattern(j, k)]
    mnum = sm.to_numpy(m)
    rows = []
    for (j, k) in positions:
        e = np.zeros((n, n), dtype=complex)
        e[j, k] = 1.0
        rows.append((e @ mnum - mnum @ e).flatten())
    mat = np.array(rows).T
    rank = int(np.sum(np.linalg.svd(mat, compute_uv=False) > 1e-8 *
                      max(1.0, np.max(np.abs(mat)))))
    return len(positions) - rank


def gauge_stabilizer_dim(result: NormalFormResult, degree_cap: int = None) -> int:
    """dim of the kernel of X -> [X, P] + z X' on the truncated Lie algebra
    of the extended parahoric, with a stabilization check in the cap."""
    cap = degree_cap if degree_cap is not None else result.normalized.truncation
    d1 = _gauge_stab_dim_at(result, cap)
    d2 = _gauge_stab_dim_at(result, cap + 1)
    if d1 != d2:
        raise RHError(f"gauge stabilizer dimension did not stabilize: "
                      f"{d1} at degree {cap}, {d2} at degree {cap + 1}")
    return d1


def _gauge_stab_dim_at(result: NormalFormResult, cap: int) -> int:
    theta = result.theta
    n = result.normalized.n
    spread = max(theta.entries) - min(theta.entries)
    i_min = -int(math.ceil(spread))
    basis = [(j, k, i) for i in range(i_min, cap + 1) for j in range(n)
             for k in range(n) if theta[j] - theta[k] + i >= 0]
    p = {i: sm.to_numpy(m) for i, m in result.normalized.coeffs.items()}
    degs = sorted(p) or [0]
    out_lo = i_min + min(degs + [0])
    out_hi = cap + 1 + max(degs + [0])
    out_index = {}
    for d in range(out_lo, out_hi + 1):
        for j in range(n):
            for k in range(n):
                out_index[(j, k, d)] = len(out_index)
    cols = []
    for (j, k, i) in basis:
        col = np.zeros(len(out_index), dtype=complex)
        e = np.zeros((n, n), dtype=complex)
        e[j, k] = 1.0
        for dp, pm in p.items():
            img = e @ pm - pm @ e
            for jj in range(n):
                for kk in range(n):
                    if img[jj, kk]:
                        col[out_index[(jj, kk, i + dp)]] += img[jj, kk]
        if i:
            col[out_index[(j, k, i)]] += i
        cols.append(col)
    mat = np.array(cols).T
    s = np.linalg.svd(mat, compute_uv=False)
    rank = int(np.sum(s > 1e-8 * max(1.0, s[0] if len(s) else 0.0)))
    return len(basis) - rank


def stabilizer_correspondence(result: NormalFormResult):
    """dim C_{P_phi}(M) equals the truncated gauge stabilizer dimension of the
    normalized connection; returns the pair after asserting equality."""
    m, _, _ = monodromy_of_normal(result)
    phi = result.theta + result.tau
    dim_m = centralizer_dim_in_parabolic(m, phi)
    dim_a = gauge_stabilizer_dim(result)
    if dim_m != dim_a:
        raise RHError(f"stabilizer dimensions disagree: dim C_P(M) = {dim_m}, "
                      f"gauge stabilizer = {dim_a}")
    return dim_m, dim_a


# ---------------------------------------------------------------------------
# parameter rotation table
# ---------------------------------------------------------------------------

def hodge_rotation(tau: WeightVector, sigma, theta: WeightVector):
    """Weights/eigenvalues across the three realizations: Dolbeault
    (-tau, -(phi+sigma)/2), De Rham (theta, -(tau+sigma)), Betti
    (phi = tau+theta, e^{2 pi i (tau+sigma)})."""
    n = len(tau)
    sigma = _sigma_tuple(sigma, n)
    phi = theta + tau
    half = Fraction(1, 2)

    def comb(a, b, scale):
        out = []
        for j in range(n):
            v = QQi(a[j]) + b[j] if isinstance(b[j], QQi) else complex(a[j]) + complex(b[j])
            out.append(v * scale)
        return tuple(out)

    betti_eigs = tuple(cmath.exp(2j * cmath.pi * (complex(tau[j]) + complex(sigma[j])))
                       for j in range(n))
    return {
        "dolbeault": {"weights": -tau, "eigenvalues": comb(phi.entries, sigma, -half)},
        "derham": {"weights": theta, "eigenvalues": comb(tau.entries, sigma, -1)},
        "betti": {"weights": phi, "eigenvalues": betti_eigs},
    }
