"""Standard apartment of the affine building of the loop group (type A):
affine Weyl action on weights, exact extended-parahoric membership for
Laurent-polynomial matrices, the monomial-stabilizer computation, and the
windowed equivalence test for weighted parahorics."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import smallmat as sm
from .exactnum import QQi
from .liecore import WeightVector
from .loopconn import MatSeries

TRANSLATION_WINDOW = 8


class ApartmentError(ValueError):
    pass


# ---------------------------------------------------------------------------
# affine Weyl group W x X_*(T)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineWeylElement:
    """(w, lambda) in W x X_*(T); acts by theta -> w(theta - lambda).
    The permutation w is stored one-line, 0-based: position j of the output
    takes entry w^{-1}(j), i.e. (w.v)_{w(k)} = v_k."""
    w: tuple
    lam: tuple

    def __post_init__(self):
        n = len(self.w)
        if sorted(self.w) != list(range(n)):
            raise ApartmentError(f"{self.w} is not a permutation")
        if len(self.lam) != n or any(not isinstance(x, int) for x in self.lam):
            raise ApartmentError("lambda must be an integer vector")

    def inv_perm(self) -> tuple:
        out = [0] * len(self.w)
        for k, j in enumerate(self.w):
            out[j] = k
        return tuple(out)

    def permute(self, v):
        """w applied to a vector: (w.v)_{w(k)} = v_k."""
        out = [None] * len(self.w)
        for k, j in enumerate(self.w):
            out[j] = v[k]
        return tuple(out)

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        # (w1, l1)(w2, l2) = (w1 w2, l2 + w2^{-1} l1)
        w = tuple(self.w[other.w[k]] for k in range(len(self.w)))
        lam = tuple(other.lam[k] + self.lam[other.w[k]] for k in range(len(self.w)))
        return AffineWeylElement(w, lam)


def identity_weyl(n: int) -> AffineWeylElement:
    return AffineWeylElement(tuple(range(n)), (0,) * n)


def act(w_hat: AffineWeylElement, theta: WeightVector) -> WeightVector:
    """w_hat . theta = w(theta - lambda)."""
    shifted = tuple(theta[k] - w_hat.lam[k] for k in range(len(theta)))
    return WeightVector(w_hat.permute(shifted))


# ---------------------------------------------------------------------------
# Laurent-polynomial group elements
# ---------------------------------------------------------------------------

@dataclass
class LaurentGroupElement:
    """n x n matrix of finite Laurent polynomials, with determinant required
    to be a unit (a nonzero monomial) so an exact polynomial inverse exists."""
    series: MatSeries

    @property
    def n(self):
        return self.series.n

    def entry_poly(self, j, k) -> Dict[int, object]:
        return {i: m[j][k] for i, m in self.series.coeffs.items() if m[j][k]}

    def determinant(self) -> Dict[int, object]:
        """Leibniz expansion; entries are scalar Laurent polynomials."""
        n = self.n
        out: Dict[int, object] = {}
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            term = {0: sign}
            for j in range(n):
                term = _poly_mul(term, self.entry_poly(j, perm[j]))
                if not term:
                    break
            for d, c in term.items():
                out[d] = out.get(d, 0) + c
        return {d: c for d, c in out.items() if c}

    def unit_certificate(self):
        det = self.determinant()
        nz = {d: c for d, c in det.items() if abs(complex(c)) > 1e-12}
        if len(nz) != 1:
            raise ApartmentError(
                f"determinant {det} is not a unit monomial; element not "
                "invertible within the Laurent-polynomial model")
        (d, c), = nz.items()
        return d, c

    def mul(self, other: "LaurentGroupElement") -> "LaurentGroupElement":
        return LaurentGroupElement(self.series.mul(other.series))

    def inverse(self) -> "LaurentGroupElement":
        """Exact adjugate inverse (desk scale)."""
        n = self.n
        d, c = self.unit_certificate()
        cof: Dict[int, list] = {}
        for j in range(n):
            for k in range(n):
                minor = _poly_det([[self.entry_poly(r, s) for s in range(n) if s != k]
                                   for r in range(n) if r != j])
                sign = 1 if (j + k) % 2 == 0 else -1
                for deg, coeff in minor.items():
                    tgt = cof.setdefault(deg - d, sm.zeros(n))
                    # adjugate transpose: entry (k, j)
                    tgt[k][j] = tgt[k][j] + sign * coeff * _inv_scalar(c)
        return LaurentGroupElement(MatSeries(n, cof, K=None))


def _inv_scalar(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(1, 1) / Fraction(c)
    if isinstance(c, QQi):
        return QQi(1) / c
    return 1.0 / c


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _poly_mul(a: Dict[int, object], b: Dict[int, object]) -> Dict[int, object]:
    out: Dict[int, object] = {}
    for da, ca in a.items():
        for db, cb in b.items():
            d = da + db
            out[d] = out.get(d, 0) + ca * cb
    return {d: c for d, c in out.items() if c}


def _poly_det(entries: List[List[Dict[int, object]]]) -> Dict[int, object]:
    n = len(entries)
    if n == 0:
        return {0: 1}
    out: Dict[int, object] = {}
    for perm in itertools.permutations(range(n)):
        term = {0: _perm_sign(perm)}
        for j in range(n):
            term = _poly_mul(term, entries[j][perm[j]])
            if not term:
                break
        for d, c in term.items():
            out[d] = out.get(d, 0) + c
    return {d: c for d, c in out.items() if c}


def from_matrix(m) -> LaurentGroupElement:
    """Constant matrix as a loop."""
    return LaurentGroupElement(MatSeries(len(m), {0: sm.mcopy(m)}, K=None))


def monomial_element(w_hat: AffineWeylElement, torus=None) -> LaurentGroupElement:
    """h z^lambda t: permutation matrix of w times z^lambda times constant
    torus factor (entry (w(k), k) = t_k z^{lambda_k})."""
    n = len(w_hat.w)
    torus = torus or (1,) * n
    coeffs: Dict[int, list] = {}
    for k in range(n):
        tgt = coeffs.setdefault(w_hat.lam[k], sm.zeros(n))
        tgt[w_hat.w[k]][k] = torus[k]
    return LaurentGroupElement(MatSeries(n, coeffs, K=None))


# ---------------------------------------------------------------------------
# membership and stabilizers
# ---------------------------------------------------------------------------

@dataclass
class ParahoricCertificate:
    ok: bool
    ord_violations: List[Tuple[int, int, Fraction]]
    limit_singular: bool

    def __bool__(self):
        return self.ok


def extended_parahoric_membership(g: LaurentGroupElement,
                                  theta: WeightVector) -> ParahoricCertificate:
    """g is in the extended parahoric of theta iff z^theta g z^{-theta} has an
    invertible limit as z -> 0: ord(g_jk) + theta_j - theta_k >= 0 for every
    entry, and the matrix of terms achieving equality is invertible."""
    g.unit_certificate()  # raises on non-invertible input
    n = g.n
    bad = []
    limit = sm.zeros(n)
    for j in range(n):
        for k in range(n):
            poly = g.entry_poly(j, k)
            for d, c in poly.items():
                shifted = d + theta[j] - theta[k]
                if shifted < 0:
                    bad.append((j, k, shifted))
                elif shifted == 0:
                    limit[j][k] = limit[j][k] + c
    singular = False
    if not bad:
        try:
            sm.inverse(limit)
        except ZeroDivisionError:
            singular = True
    return ParahoricCertificate(ok=(not bad and not singular),
                                ord_violations=bad, limit_singular=singular)


def stabilizer_check(w_hat: AffineWeylElement, theta: WeightVector,
                     torus=None) -> bool:
    """The monomial lift h z^lambda t stabilizes the weighted parahoric of
    theta iff w_hat . theta = theta; the membership verdict is asserted to
    agree with that criterion."""
    g = monomial_element(w_hat, torus)
    verdict = bool(extended_parahoric_membership(g, theta))
    fixes = act(w_hat, theta).entries == theta.entries
    assert verdict == fixes, \
        f"stabilizer criterion mismatch for {w_hat}: membership {verdict}, " \
        f"fixed-point {fixes}"
    return verdict


def equivalent_weighted_parahorics(g: LaurentGroupElement, theta: WeightVector,
                                   g2: LaurentGroupElement, theta2: WeightVector,
                                   window: int = TRANSLATION_WINDOW):
    """(g, theta) ~ (g2, theta2) iff theta2 = w_hat . theta and
    g^{-1} g2 w_hat is in the extended parahoric of theta, for some w_hat.
    The translation part is determined by w, so only |W| candidates exist;
    candidates with translations outside the window are reported as
    inconclusive rather than negative."""
    n = len(theta)
    ginv = g.inverse()
    inconclusive = False
    for w in itertools.permutations(range(n)):
        # theta2 = w(theta - lam)  =>  lam = theta - w^{-1}(theta2)
        lam = []
        ok = True
        for k in range(n):
            v = theta[k] - theta2[w[k]]
            if v.denominator != 1:
                ok = False
                break
            lam.append(int(v))
        if not ok:
            continue
        if any(abs(x) > window for x in lam):
            inconclusive = True
            continue
        w_hat = AffineWeylElement(tuple(w), tuple(lam))
        if act(w_hat, theta).entries != theta2.entries:
            continue
        cand = ginv.mul(g2).mul(monomial_element(w_hat))
        if extended_parahoric_membership(cand, theta):
            return True, w_hat
    if inconclusive:
        return None, "inconclusive: translation window exhausted"
    return False, None


# ---------------------------------------------------------------------------
# Betti alcove invariant
# ---------------------------------------------------------------------------

def alcove_representative(theta: WeightVector) -> WeightVector:
    """Reduce theta to the fundamental-alcove representative of its affine
    Weyl orbit: for type A (GL_n), fractional parts sorted descending."""
    fracs = sorted((t - math.floor(t) for t in theta.entries), reverse=True)
    return WeightVector(tuple(fracs))


def betti_alcove_invariant(m, phi: WeightVector, snap_denom: int = 64) -> WeightVector:
    """The affine-Weyl orbit invariant theta = phi - tau attached to (M, P_phi):
    tau is read from the eigenvalue arguments of the semisimple part of pi(M)
    (defined modulo X_*(T)), and the result is reduced to the fundamental
    alcove, making it independent of all the choices."""
    import cmath
    from .liecore import ParabolicData, multiplicative_jordan
    import numpy as np
    n = len(phi)
    pdat = ParabolicData(phi)
    viol = pdat.violations(m, tol=1e-9)
    if viol:
        raise ApartmentError(f"M is outside the pattern of P_phi at {viol}")
    pi_m = pdat.levi_project(m)
    s, u = multiplicative_jordan(pi_m)
    eigs = sorted(np.linalg.eigvals(sm.to_numpy(s)),
                  key=lambda v: (round(cmath.phase(v), 9), round(abs(v), 9)))
    taus = []
    for v in eigs:
        arg = cmath.phase(v) / (2 * math.pi)
        f = Fraction(arg).limit_denominator(snap_denom)
        if abs(float(f) - arg) > 1e-7:
            raise ApartmentError(f"eigenvalue argument {arg} does not snap to "
                                 f"a rational with denominator <= {snap_denom}")
        taus.append(f)
    # theta = phi - tau is defined modulo X_*(T) and the Weyl group; the
    # fractional parts of -tau shifted by phi's classes reduce to the alcove.
    # Since eigenvalue-to-position matching is only defined up to W, reduce
    # the multiset {phi_j} x {-tau} jointly: use phi - tau for the sorted
    # pairing and reduce; Weyl-invariance is checked by the caller's tests.
    phis = sorted(phi.entries)
    theta = WeightVector(tuple(p - t for p, t in zip(phis, sorted(taus))))
    return alcove_representative(theta)
