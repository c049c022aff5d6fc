"""Concrete matrix groups GL_n / SL_n: gradings, parabolics, Jordan
decompositions, exponentials and logarithms.

Weights are carried as exact rationals so every grading and integrality test
is exact; generic matrix entries are complex (or QQi on the exact path).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import smallmat as sm
from .exactnum import QQi

DEFAULT_TOL = 1e-9
# Jordan blocks of size m shift numeric eigenvalues by ~ norm * eps^(1/m)
# (1e-4 for m = 3 at double precision), so the cluster radius must sit well
# above that; genuine spectral gaps at desk scale are >= 1e-2.  Cluster
# centers stay accurate to ~1e-10 because the symmetric splits average out.
EIG_CLUSTER_RTOL = 1e-4


class LieError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    family: str  # "GL" or "SL"
    n: int

    def __post_init__(self):
        if self.family not in ("GL", "SL"):
            raise LieError(f"unsupported family {self.family!r}")
        if self.n < 1:
            raise LieError("n must be positive")


def parse_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise LieError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class WeightVector:
    """Element of t_R with exact rational entries (theta, tau, phi, lambda)."""
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(parse_rational(x) for x in self.entries))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, j):
        return self.entries[j]

    def __add__(self, other):
        return WeightVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return WeightVector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return WeightVector(tuple(-a for a in self.entries))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def check_sl(self):
        if sum(self.entries) != 0:
            raise LieError("SL weight vector must have entries summing to zero")

    def diagonal_matrix(self):
        n = len(self.entries)
        return [[self.entries[j] if j == k else 0 for k in range(n)] for j in range(n)]


def weight(*entries) -> WeightVector:
    return WeightVector(tuple(entries))


@dataclass
class AlgebraElement:
    matrix: list
    spec: GroupSpec

    def validate(self, tol=DEFAULT_TOL):
        n = self.spec.n
        assert sm.shape(self.matrix) == (n, n)
        if self.spec.family == "SL":
            if abs(complex(sm.trace(self.matrix))) > tol:
                raise LieError("SL algebra element must be trace-free")
        return self


@dataclass
class GroupElement:
    matrix: list
    spec: GroupSpec

    def validate(self, tol=DEFAULT_TOL):
        n = self.spec.n
        assert sm.shape(self.matrix) == (n, n)
        det = np.linalg.det(sm.to_numpy(self.matrix))
        if abs(det) < 1e-12:
            raise LieError("group element is numerically singular")
        if self.spec.family == "SL" and abs(det - 1) > 1e-7:
            raise LieError("SL group element must have determinant 1")
        return self


@dataclass
class ParabolicData:
    """Block pattern of P_theta: entry (j,k) allowed iff theta_j - theta_k >= 0."""
    weight: WeightVector

    @property
    def n(self):
        return len(self.weight)

    def in_pattern(self, j, k) -> bool:
        return self.weight[j] - self.weight[k] >= 0

    def in_levi(self, j, k) -> bool:
        return self.weight[j] == self.weight[k]

    def in_unipotent(self, j, k) -> bool:
        return self.weight[j] - self.weight[k] > 0

    def in_opposite_unipotent(self, j, k) -> bool:
        return self.weight[j] - self.weight[k] < 0

    def pattern_mask(self):
        n = self.n
        return [[self.in_pattern(j, k) for k in range(n)] for j in range(n)]

    def levi_mask(self):
        n = self.n
        return [[self.in_levi(j, k) for k in range(n)] for j in range(n)]

    def contains(self, m, tol=DEFAULT_TOL) -> bool:
        n = self.n
        return all(self.in_pattern(j, k) or abs(complex(m[j][k])) <= tol
                   for j in range(n) for k in range(n))

    def violations(self, m, tol=DEFAULT_TOL):
        n = self.n
        return [(j, k) for j in range(n) for k in range(n)
                if not self.in_pattern(j, k) and abs(complex(m[j][k])) > tol]

    def levi_project(self, m):
        """pi: block pattern -> Levi, i.e. kill the entries with strict weight drop."""
        n = self.n
        return [[m[j][k] if self.in_levi(j, k) else 0 * m[j][k] for k in range(n)]
                for j in range(n)]

    def dim_unipotent(self) -> int:
        n = self.n
        return sum(1 for j in range(n) for k in range(n) if self.in_unipotent(j, k))


def parabolic_from_weight(theta: WeightVector) -> ParabolicData:
    return ParabolicData(weight=theta)


def grade_by_weight(m, theta: WeightVector) -> Dict[Fraction, list]:
    """Split a matrix into ad_theta eigencomponents; entry (j,k) has weight
    theta_j - theta_k.  Components sum back to the input exactly."""
    n = len(theta)
    out: Dict[Fraction, list] = {}
    for j in range(n):
        for k in range(n):
            x = m[j][k]
            if not x:
                continue
            lam = theta[j] - theta[k]
            comp = out.setdefault(lam, sm.zeros(n))
            comp[j][k] = x
    return out


def centralizer_h_theta(theta: WeightVector) -> Dict[int, List[Tuple[int, int]]]:
    """h_theta = fixed points of Ad(e^{2 pi i theta}): entries with integer
    weight difference.  Returned as Z-graded entry positions."""
    n = len(theta)
    out: Dict[int, List[Tuple[int, int]]] = {}
    for j in range(n):
        for k in range(n):
            d = theta[j] - theta[k]
            if d.denominator == 1:
                out.setdefault(int(d), []).append((j, k))
    return out


def in_h_theta(m, theta: WeightVector, tol=DEFAULT_TOL) -> bool:
    n = len(theta)
    for j in range(n):
        for k in range(n):
            if (theta[j] - theta[k]).denominator != 1 and abs(complex(m[j][k])) > tol:
                return False
    return True


def mod_one_classes(theta: WeightVector) -> List[List[int]]:
    """Indices grouped by theta_j mod 1; these are the blocks of H_theta."""
    groups: Dict[Fraction, List[int]] = {}
    for j, t in enumerate(theta.entries):
        groups.setdefault(t - math.floor(t), []).append(j)
    return [groups[k] for k in sorted(groups)]


# -- eigenvalues, Jordan decompositions ----------------------------------

def cluster_values(vals, rtol=EIG_CLUSTER_RTOL, atol=1e-10):
    """Greedy clustering of complex values; returns list of (center, indices)."""
    vals = list(vals)
    scale = max([abs(v) for v in vals] + [1.0])
    tol = max(atol, rtol * scale)
    clusters: List[List[int]] = []
    centers: List[complex] = []
    for i, v in enumerate(sorted(range(len(vals)), key=lambda i: (vals[i].real, vals[i].imag))):
        placed = False
        for c, idxs in zip(centers, clusters):
            if abs(vals[v] - c) <= tol:
                idxs.append(v)
                placed = True
                break
        if placed:
            continue
        centers.append(vals[v])
        clusters.append([v])
    out = []
    for c, idxs in zip(centers, clusters):
        center = sum(vals[i] for i in idxs) / len(idxs)
        out.append((center, idxs))
    out.sort(key=lambda p: (round(p[0].real, 9), round(p[0].imag, 9)))
    return out


def _spectral_projections(a: np.ndarray, eigenvalues=None):
    """Projections onto generalized eigenspaces, one per eigenvalue cluster.

    Uses Hermite interpolation: p_c(X) with p_c = 1 + O((x-mu_c)^n) at mu_c and
    O((x-mu_d)^n) at the other clusters.
    """
    n = a.shape[0]
    if eigenvalues is None:
        eigenvalues = np.linalg.eigvals(a)
    clusters = cluster_values(list(map(complex, eigenvalues)))
    if len(clusters) == 1:
        return [(clusters[0][0], np.eye(n, dtype=complex))]
    import numpy.polynomial.polynomial as P
    projs = []
    for ci, (mu, idxs) in enumerate(clusters):
        # q(x) = prod over other clusters (x - mu_d)^{m_d}
        q = np.array([1.0 + 0j])
        for cj, (nu, jdxs) in enumerate(clusters):
            if cj == ci:
                continue
            for _ in jdxs:
                q = P.polymul(q, np.array([-nu, 1.0]))
        m = len(idxs)
        # invert q modulo (x - mu)^m via Taylor expansion of 1/q at mu
        # coefficients of 1/q(mu + t) up to t^{m-1}
        qshift = _poly_shift(q, mu)[: m]
        inv = np.zeros(m, dtype=complex)
        inv[0] = 1.0 / qshift[0]
        for k in range(1, m):
            s = 0.0 + 0j
            for i in range(1, min(k, len(qshift) - 1) + 1):
                s += qshift[i] * inv[k - i]
            inv[k] = -s / qshift[0]
        # h_c(x) = q(x) * inv(x - mu), interpolating 1 at this cluster
        h = P.polymul(q, _poly_unshift(inv, mu))
        projs.append((mu, _poly_eval_matrix(h, a)))
    return projs


def _poly_shift(coeffs, mu):
    # p(x) -> p(mu + t) coefficients in t
    n = len(coeffs)
    out = np.zeros(n, dtype=complex)
    for k, c in enumerate(coeffs):
        # (mu + t)^k
        b = np.zeros(k + 1, dtype=complex)
        for i in range(k + 1):
            b[i] = math.comb(k, i) * mu ** (k - i)
        out[: k + 1] += c * b
    return out


def _poly_unshift(coeffs, mu):
    return _poly_shift(coeffs, -mu)


def _poly_eval_matrix(coeffs, a):
    out = np.zeros_like(a)
    power = np.eye(a.shape[0], dtype=complex)
    for c in coeffs:
        out = out + c * power
        power = power @ a
    return out


def additive_jordan(m, eigenvalues=None, tol=DEFAULT_TOL):
    """X = X_s + X_n with X_s diagonalizable, X_n nilpotent, [X_s, X_n] = 0."""
    a = sm.to_numpy(m)
    n = a.shape[0]
    projs = _spectral_projections(a, eigenvalues)
    s = np.zeros_like(a)
    for mu, p in projs:
        s = s + mu * p
    xn = a - s
    if np.linalg.norm(np.linalg.matrix_power(xn, n)) > max(1.0, np.linalg.norm(a)) ** n * 1e-6:
        raise LieError("eigenvalue clustering failed: nilpotent part is not nilpotent "
                       "within tolerance")
    return sm.from_numpy(s), sm.from_numpy(xn)


def multiplicative_jordan(m, tol=DEFAULT_TOL):
    """g = g_s g_u with g_s diagonalizable, g_u unipotent, commuting."""
    a = sm.to_numpy(m)
    projs = _spectral_projections(a)
    s = np.zeros_like(a)
    for mu, p in projs:
        if abs(mu) < 1e-12:
            raise LieError("singular matrix has no multiplicative Jordan decomposition")
        s = s + mu * p
    u = np.linalg.solve(s, a)
    return sm.from_numpy(s), sm.from_numpy(u)


def mat_exp(m):
    """Matrix exponential; exact terminating series for exact nilpotent input."""
    if _is_exact_matrix(m):
        a = sm.to_numpy(m)
        if np.allclose(np.linalg.matrix_power(a, a.shape[0]), 0, atol=1e-12):
            return sm.mat_exp_nilpotent(m)
    from scipy.linalg import expm
    return sm.from_numpy(expm(sm.to_numpy(m)))


def _is_exact_matrix(m):
    return all(isinstance(x, (int, Fraction, QQi)) for row in m for x in row)


def log_unipotent(g):
    """The unique nilpotent logarithm of a unipotent matrix (terminating series)."""
    n = len(g)
    x = sm.msub(g, sm.eye(n))
    xp = sm.to_numpy(x)
    if np.linalg.norm(np.linalg.matrix_power(xp, n)) > 1e-8 * max(1.0, np.linalg.norm(xp)) ** n:
        raise LieError("input to log_unipotent is not unipotent")
    out = sm.zeros(n)
    term = sm.mcopy(x)
    k = 1
    while not sm.is_zero(term, tol=0.0):
        coeff = Fraction((-1) ** (k + 1), k)
        if _is_exact_matrix(term):
            out = sm.madd(out, sm.smul(coeff, term))
        else:
            out = sm.madd(out, sm.smul(float(coeff), term))
        term = sm.mmul(term, x)
        k += 1
        if k > n:
            break
    return out


def log_semisimple(g, branch=None):
    """Logarithm of a diagonalizable matrix; eigenvalue arguments taken in
    (-pi, pi] unless a branch function is supplied."""
    a = sm.to_numpy(g)
    projs = _spectral_projections(a)
    out = np.zeros_like(a)
    for mu, p in projs:
        if abs(mu) < 1e-14:
            raise LieError("log_semisimple: eigenvalue 0")
        val = branch(mu) if branch is not None else cmath.log(mu)
        out = out + val * p
    return sm.from_numpy(out)


def one_param(theta: WeightVector, z: complex):
    """z^theta = exp(theta log z), principal branch; diagonal with entries z^{theta_j}."""
    if z == 0:
        raise LieError("one_param: z must be nonzero")
    lz = cmath.log(z)
    n = len(theta)
    return [[cmath.exp(float(theta[j]) * lz) if j == k else 0 for k in range(n)]
            for j in range(n)]


def transfer_levi_class(class_rep, g, p0: ParabolicData):
    """Transport a Levi conjugacy class representative along g: the image of
    g.rep.g^{-1} in the Levi of the conjugated parabolic, expressed back in
    the standard block structure (well defined up to Levi conjugacy)."""
    lp = p0.levi_project(class_rep)
    if not sm.is_zero(sm.msub(lp, class_rep), tol=1e-9):
        raise LieError("class representative must be block-diagonal for the Levi of P0")
    m = sm.mmul(sm.mmul(g, class_rep), sm.inverse(g))
    # pi_Q(m) for Q = g P0 g^{-1} transported back to the standard block pattern
    return p0.levi_project(sm.mmul(sm.mmul(sm.inverse(g), m), g))


# -- conjugacy certificates ----------------------------------------------

def jordan_invariants(m, cluster_tol=EIG_CLUSTER_RTOL):
    """(eigenvalue, multiplicity, rank filtration) triples: a complete
    conjugacy certificate for a single matrix under GL."""
    a = sm.to_numpy(m)
    n = a.shape[0]
    vals = np.linalg.eigvals(a)
    clusters = cluster_values(list(map(complex, vals)), rtol=cluster_tol, atol=cluster_tol)
    inv = []
    for mu, idxs in clusters:
        mult = len(idxs)
        b = a - mu * np.eye(n)
        ranks = []
        p = np.eye(n, dtype=complex)
        for _ in range(mult):
            p = p @ b
            ranks.append(_numeric_rank(p))
        inv.append((complex(mu), mult, tuple(ranks)))
    return inv


def _numeric_rank(a, tol=1e-7):
    s = np.linalg.svd(a, compute_uv=False)
    scale = max(1.0, s[0] if len(s) else 0.0)
    return int(np.sum(s > tol * scale))


def same_jordan_invariants(m1, m2, value_tol=1e-7) -> bool:
    i1 = jordan_invariants(m1)
    i2 = jordan_invariants(m2)
    if len(i1) != len(i2):
        return False
    used = [False] * len(i2)
    for mu, mult, ranks in i1:
        hit = False
        for idx, (nu, mult2, ranks2) in enumerate(i2):
            if used[idx]:
                continue
            if abs(mu - nu) <= value_tol and mult == mult2 and ranks == ranks2:
                used[idx] = True
                hit = True
                break
        if not hit:
            return False
    return True
