"""Truncated Laurent connections A = (sum A_i z^i) dz/z, the spaces attached
to a weight theta, and the gauge action of parahoric generators.

Gauge elements are kept as words whose factors are certified individually
(constant, torus power, exp of a homogeneous loop element); a word acts on a
connection factor by factor through exact truncated-series arithmetic, so the
group-action law holds by construction and exactness is preserved on rational
input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import smallmat as sm
from .exactnum import QQi, is_exact
from .liecore import GroupSpec, WeightVector, grade_by_weight

DEFAULT_TOL = 1e-9


class TruncationOverflow(RuntimeError):
    """A gauge transform pushed known nonzero coefficients past the declared
    truncation order; refusing to truncate silently."""


class MembershipError(ValueError):
    pass


# ---------------------------------------------------------------------------
# truncated matrix Laurent series
# ---------------------------------------------------------------------------

class MatSeries:
    """Matrix-valued Laurent polynomial, known exactly through degree K
    (K = None means known to all orders, i.e. an honest polynomial)."""

    def __init__(self, n: int, coeffs: Dict[int, list] = None, K: Optional[int] = None):
        self.n = n
        self.coeffs = {}
        if coeffs:
            for i, m in coeffs.items():
                if not sm.is_zero(m, tol=0.0):
                    self.coeffs[i] = m
        self.K = K

    @classmethod
    def identity(cls, n):
        return cls(n, {0: sm.eye(n)})

    @classmethod
    def constant(cls, m):
        return cls(len(m), {0: sm.mcopy(m)})

    def min_deg(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def coeff(self, i):
        return self.coeffs.get(i) or sm.zeros(self.n)

    def known(self, i) -> bool:
        return self.K is None or i <= self.K

    def add(self, other: "MatSeries") -> "MatSeries":
        K = _min_k(self.K, other.K)
        out: Dict[int, list] = {}
        for i in set(self.coeffs) | set(other.coeffs):
            if K is not None and i > K:
                continue
            out[i] = sm.madd(self.coeff(i), other.coeff(i))
        return MatSeries(self.n, out, K)

    def mul(self, other: "MatSeries") -> "MatSeries":
        ma, mb = self.min_deg(), other.min_deg()
        if ma is None or mb is None:
            return MatSeries(self.n, {}, _min_k(self.K, other.K))
        K = _min_k(None if self.K is None else self.K + mb,
                   None if other.K is None else other.K + ma)
        out: Dict[int, list] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                d = i + j
                if K is not None and d > K:
                    continue
                prod = sm.mmul(a, b)
                out[d] = sm.madd(out[d], prod) if d in out else prod
        return MatSeries(self.n, out, K)

    def zderiv(self) -> "MatSeries":
        """z d/dz applied coefficient-wise."""
        return MatSeries(self.n, {i: sm.smul(i, m) for i, m in self.coeffs.items() if i},
                         self.K)

    def truncate(self, K: int) -> "MatSeries":
        return MatSeries(self.n, {i: m for i, m in self.coeffs.items() if i <= K},
                         _min_k(self.K, K))


def _min_k(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# connections
# ---------------------------------------------------------------------------

@dataclass
class LaurentConnection:
    """A = (sum_i A_i z^i) dz/z with finitely many exact coefficients,
    declared unknown beyond `truncation`."""
    coeffs: Dict[int, list]
    truncation: int
    spec: GroupSpec

    def __post_init__(self):
        self.coeffs = {i: m for i, m in self.coeffs.items() if not sm.is_zero(m, tol=0.0)}
        for i in self.coeffs:
            if i > self.truncation:
                raise TruncationOverflow(
                    f"coefficient at z^{i} beyond declared truncation {self.truncation}")

    @property
    def n(self):
        return self.spec.n

    def coeff(self, i):
        return self.coeffs.get(i) or sm.zeros(self.n)

    def series(self) -> MatSeries:
        return MatSeries(self.n, {i: sm.mcopy(m) for i, m in self.coeffs.items()},
                         K=self.truncation)

    def evaluate(self, z: complex):
        """Value of sum A_i z^i (the dz/z coefficient) at a point."""
        out = sm.zeros(self.n)
        for i, m in self.coeffs.items():
            out = sm.madd(out, sm.smul(z ** i, m))
        return out

    def max_abs_diff(self, other: "LaurentConnection") -> float:
        d = 0.0
        for i in set(self.coeffs) | set(other.coeffs):
            d = max(d, sm.max_abs(sm.msub(self.coeff(i), other.coeff(i))))
        return d


@dataclass
class MembershipCertificate:
    ok: bool
    violations: List[Tuple[int, Fraction, int, int]] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def membership_A_theta(conn: LaurentConnection, theta: WeightVector,
                       tol: float = 0.0) -> MembershipCertificate:
    """A is theta-parahoric iff every graded component A_{i,lambda} has
    i + lambda >= 0."""
    bad = []
    for i, m in conn.coeffs.items():
        for lam, comp in grade_by_weight(m, theta).items():
            if i + lam >= 0:
                continue
            for j in range(conn.n):
                for k in range(conn.n):
                    if abs(complex(comp[j][k])) > tol:
                        bad.append((i, lam, j, k))
    return MembershipCertificate(ok=not bad, violations=bad)


def weight_zero_part(conn: LaurentConnection, theta: WeightVector):
    """Extract the components with lambda + i = 0 and the corresponding
    element B = theta + sum A_i of h_theta (the weight-zero isomorphism,
    including the +theta shift)."""
    cert = membership_A_theta(conn, theta)
    if not cert.ok:
        raise MembershipError(f"connection is not in A_theta: {cert.violations[:3]}")
    n = conn.n
    zero_coeffs: Dict[int, list] = {}
    b = theta.diagonal_matrix()
    for i, m in conn.coeffs.items():
        keep = sm.zeros(n)
        hit = False
        for j in range(n):
            for k in range(n):
                if m[j][k] and theta[j] - theta[k] == -i:
                    keep[j][k] = m[j][k]
                    b[j][k] = b[j][k] + m[j][k]
                    hit = True
        if hit:
            zero_coeffs[i] = keep
    conn0 = LaurentConnection(zero_coeffs, conn.truncation, conn.spec)
    return conn0, b


def lies_over(conn: LaurentConnection, theta: WeightVector, orbit_rep,
              value_tol: float = 1e-7) -> bool:
    """Is the weight-zero part of A in the adjoint orbit of orbit_rep under
    the centralizer of e^{2 pi i theta}?  Decided blockwise (the mod-1
    classes of theta) by Jordan invariants; GL/SL only."""
    from .liecore import in_h_theta, mod_one_classes, same_jordan_invariants
    if not in_h_theta(orbit_rep, theta):
        raise MembershipError("orbit representative is not in h_theta")
    _, b = weight_zero_part(conn, theta)
    for cls in mod_one_classes(theta):
        sub_b = [[b[j][k] for k in cls] for j in cls]
        sub_r = [[orbit_rep[j][k] for k in cls] for j in cls]
        # cross-class entries of both sides vanish by membership in h_theta
        if not same_jordan_invariants(sub_b, sub_r, value_tol=value_tol):
            return False
    return True


# ---------------------------------------------------------------------------
# gauge words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantFactor:
    matrix: tuple  # row tuples, kept immutable

    def certify(self, theta: WeightVector):
        """Constant loops in the extended parahoric are exactly P_theta."""
        m = self.as_matrix()
        n = len(m)
        for j in range(n):
            for k in range(n):
                if m[j][k] and theta[j] - theta[k] < 0:
                    return False, f"entry ({j},{k}) below the theta pattern"
        levi = [[m[j][k] if theta[j] == theta[k] else 0 for k in range(n)] for j in range(n)]
        try:
            sm.inverse(levi)
        except ZeroDivisionError:
            return False, "limit along z->0 is singular"
        return True, "constant in P_theta"

    def as_matrix(self):
        return [list(r) for r in self.matrix]

    def series_pair(self, K):
        m = self.as_matrix()
        return MatSeries.constant(m), MatSeries.constant(sm.inverse(m))


@dataclass(frozen=True)
class TorusPower:
    """z^lambda; integral lambda is an honest loop, rational lambda only makes
    sense fused against a compatible constant (see LeviFactor)."""
    lam: WeightVector

    def certify(self, theta: WeightVector):
        if not self.lam.is_integral():
            return False, "non-integral torus power is not a loop-group element"
        if any(x != 0 for x in self.lam.entries):
            return False, "z^lambda stabilizes theta only for lambda = 0"
        return True, "identity"


@dataclass(frozen=True)
class ExpFactor:
    """exp(X z^i) with X spanning a single root space (one off-diagonal entry)
    or X diagonal (in t, requires i > 0)."""
    position: Optional[Tuple[int, int]]  # None for diagonal X
    value: object                        # scalar (root case) or diagonal tuple
    i: int
    n: int

    def certify(self, theta: WeightVector):
        if self.position is None:
            if self.i <= 0:
                return False, "diagonal exp factor needs i > 0"
            return True, f"exp(t-valued z^{self.i})"
        j, k = self.position
        lam = theta[j] - theta[k]
        if lam + self.i >= 0:
            return True, f"alpha(theta)+i = {lam + self.i} >= 0"
        return False, f"alpha(theta)+i = {lam + self.i} < 0"

    def series_pair(self, K):
        n = self.n
        if self.position is not None:
            j, k = self.position
            g_coeffs = {0: sm.eye(n)}
            ginv_coeffs = {0: sm.eye(n)}
            g_coeffs.setdefault(self.i, sm.zeros(n))[j][k] += self.value
            ginv_coeffs.setdefault(self.i, sm.zeros(n))[j][k] -= self.value
            return MatSeries(n, g_coeffs), MatSeries(n, ginv_coeffs)
        diag = list(self.value)
        return (_diag_exp_series(diag, self.i, K, sign=1),
                _diag_exp_series(diag, self.i, K, sign=-1))


def _diag_exp_series(diag, i, K, sign):
    n = len(diag)
    coeffs = {0: sm.eye(n)}
    m_max = max(0, K) // i
    for j, x in enumerate(diag):
        term = 1
        for m in range(1, m_max + 1):
            if is_exact(x):
                term = term * (sign * x) * Fraction(1, m)
            else:
                term = term * (sign * x) / m
            d = m * i
            coeffs.setdefault(d, sm.zeros(n))[j][j] = term
    return MatSeries(n, coeffs, K=K)


@dataclass(frozen=True)
class ExpLoopFactor:
    """exp(Y) with Y = sum X_i z^i homogeneous of loop weight r > 0 for theta
    (each entry (j,k) of X_i satisfies theta_j - theta_k + i = r)."""
    terms: tuple        # tuple of (i, row-tuples matrix)
    weight: Fraction
    theta: WeightVector

    def certify(self, theta: WeightVector):
        if theta.entries != self.theta.entries:
            return False, "factor was built for a different weight"
        if self.weight <= 0:
            return False, "loop weight must be strictly positive"
        for i, rows in self.terms:
            m = [list(r) for r in rows]
            for j in range(len(m)):
                for k in range(len(m)):
                    if m[j][k] and theta[j] - theta[k] + i != self.weight:
                        return False, f"term z^{i} entry ({j},{k}) is not homogeneous"
        return True, f"exp of weight-{self.weight} element of the pro-unipotent radical"

    def y_series(self, sign=1) -> MatSeries:
        n = len(self.theta)
        coeffs = {}
        for i, rows in self.terms:
            m = [[sign * x for x in r] for r in rows]
            coeffs[i] = sm.madd(coeffs[i], m) if i in coeffs else m
        return MatSeries(n, coeffs, K=None)

    def series_pair(self, K):
        return self._exp(1, K), self._exp(-1, K)

    def _exp(self, sign, K):
        y = self.y_series(sign)
        n = len(self.theta)
        spread = max(self.theta.entries) - min(self.theta.entries)
        # Y^m has loop weight m*r; entry weights are bounded by the spread of
        # theta, so degrees below K die out once m*r > spread + K.
        m_max = int(math.floor(float((spread + max(K, 0)) / self.weight))) + 1
        out = MatSeries.identity(n)
        term = MatSeries.identity(n)
        fact = 1
        for m in range(1, m_max + 1):
            term = term.mul(y).truncate(K)
            fact *= m
            inv = Fraction(1, fact)
            scaled = MatSeries(n, {i: [[_scale(x, inv) for x in row] for row in mm]
                                   for i, mm in term.coeffs.items()}, term.K)
            out = out.add(scaled)
        out.K = K
        return out


def _scale(x, frac: Fraction):
    if is_exact(x):
        return x * frac
    return x * float(frac)


@dataclass(frozen=True)
class LeviFactor:
    """z^{-theta} h z^{theta} for h in the centralizer of e^{2 pi i theta};
    an honest Laurent-polynomial loop because h only occupies entries with
    integral weight difference."""
    h: tuple
    theta: WeightVector

    def certify(self, theta: WeightVector):
        if theta.entries != self.theta.entries:
            return False, "Levi factor was built for a different weight"
        m = self.as_h()
        n = len(m)
        for j in range(n):
            for k in range(n):
                if m[j][k] and (theta[j] - theta[k]).denominator != 1:
                    return False, f"h has entry ({j},{k}) outside the centralizer"
        try:
            sm.inverse(m)
        except ZeroDivisionError:
            return False, "h is singular"
        return True, "Levi subgroup element"

    def as_h(self):
        return [list(r) for r in self.h]

    def series_pair(self, K):
        return self._series(self.as_h()), self._series(sm.inverse(self.as_h()))

    def _series(self, h) -> MatSeries:
        n = len(h)
        th = self.theta
        coeffs: Dict[int, list] = {}
        for j in range(n):
            for k in range(n):
                if not h[j][k]:
                    continue
                d = th[k] - th[j]
                assert d.denominator == 1
                coeffs.setdefault(int(d), sm.zeros(n))[j][k] = h[j][k]
        return MatSeries(n, coeffs, K=None)


@dataclass
class GaugeWord:
    """Ordered product f_1 f_2 ... f_m acting by f_1[f_2[...f_m[A]]]."""
    factors: List = field(default_factory=list)

    def __mul__(self, other: "GaugeWord") -> "GaugeWord":
        return GaugeWord(self.factors + other.factors)

    def certify(self, theta: WeightVector):
        """Per-factor membership in the extended parahoric of theta."""
        report = [f.certify(theta) for f in self.factors]
        return all(ok for ok, _ in report), report


def identity_word() -> GaugeWord:
    return GaugeWord([])


def constant_word(m) -> GaugeWord:
    return GaugeWord([ConstantFactor(tuple(tuple(r) for r in m))])


def torus_word(lam: WeightVector) -> GaugeWord:
    return GaugeWord([TorusPower(lam)])


def levi_word(h, theta: WeightVector) -> GaugeWord:
    return GaugeWord([LeviFactor(tuple(tuple(r) for r in h), theta)])


def exp_word(position, value, i, n) -> GaugeWord:
    if position is None:
        value = tuple(value)
    return GaugeWord([ExpFactor(position, value, i, n)])


def exp_loop_word(terms, weight, theta: WeightVector) -> GaugeWord:
    tt = tuple((i, tuple(tuple(r) for r in m)) for i, m in terms)
    return GaugeWord([ExpLoopFactor(tt, Fraction(weight), theta)])


# ---------------------------------------------------------------------------
# the gauge action
# ---------------------------------------------------------------------------

def _apply_series_factor(factor, conn: LaurentConnection) -> LaurentConnection:
    n = conn.n
    p = conn.series()
    min_p = p.min_deg() or 0
    graded = isinstance(factor, (ExpLoopFactor, LeviFactor))
    if graded:
        th = factor.theta
        spread = int(math.ceil(float(max(th.entries) - min(th.entries))))
        buffer = conn.truncation - min(0, min_p) + 2 * spread + 4
    else:
        buffer = conn.truncation - min(0, min_p) + 4
    g, ginv = factor.series_pair(buffer)
    if graded:
        # every coefficient of g, ginv and p up to the buffer is exact: the
        # g-tail dropped beyond the buffer is of weight > truncation + spread
        # and cannot reach output degrees <= the truncation, so the usual
        # conservative K bookkeeping of mul() would only discard good terms
        g = MatSeries(n, g.coeffs, None)
        ginv = MatSeries(n, ginv.coeffs, None)
        p = MatSeries(n, p.coeffs, None)
    new_p = g.mul(p).mul(ginv).add(g.zderiv().mul(ginv))
    if graded:
        # theta-homogeneous factors of weight >= 0 respect the weight
        # filtration: the output at weight w only involves input weights <= w,
        # so the degree truncation carries over unchanged and the tail dropped
        # beyond it consists of higher-weight terms only.
        k_res = conn.truncation
        return LaurentConnection({i: m for i, m in new_p.coeffs.items() if i <= k_res},
                                 k_res, conn.spec)
    k_res = new_p.K if new_p.K is not None else conn.truncation
    k_res = min(k_res, conn.truncation)
    for i, m in new_p.coeffs.items():
        if i > k_res and not sm.is_zero(m, tol=0.0):
            raise TruncationOverflow(
                f"gauge transform produced a known coefficient at z^{i} beyond "
                f"the representable order {k_res}")
    return LaurentConnection({i: m for i, m in new_p.coeffs.items() if i <= k_res},
                             k_res, conn.spec)


def _apply_torus_power(lam: WeightVector, conn: LaurentConnection) -> LaurentConnection:
    """Ad_{z^lambda} shifts entry (j,k) by lambda_j - lambda_k and contributes
    lambda dz/z."""
    n = conn.n
    shifts = [[lam[j] - lam[k] for k in range(n)] for j in range(n)]
    out: Dict[int, list] = {}
    for i, m in conn.coeffs.items():
        for j in range(n):
            for k in range(n):
                if not m[j][k]:
                    continue
                s = shifts[j][k]
                if s.denominator != 1:
                    raise MembershipError(
                        f"torus power z^lambda shifts entry ({j},{k}) by the "
                        f"non-integer {s}")
                tgt = out.setdefault(i + int(s), sm.zeros(n))
                tgt[j][k] = tgt[j][k] + m[j][k]
    tgt = out.setdefault(0, sm.zeros(n))
    for j in range(n):
        tgt[j][j] = tgt[j][j] + lam[j]
    min_shift = min(int(shifts[j][k]) for j in range(n) for k in range(n)
                    if shifts[j][k].denominator == 1)
    k_res = conn.truncation + min(0, min_shift)
    for i, m in out.items():
        if i > k_res and not sm.is_zero(m, tol=0.0):
            raise TruncationOverflow(
                f"torus power pushed a coefficient to z^{i}, beyond order {k_res}")
    return LaurentConnection({i: m for i, m in out.items() if i <= k_res}, k_res, conn.spec)


def gauge_transform(word: GaugeWord, conn: LaurentConnection) -> LaurentConnection:
    """g[A] = Ad_g(A) + (dg) g^{-1}, applied factor by factor."""
    out = conn
    for factor in reversed(word.factors):
        if isinstance(factor, TorusPower):
            out = _apply_torus_power(factor.lam, out)
        else:
            out = _apply_series_factor(factor, out)
    return out
