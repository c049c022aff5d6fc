"""Tiny dense-matrix helpers generic over the entry type.

Matrices are lists of lists.  Entries may be ints, Fractions, QQi or python
complex; arithmetic stays exact as long as every entry is exact.  Nothing here
is meant to scale past desk size (n <= 6 or so).
"""

from __future__ import annotations

import numpy as np

from .exactnum import QQi


def zeros(n, m=None):
    m = n if m is None else m
    return [[0] * m for _ in range(n)]


def eye(n):
    return [[1 if j == k else 0 for k in range(n)] for j in range(n)]


def shape(a):
    return len(a), len(a[0]) if a else 0


def madd(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def msub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mneg(a):
    return [[-x for x in row] for row in a]


def smul(c, a):
    return [[c * x for x in row] for row in a]


def mmul(a, b):
    n, k = shape(a)
    k2, m = shape(b)
    assert k == k2, "shape mismatch"
    out = zeros(n, m)
    for i in range(n):
        ra = a[i]
        for p in range(k):
            x = ra[p]
            if not x:
                continue
            rb = b[p]
            ro = out[i]
            for j in range(m):
                if rb[j]:
                    ro[j] = ro[j] + x * rb[j]
    return out


def commutator(a, b):
    return msub(mmul(a, b), mmul(b, a))


def mcopy(a):
    return [list(row) for row in a]


def trace(a):
    t = 0
    for j in range(len(a)):
        t = t + a[j][j]
    return t


def is_zero(a, tol=0.0):
    for row in a:
        for x in row:
            if abs(complex(x)) > tol:
                return False
    return True


def max_abs(a):
    m = 0.0
    for row in a:
        for x in row:
            m = max(m, abs(complex(x)))
    return m


def to_numpy(a):
    n, m = shape(a)
    out = np.zeros((n, m), dtype=complex)
    for j in range(n):
        for k in range(m):
            out[j, k] = complex(a[j][k])
    return out


def from_numpy(a):
    return [[complex(x) for x in row] for row in np.asarray(a)]


def _pivot_weight(x):
    # prefer exact pivots over floats, otherwise the largest magnitude
    return abs(complex(x))


def solve(a, rhs):
    """Solve a x = rhs by Gaussian elimination; rhs is a list of columns-lists
    or a matrix.  Works over exact or float entries; raises on singularity."""
    from fractions import Fraction

    n, m = shape(a)
    assert n == m
    aug = [list(a[i]) + list(rhs[i]) for i in range(n)]
    # keep int entries exact under division
    aug = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in aug]
    w = len(aug[0])
    for col in range(n):
        piv, best = None, 0.0
        for r in range(col, n):
            v = _pivot_weight(aug[r][col])
            if v > best:
                piv, best = r, v
        if piv is None:
            raise ZeroDivisionError("singular matrix in solve")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if f:
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:w] for row in aug]


def inverse(a):
    return solve(a, eye(len(a)))


def mat_exp_nilpotent(x):
    """exp of a nilpotent matrix by its terminating series (exact-capable)."""
    from fractions import Fraction

    n = len(x)
    out = eye(n)
    term = mcopy(x)
    fact = 1
    k = 1
    while not is_zero(term):
        if k > n:
            raise ValueError("matrix is not nilpotent")
        out = madd(out, [[e * Fraction(1, fact) if _exact_entry(e) else e / fact
                          for e in row] for row in term])
        term = mmul(term, x)
        k += 1
        fact *= k
    return out


def _exact_entry(e):
    from fractions import Fraction
    return isinstance(e, (int, Fraction, QQi))
