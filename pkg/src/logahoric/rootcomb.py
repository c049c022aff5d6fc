"""Dynkin-diagram combinatorics for the simple types A-G.

Finite and untwisted affine Cartan matrices are generated from explicit
simple-root realizations (Bourbaki coordinates, exact rational arithmetic),
with node 0 the affine node attached via minus the highest root.  On top of
that sit the subset counts for parabolic/parahoric conjugacy classes and the
classification of the reductive type cut out by a subset of affine nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


class InvalidRootDatum(ValueError):
    pass


def _frac_vec(*xs) -> Tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def _e(i, dim):
    v = [Fraction(0)] * dim
    v[i] = Fraction(1)
    return tuple(v)


def _vadd(*vs):
    return tuple(sum(col) for col in zip(*vs))


def _vscale(c, v):
    c = Fraction(c)
    return tuple(c * x for x in v)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def simple_roots(type_letter: str, rank: int) -> Tuple[List[Tuple[Fraction, ...]], Tuple[Fraction, ...]]:
    """Simple roots and highest root in an explicit rational realization."""
    t, n = type_letter, rank
    if t == "A":
        dim = n + 1
        roots = [_vadd(_e(i, dim), _vscale(-1, _e(i + 1, dim))) for i in range(n)]
        high = _vadd(_e(0, dim), _vscale(-1, _e(n, dim)))
    elif t == "B":
        dim = n
        roots = [_vadd(_e(i, dim), _vscale(-1, _e(i + 1, dim))) for i in range(n - 1)]
        roots.append(_e(n - 1, dim))
        high = _vadd(_e(0, dim), _e(1, dim))
    elif t == "C":
        dim = n
        roots = [_vadd(_e(i, dim), _vscale(-1, _e(i + 1, dim))) for i in range(n - 1)]
        roots.append(_vscale(2, _e(n - 1, dim)))
        high = _vscale(2, _e(0, dim))
    elif t == "D":
        dim = n
        roots = [_vadd(_e(i, dim), _vscale(-1, _e(i + 1, dim))) for i in range(n - 1)]
        roots.append(_vadd(_e(n - 2, dim), _e(n - 1, dim)))
        high = _vadd(_e(0, dim), _e(1, dim))
    elif t == "G":
        dim = 3
        roots = [
            _vadd(_e(0, dim), _vscale(-1, _e(1, dim))),
            _vadd(_vscale(-2, _e(0, dim)), _e(1, dim), _e(2, dim)),
        ]
        high = _vadd(_vscale(-1, _e(0, dim)), _vscale(-1, _e(1, dim)), _vscale(2, _e(2, dim)))
    elif t == "F":
        dim = 4
        roots = [
            _vadd(_e(1, dim), _vscale(-1, _e(2, dim))),
            _vadd(_e(2, dim), _vscale(-1, _e(3, dim))),
            _e(3, dim),
            _vscale(Fraction(1, 2), _vadd(_e(0, dim), _vscale(-1, _e(1, dim)),
                                          _vscale(-1, _e(2, dim)), _vscale(-1, _e(3, dim)))),
        ]
        high = _vadd(_e(0, dim), _e(1, dim))
    elif t == "E":
        dim = 8
        half = Fraction(1, 2)
        a1 = tuple([half, -half, -half, -half, -half, -half, -half, half])
        a2 = _vadd(_e(0, dim), _e(1, dim))
        chain = [_vadd(_e(i + 1, dim), _vscale(-1, _e(i, dim))) for i in range(6)]
        # Bourbaki: alpha_3 = e2-e1, alpha_4 = e3-e2, ..., alpha_8 = e7-e6
        full = [a1, a2] + chain[:6]
        roots = full[:n]
        if n == 8:
            high = _vadd(_e(6, dim), _e(7, dim))
        elif n == 7:
            high = _vadd(_e(7, dim), _vscale(-1, _e(6, dim)))
        else:  # E6
            high = tuple([half, half, half, half, half, -half, -half, half])
    else:
        raise InvalidRootDatum(f"unknown type letter {t!r}")
    return roots, high


def _cartan_entry(ai, aj):
    # <alpha_i, alpha_j^vee> = 2 (ai, aj) / (aj, aj)
    return int(2 * _dot(ai, aj) / _dot(aj, aj))


def _cartan_from_roots(roots) -> List[List[int]]:
    return [[_cartan_entry(ai, aj) for aj in roots] for ai in roots]


@dataclass(frozen=True)
class RootDatum:
    type_letter: str
    rank: int
    cartan_matrix: Tuple[Tuple[int, ...], ...] = field(init=False)
    affine_cartan_matrix: Tuple[Tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        t, n = self.type_letter, self.rank
        if t not in VALID_RANKS or not VALID_RANKS[t](n):
            raise InvalidRootDatum(f"rank {n} is not valid for type {t}")
        roots, high = simple_roots(t, n)
        cart = _cartan_from_roots(roots)
        aff = _cartan_from_roots([_vscale(-1, high)] + roots)
        object.__setattr__(self, "cartan_matrix", tuple(map(tuple, cart)))
        object.__setattr__(self, "affine_cartan_matrix", tuple(map(tuple, aff)))
        for j in range(n):
            assert cart[j][j] == 2
            for k in range(n):
                if j != k:
                    assert cart[j][k] <= 0
                assert aff[j + 1][k + 1] == cart[j][k]


@dataclass(frozen=True)
class NodeSubset:
    base: RootDatum
    nodes: frozenset
    affine: bool = True

    def __post_init__(self):
        full = set(range(0, self.base.rank + 1)) if self.affine else set(range(1, self.base.rank + 1))
        if not set(self.nodes) <= full:
            raise InvalidRootDatum(f"nodes {set(self.nodes)} not in the diagram {sorted(full)}")
        if self.affine and set(self.nodes) == full:
            raise InvalidRootDatum("parahoric subsets must be proper in the affine node set")


def parabolic_class_count(datum: RootDatum) -> int:
    """Standard parabolics up to conjugacy: one per subset of the finite diagram."""
    return 2 ** datum.rank


def parahoric_class_count(datum: RootDatum) -> int:
    """One class per proper subset of the affine node set (simple G, untwisted)."""
    return 2 ** (datum.rank + 1) - 1


# canonical Cartan matrices for classification, cached per (letter, rank)
_CANON = {}


def _canonical_cartan(letter, rank):
    key = (letter, rank)
    if key not in _CANON:
        roots, _ = simple_roots(letter, rank)
        _CANON[key] = _cartan_from_roots(roots)
    return _CANON[key]


def _candidates(rank):
    for letter, ok in VALID_RANKS.items():
        if ok(rank):
            yield letter
    # low-rank coincidences live under their canonical letter only (A1=B1=C1 etc.)


def _row_profile(mat):
    return sorted(tuple(sorted(row)) for row in mat)


def _cartan_equal_up_to_perm(m1, m2):
    n = len(m1)
    if len(m2) != n:
        return False
    if _row_profile(m1) != _row_profile(m2):
        return False
    idx = range(n)
    for perm in itertools.permutations(idx):
        ok = True
        for j in idx:
            for k in idx:
                if m1[j][k] != m2[perm[j]][perm[k]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def classify_cartan_block(mat) -> Tuple[str, int]:
    """Identify an irreducible Cartan matrix up to simultaneous permutation."""
    rank = len(mat)
    for letter in _candidates(rank):
        if _cartan_equal_up_to_perm(mat, _canonical_cartan(letter, rank)):
            return (letter, rank)
    raise InvalidRootDatum(f"submatrix of rank {rank} is not a valid irreducible Cartan matrix")


def _connected_components(nodes: Sequence[int], mat) -> List[List[int]]:
    nodes = list(nodes)
    seen = set()
    comps = []
    for start in nodes:
        if start in seen:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in nodes:
                if w not in seen and mat[v][w] != 0:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_positive_definite_cartan(mat) -> bool:
    """Symmetrizability + positive definiteness via exact leading minors."""
    n = len(mat)
    # symmetrize: d_j * a_jk = d_k * a_kj with positive rational d
    d = [None] * n
    comps = _connected_components(list(range(n)), mat)
    for comp in comps:
        d[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            v = stack.pop()
            for w in comp:
                if d[w] is None and mat[v][w] != 0:
                    # d_w = d_v * a_vw / a_wv
                    d[w] = d[v] * Fraction(mat[v][w], mat[w][v])
                    stack.append(w)
    sym = [[d[j] * Fraction(mat[j][k]) for k in range(n)] for j in range(n)]
    for j in range(n):
        for k in range(n):
            if sym[j][k] != sym[k][j]:
                return False
    # leading principal minors by fraction-free-ish Gaussian elimination
    a = [row[:] for row in sym]
    for col in range(n):
        if a[col][col] <= 0:
            return False
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return True


@dataclass(frozen=True)
class LeviType:
    blocks: Tuple[Tuple[str, int], ...]
    torus_rank: int


def levi_type_of_affine_subset(subset: NodeSubset) -> LeviType:
    """Cartan type of the subdiagram spanned by the retained nodes, plus the
    corank as central torus rank.  Works for affine and finite subsets."""
    base = subset.base
    mat = base.affine_cartan_matrix if subset.affine else None
    if subset.affine:
        nodes = sorted(subset.nodes)
        sub = [[mat[j][k] for k in nodes] for j in nodes]
    else:
        nodes = sorted(subset.nodes)
        sub = [[base.cartan_matrix[j - 1][k - 1] for k in nodes] for j in nodes]
    comps = _connected_components(range(len(sub)), sub)
    blocks = []
    for comp in comps:
        block = [[sub[j][k] for k in comp] for j in comp]
        assert is_positive_definite_cartan(block), "subdiagram block is not finite type"
        blocks.append(classify_cartan_block(block))
    blocks.sort()
    return LeviType(blocks=tuple(blocks), torus_rank=base.rank - len(nodes))
