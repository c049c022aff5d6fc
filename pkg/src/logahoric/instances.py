"""Seeded random instance generators: weights, orbits in h_theta, connections
in A_theta, and random parahoric gauge words.  Everything is driven by a
numpy Generator so a single seed reproduces a whole suite."""

from __future__ import annotations

from fractions import Fraction
from typing import List

import numpy as np

from . import smallmat as sm
from .exactnum import QQi
from .liecore import GroupSpec, WeightVector
from .loopconn import (GaugeWord, LaurentConnection, exp_loop_word, exp_word,
                       gauge_transform, identity_word, levi_word)


def rand_fraction(rng, denom_max=4, num_span=2) -> Fraction:
    q = int(rng.integers(1, denom_max + 1))
    p = int(rng.integers(-num_span * q, num_span * q + 1))
    return Fraction(p, q)


def random_theta(rng, n, denom_max=4, span=1) -> WeightVector:
    return WeightVector(tuple(rand_fraction(rng, denom_max, span) for _ in range(n)))


class OrbitInstance:
    """theta, tau, sigma and a compatible nilpotent n; orbit_rep = phi+sigma+n
    with phi = theta + tau, and the base connection (tau+sigma+sum a_i z^i)dz/z
    carrying the entries of n at degree i = theta_k - theta_j."""

    def __init__(self, theta, tau, sigma, nil, spec):
        self.theta = theta
        self.tau = tau
        self.sigma = tuple(sigma)
        self.nil = nil
        self.spec = spec
        self.phi = theta + tau

    def orbit_rep(self):
        n = len(self.theta)
        rep = sm.mcopy(self.nil)
        for j in range(n):
            rep[j][j] = rep[j][j] + QQi(self.phi[j]) + self.sigma[j]
        return rep

    def base_connection(self, truncation=4) -> LaurentConnection:
        n = len(self.theta)
        coeffs = {0: sm.zeros(n)}
        for j in range(n):
            coeffs[0][j][j] = QQi(self.tau[j]) + self.sigma[j]
        for j in range(n):
            for k in range(n):
                if j != k and self.nil[j][k]:
                    d = self.theta[k] - self.theta[j]
                    assert d.denominator == 1
                    coeffs.setdefault(int(d), sm.zeros(n))[j][k] = self.nil[j][k]
        return LaurentConnection(coeffs, truncation, self.spec)


def random_orbit(rng, spec: GroupSpec, denom_max=4, sigma_on=True) -> OrbitInstance:
    """Orbit data with deliberate coincidences so nilpotent parts occur."""
    n = spec.n
    theta = list(random_theta(rng, n, denom_max).entries)
    tau = [rand_fraction(rng, denom_max, 1) for _ in range(n)]
    sigma = [QQi(0, Fraction(int(rng.integers(-2, 3)), 4)) if sigma_on and rng.random() < 0.5
             else QQi(0) for _ in range(n)]
    # with some probability align index j with an earlier index, shifting theta
    # by an integer, so that (phi, sigma) coincide and a nilpotent entry fits
    for j in range(1, n):
        if rng.random() < 0.6:
            k = int(rng.integers(0, j))
            shift = int(rng.integers(-1, 2))
            theta[j] = theta[k] + shift
            tau[j] = tau[k] - shift
            sigma[j] = sigma[k]
    theta = WeightVector(tuple(theta))
    tau = WeightVector(tuple(tau))
    phi = theta + tau
    nil = sm.zeros(n)
    for j in range(n):
        for k in range(j + 1, n):
            ok = (phi[j] == phi[k] and sigma[j] == sigma[k]
                  and (theta[j] - theta[k]).denominator == 1)
            if ok and rng.random() < 0.7:
                nil[j][k] = 1
    return OrbitInstance(theta, tau, sigma, nil, spec)


def random_connection_in_a_theta(rng, theta: WeightVector, spec: GroupSpec,
                                 truncation=3, density=0.4) -> LaurentConnection:
    """Exact random element of A_theta: entries at (j,k,i) with
    i + theta_j - theta_k >= 0."""
    n = spec.n
    coeffs = {}
    lo = -int(max(theta.entries) - min(theta.entries)) - 1
    for i in range(lo, truncation + 1):
        m = sm.zeros(n)
        hit = False
        for j in range(n):
            for k in range(n):
                if i + theta[j] - theta[k] >= 0 and rng.random() < density:
                    m[j][k] = QQi(rand_fraction(rng, 2, 1), rand_fraction(rng, 2, 1))
                    hit = hit or bool(m[j][k])
        if hit:
            coeffs[i] = m
    return LaurentConnection(coeffs, truncation, spec)


def random_levi_h(rng, theta: WeightVector):
    """Invertible element of the centralizer of e^{2 pi i theta}: unipotent
    upper part over integer weight differences plus an exact diagonal."""
    n = len(theta)
    h = sm.eye(n)
    for j in range(n):
        h[j][j] = Fraction(int(rng.integers(1, 3)))
        for k in range(j + 1, n):
            if (theta[j] - theta[k]).denominator == 1 and rng.random() < 0.6:
                h[j][k] = QQi(rand_fraction(rng, 2, 1), rand_fraction(rng, 2, 1))
    return h


def random_parahoric_word(rng, theta: WeightVector, spec: GroupSpec,
                          length=3, max_i=2) -> GaugeWord:
    """Word in the extended parahoric built from generator classes: Levi
    factors z^{-theta} h z^{theta}, root-space exp(X z^i) with
    alpha(theta)+i >= 0, diagonal exp factors with i > 0, and homogeneous
    positive-weight loop exponentials."""
    n = spec.n
    word = identity_word()
    for _ in range(length):
        kind = rng.choice(["levi", "exp", "diag", "loop"])
        if kind == "levi":
            word = word * levi_word(random_levi_h(rng, theta), theta)
        elif kind == "exp":
            picks = [(j, k, i) for j in range(n) for k in range(n) if j != k
                     for i in range(0, max_i + 1)
                     if theta[j] - theta[k] + i >= 0]
            j, k, i = picks[int(rng.integers(0, len(picks)))]
            val = QQi(rand_fraction(rng, 2, 1), rand_fraction(rng, 2, 1))
            word = word * exp_word((j, k), val, i, n)
        elif kind == "diag":
            i = int(rng.integers(1, max_i + 1))
            diag = tuple(rand_fraction(rng, 2, 1) for _ in range(n))
            word = word * exp_word(None, diag, i, n)
        else:
            picks = [(j, k, i) for j in range(n) for k in range(n) if j != k
                     for i in range(0, max_i + 1)
                     if theta[j] - theta[k] + i > 0]
            j, k, i = picks[int(rng.integers(0, len(picks)))]
            r = theta[j] - theta[k] + i
            m = sm.zeros(n)
            m[j][k] = QQi(rand_fraction(rng, 2, 1))
            word = word * exp_loop_word([(i, m)], r, theta)
    return word


def scrambled_connection(rng, orbit: OrbitInstance, truncation=4, length=2):
    """Base connection of the orbit pushed by a random parahoric word; still
    lies over orbit_rep because positive-weight generators fix the weight-zero
    part and Levi factors move it inside the orbit."""
    spread = int(max(orbit.theta.entries) - min(orbit.theta.entries))
    word = random_parahoric_word(rng, orbit.theta, orbit.spec, length=length)
    a0 = orbit.base_connection(truncation + spread)
    a = gauge_transform(word, a0)
    # weight-zero entries live at degrees up to the spread of theta; graded
    # factors preserve the truncation, so nothing may have been lost
    assert a.truncation >= spread, (a.truncation, spread)
    return a, word, a0
