"""Closed-form scaling functions, re-implemented independently.

The q-series here deliberately use different representations from the
simulator package (product formula for the theta constant, pentagonal-number
series for the eta function) so that agreement between the two code bases is
a genuine cross-check rather than a shared-code tautology.
"""

from __future__ import annotations

import math

import numpy as np

LN2 = math.log(2.0)

_TOL = 1e-17


def theta3(t: float) -> float:
    """Third Jacobi theta constant theta_3(0, e^{-pi t}) via the triple
    product: prod_m (1-q^{2m}) (1+q^{2m-1})^2 with q = e^{-pi t}."""
    t = float(t)
    if t <= 0.0:
        raise ValueError("theta3 needs t > 0")
    q = math.exp(-math.pi * t)
    prod = 1.0
    m = 1
    while True:
        even = q ** (2 * m)
        odd = q ** (2 * m - 1)
        prod *= (1.0 - even) * (1.0 + odd) ** 2
        if odd < _TOL:
            return prod
        m += 1


def eta(t: float) -> float:
    """Dedekind eta(it) via Euler's pentagonal-number series:
    e^{-pi t/12} * sum_k (-1)^k x^{k(3k-1)/2} with x = e^{-2 pi t}."""
    t = float(t)
    if t <= 0.0:
        raise ValueError("eta needs t > 0")
    x = math.exp(-2.0 * math.pi * t)
    total = 1.0
    k = 1
    while True:
        e_pos = k * (3 * k - 1) // 2
        e_neg = k * (3 * k + 1) // 2
        term = (-1) ** k * (x ** e_pos + x ** e_neg)
        total += term
        if x ** e_pos < _TOL:
            return math.exp(-math.pi * t / 12.0) * total
        k += 1


def lifshitz_J(x, lam: float):
    """Lifshitz boundary-profile function
    J(x) = -ln[ theta3(lam x) theta3(lam (1-x)) / (eta(2x) eta(2(1-x))) ]."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("J(x) needs 0 < x < 1")
    if lam <= 0.0:
        raise ValueError("J needs lam > 0")
    flat = np.atleast_1d(arr)
    out = np.empty_like(flat)
    for i, xi in enumerate(flat):
        out[i] = -(math.log(theta3(lam * xi)) + math.log(theta3(lam * (1 - xi)))
                   - math.log(eta(2 * xi)) - math.log(eta(2 * (1 - xi))))
    return out.reshape(arr.shape) if arr.shape else float(out[0])


def vol_term(l, L):
    """Page-corrected volume basis: 2 L m - 2^(4 L m - 2 L^2 - 1)/ln2,
    with the reflected cut m = min(l, L - l)."""
    l = np.asarray(l, dtype=float)
    L = np.asarray(L, dtype=float)
    m = np.minimum(l, L - l)
    return 2.0 * L * m - np.exp2(4.0 * L * m - 2.0 * L * L - 1.0) / LN2


def log_sine(l, L):
    """Chord-length logarithm ln[(L/pi) sin(pi l / L)] on 0 < l < L."""
    l = np.asarray(l, dtype=float)
    L = np.asarray(L, dtype=float)
    return np.log((L / np.pi) * np.sin(np.pi * l / L))


def page_model(l, L, coeff: dict) -> np.ndarray:
    """Evaluate the five-term arc ansatz
    v*vol + (c*L + c1) * g/3 + a*L - gamma from a coefficient mapping
    {name: {"value": ...}} as stored by the simulator's fit files."""
    val = {k: float(v["value"]) for k, v in coeff.items()}
    l = np.asarray(l, dtype=float)
    Lv = np.asarray(L, dtype=float)
    g = log_sine(l, Lv)
    return (val.get("v", 0.0) * vol_term(l, Lv)
            + (val.get("c", 0.0) * Lv + val.get("c1", 0.0)) * g / 3.0
            + val.get("a", 0.0) * Lv - val.get("gamma", 0.0))
