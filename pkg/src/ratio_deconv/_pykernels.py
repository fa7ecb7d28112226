"""Pure-Python twin of ``_ckernels``; used when the extension is unavailable."""
from __future__ import annotations

import math

import numpy as np

LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_2PI = 0.91893853320467274178


def lanczos_ln_gamma(x: float) -> float:
    shift = 0.0
    if x < 0.5:
        shift = math.log(x)
        x += 1.0
    x -= 1.0
    acc = LANCZOS[0]
    for i in range(1, 9):
        acc += LANCZOS[i] / (x + i)
    t = x + 7.5
    return HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(acc) - shift


def series_1f1(a: float, c: float, z, max_terms: int, rel_tol: float):
    z = complex(z)
    zabs = abs(z)
    term = 1.0 + 0j
    total = 1.0 + 0j
    for n in range(max_terms):
        term *= (a + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total, n + 1, True
        if abs(term) <= rel_tol * abs(total):
            if abs((a + n + 1) / ((c + n + 1) * (n + 2))) * zabs < 1.0:
                return total, n + 1, True
    return total, max_terms, False


def series_2f1(a: float, b: float, c: float, z, max_terms: int, rel_tol: float):
    z = complex(z)
    zabs = abs(z)
    term = 1.0 + 0j
    total = 1.0 + 0j
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total, n + 1, True
        if abs(term) <= rel_tol * abs(total):
            if abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2))) * zabs < 1.0:
                return total, n + 1, True
    return total, max_terms, False


def euler_2f1_sums(a, b, c, zeta, h, u_lo, u_hi):
    """Trapezoid sums of exp(b u) (1+e^u)^(a-c) (1+zeta e^u)^(-a) at steps h and 2h."""
    zeta = np.asarray(zeta, dtype=np.complex128)
    out_h = np.empty(zeta.shape[0], dtype=np.complex128)
    out_2h = np.empty_like(out_h)
    for i, z in enumerate(zeta):
        m = int((u_hi[i] - u_lo[i]) / h[i]) + 1
        u = u_lo[i] + h[i] * np.arange(m)
        lnabs = math.log(abs(z))
        big = lnabs + u > 0.0
        log_w = np.empty(m, dtype=np.complex128)
        us = u[~big]
        log_w[~big] = np.log(1.0 + z * np.exp(us))
        ub = u[big]
        log_w[big] = np.log(z) + ub + np.log(1.0 + np.exp(-ub) / z)
        terms = np.exp(b * u - (c - a) * np.logaddexp(0.0, u) - a * log_w)
        out_h[i] = h[i] * terms.sum()
        out_2h[i] = 2.0 * h[i] * terms[::2].sum()
    return out_h, out_2h
