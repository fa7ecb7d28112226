# cython: language_level=3
"""Compiled scalar kernels. Must stay signature-compatible with ``_pykernels``."""
from libc.math cimport atan2, cos, exp, fabs, hypot, log, log1p, sin

import numpy as np

cdef double[9] LANCZOS = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double HALF_LOG_2PI = 0.91893853320467274178


def lanczos_ln_gamma(double x):
    cdef double shift = 0.0
    cdef double acc
    cdef double t
    cdef int i
    if x < 0.5:
        shift = log(x)
        x += 1.0
    x -= 1.0
    acc = LANCZOS[0]
    for i in range(1, 9):
        acc += LANCZOS[i] / (x + i)
    t = x + 7.5
    return HALF_LOG_2PI + (x + 0.5) * log(t) - t + log(acc) - shift


def series_1f1(double a, double c, z, int max_terms, double rel_tol):
    cdef double zr = z.real
    cdef double zi = z.imag
    cdef double zabs = hypot(zr, zi)
    cdef double tr = 1.0, ti = 0.0, sr = 1.0, si = 0.0
    cdef double f, nr
    cdef int n
    for n in range(max_terms):
        f = (a + n) / ((c + n) * (n + 1))
        nr = f * (tr * zr - ti * zi)
        ti = f * (tr * zi + ti * zr)
        tr = nr
        sr += tr
        si += ti
        if tr == 0.0 and ti == 0.0:
            return complex(sr, si), n + 1, True
        if hypot(tr, ti) <= rel_tol * hypot(sr, si):
            if fabs((a + n + 1) / ((c + n + 1) * (n + 2))) * zabs < 1.0:
                return complex(sr, si), n + 1, True
    return complex(sr, si), max_terms, False


def series_2f1(double a, double b, double c, z, int max_terms, double rel_tol):
    cdef double zr = z.real
    cdef double zi = z.imag
    cdef double zabs = hypot(zr, zi)
    cdef double tr = 1.0, ti = 0.0, sr = 1.0, si = 0.0
    cdef double f, nr
    cdef int n
    for n in range(max_terms):
        f = (a + n) * (b + n) / ((c + n) * (n + 1))
        nr = f * (tr * zr - ti * zi)
        ti = f * (tr * zi + ti * zr)
        tr = nr
        sr += tr
        si += ti
        if tr == 0.0 and ti == 0.0:
            return complex(sr, si), n + 1, True
        if hypot(tr, ti) <= rel_tol * hypot(sr, si):
            if fabs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2))) * zabs < 1.0:
                return complex(sr, si), n + 1, True
    return complex(sr, si), max_terms, False


cdef inline double softplus(double u):
    if u > 0:
        return u + log1p(exp(-u))
    return log1p(exp(u))


def euler_2f1_sums(double a, double b, double c, double complex[:] zeta,
                   double[:] h, double[:] u_lo, double[:] u_hi):
    """Trapezoid sums of exp(b u) (1+e^u)^(a-c) (1+zeta e^u)^(-a) at steps h and 2h."""
    cdef Py_ssize_t n = zeta.shape[0]
    out_h = np.empty(n, dtype=np.complex128)
    out_2h = np.empty(n, dtype=np.complex128)
    cdef double complex[:] oh = out_h
    cdef double complex[:] o2 = out_2h
    cdef Py_ssize_t i
    cdef long j, m
    cdef double zr, zi, lnabs, argz, cr, ci, hh, u, e, wr, wi, lr, li, mag, tr, ti
    cdef double sr, si, s2r, s2i, sp
    for i in range(n):
        zr = zeta[i].real
        zi = zeta[i].imag
        lnabs = 0.5 * log(zr * zr + zi * zi)
        argz = atan2(zi, zr)
        cr = cos(argz)
        ci = sin(argz)
        hh = h[i]
        m = <long>((u_hi[i] - u_lo[i]) / hh) + 1
        sr = 0.0
        si = 0.0
        s2r = 0.0
        s2i = 0.0
        for j in range(m):
            u = u_lo[i] + j * hh
            sp = softplus(u)
            if lnabs + u <= 0.0:
                e = exp(u)
                wr = 1.0 + zr * e
                wi = zi * e
                lr = 0.5 * log(wr * wr + wi * wi)
                li = atan2(wi, wr)
            else:
                e = exp(-u - lnabs)
                wr = 1.0 + e * cr
                wi = -e * ci
                lr = lnabs + u + 0.5 * log(wr * wr + wi * wi)
                li = argz + atan2(wi, wr)
            lr = b * u - (c - a) * sp - a * lr
            li = -a * li
            mag = exp(lr)
            tr = mag * cos(li)
            ti = mag * sin(li)
            sr += tr
            si += ti
            if j % 2 == 0:
                s2r += tr
                s2i += ti
        oh[i] = hh * sr + 1j * (hh * si)
        o2[i] = 2.0 * hh * s2r + 1j * (2.0 * hh * s2i)
    return out_h, out_2h
