# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: phantom evaluation and wavepacket accumulation.

Mirrors ``_fallback.py`` exactly; see that module for the descriptor layout
and the stability argument for the folded exponent.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, sin


def eval_phantom(int code, double[::1] params, double[:, ::1] pts):
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n)
    cdef double[::1] o = out
    cdef Py_ssize_t i, k
    cdef double r2, dx, radius, amp, sigma, rt, side, u
    if code == 0 or code == 1:
        radius = params[d]
        amp = params[d + 1]
        with nogil:
            for i in range(n):
                r2 = 0.0
                for k in range(d):
                    dx = pts[i, k] - params[k]
                    r2 += dx * dx
                if code == 0:
                    if r2 <= radius * radius:
                        o[i] = amp
                else:
                    u = r2 / (radius * radius)
                    if u < 1.0:
                        o[i] = amp * exp(1.0 - 1.0 / (1.0 - u))
    elif code == 2:
        radius = params[d]
        amp = params[d + 1]
        with nogil:
            for i in range(n):
                r2 = 0.0
                side = 0.0
                for k in range(d):
                    dx = pts[i, k] - params[k]
                    r2 += dx * dx
                    side += (pts[i, k] - params[d + 2 + k]) * params[2 * d + 2 + k]
                if r2 <= radius * radius and side <= 0.0:
                    o[i] = amp
    elif code == 3:
        sigma = params[d]
        amp = params[d + 1]
        rt = params[d + 2]
        with nogil:
            for i in range(n):
                r2 = 0.0
                for k in range(d):
                    dx = pts[i, k] - params[k]
                    r2 += dx * dx
                if r2 <= rt * rt:
                    o[i] = amp * exp(-r2 / (2.0 * sigma * sigma))
    else:
        raise ValueError(f"unknown phantom kind code {code}")
    return out


def sb_accumulate_batch(double[:, ::1] pts, double[::1] weights, double[::1] fvals,
                        double[:, ::1] res, double[:, ::1] ims, double h):
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t d = pts.shape[1]
    cdef Py_ssize_t m = res.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(m, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double q, ph, g, dx, e, acc_re, acc_im, inv2h, invh
    inv2h = 1.0 / (2.0 * h)
    invh = 1.0 / h
    with nogil:
        for j in range(m):
            acc_re = 0.0
            acc_im = 0.0
            for i in range(n):
                q = 0.0
                ph = 0.0
                for k in range(d):
                    dx = res[j, k] - pts[i, k]
                    q += dx * dx
                    ph += dx * ims[j, k]
                e = -q * inv2h
                if e > -745.0:
                    g = weights[i] * fvals[i] * exp(e)
                    acc_re += g * cos(ph * invh)
                    acc_im -= g * sin(ph * invh)
            o[j] = acc_re + 1j * acc_im
    return out
