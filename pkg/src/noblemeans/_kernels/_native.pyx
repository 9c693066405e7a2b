# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: substitution rounds, window counting, exponential sums."""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

M_TWO_PI = -6.283185307179586476925287


def substitute(codes, int m, choices):
    """One substitution round over coded letters (a=0, b=1); see the fallback docstring."""
    cdef const unsigned char[::1] c = np.ascontiguousarray(codes, dtype=np.uint8)
    cdef const unsigned char[::1] ch = np.ascontiguousarray(choices, dtype=np.uint8)
    cdef Py_ssize_t n = c.shape[0]
    cdef Py_ssize_t i, n_a = 0
    for i in range(n):
        if c[i] == 0:
            n_a += 1
    if ch.shape[0] != n_a:
        raise ValueError(f"need one choice per 'a' ({n_a}), got {ch.shape[0]}")
    out_arr = np.zeros(n + m * n_a, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef Py_ssize_t pos = 0, ci = 0
    for i in range(n):
        if c[i] == 0:
            out[pos + ch[ci]] = 1
            pos += m + 1
            ci += 1
        else:
            pos += 1  # image of b is a single a, already 0
    return out_arr


def window_counts(codes, int width):
    """Occurrence counts of every length-`width` window, indexed by its base-2 value."""
    if width < 1:
        raise ValueError("window width must be >= 1")
    cdef const unsigned char[::1] c = np.ascontiguousarray(codes, dtype=np.uint8)
    cdef Py_ssize_t n = c.shape[0]
    table_arr = np.zeros(1 << width, dtype=np.int64)
    cdef long long[::1] table = table_arr
    if n < width:
        return table_arr
    cdef unsigned long long value = 0
    cdef unsigned long long mask = (1ULL << width) - 1
    cdef Py_ssize_t i
    for i in range(n):
        value = ((value << 1) | c[i]) & mask
        if i >= width - 1:
            table[value] += 1
    return table_arr


def phase_sums(positions, k_values):
    """g(k) = sum_j exp(-2*pi*i*k*x_j) for every k."""
    cdef const double[::1] xs = np.ascontiguousarray(positions, dtype=np.float64)
    cdef const double[::1] ks = np.ascontiguousarray(k_values, dtype=np.float64)
    out_arr = np.empty(ks.shape[0], dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double arg, re, im, w
    for i in range(ks.shape[0]):
        w = M_TWO_PI * ks[i]
        re = 0.0
        im = 0.0
        for j in range(xs.shape[0]):
            arg = w * xs[j]
            re += cos(arg)
            im += sin(arg)
        out[i] = re + 1j * im
    return out_arr
