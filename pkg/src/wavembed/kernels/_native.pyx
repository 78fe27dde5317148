# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as the numpy reference module."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt

cnp.import_array()

NAME = "native"


def wave_planes(double[:, ::1] amp, double[:, ::1] freq,
                double[:, ::1] phase, double[::1] pos):
    """Real and imaginary planes of amp * exp(i*(freq*pos + phase))."""
    cdef Py_ssize_t n = amp.shape[0]
    cdef Py_ssize_t d = amp.shape[1]
    re_arr = np.empty((n, d), dtype=np.float64)
    im_arr = np.empty((n, d), dtype=np.float64)
    cdef double[:, ::1] re = re_arr
    cdef double[:, ::1] im = im_arr
    cdef Py_ssize_t i, j
    cdef double a, p
    for i in range(n):
        p = pos[i]
        for j in range(d):
            a = freq[i, j] * p + phase[i, j]
            re[i, j] = amp[i, j] * cos(a)
            im[i, j] = amp[i, j] * sin(a)
    return re_arr, im_arr


def wave_planes_grad(double[:, ::1] amp, double[:, ::1] freq,
                     double[:, ::1] phase, double[::1] pos,
                     double[:, ::1] g_re, double[:, ::1] g_im):
    """Backward of wave_planes; returns (g_amp, g_angle)."""
    cdef Py_ssize_t n = amp.shape[0]
    cdef Py_ssize_t d = amp.shape[1]
    ga_arr = np.empty((n, d), dtype=np.float64)
    gg_arr = np.empty((n, d), dtype=np.float64)
    cdef double[:, ::1] ga = ga_arr
    cdef double[:, ::1] gg = gg_arr
    cdef Py_ssize_t i, j
    cdef double a, c, s, p
    for i in range(n):
        p = pos[i]
        for j in range(d):
            a = freq[i, j] * p + phase[i, j]
            c = cos(a)
            s = sin(a)
            ga[i, j] = g_re[i, j] * c + g_im[i, j] * s
            gg[i, j] = amp[i, j] * (g_im[i, j] * c - g_re[i, j] * s)
    return ga_arr, gg_arr


def modulus(double[:, ::1] re, double[:, ::1] im):
    """Elementwise sqrt(re^2 + im^2)."""
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t d = re.shape[1]
    out_arr = np.empty((n, d), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(d):
            out[i, j] = sqrt(re[i, j] * re[i, j] + im[i, j] * im[i, j])
    return out_arr


def modulus_grad(double[:, ::1] re, double[:, ::1] im,
                 double[:, ::1] mod, double[:, ::1] g_mod):
    """Backward of modulus; subgradient 0 where the modulus is 0."""
    cdef Py_ssize_t n = re.shape[0]
    cdef Py_ssize_t d = re.shape[1]
    gre_arr = np.empty((n, d), dtype=np.float64)
    gim_arr = np.empty((n, d), dtype=np.float64)
    cdef double[:, ::1] gre = gre_arr
    cdef double[:, ::1] gim = gim_arr
    cdef Py_ssize_t i, j
    cdef double scale
    for i in range(n):
        for j in range(d):
            if mod[i, j] == 0.0:
                gre[i, j] = 0.0
                gim[i, j] = 0.0
            else:
                scale = g_mod[i, j] / mod[i, j]
                gre[i, j] = scale * re[i, j]
                gim[i, j] = scale * im[i, j]
    return gre_arr, gim_arr
