# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled interference kernel.

One thread handles one wave vector at a time and sums the scatterers in
storage order, so results do not depend on the thread count.
"""
import numpy as np

cimport cython
from cython.parallel cimport prange
from libc.math cimport cos, sin, fabs


cdef inline double _intensity(double qx, double qy, const double[::1] x,
                              const double[::1] y, double area) noexcept nogil:
    cdef Py_ssize_t j
    cdef double phase, c, s, t
    cdef double re = 0.0, re_err = 0.0, im = 0.0, im_err = 0.0
    for j in range(x.shape[0]):
        phase = qx * x[j] + qy * y[j]
        c = cos(phase)
        s = sin(phase)
        # Neumaier update for both parts
        t = re + c
        if fabs(re) >= fabs(c):
            re_err = re_err + ((re - t) + c)
        else:
            re_err = re_err + ((c - t) + re)
        re = t
        t = im + s
        if fabs(im) >= fabs(s):
            im_err = im_err + ((im - t) + s)
        else:
            im_err = im_err + ((s - t) + im)
        im = t
    re = (re + re_err) * area
    im = (im + im_err) * area
    return re * re + im * im


def interference_batch(const double[::1] x, const double[::1] y, double area,
                       const double[::1] qx, const double[::1] qy, int threads=1):
    """Return |sum_j exp(i q.x_j) * area|^2 for every (qx, qy) pair."""
    cdef Py_ssize_t n = qx.shape[0]
    cdef Py_ssize_t i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    if threads < 1:
        threads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=threads):
        res[i] = _intensity(qx[i], qy[i], x, y, area)
    return out
