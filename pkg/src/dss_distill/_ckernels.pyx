# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: cyclic Jacobi for Hermitian matrices and the
subset-block scan behind the DSS search.

Both functions mirror ``_pykernels`` exactly in contract; see that module
for the reference semantics.
"""

import numpy as np

from libc.math cimport sqrt, fabs, atan2, cos, sin


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def jacobi_eigh(a_in, double eps=1e-15, int max_sweeps=100):
    """Return ``(w, V)`` with ``a = V diag(w) V^H``; ``w`` is unsorted."""
    cdef double complex[:, ::1] a = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    v_arr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double fro2 = 0.0, off2, apq_abs, zeta, t, c, s, phi, app, aqq, tiny
    cdef double complex w, wc, akp, akq, apk, aqk

    with nogil:
        for p in range(n):
            for q in range(n):
                fro2 += cabs2(a[p, q])
        tiny = 1e-17 * sqrt(fro2)
        for sweep in range(max_sweeps):
            off2 = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off2 += cabs2(a[p, q])
            if off2 <= eps * eps * fro2 or off2 == 0.0:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq_abs = sqrt(cabs2(a[p, q]))
                    if apq_abs <= tiny:
                        continue
                    phi = atan2(a[p, q].imag, a[p, q].real)
                    w = cos(phi) - 1j * sin(phi)
                    wc = cos(phi) + 1j * sin(phi)
                    app = a[p, p].real
                    aqq = a[q, q].real
                    zeta = (aqq - app) / (2.0 * apq_abs)
                    if zeta >= 0.0:
                        t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * w * akq
                        a[k, q] = s * akp + c * w * akq
                    for k in range(n):
                        apk = a[p, k]
                        aqk = a[q, k]
                        a[p, k] = c * apk - s * wc * aqk
                        a[q, k] = s * apk + c * wc * aqk
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * w * akq
                        v[k, q] = s * akp + c * w * akq

    w_out = np.empty(n, dtype=np.float64)
    for k in range(n):
        w_out[k] = a[k, k].real
    return w_out, v_arr


def block_scan(rho_in, Py_ssize_t dim_b, subs_a_in, subs_b_in):
    """Trace and squared Frobenius norm of every block ``S_A x S_B``."""
    cdef double complex[:, ::1] rho = np.ascontiguousarray(rho_in, dtype=np.complex128)
    cdef long[:, ::1] sa = np.ascontiguousarray(subs_a_in, dtype=np.int_)
    cdef long[:, ::1] sb = np.ascontiguousarray(subs_b_in, dtype=np.int_)
    cdef Py_ssize_t ka = sa.shape[0], kb = sb.shape[0]
    cdef Py_ssize_t ma = sa.shape[1], mb = sb.shape[1]
    prob_arr = np.zeros((ka, kb), dtype=np.float64)
    frob_arr = np.zeros((ka, kb), dtype=np.float64)
    cdef double[:, ::1] prob = prob_arr
    cdef double[:, ::1] frob = frob_arr
    cdef Py_ssize_t ia, ib, i, j, k, l, r, col
    cdef double tr, f2

    with nogil:
        for ia in range(ka):
            for ib in range(kb):
                tr = 0.0
                f2 = 0.0
                for i in range(ma):
                    for j in range(mb):
                        r = sa[ia, i] * dim_b + sb[ib, j]
                        tr = tr + rho[r, r].real
                        for k in range(ma):
                            for l in range(mb):
                                col = sa[ia, k] * dim_b + sb[ib, l]
                                f2 = f2 + cabs2(rho[r, col])
                prob[ia, ib] = tr
                frob[ia, ib] = f2
    return prob_arr, frob_arr
