# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled orthogonal matching pursuit kernel.

Incremental modified Gram-Schmidt QR: every picked column extends Q and R in
place, the residual is downdated against the new direction, and the
coefficients come from one final back substitution. A numerically dependent
pick sets the rank_deficient flag and aborts; the caller is expected to
redo the problem with the least-squares reference kernel.
"""

import numpy as np

from libc.math cimport sqrt


def omp_greedy(double complex[:, ::1] ah, double complex[::1] y,
               int k_max, double rel_tol):
    """Same contract as the reference kernel, minus rank-deficient recovery.

    Takes the conjugate transpose of the sensing matrix, shape (p, m) and
    C-contiguous, so both the correlation scan and the column reads walk
    memory in order.
    """
    cdef Py_ssize_t m = ah.shape[1]
    cdef Py_ssize_t p = ah.shape[0]
    if y.shape[0] != m:
        raise ValueError("a and y disagree on the measurement count")

    cdef Py_ssize_t kcap = k_max
    if kcap > p:
        kcap = p
    if kcap < 0:
        kcap = 0

    cdef Py_ssize_t i, j, k, t
    cdef double y_norm2 = 0.0
    for i in range(m):
        y_norm2 += y[i].real * y[i].real + y[i].imag * y[i].imag
    cdef double y_norm = sqrt(y_norm2)
    if kcap == 0 or y_norm == 0.0:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.complex128),
                y_norm, False)

    order_arr = np.empty(kcap, dtype=np.int64)
    q_arr = np.empty((kcap, m), dtype=np.complex128)
    rmat_arr = np.zeros((kcap, kcap), dtype=np.complex128)
    qty_arr = np.zeros(kcap, dtype=np.complex128)
    taken_arr = np.zeros(p, dtype=np.uint8)
    r_arr = np.empty(m, dtype=np.complex128)

    cdef long long[::1] order = order_arr
    cdef double complex[:, ::1] q = q_arr
    cdef double complex[:, ::1] rmat = rmat_arr
    cdef double complex[::1] qty = qty_arr
    cdef unsigned char[::1] taken = taken_arr
    cdef double complex[::1] r = r_arr

    cdef double best, mag2, nrm, col_norm2, resid2
    cdef double complex s, cdot
    cdef Py_ssize_t bj
    cdef Py_ssize_t ksel = 0
    cdef double resid_norm = y_norm
    cdef bint rank_deficient = False
    cdef int gs_pass

    with nogil:
        for i in range(m):
            r[i] = y[i]

        for k in range(kcap):
            # greedy pick: largest |a_j^H r|, lowest index on ties
            best = -1.0
            bj = 0
            for j in range(p):
                if taken[j]:
                    continue
                s = 0
                for i in range(m):
                    s = s + ah[j, i] * r[i]
                mag2 = s.real * s.real + s.imag * s.imag
                if mag2 > best:
                    best = mag2
                    bj = j
            taken[bj] = 1
            order[k] = bj

            # extend the QR factorization with the picked column
            col_norm2 = 0.0
            for i in range(m):
                q[k, i] = ah[bj, i].conjugate()
                col_norm2 += ah[bj, i].real * ah[bj, i].real + ah[bj, i].imag * ah[bj, i].imag
            for gs_pass in range(2):  # re-orthogonalize once: twice is enough
                for t in range(k):
                    cdot = 0
                    for i in range(m):
                        cdot = cdot + q[t, i].conjugate() * q[k, i]
                    rmat[t, k] = rmat[t, k] + cdot
                    for i in range(m):
                        q[k, i] = q[k, i] - cdot * q[t, i]
            nrm = 0.0
            for i in range(m):
                nrm += q[k, i].real * q[k, i].real + q[k, i].imag * q[k, i].imag
            nrm = sqrt(nrm)
            if col_norm2 == 0.0 or nrm <= 1e-12 * sqrt(col_norm2):
                rank_deficient = True
                break
            rmat[k, k] = nrm
            for i in range(m):
                q[k, i] = q[k, i] / nrm

            # downdate the residual against the new direction
            cdot = 0
            for i in range(m):
                cdot = cdot + q[k, i].conjugate() * r[i]
            qty[k] = cdot
            resid2 = 0.0
            for i in range(m):
                r[i] = r[i] - cdot * q[k, i]
                resid2 += r[i].real * r[i].real + r[i].imag * r[i].imag
            ksel = k + 1
            resid_norm = sqrt(resid2)
            if resid_norm <= rel_tol * y_norm:
                break

    if rank_deficient:
        return (np.empty(0, dtype=np.int64), np.empty(0, dtype=np.complex128),
                y_norm, True)

    coef_arr = np.empty(ksel, dtype=np.complex128)
    cdef double complex[::1] coef = coef_arr
    for k in range(ksel - 1, -1, -1):
        cdot = qty[k]
        for t in range(k + 1, ksel):
            cdot = cdot - rmat[k, t] * coef[t]
        coef[k] = cdot / rmat[k, k]

    return order_arr[:ksel].copy(), coef_arr, resid_norm, False
