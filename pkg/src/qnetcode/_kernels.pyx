# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels; signatures mirror ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, log2, fabs

cnp.import_array()


def apply_1q(amps, int n, int q, m):
    cdef const double complex[::1] src = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef Py_ssize_t size = src.shape[0]
    out_arr = np.empty(size, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef double complex m00 = m[0, 0], m01 = m[0, 1], m10 = m[1, 0], m11 = m[1, 1]
    cdef Py_ssize_t stride = 1 << (n - 1 - q)
    cdef Py_ssize_t block, j, i0, i1
    cdef double complex a0, a1
    for block in range(0, size, 2 * stride):
        for j in range(stride):
            i0 = block + j
            i1 = i0 + stride
            a0 = src[i0]
            a1 = src[i1]
            out[i0] = m00 * a0 + m01 * a1
            out[i1] = m10 * a0 + m11 * a1
    return out_arr


def apply_cnot(amps, int n, int control, int target):
    out_arr = np.array(amps, dtype=np.complex128, copy=True)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t size = out.shape[0]
    cdef Py_ssize_t cbit = 1 << (n - 1 - control)
    cdef Py_ssize_t tbit = 1 << (n - 1 - target)
    cdef Py_ssize_t i
    cdef double complex tmp
    for i in range(size):
        if (i & cbit) and not (i & tbit):
            tmp = out[i]
            out[i] = out[i | tbit]
            out[i | tbit] = tmp
    return out_arr


def jacobi_eigh(a, double tol=1e-14, int max_sweeps=100):
    arr = np.array(a, dtype=np.complex128, copy=True)
    cdef double complex[:, ::1] A = arr
    cdef Py_ssize_t n = A.shape[0]
    varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] V = varr
    cdef double scale = 0.0
    cdef Py_ssize_t i, k, p, q
    cdef int sweep
    cdef double off, r, app, aqq, tau, t, c, s
    cdef double complex b, ph, phc, xp, xq
    for i in range(n):
        for k in range(n):
            if abs(A[i, k]) > scale:
                scale = abs(A[i, k])
    if scale < 1e-300:
        scale = 1e-300
    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += A[p, q].real * A[p, q].real + A[p, q].imag * A[p, q].imag
        if sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = A[p, q]
                r = sqrt(b.real * b.real + b.imag * b.imag)
                if r <= tol * scale * 1e-3:
                    continue
                ph = b / r
                phc = ph.conjugate()
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(n):
                    xp = A[k, p]
                    xq = A[k, q]
                    A[k, p] = c * xp - s * phc * xq
                    A[k, q] = s * xp + c * phc * xq
                for k in range(n):
                    xp = A[p, k]
                    xq = A[q, k]
                    A[p, k] = c * xp - s * ph * xq
                    A[q, k] = s * xp + c * ph * xq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                for k in range(n):
                    xp = V[k, p]
                    xq = V[k, q]
                    V[k, p] = c * xp - s * phc * xq
                    V[k, q] = s * xp + c * phc * xq
    w = np.empty(n, dtype=np.float64)
    for i in range(n):
        w[i] = A[i, i].real
    return w, varr


cdef inline double _block_entropy(double a, double d, double complex b) nogil:
    cdef double tr = a + d
    if tr < 1e-12:
        return 0.0
    cdef double hd = 0.5 * (a - d)
    cdef double rad = sqrt(hd * hd + b.real * b.real + b.imag * b.imag)
    cdef double total = 0.0
    cdef double lam
    cdef int k
    for k in range(2):
        lam = (0.5 * tr + (rad if k == 0 else -rad)) / tr
        if lam > 1.0:
            lam = 1.0
        if lam > 0.0:
            total -= lam * log2(lam)
    return tr * total


def conditional_entropy_grid(rho, thetas, phis):
    cdef const double complex[:, ::1] R = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef const double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef const double[::1] ph = np.ascontiguousarray(phis, dtype=np.float64)
    cdef Py_ssize_t nt = th.shape[0], nph = ph.shape[0]
    out_arr = np.zeros((nt, nph), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    # blocks B_{aa'}[b, b'] = rho[2a + b, 2a' + b']
    cdef double complex h00, h01, h11, d00, d01, d11
    cdef double complex x00, x01, x10, x11, y00, y01, y10, y11
    cdef double complex npl, nmi, t00, t01, t11
    cdef double nx, ny, nz, total
    cdef Py_ssize_t i, j
    h00 = 0.5 * (R[0, 0] + R[2, 2])
    h01 = 0.5 * (R[0, 1] + R[2, 3])
    h11 = 0.5 * (R[1, 1] + R[3, 3])
    d00 = R[0, 0] - R[2, 2]
    d01 = R[0, 1] - R[2, 3]
    d11 = R[1, 1] - R[3, 3]
    x00 = R[0, 2]
    x01 = R[0, 3]
    x10 = R[1, 2]
    x11 = R[1, 3]
    y00 = R[2, 0]
    y01 = R[2, 1]
    y10 = R[3, 0]
    y11 = R[3, 1]
    for i in range(nt):
        for j in range(nph):
            nx = sin(th[i]) * cos(ph[j])
            ny = sin(th[i]) * sin(ph[j])
            nz = cos(th[i])
            npl = nx + 1j * ny
            nmi = nx - 1j * ny
            t00 = 0.5 * (nz * d00 + npl * x00 + nmi * y00)
            t01 = 0.5 * (nz * d01 + npl * x01 + nmi * y01)
            t11 = 0.5 * (nz * d11 + npl * x11 + nmi * y11)
            total = _block_entropy((h00 + t00).real, (h11 + t11).real, h01 + t01)
            total += _block_entropy((h00 - t00).real, (h11 - t11).real, h01 - t01)
            out[i, j] = total
    return out_arr
