"""Pure-Python/numpy implementations of the numerical kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``.
Qubit 0 is the most significant bit of a basis index.
"""

import math

import numpy as np


def apply_1q(amps, n, q, m):
    """Return ``m`` applied to qubit ``q`` of an ``n``-qubit amplitude vector."""
    amps = np.asarray(amps, dtype=np.complex128)
    stride = 1 << (n - 1 - q)
    view = amps.reshape(-1, 2, stride)
    a0 = view[:, 0, :]
    a1 = view[:, 1, :]
    out = np.empty_like(view)
    out[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    out[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    return out.reshape(-1)


def apply_cnot(amps, n, control, target):
    amps = np.asarray(amps, dtype=np.complex128)
    out = amps.copy()
    idx = np.arange(amps.shape[0])
    cbit = 1 << (n - 1 - control)
    tbit = 1 << (n - 1 - target)
    # each swapped pair visited once: control set, target clear
    sel = idx[(idx & cbit != 0) & (idx & tbit == 0)]
    out[sel], out[sel | tbit] = amps[sel | tbit], amps[sel]
    return out


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    """Cyclic complex Jacobi diagonalisation of a Hermitian matrix.

    Returns unsorted ``(eigenvalues, eigenvectors)`` with eigenvectors in
    columns.
    """
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(float(np.max(np.abs(a))), 1e-300) if n else 1.0
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += abs(a[p, q]) ** 2
        if math.sqrt(off) <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                r = abs(b)
                if r <= tol * scale * 1e-3:
                    continue
                ph = b / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                phc = ph.conjugate()
                # columns: A <- A U
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - s * phc * colq
                a[:, q] = s * colp + c * phc * colq
                # rows: A <- U^H A
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - s * ph * rowq
                a[q, :] = s * rowp + c * ph * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * phc * vq
                v[:, q] = s * vp + c * phc * vq
    return np.real(np.diag(a)).copy(), v


def _binary_entropy_of_block(tr, half_diff, offdiag_abs):
    """Unnormalised-block contribution ``p * S(block / p)`` for 2x2 blocks."""
    rad = np.sqrt(half_diff * half_diff + offdiag_abs * offdiag_abs)
    out = np.zeros_like(tr)
    ok = tr >= 1e-12
    trs = np.where(ok, tr, 1.0)
    total = np.zeros_like(tr)
    for sign in (1.0, -1.0):
        lam = np.clip((0.5 * trs + sign * rad) / trs, 0.0, 1.0)
        safe = np.where(lam > 0.0, lam, 1.0)
        total -= np.where(lam > 0.0, lam * np.log2(safe), 0.0)
    out[ok] = (tr * total)[ok]
    return out


def conditional_entropy_grid(rho, thetas, phis):
    """Average conditional entropy of B after a projective measurement on A.

    ``rho`` is a 4x4 two-qubit density matrix (A = qubit 0). The measurement
    is ``{(I + n.sigma)/2, (I - n.sigma)/2}`` with ``n`` at polar angle
    ``theta`` and azimuth ``phi``. Returns an array indexed
    ``[theta, phi]``.
    """
    rho = np.asarray(rho, dtype=np.complex128)
    r = rho.reshape(2, 2, 2, 2)
    b00 = r[0, :, 0, :]
    b11 = r[1, :, 1, :]
    b01 = r[0, :, 1, :]
    b10 = r[1, :, 0, :]
    th = np.asarray(thetas, dtype=np.float64)[:, None]
    ph = np.asarray(phis, dtype=np.float64)[None, :]
    nx = np.sin(th) * np.cos(ph)
    ny = np.sin(th) * np.sin(ph)
    nz = np.cos(th) * np.ones_like(ph)
    sh = nz.shape
    half = 0.5 * (b00 + b11)
    diff = b00 - b11
    npl = (nx + 1j * ny)[..., None, None]
    nmi = (nx - 1j * ny)[..., None, None]
    t = 0.5 * (nz[..., None, None] * diff + npl * b01 + nmi * b10)
    total = np.zeros(sh)
    for sign in (1.0, -1.0):
        m = half + sign * t
        a = m[..., 0, 0].real
        d = m[..., 1, 1].real
        total += _binary_entropy_of_block(a + d, 0.5 * (a - d), np.abs(m[..., 0, 1]))
    return total
