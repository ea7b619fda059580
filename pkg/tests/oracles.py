"""Independent density-matrix oracles built from explicit Kronecker operators.

Nothing here uses the package's gate kernels or branch enumeration.
"""

import itertools

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P = [np.diag([1, 0]).astype(complex), np.diag([0, 1]).astype(complex)]


def op_on(n, ops):
    """Full operator with ``ops[q]`` on qubit q (identity elsewhere); qubit 0 leftmost."""
    out = np.eye(1, dtype=complex)
    for q in range(n):
        out = np.kron(out, ops.get(q, I2))
    return out


def cnot(n, c, t):
    return op_on(n, {c: P[0]}) + op_on(n, {c: P[1], t: X})


def w_state():
    v = np.zeros(8, dtype=complex)
    v[[1, 2, 4]] = 1 / np.sqrt(3)
    return v


def bloch(theta, phi):
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def reduce_to(rho, n, keep):
    """Partial trace keeping one qubit, by explicit index contraction."""
    t = rho.reshape([2] * (2 * n))
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for q in range(n):
        if q != keep:
            col[q] = row[q]
    spec = "".join(row) + "".join(col) + "->" + row[keep] + col[keep]
    return np.einsum(spec, t)


def kpair_w_oracle(inputs, perm):
    """Average per-target fidelity of the coded K-pair schedule on W resources.

    Layout: messages 0..K-1, then per sender (sender qubit, middle qubit,
    far qubit). Sender-local CNOT sender->middle, then CNOT message->sender,
    H on message, measure (message, sender). Target t holds the far qubit of
    sender perm[t-1] and applies X^x then Z^z with that sender's word.
    """
    K = len(inputs)
    n = 4 * K
    psi = np.eye(1, dtype=complex).ravel()
    for th, ph in inputs:
        psi = np.kron(psi, bloch(th, ph))
    for _ in range(K):
        psi = np.kron(psi, w_state())
    rho = np.outer(psi, psi.conj())
    snd = [K + 3 * i for i in range(K)]
    mid = [K + 3 * i + 1 for i in range(K)]
    far = [K + 3 * i + 2 for i in range(K)]
    u = np.eye(2**n, dtype=complex)
    for i in range(K):
        u = cnot(n, snd[i], mid[i]) @ u
    for i in range(K):
        u = cnot(n, i, snd[i]) @ u
        u = op_on(n, {i: H}) @ u
    rho = u @ rho @ u.conj().T
    fids = np.zeros(K)
    for bits in itertools.product((0, 1), repeat=2 * K):
        proj = {}
        for i in range(K):
            proj[i] = P[bits[2 * i]]
            proj[snd[i]] = P[bits[2 * i + 1]]
        pr = op_on(n, proj)
        branch = pr @ rho @ pr
        for t in range(1, K + 1):
            src = perm[t - 1] - 1
            z, x = bits[2 * src], bits[2 * src + 1]
            corr = op_on(n, {far[src]: np.linalg.matrix_power(Z, z) @ np.linalg.matrix_power(X, x)})
            out = reduce_to(corr @ branch @ corr.conj().T, n, far[src])
            want = bloch(*inputs[src])
            fids[t - 1] += np.real(want.conj() @ out @ want)
    return fids
