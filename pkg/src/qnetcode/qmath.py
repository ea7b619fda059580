"""Dense state vectors, density matrices and the spectral tools built on them.

Qubit 0 is the most significant bit of a basis index everywhere in the
package, so ``|01>`` on two qubits is amplitude index 1.  Entropies are in
bits.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from qnetcode import _backend

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
NEG_EIG_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def _qubit_count(size: int) -> int:
    if size < 1 or size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    return size.bit_length() - 1


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised pure state over an ordered qubit register."""

    amps: np.ndarray
    n_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        n = _qubit_count(amps.shape[0])
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm^2 = {norm!r})")
        object.__setattr__(self, "amps", _frozen(amps))
        object.__setattr__(self, "n_qubits", n)

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        """Computational basis state from a bit string such as ``"01"``."""
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[int(bits, 2) if bits else 0] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amps) -> "StateVector":
        amps = np.asarray(amps, dtype=np.complex128)
        return cls(amps / np.linalg.norm(amps))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amps, self.amps.conj()))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace square matrix.

    Positivity is not required at construction; it is computed once and
    exposed through ``physical`` and ``min_eigenvalue`` so that formal
    (non-PSD) members of a parameter family can still be represented.
    """

    entries: np.ndarray
    dim: int = field(init=False)
    min_eigenvalue: float = field(init=False)
    physical: bool = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("entries must be finite")
        _qubit_count(m.shape[0])
        herm_err = float(np.max(np.abs(m - m.conj().T)))
        if herm_err > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm_err:.3g})")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace is {tr.real:.12g}, expected 1")
        m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "entries", _frozen(m))
        object.__setattr__(self, "dim", m.shape[0])
        lo = float(np.min(hermitian_eigs(m).eigenvalues))
        object.__setattr__(self, "min_eigenvalue", lo)
        object.__setattr__(self, "physical", lo >= -NEG_EIG_TOL)

    @property
    def n_qubits(self) -> int:
        return _qubit_count(self.dim)

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        d = 1 << n_qubits
        return cls(np.eye(d) / d)


@dataclass(frozen=True, eq=False)
class HermitianSpectrum:
    """Eigenvalues in descending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def tensor(a, b):
    """Kronecker product; ``a``'s qubits come first in the result."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.entries, b.entries))
    raise TypeError(
        f"tensor needs two operands of the same kind, got {type(a).__name__} "
        f"and {type(b).__name__}"
    )


def partial_trace(rho: DensityMatrix, n_qubits: int, keep) -> DensityMatrix:
    """Reduced state on the qubits in ``keep`` (returned in ascending order)."""
    if rho.dim != 1 << n_qubits:
        raise ValueError(f"dimension {rho.dim} does not match {n_qubits} qubits")
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must name at least one qubit")
    for k in keep:
        if not 0 <= k < n_qubits:
            raise ValueError(f"qubit index {k} out of range for {n_qubits} qubits")
    return DensityMatrix(_partial_trace_array(rho.entries, n_qubits, keep))


def _partial_trace_array(m: np.ndarray, n_qubits: int, keep: list[int]) -> np.ndarray:
    drop = [q for q in range(n_qubits) if q not in keep]
    t = m.reshape([2] * (2 * n_qubits))
    # bring kept row axes, dropped row axes, kept col axes, dropped col axes
    order = keep + drop + [n_qubits + q for q in keep] + [n_qubits + q for q in drop]
    t = np.transpose(t, order)
    dk, dd = 1 << len(keep), 1 << len(drop)
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def _as_hermitian(m) -> np.ndarray:
    if isinstance(m, DensityMatrix):
        return np.asarray(m.entries)
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if float(np.max(np.abs(m - m.conj().T), initial=0.0)) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    return m


def hermitian_eigs(m) -> HermitianSpectrum:
    """Jacobi eigendecomposition with a deterministic ordering.

    Eigenvalues are sorted descending. Each eigenvector is rephased so that
    its first component larger than 1e-12 in modulus is real and positive.
    Within a cluster of eigenvalues equal to 1e-12 the vectors are ordered
    by the rounded real parts of their components, largest first.
    """
    a = _as_hermitian(m)
    w, v = _backend.jacobi_eigh(np.ascontiguousarray(a))
    v = np.array(v)
    for j in range(v.shape[1]):
        col = v[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-12)
        if big.size:
            z = col[big[0]]
            v[:, j] = col * (abs(z) / z)

    def key(j):
        return (-round(float(w[j]), 12), tuple(-round(float(x), 12) for x in v[:, j].real))

    order = sorted(range(len(w)), key=key)
    return HermitianSpectrum(np.asarray(w)[order], v[:, order])


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy in bits; eigenvalues in [-1e-9, 0) count as zero."""
    w = hermitian_eigs(rho).eigenvalues
    if np.min(w) < -NEG_EIG_TOL:
        raise ValueError(f"unphysical state: eigenvalue {np.min(w):.3g} < 0")
    w = w[w > 0.0]
    return float(-np.sum(w * np.log2(w))) + 0.0


def fidelity_pure(psi: StateVector, rho: DensityMatrix) -> float:
    """``<psi|rho|psi>``.

    Not clamped: for a non-PSD ``rho`` (``rho.physical`` is False) the value
    can leave [0, 1].
    """
    if psi.dim != rho.dim:
        raise ValueError(f"dimension mismatch: state {psi.dim}, matrix {rho.dim}")
    return float(np.vdot(psi.amps, rho.entries @ psi.amps).real)


def reduced_state(state: StateVector, keep) -> DensityMatrix:
    """Reduced density matrix of a pure state on ``keep`` (ascending order)."""
    n = state.n_qubits
    keep = sorted(set(int(k) for k in keep))
    for k in keep:
        if not 0 <= k < n:
            raise ValueError(f"qubit index {k} out of range for {n} qubits")
    rest = [q for q in range(n) if q not in keep]
    m = np.transpose(state.amps.reshape([2] * n), keep + rest).reshape(1 << len(keep), -1)
    return DensityMatrix(m @ m.conj().T)
