"""Gates, resource states and exhaustive measurement on state vectors."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from qnetcode import _backend
from qnetcode.qmath import StateVector


class GateKind(enum.Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    CNOT = "CNOT"

    @property
    def arity(self) -> int:
        return 2 if self is GateKind.CNOT else 1


_S = 1.0 / math.sqrt(2.0)

GATE_MATRICES = {
    GateKind.H: np.array([[_S, _S], [_S, -_S]], dtype=np.complex128),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
}


class ResourceKind(enum.Enum):
    EPR = "epr"
    GHZ = "ghz"
    W = "w"

    @property
    def n_qubits(self) -> int:
        return 2 if self is ResourceKind.EPR else 3


@dataclass(frozen=True, eq=False)
class MeasurementBranch:
    outcome: tuple[int, ...]
    probability: float
    post_state: StateVector | None  # None only for listed zero-probability outcomes


def apply_gate(state: StateVector, gate: GateKind, qubits) -> StateVector:
    """Apply ``gate`` to the listed qubits; for CNOT the order is (control, target)."""
    qubits = [int(q) for q in qubits]
    if len(qubits) != gate.arity:
        raise ValueError(f"{gate.value} acts on {gate.arity} qubit(s), got {qubits}")
    n = state.n_qubits
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubit indices must be distinct, got {qubits}")
    if gate is GateKind.CNOT:
        amps = _backend.apply_cnot(state.amps, n, qubits[0], qubits[1])
    else:
        amps = _backend.apply_1q(state.amps, n, qubits[0], GATE_MATRICES[gate])
    return StateVector(amps)


def make_resource(kind: ResourceKind) -> StateVector:
    amps = np.zeros(1 << kind.n_qubits, dtype=np.complex128)
    if kind is ResourceKind.EPR:
        amps[0b00] = amps[0b11] = _S
    elif kind is ResourceKind.GHZ:
        amps[0b000] = amps[0b111] = _S
    else:
        amps[0b100] = amps[0b010] = amps[0b001] = 1.0 / math.sqrt(3.0)
    return StateVector(amps)


def measure_branches(
    state: StateVector, qubits, include_zero: bool = False, zero_tol: float = 1e-14
) -> list[MeasurementBranch]:
    """Enumerate every computational-basis outcome on ``qubits``.

    Branches come back ordered by outcome read as a binary integer (first
    listed qubit most significant). Post-states live on the unmeasured
    qubits in ascending original order. No sampling happens here.
    """
    qubits = [int(q) for q in qubits]
    n = state.n_qubits
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"qubit indices must be distinct, got {qubits}")
    rest = [q for q in range(n) if q not in qubits]
    m = len(qubits)
    t = np.transpose(state.amps.reshape([2] * n), qubits + rest)
    rows = t.reshape(1 << m, 1 << len(rest))
    probs = np.sum(np.abs(rows) ** 2, axis=1)
    branches = []
    for k in range(1 << m):
        outcome = tuple((k >> (m - 1 - j)) & 1 for j in range(m))
        p = float(probs[k])
        if p > zero_tol:
            post = StateVector(rows[k] / math.sqrt(p))
            branches.append(MeasurementBranch(outcome, p, post))
        elif include_zero:
            branches.append(MeasurementBranch(outcome, 0.0, None))
    return branches


@dataclass(frozen=True)
class BlochState:
    """Pure qubit ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``.

    ``phi`` may equal 2*pi so that inclusive sweep grids are representable.
    """

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("angles must be finite")
        if not 0.0 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"theta={self.theta} outside [0, pi]")
        if not 0.0 <= self.phi <= 2.0 * math.pi + 1e-12:
            raise ValueError(f"phi={self.phi} outside [0, 2pi]")

    def state(self) -> StateVector:
        return StateVector(
            [math.cos(self.theta / 2), np.exp(1j * self.phi) * math.sin(self.theta / 2)]
        )


def bloch_state(b: BlochState) -> StateVector:
    return b.state()
