"""Teleportation through Bell-diagonal channels and the butterfly built on it.

Three independent routes to the teleported state are kept side by side:

* ``teleport_closed_form``: the analytic output for the boundary channel
  (c1 = 1, c2 = c3), written in terms of ``t1 = 1 - c3`` and
  ``t2 = 1 + c3``;
* ``teleport_oracle``: a density-matrix simulation of the full protocol
  (CNOT, Hadamard, projective measurement, Pauli correction);
* ``teleport_operator_sum``: ``sum_i p_i s_i rho s_i`` with the channel's
  Bell weights.

The oracle and operator-sum routes are linear in the channel, so they stay
well defined for non-PSD members of the family.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from qnetcode.circuits import GATE_MATRICES, BlochState, GateKind, bloch_state
from qnetcode.correlations import (
    BellDiagonalParams,
    bell_diagonal,
    bell_diagonal_eigenvalues,
    boundary_channel,
    boundary_channel_params,
)
from qnetcode.network import TrafficLog, bottleneck_usage, build_butterfly, validate_traffic
from qnetcode.protocols import CorrectionWord, decode_corrections, encode_bottleneck
from qnetcode.qmath import DensityMatrix, fidelity_pure

__all__ = [
    "BlochState",
    "bloch_state",
    "TParams",
    "teleport_closed_form",
    "teleport_oracle",
    "teleport_operator_sum",
    "printed_fidelity",
    "canonical_fidelity",
    "FidelitySurface",
    "sweep_fidelity",
    "ButterflyResult",
    "run_butterfly_discord",
]

_I2 = np.eye(2, dtype=np.complex128)
_X = GATE_MATRICES[GateKind.X]
_Y = GATE_MATRICES[GateKind.Y]
_Z = GATE_MATRICES[GateKind.Z]
_H = GATE_MATRICES[GateKind.H]
_CNOT = GATE_MATRICES[GateKind.CNOT]


@dataclass(frozen=True)
class TParams:
    t1: float
    t2: float

    @classmethod
    def from_c3(cls, c3: float) -> "TParams":
        return cls(1.0 - c3, 1.0 + c3)


def _check_c3(c3: float):
    if not abs(c3) <= 1.0:
        raise ValueError(f"c3={c3} must lie in [-1, 1]")


def teleport_closed_form(b: BlochState, c3: float) -> DensityMatrix:
    _check_c3(c3)
    t = TParams.from_c3(c3)
    c, s = math.cos(b.theta / 2), math.sin(b.theta / 2)
    em, ep = cmath.exp(-1j * b.phi), cmath.exp(1j * b.phi)
    m = 0.5 * np.array(
        [
            [t.t1 * s * s + t.t2 * c * c, (t.t1 * em + t.t2 * ep) * c * s],
            [(t.t2 * em + t.t1 * ep) * c * s, t.t2 * s * s + t.t1 * c * c],
        ],
        dtype=np.complex128,
    )
    return DensityMatrix(m)


def _teleport_branches(psi: np.ndarray, channel: np.ndarray):
    """Yield ``(word, unnormalised conditional state)`` for the four outcomes.

    Qubit order is message, sender half, receiver half. The conditional state
    has not been corrected yet; its trace is the branch probability.
    """
    rho = np.kron(np.outer(psi, psi.conj()), channel)
    u = np.kron(_H, np.eye(4)) @ np.kron(_CNOT, _I2)
    rho = u @ rho @ u.conj().T
    r = rho.reshape(4, 2, 4, 2)
    for k in range(4):
        z, x = k >> 1, k & 1
        yield CorrectionWord(z, x), r[k, :, k, :]


def _apply_correction(m: np.ndarray, word: CorrectionWord) -> np.ndarray:
    op = (_Z if word.z else _I2) @ (_X if word.x else _I2)
    return op @ m @ op.conj().T


def teleport_oracle(b: BlochState, channel: DensityMatrix) -> DensityMatrix:
    if channel.dim != 4:
        raise ValueError(f"channel must be a two-qubit state, got dimension {channel.dim}")
    psi = bloch_state(b).amps
    out = np.zeros((2, 2), dtype=np.complex128)
    for word, cond in _teleport_branches(psi, np.asarray(channel.entries)):
        out += _apply_correction(cond, word)
    return DensityMatrix(out)


def teleport_operator_sum(b: BlochState, params: BellDiagonalParams) -> DensityMatrix:
    w = bell_diagonal_eigenvalues(params)
    rho = bloch_state(b).projector().entries
    out = (
        w["phi+"] * rho
        + w["psi+"] * _X @ rho @ _X
        + w["psi-"] * _Y @ rho @ _Y
        + w["phi-"] * _Z @ rho @ _Z
    )
    return DensityMatrix(out)


def canonical_fidelity(b: BlochState, c3: float) -> float:
    """``<psi|rho_out|psi>`` on the closed-form output state."""
    return fidelity_pure(bloch_state(b), teleport_closed_form(b, c3))


def printed_fidelity(b: BlochState, c3: float) -> tuple[complex, float]:
    """Term-by-term evaluation of an alternative closed-form fidelity expression.

    Kept as a cross-check. It is written with complex factors, so the value
    is returned as a complex number together with its real part; over the
    full (theta, phi, c3) range it agrees with ``canonical_fidelity`` to
    rounding.
    """
    _check_c3(c3)
    th, ph = b.theta, b.phi
    t1 = TParams.from_c3(c3).t1
    c2, s2 = math.cos(th / 2) ** 2, math.sin(th / 2) ** 2
    ct = math.cos(th)
    first = cmath.exp(2j * ph) * c2 * (
        (2 - t1 * ct) * math.cos(ph) - 1j * math.sin(ph) * (1 + c3 * (-1 + 2 * ct))
    )
    second = s2 * ((-2 - t1 * ct) * math.cos(ph) + 1j * math.sin(ph) * (-1 + c3 * (1 + 2 * ct)))
    value = 0.5 * cmath.exp(-1j * ph) * (first - second)
    return value, value.real


@dataclass
class FidelitySurface:
    theta_axis: np.ndarray
    phi_axis: np.ndarray
    c3: float
    values: np.ndarray  # canonical fidelity, [theta, phi]
    printed: np.ndarray  # complex printed-formula values, same shape
    physical: bool
    metadata: dict = field(default_factory=dict)

    @property
    def abs_diff(self) -> np.ndarray:
        return np.abs(self.printed - self.values)

    def argmax(self) -> tuple[float, float]:
        k = int(np.argmax(self.values))
        n_phi = len(self.phi_axis)
        return float(self.theta_axis[k // n_phi]), float(self.phi_axis[k % n_phi])

    def rows(self):
        """Cells in row-major order (theta outer)."""
        for i, th in enumerate(self.theta_axis):
            for j, ph in enumerate(self.phi_axis):
                yield float(th), float(ph), float(self.values[i, j]), complex(self.printed[i, j])


def sweep_fidelity(
    theta_steps: int = 181, phi_steps: int = 181, c3: float = 0.0, phi: float | None = None
) -> FidelitySurface:
    """Fidelity over an inclusive theta grid on [0, pi] and phi grid on [0, 2pi].

    With ``phi_steps == 1`` the single phi value is ``phi`` (default 0).
    """
    _check_c3(c3)
    if theta_steps < 2:
        raise ValueError("theta_steps must be at least 2")
    if phi_steps < 1:
        raise ValueError("phi_steps must be at least 1")
    thetas = np.linspace(0.0, math.pi, theta_steps)
    if phi_steps == 1:
        phis = np.array([0.0 if phi is None else float(phi)])
    else:
        phis = np.linspace(0.0, 2.0 * math.pi, phi_steps)
    vals = np.empty((theta_steps, len(phis)))
    printed = np.empty((theta_steps, len(phis)), dtype=np.complex128)
    for i, th in enumerate(thetas):
        for j, ph in enumerate(phis):
            b = BlochState(float(th), float(ph))
            vals[i, j] = canonical_fidelity(b, c3)
            printed[i, j] = printed_fidelity(b, c3)[0]
    return FidelitySurface(
        thetas,
        phis,
        float(c3),
        vals,
        printed,
        physical=boundary_channel(c3).physical,
        metadata={
            "fidelity": "<psi|rho_out|psi> with the closed-form output state",
            "printed": "alternative closed-form fidelity expression, evaluated term by term",
            "channel": "Bell-diagonal c1=1, c2=c3",
        },
    )


@dataclass
class ButterflyResult:
    fidelities: tuple[float, float]
    traffic: TrafficLog
    bottleneck_bits: int
    channels_physical: tuple[bool, bool]


def run_butterfly_discord(
    in1: BlochState,
    in2: BlochState,
    ch1: BellDiagonalParams | None = None,
    ch2: BellDiagonalParams | None = None,
) -> ButterflyResult:
    """Two crossed teleportations through Bell-diagonal channels on the butterfly.

    Target t1 wants s1's state and hears s2 on its side edge; t2 the other
    way round. Correction words cross the bottleneck XOR-coded. Channels
    default to the boundary channel at c3 = 0.
    """
    ch1 = ch1 or boundary_channel_params(0.0)
    ch2 = ch2 or boundary_channel_params(0.0)
    rho1, rho2 = bell_diagonal(ch1), bell_diagonal(ch2)
    psis = [bloch_state(in1), bloch_state(in2)]
    br1 = list(_teleport_branches(psis[0].amps, np.asarray(rho1.entries)))
    br2 = list(_teleport_branches(psis[1].amps, np.asarray(rho2.entries)))
    out = [np.zeros((2, 2), dtype=np.complex128) for _ in range(2)]
    for w1, cond1 in br1:
        for w2, cond2 in br2:
            words = (w1, w2)
            sums = encode_bottleneck(words, 2)
            # target t wants sender t, side word comes from the other sender
            got1 = decode_corrections(w2, 2, 1, sums)
            got2 = decode_corrections(w1, 1, 2, sums)
            p2, p1 = np.trace(cond2).real, np.trace(cond1).real
            out[0] += p2 * _apply_correction(cond1, got1)
            out[1] += p1 * _apply_correction(cond2, got2)

    log = TrafficLog()
    log.send("s1->n1", "bit", 2, "correction word of sender 1")
    log.send("s2->n1", "bit", 2, "correction word of sender 2")
    log.send("n1->n2", "bit", 2, "XOR of both correction words")
    log.send("n2->t1", "bit", 2, "XOR of both correction words")
    log.send("n2->t2", "bit", 2, "XOR of both correction words")
    log.send("s1->t2", "bit", 2, "side word of sender 1")
    log.send("s2->t1", "bit", 2, "side word of sender 2")
    topo = build_butterfly()
    violations = validate_traffic(log, topo)
    if violations:
        raise RuntimeError(f"internal error: capacity violated {violations}")
    fids = tuple(fidelity_pure(psis[k], DensityMatrix(out[k])) for k in range(2))
    return ButterflyResult(
        fids, log, bottleneck_usage(log, topo), (rho1.physical, rho2.physical)
    )
