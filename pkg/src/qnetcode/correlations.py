"""Two-qubit correlation measures: mutual information, discord, PPT.

Subsystem A is qubit 0, B is qubit 1. The classical correlation is
optimised over rank-one projective measurements on A,
``{(I + n.sigma)/2, (I - n.sigma)/2}``, parameterised by the polar and
azimuthal angles of ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qnetcode import _backend
from qnetcode.qmath import (
    NEG_EIG_TOL,
    DensityMatrix,
    hermitian_eigs,
    partial_trace,
    von_neumann_entropy,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)

GRID = 64
REFINE_TOL = 1e-6


@dataclass(frozen=True)
class BellDiagonalParams:
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and abs(v) <= 1.0):
                raise ValueError(f"{name}={v} must lie in [-1, 1]")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)


@dataclass(frozen=True)
class MeasurementAxis:
    theta_m: float
    phi_m: float


@dataclass(frozen=True)
class CorrelationReport:
    mutual_information: float
    classical_correlation: float
    discord: float
    argmin_axis: MeasurementAxis


def _require_two_qubits(rho: DensityMatrix):
    if rho.dim != 4:
        raise ValueError(f"expected a two-qubit (4x4) state, got dimension {rho.dim}")
    if not rho.physical:
        raise ValueError(
            f"unphysical state: minimum eigenvalue {rho.min_eigenvalue:.3g} below -{NEG_EIG_TOL}"
        )


def mutual_information(rho: DensityMatrix) -> float:
    _require_two_qubits(rho)
    s_a = von_neumann_entropy(partial_trace(rho, 2, [0]))
    s_b = von_neumann_entropy(partial_trace(rho, 2, [1]))
    return s_a + s_b - von_neumann_entropy(rho)


def conditional_entropy(rho: DensityMatrix, theta_m: float, phi_m: float) -> float:
    """``sum_k p_k S(rho_B|k)`` for the measurement along (theta_m, phi_m)."""
    grid = _backend.conditional_entropy_grid(rho.entries, [theta_m], [phi_m])
    return float(grid[0, 0])


def _minimise(rho: DensityMatrix, grid: int, tol: float) -> tuple[float, MeasurementAxis]:
    thetas = np.linspace(0.0, math.pi, grid)
    phis = 2.0 * math.pi * np.arange(grid) / grid
    values = _backend.conditional_entropy_grid(rho.entries, thetas, phis)
    # rounding makes near-ties resolve to the lexicographically smallest axis
    flat = np.round(values, 12).ravel()
    k = int(np.argmin(flat))
    th, ph = float(thetas[k // grid]), float(phis[k % grid])
    best = float(values.ravel()[k])
    h_th, h_ph = math.pi / (grid - 1), 2.0 * math.pi / grid

    def f(t, p):
        return conditional_entropy(rho, t, p)

    while h_th > 1e-9 or h_ph > 1e-9:
        improved = False
        for dt, dp in ((h_th, 0.0), (-h_th, 0.0), (0.0, h_ph), (0.0, -h_ph)):
            t = min(max(th + dt, 0.0), math.pi)
            p = (ph + dp) % (2.0 * math.pi)
            v = f(t, p)
            if v < best - tol * 1e-3:
                best, th, ph, improved = v, t, p, True
                break
        if not improved:
            h_th *= 0.5
            h_ph *= 0.5
    return best, MeasurementAxis(th, ph)


def classical_correlation(
    rho: DensityMatrix, grid: int = GRID, refine: float = REFINE_TOL
) -> tuple[float, MeasurementAxis]:
    """Classical correlation J_A and the minimising measurement axis.

    Uniform ``grid`` x ``grid`` search over the axis followed by coordinate
    refinement; outcomes with probability below 1e-12 contribute nothing.
    """
    _require_two_qubits(rho)
    s_b = von_neumann_entropy(partial_trace(rho, 2, [1]))
    best, axis = _minimise(rho, grid, refine)
    return s_b - best, axis


def discord(rho: DensityMatrix, grid: int = GRID, refine: float = REFINE_TOL) -> CorrelationReport:
    i_tot = mutual_information(rho)
    j, axis = classical_correlation(rho, grid, refine)
    return CorrelationReport(i_tot, j, i_tot - j, axis)


def bell_diagonal_matrix(c1: float, c2: float, c3: float) -> np.ndarray:
    m = np.eye(4, dtype=np.complex128)
    for c, s in zip((c1, c2, c3), PAULI):
        m = m + c * np.kron(s, s)
    return m / 4.0


def bell_diagonal(params: BellDiagonalParams) -> DensityMatrix:
    """``(I + sum c_i s_i x s_i) / 4``; check ``.physical`` before use."""
    return DensityMatrix(bell_diagonal_matrix(*params.as_tuple()))


def bell_diagonal_eigenvalues(params: BellDiagonalParams) -> dict[str, float]:
    """Weights of the four Bell projectors (verified against hermitian_eigs in tests)."""
    c1, c2, c3 = params.as_tuple()
    return {
        "phi+": (1 + c1 - c2 + c3) / 4,
        "phi-": (1 - c1 + c2 + c3) / 4,
        "psi+": (1 + c1 + c2 - c3) / 4,
        "psi-": (1 - c1 - c2 - c3) / 4,
    }


def _h(xs) -> float:
    return float(-sum(x * math.log2(x) for x in xs if x > 0.0)) + 0.0


def bell_diagonal_discord_closed_form(params: BellDiagonalParams) -> tuple[float, float, float]:
    """Analytic (I, J, D) for a physical Bell-diagonal state."""
    lams = list(bell_diagonal_eigenvalues(params).values())
    if min(lams) < -NEG_EIG_TOL:
        raise ValueError(f"unphysical parameters {params}: weight {min(lams):.3g} < 0")
    lams = [max(x, 0.0) for x in lams]
    i_tot = 2.0 - _h(lams)  # both marginals are maximally mixed
    c = max(abs(x) for x in params.as_tuple())
    j = sum((1 + s * c) / 2 * math.log2(1 + s * c) for s in (1, -1) if 1 + s * c > 0)
    return i_tot, j, i_tot - j


def partial_transpose(rho: DensityMatrix) -> np.ndarray:
    """Partial transpose over subsystem B."""
    t = np.asarray(rho.entries).reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


def ppt_separable(rho: DensityMatrix) -> bool:
    _require_two_qubits(rho)
    return bool(np.min(hermitian_eigs(partial_transpose(rho)).eigenvalues) >= -NEG_EIG_TOL)


def boundary_channel_params(c3: float) -> BellDiagonalParams:
    """Solve ``c1 - c2 = 1 - c3, c1 + c2 = 1 + c3``, giving c1 = 1, c2 = c3."""
    return BellDiagonalParams(1.0, c3, c3)


def boundary_channel(c3: float) -> DensityMatrix:
    """Bell-diagonal channel with c1 = 1, c2 = c3.

    The spectrum is {1/2, 1/2, c3/2, -c3/2}, so only c3 = 0 is positive
    semidefinite; other values come back flagged ``physical=False``.
    """
    if not abs(c3) <= 1.0:
        raise ValueError(f"c3={c3} must lie in [-1, 1]")
    return bell_diagonal(boundary_channel_params(c3))
