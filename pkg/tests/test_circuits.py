import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_pure
from qnetcode.circuits import (
    GATE_MATRICES,
    BlochState,
    GateKind,
    ResourceKind,
    apply_gate,
    bloch_state,
    make_resource,
    measure_branches,
)
from qnetcode.qmath import StateVector, reduced_state


@pytest.mark.parametrize("gate", list(GateKind))
def test_gates_unitary(gate):
    u = GATE_MATRICES[gate]
    assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-12
    assert u.shape[0] == 2**gate.arity


def _dense(gate, qubits, n):
    """Build the full operator by permuting a kron product (independent of the kernels)."""
    u = GATE_MATRICES[gate]
    k = len(qubits)
    rest = [q for q in range(n) if q not in qubits]
    order = list(qubits) + rest
    full = np.kron(u, np.eye(2 ** (n - k)))
    t = full.reshape([2] * (2 * n))
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


@settings(max_examples=80)
@given(st.integers(2, 5), st.data())
def test_apply_gate_matches_dense_operator(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    gate = data.draw(st.sampled_from(list(GateKind)))
    qubits = data.draw(st.lists(st.integers(0, n - 1), min_size=gate.arity, max_size=gate.arity, unique=True))
    psi = StateVector(random_pure(rng, 2**n))
    out = apply_gate(psi, gate, qubits)
    np.testing.assert_allclose(out.amps, _dense(gate, qubits, n) @ psi.amps, atol=1e-12)


def test_cnot_on_basis():
    out = apply_gate(StateVector.basis("10"), GateKind.CNOT, [0, 1])
    assert out.amps[3] == 1
    out = apply_gate(StateVector.basis("01"), GateKind.CNOT, [1, 0])
    assert out.amps[3] == 1


def test_apply_gate_validates_qubits():
    s = StateVector.basis("00")
    with pytest.raises(ValueError):
        apply_gate(s, GateKind.H, [2])
    with pytest.raises(ValueError):
        apply_gate(s, GateKind.CNOT, [0, 0])
    with pytest.raises(ValueError):
        apply_gate(s, GateKind.CNOT, [0])


def test_resources():
    r = 1 / math.sqrt(2)
    np.testing.assert_allclose(make_resource(ResourceKind.EPR).amps, [r, 0, 0, r])
    ghz = make_resource(ResourceKind.GHZ).amps
    assert ghz[0] == pytest.approx(r) and ghz[7] == pytest.approx(r)
    w = make_resource(ResourceKind.W).amps
    np.testing.assert_allclose(w[[1, 2, 4]], [1 / math.sqrt(3)] * 3)
    for kind in ResourceKind:
        assert abs(np.linalg.norm(make_resource(kind).amps) - 1) < 1e-15
        assert make_resource(kind).n_qubits == kind.n_qubits


def test_measure_branch_probabilities_sum_to_one(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 5))
        psi = StateVector(random_pure(rng, 2**n))
        m = int(rng.integers(1, n + 1))
        qubits = list(rng.permutation(n)[:m])
        total = sum(b.probability for b in measure_branches(psi, qubits))
        assert abs(total - 1) < 1e-12


def test_branch_post_states_consistent(rng):
    for _ in range(50):
        psi = StateVector(random_pure(rng, 16))
        branches = measure_branches(psi, [1, 3])
        mix = sum(b.probability * np.asarray(b.post_state.projector().entries) for b in branches)
        np.testing.assert_allclose(mix, reduced_state(psi, [0, 2]).entries, atol=1e-10)


def test_measure_branches_order_and_zero_branches():
    bell = make_resource(ResourceKind.EPR)
    br = measure_branches(bell, [0])
    assert [b.outcome for b in br] == [(0,), (1,)]
    assert br[1].post_state.amps[1] == pytest.approx(1)
    full = measure_branches(bell, [0, 1], include_zero=True)
    assert [b.outcome for b in full] == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert full[1].post_state is None and full[1].probability == 0.0


def test_bloch_state_validation():
    with pytest.raises(ValueError):
        BlochState(-0.1, 0.0)
    with pytest.raises(ValueError):
        BlochState(1.0, 7.0)
    BlochState(math.pi, 2 * math.pi)


def test_bloch_state_amplitudes():
    s = bloch_state(BlochState(math.pi / 2, math.pi / 2)).amps
    np.testing.assert_allclose(s, [1 / math.sqrt(2), 1j / math.sqrt(2)], atol=1e-15)
