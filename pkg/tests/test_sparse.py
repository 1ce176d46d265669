"""
疎な軌跡状態バッチのテスト
"""

import math

import numpy as np
import pytest

from services.quantum.circuits import build_ghz, simulate
from services.quantum.ir import CX, PhysicalCircuit, PhysicalGate
from services.quantum.sparse import SparseBatch, support_bound
from services.quantum.statevec import HADAMARD, PAULI_Y, apply_1q, init_state, make_rng, u3_matrix
from utils.errors import ValidationError


def random_circuit(n_qubits, n_gates, seed):
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(n_gates):
        kind = rng.integers(3)
        q = int(rng.integers(n_qubits))
        if kind == 0:
            gates.append(PhysicalGate.u3(*rng.uniform(-math.pi, math.pi, size=3), q))
        elif kind == 1:
            gates.append(PhysicalGate.x(q))
        else:
            target = int((q + 1 + rng.integers(n_qubits - 1)) % n_qubits)
            gates.append(PhysicalGate.cx(q, target))
    return PhysicalCircuit(n_qubits, gates)


def run_batch(circuit, shots=1):
    batch = SparseBatch.zero(circuit.n_qubits, shots)
    for gate in circuit.gates:
        matrix = None if gate.kind == CX else gate.matrix()
        batch.apply_gate(gate.kind, gate.qubits, matrix)
    return batch


def assert_same_up_to_phase(a, b):
    overlap = np.vdot(a, b)
    assert abs(overlap) == pytest.approx(1.0, abs=1e-12)


class TestSparseBatch:
    @pytest.mark.parametrize('seed', [0, 1, 2, 3])
    def test_matches_dense_engine(self, seed):
        """ランダム回路で密な状態ベクトルと一致すること（全行）"""
        circuit = random_circuit(4, 30, seed)
        batch = run_batch(circuit, shots=3)
        expected = simulate(circuit).amplitudes
        for row in range(3):
            np.testing.assert_allclose(batch.to_dense(row), expected, atol=1e-12)

    @pytest.mark.parametrize('N,Q', [(2, 2), (5, 4)])
    def test_ghz_support_stays_two(self, N, Q):
        """GHZ(N,Q) の台は量子ビット数によらず2以下"""
        circuit = build_ghz(N, Q)
        assert support_bound(circuit) == 2
        batch = run_batch(circuit)
        assert batch.width == 2
        assert batch.support().tolist() == [2]

    def test_cancelled_entries_dropped(self):
        """H・H で打ち消し合った成分は残らない"""
        batch = SparseBatch.zero(1, 2)
        batch.apply_matrix(HADAMARD, 0)
        batch.apply_matrix(HADAMARD, 0)
        assert batch.width == 1
        assert batch.indices.ravel().tolist() == [0, 0]

    def test_pauli_only_on_selected_rows(self):
        batch = SparseBatch.zero(2, 3)
        batch.apply_pauli('X', 1, np.array([True, False, True]))
        assert batch.indices.ravel().tolist() == [0b01, 0, 0b01]

    def test_y_matches_matrix_up_to_phase(self):
        """Y は Z の後に X と大域位相を除いて等しい"""
        u = u3_matrix(0.7, 0.3, 0.1)
        state = apply_1q(init_state(1), u, 0)
        batch = SparseBatch.zero(1, 1)
        batch.apply_matrix(u, 0)
        batch.apply_pauli('Y', 0)
        assert_same_up_to_phase(batch.to_dense(), apply_1q(state, PAULI_Y, 0).amplitudes)

    def test_damping_jump_post_state(self):
        """(|01⟩+|11⟩)/√2 で q0 が跳ぶと |01⟩ だけが残る"""
        amp = 1 / math.sqrt(2)
        batch = SparseBatch(2, [[0b01, 0b11]], [[amp, amp]])
        batch.apply_damping_jumps([batch.bit(0)], 0.3)
        probs = batch.probabilities()[0]
        assert probs.sum() == pytest.approx(1.0)
        dense = batch.to_dense()
        assert abs(dense[0b01]) == pytest.approx(1.0)

    def test_no_jump_reweights(self):
        """跳ばなかった励起ビットごとに √(1−γ) の重みが掛かる"""
        gamma = 0.36
        amp = 1 / math.sqrt(2)
        batch = SparseBatch(1, [[0, 1]], [[amp, amp]])
        batch.apply_damping_jumps([0], gamma)
        probs = batch.probabilities()[0]
        assert probs[1] / probs[0] == pytest.approx(1 - gamma)
        assert probs.sum() == pytest.approx(1.0)

    def test_ground_state_layer_consumes_nothing(self):
        """励起成分がなければ減衰層は乱数を使わない"""
        rng = make_rng(4)
        SparseBatch.zero(3, 5).damping_layer(0.5, rng)
        assert rng.random() == make_rng(4).random()

    def test_zero_norm_rejected(self):
        batch = SparseBatch(1, [[0]], [[0.0]])
        with pytest.raises(ValidationError):
            batch.normalize()

    def test_mismatched_shapes_rejected(self):
        with pytest.raises(ValidationError):
            SparseBatch(1, [[0, 1]], [[1.0]])

    def test_sample_one_outcome_per_row(self):
        batch = SparseBatch(3, [[0b100], [0b001]], [[1.0], [1.0]])
        assert batch.sample(make_rng(0)) == {'100': 1, '001': 1}
