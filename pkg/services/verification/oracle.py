"""
総当たりオラクル
素朴なテンソル積による密なユニタリの構成と、付録の4つの恒等式・
論理U3/論理CXの定理の数値検証
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from config.app_config import AppConfig
from services.quantum.circuits import simulate
from services.quantum.code import make_code
from services.quantum.ir import CX, PhysicalCircuit, PhysicalGate
from services.quantum.logical import encoding_ops, logical_cx, logical_u3
from services.quantum.statevec import IDENTITY_2, PAULI_X, apply_matrix, init_state, make_rng, u3_matrix
from utils.errors import CapacityError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

IDENTITY_TOL = 1e-12
THEOREM_TOL = 1e-10

PROJ_0 = np.array([[1, 0], [0, 0]], dtype=complex)
PROJ_1 = np.array([[0, 0], [0, 1]], dtype=complex)
CX_4 = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def kron_all(factors):
    """左から順にクロネッカー積（左端が量子ビット0）"""
    result = np.array([[1.0 + 0j]])
    for factor in factors:
        result = np.kron(result, factor)
    return result


def gate_matrix(gate, n_qubits):
    """物理ゲート1つの 2^n × 2^n 行列（σ_i = I ⊗ … ⊗ U ⊗ … ⊗ I）"""
    if gate.kind == CX:
        control, target = gate.qubits
        off = [IDENTITY_2] * n_qubits
        off[control] = PROJ_0
        on = [IDENTITY_2] * n_qubits
        on[control] = PROJ_1
        on[target] = PAULI_X
        return kron_all(off) + kron_all(on)
    factors = [IDENTITY_2] * n_qubits
    factors[gate.qubits[0]] = gate.matrix()
    return kron_all(factors)


def unitary_of(circuit):
    """
    回路全体の密なユニタリ（時間順にゲート行列を左から掛ける）

    Raises:
        CapacityError: 量子ビット数がオラクルの上限を超える場合
    """
    n = circuit.n_qubits
    if n > AppConfig.ORACLE_MAX_QUBITS:
        raise CapacityError(f'オラクルは {AppConfig.ORACLE_MAX_QUBITS} 量子ビットまでです: {n}')
    unitary = np.eye(1 << n, dtype=complex)
    for gate in circuit.gates:
        unitary = gate_matrix(gate, n) @ unitary
    return unitary


def align_phase(actual, expected):
    """expected の最大成分に合わせて actual の大域位相を揃える"""
    actual = np.asarray(actual, dtype=complex)
    expected = np.asarray(expected, dtype=complex)
    k = np.unravel_index(np.argmax(np.abs(expected)), expected.shape)
    if abs(actual[k]) < 1e-15:
        return actual
    factor = expected[k] / actual[k]
    return actual * (factor / abs(factor))


def max_deviation(actual, expected, up_to_phase=True):
    """max ノルムでの差（既定では大域位相を揃えてから）"""
    if up_to_phase:
        actual = align_phase(actual, expected)
    return float(np.max(np.abs(np.asarray(actual) - np.asarray(expected))))


def basis_vector(index, n_qubits):
    vec = np.zeros(1 << n_qubits, dtype=complex)
    vec[index] = 1.0
    return vec


def codeword_index(code, bit):
    """符号語ブロックの状態ベクトル上のインデックス"""
    return int(code.codeword_string(bit), 2)


def logical_index(code, logical):
    """論理ビット列を符号化した物理状態のインデックス"""
    return int(code.encode_logical(logical), 2)


def _random_amplitudes(rng, count):
    vec = rng.normal(size=count) + 1j * rng.normal(size=count)
    return vec / np.linalg.norm(vec)


def _random_angles(rng):
    return tuple(rng.uniform(-2 * math.pi, 2 * math.pi, size=3))


def encoding_matrix(code, blocks=1):
    """符号化行列 M_S（blocks 個のブロックに同時に適用）"""
    gates = []
    for k in range(blocks):
        gates.extend(encoding_ops(code, k * code.Q))
    return unitary_of(PhysicalCircuit(code.Q * blocks, gates))


def check_identities(Q, S, samples=100, seed=0):
    """
    付録の4つの恒等式の残差の最大値

    (I⊗σ_x)C_x = C_x(I⊗σ_x)、(σ_x⊗I)C_x(σ_x⊗I) = (I⊗σ_x)C_x、
    M_S(α|0…0⟩+β|1…1⟩) = α|0⟩_L+β|1⟩_L、M_S(α|0⟩_L+β|1⟩_L) = α|0…0⟩+β|1…1⟩
    （M = M† = M⁻¹ も含める）
    """
    code = make_code(Q, S)
    rng = make_rng(seed, Q, code.x)
    ix = np.kron(IDENTITY_2, PAULI_X)
    xi = np.kron(PAULI_X, IDENTITY_2)
    residuals = [
        np.max(np.abs(ix @ CX_4 - CX_4 @ ix)),
        np.max(np.abs(xi @ CX_4 @ xi - ix @ CX_4)),
    ]

    M = encoding_matrix(code)
    residuals.append(np.max(np.abs(M - M.conj().T)))
    residuals.append(np.max(np.abs(M @ M - np.eye(1 << Q))))

    zeros = basis_vector(0, Q)
    ones = basis_vector((1 << Q) - 1, Q)
    zero_l = basis_vector(codeword_index(code, 0), Q)
    one_l = basis_vector(codeword_index(code, 1), Q)
    for _ in range(samples):
        alpha, beta = _random_amplitudes(rng, 2)
        residuals.append(np.max(np.abs(M @ (alpha * zeros + beta * ones) - (alpha * zero_l + beta * one_l))))
        residuals.append(np.max(np.abs(M @ (alpha * zero_l + beta * one_l) - (alpha * zeros + beta * ones))))
    return float(max(residuals))


def literal_logical_u3(code, theta, phi, lam, block_offset):
    """
    角度変換を使わない文字通りの L_S(U3)

    0∈S のとき L_∅(σ_x U3 σ_x) を X, U3, X の3ゲートで構成する。
    """
    Q = code.Q
    b = block_offset
    gates = [PhysicalGate.cx(b, b + i) for i in range(1, Q)]
    if 0 in code.S:
        gates.append(PhysicalGate.x(b))
        gates.append(PhysicalGate.u3(theta, phi, lam, b))
        gates.append(PhysicalGate.x(b))
    else:
        gates.append(PhysicalGate.u3(theta, phi, lam, b))
    gates.extend(PhysicalGate.cx(b, b + Q - i) for i in range(1, Q))
    return gates


def check_logical_u3(Q, S, samples=100, seed=0):
    """
    L_S(U3)(α|x⟩+β|y⟩) = τ|x⟩+δ|y⟩（(τ,δ) = U3·(α,β)）の最大偏差

    角度変換版と文字通りの L_∅(σ_x U3 σ_x) 版の一致も確かめる。
    """
    code = make_code(Q, S)
    rng = make_rng(seed, Q, code.x, 3)
    zero_l = basis_vector(codeword_index(code, 0), Q)
    one_l = basis_vector(codeword_index(code, 1), Q)
    worst = 0.0
    for _ in range(samples):
        theta, phi, lam = _random_angles(rng)
        alpha, beta = _random_amplitudes(rng, 2)
        unitary = unitary_of(PhysicalCircuit(Q, logical_u3(code, theta, phi, lam, 0)))
        tau, delta = u3_matrix(theta, phi, lam) @ np.array([alpha, beta])
        actual = unitary @ (alpha * zero_l + beta * one_l)
        worst = max(worst, max_deviation(actual, tau * zero_l + delta * one_l))
        literal = unitary_of(PhysicalCircuit(Q, literal_logical_u3(code, theta, phi, lam, 0)))
        worst = max(worst, max_deviation(unitary, literal))
    return worst


def check_logical_cx(Q, S, samples=50, seed=0):
    """
    L_S(C_x) が論理ラベル上のCXとして働くことの最大偏差

    (M⊗M) L_∅(C_x) (M⊗M) = L_S(C_x) の行列としての一致も確かめる。
    """
    code = make_code(Q, S)
    n = 2 * Q
    rng = make_rng(seed, Q, code.x, 2)
    unitary = unitary_of(PhysicalCircuit(n, logical_cx(code, 0, Q)))
    basis = {label: basis_vector(logical_index(code, label), n) for label in ('00', '01', '10', '11')}
    worst = 0.0
    for _ in range(samples):
        a, b, t, d = _random_amplitudes(rng, 4)
        state = a * basis['00'] + b * basis['01'] + t * basis['10'] + d * basis['11']
        expected = a * basis['00'] + b * basis['01'] + d * basis['10'] + t * basis['11']
        worst = max(worst, max_deviation(unitary @ state, expected, up_to_phase=False))

    bare = unitary_of(PhysicalCircuit(n, logical_cx(make_code(Q, set()), 0, Q)))
    MM = encoding_matrix(code, blocks=2)
    worst = max(worst, max_deviation(MM @ bare @ MM, unitary, up_to_phase=False))
    return worst


def check_commutant(Q, S, samples=20, seed=0):
    """0∉S のとき [L_∅(U3), M_S] = 0 の最大残差"""
    code = make_code(Q, S)
    if 0 in code.S:
        return 0.0
    rng = make_rng(seed, Q, code.x, 5)
    M = encoding_matrix(code)
    bare = make_code(Q, set())
    worst = 0.0
    for _ in range(samples):
        L = unitary_of(PhysicalCircuit(Q, logical_u3(bare, *_random_angles(rng), 0)))
        worst = max(worst, float(np.max(np.abs(L @ M - M @ L))))
    return worst


def random_circuit(rng, n_qubits, n_gates):
    """ランダムな物理回路（X / CX / U3 / 任意ユニタリ）"""
    gates = []
    for _ in range(n_gates):
        choice = int(rng.integers(0, 4)) if n_qubits > 1 else int(rng.choice([0, 2, 3]))
        if choice == 0:
            gates.append(PhysicalGate.x(int(rng.integers(n_qubits))))
        elif choice == 1:
            control, target = rng.choice(n_qubits, size=2, replace=False)
            gates.append(PhysicalGate.cx(int(control), int(target)))
        elif choice == 2:
            gates.append(PhysicalGate.u3(*_random_angles(rng), int(rng.integers(n_qubits))))
        else:
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q, r = np.linalg.qr(z)
            q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
            gates.append(PhysicalGate.unitary(q, int(rng.integers(n_qubits))))
    return PhysicalCircuit(n_qubits, gates)


def check_engine_vs_oracle(n_circuits=200, max_qubits=5, max_gates=30, seed=0):
    """状態ベクトルエンジンとオラクルの |0…0⟩ 出力の最大偏差"""
    rng = make_rng(seed, 9)
    worst = 0.0
    for _ in range(n_circuits):
        n = int(rng.integers(1, max_qubits + 1))
        circuit = random_circuit(rng, n, int(rng.integers(0, max_gates + 1)))
        engine = simulate(circuit).amplitudes
        oracle = unitary_of(circuit)[:, 0]
        worst = max(worst, max_deviation(engine, oracle))
    return worst


def check_detectable_errors(Q, S, step=math.pi / 8, seed=0):
    """
    検出可能エラーの掃引: 無効ブロックへの射影が E·(符号化状態) を消すのは E が対角のときだけ

    Returns:
        判定が食い違ったグリッド点の数（0 なら特徴付けと一致）
    """
    code = make_code(Q, S)
    rng = make_rng(seed, Q, code.x, 7)
    alpha, beta = _random_amplitudes(rng, 2)
    valid = {codeword_index(code, 0), codeword_index(code, 1)}
    invalid_mask = np.array([i not in valid for i in range(1 << Q)])
    encoded = init_state(Q)
    encoded.amplitudes[:] = 0
    encoded.amplitudes[codeword_index(code, 0)] = alpha
    encoded.amplitudes[codeword_index(code, 1)] = beta

    thetas = [k * step for k in range(int(round(2 * math.pi / step)) + 1)]
    phis = [k * step for k in range(int(round(2 * math.pi / step)))]
    mismatches = 0
    for theta, phi, lam in itertools.product(thetas, phis, phis):
        E = u3_matrix(theta, phi, lam)
        diagonal = abs(E[0, 1]) < 1e-9 and abs(E[1, 0]) < 1e-9
        for q in range(Q):
            state = encoded.copy()
            apply_matrix(state, E, q)
            invalid_mass = float(np.sum(np.abs(state.amplitudes[invalid_mask]) ** 2))
            if (invalid_mass < 1e-20) != diagonal:
                mismatches += 1
    return mismatches


@dataclass
class CheckResult:
    """検証テーブルの1行"""

    name: str
    params: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return self.residual <= self.tolerance

    def to_dict(self):
        return {'name': self.name, 'params': self.params, 'residual': self.residual,
                'tolerance': self.tolerance, 'passed': self.passed}


def _code_sets(Q, limit, rng):
    """Q に対する検証用の S の集合（全列挙できなければ ∅ と全体を含む乱択）"""
    if (1 << Q) <= limit:
        return [set(c) for r in range(Q + 1) for c in itertools.combinations(range(Q), r)]
    chosen = {frozenset(), frozenset(range(Q))}
    while len(chosen) < limit:
        chosen.add(frozenset(int(i) for i in np.flatnonzero(rng.integers(0, 2, size=Q))))
    return [set(s) for s in sorted(chosen, key=lambda s: (len(s), sorted(s)))]


def run_verification_suite(seed=0, quick=False):
    """
    全チェックを実行して検証テーブルを返す

    Args:
        seed: 乱数シード
        quick: True ならサンプル数を減らした短縮版

    Returns:
        list[CheckResult]
    """
    rng = make_rng(seed, 11)
    u3_samples = 10 if quick else 100
    cx_samples = 10 if quick else 50
    rows = []

    for Q in range(1, 6):
        sizes = sorted({0, 1, math.ceil(Q / 2), Q})
        for size in sizes:
            S = set(range(size))
            rows.append(CheckResult('identities', f'Q={Q} S={sorted(S)}',
                                    check_identities(Q, S, seed=seed), IDENTITY_TOL))

    for Q in range(1, 5):
        for S in _code_sets(Q, 8, rng):
            rows.append(CheckResult('logical_u3', f'Q={Q} S={sorted(S)}',
                                    check_logical_u3(Q, S, samples=u3_samples, seed=seed), THEOREM_TOL))

    for Q in range(1, 4):
        for S in _code_sets(Q, 4, rng):
            rows.append(CheckResult('logical_cx', f'Q={Q} S={sorted(S)}',
                                    check_logical_cx(Q, S, samples=cx_samples, seed=seed), THEOREM_TOL))

    for Q in range(2, 5):
        S = set(range(Q)) - {0}
        rows.append(CheckResult('commutant', f'Q={Q} S={sorted(S)}',
                                check_commutant(Q, S, seed=seed), THEOREM_TOL))

    rows.append(CheckResult('engine_vs_oracle', 'n≤5 gates≤30',
                            check_engine_vs_oracle(n_circuits=40 if quick else 200, seed=seed), THEOREM_TOL))

    for Q, S in ((2, {1}), (3, {0})):
        rows.append(CheckResult('detectable_errors', f'Q={Q} S={sorted(S)}',
                                float(check_detectable_errors(Q, S, seed=seed)), 0.0))

    failed = [r for r in rows if not r.passed]
    if failed:
        logger.error(f'❌ 検証失敗: {len(failed)}/{len(rows)}件')
    else:
        logger.info(f'✅ 検証完了: {len(rows)}件すべて合格')
    return rows
