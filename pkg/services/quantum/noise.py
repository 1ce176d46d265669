"""
ノイズモデル
決定的な1ゲート注入、検出不能な位相エラー族、ゲートごとの確率的パウリノイズ、
振幅減衰の量子軌跡シミュレーション
"""

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.app_config import AppConfig
from services.quantum.circuits import simulate
from services.quantum.ir import U, U3, PhysicalCircuit, PhysicalGate
from services.quantum.sparse import ENTRY_BYTES, SparseBatch, support_bound
from services.quantum.statevec import (
    IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, check_unitary, make_rng, sample,
)
from utils.errors import ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

PAULIS = {'X': PAULI_X, 'Y': PAULI_Y, 'Z': PAULI_Z}
ERROR_KINDS = ('X', 'Y', 'Z', 'I', 'PHASE', 'CUSTOM')

# 1チャンクあたりのショット数（チャンクごとに独立した乱数ストリーム）
CHUNK_SHOTS = 1024

# 軌跡のステップ種別
_GATE = 'gate'
_PAULI = 'pauli'
_DAMP = 'damp'


def phase_error(theta, phi):
    """
    位相エラー P(θ, φ) = e^{iφ} diag(1, e^{iθ})

    対角なので測定確率を変えず、この符号では検出できない。
    """
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise ValidationError(f'位相エラーの角度が有限ではありません: θ={theta}, φ={phi}')
    return np.exp(1j * phi) * np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)


@dataclass
class InjectionSpec:
    """
    1ゲート注入の指定

    site: 物理ゲート列の位置（そのゲートの直後に挿入、−1 は先頭ゲートの前）
    error: 'X' | 'Y' | 'Z' | 'I' | 'PHASE' | 'CUSTOM'
    """

    site: int
    qubit: int
    error: str = 'X'
    theta: float = 0.0
    phi: float = 0.0
    matrix: Optional[np.ndarray] = None

    def unitary(self):
        """注入する2×2ユニタリ"""
        kind = self.error.upper()
        if kind in PAULIS:
            return PAULIS[kind]
        if kind == 'I':
            return IDENTITY_2
        if kind == 'PHASE':
            return phase_error(self.theta, self.phi)
        if kind == 'CUSTOM':
            if self.matrix is None:
                raise ValidationError('CUSTOM エラーには matrix が必要です')
            return check_unitary(self.matrix)
        raise ValidationError(f'不明なエラー種別です: {self.error}')

    def label(self):
        kind = self.error.upper()
        if kind == 'PHASE':
            return f'P({float(self.theta)!r},{float(self.phi)!r})'
        return kind

    def to_dict(self):
        """JSON表現（CUSTOM の行列は [実部, 虚部] の 2×2 入れ子リスト）"""
        kind = self.error.upper()
        payload = {'site': self.site, 'qubit': self.qubit, 'error': kind}
        if kind == 'PHASE':
            payload.update({'theta': self.theta, 'phi': self.phi})
        if kind == 'CUSTOM' and self.matrix is not None:
            m = np.asarray(self.matrix, dtype=complex)
            payload['matrix'] = [[[float(v.real), float(v.imag)] for v in row] for row in m]
        return payload

    @classmethod
    def from_dict(cls, payload):
        """
        to_dict の逆変換

        Raises:
            ValidationError: CUSTOM なのに matrix が無い、または形が 2×2×2 でない場合
        """
        kind = str(payload.get('error', 'X')).upper()
        matrix = None
        if kind == 'CUSTOM':
            if payload.get('matrix') is None:
                raise ValidationError('CUSTOM エラーには matrix が必要です')
            pairs = np.asarray(payload['matrix'], dtype=float)
            if pairs.shape != (2, 2, 2):
                raise ValidationError(f'matrix は [実部, 虚部] の 2×2 配列である必要があります: {pairs.shape}')
            matrix = pairs[..., 0] + 1j * pairs[..., 1]
        return cls(
            site=int(payload['site']),
            qubit=int(payload['qubit']),
            error=kind,
            theta=float(payload.get('theta', 0.0)),
            phi=float(payload.get('phi', 0.0)),
            matrix=matrix,
        )


@dataclass
class StochasticModel:
    """
    確率的ノイズモデル

    p_gate: 各ゲートが触れる各量子ビットにランダムなパウリを挿入する確率
    gamma: ゲート層ごと・量子ビットごとの振幅減衰確率（アイドル量子ビットも含む）
    paulis: 挿入するパウリの集合（'XYZ' の部分文字列）
    """

    p_gate: float = 0.0
    gamma: float = 0.0
    seed: int = 0
    paulis: str = 'XYZ'

    def validate(self):
        if not (0.0 <= self.p_gate <= 1.0):
            raise ValidationError(f'p_gate は 0〜1 の範囲である必要があります: {self.p_gate}')
        if not (0.0 <= self.gamma <= 1.0):
            raise ValidationError(f'gamma は 0〜1 の範囲である必要があります: {self.gamma}')
        if not self.paulis or any(p not in PAULIS for p in self.paulis.upper()):
            raise ValidationError(f'paulis は X/Y/Z からなる文字列である必要があります: {self.paulis!r}')
        return self

    @property
    def is_noiseless(self):
        return self.p_gate == 0.0 and self.gamma == 0.0

    def to_dict(self):
        payload = {'p_gate': self.p_gate, 'gamma': self.gamma, 'seed': self.seed}
        if self.paulis.upper() != 'XYZ':
            payload['paulis'] = self.paulis.upper()
        return payload

    @classmethod
    def from_dict(cls, payload):
        return cls(
            p_gate=float(payload.get('p_gate', 0.0)),
            gamma=float(payload.get('gamma', 0.0)),
            seed=int(payload.get('seed', 0)),
            paulis=str(payload.get('paulis', 'XYZ')).upper(),
        ).validate()


def inject(circuit, spec):
    """
    指定位置に1量子ビットのエラーゲートを1つ挿入した新しい回路を返す

    Raises:
        ValidationError: site または qubit が範囲外の場合
    """
    if spec.site < -1 or spec.site >= len(circuit.gates):
        raise ValidationError(f'site {spec.site} は −1〜{len(circuit.gates) - 1} の範囲外です')
    if spec.qubit < 0 or spec.qubit >= circuit.n_qubits:
        raise ValidationError(f'qubit {spec.qubit} は範囲外です (n_qubits={circuit.n_qubits})')
    error_gate = PhysicalGate.unitary(spec.unitary(), spec.qubit, spec.label())
    gates = list(circuit.gates)
    gates.insert(spec.site + 1, error_gate)
    return PhysicalCircuit(circuit.n_qubits, gates)


@dataclass
class TrajectoryStats:
    """軌跡シミュレーションの統計（メモリ上限の確認とログ用）"""

    shots: int = 0
    bundles: int = 0
    bundle_size: int = 0
    max_live_states: int = 0
    max_support: int = 0

    def to_dict(self):
        return {
            'shots': self.shots, 'bundles': self.bundles, 'bundle_size': self.bundle_size,
            'max_live_states': self.max_live_states, 'max_support': self.max_support,
        }


def bundle_size(circuit):
    """
    同時に展開するショット数の上限

    束のショットはそれぞれ台の上限ぶんの枠を持つので、
    束の大きさ × 状態1つの最大バイト数がメモリ予算に収まるように決める。
    """
    per_state = ENTRY_BYTES * support_bound(circuit)
    return max(1, min(CHUNK_SHOTS, AppConfig.trajectory_budget_bytes() // per_state))


def _trajectory_steps(circuit, model):
    """ゲート適用とノイズイベントを時間順に並べたステップ列"""
    steps = []
    for gate in circuit.gates:
        matrix = check_unitary(gate.matrix()) if gate.kind in (U3, U) else None
        steps.append((_GATE, gate.kind, gate.qubits, matrix))
        if model.p_gate > 0:
            steps.append((_PAULI, gate.qubits))
        if model.gamma > 0:
            steps.append((_DAMP,))
    return steps


def _pauli_noise(batch, qubits, model, rng):
    """触れた各量子ビットに、ショットごとに確率 p_gate でパウリを挿入"""
    labels = model.paulis.upper()
    weights = [1.0 - model.p_gate] + [model.p_gate / len(labels)] * len(labels)
    draws = rng.choice(len(weights), size=(batch.shots, len(qubits)), p=weights)
    for column, q in enumerate(qubits):
        for digit, label in enumerate(labels, 1):
            rows = draws[:, column] == digit
            if rows.any():
                batch.apply_pauli(label, q, rows)


def _run_bundle(steps, n_qubits, model, shots, rng, stats):
    """1束のショットを全ステップ進めて測定結果を返す"""
    batch = SparseBatch.zero(n_qubits, shots)
    for step in steps:
        if step[0] == _GATE:
            batch.apply_gate(step[1], step[2], step[3])
            stats.max_support = max(stats.max_support, batch.width)
        elif step[0] == _PAULI:
            _pauli_noise(batch, step[1], model, rng)
        else:
            batch.damping_layer(model.gamma, rng)
    stats.max_live_states = max(stats.max_live_states, batch.shots)
    return batch.sample(rng)


def simulate_noisy_with_stats(circuit, model, shots, seed):
    """
    simulate_noisy と同じ結果と軌跡の統計を返す

    Returns:
        tuple: (Counter, TrajectoryStats)
    """
    model.validate()
    if not isinstance(shots, (int, np.integer)) or shots <= 0:
        raise ValidationError(f'shots は正の整数である必要があります: {shots}')
    stats = TrajectoryStats(shots=int(shots))
    if model.is_noiseless:
        return sample(simulate(circuit), shots, seed), stats

    steps = _trajectory_steps(circuit, model)
    stats.bundle_size = bundle_size(circuit)
    counts = Counter()
    n_chunks = (shots + CHUNK_SHOTS - 1) // CHUNK_SHOTS
    for chunk in range(n_chunks):
        chunk_shots = min(CHUNK_SHOTS, shots - chunk * CHUNK_SHOTS)
        rng = make_rng(model.seed, seed, chunk)
        for start in range(0, chunk_shots, stats.bundle_size):
            bundle_shots = min(stats.bundle_size, chunk_shots - start)
            counts.update(_run_bundle(steps, circuit.n_qubits, model, bundle_shots, rng, stats))
            stats.bundles += 1
    logger.debug(f'軌跡シミュレーション完了: {stats.to_dict()}')
    return counts, stats


def simulate_noisy(circuit, model, shots, seed):
    """
    確率的ノイズ下で回路をショットごとの量子軌跡として実行

    各ゲートの後、触れた量子ビットごとに確率 p_gate でパウリを挿入し、
    全量子ビットに振幅減衰の分岐を適用してから最後に1回測定する。
    ショットは束ごとに疎な状態の配列としてまとめて進める。
    結果は (model.seed, seed) に対して決定的。

    Returns:
        Counter: ビット列 → 回数

    Raises:
        ValidationError: 確率やショット数が不正な場合
    """
    counts, _ = simulate_noisy_with_stats(circuit, model, shots, seed)
    return counts
