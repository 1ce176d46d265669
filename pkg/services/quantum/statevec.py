"""
状態ベクトルエンジン
ゲート適用・確率抽出・シード付きショットサンプリングを提供

量子ビットの規約: 量子ビット q は左から q 番目のテンソル因子（σ_0 = σ_x ⊗ I）。
振幅インデックスのビット (n-1-q) が量子ビット q に対応するので、
インデックス i のビット列は format(i, f"0{n}b") で量子ビット0が左端になる。
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from config.app_config import AppConfig
from utils.errors import CapacityError, ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

UNITARY_TOL = 1e-10
NORM_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


@dataclass
class StateVector:
    """n量子ビットの密な状態ベクトル（1つのシミュレーションが専有する）"""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValidationError(
                f'振幅の長さが 2^{self.n_qubits} と一致しません: {self.amplitudes.shape}'
            )

    def copy(self):
        """独立したコピーを返す"""
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def norm(self):
        """Σ|amp|² を返す"""
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def make_rng(seed, *stream):
    """
    シードとストリーム番号から独立した乱数生成器を作成

    PCG64 を SeedSequence([seed, *stream]) で初期化する。
    同じ (seed, stream) からは常に同じ系列が得られ、異なる stream は独立。

    Args:
        seed: マスターシード（64ビット整数）
        *stream: 派生ストリームの番号（rep番号やチャンク番号など）

    Returns:
        numpy.random.Generator
    """
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(s) & 0xFFFFFFFFFFFFFFFF for s in stream]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def bitstring(index, n_qubits):
    """基底インデックスをビット列に変換（量子ビット0が左端）"""
    return format(int(index), f'0{n_qubits}b')


def check_unitary(matrix, tol=UNITARY_TOL):
    """
    2×2 行列がユニタリかどうかを検証

    Raises:
        ValidationError: 形状が不正、または ‖U†U − I‖_max > tol の場合
    """
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (2, 2):
        raise ValidationError(f'1量子ビットゲートは2×2行列である必要があります: {u.shape}')
    if not np.all(np.isfinite(u)):
        raise ValidationError('ゲート行列に有限でない要素が含まれています')
    deviation = np.max(np.abs(u.conj().T @ u - IDENTITY_2))
    if deviation > tol:
        raise ValidationError(f'行列がユニタリではありません (‖U†U − I‖_max = {deviation:.3e})')
    return u


def _check_qubit(state, q, name='qubit'):
    if not isinstance(q, (int, np.integer)) or q < 0 or q >= state.n_qubits:
        raise IndexError(f'{name} {q} は範囲外です (n_qubits={state.n_qubits})')


def init_state(n_qubits):
    """
    |00...0⟩ の状態ベクトルを作成

    Args:
        n_qubits: 物理量子ビット数（1〜25）

    Raises:
        CapacityError: 量子ビット数が範囲外の場合
    """
    if not isinstance(n_qubits, (int, np.integer)) or n_qubits < 1 or n_qubits > AppConfig.MAX_QUBITS:
        raise CapacityError(f'量子ビット数 {n_qubits} はサポート範囲 1〜{AppConfig.MAX_QUBITS} 外です')
    amplitudes = np.zeros(1 << int(n_qubits), dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(int(n_qubits), amplitudes)


def apply_matrix(state, matrix, q):
    """
    任意の2×2行列を量子ビット q に適用（ユニタリ性は検証しない）

    ノイズのKraus演算子など非ユニタリな演算にも使う内部用の経路。
    """
    n = state.n_qubits
    m = np.asarray(matrix, dtype=complex)
    psi = state.amplitudes.reshape(1 << q, 2, 1 << (n - q - 1))
    if m[0, 1] == 0 and m[1, 0] == 0:
        # 対角行列は振幅のスケーリングだけで済む
        if m[0, 0] != 1:
            psi[:, 0, :] *= m[0, 0]
        if m[1, 1] != 1:
            psi[:, 1, :] *= m[1, 1]
        return state
    a0 = psi[:, 0, :].copy()
    a1 = psi[:, 1, :].copy()
    psi[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    psi[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    return state


def apply_1q(state, U, q):
    """
    2×2ユニタリを量子ビット q に適用（in-place、テンソル位置 q に U）

    Args:
        state: StateVector（変更される）
        U: 2×2 複素ユニタリ
        q: 量子ビット番号

    Returns:
        更新された StateVector（同じオブジェクト）

    Raises:
        ValidationError: U がユニタリでない場合
        IndexError: q が範囲外の場合
    """
    _check_qubit(state, q)
    u = check_unitary(U)
    return apply_matrix(state, u, q)


def apply_x(state, q):
    """σ_x を量子ビット q に適用（振幅の入れ替えのみ）"""
    _check_qubit(state, q)
    n = state.n_qubits
    psi = state.amplitudes.reshape(1 << q, 2, 1 << (n - q - 1))
    psi[:, [0, 1], :] = psi[:, [1, 0], :]
    return state


def apply_cx(state, control, target):
    """
    制御NOTを適用: 制御ビットが1の基底状態だけ標的ビットを反転

    Raises:
        ValidationError: control == target の場合
        IndexError: インデックスが範囲外の場合
    """
    _check_qubit(state, control, 'control')
    _check_qubit(state, target, 'target')
    if control == target:
        raise ValidationError(f'制御と標的が同じ量子ビットです: {control}')
    n = state.n_qubits
    tensor = state.amplitudes.reshape((2,) * n)
    index = [slice(None)] * n
    index[control] = 1
    # 基本インデックスなのでビュー（元の配列を直接書き換える）
    sub = tensor[tuple(index)]
    axis = target if target < control else target - 1
    sub[...] = np.flip(sub, axis=axis).copy()
    return state


def probabilities(state):
    """
    各基底状態の確率 |amp|² を返す（密な配列、インデックス順）
    """
    probs = np.abs(state.amplitudes) ** 2
    return probs


def probability_map(state, tol=1e-15):
    """
    非ゼロ確率だけを持つ疎なPDF（ビット列 → 確率）を返す
    """
    probs = probabilities(state)
    support = np.flatnonzero(probs > tol)
    return {bitstring(i, state.n_qubits): float(probs[i]) for i in support}


def sample(state, shots, seed):
    """
    確率分布から shots 回の独立な測定をサンプリング

    同じ (state, shots, seed) からはビット単位で同一の結果が得られる。

    Args:
        state: 正規化された StateVector
        shots: ショット数（正の整数）
        seed: 64ビット整数のシード

    Returns:
        Counter: ビット列 → 出現回数（多重集合）

    Raises:
        ValidationError: shots が正でない場合
    """
    if not isinstance(shots, (int, np.integer)) or shots <= 0:
        raise ValidationError(f'shots は正の整数である必要があります: {shots}')
    rng = make_rng(seed)
    return sample_with_rng(state, shots, rng)


def sample_with_rng(state, shots, rng):
    """既存の乱数生成器を使ってサンプリング（ノイズシミュレーション用）"""
    probs = probabilities(state)
    total = probs.sum()
    if total <= 0:
        raise ValidationError('状態ベクトルのノルムが0です')
    probs = probs / total
    draws = rng.choice(probs.shape[0], size=int(shots), p=probs)
    indices, counts = np.unique(draws, return_counts=True)
    return Counter({bitstring(i, state.n_qubits): int(c) for i, c in zip(indices, counts)})


def u3_matrix(theta, phi, lam):
    """
    標準的な3角度の1量子ビットユニタリ U3(θ, φ, λ)

    U3(π/2, 0, π) = H、U3(π, 0, π) = σ_x。
    """
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array([
        [c, -np.exp(1j * lam) * s],
        [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
    ], dtype=complex)
