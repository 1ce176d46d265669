"""
疎な軌跡状態のバッチ
ショットごとの状態を非ゼロ振幅の (基底インデックス, 振幅) の枠だけで保持し、
束のショットを (ショット数, 枠数) の配列でまとめて進める

X・CX・パウリ・振幅減衰のKraus演算子は台（非ゼロ成分の数）を増やさず、
一般の1量子ビットゲートでも高々2倍にしかならない。
GHZ(N,Q) の軌跡は量子ビット数によらず台が2以下のまま進む。
インデックスの規約は statevec と同じ（ビット n-1-q が量子ビット q）。
"""

from collections import Counter

import numpy as np

from services.quantum.ir import CX, U, U3, X
from services.quantum.statevec import bitstring
from utils.errors import ValidationError

# |amp|² がこれ未満の成分は打ち消し合ったものとして捨てる
DROP_TOL = 1e-30

# 1成分あたりのバイト数（int64 インデックス + complex128 振幅）
ENTRY_BYTES = 24


def support_bound(circuit):
    """
    回路を |0…0⟩ から実行したときの台の上限 2^min(n, 一般1量子ビットゲート数)

    パウリと減衰は単項演算なので上限を変えない。
    """
    general = sum(1 for g in circuit.gates if g.kind in (U3, U))
    return 1 << min(circuit.n_qubits, general)


def _pick_slots(probs, rng):
    """各行の枠を |amp|² に比例して1つずつ選ぶ"""
    cumulative = probs.cumsum(axis=1)
    threshold = rng.random(probs.shape[0]) * cumulative[:, -1]
    picks = (cumulative <= threshold[:, None]).sum(axis=1)
    return np.minimum(picks, probs.shape[1] - 1)


class SparseBatch:
    """
    束のショットの疎な状態

    行 b がショット b の軌跡。振幅0の枠は空きとして扱い、次の一般ゲートで詰める。
    行ごとの大域位相は測定に影響しないので追跡しない。
    """

    __slots__ = ('n_qubits', 'indices', 'amplitudes', 'weights')

    def __init__(self, n_qubits, indices, amplitudes):
        self.n_qubits = int(n_qubits)
        self.indices = np.atleast_2d(np.asarray(indices, dtype=np.int64))
        self.amplitudes = np.atleast_2d(np.asarray(amplitudes, dtype=np.complex128))
        if self.indices.shape != self.amplitudes.shape:
            raise ValidationError(f'インデックスと振幅の形が一致しません: {self.indices.shape} と {self.amplitudes.shape}')
        # 量子ビット q のビット値 1 << (n-1-q)
        self.weights = np.left_shift(np.int64(1), np.arange(self.n_qubits - 1, -1, -1, dtype=np.int64))

    @classmethod
    def zero(cls, n_qubits, shots):
        """全ショット |0…0⟩"""
        return cls(n_qubits, np.zeros((shots, 1)), np.ones((shots, 1)))

    @property
    def shots(self):
        return int(self.indices.shape[0])

    @property
    def width(self):
        """1行あたりの枠数（行ごとの台の上限）"""
        return int(self.indices.shape[1])

    def bit(self, q):
        return int(self.weights[q])

    def support(self):
        """行ごとの非ゼロ成分の数"""
        return (self.probabilities() > 0).sum(axis=1)

    def probabilities(self):
        return self.amplitudes.real ** 2 + self.amplitudes.imag ** 2

    def apply_x(self, q, rows=None):
        if rows is None:
            self.indices ^= self.bit(q)
        else:
            self.indices[rows] ^= self.bit(q)

    def apply_z(self, q, rows=None):
        excited = (self.indices & self.bit(q)) != 0
        if rows is not None:
            excited &= rows[:, None]
        self.amplitudes = np.where(excited, -self.amplitudes, self.amplitudes)

    def apply_pauli(self, label, q, rows=None):
        # Y は行ごとの大域位相 i を除いて Z の後に X
        if label in ('Z', 'Y'):
            self.apply_z(q, rows)
        if label in ('X', 'Y'):
            self.apply_x(q, rows)

    def apply_cx(self, control, target):
        flip = (self.indices & self.bit(control)) != 0
        self.indices = np.where(flip, self.indices ^ self.bit(target), self.indices)

    def apply_matrix(self, matrix, q):
        """全行に同じ2×2行列を量子ビット q に適用し、同じインデックスの成分をまとめる"""
        bit = self.bit(q)
        column = ((self.indices & bit) != 0).astype(np.intp)
        base = self.indices & ~bit
        indices = np.concatenate([base, base | bit], axis=1)
        amplitudes = np.concatenate([matrix[0, column] * self.amplitudes,
                                     matrix[1, column] * self.amplitudes], axis=1)
        self._compact(indices, amplitudes)

    def _compact(self, indices, amplitudes):
        """行内の重複インデックスを足し合わせ、消えた成分を詰める"""
        rows = np.repeat(np.arange(self.shots, dtype=np.int64), indices.shape[1])
        keys = (rows << self.n_qubits) | indices.ravel()
        unique, inverse = np.unique(keys, return_inverse=True)
        combined = np.zeros(unique.shape[0], dtype=np.complex128)
        np.add.at(combined, inverse.ravel(), amplitudes.ravel())
        keep = (combined.real ** 2 + combined.imag ** 2) >= DROP_TOL
        unique, combined = unique[keep], combined[keep]

        row = unique >> self.n_qubits
        counts = np.bincount(row, minlength=self.shots)
        if (counts == 0).any():
            raise ValidationError('軌跡の状態のノルムが0です')
        starts = np.cumsum(counts) - counts
        position = np.arange(unique.shape[0]) - starts[row]
        width = int(counts.max())
        self.indices = np.zeros((self.shots, width), dtype=np.int64)
        self.amplitudes = np.zeros((self.shots, width), dtype=np.complex128)
        self.indices[row, position] = unique & ((1 << self.n_qubits) - 1)
        self.amplitudes[row, position] = combined

    def apply_gate(self, kind, qubits, matrix=None):
        if kind == X:
            self.apply_x(qubits[0])
        elif kind == CX:
            self.apply_cx(*qubits)
        elif kind in (U3, U):
            self.apply_matrix(matrix, qubits[0])
        else:
            raise ValidationError(f'不明なゲート種別です: {kind}')

    def normalize(self):
        norms = np.sqrt(self.probabilities().sum(axis=1))
        if (norms <= 0).any():
            raise ValidationError('軌跡の状態のノルムが0です')
        self.amplitudes = self.amplitudes / norms[:, None]

    def _excited_counts(self, indices):
        """各成分の励起ビット数"""
        counts = np.zeros(indices.shape, dtype=np.int64)
        for weight in self.weights:
            counts += (indices & weight) != 0
        return counts

    def apply_damping_jumps(self, jump_masks, gamma):
        """
        行ごとに減衰のKraus積（jump_masks のビットに K1、それ以外に K0）を適用して正規化

        K1 で消える成分（ジャンプしたビットが立っていないもの）は振幅0にし、
        跳ばなかった励起ビットごとに √(1−γ) を掛ける。
        """
        masks = np.asarray(jump_masks, dtype=np.int64)[:, None]
        keep = (self.indices & masks) == masks
        self.indices = self.indices & ~masks
        factors = np.sqrt(1.0 - gamma) ** self._excited_counts(self.indices)
        self.amplitudes = np.where(keep, self.amplitudes * factors, 0)
        self.normalize()

    def damping_layer(self, gamma, rng):
        """
        全量子ビットへの振幅減衰を1層、行ごとに確率的に展開

        成分を |amp|² で1つ引き、その成分の励起ビットがそれぞれ確率 γ で跳ぶ。
        これは量子ビットごとに K0/K1 を順に選ぶ軌跡と同じ分布になる。
        励起した成分がどの行にもなければ乱数を消費せずに何もしない。
        """
        if not self.indices.any():
            return
        picks = _pick_slots(self.probabilities(), rng)
        picked = self.indices[np.arange(self.shots), picks]
        excited = (picked[:, None] & self.weights[None, :]) != 0
        jumped = excited & (rng.random(excited.shape) < gamma)
        self.apply_damping_jumps(jumped.astype(np.int64) @ self.weights, gamma)

    def sample(self, rng):
        """各行を1回ずつ測定して Counter（ビット列 → 回数）を返す"""
        picks = _pick_slots(self.probabilities(), rng)
        outcomes = self.indices[np.arange(self.shots), picks]
        values, counts = np.unique(outcomes, return_counts=True)
        return Counter({bitstring(v, self.n_qubits): int(c) for v, c in zip(values, counts)})

    def to_dense(self, row=0):
        """行 row の密な振幅ベクトル（検証用）"""
        dense = np.zeros(1 << self.n_qubits, dtype=np.complex128)
        np.add.at(dense, self.indices[row], self.amplitudes[row])
        return dense
