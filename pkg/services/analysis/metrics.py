"""
事後選択の集計と評価指標
類似度 μ、μ_Full、μ_NAED、P_Kept、および μ_Full = P_Kept − r_a/T の恒等式

指標はすべて 0〜100 のスケール（μ_Full の式は 0〜1 で書かれることがあるが100倍して揃える）。
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from services.quantum.code import classify_shot
from utils.errors import ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

PDF_TOL = 1e-9


def _check_pdf(pdf, name):
    total = sum(pdf.values())
    if abs(total - 1.0) > PDF_TOL:
        raise ValidationError(f'{name} の合計が1ではありません: {total}')
    if any(p < -PDF_TOL for p in pdf.values()):
        raise ValidationError(f'{name} に負の確率が含まれています')


def similarity(A, B):
    """
    2つの有限PDFの類似度 μ(A, B) = 100 − 50 Σ|A_i − B_i|

    疎な辞書で受け取り、存在しないキーは確率0として扱う。

    Raises:
        ValidationError: どちらかが正規化されていない場合
    """
    _check_pdf(A, 'A')
    _check_pdf(B, 'B')
    keys = set(A) | set(B)
    distance = sum(abs(A.get(k, 0.0) - B.get(k, 0.0)) for k in keys)
    return min(100.0, max(0.0, 100.0 - 50.0 * distance))


def empirical_pdf(counts):
    """ショットの多重集合（Counter）を疎なPDFに変換"""
    total = sum(counts.values())
    if total <= 0:
        raise ValidationError('ショットが空です')
    return {k: v / total for k, v in counts.items() if v > 0}


@dataclass
class Tally:
    """
    事後選択の集計

    T = r0 + r1 + ra + rb、r0 + r1 + ra = Σ accepted_hist
    """

    N: int
    T: int = 0
    r0: int = 0
    r1: int = 0
    ra: int = 0
    rb: int = 0
    accepted_hist: Counter = field(default_factory=Counter)

    @property
    def accepted(self):
        return self.r0 + self.r1 + self.ra

    def merge(self, other):
        """結合的なマージ（フィールドの加算とヒストグラムの和）"""
        if other.N != self.N:
            raise ValidationError(f'N の異なる集計はマージできません: {self.N} と {other.N}')
        hist = Counter(self.accepted_hist)
        hist.update(other.accepted_hist)
        return Tally(self.N, self.T + other.T, self.r0 + other.r0, self.r1 + other.r1,
                     self.ra + other.ra, self.rb + other.rb, hist)

    def is_consistent(self):
        return (self.T == self.r0 + self.r1 + self.ra + self.rb
                and self.accepted == sum(self.accepted_hist.values()))

    def to_dict(self):
        return {
            'N': self.N, 'T': self.T, 'r0': self.r0, 'r1': self.r1, 'ra': self.ra, 'rb': self.rb,
            'accepted_hist': dict(sorted(self.accepted_hist.items())),
        }

    @classmethod
    def from_counts(cls, N, r0, r1, ra, rb, accepted_hist=None):
        """整数の集計値から作成（accepted_hist 省略時は r_a を1つの論理列にまとめる）"""
        if N < 2:
            raise ValidationError(f'N は2以上である必要があります: {N}')
        if accepted_hist is None:
            accepted_hist = Counter()
            if r0:
                accepted_hist['0' * N] = r0
            if r1:
                accepted_hist['1' * N] = r1
            if ra:
                accepted_hist['0' * (N - 1) + '1'] = ra
        return cls(N, r0 + r1 + ra + rb, r0, r1, ra, rb, Counter(accepted_hist))


@dataclass
class Metrics:
    """評価指標（すべて 0〜100、mu_naed は受理ショットがないとき None）"""

    mu_full: float
    mu_naed: Optional[float]
    p_kept: float

    def to_dict(self):
        return {'mu_full': self.mu_full, 'mu_naed': self.mu_naed, 'p_kept': self.p_kept}


@dataclass
class IdentityCheck:
    """μ_Full = P_Kept − 100·r_a/T の検証結果"""

    holds: bool
    residual: Optional[Fraction]
    clipping_active: bool


def tally(shots, code, N):
    """
    ショットを r0 / r1 / ra / rb に分類して集計

    Args:
        shots: ビット列 → 回数（Counter または dict）、あるいはビット列の反復可能オブジェクト

    Raises:
        ValidationError: ビット列の長さが N·Q と一致しない場合
    """
    counts = shots if isinstance(shots, dict) else Counter(shots)
    zeros, ones = '0' * N, '1' * N
    result = Tally(N)
    for bits, count in counts.items():
        count = int(count)
        if count <= 0:
            continue
        outcome = classify_shot(code, N, bits)
        result.T += count
        if not outcome.accepted:
            result.rb += count
            continue
        result.accepted_hist[outcome.logical] += count
        if outcome.logical == zeros:
            result.r0 += count
        elif outcome.logical == ones:
            result.r1 += count
        else:
            result.ra += count
    return result


def _mu_full_exact(t):
    """μ_Full を有理数で評価（0〜100）"""
    T = Fraction(t.T)
    half = Fraction(1, 2)
    total = abs(half - t.r0 / T) + abs(half - t.r1 / T) + t.ra / T + t.rb / T
    return 100 - 50 * total


def _p_kept_exact(t):
    return 100 * (1 - Fraction(t.rb, t.T))


def ideal_logical_pdf(N):
    """論理空間の理想PDF（全0と全1にそれぞれ 0.5）"""
    return {'0' * N: 0.5, '1' * N: 0.5}


def metrics(t, N, Q):
    """
    集計から μ_Full、μ_NAED、P_Kept を計算

    μ_Full は全ショットの経験PDFと理想PDFの類似度。理想PDFの2点はそれぞれ
    論理全0/全1の符号語に1対1で対応するので、集計値だけから厳密に求まる。
    μ_NAED は受理ショットを論理列上で再正規化したPDFと論理理想PDFの類似度。

    Raises:
        ValidationError: T = 0 の場合
    """
    if t.T <= 0:
        raise ValidationError('T = 0 の集計から指標は計算できません')
    if t.N != N:
        raise ValidationError(f'集計の N={t.N} が指定の N={N} と一致しません')
    mu_full = float(_mu_full_exact(t))
    p_kept = float(_p_kept_exact(t))
    mu_naed = None
    if t.accepted > 0:
        accepted = {k: v / t.accepted for k, v in t.accepted_hist.items() if v > 0}
        mu_naed = similarity(accepted, ideal_logical_pdf(N))
    else:
        logger.warning(f'⚠️ 受理ショットがありません (N={N}, Q={Q})。μ_NAED は未定義です')
    return Metrics(mu_full=mu_full, mu_naed=mu_naed, p_kept=p_kept)


def identity_check(t):
    """
    μ_Full = P_Kept − 100·r_a/T を有理数演算で検証

    前提条件 r0 ≤ T/2 かつ r1 ≤ T/2 が満たされないときは絶対値が効くので
    clipping_active を返し、恒等式は適用しない。
    """
    if t.T <= 0:
        raise ValidationError('T = 0 の集計は検証できません')
    if 2 * t.r0 > t.T or 2 * t.r1 > t.T:
        return IdentityCheck(holds=False, residual=None, clipping_active=True)
    residual = _mu_full_exact(t) - (_p_kept_exact(t) - 100 * Fraction(t.ra, t.T))
    return IdentityCheck(holds=residual == 0, residual=residual, clipping_active=False)


def _block_patterns(code, n_qubits, N):
    """各ブロックの値を取り出すためのシフト量と、符号語のビットパターン（MSB側が量子ビット0）"""
    Q = code.Q
    x_pattern = int(code.codeword_string(0), 2)
    y_pattern = int(code.codeword_string(1), 2)
    shifts = [n_qubits - (k + 1) * Q for k in range(N)]
    return shifts, x_pattern, y_pattern


def logical_distribution(probs, code, N):
    """
    密な確率ベクトルを論理ビット列の分布と棄却確率に分解（サンプリングなし）

    Returns:
        (dict: 論理ビット列 → 確率, 棄却確率)
    """
    probs = np.asarray(probs, dtype=float)
    n_qubits = N * code.Q
    if probs.shape != (1 << n_qubits,):
        raise ValidationError(f'確率ベクトルの長さが 2^{n_qubits} と一致しません')
    support = np.flatnonzero(probs > 0)
    shifts, x_pattern, y_pattern = _block_patterns(code, n_qubits, N)
    mask = (1 << code.Q) - 1
    valid = np.ones(support.shape, dtype=bool)
    logical_index = np.zeros(support.shape, dtype=np.int64)
    for shift in shifts:
        block = (support >> shift) & mask
        is_x = block == x_pattern
        is_y = block == y_pattern
        valid &= is_x | is_y
        logical_index = (logical_index << 1) | is_y.astype(np.int64)
    distribution = {}
    for idx, p in zip(logical_index[valid], probs[support[valid]]):
        key = format(int(idx), f'0{N}b')
        distribution[key] = distribution.get(key, 0.0) + float(p)
    rejected = float(probs[support[~valid]].sum())
    return distribution, rejected


def rejection_probability(probs, code, N):
    """密な確率ベクトルのうち無効ブロックを含むビット列の確率の合計"""
    return logical_distribution(probs, code, N)[1]
