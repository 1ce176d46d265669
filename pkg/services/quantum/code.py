"""
ビットフリップNAED符号
(Q, S) からの符号語構成、H⁺/H⁻ の分類、測定ビット列の判定
"""

import json
import math
from dataclasses import dataclass
from enum import Enum

from config.app_config import AppConfig
from utils.errors import ValidationError


class BlockOutcome(Enum):
    """1ブロック（Q量子ビット）の測定結果"""

    ZERO = 'zero'
    ONE = 'one'
    INVALID = 'invalid'


@dataclass(frozen=True)
class ShotClassification:
    """
    1ショットの判定結果

    accepted が True のとき logical に N 文字の論理ビット列が入る。
    """

    accepted: bool
    logical: str = None

    @classmethod
    def accept(cls, logical):
        return cls(True, logical)

    @classmethod
    def reject(cls):
        return cls(False, None)


@dataclass(frozen=True)
class BitFlipCode:
    """
    1論理量子ビット分のビットフリップ符号

    x = Σ_{i∈S} 2^i が |0⟩_L、y = 2^Q − 1 − x が |1⟩_L。
    x のビット i がブロック内の量子ビット i に載る。
    """

    Q: int
    S: frozenset
    x: int
    y: int

    @property
    def mask(self):
        return (1 << self.Q) - 1

    def codeword(self, bit):
        """論理ビット（0/1）の符号語整数"""
        return self.y if int(bit) else self.x

    def codeword_string(self, bit):
        """論理ビットの符号語をブロック文字列で返す（量子ビット0が左端）"""
        value = self.codeword(bit)
        return ''.join('1' if (value >> i) & 1 else '0' for i in range(self.Q))

    def encode_logical(self, logical):
        """論理ビット列を物理ビット列に変換（論理量子ビット0が左端）"""
        return ''.join(self.codeword_string(int(ch)) for ch in logical)

    def to_dict(self):
        return {'Q': self.Q, 'S': sorted(self.S)}

    def to_json(self):
        """コンパクトなJSON表現 {"Q":int,"S":[int...]}"""
        return json.dumps(self.to_dict(), separators=(',', ':'))

    @classmethod
    def from_json(cls, text):
        payload = json.loads(text) if isinstance(text, str) else dict(text)
        return make_code(payload['Q'], payload.get('S', []))


def make_code(Q, S):
    """
    (Q, S) からビットフリップ符号を構成

    Args:
        Q: 論理量子ビットあたりの物理量子ビット数（1〜25）
        S: {0,…,Q−1} の部分集合

    Raises:
        ValidationError: Q が範囲外、または S に範囲外の要素がある場合
    """
    if not isinstance(Q, int) or Q < 1 or Q > AppConfig.MAX_QUBITS:
        raise ValidationError(f'Q は 1〜{AppConfig.MAX_QUBITS} の整数である必要があります: {Q}')
    members = frozenset(int(i) for i in S)
    bad = sorted(i for i in members if i < 0 or i >= Q)
    if bad:
        raise ValidationError(f'S の要素 {bad} は 0〜{Q - 1} の範囲外です')
    x = sum(1 << i for i in members)
    y = (1 << Q) - 1 - x
    return BitFlipCode(Q=Q, S=members, x=x, y=y)


def default_experiment_set(Q):
    """
    実験用の符号語集合 S = {0,…,⌈Q/2⌉−1}（サイズ ⌈Q/2⌉）

    0と1の数を揃えるための選択。Q=2 では S={0} となり、
    S={1} と同じく 01/10 型の均衡した符号語になる。
    """
    if Q < 1:
        raise ValidationError(f'Q は1以上である必要があります: {Q}')
    return set(range(math.ceil(Q / 2)))


def experiment_code(Q):
    """
    GHZ実験で使う符号

    Q=1 は符号化なし（S=∅、x=0, y=1）として扱い、Q≥2 は default_experiment_set を使う。
    """
    if Q == 1:
        return make_code(1, set())
    return make_code(Q, default_experiment_set(Q))


def _block_value(block):
    """ブロック文字列を整数に変換（文字 i がビット i）"""
    if any(ch not in '01' for ch in block):
        raise ValidationError(f'ビット列に0/1以外の文字が含まれています: {block!r}')
    return int(block[::-1], 2) if block else 0


def classify_block(code, block):
    """
    1ブロックを Zero / One / Invalid に分類

    Raises:
        ValidationError: ブロック長が Q と異なる場合
    """
    if len(block) != code.Q:
        raise ValidationError(f'ブロック長 {len(block)} が Q={code.Q} と一致しません')
    value = _block_value(block)
    if value == code.x:
        return BlockOutcome.ZERO
    if value == code.y:
        return BlockOutcome.ONE
    return BlockOutcome.INVALID


def classify_shot(code, N, bits):
    """
    N·Q ビットの測定結果を受理（論理ビット列付き）または棄却に分類

    ブロックは連続する Q ビットで、論理量子ビット0が左端。

    Raises:
        ValidationError: 長さが N·Q と一致しない場合
    """
    if len(bits) != N * code.Q:
        raise ValidationError(f'ビット列の長さ {len(bits)} が N·Q={N * code.Q} と一致しません')
    logical = []
    for k in range(N):
        outcome = classify_block(code, bits[k * code.Q:(k + 1) * code.Q])
        if outcome is BlockOutcome.INVALID:
            return ShotClassification.reject()
        logical.append('0' if outcome is BlockOutcome.ZERO else '1')
    return ShotClassification.accept(''.join(logical))
