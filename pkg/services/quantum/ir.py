"""
回路の中間表現
論理回路（論理量子ビット上の U3/CX）と物理回路（物理量子ビット上の U3/CX/X/U）、
および物理回路の行指向テキスト形式
"""

import math
import re
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from services.quantum.statevec import PAULI_X, PAULI_Y, PAULI_Z, IDENTITY_2, u3_matrix
from utils.errors import ParseError, ValidationError

H_ANGLES = (math.pi / 2, 0.0, math.pi)
X_ANGLES = (math.pi, 0.0, math.pi)

# 物理ゲートの種類
U3 = 'u3'
CX = 'cx'
X = 'x'
U = 'u'


@dataclass(frozen=True)
class PhysicalGate:
    """
    物理ゲート

    kind: 'u3'（角度3つ）, 'cx'（制御, 標的）, 'x', 'u'（任意の2×2行列、注入エラー用）
    """

    kind: str
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()
    label: Optional[str] = None
    entries: Optional[Tuple[complex, ...]] = field(default=None, compare=False)

    @classmethod
    def u3(cls, theta, phi, lam, q):
        angles = (float(theta), float(phi), float(lam))
        if not all(math.isfinite(a) for a in angles):
            raise ValidationError(f'U3 の角度が有限ではありません: {angles}')
        return cls(U3, (int(q),), angles)

    @classmethod
    def cx(cls, control, target):
        if control == target:
            raise ValidationError(f'CX の制御と標的が同じです: {control}')
        return cls(CX, (int(control), int(target)))

    @classmethod
    def x(cls, q):
        return cls(X, (int(q),))

    @classmethod
    def unitary(cls, matrix, q, label='CUSTOM'):
        m = np.asarray(matrix, dtype=complex)
        return cls(U, (int(q),), (), label, tuple(complex(v) for v in m.reshape(4)))

    def matrix(self):
        """1量子ビットゲートの2×2行列"""
        if self.kind == U3:
            return u3_matrix(*self.params)
        if self.kind == X:
            return PAULI_X
        if self.kind == U:
            return np.array(self.entries, dtype=complex).reshape(2, 2)
        raise ValidationError(f'{self.kind} は1量子ビットゲートではありません')

    def render(self):
        """1行のテキスト表現"""
        qubits = ' '.join(f'q{q}' for q in self.qubits)
        if self.kind == U3:
            angles = ' '.join(format_angle(a) for a in self.params)
            return f'u3 {angles} {qubits}'
        if self.kind == U:
            return f'u {self.label} {qubits}'
        return f'{self.kind} {qubits}'


@dataclass
class PhysicalCircuit:
    """物理回路（ゲートは左から右へ時間順に適用）"""

    n_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            for q in gate.qubits:
                if q < 0 or q >= self.n_qubits:
                    raise ValidationError(f'ゲート {gate.render()} のインデックスが範囲外です (n_qubits={self.n_qubits})')

    def count(self, kind):
        return sum(1 for g in self.gates if g.kind == kind)

    def render(self):
        """1行1ゲートのテキスト形式（先頭に qubits ヘッダ）"""
        lines = [f'qubits {self.n_qubits}']
        lines.extend(g.render() for g in self.gates)
        return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class LogicalGate:
    """論理ゲート（'u3' は角度3つと量子ビット1つ、'cx' は制御と標的）"""

    kind: str
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()

    def render(self):
        qubits = ' '.join(f'q{q}' for q in self.qubits)
        if self.kind == U3:
            if self.params == H_ANGLES:
                return f'h {qubits}'
            if self.params == X_ANGLES:
                return f'x {qubits}'
            angles = ' '.join(format_angle(a) for a in self.params)
            return f'u3 {angles} {qubits}'
        return f'{self.kind} {qubits}'


@dataclass
class LogicalCircuit:
    """N 論理量子ビット上の論理回路"""

    N: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            if gate.kind not in (U3, CX):
                raise ValidationError(f'論理ゲート {gate.kind} はサポートされていません')
            for q in gate.qubits:
                if q < 0 or q >= self.N:
                    raise ValidationError(f'論理ゲート {gate.render()} のインデックスが範囲外です (N={self.N})')

    def u3(self, theta, phi, lam, q):
        self.gates.append(LogicalGate(U3, (int(q),), (float(theta), float(phi), float(lam))))
        self.__post_init__()
        return self

    def h(self, q):
        return self.u3(*H_ANGLES, q)

    def cx(self, control, target):
        if control == target:
            raise ValidationError(f'CX の制御と標的が同じです: {control}')
        self.gates.append(LogicalGate(CX, (int(control), int(target))))
        self.__post_init__()
        return self

    def render(self):
        """DSL 形式のテキスト"""
        lines = [f'qubits {self.N}']
        lines.extend(g.render() for g in self.gates)
        return '\n'.join(lines) + '\n'


def format_angle(value):
    """角度を往復可能な最短の10進表記で出力"""
    return repr(float(value))


_PHASE_LABEL = re.compile(r'^P\(([^,()]+),([^,()]+)\)$')


def unitary_from_label(label):
    """'u' ゲートのラベルから2×2行列を復元（X/Y/Z/I/P(θ,φ)）"""
    fixed = {'X': PAULI_X, 'Y': PAULI_Y, 'Z': PAULI_Z, 'I': IDENTITY_2}
    if label in fixed:
        return fixed[label]
    match = _PHASE_LABEL.match(label)
    if match:
        theta, phi = float(match.group(1)), float(match.group(2))
        return np.exp(1j * phi) * np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)
    raise ValidationError(f'ラベル {label} から行列を復元できません')


_QUBIT = re.compile(r'^q([0-9]+)$')
_COUNT = re.compile(r'[0-9]+')


def _qubit_token(token, line_no, column):
    match = _QUBIT.match(token)
    if not match:
        raise ParseError(f'量子ビット指定が不正です: {token!r}', line_no, column)
    return int(match.group(1))


def parse_physical(text):
    """
    物理回路のテキスト形式をパース（render() の逆変換）

    Raises:
        ParseError: 形式が不正な場合（行番号付き）
    """
    n_qubits = None
    gates = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        column = raw.find(head) + 1
        if head == 'qubits':
            if n_qubits is not None or len(tokens) != 2 or not _COUNT.fullmatch(tokens[1]):
                raise ParseError('qubits ヘッダが不正です', line_no, column)
            n_qubits = int(tokens[1])
            continue
        if n_qubits is None:
            raise ParseError('qubits ヘッダがありません', line_no, column)
        try:
            if head == 'x' and len(tokens) == 2:
                gate = PhysicalGate.x(_qubit_token(tokens[1], line_no, column))
            elif head == 'cx' and len(tokens) == 3:
                gate = PhysicalGate.cx(_qubit_token(tokens[1], line_no, column),
                                       _qubit_token(tokens[2], line_no, column))
            elif head == 'u3' and len(tokens) == 5:
                gate = PhysicalGate.u3(float(tokens[1]), float(tokens[2]), float(tokens[3]),
                                       _qubit_token(tokens[4], line_no, column))
            elif head == 'u' and len(tokens) == 3:
                gate = PhysicalGate.unitary(unitary_from_label(tokens[1]),
                                            _qubit_token(tokens[2], line_no, column), tokens[1])
            else:
                raise ParseError(f'不明なゲートまたは引数の数が不正です: {line!r}', line_no, column)
        except ValueError as e:
            raise ParseError(str(e), line_no, column) from e
        if any(q >= n_qubits for q in gate.qubits):
            raise ParseError(f'インデックスが範囲外です (index out of range): {line!r}', line_no, column)
        gates.append(gate)
    if n_qubits is None:
        raise ParseError('qubits ヘッダがありません', 1, 1)
    return PhysicalCircuit(n_qubits, gates)
