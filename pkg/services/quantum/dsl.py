"""
論理回路DSLパーサー

文法（UTF-8、行指向）:
    qubits <N>
    h q<i>
    x q<i>
    u3 <θ> <φ> <λ> q<i>
    cx q<i> q<j>
'#' 以降はコメント。角度は10進のラジアン。
"""

import math
import re

from services.quantum.ir import H_ANGLES, X_ANGLES, CX, U3, LogicalCircuit, LogicalGate
from utils.errors import ParseError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

_TOKEN = re.compile(r'\S+')
_QUBIT = re.compile(r'^q([0-9]+)$')
_COUNT = re.compile(r'[0-9]+')

# ニーモニック → (角度の数, 量子ビットの数)
GATE_ARITY = {
    'h': (0, 1),
    'x': (0, 1),
    'u3': (3, 1),
    'cx': (0, 2),
}


def _tokens(line):
    """(トークン, 1始まりの列番号) のリスト"""
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(line)]


def _parse_qubit(token, column, line_no, width):
    match = _QUBIT.match(token)
    if not match:
        raise ParseError(f'量子ビット指定が不正です: {token!r}', line_no, column)
    index = int(match.group(1))
    if index >= width:
        raise ParseError(f'index out of range: {token} (qubits {width})', line_no, column)
    return index


def _parse_angle(token, column, line_no):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f'角度が数値ではありません: {token!r}', line_no, column) from None
    if not math.isfinite(value):
        raise ParseError(f'角度が有限ではありません: {token!r}', line_no, column)
    return value


def parse_dsl(text):
    """
    DSLテキストを LogicalCircuit にパース

    Raises:
        ParseError: 不明なニーモニック、引数の数の誤り、範囲外インデックスなど（行・列付き）
    """
    width = None
    gates = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        code = raw.split('#', 1)[0]
        tokens = _tokens(code)
        if not tokens:
            continue
        head, head_col = tokens[0]
        args = tokens[1:]

        if head == 'qubits':
            if width is not None:
                raise ParseError('qubits ヘッダが重複しています', line_no, head_col)
            if len(args) != 1 or not _COUNT.fullmatch(args[0][0]) or int(args[0][0]) < 1:
                raise ParseError('qubits ヘッダには正の整数が1つ必要です', line_no, head_col)
            width = int(args[0][0])
            continue

        if width is None:
            raise ParseError('最初の命令は qubits <N> である必要があります', line_no, head_col)
        if head not in GATE_ARITY:
            raise ParseError(f'不明なニーモニックです: {head!r}', line_no, head_col)

        n_angles, n_qubits = GATE_ARITY[head]
        if len(args) != n_angles + n_qubits:
            raise ParseError(
                f'{head} は {n_angles + n_qubits} 個の引数を取りますが {len(args)} 個指定されています',
                line_no, head_col,
            )
        angles = tuple(_parse_angle(tok, col, line_no) for tok, col in args[:n_angles])
        qubits = tuple(_parse_qubit(tok, col, line_no, width) for tok, col in args[n_angles:])

        if head == 'cx':
            if qubits[0] == qubits[1]:
                raise ParseError('cx の制御と標的が同じです', line_no, args[1][1])
            gates.append(LogicalGate(CX, qubits))
        elif head == 'h':
            gates.append(LogicalGate(U3, qubits, H_ANGLES))
        elif head == 'x':
            gates.append(LogicalGate(U3, qubits, X_ANGLES))
        else:
            gates.append(LogicalGate(U3, qubits, angles))

    if width is None:
        raise ParseError('qubits ヘッダがありません', 1, 1)
    logger.debug(f'DSLパース完了: qubits {width}, {len(gates)}ゲート')
    return LogicalCircuit(width, gates)


def render_dsl(circuit):
    """LogicalCircuit を正規形のDSLテキストに変換"""
    return circuit.render()
