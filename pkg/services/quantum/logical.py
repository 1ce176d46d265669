"""
論理ゲート合成
符号化回路・論理U3・論理CXを物理ゲート列に展開し、冗長ゲートを除去する
"""

from config.app_config import AppConfig
from services.quantum.ir import (
    CX, U3, X,
    LogicalCircuit, PhysicalCircuit, PhysicalGate,
)
from utils.errors import CapacityError, ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)


def encoding_ops(code, block_offset):
    """
    符号化行列 M_S のゲート列: i∈S の各量子ビットに X

    |0…0⟩ に適用するとブロックは符号語 x になる。
    """
    return [PhysicalGate.x(block_offset + i) for i in sorted(code.S)]


def conjugated_u3_angles(theta, phi, lam):
    """
    σ_x U3(θ,φ,λ) σ_x と大域位相を除いて等しい U3 の角度

    σ_x U3(θ,φ,λ) σ_x = e^{i(φ+λ)} U3(−θ, −φ, −λ)
    """
    return -theta, -phi, -lam


def logical_u3(code, theta, phi, lam, block_offset):
    """
    論理U3ゲート L_S(U3)

    ブロック先頭量子ビットから残りへのファンインCX、先頭量子ビットへのU3、
    逆順のファンアウトCX。0∈S のときは σ_x U3 σ_x 相当の角度に置き換える。
    CX は常に 2(Q−1) 個。
    """
    Q = code.Q
    b = block_offset
    if 0 in code.S:
        theta, phi, lam = conjugated_u3_angles(theta, phi, lam)
    gates = [PhysicalGate.cx(b, b + i) for i in range(1, Q)]
    gates.append(PhysicalGate.u3(theta, phi, lam, b))
    gates.extend(PhysicalGate.cx(b, b + Q - i) for i in range(1, Q))
    return gates


def logical_cx(code, ctrl_offset, tgt_offset):
    """
    論理CXゲート L_S(C_x) = Π C_x(r_i, p_i) · (I ⊗ M_S)

    Raises:
        ValidationError: 制御ブロックと標的ブロックが重なる場合
    """
    Q = code.Q
    if ctrl_offset < tgt_offset + Q and tgt_offset < ctrl_offset + Q:
        raise ValidationError(f'論理CXのブロックが重なっています: {ctrl_offset} と {tgt_offset} (Q={Q})')
    gates = encoding_ops(code, tgt_offset)
    gates.extend(PhysicalGate.cx(ctrl_offset + i, tgt_offset + i) for i in range(Q))
    return gates


def lower(logical_circuit, code):
    """
    論理回路を物理回路に展開

    論理量子ビット k は物理量子ビット kQ … kQ+Q−1 を使う。
    すべてのブロックを先に符号化してから、各論理ゲートを置き換える。

    Raises:
        CapacityError: 物理レジスタが上限を超える場合
        ValidationError: サポート外の論理ゲートがある場合
    """
    if not isinstance(logical_circuit, LogicalCircuit):
        raise ValidationError('lower には LogicalCircuit を渡してください')
    Q = code.Q
    n_qubits = logical_circuit.N * Q
    if n_qubits > AppConfig.MAX_QUBITS:
        raise CapacityError(f'物理量子ビット数 {n_qubits} が上限 {AppConfig.MAX_QUBITS} を超えています')

    gates = []
    for k in range(logical_circuit.N):
        gates.extend(encoding_ops(code, k * Q))
    for gate in logical_circuit.gates:
        if gate.kind == U3:
            gates.extend(logical_u3(code, *gate.params, gate.qubits[0] * Q))
        elif gate.kind == CX:
            control, target = gate.qubits
            gates.extend(logical_cx(code, control * Q, target * Q))
        else:
            raise ValidationError(f'論理ゲート {gate.kind} はサポートされていません')
    logger.debug(f'lower: N={logical_circuit.N}, Q={Q}, S={sorted(code.S)} → {len(gates)}ゲート')
    return PhysicalCircuit(n_qubits, gates)


def lower_with_boundaries(logical_circuit, code):
    """
    lower と同じ展開を行い、論理ゲート境界の位置も返す

    境界は「符号化の直後」と「各論理ゲートの直後」で、
    値は直前のゲートのインデックス（ゲートがなければ -1）。
    エラー注入はこの未簡約の回路に対して行う。

    Returns:
        (PhysicalCircuit, list[int])
    """
    circuit = lower(logical_circuit, code)
    Q = code.Q
    position = len(code.S) * logical_circuit.N
    boundaries = [position - 1]
    for gate in logical_circuit.gates:
        if gate.kind == U3:
            position += 2 * (Q - 1) + 1
        else:
            position += len(code.S) + Q
        boundaries.append(position - 1)
    return circuit, boundaries


def _commutes(g, h):
    """自己逆ゲート g（X または CX）と h が可換であることが分かっているか"""
    if not set(g.qubits) & set(h.qubits):
        return True
    if g.kind == X:
        q = g.qubits[0]
        if h.kind == X:
            return True
        # 標的側の X は CX と可換
        return h.kind == CX and h.qubits[1] == q and h.qubits[0] != q
    if g.kind == CX:
        c, t = g.qubits
        if h.kind == X:
            return h.qubits[0] == t
        if h.kind == CX:
            c2, t2 = h.qubits
            if c2 == t or t2 == c:
                return False
            return c2 == c or t2 == t
    return False


def _drop_zero_controlled(gates):
    """まだどのゲートも触れていない（|0⟩ の）量子ビットを制御とするCXを除去"""
    touched = set()
    kept = []
    for gate in gates:
        if gate.kind == CX and gate.qubits[0] not in touched:
            continue
        touched.update(gate.qubits)
        kept.append(gate)
    return kept


def _cancel_one_pair(gates):
    """可換なゲートだけを挟んだ自己逆ペア（X·X, CX·CX）を1組除去"""
    for i, g in enumerate(gates):
        if g.kind not in (X, CX):
            continue
        for j in range(i + 1, len(gates)):
            h = gates[j]
            if h == g:
                return gates[:i] + gates[i + 1:j] + gates[j + 1:]
            if not _commutes(g, h):
                break
    return None


def simplify(circuit):
    """
    全ゼロ入力上で状態を変えない冗長ゲート除去を不動点まで適用

    (a) 隣接する自己逆ペアの相殺、(b) |0⟩ が制御のCXの除去、
    (c) 可換なゲートだけを挟んだ X ペアの相殺。
    """
    gates = list(circuit.gates)
    before = len(gates)
    while True:
        reduced = _drop_zero_controlled(gates)
        changed = len(reduced) != len(gates)
        gates = reduced
        cancelled = _cancel_one_pair(gates)
        if cancelled is not None:
            gates = cancelled
            changed = True
        if not changed:
            break
    if len(gates) != before:
        logger.debug(f'simplify: {before} → {len(gates)}ゲート')
    return PhysicalCircuit(circuit.n_qubits, gates)
