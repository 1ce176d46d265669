"""
GHZ回路の構築
論理GHZ回路・物理GHZ(N,Q)回路・理想PDF、および物理回路の状態ベクトル実行
"""

from config.app_config import AppConfig
from services.quantum.code import experiment_code
from services.quantum.ir import CX, U, U3, X, LogicalCircuit, PhysicalCircuit
from services.quantum.logical import lower, simplify
from services.quantum.statevec import apply_cx, apply_matrix, apply_x, check_unitary, init_state
from utils.errors import CapacityError, ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

MAX_GHZ_N = 12


def ghz_logical(N):
    """
    論理GHZ回路: 論理量子ビット0にH、続いて CX(i, i+1)（i = 0…N−2）

    CX はちょうど N−1 個。

    Raises:
        ValidationError: N が 2〜12 の範囲外の場合
    """
    if not isinstance(N, int) or N < 2 or N > MAX_GHZ_N:
        raise ValidationError(f'N は 2〜{MAX_GHZ_N} の整数である必要があります: {N}')
    circuit = LogicalCircuit(N)
    circuit.h(0)
    for i in range(N - 1):
        circuit.cx(i, i + 1)
    return circuit


def _check_register(N, Q):
    if N * Q > AppConfig.MAX_QUBITS:
        raise CapacityError(f'GHZ({N},{Q}) は {N * Q} 量子ビットで上限 {AppConfig.MAX_QUBITS} を超えています')


def build_ghz(N, Q, code=None):
    """
    物理GHZ(N,Q)回路 = simplify(lower(ghz_logical(N), code))

    code を省略すると experiment_code(Q) を使う（Q=1 は符号化なしの回路そのもの）。

    Raises:
        CapacityError: N·Q が上限を超える場合
    """
    _check_register(N, Q)
    if code is None:
        code = experiment_code(Q)
    elif code.Q != Q:
        raise ValidationError(f'符号の Q={code.Q} が指定の Q={Q} と一致しません')
    circuit = simplify(lower(ghz_logical(N), code))
    logger.debug(f'GHZ({N},{Q}) 構築完了: {len(circuit.gates)}ゲート, CX {circuit.count(CX)}個')
    return circuit


def ideal_pdf(N, Q, code=None):
    """
    GHZ(N,Q) の理想PDF（疎）: 論理全0と論理全1の符号化ビット列にそれぞれ 0.5
    """
    _check_register(N, Q)
    if code is None:
        code = experiment_code(Q)
    return {
        code.encode_logical('0' * N): 0.5,
        code.encode_logical('1' * N): 0.5,
    }


def apply_gate(state, gate):
    """物理ゲート1つを状態ベクトルに適用"""
    if gate.kind == X:
        apply_x(state, gate.qubits[0])
    elif gate.kind == CX:
        apply_cx(state, *gate.qubits)
    elif gate.kind in (U3, U):
        apply_matrix(state, check_unitary(gate.matrix()), gate.qubits[0])
    else:
        raise ValidationError(f'不明なゲート種別です: {gate.kind}')
    return state


def simulate(circuit, state=None):
    """
    物理回路を |0…0⟩（または与えられた状態）から実行して StateVector を返す
    """
    if not isinstance(circuit, PhysicalCircuit):
        raise ValidationError('simulate には PhysicalCircuit を渡してください')
    if state is None:
        state = init_state(circuit.n_qubits)
    for gate in circuit.gates:
        apply_gate(state, gate)
    return state
