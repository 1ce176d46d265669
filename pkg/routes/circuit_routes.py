"""
回路関連のルート
DSLのパース、論理回路の展開、GHZ回路の構築のAPIエンドポイント
"""

from flask import Blueprint, jsonify, request

from services.quantum.circuits import build_ghz, ideal_pdf
from services.quantum.code import experiment_code, make_code
from services.quantum.dsl import parse_dsl, render_dsl
from services.quantum.ir import CX
from services.quantum.logical import lower, simplify
from utils.errors import NaedError, ParseError, ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

# Blueprintを作成
circuit_bp = Blueprint('circuits', __name__, url_prefix='/api/circuits')


def handle_circuit_error(operation_name, error):
    """
    回路APIのエラーを統一フォーマットで処理

    ライブラリのエラー（入力の問題）は400、それ以外は500を返す。
    """
    if isinstance(error, NaedError):
        logger.warning(f"⚠️ {operation_name} 入力エラー: {error}")
        payload = {'success': False, 'error': str(error)}
        if isinstance(error, ParseError):
            payload.update({'line': error.line, 'column': error.column})
        return jsonify(payload), 400
    logger.error(f"❌ {operation_name} エラー: {error}", exc_info=True)
    return jsonify({
        'success': False,
        'error': f'{operation_name}に失敗しました: {str(error)}'
    }), 500


def json_body():
    """リクエストボディのJSONオブジェクトを取得（オブジェクトでなければ ValidationError）"""
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise ValidationError('JSONオブジェクトのリクエストボディが必要です')
    return body


def _physical_summary(circuit):
    return {
        'n_qubits': circuit.n_qubits,
        'gate_count': len(circuit.gates),
        'cx_count': circuit.count(CX),
        'circuit': circuit.render(),
    }


@circuit_bp.route('/parse', methods=['POST'])
def parse_circuit():
    """DSLテキストを正規形に変換"""
    try:
        body = json_body()
        circuit = parse_dsl(str(body.get('text', '')))
        return jsonify({
            'success': True,
            'data': {'N': circuit.N, 'gate_count': len(circuit.gates), 'canonical': render_dsl(circuit)}
        })
    except Exception as e:
        return handle_circuit_error('DSLパース', e)


@circuit_bp.route('/lower', methods=['POST'])
def lower_circuit():
    """DSLの論理回路を符号 (Q, S) で物理回路に展開"""
    try:
        body = json_body()
        logical = parse_dsl(str(body.get('text', '')))
        Q = int(body.get('Q', 2))
        code = experiment_code(Q) if body.get('S') is None else make_code(Q, body['S'])
        circuit = lower(logical, code)
        if body.get('simplify', True):
            circuit = simplify(circuit)
        data = _physical_summary(circuit)
        data['code'] = code.to_dict()
        return jsonify({'success': True, 'data': data})
    except Exception as e:
        return handle_circuit_error('論理回路の展開', e)


@circuit_bp.route('/ghz')
def ghz_circuit():
    """GHZ(N,Q) の物理回路と理想PDFを取得"""
    try:
        N = request.args.get('n', type=int)
        Q = request.args.get('q', type=int)
        if N is None or Q is None:
            raise ValidationError('クエリパラメータ n と q が必要です')
        code = experiment_code(Q)
        circuit = build_ghz(N, Q, code)
        data = _physical_summary(circuit)
        data.update({'N': N, 'Q': Q, 'code': code.to_dict(), 'ideal_pdf': ideal_pdf(N, Q, code)})
        return jsonify({'success': True, 'data': data})
    except Exception as e:
        return handle_circuit_error('GHZ回路の構築', e)
