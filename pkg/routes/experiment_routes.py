"""
実験関連のルート
スイープ実行、エラー注入スタディ、検証テーブルのAPIエンドポイント
"""

from flask import Blueprint, current_app, jsonify, request

from config.app_config import AppConfig
from routes.circuit_routes import handle_circuit_error, json_body
from services.experiments.sweep_manager import SweepConfig, parse_int_list
from services.quantum.noise import StochasticModel
from services.verification.oracle import run_verification_suite
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

# Blueprintを作成
experiment_bp = Blueprint('experiments', __name__, url_prefix='/api/experiments')


def get_manager(key):
    """app.config からマネージャーを取得"""
    managers = current_app.config.get('EXPERIMENT_MANAGERS') or {}
    manager = managers.get(key)
    if manager is None:
        raise RuntimeError(f'{key} Managerが初期化されていません（利用可能: {list(managers.keys())}）')
    return manager


def sweep_config_from_body(body):
    """リクエストボディから SweepConfig を作成"""
    p_gate = float(body.get('p_gate', 0.0))
    gamma = float(body.get('gamma', 0.0))
    seed = int(body.get('seed', AppConfig.DEFAULT_SEED))
    noise = None
    if p_gate or gamma:
        noise = StochasticModel(p_gate=p_gate, gamma=gamma, seed=seed, paulis=str(body.get('paulis', 'XYZ')))
    return SweepConfig(
        N_list=parse_int_list(body.get('N', body.get('n', 2))),
        Q_list=parse_int_list(body.get('Q', body.get('q', 2))),
        shots=int(body.get('shots', AppConfig.DEFAULT_SHOTS)),
        reps=int(body.get('reps', 1)),
        noise=noise,
        master_seed=seed,
        sample_noiseless=bool(body.get('sample_noiseless', False)),
    )


@experiment_bp.route('/run', methods=['POST'])
def run_experiment():
    """GHZ(N,Q) のスイープを実行して結果を返す"""
    try:
        config = sweep_config_from_body(json_body())
        result = get_manager('sweep').run(config)
        return jsonify({'success': True, 'data': result.to_dict()})
    except Exception as e:
        return handle_circuit_error('スイープ実行', e)


@experiment_bp.route('/inject', methods=['POST'])
def inject_experiment():
    """エラー注入スタディを実行"""
    try:
        body = json_body()
        report = get_manager('injection').run_study(
            N=int(body.get('N', 2)),
            Q=int(body.get('Q', 2)),
            error=str(body.get('error', 'X')),
            theta=float(body.get('theta', 0.0)),
            phi=float(body.get('phi', 0.0)),
            sites=str(body.get('sites', 'boundary')),
            S=body.get('S'),
        )
        return jsonify({'success': True, 'data': report.to_dict()})
    except Exception as e:
        return handle_circuit_error('エラー注入スタディ', e)


@experiment_bp.route('/verify')
def verify():
    """検証テーブルを実行（quick=true で短縮版）"""
    try:
        quick = request.args.get('quick', 'false').lower() == 'true'
        seed = request.args.get('seed', AppConfig.DEFAULT_SEED, type=int)
        rows = run_verification_suite(seed=seed, quick=quick)
        return jsonify({
            'success': True,
            'data': {
                'passed': all(r.passed for r in rows),
                'checks': [r.to_dict() for r in rows],
            }
        })
    except Exception as e:
        return handle_circuit_error('検証', e)
