"""
naedsim - HTTPアプリケーション
回路・実験の各APIをBlueprintとして公開する
"""

from dotenv import load_dotenv
from flask import Flask, jsonify

# .envファイルを読み込み
load_dotenv()
from config.app_config import AppConfig
from managers.experiment_managers import MANAGER_CONFIGS, initialize_managers
from routes.circuit_routes import circuit_bp
from routes.experiment_routes import experiment_bp
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)


def check_managers_health(managers):
    """マネージャーの初期化状態をチェック"""
    expected = [key for key, _, _ in MANAGER_CONFIGS]
    missing = [key for key in expected if managers.get(key) is None]
    return {
        'status': 'healthy' if not missing else 'degraded',
        'initialized': len(expected) - len(missing),
        'total': len(expected),
        'missing': missing,
    }, not missing


def create_app():
    """Flaskアプリケーションを作成"""
    logger.info("🚀 アプリケーション初期化開始")
    app = Flask(__name__)

    # 設定を適用
    app.config.update(AppConfig.get_config_dict())
    logger.info("✅ アプリケーション設定適用完了")

    # Blueprintを登録
    for blueprint in (circuit_bp, experiment_bp):
        app.register_blueprint(blueprint)
        logger.info(f"✅ {blueprint.name} Blueprint登録完了")

    # マネージャーを初期化（エラーが発生しても続行）
    try:
        app.config['EXPERIMENT_MANAGERS'] = initialize_managers()
    except Exception as e:
        logger.error(f"❌ 実験マネージャー初期化エラー: {e}", exc_info=True)
        app.config['EXPERIMENT_MANAGERS'] = {}
        logger.warning("⚠️ 実験マネージャーを空の辞書で初期化しました（一部機能が制限されます）")

    @app.route('/health')
    def health():
        """ヘルスチェック用エンドポイント"""
        managers_check, healthy = check_managers_health(app.config.get('EXPERIMENT_MANAGERS') or {})
        status = {
            'status': 'healthy' if healthy else 'degraded',
            'checks': {'managers': managers_check},
            'limits': {
                'max_qubits': AppConfig.MAX_QUBITS,
                'oracle_max_qubits': AppConfig.ORACLE_MAX_QUBITS,
                'threads': AppConfig.thread_count(),
            },
        }
        return jsonify(status), 200 if healthy else 503

    logger.info("✅ アプリケーション初期化完了")
    return app


def main(host=None, port=None, debug=None):
    """メイン関数"""
    app = create_app()
    config = AppConfig.get_config_dict()
    host = host or config['HOST']
    port = port or config['PORT']
    debug = config['DEBUG'] if debug is None else debug
    logger.info(f"🚀 アプリケーションをポート {port} で起動します")
    try:
        app.run(debug=debug, host=host, port=port)
    except KeyboardInterrupt:
        logger.info("🛑 アプリケーション終了中...")


if __name__ == '__main__':
    main()
