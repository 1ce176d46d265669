"""
gunicorn 用のWSGIエントリポイント
create_app() が失敗してもエラー内容を返すフォールバックアプリを公開する
"""

from flask import Flask, jsonify

from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)


def build_fallback_app(error):
    """初期化に失敗したときの最小アプリ（/health は 503 を返す）"""
    fallback = Flask(__name__)

    @fallback.route('/health')
    def health_fallback():
        return jsonify({
            'status': 'error',
            'error': 'Application failed to initialize',
            'message': str(error),
        }), 503

    return fallback


def load_app():
    try:
        from app import create_app
        application = create_app()
        logger.info("✅ WSGI初期化完了")
        return application
    except Exception as e:
        logger.error(f"❌ アプリケーション初期化エラー: {e}", exc_info=True)
        logger.warning("⚠️ フォールバックアプリで起動します")
        return build_fallback_app(e)


app = load_app()
