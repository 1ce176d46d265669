"""
統一的なログ設定モジュール
シミュレーター全体で使用するログ設定を管理

標準出力はCLIの結果（JSON/CSV/回路テキスト）専用なので、ログは常に標準エラーへ出す。
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

# 数値計算ループから出る詳細ログを抑えるロガー
QUIET_LOGGERS = ('werkzeug', 'matplotlib')


def resolve_level(log_level=None):
    """ログレベル名（または数値）を logging の数値に変換（不明な名前は INFO）"""
    if log_level is None:
        log_level = os.getenv('LOG_LEVEL', 'INFO')
    if isinstance(log_level, int):
        return log_level
    return getattr(logging, str(log_level).upper(), logging.INFO)


def setup_logging(log_level=None, log_file=None):
    """
    プロセス全体のログ設定を初期化

    Args:
        log_level: ログレベル（DEBUG, INFO, WARNING, ERROR, CRITICAL）
                   デフォルトは環境変数LOG_LEVELまたはINFO
        log_file: ローテーションするログファイルのパス（デフォルトは環境変数LOG_FILE）
    """
    level = resolve_level(log_level)
    if log_file is None:
        log_file = os.getenv('LOG_FILE')

    root = logging.getLogger()
    if not any(getattr(h, '_naedsim', False) for h in root.handlers):
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
        stream_handler._naedsim = True
        root.addHandler(stream_handler)

        # ファイルログの設定（オプション）
        if log_file:
            file_handler = RotatingFileHandler(
                log_file,
                maxBytes=10 * 1024 * 1024,  # 10MB
                backupCount=5
            )
            file_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
            file_handler._naedsim = True
            root.addHandler(file_handler)

    set_level(level)
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    return logging.getLogger(__name__)


def set_level(log_level):
    """設定済みハンドラーを残したままログレベルだけを変更（CLI の --log-level 用）"""
    level = resolve_level(log_level)
    root = logging.getLogger()
    root.setLevel(level)
    for handler in root.handlers:
        if getattr(handler, '_naedsim', False):
            handler.setLevel(level)


def get_logger(name):
    """
    モジュール用のロガーを取得

    Args:
        name: ロガー名（通常は__name__）

    Returns:
        Loggerインスタンス
    """
    return logging.getLogger(name)


# デフォルトでログ設定を初期化
setup_logging()
