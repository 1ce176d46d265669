"""
アプリケーション設定
シミュレーター・実験ハーネス・Flaskアプリの設定を管理
"""

import os
from dotenv import load_dotenv

# .envファイルを読み込み
load_dotenv()


def _int_env(name, default):
    """整数の環境変数を取得（不正な値はデフォルトにフォールバック）"""
    try:
        return int(os.getenv(name, default))
    except (TypeError, ValueError):
        return int(default)


class AppConfig:
    """アプリケーション設定クラス"""

    # Flask設定
    DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'
    HOST = os.getenv('HOST', '127.0.0.1')
    PORT = _int_env('FLASK_PORT', 5000)

    # 実験設定（反復プロトコルのデフォルト）
    DEFAULT_SHOTS = _int_env('NAEDSIM_SHOTS', 8192)
    DEFAULT_REPS = _int_env('NAEDSIM_REPS', 225)
    DEFAULT_SEED = _int_env('NAEDSIM_SEED', 0)

    # 容量設定
    MAX_QUBITS = _int_env('NAEDSIM_MAX_QUBITS', 25)
    ORACLE_MAX_QUBITS = _int_env('NAEDSIM_ORACLE_MAX_QUBITS', 12)

    # 軌跡シミュレーションが同時に保持する状態のメモリ予算（MB）
    TRAJECTORY_BUDGET_MB = _int_env('NAEDSIM_TRAJECTORY_MB', 256)

    # ワークプール設定
    THREADS = max(1, _int_env('NAEDSIM_THREADS', os.cpu_count() or 1))

    # ログ設定
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO').upper()
    LOG_FILE = os.getenv('LOG_FILE')

    @classmethod
    def get_config_dict(cls):
        """設定を辞書形式で取得"""
        return {
            'DEBUG': cls.DEBUG,
            'HOST': cls.HOST,
            'PORT': cls.PORT,
            'DEFAULT_SHOTS': cls.DEFAULT_SHOTS,
            'DEFAULT_REPS': cls.DEFAULT_REPS,
            'DEFAULT_SEED': cls.DEFAULT_SEED,
            'MAX_QUBITS': cls.MAX_QUBITS,
            'ORACLE_MAX_QUBITS': cls.ORACLE_MAX_QUBITS,
            'TRAJECTORY_BUDGET_MB': cls.TRAJECTORY_BUDGET_MB,
            'THREADS': cls.THREADS,
            'LOG_LEVEL': cls.LOG_LEVEL,
            'LOG_FILE': cls.LOG_FILE,
        }

    @classmethod
    def thread_count(cls):
        """ワークプールのスレッド数を取得（実行時の環境変数を優先）"""
        return max(1, _int_env('NAEDSIM_THREADS', cls.THREADS))

    @classmethod
    def trajectory_budget_bytes(cls):
        """軌跡シミュレーションのメモリ予算をバイトで取得（実行時の環境変数を優先、最低1MB）"""
        return max(1, _int_env('NAEDSIM_TRAJECTORY_MB', cls.TRAJECTORY_BUDGET_MB)) * 1024 * 1024
