"""
設定モジュール
アプリケーションの設定を管理
"""

from .app_config import AppConfig

__all__ = ['AppConfig']


