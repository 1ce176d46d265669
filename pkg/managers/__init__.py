"""
マネージャー初期化モジュール
各実験マネージャーの初期化を管理
"""

from .experiment_managers import initialize_managers

__all__ = ['initialize_managers']
