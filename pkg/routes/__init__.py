"""
ルートモジュール
各APIルートを管理
"""

from .circuit_routes import circuit_bp
from .experiment_routes import experiment_bp

__all__ = ['circuit_bp', 'experiment_bp']
