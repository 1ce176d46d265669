"""
実験マネージャーの初期化
スイープ・注入スタディの各マネージャーのインスタンスを作成・管理
"""

from services.experiments.injection_manager import InjectionStudyManager
from services.experiments.sweep_manager import SweepManager
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

# マネージャー設定リスト
MANAGER_CONFIGS = [
    ('sweep', SweepManager, 'Sweep'),
    ('injection', InjectionStudyManager, 'Injection Study'),
]


def _initialize_single_manager(key, manager_class, display_name):
    """
    単一のマネージャーを初期化

    Returns:
        初期化されたマネージャーインスタンス、またはNone
    """
    try:
        manager = manager_class()
        logger.info(f"✅ {display_name} Manager初期化完了")
        return manager
    except Exception as e:
        logger.error(f"❌ {display_name} Manager初期化エラー: {e}", exc_info=True)
        return None


def initialize_managers():
    """
    全実験マネージャーを初期化
    一部のマネージャーが失敗しても、成功したマネージャーは返す

    Returns:
        dict: キー → マネージャー
    """
    managers = {}
    for key, manager_class, display_name in MANAGER_CONFIGS:
        manager = _initialize_single_manager(key, manager_class, display_name)
        if manager is not None:
            managers[key] = manager
        else:
            logger.warning(f"⚠️ {display_name} Managerの初期化に失敗しましたが、続行します")
    logger.info(f"✅ マネージャー初期化完了: {len(managers)}/{len(MANAGER_CONFIGS)}個")
    return managers
