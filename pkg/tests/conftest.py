"""
テスト共通のフィクスチャ
"""

import os
import sys

import pytest

# プロジェクトルートをパスに追加
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from services.quantum.code import make_code

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')

GHZ2_DSL = 'qubits 2\nh q0\ncx q0 q1\n'


@pytest.fixture
def code_q2_s1():
    """Q=2, S={1} の符号（|0⟩_L = 01、|1⟩_L = 10）"""
    return make_code(2, {1})


@pytest.fixture
def app():
    from app import create_app
    flask_app = create_app()
    flask_app.config['TESTING'] = True
    return flask_app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner():
    from click.testing import CliRunner
    return CliRunner()


@pytest.fixture
def dsl_dir():
    return os.path.join(DATA_DIR, 'dsl')
