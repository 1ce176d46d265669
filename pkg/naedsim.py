"""
naedsim - コマンドラインインターフェース
GHZ(N,Q) 実験のスイープ・注入スタディ・検証・回路変換を実行する

終了コード: 0 成功、2 設定/入力エラー、3 検証失敗
"""

import json
import sys
from functools import wraps

import click
from dotenv import load_dotenv

# .envファイルを読み込み
load_dotenv()
from config.app_config import AppConfig
from services.experiments.injection_manager import InjectionStudyManager
from services.experiments.sweep_manager import (
    DEFAULT_N_LIST, DEFAULT_Q_LIST, SweepConfig, SweepManager,
    parse_int_list, write_plotdata, write_text,
)
from services.quantum.code import experiment_code, make_code
from services.quantum.dsl import parse_dsl, render_dsl
from services.quantum.logical import lower as lower_circuit
from services.quantum.logical import simplify
from services.quantum.noise import StochasticModel
from services.verification.oracle import run_verification_suite
from utils.errors import NaedError, VerificationError
from utils.logger_config import get_logger, set_level

# ロガーの初期化
logger = get_logger(__name__)

EXIT_CONFIG_ERROR = 2
EXIT_VERIFICATION_FAILED = 3


def handle_errors(func):
    """ライブラリの例外を終了コードに変換するデコレータ"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except VerificationError as e:
            click.echo(f'error: {e}', err=True)
            sys.exit(EXIT_VERIFICATION_FAILED)
        except NaedError as e:
            click.echo(f'error: {e}', err=True)
            sys.exit(EXIT_CONFIG_ERROR)
        except (OSError, ValueError) as e:
            logger.error(f"❌ {func.__name__} エラー: {e}", exc_info=True)
            click.echo(f'error: {e}', err=True)
            sys.exit(EXIT_CONFIG_ERROR)
    return wrapper


def parse_code_set(text):
    """--s の値を集合に変換（空文字列は空集合、None は既定値）"""
    if text is None:
        return None
    if text.strip() in ('', '{}', '-'):
        return set()
    return set(parse_int_list(text))


def build_noise(p_gate, gamma, seed, paulis):
    if not p_gate and not gamma:
        return None
    return StochasticModel(p_gate=p_gate, gamma=gamma, seed=seed, paulis=paulis.upper()).validate()


def emit(text, out):
    """out が指定されていればファイルへ、なければ標準出力へ"""
    if out:
        write_text(out, text)
        click.echo(f'wrote {out}', err=True)
    else:
        click.echo(text, nl=False)


def read_source(path):
    if path == '-':
        return sys.stdin.read()
    with open(path, encoding='utf-8') as f:
        return f.read()


def noise_options(func):
    """スイープ系サブコマンドの共通オプション"""
    options = [
        click.option('--shots', type=int, default=AppConfig.DEFAULT_SHOTS, show_default=True, help='反復ごとのショット数'),
        click.option('--seed', type=int, default=AppConfig.DEFAULT_SEED, show_default=True, help='マスターシード'),
        click.option('--p-gate', type=float, default=0.0, show_default=True, help='ゲートごとのパウリエラー確率'),
        click.option('--gamma', type=float, default=0.0, show_default=True, help='ゲート層ごとの振幅減衰確率'),
        click.option('--paulis', default='XYZ', show_default=True, help='挿入するパウリの集合'),
        click.option('--sample-noiseless', is_flag=True, help='ノイズなしでもショットをサンプリングする（既定は厳密な期待カウント）'),
        click.option('--out', type=click.Path(dir_okay=False), default=None, help='出力ファイル（省略時は標準出力）'),
        click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default='json', show_default=True),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_sweep(n_list, q_list, shots, reps, seed, p_gate, gamma, paulis, sample_noiseless, out, fmt):
    config = SweepConfig(
        N_list=n_list,
        Q_list=q_list,
        shots=shots,
        reps=reps,
        noise=build_noise(p_gate, gamma, seed, paulis),
        master_seed=seed,
        out=out,
        format=fmt,
        sample_noiseless=sample_noiseless,
    )
    result, text = SweepManager().run_to_file(config)
    if not out:
        click.echo(text, nl=False)
    return result


@click.group()
@click.option('--log-level', default=None, help='ログレベル（LOG_LEVEL を上書き）')
def cli(log_level):
    """No-ancilla error detection simulator."""
    if log_level:
        set_level(log_level)


@cli.command()
@click.option('--n', 'n', type=int, default=2, show_default=True, help='論理量子ビット数 N')
@click.option('--q', 'q', type=int, default=2, show_default=True, help='論理量子ビットあたりの物理量子ビット数 Q')
@click.option('--reps', type=int, default=AppConfig.DEFAULT_REPS, show_default=True)
@noise_options
@handle_errors
def run(n, q, reps, shots, seed, p_gate, gamma, paulis, sample_noiseless, out, fmt):
    """1つの (N,Q) セルを実行する"""
    _run_sweep([n], [q], shots, reps, seed, p_gate, gamma, paulis, sample_noiseless, out, fmt)


@cli.command()
@click.option('--n', 'n', default=','.join(map(str, DEFAULT_N_LIST)), show_default=True, help='N のリスト（例: 2-5）')
@click.option('--q', 'q', default=','.join(map(str, DEFAULT_Q_LIST)), show_default=True, help='Q のリスト（例: 1,2,3）')
@click.option('--reps', type=int, default=AppConfig.DEFAULT_REPS, show_default=True)
@noise_options
@handle_errors
def sweep(n, q, reps, shots, seed, p_gate, gamma, paulis, sample_noiseless, out, fmt):
    """(N,Q) グリッドをスイープする"""
    _run_sweep(parse_int_list(n), parse_int_list(q), shots, reps, seed, p_gate, gamma, paulis, sample_noiseless, out, fmt)


@cli.command()
@click.option('--n', 'n', type=int, default=2, show_default=True)
@click.option('--q', 'q', type=int, default=2, show_default=True)
@click.option('--s', 's', default=None, help='符号語集合 S（例: 1 または 0,2、空文字列で空集合）')
@click.option('--error', type=click.Choice(['X', 'Y', 'Z', 'I', 'PHASE'], case_sensitive=False), default='X', show_default=True)
@click.option('--theta', type=float, default=0.0)
@click.option('--phi', type=float, default=0.0)
@click.option('--sites', type=click.Choice(['boundary', 'all']), default='boundary', show_default=True)
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@handle_errors
def inject(n, q, s, error, theta, phi, sites, out):
    """1ゲートのエラー注入スタディを実行する"""
    report = InjectionStudyManager().run_study(
        N=n, Q=q, error=error, theta=theta, phi=phi, sites=sites, S=parse_code_set(s),
    )
    emit(json.dumps(report.to_dict(), indent=2) + '\n', out)


@cli.command()
@click.option('--seed', type=int, default=AppConfig.DEFAULT_SEED, show_default=True)
@click.option('--quick', is_flag=True, help='サンプル数を減らした短縮版')
@handle_errors
def verify(seed, quick):
    """論理ゲート定理と恒等式を数値検証する"""
    rows = run_verification_suite(seed=seed, quick=quick)
    click.echo(f'{"check":<20} {"params":<22} {"residual":>12} {"tol":>8}  result')
    for row in rows:
        mark = 'PASS' if row.passed else 'FAIL'
        click.echo(f'{row.name:<20} {row.params:<22} {row.residual:>12.3e} {row.tolerance:>8.0e}  {mark}')
    failed = [r for r in rows if not r.passed]
    if failed:
        raise VerificationError(f'{len(failed)}/{len(rows)} checks failed')
    click.echo(f'all {len(rows)} checks passed')


@cli.command()
@click.argument('source', type=click.Path(allow_dash=True))
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@handle_errors
def parse(source, out):
    """DSLを正規形のテキストに変換する"""
    emit(render_dsl(parse_dsl(read_source(source))), out)


@cli.command()
@click.argument('source', type=click.Path(allow_dash=True))
@click.option('--q', 'q', type=int, default=2, show_default=True)
@click.option('--s', 's', default=None, help='符号語集合 S（省略時は実験用の既定値）')
@click.option('--no-simplify', is_flag=True, help='冗長ゲート除去を行わない')
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@handle_errors
def lower(source, q, s, no_simplify, out):
    """DSLの論理回路を物理回路のテキストに展開する"""
    members = parse_code_set(s)
    code = experiment_code(q) if members is None else make_code(q, members)
    circuit = lower_circuit(parse_dsl(read_source(source)), code)
    if not no_simplify:
        circuit = simplify(circuit)
    emit(circuit.render(), out)


@cli.command()
@click.argument('source', type=click.Path(exists=True, dir_okay=False))
@click.option('--out', type=click.Path(file_okay=False), default='plotdata', show_default=True)
@handle_errors
def plotdata(source, out):
    """スイープ結果から指標ごとのグリッドCSVを出力する"""
    for path in write_plotdata(source, out):
        click.echo(path)


@cli.command()
@click.option('--host', default=None)
@click.option('--port', type=int, default=None)
@click.option('--debug', is_flag=True)
def serve(host, port, debug):
    """HTTP APIサーバーを起動する"""
    from app import main
    main(host=host, port=port, debug=debug or None)


if __name__ == '__main__':
    cli()
