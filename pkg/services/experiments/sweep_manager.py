"""
GHZ(N,Q) スイープ管理
(N,Q) グリッド × 反復のシミュレーション、集計、結果ファイルとヒートマップ用データの出力
"""

import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

from config.app_config import AppConfig
from services.analysis.metrics import metrics, tally
from services.quantum.circuits import build_ghz, simulate
from services.quantum.code import experiment_code
from services.quantum.noise import StochasticModel, simulate_noisy
from services.quantum.statevec import bitstring, make_rng, probabilities, sample
from utils.errors import ConfigError, ValidationError
from utils.logger_config import get_logger

# ロガーの初期化
logger = get_logger(__name__)

CSV_COLUMNS = ['N', 'Q', 'rep', 'seed', 'T', 'r0', 'r1', 'ra', 'rb', 'mu_full', 'mu_naed', 'p_kept']
AGGREGATE_COLUMNS = ['N', 'Q', 'S', 'reps', 'mu_full', 'mu_naed', 'mu_naed_reps', 'p_kept', 'ra_ratio']
PLOT_METRICS = ('mu_full', 'mu_naed', 'p_kept')
OUTPUT_FORMATS = ('json', 'csv')

# 既定の実験グリッド {2,3,4,5} × {1,2,3,4,5}
DEFAULT_N_LIST = [2, 3, 4, 5]
DEFAULT_Q_LIST = [1, 2, 3, 4, 5]


def parse_int_list(text):
    """
    "2,3,5" や "2-5" 形式の整数リストを解析

    Raises:
        ValidationError: 整数として解釈できない場合
    """
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    values = []
    for part in str(text).split(','):
        part = part.strip()
        if not part:
            continue
        try:
            if '-' in part[1:]:
                start, end = part.split('-', 1)
                values.extend(range(int(start), int(end) + 1))
            else:
                values.append(int(part))
        except ValueError:
            raise ValidationError(f'整数リストとして解釈できません: {text!r}')
    if not values:
        raise ValidationError(f'整数リストが空です: {text!r}')
    return values


def exact_counts(state, shots):
    """
    出力分布の期待値どおりの整数カウント（最大剰余法で shots に配分）

    ノイズなしの回路を理想的なデバイスとして扱うときに使う。
    同じ剰余はインデックス順に配分する。
    """
    probs = probabilities(state)
    support = np.flatnonzero(probs > 1e-15)
    expected = probs[support] / probs[support].sum() * shots
    counts = np.floor(expected).astype(np.int64)
    remainder = int(shots - counts.sum())
    if remainder > 0:
        order = np.argsort(-(expected - counts), kind="stable")
        counts[order[:remainder]] += 1
    return Counter({bitstring(i, state.n_qubits): int(c) for i, c in zip(support, counts) if c > 0})


def derive_seed(master_seed, N, Q, rep):
    """(master_seed, N, Q, rep) から反復ごとの64ビットシードを導出"""
    return int(make_rng(master_seed, N, Q, rep).integers(0, 2 ** 63 - 1))


@dataclass
class SweepConfig:
    """スイープ設定"""

    N_list: List[int] = field(default_factory=lambda: list(DEFAULT_N_LIST))
    Q_list: List[int] = field(default_factory=lambda: list(DEFAULT_Q_LIST))
    shots: int = AppConfig.DEFAULT_SHOTS
    reps: int = AppConfig.DEFAULT_REPS
    noise: Optional[StochasticModel] = None
    master_seed: int = AppConfig.DEFAULT_SEED
    out: Optional[str] = None
    format: str = 'json'
    sample_noiseless: bool = False

    def cells(self):
        """(N,Q) セルを決定的な順序で返す"""
        return [(N, Q) for N in sorted(set(self.N_list)) for Q in sorted(set(self.Q_list))]

    def validate(self):
        """
        設定を検証

        Raises:
            ConfigError: N·Q が上限を超えるセルがある場合（該当セルを列挙）
            ValidationError: その他の値が不正な場合
        """
        if not self.N_list or not self.Q_list:
            raise ValidationError('N と Q のリストは空にできません')
        if any(N < 2 for N in self.N_list):
            raise ValidationError(f'N は2以上である必要があります: {self.N_list}')
        if any(Q < 1 for Q in self.Q_list):
            raise ValidationError(f'Q は1以上である必要があります: {self.Q_list}')
        if self.reps < 1:
            raise ValidationError(f'reps は1以上である必要があります: {self.reps}')
        if self.shots < 1:
            raise ValidationError(f'shots は1以上である必要があります: {self.shots}')
        if self.format not in OUTPUT_FORMATS:
            raise ValidationError(f'format は {OUTPUT_FORMATS} のいずれかです: {self.format}')
        if self.noise is not None:
            self.noise.validate()
        offending = [(N, Q) for N, Q in self.cells() if N * Q > AppConfig.MAX_QUBITS]
        if offending:
            listed = ', '.join(f'({N},{Q})' for N, Q in offending)
            raise ConfigError(f'N·Q が {AppConfig.MAX_QUBITS} を超えるセルがあります: {listed}', cells=offending)
        return self

    def to_dict(self):
        return {
            'N_list': sorted(set(self.N_list)),
            'Q_list': sorted(set(self.Q_list)),
            'shots': self.shots,
            'reps': self.reps,
            'master_seed': self.master_seed,
            'noise': self.noise.to_dict() if self.noise is not None else None,
            'sample_noiseless': self.sample_noiseless,
        }


@dataclass
class SweepResult:
    """スイープ結果（反復ごとの行とセルごとの平均）"""

    config: SweepConfig
    rows: List[dict]
    aggregates: List[dict]

    def to_dict(self):
        return {
            'config': self.config.to_dict(),
            'rows': self.rows,
            'aggregates': self.aggregates,
        }

    def to_frame(self):
        return pd.DataFrame(self.rows, columns=CSV_COLUMNS)

    def aggregates_frame(self):
        return pd.DataFrame(self.aggregates, columns=AGGREGATE_COLUMNS)

    def render(self, fmt='json'):
        """結果ファイルの内容を文字列で返す（同じ設定なら同じバイト列）"""
        if fmt == 'json':
            return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + '\n'
        if fmt == 'csv':
            return self.to_frame().to_csv(index=False)
        raise ValidationError(f'format は {OUTPUT_FORMATS} のいずれかです: {fmt}')


def aggregate_rows(rows, N, Q, code):
    """反復の行からセルの平均を計算（mu_naed は定義された反復だけで平均）"""
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    defined = frame['mu_naed'].dropna()
    return {
        'N': N,
        'Q': Q,
        'S': sorted(code.S),
        'reps': len(frame),
        'mu_full': float(frame['mu_full'].mean()),
        'mu_naed': float(defined.mean()) if len(defined) else None,
        'mu_naed_reps': int(len(defined)),
        'p_kept': float(frame['p_kept'].mean()),
        'ra_ratio': float((frame['ra'] / frame['T']).mean()),
    }


class SweepManager:
    """GHZ(N,Q) 実験スイープの管理クラス"""

    def __init__(self, max_workers=None):
        """初期化"""
        self.max_workers = max_workers or AppConfig.thread_count()
        logger.info(f"Sweep Manager初期化: スレッド数={self.max_workers}")

    def _run_rep(self, task):
        """1反復を実行して CSV の1行を返す"""
        N, Q, rep, seed, circuit, code, state, fixed, config = task
        if fixed is not None:
            counts = fixed
        elif state is not None:
            counts = sample(state, config.shots, seed)
        else:
            counts = simulate_noisy(circuit, config.noise, config.shots, seed)
        t = tally(counts, code, N)
        m = metrics(t, N, Q)
        return {
            'N': N, 'Q': Q, 'rep': rep, 'seed': seed,
            'T': t.T, 'r0': t.r0, 'r1': t.r1, 'ra': t.ra, 'rb': t.rb,
            'mu_full': m.mu_full, 'mu_naed': m.mu_naed, 'p_kept': m.p_kept,
        }

    def _cell_tasks(self, N, Q, config):
        code = experiment_code(Q)
        circuit = build_ghz(N, Q, code)
        noiseless = config.noise is None or config.noise.is_noiseless
        # ノイズなしなら状態はセル内で共通なので1回だけ計算する
        state = simulate(circuit) if noiseless else None
        fixed = exact_counts(state, config.shots) if noiseless and not config.sample_noiseless else None
        return code, [
            (N, Q, rep, derive_seed(config.master_seed, N, Q, rep), circuit, code, state, fixed, config)
            for rep in range(config.reps)
        ]

    def run(self, config):
        """
        スイープを実行

        セルと反復はワークプールで並列に実行し、結果は (N,Q,rep) の順に並べる。

        Args:
            config: SweepConfig

        Returns:
            SweepResult

        Raises:
            ConfigError: 満たせないセルがある場合
        """
        config.validate()
        cells = config.cells()
        logger.info(f"🚀 スイープ開始: {len(cells)}セル × {config.reps}反復, shots={config.shots}")

        prepared = []
        all_tasks = []
        for N, Q in cells:
            code, tasks = self._cell_tasks(N, Q, config)
            prepared.append((N, Q, code, len(tasks)))
            all_tasks.extend(tasks)

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            rows = list(executor.map(self._run_rep, all_tasks))

        aggregates = []
        offset = 0
        for N, Q, code, count in prepared:
            cell_rows = rows[offset:offset + count]
            offset += count
            aggregate = aggregate_rows(cell_rows, N, Q, code)
            aggregates.append(aggregate)
            mu_naed = aggregate['mu_naed']
            logger.info(
                f"✅ GHZ({N},{Q}) 完了: mu_full={aggregate['mu_full']:.2f}, "
                f"mu_naed={'n/a' if mu_naed is None else f'{mu_naed:.2f}'}, p_kept={aggregate['p_kept']:.2f}"
            )
        return SweepResult(config=config, rows=rows, aggregates=aggregates)

    def run_to_file(self, config):
        """スイープを実行して config.out に書き出す（out が無ければ文字列を返すだけ）"""
        result = self.run(config)
        text = result.render(config.format)
        if config.out:
            write_text(config.out, text)
            logger.info(f"💾 結果を保存しました: {config.out}")
        return result, text


def write_text(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)


def load_rows(path):
    """
    スイープ結果ファイル（JSON または CSV）から反復の行を DataFrame で読み込む

    Raises:
        ValidationError: 必要な列が欠けている場合
    """
    if path.endswith('.json'):
        with open(path, encoding='utf-8') as f:
            payload = json.load(f)
        frame = pd.DataFrame(payload.get('rows', []), columns=CSV_COLUMNS)
    else:
        frame = pd.read_csv(path)
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise ValidationError(f'スイープ結果に必要な列がありません: {missing}')
    return frame


def plot_grids(frame):
    """
    指標ごとのヒートマップ用グリッド（行 N、列 Q の平均値）を作成

    Returns:
        dict: 指標名 → DataFrame
    """
    grids = {}
    for metric in PLOT_METRICS:
        values = frame.astype({metric: float})
        grid = values.pivot_table(index='N', columns='Q', values=metric, aggfunc='mean', dropna=False)
        grids[metric] = grid.reindex(index=sorted(frame['N'].unique()), columns=sorted(frame['Q'].unique()))
    return grids


def write_plotdata(source, out_dir):
    """
    スイープ結果からグリッドCSVを出力（<out_dir>/<metric>.csv）

    Returns:
        list[str]: 書き出したファイルのパス
    """
    grids = plot_grids(load_rows(source))
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for metric, grid in grids.items():
        path = os.path.join(out_dir, f'{metric}.csv')
        grid.to_csv(path, float_format='%.6f')
        written.append(path)
    logger.info(f"📊 プロットデータを出力しました: {written}")
    return written


def grid_values(grid):
    """グリッドを {(N,Q): 値} の辞書に変換（NaN は None）"""
    values = {}
    for N in grid.index:
        for Q in grid.columns:
            value = grid.loc[N, Q]
            values[(int(N), int(Q))] = None if pd.isna(value) else float(value)
    return values

