"""
コマンドラインインターフェースのテスト
"""

import json
import os

import pandas as pd

import naedsim
from services.verification.oracle import CheckResult

GHZ2_DSL = 'qubits 2\nh q0\ncx q0 q1\n'


def read_json(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


class TestParse:
    def test_golden(self, runner, dsl_dir, tmp_path):
        out = tmp_path / 'ghz3.qc'
        result = runner.invoke(naedsim.cli, ['parse', os.path.join(dsl_dir, '02_ghz3.qc'), '--out', str(out)])
        assert result.exit_code == 0
        with open(os.path.join(dsl_dir, '02_ghz3.golden'), encoding='utf-8') as f:
            assert out.read_text(encoding='utf-8') == f.read()

    def test_malformed_source(self, runner, tmp_path):
        source = tmp_path / 'bad.qc'
        source.write_text('qubits 2\nh q5\n', encoding='utf-8')
        result = runner.invoke(naedsim.cli, ['parse', str(source)])
        assert result.exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(naedsim.cli, ['parse', str(tmp_path / 'nope.qc')])
        assert result.exit_code == 2


class TestLower:
    def test_ghz2_with_explicit_code(self, runner, tmp_path):
        source = tmp_path / 'ghz2.qc'
        source.write_text(GHZ2_DSL, encoding='utf-8')
        out = tmp_path / 'physical.qc'
        result = runner.invoke(naedsim.cli, ['lower', str(source), '--q', '2', '--s', '1', '--out', str(out)])
        assert result.exit_code == 0
        assert out.read_text(encoding='utf-8') == (
            'qubits 4\n'
            'x q1\n'
            'u3 1.5707963267948966 0.0 3.141592653589793 q0\n'
            'cx q0 q1\n'
            'cx q0 q2\n'
            'cx q1 q3\n'
        )

    def test_no_simplify_is_longer(self, runner, tmp_path):
        source = tmp_path / 'ghz2.qc'
        source.write_text(GHZ2_DSL, encoding='utf-8')
        simplified, raw = tmp_path / 'a.qc', tmp_path / 'b.qc'
        runner.invoke(naedsim.cli, ['lower', str(source), '--q', '3', '--out', str(simplified)])
        runner.invoke(naedsim.cli, ['lower', str(source), '--q', '3', '--no-simplify', '--out', str(raw)])
        assert len(raw.read_text().splitlines()) > len(simplified.read_text().splitlines())


class TestRun:
    def test_noiseless_metrics(self, runner, tmp_path):
        out = tmp_path / 'run.json'
        result = runner.invoke(naedsim.cli, ['run', '--n', '2', '--q', '2', '--reps', '2',
                                             '--shots', '256', '--out', str(out)])
        assert result.exit_code == 0
        aggregate = read_json(out)['aggregates'][0]
        assert (aggregate['mu_full'], aggregate['mu_naed'], aggregate['p_kept']) == (100.0, 100.0, 100.0)

    def test_noisy_runs_are_reproducible(self, runner, tmp_path):
        outputs = []
        for name in ('a.csv', 'b.csv'):
            out = tmp_path / name
            result = runner.invoke(naedsim.cli, ['run', '--n', '3', '--q', '2', '--reps', '2', '--shots', '512',
                                                 '--p-gate', '0.05', '--seed', '11',
                                                 '--format', 'csv', '--out', str(out)])
            assert result.exit_code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_sample_noiseless_flag(self, runner, tmp_path):
        out = tmp_path / 'run.json'
        result = runner.invoke(naedsim.cli, ['run', '--reps', '1', '--shots', '128',
                                             '--sample-noiseless', '--out', str(out)])
        assert result.exit_code == 0
        assert read_json(out)['config']['sample_noiseless'] is True


class TestSweep:
    def test_oversized_grid(self, runner, tmp_path):
        out = tmp_path / 'sweep.json'
        result = runner.invoke(naedsim.cli, ['sweep', '--n', '5', '--q', '6', '--reps', '1', '--out', str(out)])
        assert result.exit_code == 2
        assert not out.exists()

    def test_small_grid_csv(self, runner, tmp_path):
        out = tmp_path / 'sweep.csv'
        result = runner.invoke(naedsim.cli, ['sweep', '--n', '2-3', '--q', '1,2', '--reps', '1',
                                             '--shots', '64', '--format', 'csv', '--out', str(out)])
        assert result.exit_code == 0
        frame = pd.read_csv(out)
        assert list(zip(frame['N'], frame['Q'])) == [(2, 1), (2, 2), (3, 1), (3, 2)]


class TestInject:
    def test_boundary_x(self, runner, tmp_path):
        out = tmp_path / 'inject.json'
        result = runner.invoke(naedsim.cli, ['inject', '--n', '2', '--q', '3', '--error', 'X', '--out', str(out)])
        assert result.exit_code == 0
        report = read_json(out)
        assert abs(report['min_rejection'] - 1.0) < 1e-12
        assert len(report['rows']) == 3 * 2 * 3

    def test_explicit_empty_code(self, runner, tmp_path):
        out = tmp_path / 'inject.json'
        result = runner.invoke(naedsim.cli, ['inject', '--q', '2', '--s', '', '--out', str(out)])
        assert result.exit_code == 0
        assert read_json(out)['S'] == []


class TestVerify:
    def test_quick_suite(self, runner):
        result = runner.invoke(naedsim.cli, ['verify', '--quick'])
        assert result.exit_code == 0
        assert 'checks passed' in result.output

    def test_failing_check_exit_code(self, runner, monkeypatch):
        def failing_suite(seed=0, quick=False):
            return [CheckResult('identity', 'Q=2 S={0}', 1e-3, 1e-12)]

        monkeypatch.setattr(naedsim, 'run_verification_suite', failing_suite)
        result = runner.invoke(naedsim.cli, ['verify'])
        assert result.exit_code == 3
        assert 'FAIL' in result.output


class TestPlotData:
    def test_writes_metric_grids(self, runner, tmp_path):
        source = tmp_path / 'sweep.json'
        runner.invoke(naedsim.cli, ['sweep', '--n', '2', '--q', '1-2', '--reps', '1',
                                    '--shots', '64', '--out', str(source)])
        out_dir = tmp_path / 'plots'
        result = runner.invoke(naedsim.cli, ['plotdata', str(source), '--out', str(out_dir)])
        assert result.exit_code == 0
        assert sorted(os.listdir(out_dir)) == ['mu_full.csv', 'mu_naed.csv', 'p_kept.csv']
        grid = pd.read_csv(out_dir / 'p_kept.csv', index_col=0)
        assert grid.loc[2].tolist() == [100.0, 100.0]
