import csv
import json

import pytest

from matching_application.cli import main
from matching_application.dynamic_matching.core.engine import MatchingEngine
from matching_application.dynamic_matching.utils.workload import load

PATH_FILE = "n=4\n+ 1 2\n+ 0 1\n+ 2 3\n"


@pytest.fixture
def path_file(tmp_path):
    path = tmp_path / 'path.txt'
    path.write_text(PATH_FILE, encoding='utf-8')
    return path


def _totals(metrics_path):
    return json.loads(metrics_path.read_text(encoding='utf-8'))['totals']


def test_gen_writes_sequence_file(tmp_path):
    out = tmp_path / 'random.txt'
    code = main(['gen', '--n', '12', '--t', '50', '--seed', '3', '--out', str(out)])
    assert code == 0
    seq = load(out)
    assert seq.n == 12 and len(seq) == 50 and seq.seed == 3


def test_gen_named_pattern_to_stdout(capsys):
    code = main(['gen', '--pattern', 'path-zipper', '--n', '4', '--rounds', '0'])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith('n=4\n')
    assert out.endswith('+ 1 2\n+ 0 1\n+ 2 3\n')


def test_gen_with_teardown_ends_empty(tmp_path):
    out = tmp_path / 'torn.txt'
    assert main(['gen', '--n', '10', '--t', '40', '--teardown', '--out', str(out)]) == 0
    assert load(out).final_edges() == set()


def test_run_path_file(path_file, tmp_path, capsys):
    metrics = tmp_path / 'metrics.json'
    code = main(['run', '--input', str(path_file), '--metrics', str(metrics)])
    assert code == 0
    assert _totals(metrics)['final_matching_size'] == 2
    assert 'final_matching_size' in capsys.readouterr().out


def test_run_with_teardown_reports_empty_graph(path_file, tmp_path):
    metrics = tmp_path / 'metrics.json'
    code = main(['run', '--input', str(path_file), '--teardown', '--verify-every', '1',
                 '--metrics', str(metrics)])
    assert code == 0
    totals = _totals(metrics)
    assert totals['final_edge_count'] == 0
    assert totals['updates'] == 6


def test_run_csv_metrics(path_file, tmp_path):
    metrics = tmp_path / 'metrics.csv'
    code = main(['run', '--input', str(path_file), '--metrics', str(metrics), '--format', 'csv'])
    assert code == 0
    with metrics.open(encoding='utf-8', newline='') as handle:
        rows = list(csv.DictReader(handle))
    assert [r['kind'] for r in rows] == ['+', '+', '+']
    assert rows[-1]['matching_size'] == '2'


def test_verify_path_file(path_file, capsys):
    assert main(['verify', '--input', str(path_file)]) == 0
    assert 'ratio_check  ok' in capsys.readouterr().out


def test_verify_rejects_unreplayable_file(tmp_path):
    bad = tmp_path / 'bad.txt'
    bad.write_text("n=4\n- 0 1\n", encoding='utf-8')
    assert main(['verify', '--input', str(bad)]) == 2


def test_missing_input_file(tmp_path):
    assert main(['run', '--input', str(tmp_path / 'nope.txt')]) == 2


@pytest.mark.parametrize('argv', [[], ['run'], ['gen', '--n', 'four'], ['gen', '--pattern', 'spiral', '--n', '4']])
def test_usage_errors(argv):
    assert main(argv) == 2


def test_bad_threshold_is_usage_error(path_file):
    assert main(['run', '--input', str(path_file), '--threshold', '0']) == 2


def test_same_seed_gives_identical_metrics(tmp_path):
    seq_path = tmp_path / 'seq.txt'
    main(['gen', '--n', '16', '--t', '200', '--seed', '5', '--out', str(seq_path)])
    documents = []
    for name in ('a.json', 'b.json'):
        out = tmp_path / name
        assert main(['run', '--input', str(seq_path), '--seed', '1', '--metrics', str(out)]) == 0
        document = json.loads(out.read_text(encoding='utf-8'))
        document.pop('timing')
        documents.append(document)
    assert documents[0] == documents[1]


def test_violation_exit_code(path_file, monkeypatch, capsys):
    monkeypatch.setattr(MatchingEngine, 'handle_insert_level0',
                        lambda self, u, v: self.state.own_add(u, v))
    assert main(['run', '--input', str(path_file), '--verify-every', '1']) == 1
    assert '1b\t' in capsys.readouterr().err


def test_bench(capsys):
    assert main(['bench', '--n-list', '8', '16', '--updates-per-n', '40']) == 0
    out = capsys.readouterr().out
    assert 'µs/update' in out
    assert len(out.strip().splitlines()) == 4


@pytest.mark.parametrize('env, argv, updates_run', [
    (None, [], 3),
    (None, ['--profile', 'testing'], 1),
    ('testing', [], 1),
    ('testing', ['--profile', 'production'], 3),
])
def test_profile_supplies_verify_every(path_file, tmp_path, monkeypatch, env, argv, updates_run):
    if env is None:
        monkeypatch.delenv('FLASK_ENV', raising=False)
    else:
        monkeypatch.setenv('FLASK_ENV', env)
    monkeypatch.setattr(MatchingEngine, 'handle_insert_level0',
                        lambda self, u, v: self.state.own_add(u, v))
    metrics = tmp_path / 'metrics.json'
    code = main(argv + ['run', '--input', str(path_file), '--metrics', str(metrics)])
    assert code == 1
    assert _totals(metrics)['updates'] == updates_run


def test_explicit_verify_every_overrides_profile(path_file, tmp_path, monkeypatch):
    monkeypatch.setattr(MatchingEngine, 'handle_insert_level0',
                        lambda self, u, v: self.state.own_add(u, v))
    metrics = tmp_path / 'metrics.json'
    code = main(['--profile', 'testing', 'run', '--input', str(path_file), '--verify-every', '0',
                 '--metrics', str(metrics)])
    assert code == 1
    assert _totals(metrics)['updates'] == 3
