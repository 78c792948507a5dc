import json

import numpy as np
import pytest

import config
import report_store
from errors import UsageError


def test_write_json_handles_numpy_and_complex(tmp_path):
    path = report_store.write_json(tmp_path / "sub" / "r.json",
                                   {"z": 1 + 2j, "n": np.int64(3), "a": np.arange(2), "b": np.bool_(True)})
    data = json.loads(path.read_text())
    assert data == {"z": [1.0, 2.0], "n": 3, "a": [0, 1], "b": True}
    assert [p.name for p in path.parent.iterdir()] == ["r.json"]


def test_write_csv_without_header(tmp_path):
    path = report_store.write_csv(tmp_path / "m.csv", None, [[1, 2], [3, 4]])
    assert path.read_text() == "1,2\n3,4\n"


def test_load_json_errors(tmp_path):
    with pytest.raises(UsageError):
        report_store.load_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(UsageError):
        report_store.load_json(bad)
    assert report_store.load_json(bad, default={}) == {}
    assert report_store.load_json(tmp_path / "missing.json", default=None) is None


def test_history_is_pruned(tmp_path, monkeypatch):
    monkeypatch.setattr(report_store, "MAX_HISTORY_RUNS", 3)
    report = tmp_path / "verify.json"
    for i in range(5):
        report_store.record_run(report, "verify", "ok", "run {}".format(i), deterministic=True)
    runs = report_store.load_json(tmp_path / report_store.HISTORY_NAME)["runs"]
    assert [r["summary"] for r in runs] == ["run 2", "run 3", "run 4"]
    assert "timestamp" not in runs[0]


def test_corrupt_history_starts_over(tmp_path):
    (tmp_path / report_store.HISTORY_NAME).write_text("[1, 2]")
    report_store.record_run(tmp_path / "x.json", "solve", "no_solution", "nothing")
    runs = report_store.load_json(tmp_path / report_store.HISTORY_NAME)["runs"]
    assert len(runs) == 1 and "timestamp" in runs[0]


# === config helpers ===

def test_worker_count(monkeypatch):
    monkeypatch.setenv(config.THREADS_ENV, "3")
    assert config.worker_count() == 3
    monkeypatch.setenv(config.THREADS_ENV, "0")
    assert config.worker_count() == 1
    monkeypatch.setenv(config.THREADS_ENV, "lots")
    with pytest.raises(UsageError):
        config.worker_count()


@pytest.mark.parametrize("content,expected", [
    ({"t": [0.1, 0.2, 0.3]}, [(0.1, 0.2, 0.3)]),
    ({"seed_points": [[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]]}, [(0.1, 0.2, 0.3), (0.4, 0.5, 0.6)]),
    ([0.1, 0.2, 0.3], [(0.1, 0.2, 0.3)]),
])
def test_load_seed_file(tmp_path, content, expected):
    path = tmp_path / "seed.json"
    path.write_text(json.dumps(content))
    assert config.load_seed_file(path) == expected


def test_load_seed_file_errors(tmp_path):
    with pytest.raises(UsageError):
        config.load_seed_file(tmp_path / "none.json")
    path = tmp_path / "seed.json"
    path.write_text(json.dumps({"x": 1}))
    with pytest.raises(UsageError):
        config.load_seed_file(path)
    path.write_text(json.dumps([["a"]]))
    with pytest.raises(UsageError):
        config.load_seed_file(path)
