import json

import numpy as np
import pytest

from tvdist import ranking
from tvdist.errors import ConfigError, DimensionMismatch, FileFormatError


def write_csv(path, data):
    np.savetxt(path, np.atleast_2d(data), delimiter=",")
    return str(path)


def make_candidates(tmp_path, seed=0, n=1500, p=4):
    """Real N(0, I) reference plus three corrupted copies, worst first."""
    rng = np.random.default_rng(seed)
    real = write_csv(tmp_path / "real.csv", rng.standard_normal((n, p)))
    paths = []
    for name, sd in [("bad", 2.0), ("mid", 0.9), ("good", 0.3)]:
        data = rng.standard_normal((n, p)) + sd * rng.standard_normal((n, p))
        paths.append((name, write_csv(tmp_path / f"{name}.csv", data)))
    return real, paths


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def test_load_embeddings_plain(tmp_path):
    path = write_csv(tmp_path / "e.csv", np.arange(12.0).reshape(4, 3))
    data, labels = ranking.load_embeddings(path, per_class=False)
    assert data.shape == (4, 3) and labels is None


def test_load_embeddings_with_class_column(tmp_path):
    rows = np.column_stack([np.arange(6.0).reshape(3, 2), [0.0, 1.0, 1.0]])
    path = write_csv(tmp_path / "e.csv", rows)
    data, labels = ranking.load_embeddings(path, per_class=True)
    assert data.shape == (3, 2)
    np.testing.assert_array_equal(labels, [0, 1, 1])


def test_load_embeddings_errors(tmp_path):
    with pytest.raises(FileFormatError):
        ranking.load_embeddings(str(tmp_path / "missing.csv"), per_class=False)
    bad = write_csv(tmp_path / "frac.csv", np.array([[1.0, 0.5]]))
    with pytest.raises(FileFormatError):
        ranking.load_embeddings(bad, per_class=True)
    narrow = write_csv(tmp_path / "narrow.csv", np.array([[1.0], [2.0]]))
    with pytest.raises(FileFormatError):
        ranking.load_embeddings(narrow, per_class=True)
    (tmp_path / "empty.csv").write_text("")
    with pytest.raises(FileFormatError):
        ranking.load_embeddings(str(tmp_path / "empty.csv"), per_class=False)


# ---------------------------------------------------------------------------
# task config
# ---------------------------------------------------------------------------

def test_task_validation(tmp_path):
    with pytest.raises(ConfigError):
        ranking.RankingTask(real_embeddings="r", candidate_sets=[("a", "a.csv")])
    with pytest.raises(ConfigError):
        ranking.RankingTask(
            real_embeddings="r",
            candidate_sets=[("a", "a.csv"), ("b", "b.csv")],
            candidate_order="sideways",
        )
    with pytest.raises(ConfigError):
        ranking.ranking_task_from_dict({"real_embeddings": "r", "bogus": 1})


# ---------------------------------------------------------------------------
# ranking runs
# ---------------------------------------------------------------------------

def test_run_ranking_recovers_order(tmp_path):
    real, candidates = make_candidates(tmp_path)
    task = ranking.RankingTask(
        real_embeddings=real,
        candidate_sets=candidates,
        methods=("dise",),
        n_mc=20_000,
        base_seed=1,
    )
    report = ranking.run_ranking(task)
    entry = report["methods"]["dise"]
    tvs = [e["tv_mean"] for e in entry["estimates"]]
    assert report["candidates"] == ["bad", "mid", "good"]
    assert tvs[0] > tvs[1] > tvs[2]
    assert entry["correct_ranking"] is True
    assert entry["ties"] is False


def test_run_ranking_deterministic(tmp_path):
    real, candidates = make_candidates(tmp_path)
    task = ranking.RankingTask(
        real_embeddings=real, candidate_sets=candidates, methods=("dise", "pe"), n_mc=5000
    )
    a = ranking.run_ranking(task)
    b = ranking.run_ranking(task)
    assert a == b


def test_ties_never_count_as_correct(tmp_path):
    # two candidates that are byte-identical must tie, and a tie is not correct
    rng = np.random.default_rng(5)
    real = write_csv(tmp_path / "real.csv", rng.standard_normal((800, 3)))
    cand = rng.standard_normal((800, 3)) + 1.0
    a = write_csv(tmp_path / "a.csv", cand)
    b = write_csv(tmp_path / "b.csv", cand)
    task = ranking.RankingTask(
        real_embeddings=real,
        candidate_sets=[("a", a), ("b", b)],
        methods=("pe",),
        n_mc=5000,
    )
    entry = ranking.run_ranking(task)["methods"]["pe"]
    assert entry["ties"] is True
    assert entry["correct_ranking"] is False


def test_best_to_worst_order(tmp_path):
    real, candidates = make_candidates(tmp_path)
    task = ranking.RankingTask(
        real_embeddings=real,
        candidate_sets=list(reversed(candidates)),
        candidate_order="best_to_worst",
        methods=("dise",),
        n_mc=20_000,
        base_seed=1,
    )
    entry = ranking.run_ranking(task)["methods"]["dise"]
    assert entry["correct_ranking"] is True


def test_per_class_ranking(tmp_path):
    rng = np.random.default_rng(6)
    n, p = 1200, 3

    def with_classes(x):
        return np.column_stack([x, rng.integers(0, 2, x.shape[0])])

    real = write_csv(tmp_path / "real.csv", with_classes(rng.standard_normal((n, p))))
    worse = write_csv(
        tmp_path / "worse.csv",
        with_classes(rng.standard_normal((n, p)) + 1.5),
    )
    better = write_csv(
        tmp_path / "better.csv", with_classes(rng.standard_normal((n, p)) + 0.3)
    )
    task = ranking.RankingTask(
        real_embeddings=real,
        candidate_sets=[("worse", worse), ("better", better)],
        per_class=True,
        methods=("pe",),
        n_mc=10_000,
    )
    entry = ranking.run_ranking(task)["methods"]["pe"]
    assert set(entry["estimates"][0]["per_class_tv"]) == {"0", "1"}
    assert entry["estimates"][0]["tv_mean"] > entry["estimates"][1]["tv_mean"]


def test_dimension_mismatch_between_files(tmp_path):
    rng = np.random.default_rng(7)
    real = write_csv(tmp_path / "real.csv", rng.standard_normal((50, 3)))
    a = write_csv(tmp_path / "a.csv", rng.standard_normal((50, 2)))
    b = write_csv(tmp_path / "b.csv", rng.standard_normal((50, 2)))
    task = ranking.RankingTask(
        real_embeddings=real, candidate_sets=[("a", a), ("b", b)], methods=("pe",)
    )
    with pytest.raises(DimensionMismatch):
        ranking.run_ranking(task)


def test_write_report(tmp_path):
    report = {"candidates": ["a"], "methods": {}}
    out = tmp_path / "report.json"
    ranking.write_report(report, out)
    assert json.loads(out.read_text()) == report
