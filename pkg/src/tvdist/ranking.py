"""Fidelity ranking of candidate datasets against a real reference.

Consumes pre-computed embedding files (headerless CSV, one row per sample,
optional final integer ``class`` column) and reports, per estimator, the TV
to the real set for every candidate plus whether the estimates reproduce the
declared quality ordering. Estimates within the tie tolerance of each other
are flagged as ties and never counted as a correct ranking.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DimensionMismatch, FileFormatError, TvDistError
from .experiments import _METHOD_ID, run_method

_ORDERS = ("worst_to_best", "best_to_worst")


@dataclass
class RankingTask:
    real_embeddings: str
    candidate_sets: list[tuple[str, str]]  # (name, file path), in declared quality order
    candidate_order: str = "worst_to_best"  # worst first -> TV strictly decreasing
    per_class: bool = False
    methods: tuple[str, ...] = ("dise", "pe", "kde")
    base_seed: int = 42
    n_mc: int = 100_000
    tie_tol: float | None = None  # default: 2 / sqrt(smallest n_eval)

    def __post_init__(self):
        if len(self.candidate_sets) < 2:
            raise ConfigError("need at least 2 candidate sets")
        if self.candidate_order not in _ORDERS:
            raise ConfigError(f"candidate_order must be one of {_ORDERS}")
        self.methods = tuple(self.methods)
        self.candidate_sets = [tuple(c) for c in self.candidate_sets]


def ranking_task_from_dict(doc: dict) -> RankingTask:
    known = {f.name for f in dataclasses.fields(RankingTask)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    try:
        return RankingTask(**doc)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_embeddings(path: str, per_class: bool) -> tuple[np.ndarray, np.ndarray | None]:
    """(features, class labels or None) from a headerless CSV file."""
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise FileFormatError(f"{path}: empty file")
    if not per_class:
        return data, None
    if data.shape[1] < 2:
        raise FileFormatError(f"{path}: per_class needs a final class column")
    labels = data[:, -1]
    if np.any(labels != np.round(labels)):
        raise FileFormatError(f"{path}: class column must be integer")
    return data[:, :-1], labels.astype(np.int64)


def _estimate(task, method, mi, ci, key, real, cand):
    seed = np.random.default_rng([task.base_seed, mi, ci, key])
    return run_method(method, real, cand, seed=seed, n_mc=task.n_mc)


def run_ranking(task: RankingTask) -> dict:
    """Per-method TV estimates per candidate and a correct-ranking verdict."""
    real_x, real_cls = load_embeddings(task.real_embeddings, task.per_class)
    candidates = []
    for name, path in task.candidate_sets:
        cand_x, cand_cls = load_embeddings(path, task.per_class)
        if cand_x.shape[1] != real_x.shape[1]:
            raise DimensionMismatch(
                f"{path}: {cand_x.shape[1]} columns vs real {real_x.shape[1]}"
            )
        candidates.append((name, cand_x, cand_cls))

    report: dict = {
        "candidate_order": task.candidate_order,
        "candidates": [name for name, _, _ in candidates],
        "methods": {},
    }
    for method in task.methods:
        mi = _METHOD_ID[method]
        per_candidate = []
        min_n_eval = math.inf
        for ci, (name, cand_x, cand_cls) in enumerate(candidates):
            if task.per_class:
                classes = sorted(set(real_cls.tolist()) & set(cand_cls.tolist()))
                if not classes:
                    raise ConfigError(f"no shared classes between real set and {name}")
                tvs = []
                for cls in classes:
                    est = _estimate(
                        task, method, mi, ci, int(cls),
                        real_x[real_cls == cls], cand_x[cand_cls == cls],
                    )
                    tvs.append(est.tv)
                    min_n_eval = min(min_n_eval, est.n_eval)
                entry = {
                    "name": name,
                    "tv_mean": float(np.mean(tvs)),
                    "tv_sd": float(np.std(tvs, ddof=1)) if len(tvs) > 1 else 0.0,
                    "per_class_tv": {str(int(c)): tv for c, tv in zip(classes, tvs)},
                }
            else:
                est = _estimate(task, method, mi, ci, 0, real_x, cand_x)
                min_n_eval = min(min_n_eval, est.n_eval)
                entry = {"name": name, "tv_mean": est.tv, "tv_sd": 0.0}
            per_candidate.append(entry)

        tie_tol = task.tie_tol if task.tie_tol is not None else 2.0 / math.sqrt(min_n_eval)
        tvs = [e["tv_mean"] for e in per_candidate]
        diffs = np.diff(tvs)
        if task.candidate_order == "worst_to_best":
            order_ok = bool(np.all(diffs < 0))
        else:
            order_ok = bool(np.all(diffs > 0))
        ties = bool(np.any(np.abs(diffs) <= tie_tol))
        report["methods"][method] = {
            "estimates": per_candidate,
            "tie_tol": tie_tol,
            "ties": ties,
            "correct_ranking": order_ok and not ties,
        }
    return report


def write_report(report: dict, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
