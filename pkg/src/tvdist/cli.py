"""Command-line interface: simulate, estimate, rank, oracle.

Machine-readable output (JSON lines, CSV files) goes to stdout / the output
directory; diagnostics go to stderr. All randomness flows from explicit seeds
(default 42), never from the wall clock. Exit codes: 0 success, 2 config or
usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import dise, oracle, ranking
from .distributions import MixturePair, distribution_from_dict
from .errors import ConfigError, TvDistError
from .experiments import run_method, run_simulation_to_dir, simulation_config_from_dict
from .features import FeatureMapSpec

DEFAULT_SEED = 42


def _load_config(path: str) -> dict:
    try:
        if path.endswith(".toml"):
            with open(path, "rb") as fh:
                return tomllib.load(fh)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, ValueError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _load_samples(path: str) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _cmd_simulate(args) -> int:
    cfg = simulation_config_from_dict(_load_config(args.config))
    out_dir = Path(args.out)
    summary = run_simulation_to_dir(cfg, out_dir, n_jobs=args.threads)
    print(json.dumps({"out_dir": str(out_dir), "summary": summary}))
    return 0


def _cmd_estimate(args) -> int:
    real = _load_samples(args.real)
    synth = _load_samples(args.synth)

    if args.classifier:
        clf = dise.FittedClassifier.from_json(Path(args.classifier).read_text())
        pred_real = clf.predict(real)
        pred_synth = clf.predict(synth)
        n_eval = real.shape[0] + synth.shape[0]
        risk = (float(np.sum(pred_real == 0)) + float(np.sum(pred_synth == 1))) / n_eval
        raw_tv = 1.0 - 2.0 * risk
        est = {
            "method": "dise",
            "tv": min(1.0, max(0.0, raw_tv)),
            "risk": risk,
            "n_eval": n_eval,
            "diagnostics": {"raw_tv": raw_tv, "classifier": args.classifier},
        }
        print(json.dumps({**est, "seed": args.seed}))
        return 0

    feature_spec = FeatureMapSpec.from_tag(args.features) if args.features else None
    dise_config = None
    if args.method == "dise":
        if feature_spec is None:
            feature_spec = FeatureMapSpec.gaussian_quadratic(real.shape[1])
        dise_config = dise.DiseConfig(
            feature_spec=feature_spec,
            lam="auto" if args.ridge is None else args.ridge,
            eval_fraction=args.eval_fraction,
        )
    est = run_method(
        args.method,
        real,
        synth,
        seed=args.seed,
        n_mc=args.n_mc,
        k=args.k,
        dise_config=dise_config,
    )
    if args.save_classifier:
        clf = dise.fit(
            dise_config,
            np.vstack([real, synth]),
            np.concatenate([np.ones(real.shape[0]), np.zeros(synth.shape[0])]),
        )
        Path(args.save_classifier).write_text(clf.to_json() + "\n")
    print(json.dumps({**est.to_dict(), "seed": args.seed}))
    return 0


def _cmd_rank(args) -> int:
    task = ranking.ranking_task_from_dict(_load_config(args.config))
    report = ranking.run_ranking(task)
    if args.out:
        ranking.write_report(report, Path(args.out))
    print(json.dumps(report, sort_keys=True))
    return 0


def _cmd_oracle(args) -> int:
    doc = _load_config(args.spec)
    try:
        p_dist = distribution_from_dict(doc["p"])
        q_dist = distribution_from_dict(doc["q"])
    except KeyError as exc:
        raise ConfigError(f"pair spec missing key {exc}") from exc

    if args.method == "mc":
        est = oracle.mc_true_tv(MixturePair(p_dist, q_dist), args.n_mc, args.seed)
        out = {"method": "mc", "tv": est.tv, "error_estimate": est.diagnostics["mc_se"]}
    elif args.method == "quad":
        tv = oracle.quadrature_tv_1d(p_dist, q_dist, tol=args.tol)
        out = {"method": "quad", "tv": tv, "error_estimate": args.tol}
    else:
        tv = oracle.closed_form_tv_equal_cov(p_dist, q_dist)
        out = {"method": "closed", "tv": tv, "error_estimate": 0.0}
    print(json.dumps(out))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tvdist",
        description="Estimate total variation distance between two sampled distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a config-driven simulation study")
    p_sim.add_argument("--config", required=True, help="TOML or JSON config file")
    p_sim.add_argument("--out", default="sim_out", help="output directory")
    p_sim.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_sim.set_defaults(func=_cmd_simulate)

    p_est = sub.add_parser("estimate", help="estimate TV between two sample files")
    p_est.add_argument("--real", required=True, help="headerless CSV of real samples")
    p_est.add_argument("--synth", required=True, help="headerless CSV of synthetic samples")
    p_est.add_argument("--method", default="dise", choices=["dise", "pe", "kde", "nnre", "ee"])
    p_est.add_argument("--features", help="feature tag, e.g. gq:p=5 or t1:exp-gamma")
    p_est.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_est.add_argument("--n-mc", type=int, default=100_000)
    p_est.add_argument("--k", type=int, default=None, help="neighbor count for nnre/ee")
    p_est.add_argument("--eval-fraction", type=float, default=1.0 / 3.0)
    p_est.add_argument("--ridge", type=float, default=None, help="ridge penalty (default: auto)")
    p_est.add_argument("--save-classifier", help="write the fitted dise classifier JSON here")
    p_est.add_argument("--classifier", help="reuse a saved dise classifier instead of fitting")
    p_est.set_defaults(func=_cmd_estimate)

    p_rank = sub.add_parser("rank", help="rank candidate embedding files by fidelity")
    p_rank.add_argument("--config", required=True, help="TOML or JSON ranking task")
    p_rank.add_argument("--out", help="also write the JSON report here")
    p_rank.set_defaults(func=_cmd_rank)

    p_or = sub.add_parser("oracle", help="ground-truth TV for a declared pair")
    p_or.add_argument("--spec", required=True, help="JSON file with 'p' and 'q' distributions")
    p_or.add_argument("--method", default="mc", choices=["mc", "quad", "closed"])
    p_or.add_argument("--n-mc", type=int, default=1_000_000)
    p_or.add_argument("--tol", type=float, default=1e-6)
    p_or.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_or.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TvDistError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
