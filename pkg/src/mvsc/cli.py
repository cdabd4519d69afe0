"""Command-line front end.

Subcommands: ``fit`` runs one algorithm on a dataset and writes the results
directory; ``grid`` performs the staged greedy hyperparameter search;
``synth`` writes a seeded synthetic dataset; ``eval`` scores a predicted
labels file against ground truth.

Exit codes: 0 success, 2 usage error, 3 solver divergence.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .data_io import (
    DatasetManifest,
    SyntheticSpec,
    load_dataset,
    load_labels,
    save_result,
    save_synthetic,
)
from .metrics import MetricReport, accuracy
from .model import SolverConfig
from .solvers import DivergedError, fit_cslf, fit_cslfs
from .spectral import adjacency_cslf, adjacency_cslfs, spectral_cluster

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DIVERGED = 3

DEFAULT_GRID_K = [10, 50, 100, 150, 200, 250, 300, 350]
DEFAULT_GRID_L12 = [0.01, 0.1, 1.0, 10.0, 100.0]
DEFAULT_GRID_L3 = [0.1, 0.5, 1.0, 5.0, 10.0]


def _add_solver_flags(p):
    p.add_argument("--algorithm", choices=["cslf", "cslfs"], default="cslfs")
    p.add_argument("--ks", type=int, default=10)
    p.add_argument("--kc", type=int, default=10)
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=1.0)
    p.add_argument("--lambda3", type=float, default=1.0)
    p.add_argument("--mu0", type=float, default=1e-4)
    p.add_argument("--mu-max", type=float, default=1e6)
    p.add_argument("--rho", type=float, default=1.5)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clusters", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--standardize", action="store_true",
                   help="standardize each feature across samples")
    p.add_argument("--unit-norm", action="store_true",
                   help="scale each sample column to unit 2-norm")


def _config_from_args(args, overrides=None):
    cfg = SolverConfig(
        k_s=args.ks, k_c=args.kc,
        lambda1=args.lambda1, lambda2=args.lambda2, lambda3=args.lambda3,
        mu0=args.mu0, mu_max=args.mu_max, rho=args.rho,
        epsilon=args.eps, max_iters=args.max_iters, seed=args.seed,
    )
    for key, val in (overrides or {}).items():
        setattr(cfg, key, val)
    return cfg


def _preprocess(data, standardize, unit_norm):
    if standardize:
        for i, x in enumerate(data.views):
            mean = x.mean(axis=1, keepdims=True)
            std = x.std(axis=1, keepdims=True)
            std[std == 0] = 1.0
            data.views[i] = (x - mean) / std
    if unit_norm:
        for i, x in enumerate(data.views):
            norms = np.linalg.norm(x, axis=0, keepdims=True)
            norms[norms == 0] = 1.0
            data.views[i] = x / norms
    return data


def _load(args):
    manifest_path = Path(args.manifest)
    if not manifest_path.exists():
        raise UsageError(f"--manifest path does not exist: {manifest_path}")
    manifest = DatasetManifest.from_json(manifest_path)
    data = load_dataset(manifest, base_dir=manifest_path.parent)
    return _preprocess(data, args.standardize, args.unit_norm)


class UsageError(Exception):
    pass


def _fit_once(data, algorithm, cfg, clusters):
    fit = fit_cslf if algorithm == "cslf" else fit_cslfs
    result = fit(data, cfg)
    if algorithm == "cslf":
        adj = adjacency_cslf(result.state.z)
    else:
        adj = adjacency_cslfs(result.state.z_v, result.state.z_c)
    labels, _ = spectral_cluster(adj, clusters, seed=cfg.seed)
    return result, adj, labels


def _resolve_clusters(args, data):
    clusters = args.clusters if args.clusters is not None else data.n_clusters
    if clusters is None:
        raise UsageError(
            "--clusters is required when the manifest declares no cluster count"
        )
    return clusters


def cmd_fit(args):
    data = _load(args)
    clusters = _resolve_clusters(args, data)
    cfg = _config_from_args(args)
    result, adj, labels = _fit_once(data, args.algorithm, cfg, clusters)
    report = None
    if data.labels is not None:
        report = MetricReport.evaluate(labels, data.labels)
    save_result(args.out, result, adj, labels=labels, report=report)
    with open(Path(args.out) / "config.json", "w") as fh:
        json.dump(
            {"algorithm": args.algorithm, "clusters": clusters,
             "standardize": args.standardize, "unit_norm": args.unit_norm,
             **vars(cfg)},
            fh, indent=2,
        )
        fh.write("\n")
    if report is not None:
        print(report.as_text())
    print(f"converged={result.converged} iterations={result.iterations}")
    return EXIT_OK


def _grid_cell(data, algorithm, args, overrides, clusters):
    """Mean/std ACC over `repeats` runs with distinct master seeds."""
    accs = []
    for r in range(args.repeats):
        cfg = _config_from_args(args, overrides)
        cfg.seed = args.seed + r
        _, _, labels = _fit_once(data, algorithm, cfg, clusters)
        accs.append(accuracy(labels, data.labels))
    return float(np.mean(accs)), float(np.std(accs))


def _run_stage(data, algorithm, args, clusters, cells, fixed, out_path):
    """Evaluate every cell of one greedy stage; returns the winning overrides."""
    rows = []
    best = None
    for overrides in cells:
        mean, std = _grid_cell(
            data, algorithm, args, {**fixed, **overrides}, clusters
        )
        rows.append({**overrides, "acc_mean": mean, "acc_std": std})
        if best is None or mean > best[0]:
            best = (mean, overrides)
    keys = list(cells[0].keys())
    with open(out_path, "w") as fh:
        fh.write(",".join(keys + ["acc_mean", "acc_std"]) + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    [f"{row[k]:.10g}" for k in keys]
                    + [f"{row['acc_mean']:.10g}", f"{row['acc_std']:.10g}"]
                )
                + "\n"
            )
    return best[1]


def cmd_grid(args):
    data = _load(args)
    if data.labels is None:
        raise UsageError("grid search needs ground-truth labels (ACC metric)")
    clusters = _resolve_clusters(args, data)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    stage1 = [
        {"k_s": ks, "k_c": kc} for ks in args.grid_ks for kc in args.grid_kc
    ]
    win1 = _run_stage(data, args.algorithm, args, clusters, stage1, {},
                      out / "stage1.csv")
    stage2 = [
        {"lambda1": l1, "lambda2": l2}
        for l1 in args.grid_l1 for l2 in args.grid_l2
    ]
    win2 = _run_stage(data, args.algorithm, args, clusters, stage2, win1,
                      out / "stage2.csv")
    stage3 = [{"lambda3": l3} for l3 in args.grid_l3]
    win3 = _run_stage(data, args.algorithm, args, clusters, stage3,
                      {**win1, **win2}, out / "stage3.csv")

    winner = {**win1, **win2, **win3}
    lineage = {
        "algorithm": args.algorithm,
        "stage1_winner": win1,
        "stage2_winner": win2,
        "stage3_winner": win3,
        "winner": winner,
        "repeats": args.repeats,
        "base_seed": args.seed,
    }
    with open(out / "winner.json", "w") as fh:
        json.dump(lineage, fh, indent=2)
        fh.write("\n")
    print(json.dumps(winner))
    return EXIT_OK


def cmd_synth(args):
    spec = SyntheticSpec(
        n_views=args.views,
        n_clusters=args.clusters,
        n_samples=args.samples,
        k_s=args.ks,
        k_c=args.kc,
        intrinsic_dim=args.intrinsic_dim,
        view_dims=tuple(args.view_dims)
        if args.view_dims
        else tuple(40 + 10 * v for v in range(args.views)),
        noise=args.noise,
        corrupt_fraction=args.corrupt_fraction,
        corrupt_scale=args.corrupt_scale,
        seed=args.seed,
    )
    manifest_path = save_synthetic(spec, args.out)
    print(manifest_path)
    return EXIT_OK


def cmd_eval(args):
    pred = load_labels(args.pred)
    truth = load_labels(args.truth)
    report_pair = MetricReport.evaluate(pred, truth, "pairwise")
    report_map = MetricReport.evaluate(pred, truth, "mapped")
    print("[pairwise]")
    print(report_pair.as_text())
    print("[mapped]")
    print(report_map.as_text())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mvsc",
        description="Partially latent multi-view subspace clustering toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit one algorithm on a dataset")
    p_fit.add_argument("--manifest", required=True)
    p_fit.add_argument("--out", required=True)
    _add_solver_flags(p_fit)
    p_fit.set_defaults(func=cmd_fit)

    p_grid = sub.add_parser("grid", help="greedy staged hyperparameter search")
    p_grid.add_argument("--manifest", required=True)
    p_grid.add_argument("--out", required=True)
    _add_solver_flags(p_grid)
    p_grid.add_argument("--grid-ks", type=int, nargs="+",
                        default=DEFAULT_GRID_K)
    p_grid.add_argument("--grid-kc", type=int, nargs="+",
                        default=DEFAULT_GRID_K)
    p_grid.add_argument("--grid-l1", type=float, nargs="+",
                        default=DEFAULT_GRID_L12)
    p_grid.add_argument("--grid-l2", type=float, nargs="+",
                        default=DEFAULT_GRID_L12)
    p_grid.add_argument("--grid-l3", type=float, nargs="+",
                        default=DEFAULT_GRID_L3)
    p_grid.add_argument("--repeats", type=int, default=1)
    p_grid.set_defaults(func=cmd_grid)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--views", type=int, default=3)
    p_synth.add_argument("--clusters", type=int, default=3)
    p_synth.add_argument("--samples", type=int, default=150)
    p_synth.add_argument("--ks", type=int, default=10)
    p_synth.add_argument("--kc", type=int, default=10)
    p_synth.add_argument("--intrinsic-dim", type=int, default=3)
    p_synth.add_argument("--view-dims", type=int, nargs="+", default=None)
    p_synth.add_argument("--noise", type=float, default=0.0)
    p_synth.add_argument("--corrupt-fraction", type=float, default=0.2)
    p_synth.add_argument("--corrupt-scale", type=float, default=2.0)
    p_synth.add_argument("--seed", type=int, default=7)
    p_synth.set_defaults(func=cmd_synth)

    p_eval = sub.add_parser("eval", help="score predicted labels against truth")
    p_eval.add_argument("--pred", required=True)
    p_eval.add_argument("--truth", required=True)
    p_eval.set_defaults(func=cmd_eval)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


if __name__ == "__main__":
    sys.exit(main())
