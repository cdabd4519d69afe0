"""Dataset ingestion, synthetic data generation, and result persistence.

On disk a dataset is a JSON manifest naming per-view CSV matrix files
(features x samples by default), an optional labels file with one id per
line, and the cluster count. Results are written as a directory with
stable file names: metrics.csv, labels.txt, trace.csv, adjacency.csv.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .model import MultiViewDataset

# full round-trip precision for all stored matrices
_FLOAT_FMT = "%.17g"


class ParseError(ValueError):
    """A matrix or labels file could not be parsed."""


class DimMismatchError(ValueError):
    """Declared dimensions disagree with file contents."""


class LabelMismatchError(ValueError):
    """Label count does not match the sample count."""


class SpecInvalidError(ValueError):
    """Synthetic generator specification is inconsistent."""


@dataclass
class ViewFile:
    path: str
    dim: int | None = None


@dataclass
class DatasetManifest:
    name: str
    views: list
    labels_path: str | None = None
    n_clusters: int | None = None
    transposed: bool = False

    @classmethod
    def from_json(cls, path):
        path = Path(path)
        with open(path) as fh:
            raw = json.load(fh)
        views = [
            ViewFile(path=v["path"], dim=v.get("dim"))
            for v in raw["views"]
        ]
        return cls(
            name=raw.get("name", path.stem),
            views=views,
            labels_path=raw.get("labels"),
            n_clusters=raw.get("clusters"),
            transposed=raw.get("transposed", False),
        )

    def to_json(self, path):
        raw = {
            "name": self.name,
            "views": [{"path": v.path, "dim": v.dim} for v in self.views],
            "transposed": self.transposed,
        }
        if self.labels_path is not None:
            raw["labels"] = self.labels_path
        if self.n_clusters is not None:
            raw["clusters"] = self.n_clusters
        with open(path, "w") as fh:
            json.dump(raw, fh, indent=2)
            fh.write("\n")


def load_matrix(path):
    try:
        m = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return m


def save_matrix(path, m):
    np.savetxt(path, np.atleast_2d(m), delimiter=",", fmt=_FLOAT_FMT)


def load_labels(path):
    """Read one label per line; arbitrary alphabets are remapped to 0-based
    contiguous ids following the sorted order of the distinct values."""
    with open(path) as fh:
        raw = [line.strip() for line in fh if line.strip()]
    if not raw:
        raise ParseError(f"{path}: empty labels file")
    alphabet = sorted(set(raw))
    mapping = {a: i for i, a in enumerate(alphabet)}
    return np.array([mapping[r] for r in raw], dtype=int)


def load_dataset(manifest, base_dir=None):
    """Materialize a manifest into an in-memory multi-view dataset."""
    base = Path(base_dir) if base_dir is not None else Path(".")
    views = []
    for i, vf in enumerate(manifest.views):
        m = load_matrix(base / vf.path)
        if manifest.transposed:
            m = m.T
        if vf.dim is not None and m.shape[0] != vf.dim:
            raise DimMismatchError(
                f"view {i}: declared dim {vf.dim}, file has {m.shape[0]}"
            )
        views.append(m)
    labels = None
    if manifest.labels_path is not None:
        labels = load_labels(base / manifest.labels_path)
        if labels.shape[0] != views[0].shape[1]:
            raise LabelMismatchError(
                f"{labels.shape[0]} labels for {views[0].shape[1]} samples"
            )
    return MultiViewDataset(views=views, labels=labels,
                            n_clusters=manifest.n_clusters)


@dataclass
class SyntheticSpec:
    """Parameters of the seeded union-of-subspaces generator."""

    n_views: int = 3
    n_clusters: int = 3
    n_samples: int = 150
    k_s: int = 10
    k_c: int = 10
    intrinsic_dim: int = 3
    view_dims: tuple = (40, 50, 60)
    noise: float = 0.0
    corrupt_fraction: float = 0.2
    corrupt_scale: float = 2.0
    seed: int = 7

    def validate(self):
        if self.n_views < 1 or self.n_clusters < 1:
            raise SpecInvalidError("need >= 1 view and >= 1 cluster")
        if self.n_samples < self.n_clusters:
            raise SpecInvalidError("need at least one sample per cluster")
        if self.intrinsic_dim > min(self.k_s, self.k_c):
            raise SpecInvalidError(
                "intrinsic dimension exceeds a latent dimension"
            )
        if len(self.view_dims) != self.n_views:
            raise SpecInvalidError("view_dims length must equal n_views")
        if min(self.view_dims) < self.k_s + self.k_c:
            raise SpecInvalidError(
                "each view dimension must be >= k_s + k_c for orthonormal "
                "projections"
            )
        if self.noise < 0:
            raise SpecInvalidError("noise level must be nonnegative")
        if not 0 <= self.corrupt_fraction <= 1:
            raise SpecInvalidError("corrupt_fraction must lie in [0, 1]")
        if self.corrupt_scale < 0:
            raise SpecInvalidError("corrupt_scale must be nonnegative")


def generate_synthetic(spec):
    """Draw a multi-view dataset obeying the factorization model exactly.

    Cluster points live in per-cluster low-dimensional subspaces of the
    consistent latent space and of each view-specific latent space (mutually
    orthogonal subspaces when the latent dimension permits); the observations
    are orthonormal projections of those factors. When noise > 0 each view
    gets dense Gaussian noise scaled to its signal level plus gross
    corruption of a random column subset, so views disagree on which samples
    are unreliable. Deterministic given the seed.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n, c = spec.n_samples, spec.n_clusters
    labels = np.sort(np.arange(n) % c)

    def cluster_factor(k):
        h = np.zeros((k, n))
        d = spec.intrinsic_dim
        if c * d <= k:
            # mutually orthogonal cluster subspaces: randomly oriented
            # orthonormal frame split into one d-column block per cluster
            frame, r = np.linalg.qr(rng.standard_normal((k, c * d)))
            frame = frame * np.sign(np.diag(r))[None, :]
            bases = [frame[:, cl * d:(cl + 1) * d] for cl in range(c)]
        else:
            # not enough latent room for orthogonality; independent draws
            bases = [rng.standard_normal((k, d)) for _ in range(c)]
        for cl in range(c):
            members = labels == cl
            coeffs = rng.standard_normal((d, members.sum()))
            h[:, members] = bases[cl] @ coeffs
        return h

    h_c = cluster_factor(spec.k_c)
    h_s = [cluster_factor(spec.k_s) for _ in range(spec.n_views)]

    views = []
    for v, m in enumerate(spec.view_dims):
        # joint orthonormal frame so [P_s, P_c] has orthonormal columns
        q, r = np.linalg.qr(rng.standard_normal((m, spec.k_s + spec.k_c)))
        q = q * np.sign(np.diag(r))[None, :]
        p_s, p_c = q[:, : spec.k_s], q[:, spec.k_s :]
        x = p_s @ h_s[v] + p_c @ h_c
        if spec.noise > 0:
            unit = np.linalg.norm(x) / np.sqrt(m * n)
            x = x + spec.noise * unit * rng.standard_normal((m, n))
            # sample-specific gross corruption: a random subset of columns
            # per view gets large extra noise (the column-sparse error the
            # L2,1 term is designed to absorb); subsets differ across views
            n_bad = int(round(spec.corrupt_fraction * n))
            if n_bad > 0 and spec.corrupt_scale > 0:
                cols = rng.choice(n, size=n_bad, replace=False)
                x[:, cols] += spec.corrupt_scale * unit * rng.standard_normal(
                    (m, n_bad)
                )
        views.append(x)
    return MultiViewDataset(views=views, labels=labels.copy(), n_clusters=c)


def save_synthetic(spec, out_dir):
    """Write a generated dataset plus its manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data = generate_synthetic(spec)
    view_files = []
    for v, x in enumerate(data.views):
        name = f"view{v}.csv"
        save_matrix(out / name, x)
        view_files.append(ViewFile(path=name, dim=x.shape[0]))
    with open(out / "labels.txt", "w") as fh:
        for lab in data.labels:
            fh.write(f"{lab}\n")
    manifest = DatasetManifest(
        name="synthetic",
        views=view_files,
        labels_path="labels.txt",
        n_clusters=data.n_clusters,
    )
    manifest_path = out / "manifest.json"
    manifest.to_json(manifest_path)
    return manifest_path


def save_trace(path, trace):
    """Delimited residual trace: iteration, criteria, mu.

    Wall-clock timings stay in the in-memory trace only, so repeated runs
    with the same seed write byte-identical files.
    """
    n_crit = len(trace.criteria[0]) if len(trace) else 0
    header = ",".join(
        ["iteration"]
        + [f"criterion_{i + 1}" for i in range(n_crit)]
        + ["mu"]
    )
    table = trace.as_table()
    if table.size == 0:
        with open(path, "w") as fh:
            fh.write("iteration,mu\n" if n_crit == 0 else header + "\n")
        return
    np.savetxt(path, table[:, :-1], delimiter=",", fmt=_FLOAT_FMT,
               header=header, comments="")


def save_result(out_dir, result, adjacency, labels=None, report=None):
    """Persist one fit: residual trace, adjacency, predicted labels, metrics."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_trace(out / "trace.csv", result.trace)
    save_matrix(out / "adjacency.csv", adjacency)
    if labels is not None:
        with open(out / "labels.txt", "w") as fh:
            for lab in labels:
                fh.write(f"{int(lab)}\n")
    if report is not None:
        with open(out / "metrics.csv", "w") as fh:
            fh.write(report.csv_header() + "\n")
            fh.write(report.csv_row() + "\n")
    with open(out / "run.json", "w") as fh:
        json.dump(
            {"converged": bool(result.converged),
             "iterations": int(result.iterations)},
            fh, indent=2,
        )
        fh.write("\n")
