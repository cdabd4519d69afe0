"""Clustering evaluation: accuracy under optimal assignment, NMI, ARI,
and two precision/recall/F-score conventions.

Accuracy maps predicted clusters to true classes with the Kuhn-Munkres
algorithm. ``pairwise_prf`` scores same-cluster sample pairs (the common
convention in the subspace clustering literature); ``mapped_prf`` is the
macro average over classes after the Kuhn-Munkres mapping.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


class LengthMismatchError(ValueError):
    """Predicted and true label vectors differ in length."""


def _check(pred, truth, min_len=1):
    pred = np.asarray(pred, dtype=int).ravel()
    truth = np.asarray(truth, dtype=int).ravel()
    if pred.shape != truth.shape:
        raise LengthMismatchError(
            f"label lengths differ: {pred.shape[0]} vs {truth.shape[0]}"
        )
    if pred.shape[0] < min_len:
        raise ValueError(f"need at least {min_len} samples")
    return pred, truth


def contingency_matrix(pred, truth):
    """Counts[i, j] = number of samples with pred == i and truth == j.

    Labels are compacted to contiguous indices first, so arbitrary integer
    alphabets are accepted.
    """
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    counts = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(counts, (pi, ti), 1)
    return counts


def accuracy(pred, truth):
    """Best matched fraction over one-to-one cluster-to-class assignments."""
    pred, truth = _check(pred, truth)
    counts = contingency_matrix(pred, truth)
    r, c = linear_sum_assignment(-counts)
    return counts[r, c].sum() / pred.shape[0]


def _entropy(counts):
    p = counts[counts > 0] / counts.sum()
    return -np.sum(p * np.log(p))


def nmi(pred, truth):
    """Mutual information normalized by the geometric mean of the entropies;
    0/0 (either partition single-cluster) is defined as 0."""
    pred, truth = _check(pred, truth)
    counts = contingency_matrix(pred, truth).astype(float)
    n = counts.sum()
    hp = _entropy(counts.sum(axis=1))
    ht = _entropy(counts.sum(axis=0))
    if hp == 0.0 or ht == 0.0:
        return 0.0
    outer = np.outer(counts.sum(axis=1), counts.sum(axis=0))
    nz = counts > 0
    mi = np.sum(counts[nz] / n * np.log(n * counts[nz] / outer[nz]))
    return float(mi / np.sqrt(hp * ht))


def _pair_counts(labels):
    """Number of same-cluster pairs, per the cluster sizes."""
    sizes = np.bincount(labels)
    return np.sum(sizes * (sizes - 1) // 2)


def ari(pred, truth):
    """Adjusted-for-chance Rand index from pair counts."""
    pred, truth = _check(pred, truth, min_len=2)
    counts = contingency_matrix(pred, truth)
    n = counts.sum()
    sum_cells = np.sum(counts * (counts - 1) // 2)
    sum_pred = _pair_counts(np.asarray(pred) - np.min(pred))
    sum_truth = _pair_counts(np.asarray(truth) - np.min(truth))
    total = n * (n - 1) // 2
    expected = sum_pred * sum_truth / total
    max_index = 0.5 * (sum_pred + sum_truth)
    if max_index == expected:
        return 1.0 if sum_cells == expected else 0.0
    return float((sum_cells - expected) / (max_index - expected))


def pairwise_prf(pred, truth):
    """Precision/recall/F over same-cluster sample pairs.

    TP counts pairs placed together by both partitions. If the prediction
    has no same-cluster pairs at all, precision is 1 by convention.
    """
    pred, truth = _check(pred, truth, min_len=2)
    counts = contingency_matrix(pred, truth)
    tp = np.sum(counts * (counts - 1) // 2)
    pred_pairs = _pair_counts(pred - pred.min())
    truth_pairs = _pair_counts(truth - truth.min())
    precision = tp / pred_pairs if pred_pairs > 0 else 1.0
    recall = tp / truth_pairs if truth_pairs > 0 else 1.0
    f = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return float(precision), float(recall), float(f)


def mapped_prf(pred, truth):
    """Macro-averaged per-class precision/recall/F after the Kuhn-Munkres
    mapping of predicted clusters onto true classes. A class never predicted
    after mapping contributes 0 to the precision average."""
    pred, truth = _check(pred, truth)
    counts = contingency_matrix(pred, truth)
    n_pred, n_true = counts.shape
    size = max(n_pred, n_true)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[:n_pred, :n_true] = counts
    rows, cols = linear_sum_assignment(-padded)
    mapping = dict(zip(rows, cols))
    mapped = np.array([mapping[p] for p in np.unique(pred, return_inverse=True)[1]])
    _, ti = np.unique(truth, return_inverse=True)

    precisions, recalls = [], []
    for cls in range(n_true):
        pred_cls = mapped == cls
        true_cls = ti == cls
        tp = np.sum(pred_cls & true_cls)
        precisions.append(tp / pred_cls.sum() if pred_cls.sum() > 0 else 0.0)
        recalls.append(tp / true_cls.sum())
    precision = float(np.mean(precisions))
    recall = float(np.mean(recalls))
    f = (
        2 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return precision, recall, float(f)


@dataclass
class MetricReport:
    """Bundle of all clustering scores for one prediction."""

    acc: float
    nmi: float
    ari: float
    precision: float
    recall: float
    f_score: float
    prf_variant: str = "pairwise"

    @classmethod
    def evaluate(cls, pred, truth, prf_variant="pairwise"):
        if prf_variant == "pairwise":
            p, r, f = pairwise_prf(pred, truth)
        elif prf_variant == "mapped":
            p, r, f = mapped_prf(pred, truth)
        else:
            raise ValueError(f"unknown prf variant {prf_variant!r}")
        return cls(
            acc=accuracy(pred, truth),
            nmi=nmi(pred, truth),
            ari=ari(pred, truth),
            precision=p,
            recall=r,
            f_score=f,
            prf_variant=prf_variant,
        )

    FIELDS = ("acc", "nmi", "ari", "precision", "recall", "f_score")

    def as_text(self):
        lines = [f"{k} = {getattr(self, k):.10g}" for k in self.FIELDS]
        lines.append(f"prf_variant = {self.prf_variant}")
        return "\n".join(lines)

    def csv_header(self):
        return ",".join(self.FIELDS + ("prf_variant",))

    def csv_row(self):
        vals = [f"{getattr(self, k):.10g}" for k in self.FIELDS]
        return ",".join(vals + [self.prf_variant])
