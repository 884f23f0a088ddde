"""k-nearest-neighbor classification over document vectors.

Distance is plain Euclidean on frequency coordinates. The evaluation
report carries per-category precision and recall plus their macro
averages; the optimizer's objective is one minus the precision average,
so 0 is a perfect score.
"""

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import CategoryId
from .errors import ConfigError, EvaluationError, InputError
from .kernels import predict_labels, squared_distances
from .vectorspace import FeatureMatrix


@dataclass(frozen=True)
class KnnConfig:
    """Neighbor count and vote tie rule ("nearest" is the only rule:
    ties go to the category seen closest, then the lower index)."""

    k: int = 1
    tie_break: str = "nearest"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.tie_break != "nearest":
            raise ConfigError(f"unknown tie_break rule {self.tie_break!r}")


@dataclass(frozen=True, eq=False)
class EvalReport:
    """Per-category metrics, macro averages and the error score.

    precision[j] is None when category j never got predicted; recall[j]
    is None when category j has no documents in the evaluated set. None
    entries are excluded from the averages. fitness is always
    1 - pr_avg. confusion[t, p] counts documents of true category t
    predicted as p.
    """

    categories: tuple[CategoryId, ...]
    precision: tuple
    recall: tuple
    pr_avg: float
    rc_avg: float
    fitness: float
    confusion: np.ndarray

    def to_dict(self) -> dict:
        return {
            "categories": [
                {"name": c.name, "precision": p, "recall": r}
                for c, p, r in zip(self.categories, self.precision, self.recall)
            ],
            "pr_avg": self.pr_avg,
            "rc_avg": self.rc_avg,
            "fitness": self.fitness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance between two equal-length vectors."""
    av = np.atleast_1d(np.asarray(a, dtype=np.float64))
    bv = np.atleast_1d(np.asarray(b, dtype=np.float64))
    if av.shape != bv.shape:
        raise InputError(f"vector shapes differ: {av.shape} vs {bv.shape}")
    diff = av.ravel() - bv.ravel()
    return float(np.sqrt(np.dot(diff, diff)))


def _check_k(k: int, n_train: int) -> None:
    if k > n_train:
        raise ConfigError(f"k={k} exceeds {n_train} training documents")


def classify(
    train: FeatureMatrix, query: Sequence[float], cfg: KnnConfig
) -> CategoryId:
    """Label one document vector by its k nearest training columns.

    Distance ties resolve to the lower column position, which equals
    doc-id order for matrices built by build_feature_matrix.
    """
    if train.n_docs == 0:
        raise InputError("training matrix has no documents")
    q = np.asarray(query, dtype=np.float64).ravel()
    if q.size != train.n_keywords:
        raise InputError(
            f"query length {q.size} does not match {train.n_keywords} keywords"
        )
    _check_k(cfg.k, train.n_docs)
    sq = squared_distances(q[None, :], train.column_points())
    idx = int(
        predict_labels(sq, train.label_indices(), len(train.categories), cfg.k)[0]
    )
    return train.categories[idx]


def evaluate(train: FeatureMatrix, test: FeatureMatrix, cfg: KnnConfig) -> EvalReport:
    """Classify every test column and tabulate per-category metrics."""
    if train.keywords != test.keywords:
        raise InputError("train and test matrices use different keyword bases")
    if train.categories != test.categories:
        raise InputError("train and test matrices use different category sets")
    if train.n_docs == 0 or test.n_docs == 0:
        raise InputError("train and test matrices must both be nonempty")
    _check_k(cfg.k, train.n_docs)
    sq = squared_distances(test.column_points(), train.column_points())
    predicted = predict_labels(
        sq, train.label_indices(), len(train.categories), cfg.k
    )
    return report_from_predictions(test.label_indices(), predicted, test.categories)


def report_from_predictions(
    true_indices: Sequence[int],
    predicted_indices: Sequence[int],
    categories: Sequence[CategoryId],
) -> EvalReport:
    """Confusion counts -> precision/recall/fitness.

    Split out from evaluate so the metric arithmetic can be checked
    against independent scripts on arbitrary label tables.
    """
    true = np.asarray(true_indices, dtype=np.int64)
    pred = np.asarray(predicted_indices, dtype=np.int64)
    if true.shape != pred.shape:
        raise InputError("true and predicted label arrays differ in length")
    if true.size == 0:
        raise InputError("cannot evaluate zero classified documents")
    n = len(categories)
    confusion = np.zeros((n, n), dtype=np.int64)
    np.add.at(confusion, (true, pred), 1)
    correct = np.diagonal(confusion)
    predicted_totals = confusion.sum(axis=0)
    true_totals = confusion.sum(axis=1)
    precision = tuple(
        float(correct[j] / predicted_totals[j]) if predicted_totals[j] else None
        for j in range(n)
    )
    recall = tuple(
        float(correct[j] / true_totals[j]) if true_totals[j] else None
        for j in range(n)
    )
    defined_pr = [p for p in precision if p is not None]
    if not defined_pr:
        raise EvaluationError("no category received any prediction")
    defined_rc = [r for r in recall if r is not None]
    pr_avg = sum(defined_pr) / len(defined_pr)
    rc_avg = sum(defined_rc) / len(defined_rc)
    return EvalReport(
        tuple(categories), precision, recall, pr_avg, rc_avg, 1.0 - pr_avg, confusion
    )


def fitness_from_report(report: EvalReport) -> float:
    """Optimization objective: one minus macro-averaged precision."""
    if all(p is None for p in report.precision):
        raise EvaluationError("precision is undefined for every category")
    return 1.0 - report.pr_avg
