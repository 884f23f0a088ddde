"""Documents as keyword-frequency vectors.

The feature matrix stores one row per keyword and one column per
document; a cell is the keyword's relative frequency inside that
document (count divided by document length, no further normalization).
Chromosomes act on it by row projection.
"""

import csv
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import CategoryId, Corpus, Document
from .errors import InputError


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Dense keywords x documents matrix of in-document frequencies.

    Columns are normalized to ascending doc-id order at construction,
    so column position always equals doc-id rank and positional
    distance tie-breaking is equivalent to doc-id tie-breaking.
    """

    keywords: tuple[str, ...]
    doc_ids: tuple[str, ...]
    values: np.ndarray
    labels: tuple[CategoryId, ...]
    categories: tuple[CategoryId, ...]
    _label_indices: np.ndarray = field(
        init=False, repr=False, compare=False, default=None
    )

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (len(self.keywords), len(self.doc_ids)):
            raise InputError(
                f"matrix shape {values.shape} does not match "
                f"{len(self.keywords)} keywords x {len(self.doc_ids)} documents"
            )
        if len(self.labels) != len(self.doc_ids):
            raise InputError("one label per document column required")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise InputError("duplicate document ids in matrix columns")
        order = sorted(range(len(self.doc_ids)), key=lambda j: self.doc_ids[j])
        if order != list(range(len(self.doc_ids))):
            object.__setattr__(
                self, "doc_ids", tuple(self.doc_ids[j] for j in order)
            )
            object.__setattr__(self, "labels", tuple(self.labels[j] for j in order))
            values = values[:, order]
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self,
            "_label_indices",
            np.array([c.index for c in self.labels], dtype=np.int64),
        )

    @property
    def n_keywords(self) -> int:
        return len(self.keywords)

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def label_indices(self) -> np.ndarray:
        return self._label_indices

    def column_points(self) -> np.ndarray:
        """Documents as rows, features as columns (kernel layout)."""
        return np.ascontiguousarray(self.values.T)


def document_frequency(doc: Document, word: str) -> float:
    """Relative frequency of a word inside one document."""
    if doc.token_count == 0:
        raise InputError(f"document {doc.id!r} has no tokens")
    return doc.tokens.count(word) / doc.token_count


def build_feature_matrix(
    corpus: Corpus, doc_ids: Iterable[str], keywords: Sequence[str]
) -> FeatureMatrix:
    """Stack per-document keyword frequencies, columns in sorted id order."""
    words = tuple(keywords)
    if not words:
        raise InputError("keywords must be nonempty")
    if len(set(words)) != len(words):
        raise InputError("keywords must be distinct")
    ids = sorted(set(doc_ids))
    if not ids:
        raise InputError("doc_ids must be nonempty")
    row_of = {w: i for i, w in enumerate(words)}
    values = np.zeros((len(words), len(ids)), dtype=np.float64)
    labels = []
    for j, doc_id in enumerate(ids):
        doc = corpus.document(doc_id)
        counts = Counter(doc.tokens)
        token_count = doc.token_count
        for word, row in row_of.items():
            c = counts.get(word)
            if c:
                values[row, j] = c / token_count
        labels.append(doc.category)
    return FeatureMatrix(words, tuple(ids), values, tuple(labels), corpus.categories)


def project(matrix: FeatureMatrix, gene_indices: Sequence[int]) -> FeatureMatrix:
    """Row-subset copy of the matrix, rows in gene order."""
    genes = [int(g) for g in gene_indices]
    if not genes:
        raise InputError("projection needs at least one index")
    if len(set(genes)) != len(genes):
        raise InputError(f"projection indices must be distinct, got {genes}")
    for g in genes:
        if not 0 <= g < matrix.n_keywords:
            raise InputError(f"projection index {g} outside [0, {matrix.n_keywords})")
    return FeatureMatrix(
        tuple(matrix.keywords[g] for g in genes),
        matrix.doc_ids,
        matrix.values[genes, :],
        matrix.labels,
        matrix.categories,
    )


def matrix_to_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    """Debug dump: header row of doc ids, first column of keywords."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["word", *matrix.doc_ids])
        for i, word in enumerate(matrix.keywords):
            writer.writerow([word, *(repr(v) for v in matrix.values[i].tolist())])
