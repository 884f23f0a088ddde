"""Shared builders for classifier test instances."""

import numpy as np

from keywordga import CategoryId, FeatureMatrix


def make_categories(n):
    return tuple(CategoryId(f"cat_{j:02d}", j) for j in range(n))


def make_instance(rng, n_categories, n_train, n_test, n_features, quantized=False):
    """Random train/test FeatureMatrix pair.

    quantized=True draws values from a coarse grid so exact distance
    ties occur; labels then depend only on column content, so duplicate
    columns always agree on their category.
    """
    cats = make_categories(n_categories)
    keywords = tuple(f"w{i:03d}" for i in range(n_features))

    def build(n, prefix):
        if quantized:
            grid = rng.integers(0, 4, size=(n_features, n))
            values = grid / 4.0
            label_idx = grid.sum(axis=0) % n_categories
        else:
            values = rng.random((n_features, n))
            label_idx = rng.integers(0, n_categories, size=n)
        ids = tuple(f"{prefix}{j:04d}" for j in range(n))
        labels = tuple(cats[int(i)] for i in label_idx)
        return FeatureMatrix(keywords, ids, values, labels, cats)

    return build(n_train, "train_"), build(n_test, "test_")


def planted_deficit_fitness(planted):
    """Fraction of the planted gene set missing from a chromosome."""
    planted = frozenset(planted)

    def fitness(chromosome):
        return (len(planted) - len(planted & set(chromosome.genes))) / len(planted)

    return fitness


class StubRng:
    """Feeds scripted values into the GA operators' rng calls."""

    def __init__(self, randoms=(), integers=()):
        self._randoms = list(randoms)
        self._integers = list(integers)

    def random(self, size=None):
        if size is None:
            return self._randoms.pop(0)
        return np.array([self._randoms.pop(0) for _ in range(size)])

    def integers(self, *args, **kwargs):
        return self._integers.pop(0)
