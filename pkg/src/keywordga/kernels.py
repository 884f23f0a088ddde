"""Hot numeric kernels behind the k-NN classifier.

Two interchangeable backends compute exactly the same numbers:

* ``numba``: @njit compiled loops, the default whenever numba imports
* ``numpy``: vectorized fallback whose distance accumulation runs
  feature by feature so the floating-point op order (and therefore
  every bit of the result) matches the compiled loops

Select explicitly with the ``KEYWORDGA_BACKEND`` environment variable
("auto", "numba" or "numpy"); the value is read once, at first kernel
use. ``benchmarks/bench_knn.py`` times both paths side by side.
"""

import os

import numpy as np

from .errors import ConfigError, InputError

ENV_BACKEND = "KEYWORDGA_BACKEND"

try:
    import numba
except ImportError:  # pragma: no cover - exercised via backend forcing tests
    numba = None

_BACKEND = None


def backend_name() -> str:
    """Resolve and cache the active kernel backend."""
    global _BACKEND
    if _BACKEND is None:
        choice = os.environ.get(ENV_BACKEND, "auto").strip().lower() or "auto"
        if choice not in ("auto", "numba", "numpy"):
            raise ConfigError(
                f"{ENV_BACKEND} must be 'auto', 'numba' or 'numpy', got {choice!r}"
            )
        if choice == "numba" and numba is None:
            raise ConfigError("numba backend requested but numba is not installed")
        if choice == "auto":
            choice = "numpy" if numba is None else "numba"
        _BACKEND = choice
    return _BACKEND


def _sqdist_numpy(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    out = np.zeros((queries.shape[0], points.shape[0]), dtype=np.float64)
    # accumulate per feature: same fp op order as the jit kernel
    for f in range(queries.shape[1]):
        d = queries[:, f, None] - points[None, :, f]
        out += d * d
    return out


def _predict_numpy(
    sqdist: np.ndarray, labels: np.ndarray, n_categories: int, k: int
) -> np.ndarray:
    nq = sqdist.shape[0]
    rows = np.arange(nq)
    # stable sort = (distance, column position) order
    order = np.argsort(sqdist, axis=1, kind="stable")[:, :k]
    neighbors = labels[order]
    votes = np.zeros((nq, n_categories), dtype=np.int64)
    first_pos = np.full((nq, n_categories), k, dtype=np.int64)
    for j in range(k - 1, -1, -1):
        first_pos[rows, neighbors[:, j]] = j
    for j in range(k):
        votes[rows, neighbors[:, j]] += 1
    tie_key = first_pos * n_categories + np.arange(n_categories)[None, :]
    tie_key = np.where(
        votes == votes.max(axis=1)[:, None], tie_key, np.iinfo(np.int64).max
    )
    return tie_key.argmin(axis=1).astype(np.int64)


if numba is not None:

    @numba.njit(cache=True, nogil=True)
    def _sqdist_numba(queries, points):  # pragma: no cover - compiled
        nq, nf = queries.shape
        npts = points.shape[0]
        out = np.empty((nq, npts), dtype=np.float64)
        for i in range(nq):
            for j in range(npts):
                acc = 0.0
                for f in range(nf):
                    d = queries[i, f] - points[j, f]
                    acc += d * d
                out[i, j] = acc
        return out

    @numba.njit(cache=True, nogil=True)
    def _predict_numba(sqdist, labels, n_categories, k):  # pragma: no cover
        nq, nt = sqdist.shape
        out = np.empty(nq, dtype=np.int64)
        used = np.zeros(nt, dtype=np.bool_)
        votes = np.zeros(n_categories, dtype=np.int64)
        first_pos = np.zeros(n_categories, dtype=np.int64)
        for i in range(nq):
            for t in range(nt):
                used[t] = False
            for c in range(n_categories):
                votes[c] = 0
                first_pos[c] = k
            for j in range(k):
                best_t = -1
                best_d = np.inf
                for t in range(nt):
                    # strict < keeps the lowest column on distance ties
                    if not used[t] and sqdist[i, t] < best_d:
                        best_d = sqdist[i, t]
                        best_t = t
                used[best_t] = True
                cat = labels[best_t]
                votes[cat] += 1
                if first_pos[cat] == k:
                    first_pos[cat] = j
            top = 0
            for c in range(n_categories):
                if votes[c] > top:
                    top = votes[c]
            winner = -1
            winner_key = (k + 1) * n_categories
            for c in range(n_categories):
                if votes[c] == top:
                    key = first_pos[c] * n_categories + c
                    if key < winner_key:
                        winner_key = key
                        winner = c
            out[i] = winner
        return out


def squared_distances(queries: np.ndarray, points: np.ndarray) -> np.ndarray:
    """All-pairs squared Euclidean distances; rows index the queries."""
    q = np.ascontiguousarray(queries, dtype=np.float64)
    p = np.ascontiguousarray(points, dtype=np.float64)
    if q.ndim != 2 or p.ndim != 2 or q.shape[1] != p.shape[1]:
        raise InputError(
            f"distance inputs must be 2-D with one feature width, "
            f"got {q.shape} vs {p.shape}"
        )
    if backend_name() == "numba":
        return _sqdist_numba(q, p)
    return _sqdist_numpy(q, p)


def predict_labels(
    sqdist: np.ndarray, labels: np.ndarray, n_categories: int, k: int
) -> np.ndarray:
    """Majority label of the k nearest points for every query row.

    Neighbor order is (distance, column position); vote ties go to the
    category of the nearest tied neighbor, then to the lower category
    index.
    """
    d = np.ascontiguousarray(sqdist, dtype=np.float64)
    lab = np.ascontiguousarray(labels, dtype=np.int64)
    if d.ndim != 2 or lab.shape != (d.shape[1],):
        raise InputError("need one label per sqdist column")
    if not 1 <= k <= d.shape[1]:
        raise InputError(f"k must be in [1, {d.shape[1]}], got {k}")
    if backend_name() == "numba":
        return _predict_numba(d, lab, n_categories, k)
    return _predict_numpy(d, lab, n_categories, k)
