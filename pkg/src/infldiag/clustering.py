"""Two-group row clustering: the screening stage of the ClusMIP detector.

Rows of the joint (y, X) matrix are split into a smaller "suspect" group and
a larger "clean" group by k-means (random or ++ init) or spectral clustering.
Clustering runs on the raw joint rows by default: contamination signals live
in the columns' original scales, and rescaling each column by a scale the
contamination itself inflated can bury them (see ``standardize`` flag).
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.sparse.csgraph import connected_components

from .data import Dataset, RowSubset, canonical_order, content_seed
from .errors import AmbiguousEmbeddingError, DegenerateClusterError, InvalidSpecError

METHODS = ("kmeans", "kmeans_pp", "spectral")


@dataclass(frozen=True)
class ClusterPartition:
    """A 2-way split with the strictly smaller group marked suspect."""

    labels: np.ndarray  # values in {1, 2}, aligned with the input row order
    suspect: RowSubset
    clean: RowSubset
    method_id: str
    inertia: float
    seed: int

    def __post_init__(self):
        if len(self.suspect) >= len(self.clean):
            raise DegenerateClusterError("suspect group must be strictly smaller")


class _EmptyCluster(Exception):
    pass


def _pairwise_sq(points, centers):
    return ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def kmeans_pp_init(points, k, rng):
    """D^2-weighted center seeding.

    Returns (centers, degenerate) where degenerate flags an all-identical
    point set whose later centers are forced duplicates.
    """
    n = points.shape[0]
    if n < k:
        raise InvalidSpecError(f"cannot place {k} centers on {n} points")
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    degenerate = False
    for c in range(1, k):
        d2 = _pairwise_sq(points, centers[:c]).min(axis=1)
        total = d2.sum()
        if total <= 0.0:
            centers[c] = centers[0]
            degenerate = True
            continue
        centers[c] = points[rng.choice(n, p=d2 / total)]
    return centers, degenerate


def _lloyd(points, centers, max_iter=300):
    """Lloyd iterations to an assignment fixed point.

    Raises _EmptyCluster if a cluster empties out. Inertia is checked to be
    non-increasing across iterations.
    """
    k = centers.shape[0]
    labels = None
    prev_inertia = np.inf
    centers = centers.copy()
    for _ in range(max_iter):
        d2 = _pairwise_sq(points, centers)
        new_labels = d2.argmin(axis=1)
        inertia = float(d2[np.arange(points.shape[0]), new_labels].sum())
        if inertia > prev_inertia * (1.0 + 1e-12) + 1e-12:
            raise AssertionError("k-means inertia increased across an iteration")
        prev_inertia = inertia
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            mask = labels == c
            if not mask.any():
                raise _EmptyCluster
            centers[c] = points[mask].mean(axis=0)
    # inertia at the fixed point, with final centers
    d2 = _pairwise_sq(points, centers)
    inertia = float(d2[np.arange(points.shape[0]), labels].sum())
    return labels, inertia


def kmeans(points, k=2, restarts=10, rng=None, init="kmeans_pp"):
    """Best-of-restarts k-means. Ties in inertia keep the earlier restart.

    An emptied cluster re-seeds its restart up to 5 times before the whole
    call is declared degenerate.
    """
    if points.shape[0] < k:
        raise InvalidSpecError(f"need at least {k} rows")
    rng = rng or np.random.default_rng()
    best = None
    for r in range(restarts):
        for _attempt in range(5):
            if init == "kmeans_pp":
                centers, degenerate = kmeans_pp_init(points, k, rng)
                if degenerate:
                    raise DegenerateClusterError("all rows identical")
            else:
                idx = rng.choice(points.shape[0], size=k, replace=False)
                centers = points[idx].copy()
            try:
                labels, inertia = _lloyd(points, centers)
                break
            except _EmptyCluster:
                continue
        else:
            raise DegenerateClusterError("cluster emptied out in every re-seed attempt")
        if best is None or inertia < best[0]:
            best = (inertia, labels)
    return best[1], best[0]


def _knn_affinity(points, n_neighbors):
    n = points.shape[0]
    d2 = _pairwise_sq(points, points)
    np.fill_diagonal(d2, np.inf)
    order = np.argsort(d2, axis=1, kind="stable")[:, :n_neighbors]
    a = np.zeros((n, n))
    rows = np.repeat(np.arange(n), n_neighbors)
    a[rows, order.ravel()] = 1.0
    return np.maximum(a, a.T)


def spectral_embedding(points, n_neighbors):
    """Two smallest-eigenvalue eigenvectors of the symmetric normalized
    Laplacian of the symmetrized kNN graph."""
    n = points.shape[0]
    if n_neighbors >= n:
        raise InvalidSpecError(f"n_neighbors={n_neighbors} must be < n={n}")
    a = _knn_affinity(points, n_neighbors)
    ncomp, _ = connected_components(a, directed=False)
    if ncomp > 2:
        raise AmbiguousEmbeddingError(
            f"neighbor graph has {ncomp} components; increase n_neighbors"
        )
    deg = a.sum(axis=1)
    dinv = 1.0 / np.sqrt(np.maximum(deg, 1e-300))
    lap = np.eye(n) - dinv[:, None] * a * dinv[None, :]
    _, vecs = linalg.eigh(lap, subset_by_index=[0, 1])
    return vecs


def cluster_rows(data: Dataset, method="kmeans_pp", seed=0, restarts=10,
                 n_neighbors=None, standardize=False, x_only=False) -> ClusterPartition:
    """Partition a dataset's rows into suspect and clean groups.

    Operates on the joint (y, X) rows (``x_only`` drops y). Rows are
    processed in canonical (row-id) order with a content-derived RNG seed, so
    the partition does not depend on the order rows arrive in.
    """
    if method not in METHODS:
        raise InvalidSpecError(f"unknown clustering method {method!r}")
    if data.n < 4:
        raise InvalidSpecError("need at least 4 rows to partition")
    can, order = canonical_order(data)
    pts = can.x.copy() if x_only else np.column_stack([can.y, can.x])
    if standardize:
        mu = pts.mean(axis=0)
        sd = pts.std(axis=0)
        pts = (pts - mu) / np.where(sd > 0, sd, 1.0)
    rng_seed = content_seed(seed, can.row_ids, tag=b"cluster")
    rng = np.random.default_rng(rng_seed)

    if method == "spectral":
        if n_neighbors is None:
            n_neighbors = int(np.ceil(np.sqrt(can.n)))
        emb = spectral_embedding(pts, n_neighbors)
        labels_can, inertia = kmeans(emb, 2, restarts=restarts, rng=rng)
    else:
        init = "kmeans_pp" if method == "kmeans_pp" else "random"
        labels_can, inertia = kmeans(pts, 2, restarts=restarts, rng=rng, init=init)

    sizes = np.bincount(labels_can, minlength=2)
    if sizes[0] == sizes[1]:
        # tie: the group farther from the global centroid is suspect
        centroid = pts.mean(axis=0)
        dist = ((pts - centroid) ** 2).sum(axis=1)
        mean_d = [dist[labels_can == c].mean() for c in (0, 1)]
        suspect_label = int(np.argmax(mean_d))
    else:
        suspect_label = int(np.argmin(sizes))

    # map canonical labels back to the input row order
    labels = np.empty(data.n, dtype=np.int64)
    labels[order] = np.where(labels_can == suspect_label, 1, 2)
    suspect = RowSubset(tuple(int(i) + 1 for i in np.nonzero(labels == 1)[0]))
    clean = RowSubset(tuple(int(i) + 1 for i in np.nonzero(labels == 2)[0]))
    return ClusterPartition(
        labels=labels,
        suspect=suspect,
        clean=clean,
        method_id=method,
        inertia=inertia,
        seed=rng_seed,
    )
