"""Dataset container with stable row identities and column standardization.

Rows keep their original (1-based) identifiers through every subsetting
operation so that downstream detection output can be reported against the
indices of the data as it was loaded.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import ColumnDegenerateError, InvalidSubsetError

# Smallest dataset any operation is allowed to produce. Influence measures
# additionally require n >= 3 and check that themselves.
MIN_ROWS = 2


def _freeze(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Dataset:
    """Immutable (y, X) pair with per-row identifiers.

    y : shape (n,) response vector
    x : shape (n, p) predictor matrix
    row_ids : shape (n,) unique integer identifiers, 1-based on ingestion
    """

    y: np.ndarray
    x: np.ndarray
    row_ids: np.ndarray

    def __post_init__(self):
        y = _freeze(np.asarray(self.y, dtype=np.float64).ravel())
        x = _freeze(np.atleast_2d(np.asarray(self.x, dtype=np.float64)))
        rid = np.asarray(self.row_ids, dtype=np.int64).ravel()
        rid.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "row_ids", rid)
        if x.shape[0] != y.shape[0] or rid.shape[0] != y.shape[0]:
            raise InvalidSubsetError(
                f"inconsistent row counts: y={y.shape[0]}, x={x.shape[0]}, "
                f"row_ids={rid.shape[0]}"
            )
        if len(np.unique(rid)) != rid.shape[0]:
            raise InvalidSubsetError("row_ids must be unique")
        if y.shape[0] < 1 or x.shape[1] < 1:
            raise InvalidSubsetError("dataset needs at least one row and one column")

    @property
    def n(self):
        return self.y.shape[0]

    @property
    def p(self):
        return self.x.shape[1]

    @classmethod
    def from_arrays(cls, y, x, row_ids=None):
        y = np.asarray(y, dtype=np.float64).ravel()
        if row_ids is None:
            row_ids = np.arange(1, y.shape[0] + 1)
        return cls(y=y, x=x, row_ids=np.asarray(row_ids))

    def position_of(self, row_id):
        """1-based position of a row id in this dataset."""
        hits = np.nonzero(self.row_ids == row_id)[0]
        if hits.size != 1:
            raise InvalidSubsetError(f"row id {row_id} not present")
        return int(hits[0]) + 1


@dataclass(frozen=True)
class RowSubset:
    """Ordered set of 1-based row positions into a Dataset."""

    indices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        idx = tuple(sorted(int(i) for i in self.indices))
        if len(set(idx)) != len(idx):
            raise InvalidSubsetError(f"duplicate indices in subset: {self.indices}")
        object.__setattr__(self, "indices", idx)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def complement(self, n):
        return RowSubset(tuple(sorted(set(range(1, n + 1)) - set(self.indices))))


@dataclass(frozen=True)
class StandardizationInfo:
    """Column means and population (divide-by-n) standard deviations."""

    column_means: np.ndarray
    column_scales: np.ndarray

    def to_original(self, beta_std, intercept_std):
        """Map coefficients fit on standardized predictors back to the
        original scale. ``intercept_std`` is the intercept of the
        standardized-problem fit (the response is never rescaled)."""
        beta = np.asarray(beta_std) / self.column_scales
        intercept = intercept_std - float(beta @ self.column_means)
        return beta, intercept


def subset(data: Dataset, rows: RowSubset) -> Dataset:
    """Rows of ``data`` selected by 1-based positions, in ascending original
    order, with row identities preserved."""
    if not isinstance(rows, RowSubset):
        rows = RowSubset(tuple(rows))
    idx = np.asarray(rows.indices, dtype=np.int64)
    if idx.size == 0:
        raise InvalidSubsetError("empty subset")
    if idx.min() < 1 or idx.max() > data.n:
        raise InvalidSubsetError(
            f"subset positions {rows.indices} out of range for n={data.n}"
        )
    if idx.size < MIN_ROWS:
        raise InvalidSubsetError(
            f"subset of {idx.size} row(s) is below the {MIN_ROWS}-row minimum"
        )
    z = idx - 1
    return Dataset(y=data.y[z], x=data.x[z, :], row_ids=data.row_ids[z])


def drop_one(data: Dataset, i: int) -> Dataset:
    """Dataset with the i-th (1-based) row removed."""
    if not 1 <= i <= data.n:
        raise InvalidSubsetError(f"row position {i} out of range for n={data.n}")
    if data.n - 1 < MIN_ROWS:
        raise InvalidSubsetError(
            f"dropping a row from n={data.n} would leave fewer than {MIN_ROWS} rows"
        )
    keep = np.arange(data.n) != (i - 1)
    return Dataset(y=data.y[keep], x=data.x[keep, :], row_ids=data.row_ids[keep])


def drop_row_id(data: Dataset, row_id: int) -> Dataset:
    return drop_one(data, data.position_of(row_id))


def column_stats(x):
    """Means and population standard deviations of the columns of x."""
    means = x.mean(axis=0)
    scales = x.std(axis=0)  # ddof=0: population scale
    return means, scales


def standardize_columns(data: Dataset):
    """Center each predictor column and scale it to unit population variance.

    Returns the standardized dataset plus the information needed to undo the
    transform. Zero-variance columns are a hard error because coordinate
    descent cannot assign them a meaningful coefficient.
    """
    means, scales = column_stats(data.x)
    bad = np.nonzero(scales <= 0.0)[0]
    if bad.size:
        raise ColumnDegenerateError(columns=(bad + 1).tolist())
    xs = (data.x - means) / scales
    out = Dataset(y=data.y, x=xs, row_ids=data.row_ids)
    return out, StandardizationInfo(column_means=means, column_scales=scales)


def canonical_order(data: Dataset):
    """Dataset reordered by ascending row id, plus the positions used.

    All stochastic and iterative computations run on this canonical view so
    that results are exactly invariant to the order rows arrive in.
    """
    order = np.argsort(data.row_ids, kind="stable")
    if np.array_equal(order, np.arange(data.n)):
        return data, order
    return (
        Dataset(y=data.y[order], x=data.x[order, :], row_ids=data.row_ids[order]),
        order,
    )


def content_seed(master_seed, row_ids, tag=b""):
    """Deterministic 63-bit seed derived from a master seed and the *set* of
    row ids, independent of row order. Used wherever an RNG touches a data
    subset, so row permutations cannot change stochastic choices."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(master_seed).to_bytes(8, "little", signed=True))
    h.update(tag)
    ids = np.sort(np.asarray(row_ids, dtype=np.int64))
    h.update(ids.tobytes())
    return int.from_bytes(h.digest(), "little") >> 1
