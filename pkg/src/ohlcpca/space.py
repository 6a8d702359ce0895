"""Vector-space algebra and sample statistics over feature series.

A *series* is an ``(n, 4)`` array: one feature vector per observation. The
space of such series carries elementwise addition, scalar multiplication and
an inner product that sums over observations *and* the four channels. All
second moments use the ``1 / (4 n)`` normalisation, so the variance of a
series is the average squared deviation over its ``4 n`` scalar entries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import EmptySeries, LabelMismatch, LengthMismatch, NonFinite, ZeroVariance

CHANNELS = 4


def as_series(a) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim == 1 and arr.shape[0] == CHANNELS:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != CHANNELS:
        raise ValueError(f"a feature series must have shape (n, 4), got {arr.shape}")
    return arr


def _pair(a, b):
    a, b = as_series(a), as_series(b)
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"series lengths differ: {a.shape[0]} vs {b.shape[0]}")
    return a, b


def zero_series(n: int) -> np.ndarray:
    return np.zeros((n, CHANNELS))


def series_add(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    return a + b


def series_scale(beta: float, a) -> np.ndarray:
    return float(beta) * as_series(a)


def series_subtract(a, b) -> np.ndarray:
    return series_add(a, series_scale(-1.0, b))


def series_inner(a, b) -> float:
    """Inner product: sum over observations and channels of ``a * b``."""
    a, b = _pair(a, b)
    return float(np.sum(a * b))


def linear_combination(coefficients: Sequence[float], series: Sequence) -> np.ndarray:
    """``c_1 * Y_1 + ... + c_p * Y_p`` built from the space operators."""
    if len(coefficients) != len(series):
        raise LengthMismatch(
            f"{len(coefficients)} coefficients for {len(series)} series"
        )
    if not series:
        raise EmptySeries("no series to combine")
    terms = [series_scale(c, s) for c, s in zip(coefficients, series)]
    return reduce(series_add, terms)


def sample_mean(a) -> np.ndarray:
    a = as_series(a)
    if a.shape[0] == 0:
        raise EmptySeries("sample mean of an empty series")
    return a.mean(axis=0)


def sample_cov(a, b) -> float:
    a, b = _pair(a, b)
    n = a.shape[0]
    if n == 0:
        raise EmptySeries("covariance of empty series")
    return series_inner(a - sample_mean(a), b - sample_mean(b)) / (CHANNELS * n)


def sample_var(a) -> float:
    return sample_cov(a, a)


def _is_constant(var: float, values: np.ndarray) -> bool:
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return var <= (16.0 * np.finfo(float).eps * scale) ** 2


def sample_corr(a, b) -> float:
    a, b = _pair(a, b)
    va, vb = sample_var(a), sample_var(b)
    if _is_constant(va, a):
        raise ZeroVariance("a")
    if _is_constant(vb, b):
        raise ZeroVariance("b")
    return sample_cov(a, b) / np.sqrt(va * vb)


@dataclass(frozen=True)
class FeatureMatrix:
    """``n`` observations by ``p`` variables, each cell a feature vector.

    ``values`` has shape ``(n, p, 4)``; ``column(j)`` is the series ``Y_j``.
    """

    values: np.ndarray
    row_labels: tuple = ()
    column_labels: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 3 or v.shape[2] != CHANNELS:
            raise ValueError(f"feature matrix must have shape (n, p, 4), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise NonFinite("feature matrix contains non-finite values")
        n, p, _ = v.shape
        rows = tuple(self.row_labels) or tuple(str(i + 1) for i in range(n))
        cols = tuple(self.column_labels) or tuple(f"Y{j + 1}" for j in range(p))
        if len(rows) != n or len(cols) != p:
            raise LabelMismatch(
                f"got {len(rows)} row and {len(cols)} column labels for a {n}x{p} matrix"
            )
        if len(set(rows)) != n or len(set(cols)) != p:
            raise LabelMismatch("labels must be unique within each axis")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "column_labels", cols)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j, :]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.p)]


@dataclass(frozen=True)
class SummaryStats:
    """Per-column mean vectors ``(p, 4)`` and standard deviations ``(p,)``."""

    means: np.ndarray
    stds: np.ndarray
    column_labels: tuple = field(default=())

    @property
    def variances(self) -> np.ndarray:
        return self.stds ** 2

    @classmethod
    def identity(cls, p: int, column_labels=()) -> "SummaryStats":
        return cls(np.zeros((p, CHANNELS)), np.ones(p), tuple(column_labels))


def summary_stats(m: FeatureMatrix) -> SummaryStats:
    means = m.values.mean(axis=0)
    centered = m.values - means
    var = np.einsum("ijc,ijc->j", centered, centered) / (CHANNELS * m.n)
    for j, label in enumerate(m.column_labels):
        if _is_constant(var[j], m.values[:, j, :]):
            raise ZeroVariance(label)
    return SummaryStats(means, np.sqrt(var), m.column_labels)


def cov_matrix(m: FeatureMatrix) -> np.ndarray:
    """``p x p`` matrix of sample covariances between columns."""
    centered = m.values - m.values.mean(axis=0)
    sigma = np.einsum("ijc,ikc->jk", centered, centered) / (CHANNELS * m.n)
    return (sigma + sigma.T) / 2.0


def corr_matrix(m: FeatureMatrix):
    """Correlation and covariance matrices of the columns of ``m``.

    Returns
    -------
    corr : ndarray, shape (p, p)
        Symmetric with an exact unit diagonal.
    cov : ndarray, shape (p, p)

    Raises
    ------
    ZeroVariance
        If any column is constant; the error names the column.
    """
    sigma = cov_matrix(m)
    for j, label in enumerate(m.column_labels):
        if _is_constant(sigma[j, j], m.values[:, j, :]):
            raise ZeroVariance(label)
    s = np.sqrt(np.diag(sigma))
    w = sigma / np.outer(s, s)
    w = np.clip((w + w.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(w, 1.0)
    return w, sigma


def apply_standardization(m: FeatureMatrix, stats: SummaryStats) -> FeatureMatrix:
    if stats.column_labels and tuple(stats.column_labels) != m.column_labels:
        raise LabelMismatch(
            f"columns {m.column_labels} do not match fitted {stats.column_labels}"
        )
    if stats.means.shape != (m.p, CHANNELS):
        raise LabelMismatch(f"stats for {stats.means.shape[0]} columns, matrix has {m.p}")
    values = (m.values - stats.means) / stats.stds[None, :, None]
    return FeatureMatrix(values, m.row_labels, m.column_labels)


def standardize(m: FeatureMatrix):
    """Center each column by its mean vector and scale by its scalar std.

    Returns the standardized matrix and the :class:`SummaryStats` used.
    """
    stats = summary_stats(m)
    return apply_standardization(m, stats), stats
