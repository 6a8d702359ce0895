"""Pseudo principal component analysis of feature matrices.

Components are eigenvectors of the correlation matrix of the feature
columns. A component's scores are the same linear combination applied to
the (standardized) feature series, so each score is itself a feature vector
and maps back to an OHLC bar.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .eigen import EigenDecomposition, orient_signs, symmetric_eigen
from .errors import ComponentsOutOfRange, EmptySeries, LabelMismatch, NonFinite
from .ohlc import bar_direction, from_features
from .space import (
    FeatureMatrix,
    SummaryStats,
    apply_standardization,
    corr_matrix,
    linear_combination,
    standardize,
)


@dataclass(frozen=True)
class PseudoPcModel:
    """A fitted pseudo-PCA.

    Attributes
    ----------
    loadings : ndarray, shape (p, m)
        Column ``h`` holds the sign-oriented weights of component ``h``.
    eigenvalues : ndarray, shape (m,)
    all_eigenvalues : ndarray, shape (p,)
        The full spectrum of the correlation matrix, for scree output.
    stats : SummaryStats
        Standardization fitted on the training matrix.
    column_labels : tuple of str
    correlation : ndarray, shape (p, p)
    """

    loadings: np.ndarray
    eigenvalues: np.ndarray
    all_eigenvalues: np.ndarray
    stats: SummaryStats
    column_labels: tuple
    correlation: np.ndarray

    @property
    def p(self) -> int:
        return self.loadings.shape[0]

    @property
    def m(self) -> int:
        return self.loadings.shape[1]

    @property
    def variance_contribution(self) -> np.ndarray:
        return self.eigenvalues / self.p

    @property
    def cumulative_contribution(self) -> np.ndarray:
        return np.cumsum(self.eigenvalues) / self.p

    @property
    def component_labels(self) -> tuple:
        return tuple(f"PC{h + 1}" for h in range(self.m))


def cumulative_contribution(eigenvalues) -> np.ndarray:
    """Running share of the total, ``Q_m = sum(lambda_1..lambda_m) / p``.

    ``p`` is the number of eigenvalues, which equals their sum for a
    correlation matrix.
    """
    ev = np.asarray(eigenvalues, dtype=float)
    if ev.size == 0:
        raise EmptySeries("no eigenvalues")
    return np.cumsum(ev) / ev.size


def fit(m: FeatureMatrix, components: Optional[int] = None, *,
        standardized: bool = False) -> PseudoPcModel:
    """Fit a pseudo-PCA with ``components`` retained components.

    Parameters
    ----------
    m : FeatureMatrix
        At least two observations, no constant column.
    components : int, optional
        Defaults to all ``p``.
    standardized : bool
        Treat ``m`` as already standardized: skip re-centering/scaling and
        score the values as given. The correlation matrix is the same either
        way.
    """
    p = m.p
    if components is None:
        components = p
    if not 1 <= components <= p:
        raise ComponentsOutOfRange(f"components must be in [1, {p}], got {components}")
    if m.n < 2:
        raise EmptySeries(f"need at least 2 observations, got {m.n}")
    if standardized:
        w, _ = corr_matrix(m)
        stats = SummaryStats.identity(p, m.column_labels)
    else:
        y, stats = standardize(m)
        w, _ = corr_matrix(y)
    dec = orient_signs(symmetric_eigen(w))
    return PseudoPcModel(
        loadings=dec.eigenvectors[:, :components].copy(),
        eigenvalues=dec.eigenvalues[:components].copy(),
        all_eigenvalues=dec.eigenvalues.copy(),
        stats=stats,
        column_labels=m.column_labels,
        correlation=w,
    )


def decomposition(model: PseudoPcModel) -> EigenDecomposition:
    return EigenDecomposition(model.eigenvalues, model.loadings)


@dataclass(frozen=True)
class ScoreMatrix:
    """``values`` has shape ``(n, m, 4)``: one feature vector per observation and component."""

    values: np.ndarray
    row_labels: tuple
    component_labels: tuple

    def column(self, h: int) -> np.ndarray:
        return self.values[:, h, :]


def scores(model: PseudoPcModel, m: FeatureMatrix) -> ScoreMatrix:
    """Component scores of ``m`` under the model's stored standardization."""
    if m.column_labels != model.column_labels:
        raise LabelMismatch(
            f"columns {m.column_labels} do not match model {model.column_labels}"
        )
    y = apply_standardization(m, model.stats).columns()
    cols = [linear_combination(model.loadings[:, h], y) for h in range(model.m)]
    return ScoreMatrix(np.stack(cols, axis=1), m.row_labels, model.component_labels)


@dataclass(frozen=True)
class OhlcScores:
    """Scores mapped back to bars.

    ``bars`` has shape ``(n, m, 4)`` in OHLC order; ``directions`` holds
    ``"bull"``, ``"bear"`` or ``"flat"`` per cell.
    """

    bars: np.ndarray
    directions: tuple
    row_labels: tuple
    component_labels: tuple

    def component(self, h: int) -> np.ndarray:
        return self.bars[:, h, :]


def scores_to_ohlc(s: ScoreMatrix) -> OhlcScores:
    if not np.all(np.isfinite(s.values)):
        raise NonFinite("score matrix has non-finite cells")
    bars = from_features(s.values)
    directions = tuple(
        tuple(bar_direction(bars[i, h, 0], bars[i, h, 3]) for h in range(bars.shape[1]))
        for i in range(bars.shape[0])
    )
    return OhlcScores(bars, directions, s.row_labels, s.component_labels)
