"""Monte Carlo study of eigenvector recovery with redundant variables.

Four base variables are drawn jointly normal, independently in each of the
four feature channels; two more are exact sums of base pairs, so the
population correlation matrix has rank 4. Each repeat fits a pseudo-PCA and
compares its eigenvectors with the population ones.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .eigen import EigenDecomposition, orient_signs, symmetric_eigen
from .errors import DimensionMismatch, NotUnitNorm, OhlcPcaError
from .ppca import fit
from .space import CHANNELS, FeatureMatrix

ZERO_EIGENVALUE_TOL = 1e-8
DEGENERACY_TOL = 1e-8
UNIT_NORM_TOL = 1e-8


@dataclass(frozen=True)
class StructuralModel:
    stds: tuple = (1.0, 2.0, 3.0, 4.0)
    pairwise_cov: float = 0.25
    redundancies: tuple = ((0, 1), (2, 3))

    def base_covariance(self) -> np.ndarray:
        s = np.asarray(self.stds, dtype=float)
        cov = np.full((s.size, s.size), float(self.pairwise_cov))
        np.fill_diagonal(cov, s ** 2)
        return cov

    def mixing(self) -> np.ndarray:
        """Matrix mapping base variables to all variables (identity rows, then sums)."""
        k = len(self.stds)
        rows = [np.eye(k)[i] for i in range(k)]
        for pair in self.redundancies:
            row = np.zeros(k)
            row[list(pair)] = 1.0
            rows.append(row)
        return np.array(rows)

    @property
    def p(self) -> int:
        return len(self.stds) + len(self.redundancies)

    @property
    def labels(self) -> tuple:
        return tuple(f"Y{j + 1}" for j in range(self.p))


def generate_sample(model: StructuralModel, n: int, seed: int) -> FeatureMatrix:
    """Draw an ``n x p`` feature matrix; same ``(n, seed)`` gives the same bits."""
    if n < 5:
        raise ValueError(f"n must be at least 5, got {n}")
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(model.base_covariance())
    k = len(model.stds)
    z = rng.standard_normal((CHANNELS, n, k))
    base = z @ chol.T
    full = base @ model.mixing().T
    values = np.transpose(full, (1, 2, 0))
    return FeatureMatrix(values, tuple(str(i + 1) for i in range(n)), model.labels)


def theoretical_correlation(model: StructuralModel):
    """Population correlation matrix and its eigendecomposition."""
    a = model.mixing()
    cov = a @ model.base_covariance() @ a.T
    s = np.sqrt(np.diag(cov))
    w = cov / np.outer(s, s)
    w = (w + w.T) / 2.0
    np.fill_diagonal(w, 1.0)
    return w, orient_signs(symmetric_eigen(w))


def mape(estimated, truth) -> float:
    """Percentage error ``|u_hat - u| / |u| * 100`` after sign alignment."""
    u_hat = np.asarray(estimated, dtype=float)
    u = np.asarray(truth, dtype=float)
    if u_hat.shape != u.shape or u.ndim != 1:
        raise DimensionMismatch(f"shapes {u_hat.shape} and {u.shape} differ")
    for name, vec in (("estimated", u_hat), ("truth", u)):
        if abs(np.linalg.norm(vec) - 1.0) > UNIT_NORM_TOL:
            raise NotUnitNorm(f"{name} vector has norm {np.linalg.norm(vec):.6g}")
    if u_hat @ u < 0:
        u_hat = -u_hat
    return float(np.linalg.norm(u_hat - u) / np.linalg.norm(u) * 100.0)


def eigenspace_groups(eigenvalues, tol: float = DEGENERACY_TOL) -> list:
    """Index groups of consecutive (sorted) eigenvalues equal within ``tol``."""
    ev = np.asarray(eigenvalues, dtype=float)
    groups = [[0]]
    for h in range(1, ev.size):
        if abs(ev[h] - ev[groups[-1][-1]]) <= tol:
            groups[-1].append(h)
        else:
            groups.append([h])
    return groups


def eigenvector_mape(estimated, truth: EigenDecomposition,
                     tol: float = DEGENERACY_TOL) -> np.ndarray:
    """Per-component MAPE of estimated eigenvectors (columns) against ``truth``.

    Inside a repeated theoretical eigenvalue the estimated basis is first
    rotated onto the theoretical one by orthogonal Procrustes.
    """
    u_hat = np.asarray(estimated, dtype=float)
    u = np.asarray(truth.eigenvectors, dtype=float)
    if u_hat.shape != u.shape:
        raise DimensionMismatch(f"shapes {u_hat.shape} and {u.shape} differ")
    out = np.empty(u.shape[1])
    for group in eigenspace_groups(truth.eigenvalues, tol):
        if len(group) == 1:
            h = group[0]
            out[h] = mape(u_hat[:, h], u[:, h])
            continue
        left, _, right = np.linalg.svd(u_hat[:, group].T @ u[:, group])
        aligned = u_hat[:, group] @ (left @ right)
        for k, h in enumerate(group):
            out[h] = np.linalg.norm(aligned[:, k] - u[:, h]) / np.linalg.norm(u[:, h]) * 100.0
    return out


@dataclass(frozen=True)
class SimConfig:
    sample_sizes: tuple = (50, 100, 150, 200)
    repeats: int = 300
    seed: int = 42
    component_count: int = 4

    def __post_init__(self):
        sizes = (self.sample_sizes,) if np.isscalar(self.sample_sizes) else self.sample_sizes
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in sizes))
        if not self.sample_sizes or min(self.sample_sizes) < 5:
            raise ValueError("every sample size must be at least 5")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")


@dataclass(frozen=True)
class SizeSummary:
    """Aggregates over the repeats for one sample size.

    MAPE means are in percent; standard deviations are fractions (percent
    divided by 100), computed across repeats with the ``n - 1`` divisor.
    """

    n: int
    mape_mean: np.ndarray
    mape_sd: np.ndarray
    overall_mean: float
    overall_sd: float
    q_mean: float
    q_values: np.ndarray
    zero_eigenvalue_counts: tuple
    eigenvalue_mean: np.ndarray
    failures: tuple = ()


@dataclass(frozen=True)
class SimReport:
    config: SimConfig
    theoretical_eigenvalues: np.ndarray
    sizes: tuple = field(default=())

    def by_size(self, n: int) -> SizeSummary:
        for s in self.sizes:
            if s.n == n:
                return s
        raise KeyError(n)


def _sd(x: np.ndarray):
    if x.shape[0] < 2:
        return np.zeros_like(x[0]) if x.shape[0] else np.nan
    return np.std(x, axis=0, ddof=1)


def run_study(config: SimConfig = SimConfig(),
              model: StructuralModel = StructuralModel()) -> SimReport:
    """Run every repeat for every sample size and aggregate.

    Repeat ``r`` draws with seed ``config.seed + r``. A repeat whose fit
    raises is recorded in ``failures`` and left out of the aggregates.
    """
    _, truth = theoretical_correlation(model)
    summaries = []
    for n in config.sample_sizes:
        mapes, qs, zeros, evs, failures = [], [], [], [], []
        for r in range(config.repeats):
            try:
                fitted = fit(generate_sample(model, n, config.seed + r))
            except OhlcPcaError as exc:
                failures.append((r, str(exc)))
                continue
            ev = fitted.all_eigenvalues
            mapes.append(eigenvector_mape(fitted.loadings, truth))
            qs.append(float(np.sum(ev[: config.component_count]) / ev.size))
            zeros.append(int(np.sum(ev < ZERO_EIGENVALUE_TOL)))
            evs.append(ev)
        mapes_arr = np.array(mapes).reshape(-1, model.p)
        overall = mapes_arr.mean(axis=1)
        summaries.append(SizeSummary(
            n=n,
            mape_mean=mapes_arr.mean(axis=0),
            mape_sd=_sd(mapes_arr / 100.0),
            overall_mean=float(overall.mean()),
            overall_sd=float(_sd(overall / 100.0)),
            q_mean=float(np.mean(qs)),
            q_values=np.array(qs),
            zero_eigenvalue_counts=tuple(zeros),
            eigenvalue_mean=np.array(evs).mean(axis=0),
            failures=tuple(failures),
        ))
    return SimReport(config, truth.eigenvalues, tuple(summaries))


REPORT_COLUMNS = ("sample_size", "pc_index", "mape_mean_pct", "mape_sd", "q4_mean")


def report_rows(report: SimReport) -> list:
    rows = []
    for s in report.sizes:
        for h in range(s.mape_mean.size):
            rows.append((s.n, str(h + 1), s.mape_mean[h], s.mape_sd[h], s.q_mean))
        rows.append((s.n, "mean", s.overall_mean, s.overall_sd, s.q_mean))
    return rows


def write_report_csv(report: SimReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for n, pc, mean, sd, q in report_rows(report):
            writer.writerow([n, pc, f"{mean:.6g}", f"{sd:.6g}", f"{q:.6g}"])


def write_report(report: SimReport, csv_path, svg_path: Optional[str] = None) -> None:
    """Write the CSV report and, optionally, the cumulative-variance chart of the largest ``n``."""
    from .charts import ChartSpec, render_scree_svg

    write_report_csv(report, csv_path)
    if svg_path is not None:
        largest = max(report.sizes, key=lambda s: s.n)
        spec = ChartSpec(title=f"Cumulative variance contribution (simulation, n={largest.n})")
        with open(svg_path, "w", encoding="utf-8") as fh:
            fh.write(render_scree_svg(np.clip(largest.eigenvalue_mean, 0.0, None), spec))

