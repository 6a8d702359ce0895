"""Cyclic Jacobi eigensolver for real symmetric matrices."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NoConvergence, NotSymmetric

SYMMETRY_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100


class EigenDecomposition(NamedTuple):
    """Eigenvalues in descending order; column ``h`` of ``eigenvectors`` pairs with ``eigenvalues[h]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _max_off_diagonal(a: np.ndarray) -> float:
    if a.shape[0] < 2:
        return 0.0
    return float(np.max(np.abs(a[~np.eye(a.shape[0], dtype=bool)])))


def symmetric_eigen(w, tol: float = OFF_DIAGONAL_TOL,
                    max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Eigen-decompose a symmetric matrix by cyclic Jacobi rotations.

    Sweeps over every upper off-diagonal pair in row order, annihilating each
    with a plane rotation, until every off-diagonal entry is below ``tol`` in
    magnitude.

    Parameters
    ----------
    w : array_like, shape (p, p)
    tol : float
        Absolute convergence threshold on the off-diagonal entries.
    max_sweeps : int

    Returns
    -------
    EigenDecomposition
        Sorted by descending eigenvalue; equal eigenvalues keep their
        diagonal order. Eigenvectors have unit length.

    Raises
    ------
    NotSymmetric
        ``max |w - w.T| > 1e-10``.
    NoConvergence
        The sweep budget ran out; carries the remaining off-diagonal residual.
    """
    a = np.array(w, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NotSymmetric("matrix has non-finite entries")
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > SYMMETRY_TOL:
        raise NotSymmetric(f"matrix is not symmetric (max |w - w.T| = {asym:.3e})")
    a = (a + a.T) / 2.0
    p = a.shape[0]
    v = np.eye(p)

    sweeps = 0
    while _max_off_diagonal(a) >= tol:
        if sweeps == max_sweeps:
            raise NoConvergence(sweeps, _max_off_diagonal(a))
        sweeps += 1
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = a[i, j]
                if abs(aij) < tol / 4:
                    continue
                theta = (a[j, j] - a[i, i]) / (2.0 * aij)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                ci, cj = a[:, i].copy(), a[:, j].copy()
                a[:, i] = c * ci - s * cj
                a[:, j] = s * ci + c * cj
                ri, rj = a[i, :].copy(), a[j, :].copy()
                a[i, :] = c * ri - s * rj
                a[j, :] = s * ri + c * rj
                a[i, j] = a[j, i] = 0.0
                vi, vj = v[:, i].copy(), v[:, j].copy()
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    vectors = v[:, order]
    vectors /= np.linalg.norm(vectors, axis=0)
    return EigenDecomposition(values[order], vectors)


def orient_signs(dec: EigenDecomposition) -> EigenDecomposition:
    """Flip each eigenvector so its largest-magnitude entry is positive.

    Ties in magnitude go to the smallest index.
    """
    vectors = np.array(dec.eigenvectors, dtype=float)
    for h in range(vectors.shape[1]):
        k = int(np.argmax(np.abs(vectors[:, h])))
        if vectors[k, h] < 0:
            vectors[:, h] = -vectors[:, h]
    return EigenDecomposition(np.array(dec.eigenvalues, dtype=float), vectors)
