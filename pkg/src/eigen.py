"""Cyclic Jacobi eigensolver for small dense symmetric matrices."""
import logging
from typing import Tuple

import numpy as np

from . import DataError, NumericalError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-12
DEFAULT_MAX_SWEEPS = 100


def off_diagonal_norm(matrix: np.ndarray) -> float:
  off = matrix - np.diag(np.diag(matrix))
  return float(np.linalg.norm(off))


def jacobi_eigh(matrix, tol=DEFAULT_TOLERANCE, max_sweeps=DEFAULT_MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray, int]:
  """
  Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

  Pairs (p, q) are visited in row-major order in every sweep, so results are
  reproducible. Iteration stops when the off-diagonal Frobenius norm drops
  below ``tol * ||A||_F``.

  Returns:
    (eigenvalues, eigenvectors, sweeps): eigenvalues in descending order
    (ties keep their original index order), eigenvectors as columns.
  """
  a = np.array(matrix, dtype=float)
  if a.ndim != 2 or a.shape[0] != a.shape[1]:
    raise DataError(f"Expected a square matrix, got shape {a.shape}")
  if not np.all(np.isfinite(a)):
    raise DataError("Matrix contains non-finite values")
  if not np.allclose(a, a.T, rtol=1e-12, atol=1e-14 * max(np.abs(a).max(), 1.0)):
    raise DataError("Matrix is not symmetric")
  a = (a + a.T) / 2.0

  n = a.shape[0]
  v = np.eye(n)
  threshold = tol * np.linalg.norm(a)

  sweeps = 0
  while off_diagonal_norm(a) > threshold:
    if sweeps >= max_sweeps:
      raise NumericalError(
        f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
        f"(off-diagonal norm {off_diagonal_norm(a):.3e})"
      )
    sweeps += 1
    for p in range(n - 1):
      for q in range(p + 1, n):
        apq = a[p, q]
        if apq == 0.0:
          continue
        tau = (a[q, q] - a[p, p]) / (2.0 * apq)
        sign = 1.0 if tau >= 0 else -1.0
        t = sign / (abs(tau) + np.sqrt(1.0 + tau * tau))
        c = 1.0 / np.sqrt(1.0 + t * t)
        s = t * c

        col_p = a[:, p].copy()
        col_q = a[:, q].copy()
        a[:, p] = c * col_p - s * col_q
        a[:, q] = s * col_p + c * col_q
        row_p = a[p, :].copy()
        row_q = a[q, :].copy()
        a[p, :] = c * row_p - s * row_q
        a[q, :] = s * row_p + c * row_q
        a[p, q] = a[q, p] = 0.0

        vec_p = v[:, p].copy()
        vec_q = v[:, q].copy()
        v[:, p] = c * vec_p - s * vec_q
        v[:, q] = s * vec_p + c * vec_q
    logger.debug("Jacobi sweep %d: off-diagonal norm %.3e", sweeps, off_diagonal_norm(a))

  eigenvalues = np.diag(a).copy()
  order = np.argsort(-eigenvalues, kind="stable")
  return eigenvalues[order], v[:, order], sweeps
