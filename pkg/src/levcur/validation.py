"""Input validation helpers shared by every module.

All public entry points funnel their array arguments through these checks so
that shape and finiteness errors surface with a consistent message instead of
propagating NaNs into LAPACK.
"""

import numbers

import numpy as np


def check_matrix(M, name="M", min_rows=1, min_cols=1):
    """Validate and convert a dense real matrix.

    Parameters
    ----------
    M : array_like
        Two-dimensional real array.
    name : str
        Argument name used in error messages.
    min_rows, min_cols : int
        Minimal accepted dimensions.

    Returns
    -------
    ndarray
        A float64, C-contiguous, 2-D view or copy of ``M``.
    """
    A = np.asarray(M, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got ndim={A.ndim}")
    if A.shape[0] < min_rows or A.shape[1] < min_cols:
        raise ValueError(
            f"{name} must be at least {min_rows}x{min_cols}, got {A.shape}"
        )
    if not np.isfinite(A).all():
        raise ValueError(f"{name} contains non-finite entries")
    return np.ascontiguousarray(A)


def check_vector(v, name="v", min_len=1):
    """Validate a 1-D real vector, accepting column shapes (n, 1)."""
    x = np.asarray(v, dtype=np.float64)
    if x.ndim == 2 and 1 in x.shape:
        x = x.ravel()
    if x.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {x.shape}")
    if x.shape[0] < min_len:
        raise ValueError(f"{name} must have at least {min_len} entries")
    if not np.isfinite(x).all():
        raise ValueError(f"{name} contains non-finite entries")
    return x


def check_orthonormal_columns(Q, name="Q", tol=1e-8):
    """Validate that ``Q`` has orthonormal columns within ``tol``.

    The check is on the Frobenius norm of ``Q^T Q - I``, matching the
    tolerance contract of the score and angle routines.
    """
    Q = check_matrix(Q, name=name)
    if Q.shape[1] > Q.shape[0]:
        raise ValueError(
            f"{name} cannot have orthonormal columns: shape {Q.shape}"
        )
    G = Q.T @ Q
    err = np.linalg.norm(G - np.eye(Q.shape[1]))
    if err > tol:
        raise ValueError(
            f"{name} columns are not orthonormal: ||Q^T Q - I||_F = {err:.3e} > {tol:.1e}"
        )
    return Q


def check_rank(r, limit, name="r"):
    """Validate an integer rank in ``[1, limit]``."""
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool):
        raise ValueError(f"{name} must be an integer, got {type(r).__name__}")
    if not 1 <= r <= limit:
        raise ValueError(f"{name} must be in [1, {limit}], got {r}")
    return int(r)


def check_positive(x, name="x", allow_zero=False):
    """Validate a finite positive (or nonnegative) scalar."""
    if not isinstance(x, numbers.Real) or not np.isfinite(x):
        raise ValueError(f"{name} must be a finite real number")
    if x < 0 or (x == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {x}")
    return float(x)
