"""Dense linear-algebra kernels: norms, SVD, QR, pseudo-inverse, truncation,
and the principal angle distance between subspaces.

Everything here is a deterministic pure function of its inputs.  Matrices are
plain float64 ndarrays and are never mutated.  The factorizations delegate to
LAPACK through scipy; ``gesdd`` is tried first and the slower but sturdier
``gesvd`` driver is used as a fallback if it fails to converge.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .validation import check_matrix, check_orthonormal_columns, check_rank


class NumericalError(RuntimeError):
    """An iterative factorization failed to converge."""


@dataclass(frozen=True)
class SvdFactors:
    """Full thin SVD ``M = U diag(sigma) Vt`` with ``q = min(m, n)``.

    ``U`` is m x q with orthonormal columns, ``sigma`` is the non-increasing
    vector of all q singular values, ``Vt`` is q x n with orthonormal rows.
    """

    U: np.ndarray
    sigma: np.ndarray
    Vt: np.ndarray

    @property
    def shape(self):
        return self.U.shape[0], self.Vt.shape[1]


@dataclass(frozen=True)
class TruncatedSvd:
    """Rank-r truncation of an SVD plus its optimal-error tail norms.

    ``tail2`` is the spectral norm of the discarded part (``sigma[r]``, or 0
    when r is the full rank) and ``tailF`` the Frobenius norm
    ``sqrt(sum_{j>r} sigma_j^2)``.
    """

    r: int
    Ur: np.ndarray
    sigma_r: np.ndarray
    Vr: np.ndarray
    tailF: float
    tail2: float

    def reconstruct(self):
        """Dense m x n rank-r matrix ``Ur diag(sigma_r) Vr^T``."""
        return (self.Ur * self.sigma_r) @ self.Vr.T


def svd(M):
    """Thin SVD of a dense real matrix.

    Parameters
    ----------
    M : array_like, shape (m, n)

    Returns
    -------
    SvdFactors

    Raises
    ------
    NumericalError
        If neither LAPACK driver converges.
    """
    A = check_matrix(M)
    try:
        U, s, Vt = scipy.linalg.svd(A, full_matrices=False, lapack_driver="gesdd")
    except np.linalg.LinAlgError:
        try:
            U, s, Vt = scipy.linalg.svd(A, full_matrices=False, lapack_driver="gesvd")
        except np.linalg.LinAlgError as exc:
            raise NumericalError(
                f"SVD failed to converge for shape {A.shape}: {exc}"
            ) from exc
    return SvdFactors(U=U, sigma=s, Vt=Vt)


def matrix_norms(M):
    """Return ``(frobenius, spectral)`` norms of ``M``.

    The spectral norm is the largest singular value, computed from the SVD
    rather than by power iteration; at the sizes this library targets the
    exactness is worth the cost.
    """
    A = check_matrix(M)
    fro = float(np.linalg.norm(A))
    spec = float(svd(A).sigma[0])
    return fro, spec


def truncate(factors, r):
    """Rank-r truncation of precomputed SVD factors.

    Parameters
    ----------
    factors : SvdFactors
    r : int
        Target rank, ``1 <= r <= min(m, n)``.

    Returns
    -------
    TruncatedSvd
    """
    s = factors.sigma
    r = check_rank(r, s.shape[0], name="r")
    tail = s[r:]
    tail2 = float(tail[0]) if tail.size else 0.0
    tailF = float(np.sqrt(np.sum(tail**2))) if tail.size else 0.0
    return TruncatedSvd(
        r=r,
        Ur=factors.U[:, :r].copy(),
        sigma_r=s[:r].copy(),
        Vr=factors.Vt[:r].T.copy(),
        tailF=tailF,
        tail2=tail2,
    )


def pinv(M, r=None, tol=0.0):
    """r-truncated Moore-Penrose pseudo-inverse ``V_r Sigma_r^{-1} U_r^T``.

    Parameters
    ----------
    M : array_like, shape (m, n)
    r : int or None
        Forced truncation rank.  When None, the rank is chosen automatically
        by dropping singular values ``sigma_j <= tol * sigma_1`` (plus a
        machine-precision floor, as in ``numpy.linalg.pinv``).
    tol : float
        Relative cutoff used only in automatic mode; must be >= 0.

    Raises
    ------
    ValueError
        If ``r`` is out of range or ``sigma_r`` is exactly zero when ``r``
        is forced (rank deficiency).
    """
    A = check_matrix(M)
    fac = svd(A)
    s = fac.sigma
    if r is not None:
        r = check_rank(r, s.shape[0], name="r")
        if s[r - 1] == 0.0:
            raise ValueError(
                f"rank-deficient input: sigma_{r} = 0, cannot invert at rank {r}"
            )
        k = r
    else:
        if tol < 0:
            raise ValueError(f"tol must be >= 0, got {tol}")
        if s[0] == 0.0:
            return np.zeros((A.shape[1], A.shape[0]))
        eps_floor = np.finfo(np.float64).eps * max(A.shape)
        cutoff = max(tol, eps_floor) * s[0]
        k = int(np.sum(s > cutoff))
        if k == 0:
            return np.zeros((A.shape[1], A.shape[0]))
    return (fac.Vt[:k].T / s[:k]) @ fac.U[:, :k].T


def thin_qr(M):
    """Thin QR factorization ``M = Q R`` for ``rows >= cols``.

    Returns ``(Q, R)`` with Q m x n orthonormal-column and R n x n upper
    triangular.
    """
    A = check_matrix(M)
    if A.shape[0] < A.shape[1]:
        raise ValueError(f"thin_qr requires rows >= cols, got {A.shape}")
    Q, R = scipy.linalg.qr(A, mode="economic")
    return Q, R


def orthonormal_basis(M):
    """Orthonormal basis of the column span of ``M`` via thin QR."""
    return thin_qr(M)[0]


def principal_angle_dist(G, H, tol=1e-8):
    """Principal angle distance between the column spans of G and H.

    Both inputs must have orthonormal columns (checked to ``tol``).  The
    value is ``||(I - G G^T) H||`` in the spectral norm, computed without
    forming the m x (m-p) orthogonal complement: the Gram trick
    ``||(I - G G^T) H||^2 = ||I_q - (G^T H)^T (G^T H)||`` keeps the cost at
    O(m p q).  The distance is 0 exactly when the spans agree; when the
    subspace dimensions differ it equals 1, which is returned directly (the
    wider space always contains a direction orthogonal to the narrower one).
    """
    G = check_orthonormal_columns(G, name="G", tol=tol)
    H = check_orthonormal_columns(H, name="H", tol=tol)
    if G.shape[0] != H.shape[0]:
        raise ValueError(
            f"G and H must live in the same ambient space: {G.shape[0]} != {H.shape[0]}"
        )
    if G.shape[1] != H.shape[1]:
        return 1.0
    # (I - G G^T) H = H - G (G^T H), an m x q matrix; its largest singular
    # value is the distance.  Forming the residual directly (instead of its
    # q x q Gram matrix) keeps full precision near 0.
    D = H - G @ (G.T @ H)
    val = scipy.linalg.svdvals(D)[0]
    return float(min(val, 1.0))
