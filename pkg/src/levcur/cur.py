"""CUR low-rank approximation directed by leverage scores.

The sampled decomposition keeps actual columns C and rows R of the input and
a small nucleus U, so ``C @ U @ R`` approximates M.  Scores can come from a
dense SVD of M (exact but superlinear), from the uniform distribution (the
sublinear path, which touches only ``k n + m l + k l`` entries of M), or be
supplied by the caller (e.g. computed from a known low-rank factorization).
"""

from dataclasses import dataclass

import numpy as np

from .linalg import pinv, svd, thin_qr, truncate
from .random_matrices import as_rng
from .sampling import (
    DegenerateSampleError,
    LeverageScores,
    SampleDist,
    make_dist,
    sample_exact,
    sample_expected,
    scores_of_matrix,
)
from .validation import check_matrix, check_rank


class GeneratorSingularError(RuntimeError):
    """The CUR generator submatrix is singular at the requested rank."""


@dataclass(frozen=True)
class CurFactors:
    """A CUR triple with index provenance.

    ``C = M[:, col_idx]`` and ``R = M[row_idx, :]`` hold unscaled columns and
    rows of the input; the sampling re-scalings live inside the nucleus
    ``U = D W_r^+ Dbar``.  ``entries_accessed`` counts the distinct entries
    of M read while building the factors (the sublinear-cost certificate for
    the uniform score mode).
    """

    col_idx: np.ndarray
    row_idx: np.ndarray
    C: np.ndarray
    R: np.ndarray
    U: np.ndarray
    r: int
    score_mode: str
    col_scales: np.ndarray = None
    row_scales: np.ndarray = None
    entries_accessed: int = 0

    def reconstruct(self):
        """Dense m x n approximation ``C @ U @ R``."""
        return self.C @ (self.U @ self.R)


def canonical_cur(M, row_set, col_set):
    """Canonical CUR from an r x r generator ``G = M[I, J]``.

    Exact for matrices of rank r = |I| = |J| whenever G is nonsingular; for
    general M this is the canonical rank-r approximation with ``U = G^{-1}``
    (computed as the r-truncated pseudo-inverse), whose quality degrades
    with the conditioning of G.
    """
    A = check_matrix(M)
    I = np.asarray(row_set, dtype=int)
    J = np.asarray(col_set, dtype=int)
    if I.size != J.size:
        raise ValueError(f"index sets must have equal size, got {I.size}, {J.size}")
    r = I.size
    G = A[np.ix_(I, J)]
    sv = svd(G).sigma
    if sv[r - 1] <= 0:
        raise GeneratorSingularError(f"generator M[I, J] is singular at rank {r}")
    U = pinv(G, r)
    return CurFactors(
        col_idx=J, row_idx=I, C=A[:, J].copy(), R=A[I, :].copy(), U=U, r=r,
        score_mode="canonical",
        entries_accessed=A.shape[0] * r + r * A.shape[1] - r * r,
    )


def _sample(dist, count, mode, rng):
    if mode == "exact":
        return sample_exact(dist, count, rng)
    if mode == "expected":
        return sample_expected(dist, count, rng)
    raise ValueError(f"mode must be 'exact' or 'expected', got {mode!r}")


def _rank_r_row_scores(X, r):
    """Rank-r row leverage scores of X via thin QR + small SVD.

    For tall X the QR reduction keeps the SVD at l x l; a wide X (more
    sampled columns than rows) is decomposed directly.
    """
    if X.shape[0] >= X.shape[1]:
        Q, Rf = thin_qr(X)
        f = svd(Rf)
        Ur = Q @ f.U[:, :r] if f.sigma.shape[0] >= r else None
    else:
        f = svd(X)
        Ur = f.U[:, :r] if f.sigma.shape[0] >= r else None
    if Ur is None or f.sigma[r - 1] <= 0:
        raise DegenerateSampleError(
            f"sampled column block has rank < {r}; resample"
        )
    return LeverageScores(side="row", r=r,
                          gamma=np.einsum("ij,ij->i", Ur, Ur))


def _truncated_pinv_or_none(W, r):
    """r-truncated pseudo-inverse of W, or None if sigma_r(W) vanishes."""
    f = svd(W)
    floor = f.sigma[0] * np.finfo(np.float64).eps * max(W.shape)
    if f.sigma.shape[0] < r or f.sigma[r - 1] <= floor:
        return None
    return (f.Vt[:r].T / f.sigma[:r]) @ f.U[:, :r].T


def cur_leverage(M, r, k=None, l=None, beta=1.0, beta_bar=1.0, mode="exact",
                 score_source="svd", scores=None, rng=None):
    """Sampled CUR approximation at target rank r.

    Parameters
    ----------
    M : array_like, shape (m, n)
    r : int
        Target rank.
    k, l : int
        Row and column sample counts, ``r <= l <= n`` and ``r <= k <= m``;
        both default to ``15 r`` (the experimentally sufficient regime,
        far below the theoretical guarantees).
    beta, beta_bar : float
        Certificates for the column and row sampling distributions.
    mode : {'exact', 'expected'}
        Sampling scheme for both stages.
    score_source : {'svd', 'uniform', 'supplied'}
        'svd' computes exact column scores of M (superlinear); 'uniform'
        skips score computation entirely and keeps the whole run sublinear
        in mn; 'supplied' certifies ``scores`` (column side) with beta.
    rng : Generator or int seed

    Returns
    -------
    CurFactors

    Raises
    ------
    DegenerateSampleError
        If the sampled generator loses rank r twice in a row (one automatic
        resample is attempted).
    """
    A = check_matrix(M)
    m, n = A.shape
    r = check_rank(r, min(m, n), name="r")
    l = 15 * r if l is None else int(l)
    k = 15 * r if k is None else int(k)
    l = min(l, n)
    k = min(k, m)
    if not (r <= l and r <= k):
        raise ValueError(f"need r <= l <= n and r <= k <= m, got r={r}, k={k}, l={l}")
    rng = as_rng(rng)

    accessed = 0
    if score_source == "svd":
        _, col_scores = scores_of_matrix(A, r)
        col_dist = make_dist(col_scores, beta)
        accessed += m * n
    elif score_source == "uniform":
        col_dist = SampleDist(p=np.full(n, 1.0 / n), beta=beta, r=r)
    elif score_source == "supplied":
        if scores is None or scores.side != "column":
            raise ValueError("score_source='supplied' needs column LeverageScores")
        col_dist = make_dist(scores, beta)
    else:
        raise ValueError(f"unknown score_source {score_source!r}")

    last_err = None
    for _ in range(2):
        col_plan = _sample(col_dist, l, mode, rng)
        C = A[:, col_plan.picks]
        accessed += m * np.unique(col_plan.picks).size
        CD = C * col_plan.scales[None, :]
        try:
            row_scores = _rank_r_row_scores(CD, r)
        except DegenerateSampleError as exc:
            last_err = exc
            continue
        row_dist = make_dist(row_scores, beta_bar)
        row_plan = _sample(row_dist, k, mode, rng)
        R = A[row_plan.picks, :]
        accessed += np.unique(row_plan.picks).size * n
        # W = Dbar Sbar^T M S D, assembled from R to avoid re-reading M.
        W = (row_plan.scales[:, None] * R[:, col_plan.picks]) * col_plan.scales[None, :]
        Wp = _truncated_pinv_or_none(W, r)
        if Wp is None:
            last_err = DegenerateSampleError(
                f"sampled generator W has rank < {r}"
            )
            continue
        U = (col_plan.scales[:, None] * Wp) * row_plan.scales[None, :]
        return CurFactors(
            col_idx=col_plan.picks.copy(), row_idx=row_plan.picks.copy(),
            C=C.copy(), R=R.copy(), U=U, r=r, score_mode=score_source,
            col_scales=col_plan.scales.copy(), row_scales=row_plan.scales.copy(),
            entries_accessed=accessed,
        )
    raise last_err


def nucleus_simple(M, cur):
    """Unscaled simple nucleus ``U = (Sbar^T M S)_r^+``.

    Skips the D / Dbar re-scalings of the stabilized nucleus; identical to
    it when all plan scales are 1, and typically somewhat less accurate on
    perturbed inputs.
    """
    A = check_matrix(M)
    W = A[np.ix_(cur.row_idx, cur.col_idx)]
    Wp = _truncated_pinv_or_none(W, cur.r)
    if Wp is None:
        raise DegenerateSampleError(f"sampled generator has rank < {cur.r}")
    return Wp


def cur_error(M, cur, tailF=None):
    """Frobenius error of a CUR approximation and its optimality ratio.

    Returns ``(absF, ratio)`` where ``absF = ||M - C U R||_F`` and ``ratio``
    divides by the optimal rank-r error ``sigma_{F, r+1}(M)`` (passed in as
    ``tailF`` to reuse a cached SVD, or computed here).  The ratio is inf
    when the tail is 0 but the error is not, and None when both vanish.
    """
    A = check_matrix(M)
    absF = float(np.linalg.norm(A - cur.reconstruct()))
    if tailF is None:
        tailF = truncate(svd(A), cur.r).tailF
    if tailF > 0:
        return absF, absF / tailF
    return absF, (None if absF == 0 else np.inf)
