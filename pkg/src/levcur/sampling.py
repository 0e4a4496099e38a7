"""Leverage scores, certified sampling distributions, and the Exactly(l) /
Expected(l) sampling-and-re-scaling schemes.

The rank-r row (column) leverage scores of a matrix are the squared row
norms of an orthonormal basis of its r-top left (right) singular space; they
sum to r and drive the importance sampling used throughout the library.  A
sampling distribution p is *beta-certified* against scores gamma when
``p_j >= beta * gamma_j / r`` for every j, which is the hypothesis the error
bounds of the sampled solvers need.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import svd, thin_qr
from .random_matrices import as_rng
from .validation import check_matrix, check_orthonormal_columns, check_rank


class IllPosedScoresError(ValueError):
    """Leverage scores requested at a rank where sigma_r == sigma_{r+1}."""


class DegenerateSampleError(RuntimeError):
    """A sampled submatrix lost the rank the caller needs."""


@dataclass(frozen=True)
class LeverageScores:
    """Rank-r leverage scores of one side of a matrix.

    ``gamma`` has one entry per row (side='row') or column (side='column'),
    each in [0, 1], summing to r.
    """

    side: str
    r: int
    gamma: np.ndarray

    def __post_init__(self):
        if self.side not in ("row", "column"):
            raise ValueError(f"side must be 'row' or 'column', got {self.side!r}")
        g = np.asarray(self.gamma, dtype=np.float64)
        if np.any(g < -1e-12):
            raise ValueError("leverage scores must be nonnegative")
        object.__setattr__(self, "gamma", np.maximum(g, 0.0))

    @property
    def n(self):
        return self.gamma.shape[0]


@dataclass(frozen=True)
class SampleDist:
    """A sampling distribution with its certificate.

    ``p`` sums to 1 and is strictly positive wherever the certified scores
    are (p_j = 0 can only occur at gamma_j = 0, under beta = 1); ``beta`` in
    (0, 1] certifies ``p_j >= beta * gamma_j / r`` against the scores it was
    built from.
    """

    p: np.ndarray
    beta: float
    r: int

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if np.any(p < 0):
            raise ValueError("sampling probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {p.sum()!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class SamplingPlan:
    """A realized (S, D) pair: picked indices plus re-scaling factors.

    mode 'exact': exactly l picks, duplicates allowed, scale 1/sqrt(l p_i).
    mode 'expected': distinct increasing picks, scale 1/min(1, sqrt(l p_j)).
    """

    mode: str
    l: int
    picks: np.ndarray
    scales: np.ndarray

    @property
    def size(self):
        return self.picks.shape[0]


def scores_from_orthogonal(V, side="column"):
    """Leverage scores from a matrix with orthonormal columns.

    ``gamma_i`` is the squared norm of row i of V; with orthonormal columns
    the scores sum to the column count r.  ``side`` records which side of
    the original matrix V came from.
    """
    V = check_orthonormal_columns(V, name="V", tol=1e-8)
    gamma = np.einsum("ij,ij->i", V, V)
    return LeverageScores(side=side, r=V.shape[1], gamma=gamma)


def scores_of_matrix(M, r, gap_rtol=1e-8):
    """Exact rank-r row and column leverage scores via a dense SVD.

    Requires the spectral gap ``sigma_r > sigma_{r+1} (1 + gap_rtol)``:
    without it the r-top singular spaces, and hence the scores, are not
    unique.

    Returns
    -------
    (row_scores, col_scores) : pair of LeverageScores
    """
    A = check_matrix(M)
    fac = svd(A)
    r = check_rank(r, fac.sigma.shape[0], name="r")
    if r < fac.sigma.shape[0]:
        if fac.sigma[r - 1] <= fac.sigma[r] * (1.0 + gap_rtol):
            raise IllPosedScoresError(
                f"sigma_{r} = {fac.sigma[r - 1]:.6e} is not separated from "
                f"sigma_{r + 1} = {fac.sigma[r]:.6e}; rank-{r} scores not unique"
            )
    row = LeverageScores(
        side="row", r=r, gamma=np.einsum("ij,ij->i", fac.U[:, :r], fac.U[:, :r])
    )
    Vr = fac.Vt[:r]
    col = LeverageScores(side="column", r=r, gamma=np.einsum("ji,ji->i", Vr, Vr))
    return row, col


def scores_of_lra(A, B, r=None):
    """Rank-r leverage scores of the product ``A @ B`` without forming it.

    Parameters
    ----------
    A : array_like, shape (m, k)
    B : array_like, shape (k, n)
    r : int, optional
        Target rank; defaults to the inner dimension k, in which case both
        factors must have full rank.  With r < k the product only needs
        rank >= r and a spectral gap at r.

    Returns
    -------
    (row_scores, col_scores) : pair of LeverageScores

    Notes
    -----
    Thin QR of each factor reduces the problem to a k x k SVD, so the cost
    is O((m + n) k^2) and no m x n array is ever touched.  The scores equal
    those of the dense product exactly (up to roundoff).
    """
    A = check_matrix(A)
    B = check_matrix(B)
    k = A.shape[1]
    if B.shape[0] != k:
        raise ValueError(f"inner dimensions differ: {A.shape} vs {B.shape}")
    r = k if r is None else check_rank(r, k, name="r")
    Qa, Ra = thin_qr(A)
    Qb, Rb = thin_qr(B.T)
    W = Ra @ Rb.T
    fw = svd(W)
    if fw.sigma[r - 1] <= 0:
        raise DegenerateSampleError(f"product has rank < {r}")
    if r < k and fw.sigma[r - 1] <= fw.sigma[r] * (1.0 + 1e-8):
        raise IllPosedScoresError(
            f"no spectral gap at rank {r}; scores not unique"
        )
    Urow = Qa @ fw.U[:, :r]
    Vcol = Qb @ fw.Vt[:r].T
    row = LeverageScores(side="row", r=r,
                         gamma=np.einsum("ij,ij->i", Urow, Urow))
    col = LeverageScores(side="column", r=r,
                         gamma=np.einsum("ij,ij->i", Vcol, Vcol))
    return row, col


def make_dist(scores, beta):
    """Mixture distribution ``beta * gamma/r + (1 - beta) / n``.

    Any 0 < beta <= 1 gives a strictly positive distribution that is
    beta-certified against ``scores`` by construction.
    """
    if not 0 < beta <= 1:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
    g = scores.gamma
    n = g.shape[0]
    # No renormalization: the certificate p_j >= beta gamma_j / r must hold
    # exactly by construction, and sum(gamma) = r already holds to 1e-9.
    p = beta * (g / scores.r) + (1.0 - beta) / n
    return SampleDist(p=p, beta=float(beta), r=scores.r)


def uniform_dist(n, scores=None):
    """Uniform distribution 1/n with the largest feasible certificate.

    When ``scores`` is given, beta* is the largest beta for which the
    uniform distribution is still beta-certified:
    ``min over gamma_j > 0 of r / (n gamma_j)``, capped at 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = np.full(n, 1.0 / n)
    if scores is None:
        return SampleDist(p=p, beta=1.0, r=1)
    g = scores.gamma[scores.gamma > 0]
    beta_star = 1.0 if g.size == 0 else min(1.0, float(scores.r / (n * g.max())))
    return SampleDist(p=p, beta=beta_star, r=scores.r)


def sample_exact(dist, l, rng):
    """Exactly(l) sampling: l i.i.d. categorical draws, scales 1/sqrt(l p)."""
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    rng = as_rng(rng)
    picks = rng.choice(dist.p.shape[0], size=l, replace=True, p=dist.p)
    scales = 1.0 / np.sqrt(l * dist.p[picks])
    return SamplingPlan(mode="exact", l=int(l), picks=picks, scales=scales)


def sample_expected(dist, l, rng):
    """Expected(l) sampling: one Bernoulli test per index.

    Index j is included independently with probability ``min(1, l p_j)``
    and re-scaled by ``1 / min(1, sqrt(l p_j))``, so at most l indices are
    picked in expectation.  An empty draw is retried once, then raised.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    rng = as_rng(rng)
    q = np.minimum(1.0, l * dist.p)
    for _ in range(2):
        mask = rng.random(dist.p.shape[0]) < q
        if mask.any():
            picks = np.flatnonzero(mask)
            scales = 1.0 / np.minimum(1.0, np.sqrt(l * dist.p[picks]))
            return SamplingPlan(mode="expected", l=int(l), picks=picks,
                                scales=scales)
    raise DegenerateSampleError("Expected(l) sampling picked no indices twice")


def apply_plan(M, plan, axis="rows"):
    """Apply a sampling plan to rows or columns of ``M``.

    axis='rows' returns the |picks| x n matrix whose t-th row is
    ``scales_t * M[picks_t, :]`` (the ``D^T S^T M`` product); axis='cols'
    is the symmetric ``M S D``.
    """
    A = check_matrix(M)
    dim = A.shape[0] if axis == "rows" else A.shape[1]
    if axis not in ("rows", "cols"):
        raise ValueError(f"axis must be 'rows' or 'cols', got {axis!r}")
    if plan.picks.size and (plan.picks.min() < 0 or plan.picks.max() >= dim):
        raise ValueError(f"plan indices out of range for axis {axis} of {A.shape}")
    if axis == "rows":
        return A[plan.picks] * plan.scales[:, None]
    return A[:, plan.picks] * plan.scales[None, :]


def plan_to_rows(plan):
    """CSV-ready audit rows ``(mode, l, pick, scale)`` for a plan."""
    return [
        (plan.mode, plan.l, int(p), float(s))
        for p, s in zip(plan.picks, plan.scales)
    ]
