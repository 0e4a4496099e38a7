"""Alternating iterative refinement of a crude low-rank approximation.

Given a factor A_0 whose span roughly aligns with the top left singular
space of M, the refinement alternates two sampled generalized least-squares
solves: B_t from A_t using row-leverage sampling of A_t, then A_{t+1} from
B_t using column-leverage sampling of B_t.  Each half-step touches only a
few sampled rows or columns of M, so an iteration runs at sublinear cost;
baselines with dense Gaussian embeddings and with the exact full solves are
provided for comparison.

Distances to the true singular spaces and error ratios are metric
instrumentation only: they use a dense SVD of M computed once outside the
loop and never feed back into the refinement itself.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import principal_angle_dist, svd, thin_qr, truncate
from .lstsq import _lstsq
from .random_matrices import as_rng, gaussian
from .sampling import (
    DegenerateSampleError,
    LeverageScores,
    make_dist,
    sample_exact,
    apply_plan,
)
from . import cur as cur_mod
from .validation import check_matrix, check_rank

SOLVERS = ("leverage", "gaussian_embed", "exact")


@dataclass(frozen=True)
class RefineRecord:
    """Metrics of one refinement iterate."""

    iter: int
    distA: float
    distB: float
    err_ratio: float
    millis: float


@dataclass
class RefinementState:
    """Final iterate pair plus the per-iteration metric history."""

    t: int
    A: np.ndarray
    B: np.ndarray
    history: list = field(default_factory=list)


@dataclass(frozen=True)
class ContractionParams:
    """Closed-form contraction predictions for the alternating scheme.

    ``c`` is the predicted one-step contraction factor of the principal
    angle distance; ``conditions_hold`` records whether the two sufficient
    conditions for c < 1 are met; ``tau`` is the predicted iteration count
    to reach the 4*theta*eps plateau.
    """

    sigma_r: float
    sigma_r1: float
    bar_sigma_r1: float
    theta: float
    delta: float
    eps: float
    c: float
    tau: int
    conditions_hold: bool


def contraction_params(sigma_r, sigma_r1, bar_sigma_r1, delta, eps):
    """Evaluate the contraction factor and iteration-count formulas.

    Parameters
    ----------
    sigma_r, sigma_r1 : float
        r-th and (r+1)-st singular values, ``sigma_r > sigma_r1 >= 0``.
    bar_sigma_r1 : float
        Frobenius tail ``||M - M_r||_F``.
    delta : float
        Current principal angle distance, ``0 <= delta < 1`` (the formula
        degenerates to c = inf as delta -> 0 with eps > 0).
    eps : float
        Sampling accuracy parameter, > 0.
    """
    if not 0 <= delta < 1:
        raise ValueError(f"delta must be in [0, 1), got {delta}")
    if not sigma_r > sigma_r1 >= 0:
        raise ValueError(
            f"need sigma_r > sigma_r1 >= 0, got {sigma_r}, {sigma_r1}"
        )
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    if sigma_r1 > 0:
        theta = bar_sigma_r1 / sigma_r1
    else:
        theta = 0.0 if bar_sigma_r1 == 0 else math.inf

    shrink = 1.0 / math.sqrt(1.0 - delta**2)
    if sigma_r1 == 0:
        c = 0.0
    elif delta == 0.0 or theta == math.inf:
        c = math.inf
    else:
        c = (sigma_r1 / sigma_r) * shrink * (
            1.0 + 2.0 * eps * bar_sigma_r1 / (delta * sigma_r1)
        )

    cond1 = (sigma_r1 / sigma_r) * shrink < 1.0
    cond2 = (
        delta > 0
        and eps * theta
        < (delta / 2.0) * (math.sqrt(1.0 - delta**2) * sigma_r / sigma_r1 - 1.0)
        if sigma_r1 > 0
        else True
    )
    conditions_hold = bool(cond1 and cond2)

    if theta > 0 and 0 < 8.0 * theta * eps < 1.0:
        tau = math.ceil(0.5 * math.log(8.0 * theta * eps) / math.log(0.87))
    else:
        tau = 0
    return ContractionParams(
        sigma_r=float(sigma_r), sigma_r1=float(sigma_r1),
        bar_sigma_r1=float(bar_sigma_r1), theta=float(theta),
        delta=float(delta), eps=float(eps), c=float(c), tau=int(tau),
        conditions_hold=conditions_hold,
    )


def init_factor(M, r, rng, retries=3):
    """Sublinear-cost initial factor: orthonormal basis of the left top-r
    space of a crude sampled CUR approximation.

    Runs the uniform-score CUR with k = l = r and reduces its r-top left
    singular space with thin QR plus an r x n SVD, so no m x n
    factorization is ever formed.
    """
    A = check_matrix(M)
    r = check_rank(r, min(A.shape), name="r")
    rng = as_rng(rng)
    last = None
    for _ in range(retries):
        try:
            cur = cur_mod.cur_leverage(
                A, r, k=r, l=r, beta=1.0, beta_bar=1.0, mode="exact",
                score_source="uniform", rng=rng,
            )
        except DegenerateSampleError as exc:
            last = exc
            continue
        Aw = cur.C @ cur.U
        Q, Ra = thin_qr(Aw)
        f = svd(Ra @ cur.R)
        if f.sigma[r - 1] <= 0:
            last = DegenerateSampleError("crude approximation has rank < r")
            continue
        return Q @ f.U[:, :r]
    raise last if last is not None else DegenerateSampleError("init failed")


def _row_score_dist(A, beta):
    """Row leverage scores of a full-column-rank matrix, via its Q factor."""
    Q = thin_qr(A)[0]
    scores = LeverageScores(side="row", r=A.shape[1],
                            gamma=np.einsum("ij,ij->i", Q, Q))
    return make_dist(scores, beta)


def _solve_B(M, A, l, beta, solver, rng):
    """Half-step: fit B to minimize the chosen surrogate of ||A B - M||_F."""
    r = A.shape[1]
    if solver == "leverage":
        for attempt in range(2):
            plan = sample_exact(_row_score_dist(A, beta), l, rng)
            SA = apply_plan(A, plan, axis="rows")
            if np.linalg.matrix_rank(SA) < r:
                continue
            return _lstsq(SA, apply_plan(M, plan, axis="rows"))
        raise DegenerateSampleError("sampled A rank-deficient twice")
    if solver == "gaussian_embed":
        G = gaussian(l, M.shape[0], rng)
        return _lstsq(G @ A, G @ M)
    if solver == "exact":
        return _lstsq(A, M)
    raise ValueError(f"unknown solver {solver!r}")


def _solve_A(M, B, l, beta, solver, rng):
    """Half-step: fit A to minimize the chosen surrogate of ||A B - M||_F."""
    r = B.shape[0]
    if solver == "leverage":
        for attempt in range(2):
            plan = sample_exact(_row_score_dist(B.T, beta), l, rng)
            BS = apply_plan(B, plan, axis="cols")
            if np.linalg.matrix_rank(BS) < r:
                continue
            MS = apply_plan(M, plan, axis="cols")
            return _lstsq(BS.T, MS.T).T
        raise DegenerateSampleError("sampled B rank-deficient twice")
    if solver == "gaussian_embed":
        H = gaussian(M.shape[1], l, rng)
        return _lstsq((B @ H).T, (M @ H).T).T
    if solver == "exact":
        return _lstsq(B.T, M.T).T
    raise ValueError(f"unknown solver {solver!r}")


def refine_step(M, A, l, beta, solver, rng):
    """One full alternating round: returns ``(B, A_next)``.

    B solves the (sampled / embedded / exact) generalized problem for the
    current A; A_next solves the symmetric problem for that B.
    """
    M = check_matrix(M)
    A = check_matrix(A)
    if l < A.shape[1]:
        raise ValueError(f"need l >= r, got l={l}, r={A.shape[1]}")
    rng = as_rng(rng)
    B = _solve_B(M, A, l, beta, solver, rng)
    A_next = _solve_A(M, B, l, beta, solver, rng)
    return B, A_next


class MetricContext:
    """Cached dense-SVD reference data for refinement metrics."""

    def __init__(self, M, r):
        fac = svd(M)
        tr = truncate(fac, r)
        self.Ur = tr.Ur
        self.Vr = tr.Vr
        self.tailF = tr.tailF
        self.normF = float(np.linalg.norm(M))

    def measure(self, M, A, B):
        err = float(np.linalg.norm(M - A @ B))
        ratio = err / self.tailF if self.tailF > 0 else (
            1.0 if err <= 1e-12 * max(1.0, self.normF) else math.inf
        )
        distA = principal_angle_dist(thin_qr(A)[0], self.Ur)
        distB = principal_angle_dist(thin_qr(B.T)[0], self.Vr)
        return distA, distB, ratio


def refine(M, A0, r, T, l=None, beta=1.0, solver="leverage", rng=None,
           metrics=None):
    """Run T alternating refinement rounds from the initial factor A0.

    The history gets one record per t = 0..T: record t measures the pair
    (A_t, B_t), where B_t is the B-half-step from A_t, and its ``millis``
    is the solver time spent producing that pair since the previous record
    (for t = 0, just the B_0 solve).  With T = 0 a single record for
    (A_0, B_0) is emitted.

    Parameters
    ----------
    metrics : MetricContext, optional
        Reuse a cached dense SVD of M; computed here when omitted.  The
        metrics never influence the iteration.
    """
    M = check_matrix(M)
    A = check_matrix(A0)
    r = check_rank(r, min(M.shape), name="r")
    if A.shape != (M.shape[0], r):
        raise ValueError(f"A0 must be {M.shape[0]}x{r}, got {A.shape}")
    if solver not in SOLVERS:
        raise ValueError(f"solver must be one of {SOLVERS}, got {solver!r}")
    l = 15 * r if l is None else int(l)
    rng = as_rng(rng)
    if metrics is None:
        metrics = MetricContext(M, r)

    history = []
    B = None
    for t in range(T + 1):
        t0 = time.perf_counter()
        if t > 0:
            A = _solve_A(M, B, l, beta, solver, rng)
        B = _solve_B(M, A, l, beta, solver, rng)
        ms = (time.perf_counter() - t0) * 1e3
        distA, distB, ratio = metrics.measure(M, A, B)
        history.append(RefineRecord(iter=t, distA=distA, distB=distB,
                                    err_ratio=ratio, millis=ms))
    return RefinementState(t=T, A=A, B=B, history=history)
