"""Exact and sketched least-squares solvers.

The overdetermined problem min_x ||A x - b|| is carried around as the
augmented matrix ``M = (A | b)``; a sketched solve replaces M by ``F M`` for
a structured multiplier F and solves the small problem exactly.  Quality is
reported as the ratio of the achieved residual to the optimal one, which is
always >= 1.
"""

import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import sketch as sketch_mod
from .random_matrices import as_rng, gaussian
from .sampling import DegenerateSampleError, apply_plan
from .validation import check_matrix, check_vector


@dataclass(frozen=True)
class LlspInstance:
    """An overdetermined least-squares instance ``min_x ||A x - b||``."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = check_matrix(self.A)
        b = check_vector(self.b)
        if A.shape[0] <= A.shape[1]:
            raise ValueError(
                f"instance must be overdetermined (d < m), got {A.shape}"
            )
        if b.shape[0] != A.shape[0]:
            raise ValueError(
                f"b has {b.shape[0]} entries, A has {A.shape[0]} rows"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def d(self):
        return self.A.shape[1]

    @property
    def M(self):
        """The augmented m x (d+1) matrix ``(A | b)``."""
        return np.hstack([self.A, self.b[:, None]])


@dataclass(frozen=True)
class LlspResult:
    """A solution vector with its residual and optimality ratio.

    ``ratio`` is ``residual / optimal_residual`` when the optimum was
    computed (None otherwise); it equals inf when the optimum is 0 but the
    achieved residual is not.
    """

    x: np.ndarray
    residual: float
    ratio: float = None


def _lstsq(A, B):
    """Minimum-norm least-squares solve via LAPACK gelsd."""
    sol = scipy.linalg.lstsq(A, B, lapack_driver="gelsd")[0]
    return sol


def residual_norm(inst, x):
    """||A x - b|| for a candidate solution."""
    return float(np.linalg.norm(inst.A @ x - inst.b))


def _ratio(achieved, optimal):
    if optimal > 0:
        return achieved / optimal
    return 0.0 if achieved == 0 else np.inf


def solve_exact(inst):
    """Minimum-norm least-squares solution of the full instance."""
    x = _lstsq(inst.A, inst.b)
    res = residual_norm(inst, x)
    return LlspResult(x=x, residual=res, ratio=1.0 if res > 0 else None)

def sketch_solve(inst, op, optimal=None):
    """Solve the sketched instance ``min_x ||(F A) x - F b||``.

    Parameters
    ----------
    inst : LlspInstance
    op : sketch.SketchOp
        Multiplier with ``op.m == inst.m`` and ``op.s >= inst.d``.
    optimal : float, optional
        Cached optimal residual of the full instance; when given, the
        result carries the residual ratio against it.

    Returns
    -------
    LlspResult
        The residual reported is that of the *original* instance at the
        sketched solution.
    """
    if op.m != inst.m:
        raise ValueError(f"multiplier expects {op.m} rows, instance has {inst.m}")
    if op.s < inst.d:
        raise ValueError(f"sketch size s={op.s} must be >= d={inst.d}")
    FM = sketch_mod.apply_sketch(op, inst.M)
    x = _lstsq(FM[:, :-1], FM[:, -1])
    res = residual_norm(inst, x)
    ratio = _ratio(res, optimal) if optimal is not None else None
    return LlspResult(x=x, residual=res, ratio=ratio)


def dual_llsp_check(s, m, d, a, b, kind, rng, depth=3):
    """One trial of the dual setup: scaled-orthogonal F against Gaussian M.

    Builds ``F = a Q`` (Q a default-scaled operator of the given kind) and
    ``M = b G`` for an m x (d+1) Gaussian G, requiring ``a b sqrt(s) = 1``
    to 1e-12.  Returns a dict with the pooled mean and variance of the
    standardized product ``(1/(a b)) F M`` (whose entries are standard
    normal in distribution) and the residual ratio of the sketched solve of
    the induced LLSP against the exact one.
    """
    if abs(a * b * np.sqrt(s) - 1.0) > 1e-12:
        raise ValueError(f"need a*b*sqrt(s) = 1, got {a * b * np.sqrt(s)!r}")
    if not d <= s < m:
        raise ValueError(f"need d <= s < m, got d={d}, s={s}, m={m}")
    rng = as_rng(rng)
    op = sketch_mod.build_sketch(kind, s, m, rng, depth=depth).rescaled(a)
    M = b * gaussian(m, d + 1, rng)
    FM = sketch_mod.apply_sketch(op, M)
    Z = FM / (a * b)
    inst = LlspInstance(A=M[:, :-1], b=M[:, -1])
    exact = solve_exact(inst)
    sk = sketch_solve(inst, op, optimal=exact.residual)
    return {
        "mean": float(Z.mean()),
        "variance": float(Z.var()),
        "entries": int(Z.size),
        "ratio": float(sk.ratio),
    }


def solve_generalized(A, M, plan):
    """Sampled generalized least squares ``X = (D^T S^T A)^+ (D^T S^T M)``.

    Parameters
    ----------
    A : array_like, shape (m, r)
    M : array_like, shape (m, n)
    plan : SamplingPlan over the rows of A and M.

    Returns
    -------
    ndarray, shape (r, n)
        Approximate coefficients of the projection of M onto range(A).

    Raises
    ------
    DegenerateSampleError
        If the sampled ``D^T S^T A`` loses rank r, in which case the caller
        may resample.
    """
    A = check_matrix(A)
    M = check_matrix(M)
    if A.shape[0] != M.shape[0]:
        raise ValueError(f"row counts differ: {A.shape[0]} vs {M.shape[0]}")
    SA = apply_plan(A, plan, axis="rows")
    r = A.shape[1]
    sv = scipy.linalg.svdvals(SA)
    if sv.size < r or sv[r - 1] <= sv[0] * np.finfo(np.float64).eps * max(SA.shape):
        raise DegenerateSampleError(
            f"sampled matrix has numerical rank < {r}; resample"
        )
    SM = apply_plan(M, plan, axis="rows")
    return _lstsq(SA, SM)


def timed(fn, *args, **kwargs):
    """Run ``fn`` returning (result, elapsed milliseconds)."""
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, (time.perf_counter() - t0) * 1e3
