"""Scikit-learn style estimators wrapping the sampled algorithms.

These are thin facades over the functional core so the solvers compose with
pipelines, ``clone`` and grid search.  All of them take a ``random_state``
and are deterministic given it.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin

from . import cur as cur_mod
from .refine import init_factor as _init_factor
from .refine import refine as _refine
from .lstsq import LlspInstance, sketch_solve, solve_exact
from .random_matrices import make_rng
from .sketch import build_sketch
from .validation import check_matrix, check_vector


class SketchedLeastSquares(BaseEstimator, RegressorMixin):
    """Least-squares regression solved on a sketched system.

    Parameters
    ----------
    multiplier : {'perm', 'blockperm', 'asph', 'gaussian', 'none'}
        Sketch family; 'none' solves the full system exactly.
    oversample : int
        Sketch size as a multiple of the column count (s = oversample * d).
    asph_depth : int
        Depth of the abridged Hadamard transform ('asph' only).
    random_state : int
    """

    _KIND = {"perm": "perm_rows", "blockperm": "block_perm", "asph": "asph",
             "gaussian": "gaussian"}

    def __init__(self, multiplier="perm", oversample=6, asph_depth=3,
                 random_state=0):
        self.multiplier = multiplier
        self.oversample = oversample
        self.asph_depth = asph_depth
        self.random_state = random_state

    def fit(self, X, y):
        X = check_matrix(X, name="X")
        y = check_vector(y, name="y")
        inst = LlspInstance(A=X, b=y)
        if self.multiplier == "none":
            result = solve_exact(inst)
        else:
            kind = self._KIND.get(self.multiplier)
            if kind is None:
                raise ValueError(f"unknown multiplier {self.multiplier!r}")
            s = min(self.oversample * inst.d, inst.m)
            op = build_sketch(kind, s, inst.m, make_rng(self.random_state),
                              depth=self.asph_depth)
            result = sketch_solve(inst, op)
        self.coef_ = result.x
        self.residual_ = result.residual
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        X = check_matrix(X, name="X")
        return X @ self.coef_


class CurDecomposition(BaseEstimator, TransformerMixin):
    """Column-selection dimensionality reduction via sampled CUR.

    ``transform`` keeps the sampled columns (the C side), so the reduced
    representation is made of actual input features; ``inverse_transform``
    maps back through the nucleus and row factor.

    Parameters
    ----------
    rank : int
        Target rank r.
    n_rows, n_cols : int or None
        Sample counts k and l (default 15 r each).
    score_source : {'svd', 'uniform'}
        Exact leverage scores (superlinear) or the input-oblivious uniform
        distribution (sublinear cost).
    sampling : {'exact', 'expected'}
    beta, beta_bar : float
        Distribution certificates for the two sampling stages.
    random_state : int
    """

    def __init__(self, rank=2, n_rows=None, n_cols=None, score_source="svd",
                 sampling="exact", beta=1.0, beta_bar=1.0, random_state=0):
        self.rank = rank
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.score_source = score_source
        self.sampling = sampling
        self.beta = beta
        self.beta_bar = beta_bar
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(X, name="X")
        fac = cur_mod.cur_leverage(
            X, self.rank, k=self.n_rows, l=self.n_cols, beta=self.beta,
            beta_bar=self.beta_bar, mode=self.sampling,
            score_source=self.score_source, rng=make_rng(self.random_state),
        )
        self.factors_ = fac
        self.col_idx_ = fac.col_idx
        self.row_idx_ = fac.row_idx
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = check_matrix(X, name="X")
        return X[:, self.col_idx_]

    def inverse_transform(self, Xc):
        Xc = check_matrix(Xc, name="Xc")
        return Xc @ (self.factors_.U @ self.factors_.R)

    def reconstruct(self):
        """Dense approximation of the fitted matrix."""
        return self.factors_.reconstruct()


class AlternatingRefinement(BaseEstimator):
    """Low-rank factorization by sampled alternating refinement.

    Fits factors ``A_ (m x r)`` and ``B_ (r x n)`` with ``A_ @ B_ ~ X``,
    starting from a sublinear-cost crude approximation and refining it with
    the chosen solver.

    Parameters
    ----------
    rank : int
    iterations : int
        Number of alternating rounds T.
    samples : int or None
        Rows/columns sampled per half-step (default 15 r).
    solver : {'leverage', 'gaussian_embed', 'exact'}
    beta : float
    random_state : int
    """

    def __init__(self, rank=2, iterations=5, samples=None, solver="leverage",
                 beta=1.0, random_state=0):
        self.rank = rank
        self.iterations = iterations
        self.samples = samples
        self.solver = solver
        self.beta = beta
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_matrix(X, name="X")
        rng = make_rng(self.random_state)
        A0 = _init_factor(X, self.rank, rng)
        state = _refine(
            X, A0, self.rank, self.iterations, l=self.samples,
            beta=self.beta, solver=self.solver, rng=rng,
        )
        self.A_ = state.A
        self.B_ = state.B
        self.history_ = state.history
        self.n_features_in_ = X.shape[1]
        return self

    def reconstruct(self):
        """Dense approximation ``A_ @ B_`` of the fitted matrix."""
        return self.A_ @ self.B_

    def score(self, X, y=None):
        """Negative Frobenius error of the fitted approximation on X."""
        X = check_matrix(X, name="X")
        return -float(np.linalg.norm(X - self.reconstruct()))
