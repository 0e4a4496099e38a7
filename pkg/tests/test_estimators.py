import numpy as np
import pytest
from sklearn.base import clone

from levcur.estimators import (
    AlternatingRefinement,
    CurDecomposition,
    SketchedLeastSquares,
)
from levcur.generators import gen_cauchy, gen_gaussian_llsp
from levcur.random_matrices import FactorGaussianSpec, factor_gaussian, make_rng, perturb


def test_sketched_lstsq_fit_predict():
    inst = gen_gaussian_llsp(512, 8, make_rng(1))
    est = SketchedLeastSquares(multiplier="perm", oversample=6, random_state=0)
    est.fit(inst.A, inst.b)
    assert est.coef_.shape == (8,)
    pred = est.predict(inst.A)
    assert np.linalg.norm(pred - inst.b) == pytest.approx(est.residual_, rel=1e-9)
    exact = SketchedLeastSquares(multiplier="none").fit(inst.A, inst.b)
    assert est.residual_ >= exact.residual_ * (1 - 1e-9)


def test_sketched_lstsq_get_params_and_clone():
    est = SketchedLeastSquares(multiplier="asph", oversample=4, random_state=3)
    params = est.get_params()
    assert params["multiplier"] == "asph"
    est2 = clone(est)
    assert est2.get_params() == params


def test_sketched_lstsq_deterministic():
    inst = gen_gaussian_llsp(256, 6, make_rng(2))
    a = SketchedLeastSquares(random_state=7).fit(inst.A, inst.b)
    b = SketchedLeastSquares(random_state=7).fit(inst.A, inst.b)
    assert np.array_equal(a.coef_, b.coef_)


def test_sketched_lstsq_rejects_bad_multiplier():
    inst = gen_gaussian_llsp(64, 4, make_rng(3))
    with pytest.raises(ValueError):
        SketchedLeastSquares(multiplier="dft").fit(inst.A, inst.b)


def _low_rank(n, r, seed):
    spec = FactorGaussianSpec(kind="two_sided", m=n, n=n, rho=r,
                              sigma=np.ones(r))
    M, _ = factor_gaussian(spec, make_rng(seed))
    return perturb(M, 1e-6, make_rng(seed + 1))


def test_cur_decomposition_transform_shapes():
    X = _low_rank(80, 4, seed=10)
    est = CurDecomposition(rank=4, random_state=0).fit(X)
    Xc = est.transform(X)
    assert Xc.shape == (80, len(est.col_idx_))
    back = est.inverse_transform(Xc)
    assert back.shape == X.shape
    rel = np.linalg.norm(X - back) / np.linalg.norm(X)
    assert rel <= 1e-3


def test_cur_decomposition_uniform_mode():
    X = _low_rank(400, 5, seed=20)
    est = CurDecomposition(rank=5, score_source="uniform", random_state=1)
    est.fit(X)
    rel = np.linalg.norm(X - est.reconstruct()) / np.linalg.norm(X)
    assert rel <= 1e-3
    assert est.factors_.entries_accessed < X.size


def test_alternating_refinement_fits():
    X = gen_cauchy(150, make_rng(30))
    est = AlternatingRefinement(rank=6, iterations=4, random_state=2).fit(X)
    assert est.A_.shape == (150, 6)
    assert est.B_.shape == (6, 150)
    assert len(est.history_) == 5
    assert est.history_[-1].err_ratio <= 2.0
    assert est.score(X) <= 0.0


def test_alternating_refinement_clone_and_params():
    est = AlternatingRefinement(rank=3, iterations=2, solver="exact")
    c = clone(est)
    assert c.get_params()["solver"] == "exact"
