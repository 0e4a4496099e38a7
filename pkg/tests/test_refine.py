import math

import numpy as np
import pytest

from levcur.generators import gen_cauchy, gen_regutools
from levcur.linalg import principal_angle_dist, svd, thin_qr, truncate
from levcur.random_matrices import FactorGaussianSpec, factor_gaussian, make_rng
from levcur.refine import (
    MetricContext,
    _solve_A,
    _solve_B,
    contraction_params,
    init_factor,
    refine,
    refine_step,
)


def _diag_spectrum_matrix(n, sigma, seed):
    rng = make_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (U * sigma) @ V.T, U, V


def test_contraction_c_limit():
    # sigma_r=1, sigma_{r+1}=0.5, delta=0.5, eps -> 0: c -> 0.5/sqrt(0.75)
    cp = contraction_params(1.0, 0.5, 0.5, 0.5, 1e-15)
    assert cp.c == pytest.approx(0.5773502691896258, rel=1e-9)
    assert cp.c < 1.0


def test_contraction_tau_formula():
    cp = contraction_params(1.0, 0.5, 0.5, 0.5, 1.0 / 16.0)
    assert cp.theta == pytest.approx(1.0)
    assert cp.tau == 3


def test_contraction_delta_zero_flag():
    cp = contraction_params(1.0, 0.5, 0.5, 0.0, 0.1)
    assert cp.c == math.inf


def test_contraction_input_validation():
    with pytest.raises(ValueError):
        contraction_params(1.0, 0.5, 0.5, 1.0, 0.1)   # delta >= 1
    with pytest.raises(ValueError):
        contraction_params(0.5, 0.5, 0.5, 0.5, 0.1)   # no gap
    with pytest.raises(ValueError):
        contraction_params(1.0, 0.5, 0.5, 0.5, 0.0)   # eps <= 0


def test_contraction_conditions_imply_c_below_one():
    rng = make_rng(210)
    checked = 0
    for _ in range(500):
        sr = 1.0
        sr1 = float(rng.uniform(0.01, 0.99))
        theta = float(rng.uniform(1.0, 4.0))
        bar = theta * sr1
        delta = float(rng.uniform(0.01, 0.95))
        eps = float(rng.uniform(1e-4, 0.5))
        cp = contraction_params(sr, sr1, bar, delta, eps)
        if cp.conditions_hold:
            checked += 1
            assert cp.c < 1.0
    assert checked > 20


def test_init_factor_rank_r_is_near_exact():
    spec = FactorGaussianSpec(kind="two_sided", m=60, n=50, rho=4,
                              sigma=np.linspace(2, 1, 4))
    M, _ = factor_gaussian(spec, make_rng(220))
    Ur = truncate(svd(M), 4).Ur
    got = 0
    for t in range(10):
        A0 = init_factor(M, 4, make_rng(221, t))
        assert np.linalg.norm(A0.T @ A0 - np.eye(4)) <= 1e-10
        if principal_angle_dist(A0, Ur) <= 1e-6:
            got += 1
    assert got >= 8


def test_init_factor_shaw_aligns():
    M = gen_regutools("shaw", 400)
    Ur = truncate(svd(M), 10).Ur
    hits = 0
    for t in range(40):
        A0 = init_factor(M, 10, make_rng(222, t))
        if principal_angle_dist(A0, Ur) < 1.0:
            hits += 1
    assert hits >= 38


def test_refine_step_consistent_recovery():
    rng = make_rng(230)
    A = rng.standard_normal((40, 3))
    B0 = rng.standard_normal((3, 25))
    M = A @ B0
    B, A_next = refine_step(M, A, l=12, beta=1.0, solver="leverage",
                            rng=make_rng(231))
    assert np.allclose(B, B0, atol=1e-8)
    # A_next spans range(A)
    Q1 = thin_qr(A)[0]
    Q2 = thin_qr(A_next)[0]
    assert principal_angle_dist(Q1, Q2) <= 1e-8


def test_refine_step_requires_l_at_least_r():
    M = np.eye(8)
    A = np.eye(8)[:, :3]
    with pytest.raises(ValueError):
        refine_step(M, A, l=2, beta=1.0, solver="exact", rng=make_rng(0))


def test_exact_solver_monotone_err_ratio():
    M = gen_cauchy(300, make_rng(240))
    A0 = init_factor(M, 10, make_rng(241))
    st = refine(M, A0, 10, T=8, solver="exact", rng=make_rng(242))
    errs = [h.err_ratio for h in st.history]
    assert all(b <= a * (1 + 1e-9) for a, b in zip(errs, errs[1:]))
    assert all(e >= 1 - 1e-6 for e in errs)


def test_refine_T0_single_record():
    M = gen_cauchy(100, make_rng(243))
    A0 = init_factor(M, 5, make_rng(244))
    st = refine(M, A0, 5, T=0, solver="leverage", rng=make_rng(245))
    assert len(st.history) == 1
    assert st.history[0].iter == 0
    assert st.B.shape == (5, 100)


def test_refine_leverage_converges_on_shaw():
    M = gen_regutools("shaw", 400)
    r = 10
    good = 0
    for seed in range(10):
        A0 = init_factor(M, r, make_rng(246, seed))
        st = refine(M, A0, r, T=5, solver="leverage", rng=make_rng(247, seed))
        if (st.history[5].err_ratio <= 1.5
                and st.history[5].err_ratio <= st.history[0].err_ratio):
            good += 1
    assert good >= 9


def test_gaussian_embed_regenerates_and_converges():
    M = gen_cauchy(200, make_rng(248))
    A0 = init_factor(M, 8, make_rng(249))
    st = refine(M, A0, 8, T=4, solver="gaussian_embed", rng=make_rng(250))
    assert st.history[-1].err_ratio <= 2.0


def test_one_step_contraction_bound():
    # spectrum (1, 1, 0.1, 0.1, 0...), r=2, delta0=0.3, l=15r; the measured
    # dist(B, V_r) obeys the theorem's RHS with eps backed out as 0.5
    n, r = 60, 2
    sigma = np.zeros(n)
    sigma[:2] = 1.0
    sigma[2:4] = 0.1
    M, U, V = _diag_spectrum_matrix(n, sigma, seed=200)
    Ur, Vr = U[:, :r], V[:, :r]
    delta0 = 0.3
    theta_rot = np.arcsin(delta0)
    A = np.column_stack(
        [Ur[:, 0], Ur[:, 1] * np.cos(theta_rot) + U[:, 5] * np.sin(theta_rot)]
    )
    assert principal_angle_dist(A, Ur) == pytest.approx(delta0, abs=1e-9)
    barF = np.sqrt(2) * 0.1
    eps = 0.5
    rhs = (delta0 / np.sqrt(1 - delta0**2) * 0.1
           + 2 * eps / np.sqrt(1 - delta0**2) * barF)
    hits = 0
    for t in range(100):
        B = _solve_B(M, A, 30, 1.0, "leverage", make_rng(201, t))
        if principal_angle_dist(thin_qr(B.T)[0], Vr) <= rhs:
            hits += 1
    assert hits >= 90


def test_long_run_plateau_is_bounded():
    n, r = 60, 2
    sigma = np.zeros(n)
    sigma[:2] = 1.0
    sigma[2:4] = 0.1
    M, U, V = _diag_spectrum_matrix(n, sigma, seed=200)
    Ur = U[:, :r]
    delta0 = 0.3
    theta_rot = np.arcsin(delta0)
    A0 = np.column_stack(
        [Ur[:, 0], Ur[:, 1] * np.cos(theta_rot) + U[:, 5] * np.sin(theta_rot)]
    )
    barF = np.sqrt(2) * 0.1
    theta = barF / 0.1
    st = refine(M, A0, r, T=20, l=30, solver="leverage", rng=make_rng(203))
    # back out the effective sampling eps from the early B half-steps
    eps_effs = []
    for t in range(1, 8):
        d_prev = st.history[t - 1].distA
        first = d_prev / np.sqrt(1 - d_prev**2) * 0.1
        e = (st.history[t].distB - first) * np.sqrt(1 - d_prev**2) / (2 * barF)
        eps_effs.append(max(e, 0.0))
    eps_eff = max(eps_effs)
    assert eps_eff > 0
    plateau = max(h.distA for h in st.history[10:])
    assert plateau <= 8 * theta * eps_eff


def test_transpose_mirror_of_half_steps():
    # the A-update is exactly the transposed B-update
    rng = make_rng(260)
    M = rng.standard_normal((30, 24))
    B = rng.standard_normal((4, 24))
    A1 = _solve_A(M, B, 10, 1.0, "leverage", make_rng(261))
    B1 = _solve_B(M.T, B.T, 10, 1.0, "leverage", make_rng(261))
    assert np.allclose(A1, B1.T, atol=1e-10)
    A2 = _solve_A(M, B, 10, 1.0, "exact", make_rng(0))
    B2 = _solve_B(M.T, B.T, 10, 1.0, "exact", make_rng(0))
    assert np.allclose(A2, B2.T, atol=1e-10)


def test_refine_with_beta_below_one():
    M = gen_cauchy(150, make_rng(290))
    A0 = init_factor(M, 5, make_rng(291))
    st = refine(M, A0, 5, T=4, beta=0.5, solver="leverage", rng=make_rng(292))
    assert st.history[-1].err_ratio <= 2.0


def test_err_ratio_lower_bound_and_metrics_range():
    M = gen_cauchy(150, make_rng(270))
    A0 = init_factor(M, 6, make_rng(271))
    st = refine(M, A0, 6, T=3, solver="leverage", rng=make_rng(272))
    for h in st.history:
        assert h.err_ratio >= 1 - 1e-6
        assert 0.0 <= h.distA <= 1.0 + 1e-9
        assert 0.0 <= h.distB <= 1.0 + 1e-9
        assert h.millis >= 0.0


def test_metric_context_reuse():
    M = gen_cauchy(100, make_rng(280))
    ctx = MetricContext(M, 5)
    A0 = init_factor(M, 5, make_rng(281))
    st1 = refine(M, A0, 5, T=2, solver="exact", rng=make_rng(282),
                 metrics=ctx)
    st2 = refine(M, A0, 5, T=2, solver="exact", rng=make_rng(282))
    for h1, h2 in zip(st1.history, st2.history):
        assert h1.err_ratio == pytest.approx(h2.err_ratio, rel=1e-12)
