import numpy as np
import pytest

from levcur.linalg import principal_angle_dist, svd
from levcur.random_matrices import gaussian, make_rng, perturb
from levcur.sampling import (
    DegenerateSampleError,
    IllPosedScoresError,
    LeverageScores,
    SampleDist,
    apply_plan,
    make_dist,
    sample_exact,
    sample_expected,
    scores_from_orthogonal,
    scores_of_lra,
    scores_of_matrix,
    uniform_dist,
)

from conftest import random_orthonormal


def test_scores_identity_columns():
    V = np.eye(5)[:, :3]
    sc = scores_from_orthogonal(V)
    assert np.allclose(sc.gamma, [1, 1, 1, 0, 0], atol=1e-15)
    assert sc.r == 3


def test_scores_sum_to_r(rng):
    V = random_orthonormal(200, 7, rng)
    sc = scores_from_orthogonal(V)
    assert abs(sc.gamma.sum() - 7) <= 1e-9


def test_scores_right_orthogonal_invariance(rng):
    V = random_orthonormal(60, 5, rng)
    Q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
    s1 = scores_from_orthogonal(V)
    s2 = scores_from_orthogonal(V @ Q)
    assert np.allclose(s1.gamma, s2.gamma, atol=1e-10)


def test_scores_equal_row_norms():
    V = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]]) / 2.0
    sc = scores_from_orthogonal(V)
    assert np.allclose(sc.gamma, 0.5)


def test_scores_reject_non_orthonormal():
    with pytest.raises(ValueError):
        scores_from_orthogonal(np.ones((4, 2)))


def test_scores_of_matrix_diag():
    row, col = scores_of_matrix(np.diag([3.0, 2.0, 1.0]), 2)
    assert np.allclose(col.gamma, [1, 1, 0], atol=1e-12)
    assert np.allclose(row.gamma, [1, 1, 0], atol=1e-12)


def test_scores_of_matrix_gap_check():
    with pytest.raises(IllPosedScoresError):
        scores_of_matrix(np.diag([2.0, 2.0, 1.0]), 1)


def test_factor_score_sharing():
    # col scores of M = G H equal col scores of H (rank-r factors)
    rng = make_rng(21)
    G = gaussian(40, 6, rng)
    H = gaussian(6, 30, rng)
    M = G @ H
    _, col_M = scores_of_matrix(M, 6)
    _, col_H = scores_of_matrix(H, 6)
    assert np.allclose(col_M.gamma, col_H.gamma, atol=1e-8)


def test_wide_gaussian_scores_near_uniform():
    # relative deviation of scores from r/n stays bounded in >= 95/100 trials
    r, n = 5, 10_000
    hits = 0
    for t in range(100):
        G = gaussian(r, n, make_rng(100, t))
        _, col = scores_of_matrix(G, r)
        dev = np.max(np.abs(col.gamma - r / n)) * n / r
        if dev <= 8.0:
            hits += 1
    assert hits >= 95


def test_scores_of_lra_orthonormal_left(rng):
    A = random_orthonormal(30, 4, rng)
    B = np.hstack([np.eye(4), np.zeros((4, 8))])
    row, col = scores_of_lra(A, B)
    assert np.allclose(row.gamma, np.einsum("ij,ij->i", A, A), atol=1e-12)


def test_scores_of_lra_matches_dense_oracle():
    rng = make_rng(33)
    A = gaussian(50, 6, rng)
    B = gaussian(6, 40, rng)
    row1, col1 = scores_of_lra(A, B)
    row2, col2 = scores_of_matrix(A @ B, 6)
    assert np.allclose(row1.gamma, row2.gamma, atol=1e-9)
    assert np.allclose(col1.gamma, col2.gamma, atol=1e-9)


def test_scores_of_lra_rotation_invariance():
    rng = make_rng(35)
    A = gaussian(25, 4, rng)
    B = gaussian(4, 20, rng)
    Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    row1, col1 = scores_of_lra(A, B)
    row2, col2 = scores_of_lra(A @ Q, Q.T @ B)
    assert np.allclose(row1.gamma, row2.gamma, atol=1e-10)
    assert np.allclose(col1.gamma, col2.gamma, atol=1e-10)


def test_make_dist_beta_one_exact():
    sc = LeverageScores(side="column", r=2, gamma=np.array([1.0, 0.8, 0.2]))
    dist = make_dist(sc, 1.0)
    assert np.array_equal(dist.p, sc.gamma / 2)


def test_make_dist_beta_small_is_near_uniform():
    sc = LeverageScores(side="column", r=1, gamma=np.array([1.0, 0.0, 0.0]))
    dist = make_dist(sc, 1e-12)
    assert np.allclose(dist.p, 1 / 3, atol=1e-11)


def test_make_dist_certificate(rng):
    V = random_orthonormal(40, 5, rng)
    sc = scores_from_orthogonal(V)
    for beta in (0.3, 0.7, 1.0):
        dist = make_dist(sc, beta)
        mask = sc.gamma > 0
        assert np.all(dist.p[mask] * sc.r / sc.gamma[mask] >= beta * (1 - 1e-12))


def test_uniform_dist_certificates():
    sc = LeverageScores(side="column", r=2, gamma=np.full(8, 0.25))
    assert uniform_dist(8, sc).beta == pytest.approx(1.0)
    sc2 = LeverageScores(side="column", r=1,
                         gamma=np.array([1.0] + [0.0] * 9))
    assert uniform_dist(10, sc2).beta == pytest.approx(0.1)


def test_uniform_dist_without_scores():
    dist = uniform_dist(7)
    assert np.allclose(dist.p, 1 / 7)
    assert dist.beta == 1.0


def test_uniform_beta_bound_wide_gaussian():
    # beta* >= 1/(16 e^2 (1 + 4x)) at x = 3 + ln n, in >= 95/100 trials
    r, n = 5, 2**14
    threshold = 1.0 / (16 * np.e**2 * (1 + 4 * (3 + np.log(n))))
    hits = 0
    for t in range(100):
        G = gaussian(r, n, make_rng(200, t))
        _, col = scores_of_matrix(G, r)
        if uniform_dist(n, col).beta >= threshold:
            hits += 1
    assert hits >= 95


def test_sample_exact_single_index():
    dist = SampleDist(p=np.array([1.0]), beta=1.0, r=1)
    plan = sample_exact(dist, 5, make_rng(0))
    assert np.all(plan.picks == 0)
    assert np.allclose(plan.scales, 1 / np.sqrt(5))


def test_sample_exact_frequencies():
    p = np.array([0.5, 0.3, 0.2])
    dist = SampleDist(p=p, beta=1.0, r=1)
    plan = sample_exact(dist, 100_000, make_rng(1))
    freq = np.bincount(plan.picks, minlength=3) / plan.l
    assert np.all(np.abs(freq - p) <= 0.01)


def test_sample_exact_scale_formula_bit_exact():
    p = np.array([0.5, 0.3, 0.2])
    dist = SampleDist(p=p, beta=1.0, r=1)
    plan = sample_exact(dist, 1000, make_rng(2))
    assert np.array_equal(plan.scales, 1.0 / np.sqrt(plan.l * p[plan.picks]))


def test_sample_exact_unbiased_identity():
    # E[(SD)(SD)^T] = I, Monte-Carlo over 10^4 plans
    n, l = 5, 4
    p = np.array([0.35, 0.25, 0.2, 0.12, 0.08])
    dist = SampleDist(p=p, beta=1.0, r=1)
    acc = np.zeros((n, n))
    trials = 10_000
    for t in range(trials):
        plan = sample_exact(dist, l, make_rng(300, t))
        SD = np.zeros((n, l))
        SD[plan.picks, np.arange(l)] = plan.scales
        acc += SD @ SD.T
    assert np.max(np.abs(acc / trials - np.eye(n))) <= 0.05


def test_sample_expected_saturation():
    dist = SampleDist(p=np.full(4, 0.25), beta=1.0, r=1)
    plan = sample_expected(dist, 16, make_rng(3))
    assert np.array_equal(plan.picks, np.arange(4))
    assert np.all(plan.scales == 1.0)


def test_sample_expected_scale_formula_bit_exact():
    p = np.array([0.5, 0.3, 0.15, 0.05])
    dist = SampleDist(p=p, beta=1.0, r=1)
    plan = sample_expected(dist, 3, make_rng(4))
    assert np.array_equal(
        plan.scales, 1.0 / np.minimum(1.0, np.sqrt(plan.l * p[plan.picks]))
    )
    assert np.all(np.diff(plan.picks) > 0)


def test_sample_expected_count_matches_poisson_binomial():
    n = 12
    p = np.linspace(1, 2, n)
    p /= p.sum()
    l = 6
    dist = SampleDist(p=p, beta=1.0, r=1)
    q = np.minimum(1.0, l * p)
    expected = q.sum()
    var = np.sum(q * (1 - q))
    trials = 10_000
    counts = [sample_expected(dist, l, make_rng(400, t)).size
              for t in range(trials)]
    sigma = np.sqrt(var / trials)
    assert abs(np.mean(counts) - expected) <= 3 * sigma


def test_sample_expected_uniform_half():
    n, l = 20, 10
    dist = SampleDist(p=np.full(n, 1 / n), beta=1.0, r=1)
    trials = 4000
    incl = np.zeros(n)
    for t in range(trials):
        plan = sample_expected(dist, l, make_rng(500, t))
        incl[plan.picks] += 1
    # each index included with probability l/n = 0.5
    assert np.all(np.abs(incl / trials - 0.5) <= 0.05)


def test_apply_plan_identity():
    from levcur.sampling import SamplingPlan
    M = make_rng(5).standard_normal((4, 6))
    plan = SamplingPlan(mode="expected", l=4, picks=np.arange(4),
                        scales=np.ones(4))
    assert np.array_equal(apply_plan(M, plan, axis="rows"), M)


def test_apply_plan_single_scaled_pick():
    from levcur.sampling import SamplingPlan
    M = make_rng(6).standard_normal((4, 6))
    plan = SamplingPlan(mode="exact", l=1, picks=np.array([2]),
                        scales=np.array([2.0]))
    assert np.array_equal(apply_plan(M, plan, axis="rows"), 2.0 * M[[2]])
    assert np.array_equal(apply_plan(M.T, plan, axis="cols"), 2.0 * M.T[:, [2]])


def test_apply_plan_matches_matrix_oracle():
    M = make_rng(7).standard_normal((8, 6))
    dist = SampleDist(p=np.full(8, 1 / 8), beta=1.0, r=1)
    plan = sample_exact(dist, 5, make_rng(8))
    S = np.zeros((8, 5))
    S[plan.picks, np.arange(5)] = 1.0
    D = np.diag(plan.scales)
    oracle = D.T @ S.T @ M
    assert np.max(np.abs(apply_plan(M, plan, axis="rows") - oracle)) <= 1e-14


def test_apply_plan_out_of_range():
    from levcur.sampling import SamplingPlan
    plan = SamplingPlan(mode="exact", l=1, picks=np.array([9]),
                        scales=np.array([1.0]))
    with pytest.raises(ValueError):
        apply_plan(np.ones((4, 4)), plan, axis="rows")


def test_plan_audit_rows():
    from levcur.sampling import plan_to_rows
    dist = SampleDist(p=np.array([0.5, 0.5]), beta=1.0, r=1)
    plan = sample_exact(dist, 3, make_rng(9))
    rows = plan_to_rows(plan)
    assert len(rows) == 3
    for (mode, l, pick, scale), p, s in zip(rows, plan.picks, plan.scales):
        assert mode == "exact" and l == 3
        assert pick == p and scale == s


def test_wide_gaussian_near_orthogonality():
    # ||(1/n) G G^T - I||_F^2 <= 0.05 in >= 48/50 trials at r=4, n=2^14
    r, n = 4, 2**14
    hits = 0
    for t in range(50):
        G = gaussian(r, n, make_rng(600, t))
        dev = np.linalg.norm(G @ G.T / n - np.eye(r)) ** 2
        if dev <= 0.05:
            hits += 1
    assert hits >= 48


def test_score_column_norm_sandwich():
    # sigma_r^2 <= ||g_i||^2 / gamma_i <= sigma_1^2, exact on 100 cases
    rng = make_rng(700)
    for _ in range(100):
        r = int(rng.integers(2, 6))
        n = r + int(rng.integers(2, 20))
        G = gaussian(r, n, rng)
        s = svd(G).sigma
        _, col = scores_of_matrix(G, r)
        norms2 = np.einsum("ij,ij->j", G, G)
        mask = col.gamma > 1e-14
        ratio = norms2[mask] / col.gamma[mask]
        assert np.all(ratio >= s[-1] ** 2 * (1 - 1e-9))
        assert np.all(ratio <= s[0] ** 2 * (1 + 1e-9))


def test_perturbation_stability_of_top_space():
    # principal angle between r-top right spaces of M and M+E is bounded
    # by 2 ||E||_F / g * 1.1 when ||E||_F <= g/4
    rng = make_rng(800)
    n, r = 30, 4
    sigma = np.concatenate([np.linspace(10, 6, r), np.linspace(2, 0.5, n - r)])
    g_gap = 6.0 - 2.0
    for t in range(20):
        U, _ = np.linalg.qr(rng.standard_normal((n, n)))
        V, _ = np.linalg.qr(rng.standard_normal((n, n)))
        M = (U * sigma) @ V.T
        E = rng.standard_normal((n, n))
        E *= (g_gap / 4.0) / np.linalg.norm(E) * 0.9
        normE_F = np.linalg.norm(E)
        normE_2 = np.linalg.svd(E, compute_uv=False)[0]
        g = g_gap - 2 * normE_2
        assert g > 0
        f1 = svd(M)
        f2 = svd(M + E)
        d = principal_angle_dist(f1.Vt[:r].T, f2.Vt[:r].T)
        assert d <= 2 * normE_F / g * 1.1
