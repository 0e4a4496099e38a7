"""Synthetic input generators for the benchmark experiments.

All generators are deterministic under an explicit seed (or take no
randomness at all) and produce finite dense matrices.  The ill-posed test
problems are quadrature discretizations of the classical Fredholm kernels;
entry-level fidelity to any particular reference code is not a goal, but
the numerical ranks at tolerance 1e-6 are pinned by tests.
"""

import numpy as np

from .linalg import svd, thin_qr
from .lstsq import LlspInstance
from .random_matrices import as_rng, gaussian
from .validation import check_matrix

REGUTOOLS_NAMES = ("baart", "shaw", "gravity", "wing", "foxgood", "laplace")


def numerical_rank(M, tol=1e-6):
    """Count of singular values above ``tol * sigma_1``."""
    s = svd(check_matrix(M)).sigma
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def gen_gaussian_llsp(m, d, rng):
    """Gaussian least-squares instance with a near-consistent right side.

    ``b = A w / ||A w|| + 0.001 v / ||v||`` for Gaussian w, v, so b lies in
    range(A) up to a 1e-3 term and the optimal residual is at most 0.001.
    """
    if not d < m:
        raise ValueError(f"need d < m, got {m}x{d}")
    rng = as_rng(rng)
    A = gaussian(m, d, rng)
    w = rng.standard_normal(d)
    v = rng.standard_normal(m)
    Aw = A @ w
    b = Aw / np.linalg.norm(Aw) + 0.001 * v / np.linalg.norm(v)
    return LlspInstance(A=A, b=b)


def gen_ill_conditioned(m, d, rng):
    """Random matrix with the fixed ill-conditioned spectrum.

    ``sigma_j = 10^(5-j)`` for j = 1..14 and ``10^-10`` beyond, with random
    orthogonal singular-vector factors (Q factors of thin QR of independent
    Gaussians).
    """
    rng = as_rng(rng)
    U = thin_qr(gaussian(m, d, rng))[0]
    V = thin_qr(gaussian(d, d, rng))[0]
    j = np.arange(1, d + 1)
    s = np.where(j <= 14, 10.0 ** (5.0 - j), 1e-10)
    return (U * s) @ V.T


def gen_cauchy(n, rng):
    """Cauchy matrix ``1 / (X_i - Y_j)`` with X ~ U(0,100), Y ~ U(100,200).

    All entries are negative and finite (the intervals are disjoint with
    probability 1); the singular values decay fast.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = as_rng(rng)
    x = rng.uniform(0.0, 100.0, size=n)
    y = rng.uniform(100.0, 200.0, size=n)
    return 1.0 / (x[:, None] - y[None, :])


def gen_single_layer(n):
    """Discretized single-layer potential between two concentric circles.

    Sources on the unit circle, targets on the radius-2 circle, n uniform
    quadrature points each (trapezoidal weights, which are uniform on a
    periodic grid): ``M[i, j] = (2 pi / n) log ||p_i - q_j||``.  The matrix
    is circulant-like (entries depend only on i - j mod n) and deterministic.
    """
    if n < 10:
        raise ValueError(f"n must be >= 10, got {n}")
    theta = 2.0 * np.pi * np.arange(n) / n
    # ||p_i - q_j||^2 = 4 + 1 - 4 cos(theta_i - theta_j)
    diff = theta[:, None] - theta[None, :]
    dist2 = 5.0 - 4.0 * np.cos(diff)
    return (2.0 * np.pi / n) * 0.5 * np.log(dist2)


def _midpoints(n, length):
    h = length / n
    return h * (np.arange(n) + 0.5), h


def _shaw(n):
    # Image-restoration kernel on [-pi/2, pi/2]^2, midpoint rule.
    h = np.pi / n
    t = -np.pi / 2.0 + h * (np.arange(n) + 0.5)
    co = np.cos(t)
    psi = np.pi * np.sin(t)
    ss = psi[:, None] + psi[None, :]
    core = np.ones_like(ss)
    nz = ss != 0
    core[nz] = np.sin(ss[nz]) / ss[nz]
    return h * ((co[:, None] + co[None, :]) * core) ** 2


def _baart(n):
    # K(s, t) = exp(s cos t) on [0, pi/2] x [0, pi], midpoint rule.
    s, _ = _midpoints(n, np.pi / 2.0)
    t, ht = _midpoints(n, np.pi)
    return ht * np.exp(s[:, None] * np.cos(t)[None, :])


def _gravity(n, depth=0.22):
    # 1-D gravity surveying: K(s, t) = depth (depth^2 + (s-t)^2)^{-3/2}.
    # The depth 0.22 pins the numerical rank at tolerance 1e-6 to 25.
    s, h = _midpoints(n, 1.0)
    d2 = (s[:, None] - s[None, :]) ** 2
    return h * depth * (depth**2 + d2) ** (-1.5)


def _wing(n):
    # K(s, t) = t exp(-s t^2) on [0, 1]^2, midpoint rule.
    s, h = _midpoints(n, 1.0)
    t = s
    return h * t[None, :] * np.exp(-s[:, None] * (t**2)[None, :])


def _foxgood(n):
    # Severely ill-posed: K(s, t) = sqrt(s^2 + t^2) on [0, 1]^2.
    s, h = _midpoints(n, 1.0)
    return h * np.sqrt(s[:, None] ** 2 + (s**2)[None, :])


def _laplace(n, lo=1e-3, hi=1e3):
    # Laplace-transform kernel K(s, t) = exp(-s t), midpoint rule on a
    # log-uniform grid spanning six decades (the natural collocation for
    # inverse Laplace problems); pins the 1e-6 numerical rank to 25.
    du = (np.log(hi) - np.log(lo)) / n
    t = np.exp(np.log(lo) + du * (np.arange(n) + 0.5))
    w = t * du
    return np.exp(-np.outer(t, t)) * w[None, :]


_REGUTOOLS = {
    "baart": _baart,
    "shaw": _shaw,
    "gravity": _gravity,
    "wing": _wing,
    "foxgood": _foxgood,
    "laplace": _laplace,
}


def gen_regutools(name, n):
    """Deterministic n x n discretization of a named Fredholm test problem.

    Supported names: baart, shaw, gravity, wing, foxgood, laplace.
    """
    if n < 8:
        raise ValueError(f"n must be >= 8, got {n}")
    try:
        fn = _REGUTOOLS[name]
    except KeyError:
        raise ValueError(
            f"unknown problem {name!r}; choose from {REGUTOOLS_NAMES}"
        ) from None
    return fn(n)


def gen_delta(m, n, i, j):
    """Rank-1 indicator matrix: 1 at (i, j), zero elsewhere."""
    if not (0 <= i < m and 0 <= j < n):
        raise ValueError(f"(i, j) = ({i}, {j}) out of range for {m}x{n}")
    M = np.zeros((m, n))
    M[i, j] = 1.0
    return M
