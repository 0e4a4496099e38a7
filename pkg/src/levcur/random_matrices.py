"""Seedable random matrix generation: Gaussian, factor-Gaussian of prescribed
rank, controlled perturbations, and expected-norm helpers.

Randomness is always explicit.  :func:`make_rng` builds a NumPy ``Generator``
on the PCG64 counter-based bit generator from a ``(seed, stream)`` pair;
identical pairs give identical draws within this implementation (bit-exact
reproducibility across implementations is a non-goal).  Parallel trials
should derive their generators as ``make_rng(seed, trial_index)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .linalg import svd
from .validation import check_matrix, check_positive

RNG_ALGORITHM = "pcg64"

# Conditioning gate for generated fixed factors of left/right factor-Gaussian
# matrices ("well-conditioned" per the input model; threshold implementer-chosen).
FIXED_FACTOR_MAX_COND = 100.0


def make_rng(seed, stream=0):
    """Generator for ``(seed, stream)``; independent streams per trial index."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))


def as_rng(rng):
    """Accept a Generator, an int seed, or None (seed 0)."""
    if isinstance(rng, np.random.Generator):
        return rng
    if rng is None:
        return make_rng(0)
    return make_rng(int(rng))


def gaussian(m, n, rng):
    """m x n matrix of i.i.d. standard normal entries; advances ``rng``."""
    if m < 1 or n < 1:
        raise ValueError(f"dimensions must be positive, got {m}x{n}")
    return as_rng(rng).standard_normal((m, n))


@dataclass(frozen=True)
class FactorGaussianSpec:
    """Recipe for a random matrix of exact rank ``rho``.

    kind 'two_sided' produces ``G1 @ diag(sigma) @ G2`` with both factors
    Gaussian; 'left' produces ``G1 @ fixed_factor``; 'right' produces
    ``fixed_factor @ G2``.  ``sigma`` (two_sided only) must be positive and
    non-increasing.
    """

    kind: str
    m: int
    n: int
    rho: int
    sigma: np.ndarray = None
    fixed_factor: np.ndarray = None

    def __post_init__(self):
        if self.kind not in ("left", "right", "two_sided"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if not 1 <= self.rho <= min(self.m, self.n):
            raise ValueError(f"rho must be in [1, min(m, n)], got {self.rho}")
        if self.kind == "two_sided":
            s = np.asarray(self.sigma, dtype=np.float64)
            if s.shape != (self.rho,):
                raise ValueError(f"sigma must have length rho={self.rho}")
            if np.any(s <= 0) or np.any(np.diff(s) > 0):
                raise ValueError("sigma must be positive and non-increasing")
            object.__setattr__(self, "sigma", s)
        else:
            F = check_matrix(self.fixed_factor, name="fixed_factor")
            want = (self.rho, self.n) if self.kind == "left" else (self.m, self.rho)
            if F.shape != want:
                raise ValueError(f"fixed_factor must be {want}, got {F.shape}")
            object.__setattr__(self, "fixed_factor", F)


def random_fixed_factor(rows, cols, rng, max_cond=FIXED_FACTOR_MAX_COND):
    """Well-conditioned random matrix for use as a fixed factor.

    Draws Gaussians until the condition number is below ``max_cond`` (a
    Gaussian with aspect ratio away from 1 passes almost surely on the first
    draw).
    """
    rng = as_rng(rng)
    for _ in range(16):
        F = gaussian(rows, cols, rng)
        s = svd(F).sigma
        if s[-1] > 0 and s[0] / s[-1] <= max_cond:
            return F
    raise RuntimeError(
        f"failed to draw a {rows}x{cols} factor with cond <= {max_cond}"
    )


def factor_gaussian(spec, rng):
    """Draw a matrix of exact rank ``spec.rho`` together with its factors.

    Returns
    -------
    M : ndarray, shape (m, n)
    factors : dict
        'left' and 'right' hold the m x rho and rho x n factors whose
        product is M (for two_sided the inner diagonal is folded into the
        right factor, which is returned separately under 'right_gaussian').

    Raises
    ------
    RuntimeError
        If two consecutive draws are numerically rank-deficient (a
        probability-zero event for Gaussian factors).
    """
    rng = as_rng(rng)
    for attempt in range(2):
        if spec.kind == "two_sided":
            G1 = gaussian(spec.m, spec.rho, rng)
            G2 = gaussian(spec.rho, spec.n, rng)
            left, right = G1, spec.sigma[:, None] * G2
            factors = {"left": G1, "right": right, "right_gaussian": G2,
                       "sigma": spec.sigma}
        elif spec.kind == "left":
            G1 = gaussian(spec.m, spec.rho, rng)
            left, right = G1, spec.fixed_factor
            factors = {"left": G1, "right": spec.fixed_factor}
        else:
            G2 = gaussian(spec.rho, spec.n, rng)
            left, right = spec.fixed_factor, G2
            factors = {"left": spec.fixed_factor, "right": G2}
        # rank(M) = rho exactly when both factors have full rank rho; checking
        # the thin factors avoids an SVD of the full m x n product.
        if svd(left).sigma[-1] > 0 and svd(right).sigma[-1] > 0:
            return left @ right, factors
    raise RuntimeError("degenerate factor-Gaussian draw twice in a row")


def perturb(M, rel, rng):
    """Return ``M + E`` with ``||E|| = rel * ||M||`` exactly (spectral norm).

    The perturbation direction is Gaussian, normalized so the relative
    spectral norm of the perturbation is deterministic -- this is what makes
    gap conditions of the form ``sigma_r - sigma_{r+1} - 2||E|| > 0``
    checkable without tail bounds.
    """
    A = check_matrix(M)
    rel = check_positive(rel, name="rel", allow_zero=True)
    if rel == 0.0:
        return A.copy()
    G = gaussian(A.shape[0], A.shape[1], rng)
    norm_M = svd(A).sigma[0]
    norm_G = svd(G).sigma[0]
    return A + (rel * norm_M / norm_G) * G


@dataclass(frozen=True)
class NormBounds:
    """Expected-norm bounds for an m x n Gaussian matrix.

    ``expected_norm`` bounds E||G|| by ``sqrt(m) + sqrt(n)``;
    ``expected_pinv_norm`` bounds E||G^+|| by ``e sqrt(m) / (m - n)`` and is
    None unless ``m >= n + 2`` (the bound is undefined otherwise).
    """

    m: int
    n: int
    expected_norm: float
    expected_pinv_norm: float = None


def norm_bounds(m, n):
    """Norm bounds for an m x n Gaussian matrix; see :class:`NormBounds`."""
    if m < 1 or n < 1:
        raise ValueError(f"dimensions must be positive, got {m}x{n}")
    expected = math.sqrt(m) + math.sqrt(n)
    pinv_bound = math.e * math.sqrt(m) / (m - n) if m >= n + 2 else None
    return NormBounds(m=m, n=n, expected_norm=expected,
                      expected_pinv_norm=pinv_bound)
