"""Structured sketching operators and their scaled application.

Four multiplier families are supported, all representable as ``scale * F``
for a sparse-or-structured s x m matrix F:

``perm_rows``
    s rows of a random m x m permutation matrix.
``block_perm``
    an s x m matrix built by filling it with size-s identity blocks and
    permuting the columns, so row i holds one 1 per block; with the default
    normalization its rows are orthonormal.
``asph``
    an abridged (depth-d) scaled and permuted Hadamard operator: subsampled
    rows of ``H_{d} . diag(signs) . P`` where ``H_d`` is the depth-d
    abridged Hadamard matrix with exactly ``2^d`` nonzero entries (+-1) per
    row and column.  Applied through an in-place butterfly restricted to
    length-``2^d`` strides, never materializing H.
``gaussian``
    a dense i.i.d. Gaussian matrix, included as the classical baseline.

Application never materializes the dense operator except in :func:`densify`,
which exists as a test oracle.
"""

import dataclasses
from dataclasses import dataclass

import numpy as np

from .random_matrices import as_rng
from .validation import check_matrix

KINDS = ("gaussian", "perm_rows", "block_perm", "asph")


class OpCounter:
    """Addition counter for instrumented sketch applications."""

    def __init__(self):
        self.adds = 0


@dataclass(frozen=True)
class SketchOp:
    """An s x m structured multiplier ``scale * F``.

    Kind-specific payload:

    - perm_rows: ``row_idx`` (s distinct input rows).
    - block_perm: ``input_perm`` (length-m permutation assigning input rows
      to output rows by ``input_perm[j] % s``); ``row_weights`` holds the
      per-row 1/sqrt(block size) normalization when m is not divisible by s,
      in which case ``scale`` stays 1.
    - asph: ``depth``, ``input_perm`` (input coordinate permutation),
      ``signs`` (+-1 of length m), ``row_idx`` (s rows sampled without
      replacement after the transform).
    - gaussian: ``dense`` (the unscaled s x m draw).
    """

    kind: str
    s: int
    m: int
    scale: float
    row_idx: np.ndarray = None
    input_perm: np.ndarray = None
    signs: np.ndarray = None
    depth: int = 0
    row_weights: np.ndarray = None
    dense: np.ndarray = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown sketch kind {self.kind!r}")
        if not 1 <= self.s <= self.m:
            raise ValueError(f"need 1 <= s <= m, got s={self.s}, m={self.m}")
        if self.row_idx is not None:
            idx = np.asarray(self.row_idx)
            if idx.min() < 0 or idx.max() >= self.m:
                raise ValueError("row indices out of range")
            if np.unique(idx).size != idx.size:
                raise ValueError("row indices must be distinct")

    def rescaled(self, a):
        """Copy of this operator with ``scale`` multiplied by ``a``."""
        return dataclasses.replace(self, scale=self.scale * a)


def _is_pow2(x):
    return x >= 1 and (x & (x - 1)) == 0


def build_sketch(kind, s, m, rng, depth=3, permute=True):
    """Draw a random sketch operator of the given kind and size.

    Parameters
    ----------
    kind : {'gaussian', 'perm_rows', 'block_perm', 'asph'}
    s, m : int
        Output and input dimensions, ``1 <= s <= m``.
    rng : numpy.random.Generator or int seed
    depth : int
        Abridged-Hadamard depth d (asph only); the default 3 matches a
        per-column cost of ``c = 8 = 2^3`` used by the block-permutation
        multipliers.
    permute : bool
        Whether asph randomizes an input-coordinate permutation in addition
        to the sign diagonal.

    Returns
    -------
    SketchOp
        With the default normalization the densified operator has
        orthonormal rows (block_perm: exactly; perm_rows/asph: exactly;
        gaussian: in expectation), so an extra scalar ``a`` can be applied
        with :meth:`SketchOp.rescaled`.
    """
    rng = as_rng(rng)
    if not 1 <= s <= m:
        raise ValueError(f"need 1 <= s <= m, got s={s}, m={m}")
    if kind == "gaussian":
        return SketchOp(kind, s, m, scale=1.0 / np.sqrt(m),
                        dense=rng.standard_normal((s, m)))
    if kind == "perm_rows":
        idx = rng.permutation(m)[:s]
        return SketchOp(kind, s, m, scale=1.0, row_idx=idx)
    if kind == "block_perm":
        perm = rng.permutation(m)
        if m % s == 0:
            c = m // s
            return SketchOp(kind, s, m, scale=1.0 / np.sqrt(c), input_perm=perm)
        # Ragged blocks: row i collects ceil or floor of m/s inputs; fold the
        # per-row normalization into weights and keep the scalar scale at 1.
        counts = np.bincount(perm % s, minlength=s)
        return SketchOp(kind, s, m, scale=1.0, input_perm=perm,
                        row_weights=1.0 / np.sqrt(counts))
    if kind == "asph":
        if not _is_pow2(m):
            raise ValueError(f"asph requires m to be a power of 2, got {m}")
        t = int(m).bit_length() - 1
        if not 0 <= depth <= t:
            raise ValueError(f"asph depth must be in [0, {t}], got {depth}")
        perm = rng.permutation(m) if permute else np.arange(m)
        signs = rng.choice([-1.0, 1.0], size=m)
        idx = rng.permutation(m)[:s]
        return SketchOp(kind, s, m, scale=2.0 ** (-depth / 2.0), row_idx=idx,
                        input_perm=perm, signs=signs, depth=depth)
    raise ValueError(f"unknown sketch kind {kind!r}")


def hadamard_abridged(X, depth, counter=None):
    """In-place depth-d abridged Hadamard transform along axis 0.

    ``X`` has ``m = 2^t`` rows; the transform is ``(H_{2^d} kron I_{m/2^d}) X``
    computed by d butterfly stages (``d * m`` additions per column, within the
    ``(2^d - 1) m`` budget of the row-wise definition for every d >= 1).
    """
    m = X.shape[0]
    if not _is_pow2(m):
        raise ValueError(f"row count must be a power of 2, got {m}")
    if depth == 0:
        return X
    Y = X.reshape(1 << depth, -1)
    for level in range(depth):
        h = 1 << level
        Z = Y.reshape(-1, 2, h * Y.shape[1])
        top = Z[:, 0].copy()
        Z[:, 0] += Z[:, 1]
        Z[:, 1] = top - Z[:, 1]
        if counter is not None:
            counter.adds += Z[:, 0].size * 2
    return X


def apply_sketch(op, M, counter=None):
    """Compute ``scale * F @ M`` without materializing F.

    Parameters
    ----------
    op : SketchOp
    M : array_like, shape (op.m, n)
    counter : OpCounter, optional
        Accumulates the additions performed by the asph butterfly.

    Returns
    -------
    ndarray, shape (op.s, n)
    """
    A = check_matrix(M)
    if A.shape[0] != op.m:
        raise ValueError(f"operator expects {op.m} rows, matrix has {A.shape[0]}")
    if op.kind == "gaussian":
        return op.scale * (op.dense @ A)
    if op.kind == "perm_rows":
        return op.scale * A[op.row_idx]
    if op.kind == "block_perm":
        out = np.zeros((op.s, A.shape[1]))
        np.add.at(out, op.input_perm % op.s, A)
        if op.row_weights is not None:
            out *= op.row_weights[:, None]
        return op.scale * out
    # asph: permute, sign-flip, butterfly, subsample.
    W = A[op.input_perm] * op.signs[:, None]
    hadamard_abridged(W, op.depth, counter=counter)
    return op.scale * W[op.row_idx]


def densify(op, max_cells=50_000_000):
    """Explicit dense s x m matrix of the operator, including ``scale``.

    This is a test oracle built structurally (e.g. the abridged Hadamard
    matrix is assembled by its block recursion, not by the butterfly), kept
    independent of :func:`apply_sketch`.
    """
    if op.s * op.m > max_cells:
        raise ValueError(
            f"refusing to densify a {op.s}x{op.m} operator (> {max_cells} cells)"
        )
    if op.kind == "gaussian":
        return op.scale * op.dense.copy()
    if op.kind == "perm_rows":
        F = np.zeros((op.s, op.m))
        F[np.arange(op.s), op.row_idx] = 1.0
        return op.scale * F
    if op.kind == "block_perm":
        F = np.zeros((op.s, op.m))
        F[op.input_perm % op.s, np.arange(op.m)] = 1.0
        if op.row_weights is not None:
            F *= op.row_weights[:, None]
        return op.scale * F
    # asph: F = scale * (H_d diag(signs) Pi)[row_idx] with Pi the input
    # permutation; H_d assembled by its block recursion.
    H = np.eye(op.m >> op.depth)
    for _ in range(op.depth):
        H = np.block([[H, H], [H, -H]])
    DP = np.zeros((op.m, op.m))
    DP[np.arange(op.m), op.input_perm] = op.signs
    return op.scale * (H @ DP)[op.row_idx]
