"""Plain-text matrix files.

Format: first line ``m n``, then m lines of n space-separated decimal values.
Values are written with repr-level precision (17 significant digits) so a
write/read cycle reproduces every double bit-exactly.
"""

import numpy as np

from .validation import check_matrix


def save_matrix(path, M):
    """Write matrix ``M`` to ``path`` in the text format."""
    A = check_matrix(M)
    m, n = A.shape
    with open(path, "w") as fh:
        fh.write(f"{m} {n}\n")
        for row in A:
            fh.write(" ".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def load_matrix(path):
    """Read a matrix from ``path``; inverse of :func:`save_matrix`."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected header 'm n', got {header!r}")
        m, n = int(header[0]), int(header[1])
        if m < 1 or n < 1:
            raise ValueError(f"{path}: invalid dimensions {m}x{n}")
        data = np.empty((m, n))
        for i in range(m):
            parts = fh.readline().split()
            if len(parts) != n:
                raise ValueError(
                    f"{path}: line {i + 2}: expected {n} values, got {len(parts)}"
                )
            data[i] = [float(p) for p in parts]
    return check_matrix(data, name=f"matrix from {path}")
