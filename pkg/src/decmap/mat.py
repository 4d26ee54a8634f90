"""Dense real-matrix kernel.

Everything downstream works with plain float64 numpy arrays.  Complex
matrices appear only at the boundary: :func:`realify` turns x + iy into the
doubled real matrix [[x, -y], [y, x]], after which all positivity questions
are questions about real symmetric matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeError

__all__ = [
    "sym_eig",
    "op_norm",
    "partial_trace",
    "realify",
    "split_realified",
    "canonical_shuffle",
    "permute_similarity",
    "is_psd",
    "min_eig",
    "frob_inner",
    "sym_part",
    "psd_sqrt",
]

# Default scale-invariant PSD tolerance: a is PSD iff lambda_min >= -tol * max(1, ||a||).
PSD_TOL = 1e-9

_J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ShapeError(f"expected a matrix, got array of ndim {a.ndim}")
    return a


def frob_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius inner product <a, b> = tr(a^T b)."""
    return float(np.tensordot(a, b, axes=2))


def sym_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def sym_eig(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric real matrix.

    Returns (w, q) with eigenvalues w in descending order and orthogonal q
    whose columns are the matching eigenvectors, so a = q @ diag(w) @ q.T.

    Raises ShapeError if a is not square or not symmetric within
    1e-10 * ||a||_F.
    """
    a = _as_matrix(a)
    n, m = a.shape
    if n != m:
        raise ShapeError(f"sym_eig needs a square matrix, got {n}x{m}")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > 1e-10 * max(scale, 1e-300):
        raise ShapeError("sym_eig input is not symmetric within tolerance")
    w, q = np.linalg.eigh(sym_part(a))
    # eigh returns ascending order
    return w[::-1].copy(), q[:, ::-1].copy()


def op_norm(a) -> float:
    """Operator (spectral) norm: the largest singular value of a."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    w, _ = sym_eig(a.T @ a)
    return float(np.sqrt(max(w[0], 0.0)))


def min_eig(a) -> float:
    """Smallest eigenvalue of a symmetric matrix."""
    w, _ = sym_eig(a)
    return float(w[-1])


def is_psd(a, tol: float = PSD_TOL) -> bool:
    """Scale-invariant PSD test: lambda_min(a) >= -tol * max(1, ||a||)."""
    a = _as_matrix(a)
    w, _ = sym_eig(sym_part(a))
    return w[-1] >= -tol * max(1.0, abs(w[0]), abs(w[-1]))


def psd_sqrt(a, clip_tol: float = PSD_TOL) -> np.ndarray:
    """Symmetric square root of a PSD matrix; tiny negative eigenvalues are clipped."""
    w, q = sym_eig(a)
    w = np.clip(w, 0.0, None)
    return (q * np.sqrt(w)) @ q.T


def partial_trace(m, dims: tuple[int, int], factor: str = "first") -> np.ndarray:
    """Trace out one tensor factor of a matrix on an n*k-dimensional space.

    dims = (n, k) names the sizes of the first and second factor in the
    Kronecker ordering A (x) B.  factor="first" returns the k x k matrix
    sum_i M[i*k:(i+1)*k, i*k:(i+1)*k]; factor="second" returns the n x n
    matrix of block traces.
    """
    m = _as_matrix(m)
    n, k = dims
    if m.shape != (n * k, n * k):
        raise ShapeError(f"partial_trace: matrix is {m.shape}, dims {dims} need {(n * k, n * k)}")
    t = m.reshape(n, k, n, k)
    if factor == "first":
        return np.einsum("iaib->ab", t)
    if factor == "second":
        return np.einsum("iaja->ij", t)
    raise ValueError(f"factor must be 'first' or 'second', got {factor!r}")


def realify(z) -> np.ndarray:
    """Realification c(x, y) = [[x, -y], [y, x]] of a complex square matrix z = x + iy.

    Accepts a complex ndarray or a (re, im) pair of real matrices.  The image
    is symmetric iff z is Hermitian, PSD iff z is PSD, and has the same
    operator norm as z.
    """
    if isinstance(z, (tuple, list)) and len(z) == 2:
        x = _as_matrix(z[0])
        y = _as_matrix(z[1])
        if x.shape != y.shape:
            raise ShapeError("realify: re and im parts differ in shape")
    else:
        z = np.asarray(z)
        if z.ndim != 2:
            raise ShapeError("realify expects a matrix")
        x = np.ascontiguousarray(z.real, dtype=float)
        y = np.ascontiguousarray(z.imag, dtype=float) if np.iscomplexobj(z) else np.zeros_like(x)
    if x.shape[0] != x.shape[1]:
        raise ShapeError("realify expects a square matrix")
    return np.kron(np.eye(2), x) + np.kron(_J2, y)


def split_realified(c: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`realify` on its range: c(x, y) -> (x, y).

    Reads x off the upper-left and y off the lower-left block; no check that
    c actually has the c(x, y) form.
    """
    c = _as_matrix(c)
    if c.shape[0] % 2 or c.shape[0] != c.shape[1]:
        raise ShapeError("split_realified expects a square matrix of even size")
    m = c.shape[0] // 2
    return c[:m, :m].copy(), c[m:, :m].copy()


def canonical_shuffle(n: int, m: int) -> np.ndarray:
    """Index permutation reordering M_n (x) M_2 (x) M_m into M_2 (x) M_n (x) M_m.

    Returns sigma of length 2*n*m with sigma[old] = new, where old indexes
    the (a, b, c) triple in (n, 2, m) order and new the (b, a, c) triple.
    Conjugating by the associated permutation preserves spectra and
    positivity.
    """
    if n < 1 or m < 1:
        raise ValueError("canonical_shuffle needs n, m >= 1")
    sigma = np.empty(2 * n * m, dtype=int)
    for a in range(n):
        for b in range(2):
            for c in range(m):
                sigma[(a * 2 + b) * m + c] = (b * n + a) * m + c
    return sigma


def permute_similarity(mat, sigma: np.ndarray) -> np.ndarray:
    """Conjugate mat by the permutation sigma (sigma[old] = new): out[sigma[i], sigma[j]] = mat[i, j]."""
    mat = _as_matrix(mat)
    out = np.empty_like(mat)
    out[np.ix_(sigma, sigma)] = mat
    return out
