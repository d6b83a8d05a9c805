"""Small-matrix algebra over two scalar fields.

Every routine accepts numpy arrays of either kind:

* exact rationals -- ``dtype=object`` arrays holding :class:`fractions.Fraction`
  (or any exact field element supporting ``+ - * /`` and ``== 0``);
* complex doubles -- any numeric dtype (``float64`` and ``complex128`` alike).

The field is read off the dtype, so call sites choose the field by choosing how
they build their inputs (see :func:`as_exact` and :func:`as_complex`).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import RankError, ZeroInputError

RATIONAL = "rational"
COMPLEX = "complex"
FIELDS = (RATIONAL, COMPLEX)

DEFAULT_RANK_TOL = 1e-8


def is_exact(a) -> bool:
    return isinstance(a, np.ndarray) and a.dtype == object


def field_of(a) -> str:
    return RATIONAL if is_exact(a) else COMPLEX


def _to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    # other exact field elements (e.g. Gaussian rationals) pass through
    return x


def as_exact(a) -> np.ndarray:
    """Convert nested sequences of ints / strings / Fractions to an exact array."""
    arr = np.array(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = _to_fraction(arr[idx])
    return out


def as_complex(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        out = np.empty(arr.shape, dtype=complex)
        for idx in np.ndindex(arr.shape):
            out[idx] = complex(arr[idx])
        return out
    return arr.astype(complex)


def as_field(a, field: str) -> np.ndarray:
    if field == RATIONAL:
        return as_exact(a)
    if field == COMPLEX:
        return as_complex(a)
    raise ValueError(f"unknown field {field!r}")


def zeros(shape, like) -> np.ndarray:
    if is_exact(like):
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape, dtype=np.result_type(like, float))


def eye(n: int, field: str = COMPLEX) -> np.ndarray:
    if field == RATIONAL:
        return as_exact(np.eye(n, dtype=int))
    return np.eye(n, dtype=complex)


def cross_matrix(c) -> np.ndarray:
    """Skew matrix ``[c]_x`` with ``cross_matrix(c) @ v == cross(c, v)``."""
    c = np.asarray(c)
    zero = c[0] * 0
    return np.array(
        [[zero, -c[2], c[1]],
         [c[2], zero, -c[0]],
         [-c[1], c[0], zero]],
        dtype=c.dtype,
    )


def det3(M) -> object:
    """Determinant of a 3x3 matrix (or a stack of them along leading axes)."""
    M = np.asarray(M)
    return (M[..., 0, 0] * (M[..., 1, 1] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 1])
            - M[..., 0, 1] * (M[..., 1, 0] * M[..., 2, 2] - M[..., 1, 2] * M[..., 2, 0])
            + M[..., 0, 2] * (M[..., 1, 0] * M[..., 2, 1] - M[..., 1, 1] * M[..., 2, 0]))


def adjugate(M) -> np.ndarray:
    """Classical adjoint of a 3x3 matrix; works on stacks and on exact arrays."""
    M = np.asarray(M)
    out = np.empty(M.shape, dtype=M.dtype if M.dtype == object else np.result_type(M, float))
    for i in range(3):
        i1, i2 = (i + 1) % 3, (i + 2) % 3
        for j in range(3):
            j1, j2 = (j + 1) % 3, (j + 2) % 3
            # cyclic index order absorbs the cofactor sign
            out[..., j, i] = M[..., i1, j1] * M[..., i2, j2] - M[..., i1, j2] * M[..., i2, j1]
    return out


def inverse3(M) -> np.ndarray:
    M = np.asarray(M)
    if is_exact(M):
        d = det3(M)
        if d == 0:
            raise ZeroDivisionError("singular matrix")
        return adjugate(M) / d
    return np.linalg.inv(M)


def det(M) -> object:
    """Determinant of a square matrix; exact elimination on rational input."""
    M = np.asarray(M)
    if not is_exact(M):
        return np.linalg.det(M)
    A = [list(row) for row in M]
    n = len(A)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            sign = -sign
        p = A[col][col]
        result *= p
        for r in range(col + 1, n):
            f = A[r][col]
            if f != 0:
                f = f / p
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return sign * result


def row_echelon(M) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over an exact field; returns (rows, pivot columns)."""
    A = [list(row) for row in np.asarray(M, dtype=object)]
    if not A:
        return [], []
    n_rows, n_cols = len(A), len(A[0])
    pivots = []
    r = 0
    for col in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        p = A[r][col]
        A[r] = [a / p for a in A[r]]
        for i in range(n_rows):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    return A[:r], pivots


def exact_rank(M) -> int:
    M = np.asarray(M, dtype=object)
    if M.size == 0:
        return 0
    return len(row_echelon(M)[1])


def singular_values(M) -> np.ndarray:
    return np.linalg.svd(as_complex(M) if is_exact(M) else np.asarray(M), compute_uv=False)


def numeric_rank(M, tol: float = DEFAULT_RANK_TOL) -> int:
    """Rank of ``M``: exact on rational input, relative SVD threshold otherwise."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if is_exact(M):
        return exact_rank(M)
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace(M, tol: float, relative: bool = False) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical nullspace of ``M``.

    Singular values at or below ``tol`` (times ``sigma_max`` when ``relative``)
    count as zero.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(M)
    cut = tol * s[0] if (relative and s.size and s[0] > 0) else tol
    rank = int(np.sum(s > cut))
    return vh[rank:].conj().T


def frobenius(M) -> float:
    M = np.asarray(M)
    if is_exact(M):
        return float(np.sqrt(sum(abs(complex(x)) ** 2 for x in M.ravel())))
    return float(np.linalg.norm(M))


def kernel_vector(M, tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Normalized generator of the kernel of a rank-2 3x3 matrix.

    Rational field: last nonzero coordinate scaled to 1.  Complex field: unit
    Euclidean norm with the first significant coordinate real and positive.
    """
    M = np.asarray(M)
    r = numeric_rank(M, tol)
    if r != 2:
        raise RankError(f"kernel_vector needs a rank-2 matrix, got rank {r}")
    if is_exact(M):
        A = adjugate(M)
        # adj(M) has rank one and M @ adj(M) = 0: any nonzero column spans ker M
        col = next(j for j in range(3) if any(A[i, j] != 0 for i in range(3)))
        v = A[:, col].copy()
        last = next(x for x in reversed(list(v)) if x != 0)
        return v / last
    _, _, vh = np.linalg.svd(M.astype(complex))
    v = vh[-1].conj()
    v = v / np.linalg.norm(v)
    lead = next(x for x in v if abs(x) > 1e-12)
    return v * (abs(lead) / lead)


def proj_equal(u, v, tol: float = DEFAULT_RANK_TOL) -> bool:
    """True iff ``u`` and ``v`` agree up to a nonzero scalar factor."""
    u = np.asarray(u).ravel()
    v = np.asarray(v).ravel()
    if u.shape != v.shape:
        raise ValueError("shape mismatch")
    exact = is_exact(u) and is_exact(v)
    if exact:
        if all(x == 0 for x in u) or all(x == 0 for x in v):
            raise ZeroInputError("proj_equal is undefined at zero")
        # 2x2 minors against a pivot pair suffice once a pivot is fixed
        p = next(i for i, x in enumerate(u) if x != 0)
        return all(u[p] * v[i] - u[i] * v[p] == 0 for i in range(len(u))) and v[p] != 0
    u = as_complex(u)
    v = as_complex(v)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ZeroInputError("proj_equal is undefined at zero")
    u, v = u / nu, v / nv
    minors = np.outer(u, v) - np.outer(v, u)
    return bool(np.abs(minors).max() <= tol)


def block(rows: Iterable[Iterable[np.ndarray]]) -> np.ndarray:
    return np.block([[np.asarray(b) for b in row] for row in rows])
