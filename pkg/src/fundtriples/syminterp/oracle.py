"""Symbolic expansions of every constraint family as sparse polynomials.

These are written independently of the numeric evaluators: determinants by
the Leibniz sum, adjugates by explicit 2x2 cofactors, products entry by entry.
They serve as brute-force oracles for the evaluators and as the exact
reference spaces of the discovery pipeline.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .poly import SparsePoly27, symbolic_triple, NVARS, BLOCKS

ONE = Fraction(1)


def _perm_sign(p) -> int:
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sym_det(M) -> SparsePoly27:
    n = len(M)
    out = SparsePoly27()
    for p in itertools.permutations(range(n)):
        term = SparsePoly27.const(Fraction(_perm_sign(p)))
        for r in range(n):
            term = term * M[r][p[r]]
        out = out + term
    return out


def sym_cofactor_adj(M):
    """Adjugate with entry ``(j, i)`` the signed minor deleting row ``i`` and column ``j``."""
    out = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = (M[rows[0]][cols[0]] * M[rows[1]][cols[1]]
                     - M[rows[0]][cols[1]] * M[rows[1]][cols[0]])
            out[j][i] = minor if (i + j) % 2 == 0 else -minor
    return out


def sym_mul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum((A[i][t] * B[t][j] for t in range(k)), SparsePoly27()) for j in range(m)]
            for i in range(n)]


def sym_T(A):
    return [list(r) for r in zip(*A)]


def sym_trace(A) -> SparsePoly27:
    return sum((A[i][i] for i in range(len(A))), SparsePoly27())


def _variables():
    F12, F13, F23 = (M.tolist() for M in symbolic_triple())
    for M in (F12, F13, F23):
        for r in range(3):
            for c in range(3):
                M[r][c] = M[r][c].map_coeffs(Fraction)
    F = {(1, 2): F12, (1, 3): F13, (2, 3): F23}
    F.update({(j, i): sym_T(M) for (i, j), M in list(F.items())})
    return F


def det_cubics() -> list[SparsePoly27]:
    F = _variables()
    return [sym_det(F[k]) for k in ((1, 2), (1, 3), (2, 3))]


def quartic_matrices() -> list:
    """``F_ij adj(F_kj) F_ki - (F_ij adj(F_kj) F_ki)^T`` for the three sandwiches."""
    F = _variables()
    out = []
    for i, j, k in ((1, 2, 3), (3, 1, 2), (2, 1, 3)):
        M = sym_mul(sym_mul(F[i, j], sym_cofactor_adj(F[k, j])), F[k, i])
        out.append([[M[a][b] - M[b][a] for b in range(3)] for a in range(3)])
    return out


def quartics() -> list[SparsePoly27]:
    return [D[a][b] for D in quartic_matrices() for a, b in ((0, 1), (0, 2), (1, 2))]


def quintics() -> list[SparsePoly27]:
    F = _variables()
    adj = sym_cofactor_adj
    groups = [sym_mul(sym_mul(adj(F[1, 3]), F[1, 2]), adj(F[3, 2])),
              sym_mul(sym_mul(adj(F[1, 2]), F[1, 3]), adj(F[2, 3])),
              sym_mul(sym_mul(adj(F[2, 1]), F[2, 3]), adj(F[1, 3]))]
    return [G[a][b] for G in groups for a in range(3) for b in range(3)]


def _mega_entry_vars():
    """9x9 table of (variable index, sign) or None for the structural zeros."""
    tab = [[None] * 9 for _ in range(9)]
    for b, (p, q) in enumerate(((0, 1), (0, 2), (1, 2))):
        for r in range(3):
            for c in range(3):
                v = 9 * b + 3 * r + c
                tab[3 * p + r][3 * q + c] = v
                tab[3 * q + c][3 * p + r] = v
    return tab


def septic(rows: tuple, cols: tuple) -> SparsePoly27:
    """7x7 minor of the symbolic mega-matrix deleting 1-based ``rows`` and ``cols``.

    Every entry is a single variable or zero, so each Leibniz term is a signed
    monomial; permutations through structural zeros are pruned.
    """
    tab = _mega_entry_vars()
    keep_r = [r for r in range(9) if r + 1 not in rows]
    keep_c = [c for c in range(9) if c + 1 not in cols]
    sub = [[tab[r][c] for c in keep_c] for r in keep_r]
    n = len(sub)
    out: dict = {}

    def walk(r, used, perm, expo):
        if r == n:
            s = _perm_sign(perm)
            key = tuple(expo)
            out[key] = out.get(key, 0) + s
            return
        for c in range(n):
            if used >> c & 1 or sub[r][c] is None:
                continue
            expo[sub[r][c]] += 1
            perm.append(c)
            walk(r + 1, used | (1 << c), perm, expo)
            perm.pop()
            expo[sub[r][c]] -= 1

    walk(0, 0, [], [0] * NVARS)
    return SparsePoly27({e: Fraction(c) for e, c in out.items() if c})


def septics(indices=None) -> list[SparsePoly27]:
    from ..constraints import SEPTIC_INDICES
    idx = SEPTIC_INDICES if indices is None else indices
    return [septic(p.rows, p.cols) for p in idx]


def demazure() -> list[SparsePoly27]:
    F = _variables()
    out = []
    for key in ((1, 2), (1, 3), (2, 3)):
        M = F[key]
        MMt = sym_mul(M, sym_T(M))
        A = sym_mul(MMt, M)
        tr = sym_trace(MMt)
        out.extend(A[a][b] * 2 - tr * M[a][b] for a in range(3) for b in range(3))
    return out


def _mega_symbolic():
    tab = _mega_entry_vars()
    return [[SparsePoly27.var(v, ONE) if v is not None else SparsePoly27() for v in row]
            for row in tab]


def _block_degree(e) -> tuple:
    return tuple(sum(e[a:b]) for a, b in BLOCKS)


def _truncated_mul(A: SparsePoly27, B: SparsePoly27, cap) -> SparsePoly27:
    out: dict = {}
    for e1, c1 in A.terms.items():
        d1 = _block_degree(e1)
        for e2, c2 in B.terms.items():
            d2 = _block_degree(e2)
            if any(x + y > m for x, y, m in zip(d1, d2, cap)):
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return SparsePoly27(out)


def _truncated_matmul(A, B, cap):
    n = len(A)
    return [[sum((_truncated_mul(A[i][t], B[t][j], cap) for t in range(n)), SparsePoly27())
             for j in range(n)] for i in range(n)]


@lru_cache(maxsize=1)
def homogenized_sextic() -> SparsePoly27:
    """Degree-(2,2,2) part of ``tr^3(F^2) - 12 tr(F^2) tr(F^4) + 32 tr(F^6)``.

    Products are truncated at multidegree (2,2,2) throughout, which discards
    only terms that cannot contribute to that part.
    """
    cap = (2, 2, 2)
    M = _mega_symbolic()
    M2 = _truncated_matmul(M, M, cap)
    M4 = _truncated_matmul(M2, M2, cap)
    t2 = sym_trace(M2)
    t4 = sym_trace(M4)
    t6 = SparsePoly27()
    for i in range(9):
        for j in range(9):
            t6 = t6 + _truncated_mul(M4[i][j], M2[j][i], cap)
    total = (_truncated_mul(_truncated_mul(t2, t2, cap), t2, cap)
             - _truncated_mul(t2, t4, cap) * 12 + t6 * 32)
    return SparsePoly27({e: c for e, c in total.terms.items() if _block_degree(e) == cap})


def evaluate_integer(p: SparsePoly27, x) -> Fraction:
    """Exact value at a rational point, evaluated over a common denominator.

    Only for multihomogeneous ``p``; much faster than Fraction arithmetic.
    """
    x = [Fraction(v) for v in x]
    degs = p.multidegrees()
    if len(degs) != 1:
        return p.evaluate(x)
    (deg,) = degs
    dens = []
    for a, b in BLOCKS:
        d = 1
        for v in x[a:b]:
            d = d * v.denominator // _gcd(d, v.denominator)
        dens.append(d)
    ints = []
    for (a, b), d in zip(BLOCKS, dens):
        ints.extend(int(v * d) for v in x[a:b])
    total = 0
    for e, c in p.terms.items():
        term = 1
        for v, k in enumerate(e):
            if k:
                term *= ints[v] ** k
        total += c * term
    scale = 1
    for d, k in zip(dens, deg):
        scale *= d ** k
    return Fraction(total) / scale if not hasattr(total, "re") else total / scale


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


__all__ = ["det_cubics", "quartics", "quartic_matrices", "quintics", "septic", "septics",
           "demazure", "homogenized_sextic", "sym_det", "sym_cofactor_adj", "sym_mul",
           "evaluate_integer"]
