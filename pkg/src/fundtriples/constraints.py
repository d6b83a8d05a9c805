"""Polynomial constraints on fundamental matrix triples and membership tests.

``F_ji`` is always taken to be ``F_ij.T``.  Every evaluator works in whichever
field its input lives in: exact inputs give exact residuals.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import smallalg as sa
from .camera import FundamentalTriple, mega_matrix

DEFAULT_TOL = 1e-8


class ConstraintFamily(enum.Enum):
    DetCubics = 3
    Quartics = 9
    Quintics = 27
    Septics = 108
    Demazure = 27
    MartyushevCubic = 1
    NecF2 = 27
    NecF3 = 27
    NecF4 = 1
    MartyushevSextic = 1
    M6 = 1

    def __new__(cls, count):
        obj = object.__new__(cls)
        # distinct values are needed so equal counts do not alias members
        obj._value_ = (len(cls.__members__), count)
        obj.count = count
        return obj


F_FAMILIES = (ConstraintFamily.DetCubics, ConstraintFamily.Quartics,
              ConstraintFamily.Quintics, ConstraintFamily.Septics)
E_LOCAL_FAMILIES = (ConstraintFamily.Demazure, ConstraintFamily.Quartics, ConstraintFamily.M6)
MARTYUSHEV_FAMILIES = (ConstraintFamily.MartyushevCubic, ConstraintFamily.NecF2,
                       ConstraintFamily.NecF3, ConstraintFamily.NecF4,
                       ConstraintFamily.MartyushevSextic)


class Verdict(enum.Enum):
    Member = "Member"
    NonMember = "NonMember"
    LocallyConsistent = "LocallyConsistent"
    Inconsistent = "Inconsistent"


# ----------------------------------------------------------- evaluators

def eval_det_cubics(t: FundamentalTriple) -> np.ndarray:
    return np.array([sa.det3(M) for M in t.matrices], dtype=_dtype(t))


def sandwich(t: FundamentalTriple, i: int, j: int, k: int) -> np.ndarray:
    """``F_ij adj(F_kj) F_ki`` for a permutation ``(i, j, k)`` of ``(1, 2, 3)``."""
    return t.F(i, j) @ sa.adjugate(t.F(k, j)) @ t.F(k, i)


# the three matrix expressions M, with the quartics being M - M^T = 0
QUARTIC_SANDWICHES = ((1, 2, 3), (3, 1, 2), (2, 1, 3))
_ANTISYM = ((0, 1), (0, 2), (1, 2))


def eval_quartics(t: FundamentalTriple) -> np.ndarray:
    out = []
    for ijk in QUARTIC_SANDWICHES:
        M = sandwich(t, *ijk)
        out.extend(M[a, b] - M[b, a] for a, b in _ANTISYM)
    return np.array(out, dtype=_dtype(t))


def quartic_matrix_entries(t: FundamentalTriple) -> np.ndarray:
    """All 27 entries of the three matrices ``M - M^T``, each off-diagonal pair counted twice."""
    out = []
    for ijk in QUARTIC_SANDWICHES:
        M = sandwich(t, *ijk)
        out.extend((M - M.T).ravel())
    return np.array(out, dtype=_dtype(t))


def quintic_matrices(t: FundamentalTriple) -> list[np.ndarray]:
    F, adj = t.F, sa.adjugate
    return [adj(F(1, 3)) @ F(1, 2) @ adj(F(3, 2)),
            adj(F(1, 2)) @ F(1, 3) @ adj(F(2, 3)),
            adj(F(2, 1)) @ F(2, 3) @ adj(F(1, 3))]


def eval_quintics(t: FundamentalTriple) -> np.ndarray:
    return np.concatenate([M.ravel() for M in quintic_matrices(t)])


@dataclass(frozen=True)
class SepticIndexPair:
    rows: tuple[int, int]   # deleted rows, 1-based
    cols: tuple[int, int]   # deleted columns, 1-based
    k: tuple[int, int]
    i: tuple[int, int]
    j: tuple[int, int]


def enumerate_septic_indices() -> list[SepticIndexPair]:
    pairs = []
    ij = [(a, b) for a in range(1, 4) for b in range(a, 4)]
    for k1, k2 in itertools.combinations(range(1, 4), 2):
        for (i1, j1), (i2, j2) in itertools.product(ij, ij):
            pairs.append(SepticIndexPair(
                rows=(3 * (k1 - 1) + i1, 3 * (k2 - 1) + i2),
                cols=(3 * (k1 - 1) + j1, 3 * (k2 - 1) + j2),
                k=(k1, k2), i=(i1, i2), j=(j1, j2)))
    return pairs


SEPTIC_INDICES = enumerate_septic_indices()


def _minor_stack(M: np.ndarray) -> np.ndarray:
    out = []
    for p in SEPTIC_INDICES:
        keep_r = [r for r in range(9) if r + 1 not in p.rows]
        keep_c = [c for c in range(9) if c + 1 not in p.cols]
        out.append(M[np.ix_(keep_r, keep_c)])
    return np.array(out, dtype=M.dtype)


def eval_septics(t: FundamentalTriple) -> np.ndarray:
    minors = _minor_stack(mega_matrix(t))
    if t.exact:
        return np.array([sa.det(m) for m in minors], dtype=object)
    return np.linalg.det(minors)


def eval_demazure(M) -> np.ndarray:
    M = np.asarray(M)
    return 2 * M @ M.T @ M - np.trace(M @ M.T) * M


def diamond(A, B) -> np.ndarray:
    return sa.adjugate(A - B) - sa.adjugate(A) - sa.adjugate(B)


CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def _trace_power(M: np.ndarray, n: int):
    return np.trace(np.linalg.matrix_power(M, n)) if not sa.is_exact(M) else \
        np.trace(_matpow_exact(M, n))


def _matpow_exact(M, n):
    out = M
    for _ in range(n - 1):
        out = out @ M
    return out


def eval_martyushev(t: FundamentalTriple) -> dict[ConstraintFamily, np.ndarray]:
    F, adj = t.F, sa.adjugate
    dt = _dtype(t)
    cubic = np.array([np.trace(F(1, 2) @ F(2, 3) @ F(3, 1))], dtype=dt)
    nec2, nec3 = [], []
    for i, j, k in CYCLIC:
        Fij, Fjk, Fki = F(i, j), F(j, k), F(k, i)
        gram = Fij.T @ Fij
        e2 = gram @ Fjk - np.trace(gram) * Fjk / 2 + adj(Fij) @ Fki.T
        e3 = Fjk.T @ adj(Fij) + adj(Fjk) @ Fij.T + diamond(Fij @ Fjk, Fki.T)
        nec2.extend(e2.ravel())
        nec3.extend(e3.ravel())
    Mg = mega_matrix(t)
    tr2, tr4, tr6 = (_trace_power(Mg, n) for n in (2, 4, 6))
    gram_sq = sum(np.trace(M.T @ M) ** 2 for M in t.matrices)
    nec4 = tr2 ** 2 - 16 * tr4 + 24 * gram_sq
    sextic = tr2 ** 3 - 12 * tr2 * tr4 + 32 * tr6
    return {
        ConstraintFamily.MartyushevCubic: cubic,
        ConstraintFamily.NecF2: np.array(nec2, dtype=dt),
        ConstraintFamily.NecF3: np.array(nec3, dtype=dt),
        ConstraintFamily.NecF4: np.array([nec4], dtype=dt),
        ConstraintFamily.MartyushevSextic: np.array([sextic], dtype=dt),
    }


# --- the (2,2,2)-multidegree part of the Martyushev sextic

def _scaled_blocks(t: FundamentalTriple) -> list[np.ndarray]:
    """Mega-matrix split as ``A1 + A2 + A3`` by which factor each entry comes from."""
    zero = sa.zeros((3, 3), t.F12)
    parts = []
    for n in range(3):
        mats = [M if m == n else zero for m, M in enumerate(t.matrices)]
        parts.append(mega_matrix(FundamentalTriple(*mats)))
    return parts


def _mat_poly_mul(P: dict, Q: dict) -> dict:
    out = {}
    for e1, A in P.items():
        for e2, B in Q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out[e] + A @ B if e in out else A @ B
    return out


def _poly_mul(p: dict, q: dict) -> dict:
    out = {}
    for e1, a in p.items():
        for e2, b in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + a * b
    return out


def sextic_scaling_polynomial(t: FundamentalTriple) -> dict:
    """Martyushev's sextic of ``(s1 F12, s2 F13, s3 F23)`` as a polynomial in ``s``.

    Returned as ``{(a, b, c): coefficient of s1^a s2^b s3^c}``; exact on exact input.
    """
    units = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    P1 = {u: A for u, A in zip(units, _scaled_blocks(t))}
    P2 = _mat_poly_mul(P1, P1)
    P4 = _mat_poly_mul(P2, P2)
    tr2 = {e: np.trace(A) for e, A in P2.items()}
    tr4 = {e: np.trace(A) for e, A in P4.items()}
    tr6 = {}
    for e1, A in P4.items():
        for e2, B in P2.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            tr6[e] = tr6.get(e, 0) + (A * B.T).sum()
    poly = {}
    for e, v in _poly_mul(_poly_mul(tr2, tr2), tr2).items():
        poly[e] = poly.get(e, 0) + v
    for e, v in _poly_mul(tr2, tr4).items():
        poly[e] = poly.get(e, 0) - 12 * v
    for e, v in tr6.items():
        poly[e] = poly.get(e, 0) + 32 * v
    return poly


def eval_M6(t: FundamentalTriple):
    """Degree-(2,2,2) part of Martyushev's sextic, multihomogeneous in the three factors.

    Float input uses the root-of-unity average; exact input reads the
    coefficient off :func:`sextic_scaling_polynomial`.
    """
    if t.exact:
        return sextic_scaling_polynomial(t).get((2, 2, 2), 0 * t.F12[0, 0])
    return eval_M6_dft(t)


def eval_M6_dft(t: FundamentalTriple) -> complex:
    """Average of the sextic over 7th-root-of-unity scalings of each factor.

    The sextic has degree at most 6 in each scaling variable, so the average
    against ``z^-2`` per variable isolates the (2,2,2) coefficient exactly.
    """
    mats = [sa.as_complex(M) for M in t.matrices]
    z = np.exp(2j * np.pi * np.arange(7) / 7)
    s1, s2, s3 = (g.ravel() for g in np.meshgrid(z, z, z, indexing="ij"))
    n = s1.size
    Mg = np.zeros((n, 9, 9), dtype=complex)
    for (a, b), s, M in zip(((0, 1), (0, 2), (1, 2)), (s1, s2, s3), mats):
        blk = s[:, None, None] * M
        Mg[:, 3 * a:3 * a + 3, 3 * b:3 * b + 3] = blk
        Mg[:, 3 * b:3 * b + 3, 3 * a:3 * a + 3] = np.swapaxes(blk, 1, 2)
    P2 = Mg @ Mg
    P4 = P2 @ P2
    tr2 = np.trace(P2, axis1=1, axis2=2)
    tr4 = np.trace(P4, axis1=1, axis2=2)
    tr6 = np.einsum("nij,nji->n", P4, P2)
    vals = tr2 ** 3 - 12 * tr2 * tr4 + 32 * tr6
    weights = (s1 * s2 * s3) ** -2
    return complex(np.sum(vals * weights) / n)


# ------------------------------------------------------------- reports

def _dtype(t: FundamentalTriple):
    return object if t.exact else complex


def evaluate(t: FundamentalTriple, families) -> dict[ConstraintFamily, np.ndarray]:
    out = {}
    mart = None
    for fam in families:
        if fam is ConstraintFamily.DetCubics:
            out[fam] = eval_det_cubics(t)
        elif fam is ConstraintFamily.Quartics:
            out[fam] = eval_quartics(t)
        elif fam is ConstraintFamily.Quintics:
            out[fam] = eval_quintics(t)
        elif fam is ConstraintFamily.Septics:
            out[fam] = eval_septics(t)
        elif fam is ConstraintFamily.Demazure:
            out[fam] = np.concatenate([eval_demazure(M).ravel() for M in t.matrices])
        elif fam is ConstraintFamily.M6:
            out[fam] = np.array([eval_M6(t)], dtype=_dtype(t))
        else:
            if mart is None:
                mart = eval_martyushev(t)
            out[fam] = mart[fam]
    return out


@dataclass
class ConstraintReport:
    residuals: dict
    norms: tuple
    tol: float
    exact: bool
    verdicts: dict = field(default_factory=dict)

    def __post_init__(self):
        for fam, r in self.residuals.items():
            if len(r) != fam.count:
                raise ValueError(f"{fam.name}: expected {fam.count} residuals, got {len(r)}")
            self.verdicts[fam] = self.nonzero_count(fam) == 0

    def _nonzero_mask(self, fam) -> np.ndarray:
        r = self.residuals[fam]
        if self.exact:
            return np.array([x != 0 for x in r], dtype=bool)
        return np.abs(np.asarray(r, dtype=complex)) > self.tol

    def nonzero_count(self, fam) -> int:
        return int(self._nonzero_mask(fam).sum())

    def nonzero_indices(self, fam) -> list[int]:
        return [int(i) for i in np.flatnonzero(self._nonzero_mask(fam))]

    def max_abs(self, fam) -> float:
        r = self.residuals[fam]
        return float(max((abs(complex(x)) for x in r), default=0.0))

    def vanishes(self, fam) -> bool:
        return self.verdicts[fam]

    def all_vanish(self) -> bool:
        return all(self.verdicts.values())

    def failing(self) -> list:
        return [fam for fam, ok in self.verdicts.items() if not ok]


def constraint_report(t: FundamentalTriple, families, tol: float = DEFAULT_TOL,
                      normalize: bool = True) -> ConstraintReport:
    """Evaluate ``families`` on ``t``; float input is first scaled to unit factors."""
    norms = tuple(sa.frobenius(M) for M in t.matrices)
    if not t.exact and normalize:
        t = t.normalized()
    return ConstraintReport(evaluate(t, families), norms, tol, t.exact)


def classify_F(t: FundamentalTriple, tol: float = DEFAULT_TOL):
    """Set-theoretic membership in the compatible fundamental triple variety."""
    report = constraint_report(t, F_FAMILIES, tol)
    verdict = Verdict.Member if report.all_vanish() else Verdict.NonMember
    return verdict, report


def classify_E_local(t: FundamentalTriple, tol: float = DEFAULT_TOL):
    """Local test against the compatible essential triple variety.

    ``LocallyConsistent`` only says the Demazure cubics, quartics and the
    homogenized sextic vanish.  These cut the variety out near its generic
    points, but the zero set may carry extra components, so this verdict is
    never a membership claim.
    """
    report = constraint_report(t, E_LOCAL_FAMILIES, tol)
    verdict = Verdict.LocallyConsistent if report.all_vanish() else Verdict.Inconsistent
    return verdict, report


def local_equations_E(t: FundamentalTriple) -> np.ndarray:
    """The 37 local equations (27 Demazure, 9 quartic, 1 sextic) as one vector."""
    res = evaluate(t, E_LOCAL_FAMILIES)
    return np.concatenate([np.asarray(res[f], dtype=_dtype(t)) for f in E_LOCAL_FAMILIES])


# 7-point central stencil: exact derivative for polynomials of degree <= 6
_STENCIL = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60.0


def jacobian_E(t: FundamentalTriple, step: float = 0.25) -> np.ndarray:
    """37x27 Jacobian of :func:`local_equations_E` at a complex-field triple."""
    x = t.to_field(sa.COMPLEX).as_vector()
    J = np.zeros((37, 27), dtype=complex)
    for a in range(27):
        e = np.zeros(27)
        e[a] = step
        vals = [local_equations_E(FundamentalTriple.from_vector(x + s * e))
                for s in range(-3, 4)]
        J[:, a] = sum(w * v for w, v in zip(_STENCIL, vals)) / step
    return J


def jacobian_rank_E(t: FundamentalTriple, tol: float = DEFAULT_TOL) -> int:
    """Numeric rank of the local-equation Jacobian at ``t`` (rows normalized)."""
    t = t.normalized()
    J = jacobian_E(t)
    norms = np.linalg.norm(J, axis=1)
    J = J[norms > 0] / norms[norms > 0, None]
    return sa.numeric_rank(J, tol) if J.size else 0


def jacobian_nullity_E(t: FundamentalTriple, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the Jacobian's kernel: the local dimension the equations allow."""
    return 27 - jacobian_rank_E(t, tol)


__all__ = [
    "ConstraintFamily", "Verdict", "ConstraintReport", "SepticIndexPair",
    "F_FAMILIES", "E_LOCAL_FAMILIES", "MARTYUSHEV_FAMILIES", "SEPTIC_INDICES",
    "eval_det_cubics", "eval_quartics", "eval_quintics", "eval_septics",
    "eval_demazure", "diamond", "eval_martyushev", "eval_M6", "eval_M6_dft",
    "sextic_scaling_polynomial", "enumerate_septic_indices", "sandwich", "quartic_matrix_entries",
    "quintic_matrices", "evaluate", "constraint_report", "classify_F",
    "classify_E_local", "local_equations_E", "jacobian_E", "jacobian_rank_E",
    "jacobian_nullity_E",
]
