"""Epipoles, collinearity diagnostics and the classical compatibility test.

``e_ji`` spans the kernel of ``F_ij`` and ``e_ij`` the kernel of ``F_ij.T``, so
``e_ji`` is the image of camera ``i``'s center in view ``j``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import smallalg as sa
from .camera import FundamentalTriple
from .errors import RankError, ZeroInputError

DEFAULT_TOL = 1e-8

# (i, j) labels of the six epipoles, in storage order
EPIPOLE_LABELS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))

# (i, j, k) with F_ij e_jk in im(F_ik), in the order they are usually listed
LINE_RELATIONS = ((1, 2, 3), (1, 3, 2), (2, 3, 1), (2, 1, 3), (3, 1, 2), (3, 2, 1))


class CollinearityStatus(enum.Enum):
    Noncollinear = "Noncollinear"
    Collinear = "Collinear"
    Mixed = "Mixed"


class HZVerdict(enum.Enum):
    Compatible = "Compatible"
    Incompatible = "Incompatible"
    Inapplicable = "Inapplicable"


@dataclass(frozen=True, eq=False)
class EpipoleSet:
    e12: np.ndarray
    e13: np.ndarray
    e21: np.ndarray
    e23: np.ndarray
    e31: np.ndarray
    e32: np.ndarray

    def e(self, i: int, j: int) -> np.ndarray:
        return getattr(self, f"e{i}{j}")

    def items(self):
        return [((i, j), self.e(i, j)) for i, j in EPIPOLE_LABELS]

    @property
    def exact(self) -> bool:
        return all(sa.is_exact(v) for _, v in self.items())


def _prepared(t: FundamentalTriple) -> FundamentalTriple:
    return t if t.exact else t.normalized()


def _check_rank2(t: FundamentalTriple, tol: float):
    for name, M in zip(("F12", "F13", "F23"), t.matrices):
        r = sa.numeric_rank(M, tol)
        if r != 2:
            raise RankError(f"{name} has rank {r}, epipoles need rank 2", factor=name)


def epipoles(t: FundamentalTriple, tol: float = DEFAULT_TOL) -> EpipoleSet:
    t = _prepared(t)
    _check_rank2(t, tol)
    # e_ij spans ker(F_ji)
    vecs = {f"e{i}{j}": sa.kernel_vector(t.F(j, i), tol) for i, j in EPIPOLE_LABELS}
    return EpipoleSet(**vecs)


def _parallel(u, v, tol) -> bool:
    return sa.proj_equal(u, v, tol)


def collinearity_status(e: EpipoleSet, tol: float = DEFAULT_TOL) -> CollinearityStatus:
    same = [_parallel(e.e12, e.e13, tol),
            _parallel(e.e21, e.e23, tol),
            _parallel(e.e31, e.e32, tol)]
    if not any(same):
        return CollinearityStatus.Noncollinear
    if all(same):
        return CollinearityStatus.Collinear
    return CollinearityStatus.Mixed


def triangulation_residuals(t: FundamentalTriple, e: EpipoleSet) -> np.ndarray:
    """``(e13^T F12 e23, e12^T F13 e32, e21^T F23 e31)``."""
    vals = [e.e13 @ t.F12 @ e.e23, e.e12 @ t.F13 @ e.e32, e.e21 @ t.F23 @ e.e31]
    return np.array(vals, dtype=object if (t.exact and e.exact) else complex)


def _all_zero(res: np.ndarray, tol: float) -> bool:
    if sa.is_exact(res):
        return all(x == 0 for x in res)
    return bool(np.abs(res).max() <= tol)


def hz_compatible(t: FundamentalTriple, tol: float = DEFAULT_TOL) -> HZVerdict:
    """Triangulation test, valid only for rank-2 factors with noncollinear epipoles."""
    t = _prepared(t)
    try:
        e = epipoles(t, tol)
    except RankError:
        return HZVerdict.Inapplicable
    if collinearity_status(e, tol) is not CollinearityStatus.Noncollinear:
        return HZVerdict.Inapplicable
    res = triangulation_residuals(t, e)
    return HZVerdict.Compatible if _all_zero(res, tol) else HZVerdict.Incompatible


def _in_column_space(A, v, tol) -> bool:
    stacked = np.column_stack([A, v])
    if sa.is_exact(stacked):
        return sa.exact_rank(stacked) <= 2
    cols = stacked / np.maximum(np.linalg.norm(stacked, axis=0), 1e-300)
    return sa.numeric_rank(cols, tol) <= 2


def line_membership_check(t: FundamentalTriple, e: EpipoleSet | None = None,
                          tol: float = DEFAULT_TOL) -> list[bool]:
    """Whether ``F_ij e_jk`` lies in ``im(F_ik)`` for the six relations in ``LINE_RELATIONS``."""
    t = _prepared(t)
    _check_rank2(t, tol)
    if e is None:
        e = epipoles(t, tol)
    out = []
    for i, j, k in LINE_RELATIONS:
        line = t.F(i, j) @ e.e(j, k)
        out.append(_in_column_space(t.F(i, k), line, tol))
    return out


def epipolar_lines(t: FundamentalTriple, e: EpipoleSet) -> list[np.ndarray]:
    """The six lines ``F_ij e_jk`` in ``LINE_RELATIONS`` order."""
    return [t.F(i, j) @ e.e(j, k) for i, j, k in LINE_RELATIONS]


def line_join_check(t: FundamentalTriple, e: EpipoleSet | None = None,
                    tol: float = DEFAULT_TOL) -> list[bool]:
    """Whether each line ``F_ij e_jk`` is proportional to the join ``e_ij x e_ik``.

    A zero line or a degenerate join (coincident epipoles) counts as ``False``.
    """
    t = _prepared(t)
    if e is None:
        e = epipoles(t, tol)
    out = []
    for (i, j, k), line in zip(LINE_RELATIONS, epipolar_lines(t, e)):
        join = sa.cross_matrix(e.e(i, j)) @ e.e(i, k)
        try:
            out.append(sa.proj_equal(line, join, tol))
        except ZeroInputError:
            out.append(False)
    return out


__all__ = [
    "EpipoleSet", "CollinearityStatus", "HZVerdict", "EPIPOLE_LABELS", "LINE_RELATIONS",
    "epipoles", "collinearity_status", "triangulation_residuals", "hz_compatible",
    "line_membership_check", "epipolar_lines", "line_join_check",
]
