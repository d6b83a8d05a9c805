"""Camera triples and the maps sending them to fundamental matrix triples."""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import smallalg as sa
from .errors import (
    CoincidentCentersError,
    DegenerateSampleError,
    IsotropicCenterError,
    ZeroCenterError,
    ZeroScaleError,
)

PRIORS = ("F", "E", "Delta")
PAIRS = ((0, 1), (0, 2), (1, 2))

AFFINE = "affine"
PROJECTIVE = "projective"

MAX_RESAMPLES = 100
ORTHO_TOL = 1e-12


def _check_prior(prior: str) -> str:
    if prior == "Δ":
        prior = "Delta"
    if prior not in PRIORS:
        raise ValueError(f"prior must be one of {PRIORS}, got {prior!r}")
    return prior


@dataclass(frozen=True, eq=False)
class Intrinsics:
    K: np.ndarray

    def __post_init__(self):
        K = np.asarray(self.K)
        if K.shape != (3, 3):
            raise ValueError("intrinsics must be 3x3")
        if sa.is_exact(K):
            below = [K[1, 0], K[2, 0], K[2, 1]]
            if any(x != 0 for x in below):
                raise ValueError("intrinsics must be upper-triangular")
        elif np.abs(np.tril(K, -1)).max() != 0:
            raise ValueError("intrinsics must be upper-triangular")
        d = sa.det3(K)
        if (d == 0) if sa.is_exact(K) else abs(d) == 0:
            raise ValueError("intrinsics must be invertible")
        object.__setattr__(self, "K", K)


@dataclass(frozen=True, eq=False)
class Rotation:
    R: np.ndarray

    def __post_init__(self):
        R = np.asarray(self.R)
        if R.shape != (3, 3):
            raise ValueError("rotation must be 3x3")
        gram = R.T @ R
        if sa.is_exact(R):
            ok = all(gram[i, j] == (1 if i == j else 0) for i in range(3) for j in range(3))
            ok = ok and sa.det3(R) == 1
        else:
            ok = (np.abs(gram - np.eye(3)).max() <= ORTHO_TOL
                  and abs(sa.det3(R) - 1) <= ORTHO_TOL)
        if not ok:
            raise ValueError("not a rotation: R^T R != I or det R != 1")
        object.__setattr__(self, "R", R)


@dataclass(frozen=True, eq=False)
class CameraTriple:
    K: tuple
    R: tuple
    c: tuple
    prior: str = "F"

    def __post_init__(self):
        prior = _check_prior(self.prior)
        object.__setattr__(self, "prior", prior)
        K = tuple(k if isinstance(k, Intrinsics) else Intrinsics(k) for k in self.K)
        R = tuple(r if isinstance(r, Rotation) else Rotation(r) for r in self.R)
        c = tuple(np.asarray(x) for x in self.c)
        if len(K) != 3 or len(R) != 3 or len(c) != 3:
            raise ValueError("a camera triple has exactly three cameras")
        if prior == "E":
            for k in K:
                if not _is_identity(k.K):
                    raise ValueError("prior E requires K = I")
        if prior == "Delta":
            for k in K[1:]:
                if not _same(k.K, K[0].K):
                    raise ValueError("prior Delta requires K1 = K2 = K3")
        for i, j in PAIRS:
            if _same(c[i], c[j]):
                raise CoincidentCentersError(f"centers {i + 1} and {j + 1} coincide")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "c", c)

    @property
    def field(self) -> str:
        return sa.field_of(self.R[0].R)

    def projection(self, i: int) -> np.ndarray:
        """The 3x4 camera matrix ``K R (I | -c)`` of camera ``i`` (0-based)."""
        K, R, c = self.K[i].K, self.R[i].R, self.c[i]
        return K @ R @ np.hstack([sa.eye(3, self.field), -c.reshape(3, 1)])


def _is_identity(M) -> bool:
    return _same(M, np.eye(3))


def _same(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    if sa.is_exact(a) or sa.is_exact(b):
        return all(x == y for x, y in zip(a.ravel(), b.ravel()))
    return bool(np.abs(a - b).max() == 0)


@dataclass(frozen=True, eq=False)
class FundamentalTriple:
    """Three 3x3 matrices ``(F12, F13, F23)``.

    ``scale`` records whether the matrices are the canonical affine
    representatives produced from cameras (``"affine"``) or carry arbitrary
    per-factor scales (``"projective"``).  ``F(j, i)`` is ``F(i, j).T``.
    """

    F12: np.ndarray
    F13: np.ndarray
    F23: np.ndarray
    scale: str = PROJECTIVE

    def __post_init__(self):
        for name in ("F12", "F13", "F23"):
            M = np.asarray(getattr(self, name))
            if M.shape != (3, 3):
                raise ValueError(f"{name} must be 3x3")
            object.__setattr__(self, name, M)
        if self.scale not in (AFFINE, PROJECTIVE):
            raise ValueError(f"unknown scale tag {self.scale!r}")

    @property
    def matrices(self) -> tuple:
        return (self.F12, self.F13, self.F23)

    @property
    def exact(self) -> bool:
        return all(sa.is_exact(M) for M in self.matrices)

    @property
    def field(self) -> str:
        return sa.RATIONAL if self.exact else sa.COMPLEX

    def F(self, i: int, j: int) -> np.ndarray:
        """``F_ij`` with 1-based indices; ``F_ji`` is the transpose of ``F_ij``."""
        table = {(1, 2): self.F12, (1, 3): self.F13, (2, 3): self.F23}
        if (i, j) in table:
            return table[i, j]
        if (j, i) in table:
            return table[j, i].T
        raise KeyError((i, j))

    def to_field(self, field: str) -> "FundamentalTriple":
        return replace(self, **{n: sa.as_field(M, field) for n, M in
                                zip(("F12", "F13", "F23"), self.matrices)})

    def normalized(self) -> "FundamentalTriple":
        """Complex-field copy with every nonzero factor scaled to unit Frobenius norm."""
        mats = []
        for M in self.matrices:
            M = sa.as_complex(M)
            n = np.linalg.norm(M)
            mats.append(M / n if n > 0 else M)
        return FundamentalTriple(*mats, scale=PROJECTIVE)

    def as_vector(self) -> np.ndarray:
        """The 27 entries in row-major order, F12 then F13 then F23."""
        return np.concatenate([np.asarray(M).ravel() for M in self.matrices])

    @classmethod
    def from_vector(cls, x, scale: str = PROJECTIVE) -> "FundamentalTriple":
        x = np.asarray(x)
        return cls(x[:9].reshape(3, 3), x[9:18].reshape(3, 3), x[18:27].reshape(3, 3), scale=scale)


def fundamental_pair(Ki, Ri, ci, Kj, Rj, cj) -> np.ndarray:
    """``Ki^{-T} Ri [cj - ci]_x Rj^T Kj^{-1}``."""
    ci, cj = np.asarray(ci), np.asarray(cj)
    if _same(ci, cj):
        raise CoincidentCentersError("camera centers coincide")
    Ai = sa.inverse3(np.asarray(Ki))
    Aj = sa.inverse3(np.asarray(Kj))
    return Ai.T @ np.asarray(Ri) @ sa.cross_matrix(cj - ci) @ np.asarray(Rj).T @ Aj


def triple_from_cameras(ct: CameraTriple) -> FundamentalTriple:
    mats = [fundamental_pair(ct.K[i].K, ct.R[i].R, ct.c[i], ct.K[j].K, ct.R[j].R, ct.c[j])
            for i, j in PAIRS]
    return FundamentalTriple(*mats, scale=AFFINE)


def rescale(t: FundamentalTriple, u12, u13, u23) -> FundamentalTriple:
    us = (u12, u13, u23)
    if any(u == 0 for u in us):
        raise ZeroScaleError("rescaling factors must be nonzero")
    mats = [M * u for M, u in zip(t.matrices, us)]
    return FundamentalTriple(*mats, scale=PROJECTIVE)


def twisted_pair(R, c):
    """``(R (2 c c^T / c^T c - I), -c)``."""
    R = R.R if isinstance(R, Rotation) else np.asarray(R)
    c = np.asarray(c)
    n = c @ c
    if n == 0:
        raise IsotropicCenterError("c^T c = 0: twisted pair undefined")
    H = 2 * np.outer(c, c) / n - sa.eye(3, sa.field_of(c))
    return R @ H, -c


def essential_from_pose(R, c) -> np.ndarray:
    """``[c]_x R^T``."""
    R = R.R if isinstance(R, Rotation) else np.asarray(R)
    c = np.asarray(c)
    if all(x == 0 for x in c.ravel()):
        raise ZeroCenterError("essential matrix needs a nonzero center")
    return sa.cross_matrix(c) @ R.T


def mega_matrix(t: FundamentalTriple) -> np.ndarray:
    """The symmetric 9x9 block matrix with zero diagonal blocks."""
    F12, F13, F23 = t.matrices
    Z = sa.zeros((3, 3), F12)
    return sa.block([[Z, F12, F13],
                     [F12.T, Z, F23],
                     [F13.T, F23.T, Z]])


def mega_center_form(c1, c2, c3, u12, u13, u23) -> np.ndarray:
    """Skew 9x9 matrix with block ``(i, j)`` equal to ``u_ij [c_j - c_i]_x``."""
    c = [np.asarray(x) for x in (c1, c2, c3)]
    u = {(0, 1): u12, (0, 2): u13, (1, 2): u23}
    Z = sa.zeros((3, 3), c[0])
    blocks = [[Z] * 3 for _ in range(3)]
    for (i, j), uij in u.items():
        B = uij * sa.cross_matrix(c[j] - c[i])
        blocks[i][j] = B
        blocks[j][i] = B.T
    return sa.block(blocks)


def mega_kernel_vectors(c1, c2, c3, u12, u13, u23) -> list[np.ndarray]:
    """Three kernel vectors of :func:`mega_center_form`, independent for noncollinear centers."""
    c1, c2, c3 = (np.asarray(x) for x in (c1, c2, c3))
    z = c1 * 0
    return [
        np.concatenate([u23 * (c2 - c1), u13 * (c1 - c2), z]),
        np.concatenate([u23 * (c3 - c1), z, u12 * (c1 - c3)]),
        np.concatenate([z, u13 * (c3 - c2), u12 * (c2 - c3)]),
    ]


# ---------------------------------------------------------------- sampling

def _rational(rng, lo: int, hi: int, den: int) -> Fraction:
    return Fraction(int(rng.integers(lo, hi + 1)), den)


def cayley_rotation(S) -> np.ndarray:
    """``(I - S)(I + S)^{-1}`` for a skew matrix ``S``; rational in, rational out."""
    S = np.asarray(S)
    I = sa.eye(3, sa.field_of(S))
    return (I - S) @ sa.inverse3(I + S)


def quaternion_rotation(q) -> np.ndarray:
    a, b, c, d = np.asarray(q, dtype=float) / np.linalg.norm(q)
    return np.array([
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ])


def _sample_rotation(rng, field):
    if field == sa.RATIONAL:
        w = [_rational(rng, -6, 6, int(rng.integers(1, 7))) for _ in range(3)]
        return cayley_rotation(sa.cross_matrix(np.array(w, dtype=object)))
    return sa.as_complex(quaternion_rotation(rng.normal(size=4)))


def _sample_center(rng, field):
    if field == sa.RATIONAL:
        return np.array([_rational(rng, -8, 8, 8) for _ in range(3)], dtype=object)
    return sa.as_complex(rng.uniform(-1, 1, size=3))


def _sample_intrinsics(rng, field):
    if field == sa.RATIONAL:
        K = sa.as_exact(np.zeros((3, 3), dtype=int))
        for i in range(3):
            K[i, i] = _rational(rng, 4, 16, 8)
            for j in range(i + 1, 3):
                K[i, j] = _rational(rng, -4, 4, 8)
        return K
    K = np.triu(rng.uniform(-0.5, 0.5, size=(3, 3)), 1)
    K[np.diag_indices(3)] = rng.uniform(0.5, 2.0, size=3)
    return sa.as_complex(K)


def _collinear(c) -> bool:
    v = np.cross(c[1] - c[0], c[2] - c[0]) if not sa.is_exact(c[0]) else \
        sa.cross_matrix(c[1] - c[0]) @ (c[2] - c[0])
    if sa.is_exact(c[0]):
        return all(x == 0 for x in v)
    scale = np.linalg.norm(c[1] - c[0]) * np.linalg.norm(c[2] - c[0])
    return bool(np.linalg.norm(v) <= 1e-9 * max(scale, 1e-300))


def sample_cameras(prior: str = "F", seed: int = 0, field: str = sa.COMPLEX,
                   collinear: bool = False) -> CameraTriple:
    prior = _check_prior(prior)
    if field not in sa.FIELDS:
        raise ValueError(f"unknown field {field!r}")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLES):
        R = [_sample_rotation(rng, field) for _ in range(3)]
        c = [_sample_center(rng, field) for _ in range(2)]
        if collinear:
            if field == sa.RATIONAL:
                s = _rational(rng, -8, 8, 4)
            else:
                s = rng.uniform(-2, 2)
            c.append(c[0] + s * (c[1] - c[0]))
        else:
            c.append(_sample_center(rng, field))
        if prior == "E":
            K = [sa.eye(3, field)] * 3
        elif prior == "Delta":
            K = [_sample_intrinsics(rng, field)] * 3
        else:
            K = [_sample_intrinsics(rng, field) for _ in range(3)]
        if any(_same(c[i], c[j]) for i, j in PAIRS):
            continue
        if not collinear and _collinear(c):
            continue
        return CameraTriple(tuple(K), tuple(R), tuple(c), prior)
    raise DegenerateSampleError(f"no nondegenerate draw in {MAX_RESAMPLES} attempts")


def sample_triple(prior: str = "F", seed: int = 0, field: str = sa.COMPLEX,
                  collinear: bool = False) -> tuple[CameraTriple, FundamentalTriple]:
    """Deterministic camera triple and its canonical affine fundamental triple."""
    ct = sample_cameras(prior, seed, field, collinear)
    return ct, triple_from_cameras(ct)


def random_rank2_triple(seed: int = 0) -> FundamentalTriple:
    """Three independent random rank-2 matrices (generically not compatible)."""
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(3):
        U, s, Vh = np.linalg.svd(rng.normal(size=(3, 3)))
        s[2] = 0
        mats.append(sa.as_complex((U * s) @ Vh))
    return FundamentalTriple(*mats)


# ------------------------------------------------------ dimension estimate

def _tangent_basis(prior: str):
    """Unit tangent directions as (dK, omega, dc) lists; K directions skip the (3,3) entry."""
    k_slots = [(i, j) for i in range(3) for j in range(i, 3) if (i, j) != (2, 2)]
    dirs = []
    zero3 = [np.zeros((3, 3))] * 3
    zerov = [np.zeros(3)] * 3
    if prior == "F":
        for cam in range(3):
            for (i, j) in k_slots:
                dK = [np.zeros((3, 3)) for _ in range(3)]
                dK[cam][i, j] = 1.0
                dirs.append((dK, zerov, zerov))
    elif prior == "Delta":
        for (i, j) in k_slots:
            E = np.zeros((3, 3))
            E[i, j] = 1.0
            dirs.append(([E, E, E], zerov, zerov))
    for cam in range(3):
        for a in range(3):
            w = [np.zeros(3) for _ in range(3)]
            w[cam][a] = 1.0
            dirs.append((zero3, w, zerov))
    for cam in range(3):
        for a in range(3):
            dc = [np.zeros(3) for _ in range(3)]
            dc[cam][a] = 1.0
            dirs.append((zero3, zerov, dc))
    return dirs


def parametrization_jacobian(ct: CameraTriple, projective: bool = True) -> np.ndarray:
    """Analytic Jacobian (27 x n_params) of the camera-to-triple map.

    Rotations vary as ``R exp([w]_x)``.  With ``projective`` each 9-row block is
    projected orthogonally to its own matrix, giving the differential of the
    map into the product of projective spaces.
    """
    K = [sa.as_complex(k.K) for k in ct.K]
    R = [sa.as_complex(r.R) for r in ct.R]
    c = [sa.as_complex(x) for x in ct.c]
    A = [np.linalg.inv(k) for k in K]
    cols = []
    for dK, w, dc in _tangent_basis(ct.prior):
        dA = [-A[i] @ dK[i] @ A[i] for i in range(3)]
        dR = [R[i] @ sa.cross_matrix(w[i]) for i in range(3)]
        col = []
        for i, j in PAIRS:
            C = sa.cross_matrix(c[j] - c[i])
            dC = sa.cross_matrix(dc[j] - dc[i])
            dF = (dA[i].T @ R[i] @ C @ R[j].T @ A[j]
                  + A[i].T @ dR[i] @ C @ R[j].T @ A[j]
                  + A[i].T @ R[i] @ dC @ R[j].T @ A[j]
                  + A[i].T @ R[i] @ C @ dR[j].T @ A[j]
                  + A[i].T @ R[i] @ C @ R[j].T @ dA[j])
            if projective:
                F = A[i].T @ R[i] @ C @ R[j].T @ A[j]
                f, df = F.ravel(), dF.ravel()
                df = df - (np.vdot(f, df) / np.vdot(f, f)) * f
                dF = df.reshape(3, 3)
            col.append(dF.ravel())
        cols.append(np.concatenate(col))
    return np.array(cols).T


def dimension_estimate(prior: str = "F", trials: int = 5, seed: int = 0,
                       projective: bool = True, tol: float = sa.DEFAULT_RANK_TOL) -> int:
    """Generic rank of the parametrization's Jacobian, maximized over random samples."""
    prior = _check_prior(prior)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    best = 0
    for t in range(trials):
        ct = sample_cameras(prior, seed=seed + 7919 * t, field=sa.COMPLEX)
        best = max(best, sa.numeric_rank(parametrization_jacobian(ct, projective), tol))
    return best


def transform_cameras(ct: CameraTriple, S, t) -> CameraTriple:
    """Apply a rigid motion to the world frame: ``(R_i, c_i) -> (R_i S^T, S c_i + t)``."""
    S, t = np.asarray(S), np.asarray(t)
    R = tuple(r.R @ S.T for r in ct.R)
    c = tuple(S @ x + t for x in ct.c)
    return CameraTriple(ct.K, R, c, ct.prior)


__all__ = [
    "AFFINE", "PROJECTIVE", "PRIORS", "Intrinsics", "Rotation", "CameraTriple",
    "FundamentalTriple", "fundamental_pair", "triple_from_cameras", "rescale",
    "twisted_pair", "essential_from_pose", "mega_matrix", "mega_center_form",
    "mega_kernel_vectors", "sample_cameras", "sample_triple", "random_rank2_triple",
    "cayley_rotation", "quaternion_rotation", "parametrization_jacobian",
    "dimension_estimate", "transform_cameras",
]
