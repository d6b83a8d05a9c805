"""Interpolation of vanishing polynomials inside highest weight spaces.

A polynomial vanishes on ``Y_F`` exactly when every isotypic part of it does,
and an isotypic part is generated by its highest weight vectors, so it is
enough to find the combinations of highest weight vectors that vanish on
sample points.  Discovered float polynomials are then turned into exact
integer ones and checked exactly on rational samples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from .. import smallalg as sa
from ..camera import rescale, sample_triple
from ..errors import RationalizationError, SamplerDegenerateError
from . import lie, oracle
from .poly import BLOCKS, GaussianRational, SparsePoly27, coefficient_matrix

INTERP_TOL = 1e-10
FILTER_TOL = 1e-6
ROUND_TOL = 1e-4
MAX_DENOMINATOR = 64
MIN_EXACT_CHECKS = 20


def _rational_scale(rng) -> Fraction:
    while True:
        s = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        if s:
            return s


@dataclass
class Sampler:
    """Deterministic generic points of ``Y_F`` (or another prior's variety).

    Points come from rational camera triples with random rational per-factor
    scales, so the same seed gives the same exact and float points.
    """

    seed: int = 0
    prior: str = "F"
    _cache: dict = field(default_factory=dict, repr=False)

    def exact_point(self, n: int) -> list:
        if n not in self._cache:
            rng = np.random.default_rng([self.seed, n])
            _, t = sample_triple(self.prior, int(rng.integers(2 ** 31)), sa.RATIONAL)
            t = rescale(t, *(_rational_scale(rng) for _ in range(3)))
            self._cache[n] = list(t.as_vector())
        return self._cache[n]

    def exact_points(self, count: int, start: int = 0) -> list:
        return [self.exact_point(n) for n in range(start, start + count)]

    def float_points(self, count: int, start: int = 0) -> np.ndarray:
        """``count x 27`` complex array, each factor scaled to unit norm."""
        X = np.array([[complex(v) for v in p] for p in self.exact_points(count, start)])
        for a, b in BLOCKS:
            X[:, a:b] /= np.linalg.norm(X[:, a:b], axis=1, keepdims=True)
        return X


def evaluation_matrix(h: lie.HighestWeightSpace, X) -> np.ndarray:
    """Values of the highest weight vectors of ``h`` at points ``X``.

    The columns are not rescaled: the coefficient vectors are orthonormal and
    the points have unit factors, so a vanishing column must stay tiny.
    """
    return lie.ymonomial_values(h.monomials, X) @ h.coeffs


def vanishing_combinations(h: lie.HighestWeightSpace, X, tol: float = INTERP_TOL) -> np.ndarray:
    """``a x r`` orthonormal combinations of the highest weight vectors vanishing at ``X``."""
    E = evaluation_matrix(h, X)
    _, s, vh = np.linalg.svd(E)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def interpolate_coefficients(h: lie.HighestWeightSpace, sampler: Sampler,
                             tol: float = INTERP_TOL) -> np.ndarray:
    """Coefficient columns (over ``h.monomials``) of the vanishing part of ``h``.

    Two disjoint batches of ``2a + 5`` points must agree on the nullity.
    """
    n = 2 * h.dim + 5
    first = vanishing_combinations(h, sampler.float_points(n, 0), tol)
    second = vanishing_combinations(h, sampler.float_points(n, n), tol)
    if first.shape[1] != second.shape[1]:
        raise SamplerDegenerateError(
            f"nullity {first.shape[1]} vs {second.shape[1]} at {h.label}")
    return h.coeffs @ first


def interpolate_component(h: lie.HighestWeightSpace, sampler: Sampler,
                          tol: float = INTERP_TOL) -> list[SparsePoly27]:
    C = interpolate_coefficients(h, sampler, tol)
    return [lie.ypoly_to_sparse({m: c for m, c in zip(h.monomials, col) if abs(c) > 1e-14})
            for col in C.T]


# ------------------------------------------------------------------ filtering

def cubic_multiple_space() -> list[SparsePoly27]:
    """The 81 products ``x_v det(F_b)``, exact."""
    out = []
    for d in oracle.det_cubics():
        for v in range(27):
            out.append(d * SparsePoly27.var(v, Fraction(1)))
    return out


def _residual_ratio(p: SparsePoly27, Q: list[SparsePoly27]) -> float:
    support = set(p.terms)
    # only the elements of Q touching the candidate's monomials can matter
    rel = [q for q in Q if support & set(q.terms)]
    if not rel:
        return 1.0
    monos = sorted(support | {e for q in rel for e in q.terms})
    A, _ = coefficient_matrix([q.to_complex() for q in rel], monos)
    b, _ = coefficient_matrix([p.to_complex()], monos)
    A, b = A.T.astype(complex), b[0].astype(complex)
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.linalg.norm(A @ x - b) / max(np.linalg.norm(b), 1e-300))


def filter_new(candidates, Q, tol: float = FILTER_TOL) -> list[SparsePoly27]:
    """Candidates not (numerically) in the span of ``Q``."""
    return [p for p in candidates if _residual_ratio(p, Q) > tol]


# -------------------------------------------------------------- rationalizing

def _round_gauss(z: complex) -> GaussianRational:
    return GaussianRational(int(round(z.real)), int(round(z.imag)))


def rationalize(p: SparsePoly27, samples, round_tol: float = ROUND_TOL,
                max_denominator: int = MAX_DENOMINATOR) -> SparsePoly27:
    """Exact Gaussian-integer polynomial proportional to the float polynomial ``p``.

    The smallest coefficient is scaled to 1; if rounding then leaves a residual,
    small integer multiples are tried before giving up.  The result is checked
    to vanish exactly on ``samples``.
    """
    terms = {e: complex(c) for e, c in p.terms.items()}
    if not terms:
        raise RationalizationError("zero polynomial")
    big = max(abs(c) for c in terms.values())
    terms = {e: c for e, c in terms.items() if abs(c) > 1e-9 * big}
    low = min(terms.values(), key=abs)
    scaled = {e: c / low for e, c in terms.items()}
    for k in range(1, max_denominator + 1):
        resid = max(abs(k * c - complex(_round_gauss(k * c))) for c in scaled.values())
        if resid <= round_tol:
            break
    else:
        raise RationalizationError(f"rounding residual {resid:.2e} exceeds {round_tol:g}")
    exact = SparsePoly27({e: _round_gauss(k * c) for e, c in scaled.items()})
    samples = list(samples)
    if len(samples) < MIN_EXACT_CHECKS:
        raise ValueError(f"need at least {MIN_EXACT_CHECKS} exact samples")
    for x in samples:
        if exact.evaluate(list(x)) != 0:
            raise RationalizationError("rounded polynomial does not vanish exactly")
    return exact


def real_imag_parts(p: SparsePoly27) -> tuple[SparsePoly27, SparsePoly27]:
    re = SparsePoly27({e: GaussianRational.coerce(c).re for e, c in p.terms.items()})
    im = SparsePoly27({e: GaussianRational.coerce(c).im for e, c in p.terms.items()})
    return re, im


def integer_basis(polys) -> list[SparsePoly27]:
    """Integer polynomials spanning the same space as ``polys``, given it is real.

    The real and imaginary parts are stacked and reduced exactly; each
    reduced row is cleared of denominators and content.
    """
    parts = []
    for p in polys:
        parts.extend(q for q in real_imag_parts(p) if not q.is_zero())
    if not parts:
        return []
    M, monos = coefficient_matrix(parts)
    R, pivots = sa.row_echelon(M)
    out = []
    for r in range(len(pivots)):
        row = [Fraction(c) for c in R[r]]
        den = 1
        for c in row:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in row]
        g = 0
        for c in ints:
            g = gcd(g, c)
        out.append(SparsePoly27({e: Fraction(c // g) for e, c in zip(monos, ints) if c}))
    return out


def span_rank(polys) -> int:
    if not polys:
        return 0
    M, _ = coefficient_matrix(polys)
    if M.dtype == object:
        return sa.exact_rank(M)
    M = M / np.maximum(np.linalg.norm(M, axis=1, keepdims=True), 1e-300)
    return sa.numeric_rank(M, 1e-8)


__all__ = ["Sampler", "evaluation_matrix", "vanishing_combinations", "interpolate_coefficients",
           "interpolate_component", "cubic_multiple_space", "filter_new", "rationalize",
           "real_imag_parts", "integer_basis", "span_rank", "INTERP_TOL", "FILTER_TOL",
           "ROUND_TOL"]
