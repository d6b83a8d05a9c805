"""The Lie algebra so3^3 + C^3 acting on polynomials in a fundamental matrix triple.

The group acts by ``(S1 F12 S2^T, S1 F13 S3^T, S2 F23 S3^T)`` with each factor
also rescaled.  On polynomials we use the induced action ``(g.p)(F) = p(g^-1 F)``,
so a Lie algebra element ``X`` acts by the derivation ``-sum_v (delta_X x)_v d/dx_v``
and ``X -> D_X`` is a homomorphism.  Scalings act by Euler operators, so the
scaling weights of a polynomial are its multidegree.

Weight vectors are built from the index vectors ``u[+1] = (1, i, 0)``,
``u[0] = (0, 0, 1)``, ``u[-1] = (1, -i, 0)``: the linear form
``sum_rc u_a[r] u_c[c] F_rc`` of a block has weight ``a`` for the factor acting
on rows and ``c`` for the factor acting on columns.  Degree-``p`` weight spaces
are spanned by monomials in these 27 forms ("y-monomials", stored as sorted
tuples of form indices).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

import numpy as np

from .poly import GaussianRational, SparsePoly27, NVARS

J3 = np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
JPLUS = np.array([[0, 0, -1], [0, 0, -1j], [1, 1j, 0]])
JMINUS = np.array([[0, 0, 1], [0, 0, -1j], [-1, 1j, 0]])
SO3_BASIS = {"J3": J3, "J+": JPLUS, "J-": JMINUS}

# (factor acting on rows, factor acting on columns) per block 12, 13, 23
BLOCK_FACTORS = ((0, 1), (0, 2), (1, 2))
BLOCK_NAMES = ("F12", "F13", "F23")

M_VALUES = (1, 0, -1)
U_VECTORS = {1: (1, 1j, 0), 0: (0, 0, 1), -1: (1, -1j, 0)}

DECOMP_TOL = 1e-5


# --------------------------------------------------------------- derivations

def _u_coords(vec) -> dict:
    """Coordinates of a 3-vector in the basis ``u[+1], u[0], u[-1]``."""
    p, q, r = vec
    return {1: (p - 1j * q) / 2, 0: r, -1: (p + 1j * q) / 2}


def slot_table(X) -> dict:
    """Action of ``X`` on index vectors (``v -> -X^T v``) in the u-basis.

    Returns ``{a: [(a2, coeff), ...]}``: ``X . u[a] = sum coeff * u[a2]``.
    """
    X = np.asarray(X, dtype=complex)
    out = {}
    for a in M_VALUES:
        img = -X.T @ np.array(U_VECTORS[a], dtype=complex)
        coords = _u_coords(img)
        out[a] = [(a2, complex(c)) for a2, c in coords.items() if abs(c) > 1e-14]
    return out


@dataclass(frozen=True)
class WeightForm:
    index: int
    block: int
    m_row: int
    m_col: int
    label: tuple

    @cached_property
    def poly(self) -> SparsePoly27:
        ur, uc = U_VECTORS[self.m_row], U_VECTORS[self.m_col]
        w = [0] * NVARS
        for r in range(3):
            for c in range(3):
                coeff = complex(ur[r]) * complex(uc[c])
                if coeff != 0:
                    w[9 * self.block + 3 * r + c] = GaussianRational(coeff)
        return SparsePoly27.linear(w)

    @property
    def vector(self) -> np.ndarray:
        """Coefficients of this form on the 27 entries (complex)."""
        v = np.zeros(NVARS, dtype=complex)
        for e, c in self.poly.terms.items():
            v[e.index(1)] = complex(c)
        return v


def _form_index(block: int, m_row: int, m_col: int) -> int:
    return 9 * block + 3 * M_VALUES.index(m_row) + M_VALUES.index(m_col)


def _make_forms() -> list[WeightForm]:
    forms = []
    for b, (fr, fc) in enumerate(BLOCK_FACTORS):
        for a in M_VALUES:
            for c in M_VALUES:
                label = [0] * 6
                label[fr] += a
                label[fc] += c
                label[3 + b] = 1
                forms.append(WeightForm(_form_index(b, a, c), b, a, c, tuple(label)))
    return forms


FORMS = _make_forms()
FORM_MATRIX = np.array([f.vector for f in FORMS])          # y = FORM_MATRIX @ x


@dataclass(frozen=True)
class Derivation:
    """One of the 12 generators, acting as a derivation on polynomials."""

    name: str
    factor: int            # 0..2 for so3 factors, 3..5 for the scaling of block factor-3
    kind: str              # "J3", "J+", "J-" or "scale"
    matrix: np.ndarray = field(repr=False)      # 27x27 A with D = sum (A x)_v d/dx_v
    ytable: tuple = field(repr=False)           # per form: tuple of (form, coeff)

    def __call__(self, p: SparsePoly27) -> SparsePoly27:
        A = self.matrix
        if p.exact:
            A = np.vectorize(GaussianRational, otypes=[object])(A)
        return p.apply_linear_derivation(A)

    def on_forms(self, ypoly: dict) -> dict:
        """Apply to a polynomial in the weight forms, ``{y-monomial: coeff}``."""
        return apply_ytable(self.ytable, ypoly)


def apply_ytable(table, ypoly: dict) -> dict:
    out: dict = {}
    for mono, coeff in ypoly.items():
        for pos, v in enumerate(mono):
            if pos and mono[pos - 1] == v:
                continue        # handle repeated factors once, with multiplicity
            mult = mono.count(v)
            rest = mono[:pos] + mono[pos + mult:]
            rest = rest + (v,) * (mult - 1)
            for v2, c in table[v]:
                key = tuple(sorted(rest + (v2,)))
                out[key] = out.get(key, 0) + coeff * c * mult
    return {k: c for k, c in out.items() if abs(c) > 1e-15}


def _x_matrix(factor: int, X) -> np.ndarray:
    """27x27 matrix A of the derivation ``-delta_X`` on the entries."""
    X = np.asarray(X, dtype=complex)
    A = np.zeros((NVARS, NVARS), dtype=complex)
    for b, (fr, fc) in enumerate(BLOCK_FACTORS):
        base = 9 * b
        if fr == factor:       # delta F = X F
            for r, c, s in itertools.product(range(3), repeat=3):
                A[base + 3 * r + c, base + 3 * s + c] -= X[r, s]
        if fc == factor:       # delta F = F X^T
            for r, c, s in itertools.product(range(3), repeat=3):
                A[base + 3 * r + c, base + 3 * r + s] -= X[c, s]
    return A


def _y_table(factor: int, X) -> tuple:
    tab = slot_table(X)
    out = []
    for f in FORMS:
        fr, fc = BLOCK_FACTORS[f.block]
        terms = []
        if fr == factor:
            terms += [(_form_index(f.block, a2, f.m_col), c) for a2, c in tab[f.m_row]]
        if fc == factor:
            terms += [(_form_index(f.block, f.m_row, c2), c) for c2, c in tab[f.m_col]]
        out.append(tuple(terms))
    return tuple(out)


def lie_generators() -> list[Derivation]:
    """J3, J+, J- for each so3 factor, then the three block scalings."""
    gens = []
    for factor in range(3):
        for kind, X in SO3_BASIS.items():
            gens.append(Derivation(f"{kind}[{factor + 1}]", factor, kind,
                                   _x_matrix(factor, X), _y_table(factor, X)))
    for b in range(3):
        A = np.zeros((NVARS, NVARS), dtype=complex)
        A[9 * b:9 * b + 9, 9 * b:9 * b + 9] = np.eye(9)
        table = tuple(((f.index, 1.0),) if f.block == b else () for f in FORMS)
        gens.append(Derivation(f"scale[{BLOCK_NAMES[b]}]", 3 + b, "scale", A, table))
    return gens


GENERATORS = lie_generators()
RAISING = tuple(g for g in GENERATORS if g.kind == "J+")
LOWERING = tuple(g for g in GENERATORS if g.kind == "J-")
CARTAN = tuple(g for g in GENERATORS if g.kind in ("J3", "scale"))


def weight_basis_degree1() -> list[WeightForm]:
    return list(FORMS)


# ------------------------------------------------------ weight decomposition

def ymono_label(mono) -> tuple:
    return tuple(map(sum, zip(*(FORMS[v].label for v in mono)))) if mono else (0,) * 6


def ypoly_to_sparse(ypoly: dict) -> SparsePoly27:
    """Expand a polynomial in the weight forms into the 27 entries."""
    cache: dict = {}
    out = SparsePoly27()
    for mono, coeff in ypoly.items():
        if mono not in cache:
            p = SparsePoly27.const(GaussianRational(1))
            for v in mono:
                p = p * FORMS[v].poly
            cache[mono] = p.to_complex()
        out = out + cache[mono] * complex(coeff)
    return out


def ymonomial_values(monos, X) -> np.ndarray:
    """Values of y-monomials at points ``X`` (n x 27); returns n x len(monos)."""
    Y = np.atleast_2d(np.asarray(X, dtype=complex)) @ FORM_MATRIX.T
    out = np.ones((Y.shape[0], len(monos)), dtype=complex)
    for j, mono in enumerate(monos):
        for v in mono:
            out[:, j] *= Y[:, v]
    return out


@dataclass
class WeightSpace:
    label: tuple
    monomials: list          # sorted y-monomials spanning W_mu

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @cached_property
    def basis(self) -> list[SparsePoly27]:
        return [ypoly_to_sparse({m: 1.0}) for m in self.monomials]


def weight_decomposition(p: int) -> list[WeightSpace]:
    """Degree-``p`` weight spaces in lexicographic label order."""
    if p < 0:
        raise ValueError("degree must be nonnegative")
    groups: dict = {}
    for mono in itertools.combinations_with_replacement(range(NVARS), p):
        groups.setdefault(ymono_label(mono), []).append(mono)
    return [WeightSpace(mu, groups[mu]) for mu in sorted(groups)]


def expected_dimension(p: int) -> int:
    return comb(NVARS + p - 1, p)


# -------------------------------------------------------- highest weights

def raising_matrix(space: WeightSpace, target: list, op: Derivation) -> np.ndarray:
    """Matrix of ``op`` from ``space`` into the span of the ``target`` monomials."""
    index = {m: n for n, m in enumerate(target)}
    M = np.zeros((len(target), space.dim), dtype=complex)
    for j, mono in enumerate(space.monomials):
        for m2, c in op.on_forms({mono: 1.0}).items():
            M[index[m2], j] += c
    return M


@dataclass
class HighestWeightSpace:
    label: tuple
    monomials: list
    coeffs: np.ndarray       # dim W_mu x a, columns are highest weight vectors
    instance_size: int       # columns of the raising-operator system

    @property
    def dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def spins(self) -> tuple:
        return self.label[:3]

    @property
    def isotypic_dimension(self) -> int:
        return self.dim * int(np.prod([2 * l + 1 for l in self.spins]))

    def ypolys(self) -> list[dict]:
        return [{m: c for m, c in zip(self.monomials, col) if abs(c) > 1e-14}
                for col in self.coeffs.T]

    @cached_property
    def basis(self) -> list[SparsePoly27]:
        return [ypoly_to_sparse(y) for y in self.ypolys()]


def joint_kernel(mats: list, ncols: int, tol: float) -> np.ndarray:
    """Orthonormal basis of the joint kernel with an absolute SVD threshold."""
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return np.eye(ncols, dtype=complex)
    A = np.vstack(mats)
    _, s, vh = np.linalg.svd(A)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def highest_weight_vectors(w: WeightSpace, tol: float = DECOMP_TOL,
                           lookup: dict | None = None) -> HighestWeightSpace:
    """Joint kernel of the three raising operators on ``w``.

    ``lookup`` maps labels to weight spaces of the same degree; when omitted the
    target monomials are enumerated from the images themselves.
    """
    mats = []
    for f, op in enumerate(RAISING):
        tgt = list(w.label)
        tgt[f] += 1
        tgt = tuple(tgt)
        if lookup is not None:
            target = lookup[tgt].monomials if tgt in lookup else []
        else:
            target = sorted({m for mono in w.monomials for m in op.on_forms({mono: 1.0})})
        mats.append(raising_matrix(w, target, op) if target else np.zeros((0, w.dim)))
    N = joint_kernel(mats, w.dim, tol)
    return HighestWeightSpace(w.label, list(w.monomials), N, w.dim)


def is_dominant(label) -> bool:
    return min(label[:3]) >= 0


def lower(ypoly: dict, factor: int) -> dict:
    return LOWERING[factor].on_forms(ypoly)


def module_basis(hw: dict, label: tuple) -> list[tuple[tuple, dict]]:
    """Weight basis of the irreducible module generated by a highest weight vector.

    Vectors are ``J-[1]^p J-[2]^q J-[3]^r hw`` for ``p <= 2 l1`` etc.
    """
    out = []
    spins = label[:3]
    for steps in itertools.product(*(range(2 * l + 1) for l in spins)):
        v = hw
        for f, n in enumerate(steps):
            for _ in range(n):
                v = lower(v, f)
        lab = list(label)
        for f, n in enumerate(steps):
            lab[f] -= n
        out.append((tuple(lab), v))
    return out


__all__ = [
    "J3", "JPLUS", "JMINUS", "BLOCK_FACTORS", "M_VALUES", "U_VECTORS", "DECOMP_TOL",
    "WeightForm", "Derivation", "WeightSpace", "HighestWeightSpace", "FORMS",
    "FORM_MATRIX", "GENERATORS", "RAISING", "LOWERING", "CARTAN", "lie_generators",
    "weight_basis_degree1", "weight_decomposition", "expected_dimension",
    "highest_weight_vectors", "raising_matrix", "joint_kernel", "is_dominant",
    "ypoly_to_sparse", "ymonomial_values", "ymono_label", "apply_ytable",
    "module_basis", "lower", "slot_table",
]
