"""Sparse polynomials in the 27 entries of a fundamental matrix triple.

Variables are numbered row-major: ``F12`` is 0..8, ``F13`` is 9..17 and
``F23`` is 18..26.  Exponent vectors are stored as 27-tuples of ints.
"""
from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np

NVARS = 27
BLOCKS = ((0, 9), (9, 18), (18, 27))


class GaussianRational:
    """Exact ``a + b i`` with rational ``a`` and ``b``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        elif isinstance(re, complex):
            re, im = Fraction(re.real), Fraction(re.imag) + Fraction(im)
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        return x if isinstance(x, GaussianRational) else cls(x)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.coerce(o))

    def __rsub__(self, o):
        return GaussianRational.coerce(o) - self

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, o):
        return GaussianRational.coerce(o) / self

    def __pow__(self, n: int):
        out = GaussianRational(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, o):
        if isinstance(o, (GaussianRational, numbers.Number)):
            o = GaussianRational.coerce(o)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


def _is_zero(c) -> bool:
    return c == 0


def _exact_coeff(c) -> bool:
    return isinstance(c, (GaussianRational, Fraction, int, np.integer))


def unit_exponent(v: int) -> tuple:
    e = [0] * NVARS
    e[v] = 1
    return tuple(e)


class SparsePoly27:
    """Polynomial as ``{exponent tuple: coefficient}`` with no stored zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if not _is_zero(c):
                    self.terms[tuple(e)] = c

    # constructors
    @classmethod
    def var(cls, v: int, coeff=1) -> "SparsePoly27":
        return cls({unit_exponent(v): coeff})

    @classmethod
    def const(cls, c) -> "SparsePoly27":
        return cls({(0,) * NVARS: c})

    @classmethod
    def linear(cls, w) -> "SparsePoly27":
        """The linear form ``sum_v w[v] x_v``."""
        return cls({unit_exponent(v): c for v, c in enumerate(w) if not _is_zero(c)})

    # arithmetic
    def __add__(self, o):
        if not isinstance(o, SparsePoly27):
            o = SparsePoly27.const(o) if not _is_zero(o) else SparsePoly27()
        out = dict(self.terms)
        for e, c in o.terms.items():
            s = out.get(e, 0) + c
            if _is_zero(s):
                out.pop(e, None)
            else:
                out[e] = s
        return SparsePoly27._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly27._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, SparsePoly27):
            if _is_zero(o):
                return SparsePoly27()
            return SparsePoly27._raw({e: c * o for e, c in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SparsePoly27(out)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return SparsePoly27._raw({e: c / s for e, c in self.terms.items()})

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    # inspection
    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def multidegrees(self) -> set:
        return {tuple(sum(e[a:b]) for a, b in BLOCKS) for e in self.terms}

    @property
    def exact(self) -> bool:
        return all(_exact_coeff(c) for c in self.terms.values())

    def coeff_norm(self) -> float:
        return float(np.sqrt(sum(abs(complex(c)) ** 2 for c in self.terms.values())))

    def map_coeffs(self, f) -> "SparsePoly27":
        return SparsePoly27({e: f(c) for e, c in self.terms.items()})

    def to_complex(self) -> "SparsePoly27":
        return self.map_coeffs(complex)

    def to_exact(self) -> "SparsePoly27":
        return self.map_coeffs(GaussianRational.coerce)

    def __eq__(self, o):
        if not isinstance(o, SparsePoly27):
            return NotImplemented
        return (self - o).is_zero()

    def __repr__(self):
        return f"SparsePoly27({len(self.terms)} terms, degree {self.degree()})"

    # evaluation
    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x):
        """Value at a point given as 27 coordinates or a FundamentalTriple."""
        if hasattr(x, "as_vector"):
            x = x.as_vector()
        x = list(np.asarray(x).ravel())
        if len(x) != NVARS:
            raise ValueError("need 27 coordinates")
        exact = all(_exact_coeff(v) or isinstance(v, GaussianRational) for v in x)
        total = 0 if exact else 0j
        powers: dict = {}
        for e, c in self.terms.items():
            term = c
            for v, k in enumerate(e):
                if k:
                    key = (v, k)
                    if key not in powers:
                        powers[key] = x[v] ** k
                    term = term * powers[key]
            total = total + term
        return total

    def derivative(self, v: int) -> "SparsePoly27":
        out = {}
        for e, c in self.terms.items():
            k = e[v]
            if k:
                e2 = list(e)
                e2[v] -= 1
                out[tuple(e2)] = c * k
        return SparsePoly27(out)

    def apply_linear_derivation(self, A) -> "SparsePoly27":
        """``sum_v (A x)_v d/dx_v`` applied to ``self``; ``A`` is 27x27."""
        A = np.asarray(A)
        out = SparsePoly27()
        for v in range(NVARS):
            d = self.derivative(v)
            if d.is_zero():
                continue
            row = A[v]
            lin = SparsePoly27.linear([row[u] for u in range(NVARS)])
            out = out + d * lin
        return out


def _coeff_to_json(c):
    if isinstance(c, (GaussianRational, complex)) and complex(c).imag != 0:
        if isinstance(c, GaussianRational):
            return [str(c.re), str(c.im)]
        return [c.real, c.imag]
    if isinstance(c, GaussianRational):
        return str(c.re)
    if isinstance(c, (Fraction, int, np.integer)):
        return str(Fraction(c))
    return complex(c).real


def _coeff_from_json(c):
    if isinstance(c, list):
        re, im = c
        if isinstance(re, str):
            return GaussianRational(Fraction(re), Fraction(im))
        return complex(re, im)
    if isinstance(c, str):
        return Fraction(c)
    return float(c)


def poly_to_json(p: SparsePoly27) -> list:
    """Terms as ``[[[var, power], ...], coeff]`` in sorted monomial order.

    Exact coefficients are ``"p/q"`` strings (or a pair of them when complex),
    float ones are numbers (or ``[re, im]``).
    """
    out = []
    for e in sorted(p.terms, reverse=True):
        mono = [[v, k] for v, k in enumerate(e) if k]
        out.append([mono, _coeff_to_json(p.terms[e])])
    return out


def poly_from_json(terms) -> SparsePoly27:
    out = {}
    for mono, c in terms:
        e = [0] * NVARS
        for v, k in mono:
            e[v] = k
        out[tuple(e)] = _coeff_from_json(c)
    return SparsePoly27(out)


def coefficient_matrix(polys, monomials=None):
    """Stack coefficient vectors of ``polys`` as rows over a shared monomial list."""
    if monomials is None:
        monomials = sorted({e for p in polys for e in p.terms})
    index = {e: n for n, e in enumerate(monomials)}
    exact = all(p.exact for p in polys)
    if exact:
        M = np.empty((len(polys), len(monomials)), dtype=object)
        M.fill(Fraction(0))
    else:
        M = np.zeros((len(polys), len(monomials)), dtype=complex)
    for r, p in enumerate(polys):
        for e, c in p.terms.items():
            M[r, index[e]] = c if exact else complex(c)
    return M, monomials


def symbolic_triple():
    """Three 3x3 object arrays of degree-1 variables ``x_0 .. x_26``."""
    mats = []
    for b in range(3):
        M = np.empty((3, 3), dtype=object)
        for r in range(3):
            for c in range(3):
                M[r, c] = SparsePoly27.var(9 * b + 3 * r + c)
        mats.append(M)
    return mats


__all__ = ["GaussianRational", "SparsePoly27", "NVARS", "BLOCKS", "coefficient_matrix",
           "symbolic_triple", "unit_exponent", "poly_to_json", "poly_from_json"]
