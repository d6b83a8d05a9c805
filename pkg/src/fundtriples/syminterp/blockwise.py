"""Isotypic decomposition block by block.

Instead of decomposing all 27405 quartic monomials at once, split the quartics
by multidegree ``(d12, d13, d23)``, decompose ``Sym^d`` of each 9-dimensional
block separately, and combine the irreducible pieces by tensoring (first the
``F12`` and ``F13`` pieces, then the result with the ``F23`` pieces).  Each
tensor step again finds highest weight vectors as raising-operator kernels,
now inside a product of two irreducible modules.

The resulting highest weight vectors span the same spaces as the direct
weight-space route; the raising-operator systems are much smaller.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import lie

BLOCK_ORDER = (0, 1, 2)


@dataclass
class Irrep:
    label: tuple          # (m1, m2, m3, d12, d13, d23) of the highest weight
    hw: dict              # highest weight vector as a y-polynomial


@dataclass
class BlockwiseResult:
    irreps: list
    largest_instance: int
    instances: int

    def multiplicities(self) -> dict:
        out: dict = {}
        for ir in self.irreps:
            out[ir.label] = out.get(ir.label, 0) + 1
        return out


def _normalize(ypoly: dict) -> dict:
    n = np.sqrt(sum(abs(c) ** 2 for c in ypoly.values()))
    return {k: c / n for k, c in ypoly.items()} if n > 0 else ypoly


def _kernel_combinations(basis: list[dict], label: tuple, tol: float):
    """Highest weight combinations of ``basis`` (all of weight ``label``)."""
    basis = [_normalize(b) for b in basis]
    mats = []
    for f, op in enumerate(lie.RAISING):
        images = [op.on_forms(b) for b in basis]
        monos = sorted({m for im in images for m in im})
        if not monos:
            continue
        idx = {m: n for n, m in enumerate(monos)}
        M = np.zeros((len(monos), len(basis)), dtype=complex)
        for j, im in enumerate(images):
            for m, c in im.items():
                M[idx[m], j] += c
        mats.append(M)
    N = lie.joint_kernel(mats, len(basis), tol)
    out = []
    for col in N.T:
        v: dict = {}
        for c, b in zip(col, basis):
            if abs(c) < 1e-14:
                continue
            for m, x in b.items():
                v[m] = v.get(m, 0) + c * x
        out.append({m: x for m, x in v.items() if abs(x) > 1e-14})
    return out


def block_irreps(block: int, degree: int, tol: float = lie.DECOMP_TOL):
    """Irreducible pieces of ``Sym^degree`` of one block; returns (irreps, sizes)."""
    forms = [f.index for f in lie.FORMS if f.block == block]
    groups: dict = {}
    for mono in itertools.combinations_with_replacement(forms, degree):
        groups.setdefault(lie.ymono_label(mono), []).append(mono)
    irreps, sizes = [], []
    for label in sorted(groups):
        if not lie.is_dominant(label):
            continue
        basis = [{m: 1.0} for m in groups[label]]
        sizes.append(len(basis))
        for v in _kernel_combinations(basis, label, tol):
            irreps.append(Irrep(label, v))
    return irreps, sizes


def _product(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            key = tuple(sorted(m1 + m2))
            out[key] = out.get(key, 0) + c1 * c2
    return out


def tensor_irreps(A: Irrep, B: Irrep, tol: float = lie.DECOMP_TOL):
    """Irreducible pieces of the product of two modules in disjoint variables."""
    mod_a = lie.module_basis(A.hw, A.label)
    mod_b = lie.module_basis(B.hw, B.label)
    by_label: dict = {}
    for (la, va), (lb, vb) in itertools.product(mod_a, mod_b):
        mu = tuple(x + y for x, y in zip(la, lb))
        if lie.is_dominant(mu):
            by_label.setdefault(mu, []).append((va, vb))
    irreps, sizes = [], []
    for mu in sorted(by_label):
        basis = [_product(va, vb) for va, vb in by_label[mu]]
        sizes.append(len(basis))
        for v in _kernel_combinations(basis, mu, tol):
            irreps.append(Irrep(mu, v))
    return irreps, sizes


def blockwise_decomposition(p: int = 4, tol: float = lie.DECOMP_TOL) -> BlockwiseResult:
    cache: dict = {}
    largest, count = 0, 0

    def pieces(block, d):
        nonlocal largest, count
        if (block, d) not in cache:
            if d == 0:
                cache[block, d] = [Irrep((0,) * 6, {(): 1.0})]
            else:
                irr, sizes = block_irreps(block, d, tol)
                largest = max([largest] + sizes)
                count += len(sizes)
                cache[block, d] = irr
        return cache[block, d]

    out = []
    for d12 in range(p, -1, -1):
        for d13 in range(p - d12, -1, -1):
            d23 = p - d12 - d13
            partial = []
            for A, B in itertools.product(pieces(0, d12), pieces(1, d13)):
                irr, sizes = tensor_irreps(A, B, tol)
                largest = max([largest] + sizes)
                count += len(sizes)
                partial.extend(irr)
            for AB, C in itertools.product(partial, pieces(2, d23)):
                irr, sizes = tensor_irreps(AB, C, tol)
                largest = max([largest] + sizes)
                count += len(sizes)
                out.extend(irr)
    out.sort(key=lambda ir: ir.label)
    return BlockwiseResult(out, largest, count)


def spans_agree(direct: lie.HighestWeightSpace, vectors: list[dict], tol: float = 1e-6) -> bool:
    """Whether the block-wise vectors span the directly computed highest weight space."""
    idx = {m: n for n, m in enumerate(direct.monomials)}
    B = np.zeros((len(direct.monomials), len(vectors)), dtype=complex)
    for j, v in enumerate(vectors):
        for m, c in v.items():
            if m not in idx:
                return False
            B[idx[m], j] = c
    B = B / np.maximum(np.linalg.norm(B, axis=0), 1e-300)
    D = direct.coeffs
    r = lambda M: int(np.sum(np.linalg.svd(M, compute_uv=False) > tol)) if M.size else 0
    return r(D) == r(B) == r(np.hstack([D, B]))


__all__ = ["Irrep", "BlockwiseResult", "block_irreps", "tensor_irreps",
           "blockwise_decomposition", "spans_agree"]
