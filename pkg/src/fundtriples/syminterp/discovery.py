"""End-to-end rediscovery of the degree-4 constraints on fundamental triples.

Steps: split the quartics into weight spaces, extract highest weight vectors,
interpolate the vanishing part of each highest weight space on samples of
``Y_F``, discard what already lies in the span of the cubic multiples, expand
the survivors into full modules by lowering and reconstruct integer
polynomials, which are finally checked exactly and against the known quartics.
"""
from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import blockwise, interp, lie, oracle
from .poly import poly_to_json

DEGREE = 4


@dataclass
class DiscoveryConfig:
    decomposition_tol: float = lie.DECOMP_TOL
    interpolation_tol: float = interp.INTERP_TOL
    filter_tol: float = interp.FILTER_TOL
    round_tol: float = interp.ROUND_TOL
    seed: int = 0
    exact_checks: int = 20
    threads: int = 1
    blockwise: bool = True

    @classmethod
    def from_dict(cls, d: dict) -> "DiscoveryConfig":
        known = set(cls.__dataclass_fields__)
        bad = set(d) - known
        if bad:
            raise ValueError(f"unknown config keys: {sorted(bad)}")
        return cls(**d)

    def non_default(self) -> list[str]:
        base = DiscoveryConfig()
        return [k for k in self.__dataclass_fields__ if getattr(self, k) != getattr(base, k)]


@dataclass
class DiscoveryReport:
    config: dict
    config_notes: list
    weight_spaces: int
    total_dimension: int
    k: int
    multiplicities: dict          # label string -> a_j
    dimensions: dict              # label string -> m_j
    max_multiplicity: int
    max_dimension: int
    largest_instance_direct: int
    largest_instance_blockwise: int | None
    routes_agree: bool | None
    nontrivial: list              # [{label, a, vanishing}]
    nontrivial_count: int
    nonnegative_weight_count: int
    in_cubic_multiples: int
    new_count: int
    new_labels: list
    orbit_dimension: int
    matches_known_quartics: bool
    exact_vanishing_checks: int
    rationalized: list            # integer quartics as JSON terms
    unstable_components: list
    timings: dict = field(default_factory=dict)

    def to_json(self, **kw) -> str:
        return json.dumps(asdict(self), **kw)


def label_key(label) -> str:
    return ",".join(str(x) for x in label)


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _unstable(h: lie.HighestWeightSpace, sampler, tol: float) -> bool:
    """Whether some singular value sits within three decades of the threshold."""
    E = interp.evaluation_matrix(h, sampler.float_points(2 * h.dim + 5))
    s = np.linalg.svd(E, compute_uv=False)
    return bool(np.any((s > tol * 1e-3) & (s < tol * 1e3)))


def _module_weights(label):
    return list(itertools.product(*(range(l, -l - 1, -1) for l in label[:3])))


def _lex_nonnegative(m) -> bool:
    for x in m:
        if x:
            return x > 0
    return True


def decompose(config: DiscoveryConfig):
    spaces = lie.weight_decomposition(DEGREE)
    lookup = {w.label: w for w in spaces}
    dominant = [w for w in spaces if lie.is_dominant(w.label)]
    hws = _map(lambda w: lie.highest_weight_vectors(w, config.decomposition_tol, lookup),
               dominant, config.threads)
    return spaces, [h for h in hws if h.dim > 0]


def run_discovery(config: DiscoveryConfig | None = None) -> DiscoveryReport:
    config = config or DiscoveryConfig()
    timings = {}
    t0 = time.perf_counter()

    spaces, hws = decompose(config)
    timings["decomposition"] = time.perf_counter() - t0

    block_size, agree = None, None
    if config.blockwise:
        t1 = time.perf_counter()
        res = blockwise.blockwise_decomposition(DEGREE, config.decomposition_tol)
        mult = res.multiplicities()
        by_label: dict = {}
        for ir in res.irreps:
            by_label.setdefault(ir.label, []).append(ir.hw)
        agree = (mult == {h.label: h.dim for h in hws}
                 and all(blockwise.spans_agree(h, by_label[h.label]) for h in hws))
        block_size = res.largest_instance
        timings["blockwise"] = time.perf_counter() - t1

    # interpolation
    t1 = time.perf_counter()
    sampler = interp.Sampler(config.seed)
    sampler.exact_points(4 * max(h.dim for h in hws) + 10)
    coeffs = _map(lambda h: interp.interpolate_coefficients(h, sampler, config.interpolation_tol),
                  hws, config.threads)
    unstable = [label_key(h.label) for h in hws
                if _unstable(h, sampler, config.interpolation_tol)]
    hits = [(h, C) for h, C in zip(hws, coeffs) if C.shape[1]]
    timings["interpolation"] = time.perf_counter() - t1

    # filtering against the cubic multiples
    t1 = time.perf_counter()
    Q = interp.cubic_multiple_space()
    survivors = []
    for h, C in hits:
        ypolys = [{m: c for m, c in zip(h.monomials, col) if abs(c) > 1e-14} for col in C.T]
        polys = [lie.ypoly_to_sparse(y) for y in ypolys]
        fresh = [y for y, p in zip(ypolys, polys) if interp.filter_new([p], Q, config.filter_tol)]
        if fresh:
            survivors.append((h.label, fresh))
    timings["filtering"] = time.perf_counter() - t1

    # orbit expansion and exact reconstruction
    t1 = time.perf_counter()
    round_samples = interp.Sampler(config.seed + 1).exact_points(interp.MIN_EXACT_CHECKS)
    exact = []
    for label, ys in survivors:
        for y in ys:
            for _, v in lie.module_basis(y, label):
                exact.append(interp.rationalize(lie.ypoly_to_sparse(v), round_samples,
                                                config.round_tol))
    basis = interp.integer_basis(exact)
    known = oracle.quartics()
    r_new, r_known = interp.span_rank(basis), interp.span_rank(known)
    r_joint = interp.span_rank(basis + known)
    matches = r_new == r_known == r_joint == len(known)
    fresh_samples = interp.Sampler(config.seed + 2).exact_points(config.exact_checks)
    for p in basis:
        for x in fresh_samples:
            if oracle.evaluate_integer(p, x) != 0:
                raise AssertionError("reconstructed quartic fails to vanish exactly")
    timings["reconstruction"] = time.perf_counter() - t1
    timings["total"] = time.perf_counter() - t0

    notes = [f"{k} differs from its default" for k in config.non_default()]
    if unstable:
        notes.append(f"{len(unstable)} components have singular values near the "
                     "interpolation threshold; counts may be unreliable")

    weights_hit = sum(C.shape[1] * sum(map(_lex_nonnegative, _module_weights(h.label)))
                      for h, C in hits)

    return DiscoveryReport(
        config=asdict(config),
        config_notes=notes,
        weight_spaces=len(spaces),
        total_dimension=sum(w.dim for w in spaces),
        k=len(hws),
        multiplicities={label_key(h.label): h.dim for h in hws},
        dimensions={label_key(h.label): h.isotypic_dimension for h in hws},
        max_multiplicity=max(h.dim for h in hws),
        max_dimension=max(h.isotypic_dimension for h in hws),
        largest_instance_direct=max(h.instance_size for h in hws),
        largest_instance_blockwise=block_size,
        routes_agree=agree,
        nontrivial=[{"label": label_key(h.label), "a": h.dim, "vanishing": C.shape[1]}
                    for h, C in hits],
        nontrivial_count=len(hits),
        nonnegative_weight_count=weights_hit,
        in_cubic_multiples=len(hits) - len(survivors),
        new_count=len(survivors),
        new_labels=[label_key(l) for l, _ in survivors],
        orbit_dimension=r_new,
        matches_known_quartics=matches,
        exact_vanishing_checks=len(fresh_samples),
        rationalized=[poly_to_json(p) for p in basis],
        unstable_components=unstable,
        timings=timings,
    )


__all__ = ["DiscoveryConfig", "DiscoveryReport", "run_discovery", "decompose", "label_key"]
