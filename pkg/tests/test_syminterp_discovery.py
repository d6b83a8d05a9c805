import json
from fractions import Fraction

import numpy as np
import pytest

from fundtriples import smallalg as sa
from fundtriples.camera import cayley_rotation
from fundtriples.syminterp import discovery, interp, oracle
from fundtriples.syminterp.discovery import DiscoveryConfig, run_discovery
from fundtriples.syminterp.poly import poly_from_json


def spins(label_key):
    return [int(x) for x in label_key.split(",")[:3]]


def module_dim(label_key):
    return int(np.prod([2 * l + 1 for l in spins(label_key)]))


def test_decomposition_counts(discovery_report):
    r = discovery_report
    assert r.weight_spaces == 2787
    assert r.total_dimension == 27405
    assert r.k == 372
    assert r.max_multiplicity == 5
    assert r.max_dimension == 375
    assert sum(r.dimensions.values()) == 27405


def test_blockwise_route_is_smaller_and_agrees(discovery_report):
    r = discovery_report
    assert r.routes_agree is True
    assert r.largest_instance_blockwise == 23
    assert r.largest_instance_direct > r.largest_instance_blockwise


def test_vanishing_degree_four_part_has_dimension_90(discovery_report):
    r = discovery_report
    total = sum(n["vanishing"] * module_dim(n["label"]) for n in r.nontrivial)
    # 81 cubic multiples plus the 9 quartics
    assert total == 90
    assert r.nontrivial_count == 12
    assert r.in_cubic_multiples == 9


def test_three_new_components(discovery_report):
    r = discovery_report
    assert r.new_count == 3
    assert sorted(r.new_labels) == ["0,0,1,2,1,1", "0,1,0,1,2,1", "1,0,0,1,1,2"]
    by_label = {n["label"]: n for n in r.nontrivial}
    for lab in r.new_labels:
        assert by_label[lab]["vanishing"] == 1


def test_rationalized_quartics_match_known(discovery_report):
    r = discovery_report
    assert r.orbit_dimension == 9
    assert r.matches_known_quartics
    polys = [poly_from_json(p) for p in r.rationalized]
    assert len(polys) == 9
    assert all(p.multidegrees() <= {(2, 1, 1), (1, 2, 1), (1, 1, 2)} for p in polys)
    known = oracle.quartics()
    assert interp.span_rank(polys) == interp.span_rank(known) == interp.span_rank(polys + known) == 9
    assert all(all(Fraction(c).denominator == 1 for c in p.terms.values()) for p in polys)


def test_rationalized_quartics_vanish_on_fresh_samples(discovery_report):
    polys = [poly_from_json(p) for p in discovery_report.rationalized]
    assert discovery_report.exact_vanishing_checks == 20
    for x in interp.Sampler(seed=99).exact_points(20):
        assert all(oracle.evaluate_integer(p, x) == 0 for p in polys)


def test_rationalized_quartics_are_invariant_under_the_group(discovery_report):
    polys = [poly_from_json(p) for p in discovery_report.rationalized]
    rng = np.random.default_rng(5)
    for x in interp.Sampler(seed=98).exact_points(5):
        x = np.array(x, dtype=object)
        S = []
        for _ in range(3):
            a, b, c = (Fraction(int(rng.integers(-4, 5)), 3) for _ in range(3))
            S.append(cayley_rotation(sa.as_exact(np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]]))))
        lam = [Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 4))) for _ in range(3)]
        F12, F13, F23 = (x[9 * b:9 * b + 9].reshape(3, 3) for b in range(3))
        y = np.concatenate([(lam[0] * S[0] @ F12 @ S[1].T).ravel(),
                            (lam[1] * S[0] @ F13 @ S[2].T).ravel(),
                            (lam[2] * S[1] @ F23 @ S[2].T).ravel()])
        assert all(oracle.evaluate_integer(p, list(y)) == 0 for p in polys)
    # float complex rotations too
    for x in interp.Sampler(seed=97).float_points(3):
        Sc = [cayley_rotation(np.array([[0, -c, b], [c, 0, -a], [-b, a, 0]]))
              for a, b, c in rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))]
        F12, F13, F23 = (x[9 * b:9 * b + 9].reshape(3, 3) for b in range(3))
        y = np.concatenate([(Sc[0] @ F12 @ Sc[1].T).ravel(), (Sc[0] @ F13 @ Sc[2].T).ravel(),
                            (Sc[1] @ F23 @ Sc[2].T).ravel()])
        for p in polys:
            scale = sum(abs(complex(c)) for c in p.terms.values()) * max(1, np.abs(y).max()) ** 4
            assert abs(p.evaluate(y)) <= 1e-9 * scale


def test_report_serializes(discovery_report):
    d = json.loads(discovery_report.to_json())
    assert d["k"] == 372
    assert d["config"]["decomposition_tol"] == 1e-5
    assert d["config"]["interpolation_tol"] == 1e-10
    assert d["unstable_components"] == []
    assert d["config_notes"] == []


def test_config_validation():
    with pytest.raises(ValueError):
        DiscoveryConfig.from_dict({"bogus": 1})
    cfg = DiscoveryConfig.from_dict({"seed": 4})
    assert cfg.non_default() == ["seed"]


def test_loose_interpolation_tolerance_is_flagged():
    r = run_discovery(DiscoveryConfig(interpolation_tol=1e-2, blockwise=False))
    assert r.unstable_components
    assert any("near the interpolation threshold" in n for n in r.config_notes)
    assert any("interpolation_tol" in n for n in r.config_notes)


def test_threads_do_not_change_results(discovery_report):
    r = run_discovery(DiscoveryConfig(threads=2, blockwise=False, seed=1))
    assert r.k == discovery_report.k
    assert r.multiplicities == discovery_report.multiplicities
    assert r.nontrivial == discovery_report.nontrivial
    assert r.rationalized == discovery_report.rationalized


def test_label_helpers():
    assert discovery.label_key((1, 0, -1, 2, 1, 1)) == "1,0,-1,2,1,1"
    assert discovery._lex_nonnegative((0, 0, 0))
    assert discovery._lex_nonnegative((0, 1, -1))
    assert not discovery._lex_nonnegative((0, -1, 1))
    assert len(discovery._module_weights((1, 0, 1, 2, 1, 1))) == 9
