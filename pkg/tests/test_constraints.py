from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from fundtriples import constraints as C, corpus, smallalg as sa
from fundtriples.camera import FundamentalTriple, mega_matrix, rescale, sample_triple
from fundtriples.constraints import ConstraintFamily as CF
from fundtriples.syminterp import oracle

from conftest import mat3, nonzero_rational, random_rational_triple

FAMILY_ORACLES = {
    CF.DetCubics: oracle.det_cubics,
    CF.Quartics: oracle.quartics,
    CF.Quintics: oracle.quintics,
    CF.Septics: oracle.septics,
}


def invertible(rng):
    while True:
        H = sa.as_exact(rng.integers(-3, 4, size=(3, 3)))
        if sa.det3(H) != 0:
            return H


def act(t, H):
    """``F_ij -> H_i^T F_ij H_j``."""
    return FundamentalTriple(H[0].T @ t.F12 @ H[1], H[0].T @ t.F13 @ H[2], H[1].T @ t.F23 @ H[2])


def pattern(t):
    rep = C.constraint_report(t, C.F_FAMILIES)
    return tuple(rep.nonzero_count(f) for f in C.F_FAMILIES)


# bookkeeping

def test_family_counts():
    assert [f.count for f in C.F_FAMILIES] == [3, 9, 27, 108]
    assert len(C.SEPTIC_INDICES) == 108
    assert sum(f.count for f in C.E_LOCAL_FAMILIES) == 37
    assert CF.Quintics is not CF.Demazure


def test_septic_index_order():
    first = C.SEPTIC_INDICES[0]
    assert first.rows == (1, 4) and first.cols == (1, 4)
    # deleted rows and columns always come from two different row blocks
    for p in C.SEPTIC_INDICES:
        assert (p.rows[0] - 1) // 3 != (p.rows[1] - 1) // 3
        assert (p.rows[0] - 1) // 3 == (p.cols[0] - 1) // 3
        assert p.i[0] <= p.j[0] and p.i[1] <= p.j[1]
    assert len({(p.rows, p.cols) for p in C.SEPTIC_INDICES}) == 108


def test_evaluate_returns_declared_lengths():
    t = random_rational_triple(np.random.default_rng(0))
    res = C.evaluate(t, list(CF))
    for fam, r in res.items():
        assert len(r) == fam.count


# independent symbolic oracles

@pytest.mark.parametrize("fam", list(FAMILY_ORACLES), ids=lambda f: f.name)
def test_evaluators_match_symbolic_expansion(fam):
    polys = FAMILY_ORACLES[fam]()
    rng = np.random.default_rng(fam.count)
    nonzero = 0
    for _ in range(20):
        t = random_rational_triple(rng)
        got = C.evaluate(t, [fam])[fam]
        x = t.as_vector()
        want = [oracle.evaluate_integer(p, x) for p in polys]
        assert list(got) == want
        nonzero += any(want)
    assert nonzero == 20


def test_demazure_matches_symbolic_expansion():
    polys = oracle.demazure()
    rng = np.random.default_rng(9)
    for _ in range(20):
        t = random_rational_triple(rng)
        got = C.evaluate(t, [CF.Demazure])[CF.Demazure]
        assert list(got) == [p.evaluate(t.as_vector()) for p in polys]


def test_m6_matches_truncated_symbolic_sextic():
    p = oracle.homogenized_sextic()
    assert p.multidegrees() == {(2, 2, 2)}
    rng = np.random.default_rng(10)
    for _ in range(20):
        t = random_rational_triple(rng)
        want = oracle.evaluate_integer(p, t.as_vector())
        assert C.eval_M6(t) == want
        assert abs(C.eval_M6_dft(t.to_field(sa.COMPLEX)) - complex(want)) <= 1e-8 * max(1, abs(want))


# scaling laws

@pytest.mark.parametrize("fam", list(FAMILY_ORACLES) + [CF.M6], ids=lambda f: f.name)
def test_multihomogeneous_scaling(fam):
    polys = FAMILY_ORACLES[fam]() if fam in FAMILY_ORACLES else [oracle.homogenized_sextic()]
    rng = np.random.default_rng(21)
    t = random_rational_triple(rng)
    u = [nonzero_rational(rng) for _ in range(3)]
    base = C.evaluate(t, [fam])[fam]
    scaled = C.evaluate(rescale(t, *u), [fam])[fam]
    for p, a, b in zip(polys, base, scaled):
        (deg,) = p.multidegrees()
        assert b == a * u[0] ** deg[0] * u[1] ** deg[1] * u[2] ** deg[2]


def test_members_survive_rescaling():
    rng = np.random.default_rng(5)
    for seed in range(10):
        _, t = sample_triple("F", seed, sa.RATIONAL)
        t = rescale(t, *(nonzero_rational(rng) for _ in range(3)))
        verdict, rep = C.classify_F(t)
        assert verdict is C.Verdict.Member and rep.exact


# group covariance

def test_verdict_pattern_is_invariant_under_change_of_frames():
    rng = np.random.default_rng(33)
    docs = [corpus.load(n).triple for n in corpus.NAMES]
    docs += [sample_triple("F", s, sa.RATIONAL)[1] for s in range(3)]
    for t in docs:
        before = [n == 0 for n in pattern(t)]
        H = [invertible(rng) for _ in range(3)]
        assert [n == 0 for n in pattern(act(t, H))] == before


def test_quartic_matrices_are_covariant():
    rng = np.random.default_rng(34)
    t = random_rational_triple(rng)
    H = [invertible(rng) for _ in range(3)]
    D0 = C.quartic_matrix_entries(t).reshape(3, 3, 3)
    D1 = C.quartic_matrix_entries(act(t, H)).reshape(3, 3, 3)
    dets = [sa.det3(h) for h in H]
    for n, (i, j, k) in enumerate(C.QUARTIC_SANDWICHES):
        # H_i^T F_ij H_j adj(H_j) adj(F_kj) adj(H_k^T) H_k^T F_ki H_i
        assert (D1[n] == dets[j - 1] * dets[k - 1] * (H[i - 1].T @ D0[n] @ H[i - 1])).all()


# quartics and symmetric sandwiches

def test_quartics_vanish_iff_sandwiches_symmetric():
    rng = np.random.default_rng(40)
    cases = [random_rational_triple(rng) for _ in range(5)]
    cases += [sample_triple("F", s, sa.RATIONAL)[1] for s in range(5)]
    cases += [corpus.load(n).triple for n in corpus.NAMES]
    for t in cases:
        sym = all((C.sandwich(t, *ijk) == C.sandwich(t, *ijk).T).all()
                  for ijk in C.QUARTIC_SANDWICHES)
        assert sym == (not any(C.eval_quartics(t)))


def test_nine_quartics_sit_inside_the_matrix_entries():
    t = random_rational_triple(np.random.default_rng(41))
    D = C.quartic_matrix_entries(t).reshape(3, 3, 3)
    q = C.eval_quartics(t).reshape(3, 3)
    for n in range(3):
        assert (D[n] == -D[n].T).all()
        assert list(q[n]) == [D[n][0, 1], D[n][0, 2], D[n][1, 2]]


# septics and rank

def test_septics_vanish_for_low_rank_mega_matrix():
    rng = np.random.default_rng(50)
    for seed in range(5):
        _, t = sample_triple("F", seed, sa.RATIONAL)
        t = rescale(t, *(nonzero_rational(rng) for _ in range(3)))
        assert sa.exact_rank(mega_matrix(t)) <= 6
        assert not any(C.eval_septics(t))


def test_septics_detect_rank_seven():
    t = corpus.load("one_septic").triple
    assert sa.exact_rank(mega_matrix(t)) == 7
    assert C.constraint_report(t, [CF.Septics]).nonzero_count(CF.Septics) == 1


def test_random_triples_are_nonmembers():
    rng = np.random.default_rng(51)
    for _ in range(5):
        verdict, rep = C.classify_F(random_rational_triple(rng))
        assert verdict is C.Verdict.NonMember
        assert set(rep.failing()) == set(C.F_FAMILIES)


# float path

def test_float_members_and_tolerance():
    for seed in range(20):
        _, t = sample_triple("F", seed)
        verdict, rep = C.classify_F(t)
        assert verdict is C.Verdict.Member and not rep.exact
    _, t = sample_triple("F", 0)
    bumped = FundamentalTriple(t.F12 + 1e-3, t.F13, t.F23)
    assert C.classify_F(bumped)[0] is C.Verdict.NonMember


def test_float_report_is_scale_invariant():
    _, t = sample_triple("F", 3)
    a = C.constraint_report(t, C.F_FAMILIES)
    b = C.constraint_report(rescale(t, 1e3, 1e-3, 7.0), C.F_FAMILIES)
    assert a.all_vanish() and b.all_vanish()


# diamond product

@settings(max_examples=30)
@given(mat3(), mat3())
def test_diamond_identities(A, B):
    assert (C.diamond(A, B) == C.diamond(B, A)).all()
    assert (C.diamond(A, A) == -2 * sa.adjugate(A)).all()
    assert (C.diamond(2 * A, B) == 2 * C.diamond(A, B)).all()
    assert (sa.adjugate(A + B) == sa.adjugate(A) + sa.adjugate(B) - C.diamond(A, B)).all()


# essential triples

def test_martyushev_families_vanish_on_compatible_essential_triples():
    for seed in range(10):
        _, t = sample_triple("E", seed, sa.RATIONAL)
        rep = C.constraint_report(t, C.MARTYUSHEV_FAMILIES)
        assert rep.all_vanish()


def test_martyushev_fails_on_mismatched_essential_matrices():
    ts = [sample_triple("E", s, sa.RATIONAL)[1] for s in range(3)]
    t = FundamentalTriple(ts[0].F12, ts[1].F13, ts[2].F23)
    assert not C.constraint_report(t, C.MARTYUSHEV_FAMILIES).all_vanish()
    assert C.classify_E_local(t)[0] is C.Verdict.Inconsistent


def test_e_local_verdicts():
    rng = np.random.default_rng(60)
    for seed in range(5):
        _, t = sample_triple("E", seed, sa.RATIONAL)
        t = rescale(t, *(nonzero_rational(rng) for _ in range(3)))
        assert C.classify_E_local(t)[0] is C.Verdict.LocallyConsistent
        _, f = sample_triple("F", seed, sa.RATIONAL)
        assert C.classify_E_local(f)[0] is C.Verdict.Inconsistent


def test_jacobian_nullity_matches_essential_dimension():
    for seed in range(3):
        _, t = sample_triple("E", seed)
        assert C.jacobian_nullity_E(t) == 14
        assert C.jacobian_rank_E(t) == 13


def test_jacobian_stencil_is_exact_on_polynomials():
    _, t = sample_triple("E", 0)
    t = t.normalized()
    J = C.jacobian_E(t)
    x = t.as_vector()
    h = 1e-6
    e = np.zeros(27)
    e[4] = h
    fd = (C.local_equations_E(FundamentalTriple.from_vector(x + e))
          - C.local_equations_E(FundamentalTriple.from_vector(x - e))) / (2 * h)
    assert np.allclose(J[:, 4], fd, atol=1e-6)
