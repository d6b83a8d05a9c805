from fractions import Fraction

import numpy as np
import pytest

from fundtriples import camera, constraints as C, epipolar as E, smallalg as sa
from fundtriples.camera import (CameraTriple, FundamentalTriple, cayley_rotation,
                                essential_from_pose, fundamental_pair, mega_center_form,
                                mega_kernel_vectors, mega_matrix, rescale, sample_cameras,
                                sample_triple, triple_from_cameras, twisted_pair)
from fundtriples.errors import (CoincidentCentersError, IsotropicCenterError, ZeroCenterError,
                                ZeroScaleError)

from conftest import nonzero_rational

I3 = sa.eye(3, sa.RATIONAL)


def ex(v):
    return sa.as_exact(np.array(v))


def zero(M):
    return all(x == 0 for x in np.asarray(M).ravel())


def random_camera(rng):
    a, b, c = (Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(3))
    S = ex([[0, -c, b], [c, 0, -a], [-b, a, 0]])
    K = ex([[Fraction(int(rng.integers(2, 9)), 4), Fraction(int(rng.integers(-3, 4)), 5),
             Fraction(int(rng.integers(-3, 4)), 3)],
            [0, Fraction(int(rng.integers(2, 9)), 4), Fraction(int(rng.integers(-3, 4)), 3)],
            [0, 0, 1]])
    centre = ex([Fraction(int(rng.integers(-6, 7)), 3) for _ in range(3)])
    return K, cayley_rotation(S), centre


# fundamental_pair

def test_fundamental_pair_trivial_cameras():
    F = fundamental_pair(I3, I3, ex([0, 0, 0]), I3, I3, ex([1, 0, 0]))
    assert (F == sa.cross_matrix(ex([1, 0, 0]))).all()


def test_fundamental_pair_coincident_centres():
    with pytest.raises(CoincidentCentersError):
        fundamental_pair(I3, I3, ex([1, 2, 3]), I3, I3, ex([1, 2, 3]))


def test_fundamental_pair_singular_and_epipole(rng):
    for _ in range(100):
        Ki, Ri, ci = random_camera(rng)
        Kj, Rj, cj = random_camera(rng)
        if (ci == cj).all():
            continue
        F = fundamental_pair(Ki, Ri, ci, Kj, Rj, cj)
        assert sa.det3(F) == 0
        assert sa.exact_rank(F) == 2
        # image of centre i in camera j spans the kernel of F_ij
        Pj = Kj @ Rj @ np.hstack([I3, -cj.reshape(3, 1)])
        img = Pj @ np.concatenate([ci, ex([1])])
        assert zero(F @ img)
        assert sa.proj_equal(sa.kernel_vector(F), img)
        # swapping the roles gives the transpose
        assert sa.proj_equal(fundamental_pair(Kj, Rj, cj, Ki, Ri, ci), F.T)


# triple_from_cameras

def test_collinear_centres_give_collinear_epipoles():
    ct = CameraTriple((I3,) * 3, (I3,) * 3, (ex([0, 0, 0]), ex([1, 0, 0]), ex([2, 0, 0])), "E")
    t = triple_from_cameras(ct)
    assert E.collinearity_status(E.epipoles(t)) is E.CollinearityStatus.Collinear


def test_generic_cameras_give_noncollinear_epipoles():
    for seed in range(10):
        _, t = sample_triple("F", seed, sa.RATIONAL)
        assert E.collinearity_status(E.epipoles(t)) is E.CollinearityStatus.Noncollinear


def test_essential_prior_satisfies_demazure():
    for seed in range(10):
        _, t = sample_triple("E", seed, sa.RATIONAL)
        for M in t.matrices:
            assert zero(C.eval_demazure(M))


def test_fji_is_transpose_up_to_scale():
    ct, t = sample_triple("F", 4, sa.RATIONAL)
    for i, j in camera.PAIRS:
        Fji = fundamental_pair(ct.K[j].K, ct.R[j].R, ct.c[j], ct.K[i].K, ct.R[i].R, ct.c[i])
        assert sa.proj_equal(Fji, t.F(i + 1, j + 1).T)
        assert (t.F(j + 1, i + 1) == t.F(i + 1, j + 1).T).all()


def test_world_motion_changes_factors_only_by_scale(rng):
    ct, t = sample_triple("F", 2, sa.RATIONAL)
    S = cayley_rotation(ex([[0, -1, 2], [1, 0, -3], [-2, 3, 0]]) / 5)
    shift = ex([Fraction(1, 2), -2, 3])
    t2 = triple_from_cameras(camera.transform_cameras(ct, S, shift))
    for A, B in zip(t.matrices, t2.matrices):
        assert sa.proj_equal(A, B)


# sampling

def test_sampling_is_deterministic():
    a = sample_triple("F", 11, sa.RATIONAL)[1]
    b = sample_triple("F", 11, sa.RATIONAL)[1]
    assert all((x == y).all() for x, y in zip(a.matrices, b.matrices))
    a = sample_triple("Delta", 3)[1]
    b = sample_triple("Delta", 3)[1]
    assert all((x == y).all() for x, y in zip(a.matrices, b.matrices))


def test_rational_samples_are_exact():
    ct, t = sample_triple("F", 5, sa.RATIONAL)
    assert t.exact and t.scale == camera.AFFINE
    for r in ct.R:
        assert (r.R.T @ r.R == I3).all() and sa.det3(r.R) == 1
    for k in ct.K:
        assert k.K[1, 0] == k.K[2, 0] == k.K[2, 1] == 0


def test_priors_constrain_intrinsics():
    ct = sample_cameras("E", 0, sa.RATIONAL)
    assert all((k.K == I3).all() for k in ct.K)
    ct = sample_cameras("Delta", 0, sa.RATIONAL)
    assert all((k.K == ct.K[0].K).all() for k in ct.K)
    with pytest.raises(ValueError):
        sample_cameras("X", 0)


def test_camera_type_validation():
    with pytest.raises(ValueError):
        camera.Intrinsics(ex([[1, 0, 0], [1, 1, 0], [0, 0, 1]]))
    with pytest.raises(ValueError):
        camera.Intrinsics(ex([[1, 0, 0], [0, 0, 0], [0, 0, 1]]))
    with pytest.raises(ValueError):
        camera.Rotation(ex([[1, 0, 0], [0, 1, 0], [0, 0, -1]]))
    with pytest.raises(ValueError):
        CameraTriple((I3, I3, 2 * I3), (I3,) * 3, (ex([0, 0, 0]), ex([1, 0, 0]), ex([0, 1, 0])), "E")
    with pytest.raises(CoincidentCentersError):
        CameraTriple((I3,) * 3, (I3,) * 3, (ex([0, 0, 0]), ex([0, 0, 0]), ex([0, 1, 0])))


def test_samples_are_members():
    for seed in range(100):
        _, t = sample_triple("F", seed)
        verdict, _ = C.classify_F(t)
        assert verdict is C.Verdict.Member


def test_collinear_flag():
    ct, t = sample_triple("F", 1, sa.RATIONAL, collinear=True)
    d1, d2 = ct.c[1] - ct.c[0], ct.c[2] - ct.c[0]
    assert zero(sa.cross_matrix(d1) @ d2)
    assert E.collinearity_status(E.epipoles(t)) is E.CollinearityStatus.Collinear


# rescale

def test_rescale_identity_and_errors():
    _, t = sample_triple("F", 0, sa.RATIONAL)
    t1 = rescale(t, 1, 1, 1)
    assert all((a == b).all() for a, b in zip(t.matrices, t1.matrices))
    assert t1.scale == camera.PROJECTIVE
    with pytest.raises(ZeroScaleError):
        rescale(t, 1, 0, 2)


def test_rescaled_members_stay_members(rng):
    for seed in range(10):
        _, t = sample_triple("F", seed, sa.RATIONAL)
        t = rescale(t, *(nonzero_rational(rng) for _ in range(3)))
        rep = C.constraint_report(t, C.F_FAMILIES)
        assert rep.exact and rep.all_vanish()


def test_rescale_breaks_quartic_trace_identity_but_not_sextic(rng):
    hits = 0
    for seed in range(20):
        _, t = sample_triple("E", seed, sa.RATIONAL)
        t = rescale(t, *(nonzero_rational(rng) for _ in range(3)))
        mart = C.eval_martyushev(t)
        assert C.eval_M6(t) == 0
        assert mart[C.ConstraintFamily.MartyushevSextic][0] == 0
        hits += mart[C.ConstraintFamily.NecF4][0] != 0
    assert hits >= 18


# twisted pair and essential matrices

def test_twisted_pair_example():
    R, c = twisted_pair(I3, ex([0, 0, 1]))
    assert (R == sa.as_exact(np.diag([-1, -1, 1]))).all()
    assert list(c) == [0, 0, -1]


def test_twisted_pair_involution_and_fibre():
    for seed in range(20):
        ct = sample_cameras("E", seed, sa.RATIONAL)
        R, c = ct.R[0].R, ct.c[1] - ct.c[0]
        R2, c2 = twisted_pair(R, c)
        camera.Rotation(R2)
        R3, c3 = twisted_pair(R2, c2)
        assert (R3 == R).all() and (c3 == c).all()
        assert sa.proj_equal(essential_from_pose(R2, c2), essential_from_pose(R, c))


def test_twisted_pair_isotropic_centre():
    with pytest.raises(IsotropicCenterError):
        twisted_pair(np.eye(3), np.array([1, 1j, 0]))


def test_essential_from_pose():
    assert (essential_from_pose(I3, ex([0, 0, 1])) == sa.cross_matrix(ex([0, 0, 1]))).all()
    with pytest.raises(ZeroCenterError):
        essential_from_pose(I3, ex([0, 0, 0]))
    rng = np.random.default_rng(1)
    for seed in range(10):
        R = sample_cameras("E", seed).R[0].R
        c = rng.normal(size=3)
        c /= np.linalg.norm(c)
        s = np.linalg.svd(essential_from_pose(R, c), compute_uv=False)
        assert abs(s[0] - s[1]) < 1e-12 and s[2] < 1e-12 and s[0] > 0.5


# mega-matrix

def test_mega_matrix_layout():
    z = FundamentalTriple(*(sa.zeros((3, 3), I3),) * 3)
    assert zero(mega_matrix(z))
    _, t = sample_triple("F", 0, sa.RATIONAL)
    M = mega_matrix(t)
    assert (M == M.T).all()
    assert (M[0:3, 3:6] == t.F12).all() and (M[0:3, 6:9] == t.F13).all()
    assert (M[3:6, 6:9] == t.F23).all() and zero(M[3:6, 3:6])


def test_mega_matrix_rank_at_most_six(rng):
    for seed in range(20):
        _, t = sample_triple("F", seed, sa.RATIONAL)
        t = rescale(t, *(nonzero_rational(rng) for _ in range(3)))
        assert sa.exact_rank(mega_matrix(t)) <= 6


def test_mega_matrix_is_not_scale_homogeneous():
    _, t = sample_triple("F", 0, sa.RATIONAL)
    A, B = mega_matrix(t), mega_matrix(rescale(t, 2, 3, 5))
    # a single scalar would have to equal 2, 3 and 5 at once
    assert not sa.proj_equal(A, B)


def test_mega_center_form_basic(rng):
    c = ex([1, 2, 3])
    assert zero(mega_center_form(c, c, c, 1, 1, 1))
    for _ in range(20):
        cs = [ex([Fraction(int(rng.integers(-5, 6)), 2) for _ in range(3)]) for _ in range(3)]
        us = [nonzero_rational(rng) for _ in range(3)]
        M = mega_center_form(*cs, *us)
        assert (M == M.T).all()
        for i in range(3):
            B = M[3 * i:3 * i + 3, 3 * ((i + 1) % 3):3 * ((i + 1) % 3) + 3]
            assert (B == -B.T).all()
        for v in mega_kernel_vectors(*cs, *us):
            assert zero(M @ v)


def test_mega_center_form_is_congruent_to_mega_matrix(rng):
    for seed in range(10):
        ct, t = sample_triple("F", seed, sa.RATIONAL)
        us = [nonzero_rational(rng) for _ in range(3)]
        D = sa.block([[ct.K[i].K @ ct.R[i].R if i == j else sa.zeros((3, 3), I3)
                       for j in range(3)] for i in range(3)])
        lhs = D.T @ mega_matrix(rescale(t, *us)) @ D
        assert (lhs == mega_center_form(*ct.c, *us)).all()


def test_mega_kernel_vectors_independent_for_noncollinear():
    cs = (ex([0, 0, 0]), ex([1, 0, 0]), ex([0, 1, 0]))
    V = np.column_stack(mega_kernel_vectors(*cs, 2, 3, 5))
    assert sa.exact_rank(V) == 3


# dimensions

def test_dimension_estimates():
    assert camera.dimension_estimate("F", trials=5) == 18
    assert camera.dimension_estimate("E", trials=5) == 11
    d = camera.dimension_estimate("Delta", trials=5)
    assert 11 <= d <= 18


def test_projective_jacobian_is_finite_difference_consistent():
    ct = sample_cameras("F", 0)
    J = camera.parametrization_jacobian(ct, projective=False)
    K0 = [k.K for k in ct.K]
    h = 1e-6
    # column 1 is the derivative along the (0, 1) entry of K1
    K1 = [k.copy() for k in K0]
    K1[0] = K1[0].astype(complex)
    K1[0][0, 1] += h
    Km = [k.copy() for k in K0]
    Km[0] = Km[0].astype(complex)
    Km[0][0, 1] -= h
    plus = triple_from_cameras(CameraTriple(tuple(K1), ct.R, ct.c, "F")).as_vector()
    minus = triple_from_cameras(CameraTriple(tuple(Km), ct.R, ct.c, "F")).as_vector()
    fd = (plus - minus) / (2 * h)
    assert np.allclose(J[:, 1], fd, atol=1e-6)
