import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

import groupwalk as gw
from groupwalk.errors import (
    InvalidDistribution,
    NoClosedForm,
    SamplerUnavailable,
    TooLarge,
    ToleranceCollision,
)
from groupwalk.matrix_walk import (
    MatrixMeasure,
    kron_power,
    moment_increment_norm,
    moment_operator,
    moment_power_norm,
    rotation,
    rotation_2d,
)

SKEW_AXIS = (math.sin(1.0), 0.0, math.cos(1.0))


def klein_atoms():
    return MatrixMeasure.finite([np.diag([1.0, -1.0]), np.diag([-1.0, 1.0])], [0.5, 0.5])


def two_rotations(angle):
    return MatrixMeasure.finite([rotation((0, 0, 1), angle), rotation(SKEW_AXIS, angle)], [0.5, 0.5])


def coset_example():
    X = MatrixMeasure.finite([rotation((1, 0, 0), math.pi)], [1.0])
    return MatrixMeasure.product(X, MatrixMeasure.axis_rotation((0, 0, 1)))


def quadrature_mean(axis, degree, nodes=720):
    # dense trapezoid rule over the full circle, independent of the exact rule
    theta = 2 * math.pi * np.arange(nodes) / nodes
    R = Rotation.from_rotvec(np.outer(theta, np.asarray(axis) / np.linalg.norm(axis))).as_matrix()
    return np.mean([kron_power(M, degree) for M in R], axis=0)


# -- constructions ------------------------------------------------------------

def test_rotation_matches_scipy(rng):
    for _ in range(20):
        axis = rng.normal(size=3)
        theta = rng.uniform(-7, 7)
        ref = Rotation.from_rotvec(theta * axis / np.linalg.norm(axis)).as_matrix()
        np.testing.assert_allclose(rotation(axis, theta), ref, atol=1e-12)


def test_rotation_2d():
    np.testing.assert_allclose(rotation_2d(math.pi / 2), [[0, -1], [1, 0]], atol=1e-15)


def test_finite_measure_validation():
    with pytest.raises(InvalidDistribution, match="not unitary"):
        MatrixMeasure.finite([np.array([[2.0]])], [1.0])
    with pytest.raises(InvalidDistribution, match="sum"):
        MatrixMeasure.finite([np.eye(2)], [0.5])
    with pytest.raises(InvalidDistribution):
        MatrixMeasure.finite([np.eye(9)], [1.0])
    with pytest.raises(InvalidDistribution):
        MatrixMeasure.axis_rotation((0, 0, 0))


def test_from_dict_error_paths():
    with pytest.raises(InvalidDistribution, match=r"matrix_measure\.factors\[1\]\.kind"):
        MatrixMeasure.from_dict({"kind": "product", "factors": [
            {"kind": "axis_rotation", "axis": [0, 0, 1], "angle": {"uniform": True}}, {"kind": "nope"}]})
    with pytest.raises(InvalidDistribution, match=r"atoms\[0\]"):
        MatrixMeasure.from_dict({"kind": "finite_atoms", "atoms": [{"matrix": [[1]]}]})


def test_to_dict_round_trip():
    for m in (klein_atoms(), coset_example(), two_rotations(0.3)):
        back = MatrixMeasure.from_dict(m.to_dict())
        for k in (1, 2):
            np.testing.assert_allclose(back.mean(k), m.mean(k), atol=1e-15)


# -- exact moment operators -----------------------------------------------------

def test_rotation_pair_mean_is_cosine():
    theta = 0.7
    R = rotation_2d(theta)
    m = MatrixMeasure.finite([R, R.T], [0.5, 0.5])
    np.testing.assert_allclose(moment_operator(m).matrix, math.cos(theta) * np.eye(2), atol=1e-15)


def test_uniform_axis_mean():
    m = MatrixMeasure.axis_rotation((0, 0, 1))
    np.testing.assert_allclose(m.mean(1), np.diag([0, 0, 1]), atol=1e-15)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_uniform_axis_mean_matches_quadrature(degree):
    m = MatrixMeasure.axis_rotation(SKEW_AXIS)
    np.testing.assert_allclose(m.mean(degree), quadrature_mean(SKEW_AXIS, degree), atol=1e-12)


def test_product_mean_is_product_of_means(rng):
    a = two_rotations(0.4)
    b = MatrixMeasure.axis_rotation((1, 1, 0))
    m = MatrixMeasure.product(a, b)
    np.testing.assert_allclose(m.mean(2), a.mean(2) @ b.mean(2), atol=1e-14)
    assert np.linalg.norm(m.mean(1), 2) <= 1 + 1e-9


def test_custom_without_mean():
    m = MatrixMeasure.custom(2)
    with pytest.raises(NoClosedForm):
        m.mean(1)
    with pytest.raises(SamplerUnavailable):
        gw.estimate_moment(m, 1, 10, 0)


def test_moment_power_norm_examples():
    assert moment_power_norm(np.eye(3), 50) == pytest.approx(1.0)
    T = 0.5 * np.eye(2)
    for n in (1, 5, 20):
        assert moment_power_norm(T, n) == pytest.approx(0.5 ** n)
    with pytest.raises(ValueError):
        moment_power_norm(T, 0)


def test_two_rotation_walk_decays():
    T = moment_operator(two_rotations(2 * math.pi / 7))
    norms = [moment_power_norm(T, n) for n in range(1, 201)]
    assert min(norms) < 0.05
    assert all(x <= 1 + 1e-9 for x in norms)


def test_moment_check_verdicts():
    assert moment_check_result(two_rotations(2 * math.pi / 7)) == (True, None)
    assert moment_check_result(klein_atoms()) == (False, 2)
    assert moment_check_result(coset_example()) == (False, 1)
    assert gw.moment_check(klein_atoms(), degree_max=1).converges  # degree 1 alone misses it


def moment_check_result(m):
    c = gw.moment_check(m)
    return c.converges, c.blocking_degree


def test_moment_increment_norm():
    assert moment_increment_norm(np.diag([1.0, -1.0]), 10) == pytest.approx(2.0)
    assert moment_increment_norm(np.diag([1.0, 0.5]), 60) < 1e-15


# -- Monte Carlo ----------------------------------------------------------------

def test_estimate_is_deterministic():
    m = two_rotations(0.9)
    a = gw.estimate_moment(m, 3, 5000, seed=7)
    b = gw.estimate_moment(m, 3, 5000, seed=7)
    assert np.array_equal(a.matrix, b.matrix)
    c = gw.estimate_moment(m, 3, 5000, seed=8)
    assert not np.array_equal(a.matrix, c.matrix)


def test_point_mass_estimate_exact():
    R = rotation((0, 1, 0), 0.3)
    m = MatrixMeasure.finite([R], [1.0])
    est = gw.estimate_moment(m, 2, 1, seed=0)
    np.testing.assert_allclose(est.matrix, R @ R, atol=1e-15)
    assert np.all(est.standard_error == 0)


def test_estimate_converges_to_closed_form():
    m = two_rotations(0.9)
    est = gw.estimate_moment(m, 1, 100_000, seed=3)
    spread = max(np.abs(A - B).max() for A in m.atoms for B in m.atoms)
    assert np.abs(est.matrix - m.mean(1)).max() < 3e-2 * spread
    assert np.all(est.standard_error <= 1 / math.sqrt(100_000) + 1e-12)


@pytest.mark.slow
def test_error_scales_like_inverse_sqrt():
    m = MatrixMeasure.product(two_rotations(0.9), MatrixMeasure.axis_rotation((1, 0, 0)))
    T3 = np.linalg.matrix_power(m.mean(1), 3)
    errs = []
    for N in (1000, 4000, 16000):
        e = [np.abs(gw.estimate_moment(m, 3, N, seed=s).matrix - T3).mean() for s in range(12)]
        errs.append(np.mean(e))
    for a, b in zip(errs, errs[1:]):
        # quadrupling N halves the error, checked within 25%
        assert a / b == pytest.approx(2.0, rel=0.25)


def test_coset_example_alternates():
    m = coset_example()
    np.testing.assert_allclose(m.mean(1), np.diag([0, 0, -1]), atol=1e-15)
    ests = {n: gw.estimate_moment(m, n, 10_000, seed=11) for n in range(10, 14)}
    for n in (10, 11):
        same = ests[n + 2].matrix - ests[n].matrix
        cross = ests[n + 1].matrix - ests[n].matrix
        se = np.hypot(ests[n].standard_error, ests[n + 2].standard_error)
        assert abs(same[2, 2]) < 3 * se[2, 2] + 1e-12
        assert abs(cross[2, 2]) > 10 * se[2, 2]


# -- finite orbits --------------------------------------------------------------

def test_orbit_of_fifth_turn_is_cyclic():
    m = MatrixMeasure.finite([rotation((0, 0, 1), 2 * math.pi / 5)], [1.0])
    orbit = gw.classify_finite_orbit(m)
    assert orbit.group.order == 5
    assert all(orbit.group.element_order(a) in (1, 5) for a in range(5))
    assert isinstance(gw.verdict(orbit.distribution(m)), gw.Diverges)


def test_klein_orbit():
    m = klein_atoms()
    orbit = gw.classify_finite_orbit(m)
    G = orbit.group
    assert G.order == 4 and all(G.element_order(a) <= 2 for a in range(4))
    mats = orbit.matrices
    assert any(np.allclose(M, -np.eye(2)) for M in mats)
    v = gw.verdict(orbit.distribution(m))
    assert isinstance(v, gw.Diverges) and v.obstruction.period == 2


@pytest.mark.parametrize("atoms", [
    [rotation((0, 0, 1), math.pi / 2), rotation((1, 0, 0), math.pi / 2)],  # rotation group of the cube
    [rotation((0, 0, 1), 2 * math.pi / 5)],
    [np.diag([1.0, -1.0]), np.diag([-1.0, 1.0])],
])
def test_orbit_table_is_matrix_multiplication(atoms):
    m = MatrixMeasure.finite(atoms, [1 / len(atoms)] * len(atoms))
    orbit = gw.classify_finite_orbit(m)
    M, G = orbit.matrices, orbit.group
    for a in range(G.order):
        for b in range(G.order):
            assert np.allclose(M[a] @ M[b], M[G.mul(a, b)], atol=1e-9)
    for A, e in zip(atoms, orbit.atom_elements):
        assert np.allclose(M[e], A)


def test_cube_rotation_group_order():
    m = MatrixMeasure.finite([rotation((0, 0, 1), math.pi / 2), rotation((1, 0, 0), math.pi / 2)], [0.5, 0.5])
    assert gw.classify_finite_orbit(m).group.order == 24


def test_orbit_power_norm_matches_exact_verdict():
    for m in (klein_atoms(), MatrixMeasure.finite([rotation((0, 0, 1), 2 * math.pi / 5)], [1.0]),
              MatrixMeasure.finite([rotation((0, 0, 1), math.pi / 2), rotation((1, 0, 0), math.pi / 2)],
                                   [0.5, 0.5])):
        orbit = gw.classify_finite_orbit(m)
        converges = gw.detect_obstruction(orbit.distribution(m)) is None
        n = 3 * orbit.group.order
        small = all(moment_increment_norm(m.mean(k), n) < 1e-6 for k in (1, 2, 3))
        assert small == converges


def test_cube_walk_needs_degree_three():
    # two quarter turns are odd permutations of the cube's diagonals; the sign
    # character first shows up in the third tensor power
    m = MatrixMeasure.finite([rotation((0, 0, 1), math.pi / 2), rotation((1, 0, 0), math.pi / 2)], [0.5, 0.5])
    assert gw.detect_obstruction(gw.classify_finite_orbit(m).distribution(m)).period == 2
    assert gw.moment_check(m, degree_max=2).converges
    assert gw.moment_check(m, degree_max=3).blocking_degree == 3


def test_irrational_rotations_too_large():
    golden = (1 + math.sqrt(5)) / 2
    with pytest.raises(TooLarge):
        gw.classify_finite_orbit(two_rotations(2 * math.pi * golden), cap=200)


def test_tolerance_collision():
    m = MatrixMeasure.finite([rotation((0, 0, 1), 2 * math.pi / 5 + 1e-7)], [1.0])
    with pytest.raises(ToleranceCollision):
        gw.classify_finite_orbit(m, tol=1e-9)
