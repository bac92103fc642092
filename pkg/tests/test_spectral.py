import cmath
from fractions import Fraction

import numpy as np
import pytest

import groupwalk as gw
from groupwalk.errors import CapExceeded, Indeterminate, InsufficientData
from groupwalk.spectral import CONVERGES, DIVERGES, estimate_second_modulus

from conftest import random_distribution, small_groups


def circulant_eigenvalues(p):
    # characters of Z_n: lambda_k = sum_a p(a) w^(a k)
    n = p.order
    return [sum(float(p.probs[a]) * cmath.exp(2j * cmath.pi * a * k / n) for a in range(n))
            for k in range(n)]


def naive_jordan_power(m, lam, n):
    J = np.diag(np.full(m, lam, dtype=complex)) + np.diag(np.ones(m - 1), 1)
    out = np.eye(m, dtype=complex)
    for _ in range(n):
        out = out @ J
    return out


def match_multisets(a, b, tol):
    b = list(b)
    for z in a:
        k = min(range(len(b)), key=lambda i: abs(b[i] - z))
        assert abs(b[k] - z) < tol
        b.pop(k)


def test_transition_operator_rows_are_translates():
    S3 = gw.symmetric(3)
    p = gw.Distribution(S3, [0.1, 0.2, 0.3, 0.4, 0, 0])
    M = gw.transition_operator(p).matrix
    np.testing.assert_allclose(M.sum(axis=1), 1)
    for x in range(6):
        for a in range(6):
            assert M[x, S3.mul(x, a)] == p.probs[a]
    # row-vector evolution reproduces convolution
    e = np.zeros(6)
    e[0] = 1
    np.testing.assert_allclose(e @ M @ M, gw.convolve(p, p).probs)


def test_z3_eigenvalues():
    p = gw.Distribution(gw.cyclic(3), [0, 0.5, 0.5])
    lam = gw.spectrum(gw.transition_operator(p)).eigenvalues
    match_multisets(lam, [1, -0.5, -0.5], 1e-12)
    assert gw.spectrum(gw.transition_operator(p)).second_modulus == pytest.approx(0.5)


@pytest.mark.parametrize("n", range(2, 13))
def test_cyclic_spectrum_matches_circulant(n, rng):
    p = random_distribution(gw.cyclic(n), rng)
    lam = gw.spectrum(gw.transition_operator(p)).eigenvalues
    match_multisets(lam, circulant_eigenvalues(p), 1e-9)


def test_spectrum_sorted_and_census():
    p = gw.point_mass(gw.cyclic(4), 1)
    s = gw.spectrum(gw.transition_operator(p))
    assert s.unit_circle_count == 4
    assert np.all(np.diff(np.abs(s.eigenvalues)) <= 1e-12)
    d = s.to_dict()
    assert len(d["eigenvalues"]) == 4 and d["unit_circle_count"] == 4


def test_second_modulus_drops_one_per_block():
    Z6 = gw.cyclic(6)
    p = gw.Distribution(Z6, [0.5, 0, 0.5, 0, 0, 0])  # lives on {0,2,4}, two blocks
    s = gw.spectrum(gw.transition_operator(p))
    assert s.second_modulus == pytest.approx(0.5)


def test_spectrum_cap():
    p = gw.point_mass(gw.cyclic(20), 1)
    with pytest.raises(CapExceeded):
        gw.spectrum(gw.transition_operator(p), cap=10)
    with pytest.raises(CapExceeded):
        gw.spectral_verdict(p, cap=10)


def test_spectral_verdict_examples():
    assert gw.spectral_verdict(gw.Distribution(gw.cyclic(3), [0, 0.5, 0.5])) == CONVERGES
    assert gw.spectral_verdict(gw.point_mass(gw.cyclic(5), 2)) == DIVERGES
    D4 = gw.dihedral(4)
    p = gw.Distribution.from_pairs(D4, [("r^1", 0.5), ("r^0 s", 0.5)])
    assert gw.spectral_verdict(p) == DIVERGES


def test_spectral_verdict_indeterminate_near_circle():
    # eigenvalue -1 + 2e-10: inside the tolerance band but visibly off the circle
    p = gw.Distribution(gw.cyclic(2), [1e-10, 1 - 1e-10])
    with pytest.raises(Indeterminate):
        gw.spectral_verdict(p)
    assert isinstance(gw.verdict(p), gw.Converges)


def test_spectral_verdict_agrees_with_detector(rng):
    for name, G in small_groups().items():
        for _ in range(10):
            p = random_distribution(G, rng)
            expect = CONVERGES if gw.detect_obstruction(p) is None else DIVERGES
            assert gw.spectral_verdict(p) == expect, name


def test_decay_rate_fit_exact_geometric():
    trace = [(n, Fraction(1, 3) / 2 ** (n - 1)) for n in range(1, 60)]
    assert gw.decay_rate_fit(trace, 20) == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(InsufficientData):
        gw.decay_rate_fit(trace[:10], 20)
    assert gw.decay_rate_fit([(1, 0.5), (2, 0.0)], 20) == 0.0


def test_decay_rate_fit_tracks_second_modulus(rng):
    for G in (gw.cyclic(7), gw.dihedral(5), gw.symmetric(4)):
        for _ in range(5):
            p = random_distribution(G, rng).as_float()
            if gw.detect_obstruction(p) is not None:
                continue
            lam2 = gw.spectrum(gw.transition_operator(p)).second_modulus
            if not 0.05 <= lam2 <= 0.95:
                continue
            assert estimate_second_modulus(p) == pytest.approx(lam2, rel=0.1)


def test_jordan_power_examples():
    np.testing.assert_allclose(gw.jordan_power(2, 0.5, 3), [[0.125, 0.75], [0, 0.125]])
    np.testing.assert_allclose(gw.jordan_power(3, 2.0, 0), np.eye(3))
    np.testing.assert_allclose(gw.jordan_power(3, 0.0, 1), np.diag([1, 1], 1))
    with pytest.raises(ValueError):
        gw.jordan_power(0, 1.0, 2)


def test_jordan_power_matches_naive(rng):
    for _ in range(100):
        lam = complex(*rng.uniform(-1.2, 1.2, size=2))
        m = int(rng.integers(1, 6))
        n = int(rng.integers(0, 21))
        ref = naive_jordan_power(m, lam, n)
        got = gw.jordan_power(m, lam, n)
        scale = max(np.abs(ref).max(), 1e-300)
        assert np.abs(got - ref).max() <= 1e-10 * scale


def test_jordan_power_decays_inside_disk(rng):
    for _ in range(50):
        lam = 0.9 * np.sqrt(rng.uniform()) * cmath.exp(1j * rng.uniform(0, 2 * np.pi))
        assert np.abs(gw.jordan_power(5, lam, 500)).max() < 1e-8
