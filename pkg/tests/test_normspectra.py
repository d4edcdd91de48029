import math

import numpy as np
import pytest

from twistlab import fixtures, normspectra
from twistlab.algebra import AlgebraElement, delta
from twistlab.cocycles import TableCocycle, TrivialCocycle
from twistlab.errors import MemoryBudgetExceeded, Unsupported
from twistlab.groups import FreeGroup
from twistlab.normspectra import (certify_free_subsemigroup, exact_norm,
                                  exact_spectrum, haagerup_upper,
                                  l2_spectral_radius, regular_rep,
                                  transfer_check, truncated_norm_lower)


def z2_sign():
    G = fixtures.cyclic(2)
    sigma = TableCocycle(G, np.array([[1, 1], [1, -1]], dtype=complex))
    return G, sigma


def test_regular_rep_twisted_z2():
    G, sigma = z2_sign()
    m = regular_rep(G, sigma, delta(G, 1))
    # u_1 acts as the antisymmetric shift: u_1 u_1 = -u_0
    assert np.allclose(m, [[0, -1], [1, 0]])


def test_exact_norm_twisted_vs_untwisted():
    G, sigma = z2_sign()
    a = delta(G, 0) + delta(G, 1)
    assert exact_norm(G, sigma, a) == pytest.approx(math.sqrt(2.0), abs=1e-9)
    assert exact_norm(G, TrivialCocycle(G), a) == pytest.approx(2.0, abs=1e-9)


def test_exact_norm_needs_finite(f2):
    with pytest.raises(Unsupported):
        exact_norm(f2, TrivialCocycle(f2), delta(f2, ()))


def test_exact_spectrum_normal_element(s3):
    # spectrum of the regular matrix, against the dense LAPACK oracle
    sigma = fixtures.random_coboundary(s3, seed=3)
    a = delta(s3, 1)
    a = a + __import__("twistlab.algebra", fromlist=["involute"]).involute(a, sigma)
    vals = exact_spectrum(s3, sigma, a)
    ref = np.linalg.eigvalsh(regular_rep(s3, sigma, a))
    # exact_spectrum compresses clusters: mutual containment up to 1e-8
    for v in vals:
        assert np.min(np.abs(ref - v)) <= 1e-8
    for r in ref:
        assert min(abs(r - v) for v in vals) <= 1e-8


def test_spectrum_twisted_z2_is_imaginary():
    G, sigma = z2_sign()
    vals = exact_spectrum(G, sigma, delta(G, 1))
    assert sorted(np.round(v.imag, 9) for v in vals) == [-1.0, 1.0]
    assert all(abs(v.real) <= 1e-9 for v in vals)


def test_r2_sequence_binomial_oracle(f2):
    # ||(u_x + u_x^-1)^n||_2^2 = C(2n, n) exactly
    x = f2.generator(1)
    a = delta(f2, x) + delta(f2, f2.invert(x))
    rep = l2_spectral_radius(a, None, 8)
    for n, r in enumerate(rep.r2_sequence, start=1):
        expect = math.comb(2 * n, n) ** (1.0 / (2 * n))
        assert r == pytest.approx(expect, rel=1e-12)


def test_truncated_norm_monotone_and_bounded(f2):
    sigma = TrivialCocycle(f2)
    x, y = f2.generator(1), f2.generator(2)
    a = (delta(f2, x) + delta(f2, f2.invert(x))
         + delta(f2, y) + delta(f2, f2.invert(y)))
    prev = 0.0
    for r in range(2, 7):
        lo = truncated_norm_lower(f2, sigma, a, r)
        assert lo >= prev - 1e-12
        prev = lo
    assert prev <= 2.0 * math.sqrt(3.0) + 1e-9


def test_truncated_norm_finite_group_is_exact(s3):
    sigma = fixtures.random_coboundary(s3, seed=1)
    a = delta(s3, 1) + delta(s3, 4, 0.5j)
    assert truncated_norm_lower(s3, sigma, a, 3) == pytest.approx(
        exact_norm(s3, sigma, a), abs=1e-9)


def test_mem_cap_enforced(f2):
    a = delta(f2, f2.generator(1))
    with pytest.raises(MemoryBudgetExceeded):
        truncated_norm_lower(f2, TrivialCocycle(f2), a, 10, mem_cap=100)


def test_haagerup_upper(f2):
    x, y = f2.generator(1), f2.generator(2)
    a = (delta(f2, x) + delta(f2, f2.invert(x))
         + delta(f2, y) + delta(f2, f2.invert(y)))
    assert haagerup_upper(f2, a) == pytest.approx(4.0)
    assert haagerup_upper(f2, delta(f2, ())) == pytest.approx(1.0)


def test_haagerup_needs_free_backend(s3):
    with pytest.raises(Unsupported):
        haagerup_upper(s3, delta(s3, 1))


def test_transfer_on_lattice_product():
    G = fixtures.cyclic_product([4, 4])
    S = [G.index_of_label(l) for l in [(1, 0), (0, 1), (1, 1)]]
    sigmas = [fixtures.random_cocycle_abelian(G, [4, 4], seed) for seed in range(5)]
    rep = transfer_check(G, S, sigmas, seed=0)
    assert rep.passed
    assert rep.constant > 0
    assert all(r <= rep.constant + 1e-9 for r in rep.per_sigma_max_ratio)


def test_semigroup_certified(f2):
    x, y = f2.generator(1), f2.generator(2)
    cert = certify_free_subsemigroup(f2, x, [y, f2.compose(y, y)], 6)
    assert cert.certified
    assert cert.collision is None
    assert cert.products_checked == sum(2**k for k in range(1, 7))


def test_semigroup_rejects_with_collision(f2):
    x = f2.generator(1)
    cert = certify_free_subsemigroup(f2, f2.identity(), [x, f2.invert(x)], 2)
    assert not cert.certified
    assert cert.collision is not None
    assert cert.length <= 2


def test_spectral_radius_normal_flag(s3):
    from twistlab.algebra import involute
    sigma = fixtures.random_coboundary(s3, seed=2)
    a = delta(s3, 1)
    h = a + involute(a, sigma)
    rep = l2_spectral_radius(h, sigma, 6)
    assert rep.normal
    assert rep.r_sigma is not None
    assert rep.r_sigma == pytest.approx(exact_norm(s3, sigma, h), abs=1e-8)


def test_regular_rep_is_multiplicative(q8):
    from twistlab.algebra import convolve
    sigma = fixtures.random_coboundary(q8, seed=4)
    a = delta(q8, 2) + delta(q8, 5, 1j)
    b = delta(q8, 1, -0.5) + delta(q8, 3)
    lhs = regular_rep(q8, sigma, convolve(a, b, sigma))
    rhs = regular_rep(q8, sigma, a) @ regular_rep(q8, sigma, b)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12
