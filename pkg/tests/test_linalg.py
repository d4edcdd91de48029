import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistlab import linalg
from twistlab.errors import NotFinite, NotHermitian


def random_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (m + m.conj().T)


@pytest.mark.parametrize("n,seed", [(1, 0), (2, 1), (3, 2), (5, 3), (8, 4),
                                    (13, 5), (21, 6), (34, 7)])
def test_hermitian_eigen_reconstructs(n, seed):
    a = random_hermitian(n, seed)
    w, v = linalg.hermitian_eigen(a)
    scale = max(1.0, np.abs(a).max())
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) <= 1e-12 * scale
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-12
    assert all(w[i] <= w[i + 1] + 1e-14 for i in range(n - 1))


def test_hermitian_eigen_matches_lapack_oracle():
    for n, seed in [(4, 10), (9, 11), (16, 12), (32, 13)]:
        a = random_hermitian(n, seed)
        w, _ = linalg.hermitian_eigen(a)
        ref = np.linalg.eigvalsh(a)
        assert np.max(np.abs(w - ref)) <= 1e-11 * max(1.0, np.abs(ref).max())


def test_hermitian_eigen_degenerate_spectrum():
    # repeated eigenvalues: projector onto each eigenspace must still be exact
    a = np.diag([2.0, 2.0, 2.0, -1.0]).astype(complex)
    u, _ = np.linalg.qr(random_hermitian(4, 99))
    a = u @ a @ u.conj().T
    w, v = linalg.hermitian_eigen(a)
    assert np.allclose(sorted(w), [-1, 2, 2, 2], atol=1e-12)
    assert np.max(np.abs(v @ np.diag(w) @ v.conj().T - a)) <= 1e-12


def test_hermitian_eigen_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        linalg.hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_hermitian_eigen_rejects_nonfinite():
    with pytest.raises(NotFinite):
        linalg.hermitian_eigen(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_operator_norm_rectangular_and_oracle():
    rng = np.random.default_rng(21)
    for shape in [(3, 3), (5, 2), (2, 7), (12, 12)]:
        m = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        got = linalg.operator_norm(m)
        ref = np.linalg.norm(m, 2)
        assert abs(got - ref) <= 1e-10 * max(1.0, ref)


def test_operator_norm_is_deterministic():
    m = random_hermitian(9, 5)
    assert linalg.operator_norm(m) == linalg.operator_norm(m.copy())


def test_singular_values_and_rank():
    rng = np.random.default_rng(8)
    u, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    v, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    m = u @ np.diag([3.0, 1.0, 1e-3, 0.0, 0.0, 0.0]) @ v.T
    sv = linalg.singular_values(m)
    assert np.allclose(sorted(sv, reverse=True)[:3], [3.0, 1.0, 1e-3], atol=1e-10)
    assert linalg.rank_eps(m, 1e-6) == 3
    assert linalg.rank_eps(m, 1e-2) == 2


def test_gauss_solve_against_oracle():
    rng = np.random.default_rng(31)
    a = rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7))
    b = rng.standard_normal((7, 3)) + 1j * rng.standard_normal((7, 3))
    x = linalg.gauss_solve(a, b)
    assert np.max(np.abs(a @ x - b)) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10**6))
def test_eigen_property_trace_and_norm(n, seed):
    a = random_hermitian(n, seed)
    w, _ = linalg.hermitian_eigen(a)
    assert abs(np.sum(w) - np.trace(a).real) <= 1e-11 * max(1.0, abs(np.trace(a)))
    assert abs(linalg.operator_norm(a) - np.max(np.abs(w))) <= 1e-11
