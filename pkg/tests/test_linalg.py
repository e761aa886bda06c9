import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from schurlab import linalg
from schurlab.errors import (
    ConvergenceError,
    DimensionError,
    InputError,
    SingularMatrixError,
    SymmetryError,
)

from conftest import EG20_M, EG21_A, EG23_A, EG23_M


def match_multisets(got, want, tol):
    want = list(want)
    for z in got:
        k = min(range(len(want)), key=lambda i: abs(want[i] - z))
        assert abs(want[k] - z) <= tol, (got, want)
        want.pop(k)


def rand_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


# ---------------------------------------------------------------- eigenvalues

def test_identity_spectrum():
    s = linalg.eigenvalues(np.eye(2))
    np.testing.assert_array_equal(s.eigenvalues, [1, 1])
    assert s.spectral_radius == 1.0


def test_example_pair_modulus():
    s = linalg.eigenvalues(EG21_A)
    assert s.eigenvalues[0] == np.conj(s.eigenvalues[1])
    assert abs(s.eigenvalues[0]) == pytest.approx(0.90091, abs=1e-4)
    assert s.spectral_radius == pytest.approx(0.90091, abs=1e-4)


def test_quadratic_formula_case():
    a = np.array([[-9.5, 0.5], [-10.0, 0.5]])
    tr, det = -9.0, 0.25
    roots = [(tr + math.sqrt(tr * tr - 4 * det)) / 2, (tr - math.sqrt(tr * tr - 4 * det)) / 2]
    match_multisets(linalg.eigenvalues(a).eigenvalues, roots, 1e-12)
    match_multisets(linalg.eigenvalues(a).eigenvalues, [-8.9721, -0.02786], 1e-3)


def test_one_by_one():
    s = linalg.eigenvalues([[-0.3]])
    assert s.spectral_radius == 0.3
    assert s.residuals[0] == 0.0


def test_matches_lapack_random(rng):
    for _ in range(60):
        n = int(rng.integers(2, 13))
        a = rng.standard_normal((n, n))
        match_multisets(linalg.eigenvalues(a).eigenvalues, np.linalg.eigvals(a), 1e-9 * (1 + np.linalg.norm(a)))


def test_conjugate_closed(rng):
    for _ in range(30):
        a = rng.standard_normal((7, 7))
        lam = linalg.eigenvalues(a).eigenvalues
        complex_part = sorted(z for z in lam if z.imag != 0)
        assert sorted(np.conj(complex_part), key=lambda z: (z.real, z.imag)) == \
            sorted(complex_part, key=lambda z: (z.real, z.imag))
        for z in lam:
            if z.imag:
                assert abs(z) == abs(np.conj(z))


def test_residual_invariant(rng):
    for _ in range(200):
        n = int(rng.integers(2, 13))
        a = rng.standard_normal((n, n)) * rng.uniform(0.1, 10)
        s = linalg.eigenvalues(a)
        assert s.spectral_radius == np.max(np.abs(s.eigenvalues))
        assert np.all(s.residuals <= 1e-8 * (1 + np.linalg.norm(a)))


def test_residual_bounds_smallest_singular_value(rng):
    a = rng.standard_normal((6, 6))
    s = linalg.eigenvalues(a)
    for lam, r in zip(s.eigenvalues, s.residuals):
        smin = np.linalg.svd(a - lam * np.eye(6), compute_uv=False)[-1]
        assert smin <= r + 1e-15


def test_exact_structure_is_kept():
    # defective triple eigenvalue; deflation on exact zeros keeps it exact
    np.testing.assert_array_equal(linalg.eigvals(EG20_M), [0.5, 0.5, 0.5])
    nil = np.zeros((4, 4))
    nil[0, 2] = 1
    nil[2, 1] = 2
    assert linalg.spectral_radius(nil) == 0.0


def test_non_square_rejected():
    with pytest.raises(DimensionError):
        linalg.eigenvalues(np.ones((2, 3)))


def test_non_finite_rejected():
    with pytest.raises(InputError):
        linalg.eigenvalues([[1.0, np.nan], [0, 1]])


def test_sweep_limit_is_reported():
    a = np.random.default_rng(0).standard_normal((8, 8))
    with pytest.raises(ConvergenceError):
        linalg.eigenvalues(a, linalg.DEFAULT.with_(qr_sweeps_per_dim=0))


def test_deterministic(rng):
    a = rng.standard_normal((9, 9))
    s1, s2 = linalg.eigenvalues(a), linalg.eigenvalues(a)
    np.testing.assert_array_equal(s1.eigenvalues, s2.eigenvalues)
    np.testing.assert_array_equal(s1.residuals, s2.residuals)


# ---------------------------------------------------------- spectral radius

def test_spectral_radius_zero():
    for n in range(1, 5):
        assert linalg.spectral_radius(np.zeros((n, n))) == 0.0


def test_spectral_radius_block_triangular():
    assert linalg.spectral_radius(EG20_M) == 0.5


def test_spectral_radius_scaled_product():
    assert linalg.spectral_radius((2 / 3) * EG23_M @ EG23_A) == pytest.approx(33.33, abs=0.02)


def test_product_commutes_under_radius(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        a, b = rng.standard_normal((2, n, n))
        r1, r2 = linalg.spectral_radius(a @ b), linalg.spectral_radius(b @ a)
        assert r1 == pytest.approx(r2, rel=1e-8)


def test_orthogonal_similarity_keeps_radius(rng):
    for _ in range(100):
        n = int(rng.integers(2, 9))
        a = rng.standard_normal((n, n))
        u = rand_orthogonal(rng, n)
        assert linalg.spectral_radius(u @ a @ u.T) == pytest.approx(linalg.spectral_radius(a), rel=1e-8)


def test_commuting_pair_radius_submultiplicative(rng):
    for _ in range(100):
        n = int(rng.integers(2, 7))
        c = rng.standard_normal((n, n))
        a = 0.3 * c @ c - c + 0.5 * np.eye(n)
        b = c @ c @ c - 2 * np.eye(n)
        assert linalg.spectral_radius(a @ b) <= linalg.spectral_radius(a) * linalg.spectral_radius(b) + 1e-8 * (
            1 + linalg.spectral_radius(a) * linalg.spectral_radius(b))


# ------------------------------------------------------------ operator norm

def test_operator_norm_diagonal():
    assert linalg.operator_norm(np.diag([3.0, -2.0])) == 3.0


def test_operator_norm_example():
    assert linalg.operator_norm(EG21_A) == pytest.approx(2.0245, abs=1e-3)


def test_operator_norm_gram_closed_form():
    a = np.array([[0.75, 5.0], [0.0, -0.75]])
    g = a.T @ a
    lmax = 0.5 * (np.trace(g) + math.sqrt((g[0, 0] - g[1, 1]) ** 2 + 4 * g[0, 1] ** 2))
    assert linalg.operator_norm(a) == pytest.approx(math.sqrt(lmax), rel=1e-12)
    assert linalg.operator_norm(a) == pytest.approx(5.1101, abs=1e-3)


def test_operator_norm_rectangular(rng):
    a = rng.standard_normal((5, 3))
    assert linalg.operator_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)
    assert linalg.operator_norm(a.T) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)


def test_symmetric_norm_equals_radius(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        s = rng.standard_normal((n, n))
        s = s + s.T
        assert linalg.operator_norm(s) == pytest.approx(linalg.spectral_radius(s), rel=1e-8)


# ----------------------------------------------------- symmetric eigenvalues

def test_symmetric_identity():
    np.testing.assert_array_equal(linalg.symmetric_eigenvalues(np.eye(3)), [1, 1, 1])


def test_symmetric_part_of_jordan_block():
    np.testing.assert_allclose(linalg.symmetric_eigenvalues([[0, 0.5], [0.5, 0]]), [-0.5, 0.5], atol=1e-15)


def test_gram_of_example():
    lam = linalg.symmetric_eigenvalues(EG21_A.T @ EG21_A)
    assert lam[-1] == pytest.approx(2.0245 ** 2, abs=1e-3)
    assert lam[-1] == pytest.approx(4.0986, abs=1e-3)


def test_symmetric_against_lapack(rng):
    for n in list(range(1, 12)) + [20, 31]:
        s = rng.standard_normal((n, n))
        s = s + s.T
        lam = linalg.symmetric_eigenvalues(s)
        assert np.all(np.diff(lam) >= 0)
        np.testing.assert_allclose(lam, np.linalg.eigvalsh(s), atol=1e-11 * np.linalg.norm(s))


def test_asymmetric_rejected():
    with pytest.raises(SymmetryError):
        linalg.symmetric_eigenvalues([[1.0, 2.0], [0.0, 1.0]])


def test_jacobi_sweep_limit():
    s = np.random.default_rng(1).standard_normal((6, 6))
    with pytest.raises(ConvergenceError):
        linalg.symmetric_eigenvalues(s + s.T, linalg.DEFAULT.with_(jacobi_max_sweeps=1))


# ------------------------------------------------------------- linear solve

def test_solve_identity(rng):
    b = rng.standard_normal(5)
    np.testing.assert_array_equal(linalg.solve_linear(np.eye(5), b), b)


def test_solve_diagonal():
    np.testing.assert_array_equal(linalg.solve_linear([[2.0, 0.0], [0.0, 4.0]], [2.0, 8.0]), [1.0, 2.0])


def test_solve_scalar_stein():
    a = np.array([[0.5]])
    x = linalg.solve_linear(np.eye(1) - linalg.kron(a.T, a.T), [1.0])
    assert x[0] == pytest.approx(4 / 3, rel=1e-15)


def test_solve_backward_error(rng):
    for _ in range(50):
        n = int(rng.integers(1, 30))
        a = rng.standard_normal((n, n))
        b = rng.standard_normal(n)
        x = linalg.solve_linear(a, b)
        assert np.linalg.norm(a @ x - b) <= 1e-10 * (np.linalg.norm(a) * np.linalg.norm(x) + np.linalg.norm(b))


def test_solve_singular_reports_pivot():
    with pytest.raises(SingularMatrixError) as info:
        linalg.solve_linear([[1.0, 2.0], [2.0, 4.0]], [1.0, 1.0])
    assert info.value.pivot is not None and info.value.pivot < 1e-14


def test_solve_shape_mismatch():
    with pytest.raises(DimensionError):
        linalg.solve_linear(np.eye(2), [1.0, 2.0, 3.0])


def test_inverse_and_condition(rng):
    a = rng.standard_normal((4, 4))
    np.testing.assert_allclose(linalg.inverse(a) @ a, np.eye(4), atol=1e-12)
    assert linalg.condition_number(a) == pytest.approx(np.linalg.cond(a, 1), rel=1e-8)
    assert linalg.condition_number(np.zeros((2, 2))) == math.inf


def test_matrix_rank(rng):
    a = rng.standard_normal((6, 3)) @ rng.standard_normal((3, 5))
    assert linalg.matrix_rank(a) == 3
    assert linalg.matrix_rank(np.eye(4)) == 4
    assert linalg.matrix_rank(np.zeros((3, 3))) == 0


# ---------------------------------------------------------- kron and vec

def brute_kron(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb))
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def test_kron_identity_block():
    b = np.array([[1.0, 2.0], [3.0, 4.0]])
    k = linalg.kron(np.eye(2), b)
    np.testing.assert_array_equal(k[:2, :2], b)
    np.testing.assert_array_equal(k[2:, 2:], b)
    np.testing.assert_array_equal(k[:2, 2:], 0)


def test_kron_diagonal():
    np.testing.assert_array_equal(linalg.kron(np.diag([2.0, 3.0]), np.diag([2.0, 3.0])), np.diag([4.0, 6, 6, 9]))


def test_kron_brute_force(rng):
    for _ in range(20):
        a = rng.standard_normal(tuple(rng.integers(1, 4, size=2)))
        b = rng.standard_normal(tuple(rng.integers(1, 4, size=2)))
        np.testing.assert_array_equal(linalg.kron(a, b), brute_kron(a, b))


def test_kron_radius_squares():
    assert linalg.spectral_radius(linalg.kron(EG21_A, EG21_A)) == pytest.approx(0.90091 ** 2, abs=1e-3)
    assert linalg.spectral_radius(linalg.kron(EG21_A, EG21_A)) == pytest.approx(0.81164, abs=1e-3)


def test_vec_convention():
    np.testing.assert_array_equal(linalg.vec([[1, 2], [3, 4]]), [1, 3, 2, 4])


def test_unvec_length():
    with pytest.raises(DimensionError):
        linalg.unvec(np.ones(5), 2)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)).map(lambda t: (t[0], t[0])),
              elements=st.floats(-1e3, 1e3)))
def test_vec_round_trip(a):
    np.testing.assert_array_equal(linalg.unvec(linalg.vec(a), a.shape[0]), a)


def test_vec_of_product(rng):
    for _ in range(20):
        m, x, n = rng.standard_normal((3, 3, 3))
        np.testing.assert_allclose(linalg.vec(m @ x @ n), linalg.kron(n.T, m) @ linalg.vec(x), atol=1e-12)


def test_commutation_matrix():
    np.testing.assert_array_equal(linalg.commutation_matrix(1), [[1.0]])
    for n in range(2, 6):
        k = linalg.commutation_matrix(n)
        np.testing.assert_array_equal(k @ k, np.eye(n * n))
        np.testing.assert_array_equal(k, k.T)


def test_commutation_transposes(rng):
    a = rng.standard_normal((4, 4))
    np.testing.assert_array_equal(linalg.commutation_matrix(4) @ linalg.vec(a), linalg.vec(a.T))


def test_svec_identity():
    np.testing.assert_array_equal(linalg.svec(np.eye(2)), [1.0, 0.0, 1.0])


def test_svec_trace_inner_product(rng):
    for _ in range(30):
        n = int(rng.integers(1, 6))
        s, t = rng.standard_normal((2, n, n))
        s, t = s + s.T, t + t.T
        assert linalg.svec(s) @ linalg.svec(t) == pytest.approx(np.trace(s @ t), rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(linalg.unsvec(linalg.svec(s), n), s, rtol=1e-15, atol=1e-15)


def test_svec_rejects_asymmetric():
    with pytest.raises(SymmetryError):
        linalg.svec([[1.0, 2.0], [3.0, 4.0]])
