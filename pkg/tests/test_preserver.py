import math

import numpy as np
import pytest

from schurlab import linalg, matmap, preserver
from schurlab.errors import DimensionError, InputError
from schurlab.fixtures import map_2_5, map_rem_2_12
from schurlab.preserver import SampleConfig

from conftest import EG22_M


# ------------------------------------------------------------------- sampling

@pytest.mark.parametrize("cls", preserver.CLASSES)
def test_samples_are_stable(cls):
    cfg = SampleConfig(n=4, seed=3, sample_class=cls, radius_band=(0.2, 0.9))
    for i in range(50):
        a = preserver.sample_stable(cfg, i)
        rho = linalg.spectral_radius(a)
        if cls == preserver.NILPOTENT:
            assert rho == 0.0 and np.all(np.tril(a) == 0)
        else:
            assert 0.2 - 1e-12 <= rho <= 0.9 + 1e-12
        if cls in (preserver.SYMMETRIC, preserver.NORMALOID):
            np.testing.assert_array_equal(a, a.T)


def test_samples_depend_only_on_seed_and_index():
    a = SampleConfig(n=3, seed=7, trials=10)
    b = SampleConfig(n=3, seed=7, trials=999)
    np.testing.assert_array_equal(preserver.sample_stable(a, 5), preserver.sample_stable(b, 5))
    assert not np.array_equal(preserver.sample_stable(a, 5), preserver.sample_stable(a, 6))


@pytest.mark.parametrize("kwargs", [
    dict(n=0), dict(n=2, trials=0), dict(n=2, seed=-1), dict(n=2, sample_class="hermitian"),
    dict(n=2, radius_band=(0.5, 1.0)), dict(n=2, radius_band=(0.6, 0.5)),
])
def test_config_validation(kwargs):
    with pytest.raises(InputError):
        SampleConfig(**kwargs)


# ---------------------------------------------------------------- stable bases

@pytest.mark.parametrize("space,n,size", [("full", 2, 4), ("symmetric", 2, 3), ("full", 3, 9), ("symmetric", 4, 10)])
def test_stable_basis(space, n, size):
    b = preserver.stable_basis(space, n)
    assert len(b.elements) == size and b.rank == size == b.dimension
    assert all(linalg.spectral_radius(e) < 1 for e in b.elements)
    coords = np.array([e.ravel() for e in b.elements])
    assert np.linalg.matrix_rank(coords) == size


def test_stable_basis_trivial():
    b = preserver.stable_basis("full", 1)
    assert [e.tolist() for e in b.elements] == [[[0.5]]]


def test_stable_basis_errors():
    with pytest.raises(DimensionError):
        preserver.stable_basis("full", 0)
    with pytest.raises(InputError):
        preserver.stable_basis("skew", 2)


# --------------------------------------------------------------- into / onto

def test_identity_is_clean():
    v = preserver.test_into_preserver(matmap.identity_map(3), SampleConfig(n=3, trials=200, seed=1))
    assert v.clean and v.trials_run == 200 and v.witness is None


def test_left_multiplication_counterexample():
    L = matmap.build(matmap.left_right(EG22_M, np.eye(2)))
    v = preserver.test_into_preserver(L, SampleConfig(n=2, trials=1000, seed=42))
    assert v.outcome == preserver.COUNTEREXAMPLE
    w = v.witness
    assert w["rho_A"] <= 1 - 1e-6 and w["rho_LA"] >= 1 + 1e-6
    np.testing.assert_array_equal(w["L(A)"], EG22_M @ w["A"])
    assert v.trials_run == w["index"] + 1


def test_contractive_singular_map_counterexample():
    L = matmap.build(map_2_5())
    assert preserver.test_into_preserver(L, SampleConfig(n=2, trials=2000, seed=5)).outcome == preserver.COUNTEREXAMPLE


def test_verdict_is_deterministic():
    L = matmap.build(matmap.left_right(EG22_M, np.eye(2)))
    cfg = SampleConfig(n=2, trials=1000, seed=42)
    assert preserver.test_into_preserver(L, cfg).as_dict() == preserver.test_into_preserver(L, cfg).as_dict()


def test_size_mismatch():
    with pytest.raises(DimensionError):
        preserver.test_into_preserver(matmap.identity_map(2), SampleConfig(n=3))


def test_subspace_mismatch():
    R = matmap.restrict_symmetric(matmap.identity_map(2))
    with pytest.raises(InputError):
        preserver.test_into_preserver(R, SampleConfig(n=2))


def test_onto_transpose():
    v = preserver.test_onto_preserver(matmap.build(matmap.transpose(2)), SampleConfig(n=2, trials=300, seed=2))
    assert v.onto and v.inverse.clean


def test_onto_singular_map_reported():
    v = preserver.test_onto_preserver(matmap.build(map_2_5()), SampleConfig(n=2, trials=50, seed=2))
    assert not v.onto and v.inverse is None and "singular" in v.singular


# ---------------------------------------------------------------- rho / nilpotent

def test_rho_preserved_by_orthogonal_congruence(rng):
    q = preserver.random_orthogonal(rng, 3)
    R = matmap.restrict_symmetric(matmap.build(matmap.congruence(q)))
    v = preserver.test_rho_preservation(R, SampleConfig(n=3, trials=200, seed=9, sample_class="symmetric"))
    assert v.passed and v.max_deviation <= 1e-10


def test_rho_not_preserved_by_scaling():
    v = preserver.test_rho_preservation(matmap.build(matmap.scale(0.5, matmap.transpose(2))),
                                        SampleConfig(n=2, trials=20, seed=1))
    assert not v.passed and v.max_deviation == pytest.approx(0.5)


def test_nilpotent_preserved_by_similarity(rng):
    L = matmap.build(matmap.similarity(preserver.random_invertible(rng, 3)))
    v = preserver.test_nilpotent_preservation(L, SampleConfig(n=3, trials=100, seed=4))
    assert v.passed and v.hypothesis_holds and v.violations == 0


def test_nilpotent_violation_is_vacuous_for_non_preserver():
    L = matmap.build(matmap.trace_shift(0.0, 1.0, np.eye(2)))
    L = matmap.build(matmap.sum_of(L.spec, matmap.scale(0.3, matmap.left_right(np.eye(2), np.eye(2)))))
    v = preserver.test_nilpotent_preservation(L, SampleConfig(n=2, trials=50, seed=4))
    assert v.passed  # 1.3 * A stays nilpotent
    L2 = matmap.build(map_2_5())
    v2 = preserver.test_nilpotent_preservation(L2, SampleConfig(n=2, trials=200, seed=4))
    assert not v2.passed and not v2.hypothesis_holds


# --------------------------------------------------------------- jlrsp and forms

def test_jlrsp_condition():
    assert preserver.jlrsp_condition(0.0, 1.0, 3)
    assert preserver.jlrsp_condition(0.3, 0.3, 2)
    assert not preserver.jlrsp_condition(0.3, 0.3, 4)
    assert not preserver.jlrsp_condition(0.5, 0.0, 2)
    assert not preserver.jlrsp_condition(-0.5, 1.0, 2)  # alpha n + beta = 0


def test_jlrsp_maps_preserve(rng):
    for k in range(10):
        n = int(rng.integers(2, 5))
        while True:
            alpha, beta = rng.uniform(-1, 1, size=2)
            if preserver.jlrsp_condition(alpha, beta, n):
                break
        L = matmap.build(matmap.trace_shift(alpha, beta, preserver.random_invertible(rng, n)))
        assert preserver.test_into_preserver(L, SampleConfig(n=n, trials=100, seed=k)).clean


def test_canonical_forms(rng):
    t = preserver.random_invertible(rng, 3)
    L = matmap.build(matmap.scale(-1.0, matmap.similarity(t)))
    assert preserver.verify_canonical_form(L, -1.0, t, preserver.SIMILARITY, require_onto=True)
    assert not preserver.verify_canonical_form(L, 1.0, t, preserver.SIMILARITY)
    assert not preserver.verify_canonical_form(L, -1.0, t, preserver.TRANSPOSE_SIMILARITY)
    q = preserver.random_orthogonal(rng, 3)
    C = matmap.restrict_symmetric(matmap.build(matmap.congruence(q)))
    assert preserver.verify_canonical_form(C, 1, q, preserver.ORTHOGONAL_CONGRUENCE)


def test_canonical_form_errors(rng):
    L = matmap.identity_map(2)
    with pytest.raises(InputError):
        preserver.verify_canonical_form(L, 1, 2 * np.eye(2), preserver.ORTHOGONAL_CONGRUENCE)
    with pytest.raises(InputError):
        preserver.verify_canonical_form(L, 0.5, np.eye(2), preserver.SIMILARITY, require_onto=True)
    with pytest.raises(InputError):
        preserver.verify_canonical_form(L, 1, np.eye(2), "congruence")
    with pytest.raises(DimensionError):
        preserver.verify_canonical_form(L, 1, np.eye(3), preserver.SIMILARITY)


def test_random_orthogonal(rng):
    q = preserver.random_orthogonal(rng, 5)
    np.testing.assert_allclose(q.T @ q, np.eye(5), atol=1e-13)


def test_random_invertible_conditioning(rng):
    assert linalg.condition_number(preserver.random_invertible(rng, 4, 50.0)) <= 50.0


# ----------------------------------------------- documented counterexamples

def test_onto_preserver_with_map_radius_two():
    # X -> T X T^-1, T = diag(2, 1) preserves stability both ways, yet has
    # eigenvalue 2 on E_12, so map radius bounds do not hold for preservers
    L = matmap.build(map_rem_2_12())
    assert preserver.test_onto_preserver(L, SampleConfig(n=2, trials=500, seed=2012)).onto
    assert matmap.map_spectrum(L).spectral_radius == pytest.approx(2.0)
    assert preserver.sampled_spectral_gain(L, SampleConfig(n=2, trials=200, seed=1)) > 1


def test_normal_contraction_can_break_stability():
    # Householder reflection on symmetric matrices sending I/sqrt2 to E_11:
    # normal, radius 1, but 0.9 I (stable) maps to 0.9 sqrt2 E_11 (unstable)
    n = 2
    u = linalg.svec(np.eye(n)) / math.sqrt(n) - linalg.svec(matmap.unit(n, 0, 0))
    h = np.eye(3) - 2 * np.outer(u, u) / (u @ u)
    R = matmap.from_rep(h, n, "reflection", matmap.SYMMETRIC)
    assert matmap.map_is_normal(R)
    assert matmap.map_spectrum(R).spectral_radius == pytest.approx(1.0)
    image = R(0.9 * np.eye(n))
    np.testing.assert_allclose(image, 0.9 * math.sqrt(2) * matmap.unit(n, 0, 0), atol=1e-14)
    assert linalg.spectral_radius(image) > 1
