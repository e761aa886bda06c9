"""Seeded randomized testing of Schur-stability preservation by linear maps.

Every sample is a pure function of ``(seed, index)``, so verdicts and
witnesses are reproducible and trials can be evaluated in any order; the
reported counterexample is always the one with the smallest index.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import linalg, matmap
from .config import DEFAULT
from .errors import DimensionError, InputError, SingularMatrixError
from .stability import is_nilpotent

GENERAL = "general"
SYMMETRIC = "symmetric"
NORMALOID = "normaloid"
NILPOTENT = "nilpotent"
CLASSES = (GENERAL, SYMMETRIC, NORMALOID, NILPOTENT)

NO_COUNTEREXAMPLE = "no_counterexample"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class SampleConfig:
    n: int
    trials: int = 1000
    seed: int = 0
    sample_class: str = GENERAL
    radius_band: tuple = (0.5, 0.999)

    def __post_init__(self):
        if self.n < 1:
            raise InputError("n must be positive")
        if self.trials < 1:
            raise InputError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.sample_class not in CLASSES:
            raise InputError(f"unknown sample class {self.sample_class!r}; expected one of {CLASSES}")
        lo, hi = self.radius_band
        if not (0.0 <= lo < hi <= 1.0 - 1e-6):
            raise InputError(f"radius band ({lo}, {hi}) must satisfy 0 <= lo < hi <= 1 - 1e-6")
        object.__setattr__(self, "radius_band", (float(lo), float(hi)))

    def as_dict(self):
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "class": self.sample_class,
            "radius_band": list(self.radius_band),
        }


def _rng(seed, index):
    return np.random.default_rng([int(seed), int(index)])


def sample_stable(cfg, index, tol=DEFAULT):
    """Deterministic stable sample number ``index`` of a configuration.

    Gaussian draws are symmetrized for the symmetric/normaloid classes and
    rescaled to a spectral radius drawn uniformly from the band.  Nilpotent
    samples are strictly upper triangular and not rescaled.
    """
    rng = _rng(cfg.seed, index)
    n = cfg.n
    if cfg.sample_class == NILPOTENT:
        return np.triu(rng.standard_normal((n, n)), 1)
    while True:
        g = rng.standard_normal((n, n))
        if cfg.sample_class in (SYMMETRIC, NORMALOID):
            g = 0.5 * (g + g.T)
        rho = linalg.spectral_radius(g, tol)
        if rho > 1e-12:
            break
    lo, hi = cfg.radius_band
    return g * (rng.uniform(lo, hi) / rho)


# ---------------------------------------------------------------------------
# Stable bases


@dataclass
class StableBasis:
    space: str
    n: int
    elements: list
    rank: int

    @property
    def dimension(self):
        return self.n * self.n if self.space == matmap.FULL else self.n * (self.n + 1) // 2

    def as_dict(self, tol=DEFAULT):
        return {
            "space": self.space,
            "n": self.n,
            "dimension": self.dimension,
            "rank": self.rank,
            "elements": [
                {"matrix": e.tolist(), "spectral_radius": linalg.spectral_radius(e, tol)} for e in self.elements
            ],
        }


def stable_basis(space, n):
    """Basis of Schur stable matrices for the full or symmetric space.

    Diagonal units are halved; off-diagonal units are nilpotent (full
    space) or halved symmetric pairs with eigenvalues +-1/2.
    """
    if n < 1:
        raise DimensionError("n must be positive")
    if space not in (matmap.FULL, matmap.SYMMETRIC):
        raise InputError(f"unknown space {space!r}")
    elements = []
    for j in range(n):
        for i in range(n):
            if i == j:
                elements.append(0.5 * matmap.unit(n, i, i))
            elif space == matmap.FULL:
                elements.append(matmap.unit(n, i, j))
            elif i > j:
                elements.append(0.5 * (matmap.unit(n, i, j) + matmap.unit(n, j, i)))
    if space == matmap.FULL:
        coords = np.array([linalg.vec(e) for e in elements])
    else:
        coords = np.array([linalg.svec(e) for e in elements])
    return StableBasis(space, n, elements, linalg.matrix_rank(coords))


# ---------------------------------------------------------------------------
# Into / onto preservation


@dataclass
class PreserverVerdict:
    outcome: str
    trials_run: int
    seed: int
    witness: dict = None

    @property
    def clean(self):
        return self.outcome == NO_COUNTEREXAMPLE

    def as_dict(self):
        out = {"outcome": self.outcome, "trials_run": self.trials_run, "seed": self.seed}
        if self.witness is not None:
            w = self.witness
            out["witness"] = {
                "index": w["index"],
                "A": w["A"].tolist(),
                "L(A)": w["L(A)"].tolist(),
                "rho_A": w["rho_A"],
                "rho_LA": w["rho_LA"],
            }
        return out


def _check_compatible(L, cfg):
    if L.n != cfg.n:
        raise DimensionError(f"map acts on n={L.n}, sampler draws n={cfg.n}")
    if L.subspace == matmap.SYMMETRIC and cfg.sample_class not in (SYMMETRIC, NORMALOID):
        raise InputError(
            f"subspace mismatch: map is restricted to symmetric matrices but samples are {cfg.sample_class!r}"
        )


def test_into_preserver(L, cfg, tol=DEFAULT):
    """Search for a stable A with L(A) strictly unstable."""
    _check_compatible(L, cfg)
    sep = tol.separation
    for index in range(cfg.trials):
        A = sample_stable(cfg, index, tol)
        LA = matmap.apply(L, A, tol)
        rho_a = linalg.spectral_radius(A, tol)
        rho_la = linalg.spectral_radius(LA, tol)
        if rho_a <= 1.0 - sep and rho_la >= 1.0 + sep:
            witness = {"index": index, "A": A, "L(A)": LA, "rho_A": rho_a, "rho_LA": rho_la}
            return PreserverVerdict(COUNTEREXAMPLE, index + 1, cfg.seed, witness)
    return PreserverVerdict(NO_COUNTEREXAMPLE, cfg.trials, cfg.seed)


test_into_preserver.__test__ = False


@dataclass
class OntoVerdict:
    onto: bool
    forward: PreserverVerdict
    inverse: PreserverVerdict = None
    singular: str = None

    def as_dict(self):
        out = {"onto": self.onto, "forward": self.forward.as_dict()}
        out["inverse"] = None if self.inverse is None else self.inverse.as_dict()
        if self.singular is not None:
            out["singular"] = self.singular
        return out


def test_onto_preserver(L, cfg, tol=DEFAULT):
    """Into-test both L and its inverse; a singular L is reported, not raised."""
    forward = test_into_preserver(L, cfg, tol)
    try:
        inv = matmap.map_inverse(L, tol)
    except SingularMatrixError as exc:
        return OntoVerdict(False, forward, None, str(exc))
    backward = test_into_preserver(inv, cfg, tol)
    return OntoVerdict(forward.clean and backward.clean, forward, backward)


test_onto_preserver.__test__ = False


@dataclass
class RhoVerdict:
    passed: bool
    max_deviation: float
    worst_index: int
    trials_run: int
    seed: int

    def as_dict(self):
        return {
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "worst_index": self.worst_index,
            "trials_run": self.trials_run,
            "seed": self.seed,
        }


def test_rho_preservation(L, cfg, tol=DEFAULT):
    """Maximum relative change of the spectral radius over the samples."""
    _check_compatible(L, cfg)
    worst = 0.0
    worst_index = -1
    for index in range(cfg.trials):
        A = sample_stable(cfg, index, tol)
        rho_a = linalg.spectral_radius(A, tol)
        rho_la = linalg.spectral_radius(matmap.apply(L, A, tol), tol)
        dev = abs(rho_la - rho_a) / max(rho_a, 1e-12)
        if dev > worst:
            worst, worst_index = dev, index
    return RhoVerdict(worst <= tol.rho_preservation_tolerance, worst, worst_index, cfg.trials, cfg.seed)


test_rho_preservation.__test__ = False


@dataclass
class NilpotentVerdict:
    passed: bool
    hypothesis_holds: bool
    violations: int
    trials_run: int
    seed: int
    into: PreserverVerdict
    first_violation: dict = None

    def as_dict(self):
        out = {
            "passed": self.passed,
            "hypothesis_holds": self.hypothesis_holds,
            "violations": self.violations,
            "trials_run": self.trials_run,
            "seed": self.seed,
            "into": self.into.as_dict(),
        }
        if self.first_violation is not None:
            out["first_violation"] = {k: (v.tolist() if hasattr(v, "tolist") else v)
                                      for k, v in self.first_violation.items()}
        return out


def test_nilpotent_preservation(L, cfg, tol=DEFAULT):
    """Check that nilpotent inputs stay nilpotent.

    The into-preservation hypothesis is tested first with general-class
    samples from the same seed; violations only contradict the implication
    when ``hypothesis_holds`` is true.
    """
    if L.subspace == matmap.SYMMETRIC:
        raise InputError("nilpotent preservation needs a map on the full matrix space")
    into = test_into_preserver(L, replace(cfg, sample_class=GENERAL), tol)
    nil_cfg = replace(cfg, sample_class=NILPOTENT)
    violations = 0
    first = None
    for index in range(cfg.trials):
        A = sample_stable(nil_cfg, index, tol)
        LA = matmap.apply(L, A, tol)
        if not is_nilpotent(LA, tol):
            violations += 1
            if first is None:
                first = {"index": index, "A": A, "L(A)": LA}
    return NilpotentVerdict(violations == 0, into.clean, violations, cfg.trials, cfg.seed, into, first)


test_nilpotent_preservation.__test__ = False


def jlrsp_condition(alpha, beta, n):
    """Coefficient condition for ``X -> alpha tr(X) I + beta S^-1 X S`` to preserve stability."""
    if n < 1:
        raise DimensionError("n must be positive")
    return beta != 0 and alpha * n + beta != 0 and (n - 1) * abs(alpha) + abs(beta + alpha) <= 1.0


# ---------------------------------------------------------------------------
# Canonical forms

SIMILARITY = "similarity"
TRANSPOSE_SIMILARITY = "transpose_similarity"
ORTHOGONAL_CONGRUENCE = "orthogonal_congruence"
FLAVORS = (SIMILARITY, TRANSPOSE_SIMILARITY, ORTHOGONAL_CONGRUENCE)


def canonical_map(c, T, flavor, tol=DEFAULT):
    """The map ``X -> c T X T^-1`` (or with ``X^t``, or ``c T X T^t``) as a MatrixMap."""
    T = linalg.as_matrix(T, square=True, name="T")
    n = T.shape[0]
    if flavor == SIMILARITY:
        spec = matmap.scale(c, matmap.similarity(T))
    elif flavor == TRANSPOSE_SIMILARITY:
        spec = matmap.scale(c, matmap.compose(matmap.similarity(T), matmap.transpose(n)))
    elif flavor == ORTHOGONAL_CONGRUENCE:
        spec = matmap.scale(c, matmap.congruence(T))
    else:
        raise InputError(f"unknown canonical flavor {flavor!r}; expected one of {FLAVORS}")
    return matmap.build(spec, tol)


def verify_canonical_form(L, c, T, flavor, require_onto=False, tol=DEFAULT):
    """Does L agree with the candidate canonical map on a stable basis?"""
    T = linalg.as_matrix(T, square=True, name="T")
    if T.shape[0] != L.n:
        raise DimensionError(f"T is {T.shape[0]}x{T.shape[0]}, map acts on n={L.n}")
    if flavor == ORTHOGONAL_CONGRUENCE:
        if float(np.linalg.norm(T.T @ T - np.eye(L.n))) > tol.canonical_tolerance:
            raise InputError("orthogonal_congruence needs an orthogonal T")
        if c not in (1, -1):
            raise InputError("orthogonal_congruence needs c in {1, -1}")
    elif require_onto and not math.isclose(abs(c), 1.0, rel_tol=0.0, abs_tol=tol.canonical_tolerance):
        raise InputError("onto preservers of this form need |c| = 1")
    candidate = canonical_map(c, T, flavor, tol)
    basis = stable_basis(L.subspace, L.n)
    for B in basis.elements:
        got = matmap.apply(L, B, tol)
        want = matmap.apply(candidate, B, tol)
        scale = max(float(np.linalg.norm(got)), float(np.linalg.norm(want)), 1e-300)
        if float(np.linalg.norm(got - want)) > tol.canonical_tolerance * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# Random parameters for map families


def random_orthogonal(rng, n):
    """Product of n random Householder reflections."""
    q = np.eye(n)
    for _ in range(n):
        v = rng.standard_normal(n)
        q = q - 2.0 * np.outer(q @ v, v) / (v @ v)
    return q


def random_invertible(rng, n, max_condition=1e3, tol=DEFAULT):
    while True:
        t = rng.standard_normal((n, n))
        if linalg.condition_number(t, tol) <= max_condition:
            return t


def sampled_spectral_gain(L, cfg, tol=DEFAULT):
    """Lower bound ``max ||L(A)|| / ||A||`` (spectral norms) over samples."""
    _check_compatible(L, cfg)
    best = 0.0
    for index in range(cfg.trials):
        A = sample_stable(cfg, index, tol)
        na = linalg.operator_norm(A, tol)
        if na > 0:
            best = max(best, linalg.operator_norm(matmap.apply(L, A, tol), tol) / na)
    return best
