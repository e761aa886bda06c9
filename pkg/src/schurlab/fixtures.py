"""Recomputation of the published worked examples.

Each fixture lists the printed claims, recomputes every quantity from the
printed inputs and assigns one status per claim:

``reproduced``
    recomputed value within the claim's tolerance (or boolean agrees);
``claim-holds-value-differs``
    the printed number is off but the qualitative statement it supports
    (e.g. "unstable") still holds;
``discrepant``
    the statement itself fails on recomputation.

A fixture's status is its worst claim status.  Claims about printed
hypotheses that fail are kept in separate ``.../hypotheses`` style
fixtures so they do not mask the status of the main computation.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg, matmap, preserver
from .config import DEFAULT
from .stability import classify_aloid, is_nilpotent, numerical_radius, schur_2x2

REPRODUCED = "reproduced"
HOLDS_DIFFERS = "claim-holds-value-differs"
DISCREPANT = "discrepant"
_RANK = {REPRODUCED: 0, HOLDS_DIFFERS: 1, DISCREPANT: 2}


@dataclass
class Claim:
    quantity: str
    printed_value: object
    recomputed: object
    status: str
    tolerance: float = None
    note: str = ""

    def as_dict(self):
        out = {
            "quantity": self.quantity,
            "printed_value": _jsonable(self.printed_value),
            "recomputed": _jsonable(self.recomputed),
            "tolerance": self.tolerance,
            "status": self.status,
        }
        if self.note:
            out["note"] = self.note
        return out


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.bool_):
        return bool(v)
    return v


@dataclass
class Fixture:
    id: str
    title: str
    claims: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def status(self):
        return max((c.status for c in self.claims), key=_RANK.__getitem__, default=REPRODUCED)

    def claim(self, quantity):
        for c in self.claims:
            if c.quantity == quantity:
                return c
        raise KeyError(quantity)

    def number(self, quantity, printed, recomputed, tol, holds=None, note=""):
        """Numeric claim; ``holds(value)`` is the qualitative statement behind it."""
        recomputed = float(recomputed)
        if abs(recomputed - printed) <= tol:
            status = REPRODUCED
        elif holds is not None and holds(printed) and holds(recomputed):
            status = HOLDS_DIFFERS
        else:
            status = DISCREPANT
        self.claims.append(Claim(quantity, printed, recomputed, status, tol, note))

    def fact(self, quantity, printed, recomputed, note=""):
        recomputed = bool(recomputed)
        status = REPRODUCED if recomputed == printed else DISCREPANT
        self.claims.append(Claim(quantity, printed, recomputed, status, None, note))

    def bound(self, quantity, printed_text, recomputed, holds, note=""):
        """Inequality claim such as "> 1"; recorded with the recomputed value."""
        status = REPRODUCED if holds(recomputed) else DISCREPANT
        self.claims.append(Claim(quantity, printed_text, float(recomputed), status, None, note))

    def matrix(self, quantity, printed, recomputed, tol, supports=None, note=""):
        printed = np.asarray(printed, dtype=float)
        recomputed = np.asarray(recomputed, dtype=float)
        diff = float(np.max(np.abs(printed - recomputed)))
        if diff <= tol:
            status = REPRODUCED
        elif supports:
            status = HOLDS_DIFFERS
        else:
            status = DISCREPANT
        self.claims.append(Claim(quantity, printed, recomputed, status, tol, note))

    def as_dict(self):
        return {
            "id": self.id,
            "title": self.title,
            "status": self.status,
            "claims": [c.as_dict() for c in self.claims],
            "notes": list(self.notes),
        }


def _unstable(x):
    return x > 1.0


def _stable(A, tol):
    return linalg.spectral_radius(A, tol) < 1.0


def is_diagonalizable(a, tol=DEFAULT, cluster=1e-6):
    """Geometric vs algebraic multiplicity for each eigenvalue cluster."""
    A = linalg.as_matrix(a, square=True)
    n = A.shape[0]
    lam = list(linalg.eigvals(A, tol))
    scale = max(1.0, float(np.max(np.abs(A))))
    while lam:
        z = lam.pop(0)
        group = [w for w in lam if abs(w - z) <= cluster * scale]
        lam = [w for w in lam if abs(w - z) > cluster * scale]
        mult = 1 + len(group)
        if mult == 1:
            continue
        z = (z + sum(group)) / mult
        B = A - z.real * np.eye(n)
        if abs(z.imag) > cluster * scale:
            E = z.imag * np.eye(n)
            B = np.block([[B, E], [-E, B]])
            rank = linalg.matrix_rank(B, rtol=1e-8) // 2
        else:
            rank = linalg.matrix_rank(B, rtol=1e-8)
        if n - rank < mult:
            return False
    return True


def _rho_map(L, tol):
    return matmap.map_spectrum(L, tol).spectral_radius


# ---------------------------------------------------------------------------


def example_2_0(tol=DEFAULT):
    fx = Fixture("eg-2.0", "leftRight map with a spectraloid but not normaloid input")
    M = np.array([[0.5, 0, 10], [0, 0.5, 0], [0, 5, 0.5]])
    N = np.eye(3)
    A = np.array([[0.5, 0, 0], [0, 0, 1], [0, 0, 0]])
    fx.number("rho(MN)", 0.5, linalg.spectral_radius(M @ N, tol), 1e-9, holds=lambda v: v <= 1.0)
    fx.fact("MN invertible", True, linalg.matrix_rank(M @ N) == 3)
    fx.number("||A||", 1.0, linalg.operator_norm(A, tol), 1e-9)
    fx.number("w(A)", 0.5, numerical_radius(A, tol), 1e-6)
    fx.number("rho(A)", 0.5, linalg.spectral_radius(A, tol), 1e-9)
    cls = classify_aloid(A, tol)
    fx.fact("A spectraloid", True, cls.spectraloid)
    fx.fact("A normaloid", False, cls.normaloid)
    MAN = M @ A @ N
    lam = linalg.eigvals(MAN, tol)
    fx.fact("MAN Schur stable", False, _stable(MAN, tol))
    fx.number("eigenvalue of MAN nearest 5", 5.0, min(lam, key=lambda z: abs(z - 5.0)).real, 1e-9,
              note="value derived by hand from the block structure of MA")
    return fx


def example_2_1(tol=DEFAULT):
    fx = Fixture("eg-2.1", "stable M and A with MAN unstable")
    A = np.array([[1.17258, 1.35575], [-0.94256, -0.39761]])
    M = np.array([[0.79323, 0.0], [0.0, -0.24866]])
    N = np.eye(2)
    fx.fact("A Schur stable", True, _stable(A, tol))
    fx.fact("M Schur stable", True, _stable(M, tol))
    fx.number("rho(A)", 0.90091, linalg.spectral_radius(A, tol), 1e-3, holds=lambda v: v < 1.0)
    fx.number("||A||", 2.0245, linalg.operator_norm(A, tol), 1e-3)
    fx.fact("A normaloid", False, classify_aloid(A, tol).normaloid)
    MAN = M @ A @ N
    fx.fact("MAN Schur stable", False, _stable(MAN, tol))
    fx.number("rho(MAN)", 1.1626, linalg.spectral_radius(MAN, tol), 1e-3, holds=_unstable)
    return fx


def example_2_2(tol=DEFAULT):
    fx = Fixture("eg-2.2", "non-symmetric M with rho(MN) = 1 and MAN unstable")
    M = np.array([[1.0, -1.0], [0.0, -1.0]])
    N = np.eye(2)
    A = np.array([[0.5, 0.0], [10.0, -0.5]])
    MAN = M @ A @ N
    fx.fact("M symmetric", False, np.array_equal(M, M.T))
    fx.number("rho(MN)", 1.0, linalg.spectral_radius(M @ N, tol), 1e-9)
    fx.fact("A Schur stable", True, _stable(A, tol))
    unstable = not _stable(MAN, tol)
    fx.fact("MAN Schur stable", False, not unstable)
    fx.matrix("MAN", [[49.5, 2.5], [-10.0, 0.5]], MAN, 1e-12, supports=unstable,
              note="printed product is inconsistent with the printed M and A")
    fx.number("rho(MA)", 48.99, linalg.spectral_radius(M @ A, tol), 1e-2, holds=_unstable)
    return fx


def example_2_2_aside(tol=DEFAULT):
    fx = Fixture("eg-2.2/aside", "diagonalizability remark attached to eg-2.2")
    M = np.array([[1.0, -1.0], [0.0, -1.0]])
    fx.fact("M diagonalizable", False, is_diagonalizable(M, tol),
            note="M has distinct eigenvalues 1 and -1")
    fx.fact("N diagonalizable", True, is_diagonalizable(np.eye(2), tol))
    return fx


def example_2_3(tol=DEFAULT):
    fx = Fixture("eg-2.3", "scaled leftRight map with rho(MN) = 1 and MAN unstable")
    M = np.array([[-1.0, -0.5], [0.5, -1.0]])
    N = (2.0 / 3.0) * np.eye(2)
    A = np.array([[0.5, 100.0], [0.0, -0.5]])
    MAN = M @ A @ N
    fx.fact("A Schur stable", True, _stable(A, tol))
    fx.fact("MAN Schur stable", False, _stable(MAN, tol))
    fx.number("rho(MAN)", 33.33, linalg.spectral_radius(MAN, tol), 0.02, holds=_unstable)
    MA = M @ A
    fx.notes.append(
        f"printed MA[0][1] = -100.25, recomputed {MA[0, 1]!r}; the spectral radius claim is unaffected"
    )
    return fx


def example_2_3_hypotheses(tol=DEFAULT):
    fx = Fixture("eg-2.3/hypotheses", "stated hypotheses of eg-2.3")
    M = np.array([[-1.0, -0.5], [0.5, -1.0]])
    N = (2.0 / 3.0) * np.eye(2)
    fx.fact("M symmetric", True, np.array_equal(M, M.T))
    fx.fact("N symmetric", True, np.array_equal(N, N.T))
    fx.number("rho(MN)", 1.0, linalg.spectral_radius(M @ N, tol), 1e-9, holds=lambda v: v <= 1.0)
    return fx


def map_2_4(tol=DEFAULT):
    """``[[a, b], [c, d]] -> [[a, b], [2d, -2c]]``"""
    return matmap.entry_map(2, [((0, 0), (0, 0), 1.0), ((0, 1), (0, 1), 1.0),
                                ((1, 1), (1, 0), 2.0), ((1, 0), (1, 1), -2.0)])


def example_2_4(tol=DEFAULT):
    fx = Fixture("eg-2.4", "normal map with spectral radius 1/2 that breaks stability")
    L = matmap.build(map_2_4(tol), tol)
    Lp = matmap.build(matmap.scale(0.25, map_2_4(tol)), tol)
    A = np.array([[0.75, 5.0], [0.0, -0.75]])
    fx.fact("L' normal", True, matmap.map_is_normal(Lp, tol))
    fx.number("rho(L')", 0.5, _rho_map(Lp, tol), 1e-9)
    fx.fact("A Schur stable", True, _stable(A, tol))
    fx.fact("A normaloid", False, classify_aloid(A, tol).normaloid)
    LpA = matmap.apply(Lp, A, tol)
    fx.matrix("L'(A)", [[0.75, 5.0], [-1.5, 0.0]], LpA, 1e-12,
              note="printed matrix equals the unscaled L(A)")
    rho_lpa = linalg.spectral_radius(LpA, tol)
    fx.bound("rho(L'(A))", "> 1", rho_lpa, _unstable,
             note=f"unscaled rho(L(A)) = {linalg.spectral_radius(matmap.apply(L, A, tol), tol)!r}")
    return fx


def map_2_5():
    """``[[a, b], [c, d]] -> [[b, c], [0, 0]]``"""
    return matmap.entry_map(2, [((0, 1), (0, 0), 1.0), ((1, 0), (0, 1), 1.0)])


def map_2_6():
    """``[[a, b], [c, d]] -> [[b, 2c], [0, 0]]``"""
    return matmap.entry_map(2, [((0, 1), (0, 0), 1.0), ((1, 0), (0, 1), 2.0)])


def example_2_5(tol=DEFAULT):
    fx = Fixture("eg-2.5", "singular contractive map that breaks stability")
    L = matmap.build(map_2_5(), tol)
    spec = matmap.map_spectrum(L, tol)
    fx.number("rho(L)", 0.0, spec.spectral_radius, 1e-8)
    fx.number("||L||", 1.0, matmap.frobenius_operator_norm(L, tol), 1e-9)
    fx.fact("L diagonalizable", False, is_diagonalizable(L.rep, tol))
    fx.fact("L singular", True, linalg.matrix_rank(L.rep) < 4)
    A = np.array([[0.0, 2.0], [0.1, 0.0]])
    LA = matmap.apply(L, A, tol)
    fx.fact("L preserves Schur stability", False, not (_stable(A, tol) and not _stable(LA, tol)),
            note="witness A = [[0, 2], [0.1, 0]] (rho 0.4472) maps to [[2, 0.1], [0, 0]] (rho 2); "
                 "the witness is constructed here, none is printed")
    return fx


def example_2_6(tol=DEFAULT):
    fx = Fixture("eg-2.6", "non-contractive map with spectral radius 0 that breaks stability")
    L = matmap.build(map_2_6(), tol)
    fx.number("rho(L)", 0.0, matmap.map_spectrum(L, tol).spectral_radius, 1e-8)
    fx.number("||L||", 2.0, matmap.frobenius_operator_norm(L, tol), 1e-9)
    fx.fact("L diagonalizable", False, is_diagonalizable(L.rep, tol))
    A = np.array([[0.5, 2.0], [0.0, 0.5]])
    LA = matmap.apply(L, A, tol)
    fx.fact("A Schur stable", True, _stable(A, tol))
    fx.matrix("L(A)", [[2.0, 0.0], [0.0, 0.0]], LA, 1e-12)
    fx.fact("L(A) Schur stable", False, bool(schur_2x2(LA)))
    fx.number("rho(L(A))", 2.0, linalg.spectral_radius(LA, tol), 1e-12)
    return fx


def map_rem_2_12():
    """``[[a, b], [c, d]] -> [[a, 2b], [c/2, d]]``"""
    return matmap.entry_map(2, [((0, 0), (0, 0), 1.0), ((0, 1), (0, 1), 2.0),
                                ((1, 0), (1, 0), 0.5), ((1, 1), (1, 1), 1.0)])


def remark_2_12_1(tol=DEFAULT, seed=2012, trials=500):
    fx = Fixture("rem-2.12.1", "trace and determinant preserving map with a nilpotent eigenvector")
    L = matmap.build(map_rem_2_12(), tol)
    fx.fact("L invertible", True, linalg.matrix_rank(L.rep) == 4)
    cfg = preserver.SampleConfig(n=2, trials=trials, seed=seed)
    dtr = ddet = 0.0
    for i in range(200):
        A = np.random.default_rng([seed, 10**6 + i]).standard_normal((2, 2))
        LA = matmap.apply(L, A, tol)
        dtr = max(dtr, abs(np.trace(LA) - np.trace(A)))
        ddet = max(ddet, abs((LA[0, 0] * LA[1, 1] - LA[0, 1] * LA[1, 0]) - (A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0])))
    fx.number("max trace change over 200 samples", 0.0, dtr, 1e-12)
    fx.number("max determinant change over 200 samples", 0.0, ddet, 1e-12)
    N = matmap.unit(2, 0, 1)
    fx.matrix("L(N)", 2 * N, matmap.apply(L, N, tol), 1e-15)
    fx.fact("N nilpotent", True, is_nilpotent(N, tol))
    fx.fact("L preserves Schur stability (sampled)", True, preserver.test_into_preserver(L, cfg, tol).clean)
    fx.fact("L = T X T^-1 with T = diag(2, 1)", True,
            preserver.verify_canonical_form(L, 1.0, np.diag([2.0, 1.0]), preserver.SIMILARITY, tol=tol))
    return fx


def remark_2_12_1_radius(tol=DEFAULT):
    fx = Fixture("rem-2.12.1/map-radius", "map spectral radius of the trace/determinant preserver")
    L = matmap.build(map_rem_2_12(), tol)
    fx.bound("rho(L)", "<= 1", _rho_map(L, tol), lambda v: v <= 1.0 + 1e-6,
             note="stability preservers are claimed to satisfy rho(L) <= 1, and onto preservers rho(L) = 1; "
                  "this onto preserver has eigenvalue 2 on the nilpotent eigenvector N")
    return fx


ALL = (
    example_2_0,
    example_2_1,
    example_2_2,
    example_2_2_aside,
    example_2_3,
    example_2_3_hypotheses,
    example_2_4,
    example_2_5,
    example_2_6,
    remark_2_12_1,
    remark_2_12_1_radius,
)


def run_all(tol=DEFAULT):
    return [f(tol) for f in ALL]
