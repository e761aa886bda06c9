"""Schur stability criteria and the normaloid / spectraloid classifiers."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .config import DEFAULT
from .errors import DimensionError, DivergenceError, SteinSingularError, SingularMatrixError, SymmetryError
from .linalg import as_matrix

STABLE = "stable"
UNSTABLE = "unstable"
MARGINAL = "marginal"


def classify_radius(rho, band):
    if rho <= 1.0 - band:
        return STABLE
    if rho >= 1.0 + band:
        return UNSTABLE
    return MARGINAL


@dataclass
class StabilityReport:
    verdict: str
    spectral_radius: float
    margin: float
    spectrum: linalg.Spectrum
    evidence: dict = field(default_factory=dict)

    @property
    def stable(self):
        return self.verdict == STABLE

    def as_dict(self):
        out = {
            "verdict": self.verdict,
            "spectral_radius": self.spectral_radius,
            "margin": self.margin,
            "spectrum": self.spectrum.as_dict(),
        }
        if self.evidence:
            out["evidence"] = {k: (v.as_dict() if hasattr(v, "as_dict") else v) for k, v in self.evidence.items()}
        return out


def is_schur_stable(a, tol=DEFAULT):
    """Three-valued verdict: ``marginal`` when ``|rho - 1| < marginal_band``."""
    spectrum = linalg.eigenvalues(a, tol)
    rho = spectrum.spectral_radius
    return StabilityReport(
        verdict=classify_radius(rho, tol.marginal_band),
        spectral_radius=rho,
        margin=1.0 - rho,
        spectrum=spectrum,
    )


@dataclass(frozen=True)
class TwoByTwoCriterion:
    stable: bool
    trace: float
    det: float
    trace_condition: bool
    det_condition: bool

    def __bool__(self):
        return self.stable

    def as_dict(self):
        return {
            "stable": self.stable,
            "trace": self.trace,
            "det": self.det,
            "abs_trace_lt_1_plus_det": self.trace_condition,
            "abs_det_lt_1": self.det_condition,
        }


def schur_2x2(a):
    """Closed-form test: ``|tr A| < 1 + det A`` and ``|det A| < 1``."""
    m = as_matrix(a, square=True)
    if m.shape != (2, 2):
        raise DimensionError(f"schur_2x2 needs a 2x2 matrix, got {m.shape[0]}x{m.shape[1]}")
    tr = float(m[0, 0] + m[1, 1])
    det = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    c1 = abs(tr) < 1.0 + det
    c2 = abs(det) < 1.0
    return TwoByTwoCriterion(c1 and c2, tr, det, c1, c2)


# ---------------------------------------------------------------------------
# Stein (discrete Lyapunov) equation  X - A^t X A = R


@dataclass
class SteinSolution:
    X: np.ndarray
    residual: float
    min_eigenvalue: float

    @property
    def positive_definite(self):
        return self.min_eigenvalue > 0.0

    def as_dict(self):
        return {
            "X": self.X.tolist(),
            "residual": self.residual,
            "min_eigenvalue": self.min_eigenvalue,
            "positive_definite": self.positive_definite,
        }


def _check_symmetric(m, name, tol):
    gap = float(np.linalg.norm(m - m.T))
    if gap > tol.symmetry_tolerance * max(float(np.linalg.norm(m)), 1.0):
        raise SymmetryError(f"{name} is not symmetric (asymmetry {gap:.3e})")
    return gap


def solve_stein(a, r, tol=DEFAULT):
    """Solve ``X - A^t X A = R`` through the n^2 x n^2 Kronecker system."""
    A = as_matrix(a, square=True)
    R = as_matrix(r, square=True, name="R")
    n = A.shape[0]
    if R.shape != A.shape:
        raise DimensionError(f"R is {R.shape[0]}x{R.shape[1]}, A is {n}x{n}")
    _check_symmetric(R, "R", tol)
    system = np.eye(n * n) - linalg.kron(A.T, A.T)
    try:
        x = linalg.solve_linear(system, linalg.vec(R), tol)
    except SingularMatrixError as exc:
        raise SteinSingularError(
            "Stein equation has no unique solution (some eigenvalue product equals 1)",
            pivot=exc.pivot,
        ) from None
    X = linalg.unvec(x, n)
    X = 0.5 * (X + X.T)
    residual = float(np.linalg.norm(X - A.T @ X @ A - R))
    return SteinSolution(X=X, residual=residual, min_eigenvalue=float(linalg.symmetric_eigenvalues(X, tol)[0]))


def stein_series(a, r, k_max):
    """Partial sum ``sum_{k=0..K} (A^t)^k R A^k`` and the last term's norm."""
    A = as_matrix(a, square=True)
    R = as_matrix(r, square=True, name="R")
    if k_max < 0:
        raise ValueError("K must be nonnegative")
    total = R.copy()
    term = R.copy()
    last = float(np.linalg.norm(term))
    with np.errstate(over="raise", invalid="raise"):
        try:
            for _ in range(k_max):
                term = A.T @ term @ A
                total = total + term
                last = float(np.linalg.norm(term))
                if last > 1e150:
                    raise FloatingPointError
        except FloatingPointError:
            raise DivergenceError("Stein series diverges (A is not Schur stable)") from None
    return total, last


# ---------------------------------------------------------------------------
# Semidefinite linear complementarity


@dataclass
class SdlcpCertificate:
    X: np.ndarray
    Y: np.ndarray
    symmetry_gap: float
    equation_gap: float
    min_eig_x: float
    min_eig_y: float
    complementarity: float
    valid: bool

    def as_dict(self):
        return {
            "X": self.X.tolist(),
            "Y": self.Y.tolist(),
            "symmetry_gap": self.symmetry_gap,
            "equation_gap": self.equation_gap,
            "min_eig_x": self.min_eig_x,
            "min_eig_y": self.min_eig_y,
            "complementarity": self.complementarity,
            "valid": self.valid,
        }


def verify_sdlcp(a, q, x, y, tol=DEFAULT):
    """Check ``Y = X - A^t X A + Q``, ``X, Y`` PSD and ``trace(YX) = 0``.

    Cone membership is positive *semi*definite: strictly definite X and Y
    cannot have ``trace(YX) = 0``.
    """
    A = as_matrix(a, square=True)
    mats = {name: as_matrix(m, square=True, name=name) for name, m in (("Q", q), ("X", x), ("Y", y))}
    n = A.shape[0]
    for name, m in mats.items():
        if m.shape != (n, n):
            raise DimensionError(f"{name} is {m.shape[0]}x{m.shape[1]}, A is {n}x{n}")
    Q, X, Y = mats["Q"], mats["X"], mats["Y"]
    sym = max(_check_symmetric(m, name, tol) for name, m in mats.items())
    eq = float(np.linalg.norm(Y - X + A.T @ X @ A - Q))
    ex = float(linalg.symmetric_eigenvalues(0.5 * (X + X.T), tol)[0])
    ey = float(linalg.symmetric_eigenvalues(0.5 * (Y + Y.T), tol)[0])
    comp = abs(float(np.trace(Y @ X)))
    eps = tol.sdlcp_tolerance
    valid = (
        eq <= eps * (1.0 + float(np.linalg.norm(Q)))
        and ex >= -eps
        and ey >= -eps
        and comp <= eps * (1.0 + float(np.linalg.norm(X)) * float(np.linalg.norm(Y)))
    )
    return SdlcpCertificate(X, Y, sym, eq, ex, ey, comp, valid)


def sdlcp_special_solve(a, q, tol=DEFAULT):
    """Try the complementary solution with ``Y = 0``.

    Solves ``X - A^t X A = -Q``; returns the certificate when X is PSD and
    ``None`` otherwise.  ``None`` means only that this special case does not
    apply, not that the problem is infeasible.
    """
    Q = as_matrix(q, square=True, name="Q")
    sol = solve_stein(a, -Q, tol)
    if sol.min_eigenvalue < -tol.sdlcp_tolerance:
        return None
    return verify_sdlcp(a, Q, sol.X, np.zeros_like(sol.X), tol)


# ---------------------------------------------------------------------------
# Power iteration


@dataclass
class PowerLimit:
    verdict: str  # converging | diverging | inconclusive
    k: int
    tail_norms: list

    def as_dict(self):
        return {"verdict": self.verdict, "k": self.k, "tail_norms": self.tail_norms}


def power_limit(a, k_max, tol=DEFAULT, keep=10):
    A = as_matrix(a, square=True)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    p = np.eye(A.shape[0])
    norms = []
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, k_max + 1):
            p = p @ A
            nrm = float(np.linalg.norm(p))
            norms.append(nrm)
            if nrm < tol.power_converged:
                return PowerLimit("converging", k, norms[-keep:])
            if not math.isfinite(nrm) or nrm > tol.power_diverged:
                return PowerLimit("diverging", k, norms[-keep:])
    return PowerLimit("inconclusive", k_max, norms[-keep:])


# ---------------------------------------------------------------------------
# Numerical radius and norm classes


def _hermitian_doubling(a, thetas):
    """Real 2n x 2n embeddings of ``Re(e^{i theta} A)`` for each theta."""
    sym = 0.5 * (a + a.T)
    skew = 0.5 * (a - a.T)
    c = np.cos(thetas)[:, None, None]
    s = np.sin(thetas)[:, None, None]
    # Hermitian part cos*S + i*sin*K; real form [[Re, -Im], [Im, Re]]
    re = c * sym
    im = s * skew
    top = np.concatenate([re, -im], axis=2)
    bottom = np.concatenate([im, re], axis=2)
    return np.concatenate([top, bottom], axis=1)


def numerical_radius(a, tol=DEFAULT):
    """``w(A) = max_theta lambda_max(Re(e^{i theta} A))`` over ``[0, pi]``.

    A grid of ``tol.radius_grid`` angles is refined around the best grid
    point by safeguarded parabolic interpolation down to
    ``tol.radius_theta_tol`` in theta.  For real A the range ``[0, pi]``
    suffices, and both endpoints are symmetry points of the curve.
    """
    A = as_matrix(a, square=True)

    def lam_max(thetas):
        vals = linalg.jacobi_eigenvalues_batch(_hermitian_doubling(A, np.asarray(thetas, float)), tol)
        return vals[:, -1]

    grid = np.linspace(0.0, math.pi, tol.radius_grid)
    values = lam_max(grid)
    k = int(np.argmax(values))
    best = float(values[k])
    if 0 < k < len(grid) - 1:
        best = max(best, _parabolic_max(lambda t: float(lam_max([t])[0]),
                                        grid[k - 1], grid[k], grid[k + 1],
                                        float(values[k - 1]), best, float(values[k + 1]),
                                        tol.radius_theta_tol))
    return best


def _parabolic_max(f, a, b, c, fa, fb, fc, xtol, max_iter=100):
    golden = 0.3819660112501051
    for _ in range(max_iter):
        if c - a <= xtol:
            break
        den = (b - a) * (fb - fc) - (b - c) * (fb - fa)
        u = None
        if den != 0.0:
            u = b - 0.5 * ((b - a) ** 2 * (fb - fc) - (b - c) ** 2 * (fb - fa)) / den
        if u is None or not (a < u < c) or abs(u - b) < 0.25 * xtol:
            u = b - golden * (b - a) if b - a > c - b else b + golden * (c - b)
        fu = f(u)
        if fu >= fb:
            if u < b:
                c, fc = b, fb
            else:
                a, fa = b, fb
            b, fb = u, fu
        elif u < b:
            a, fa = u, fu
        else:
            c, fc = u, fu
    return fb


@dataclass(frozen=True)
class AloidClass:
    normaloid: bool
    spectraloid: bool
    spectral_radius: float
    norm: float
    numerical_radius: float

    def as_dict(self):
        return {
            "normaloid": self.normaloid,
            "spectraloid": self.spectraloid,
            "spectral_radius": self.spectral_radius,
            "norm": self.norm,
            "numerical_radius": self.numerical_radius,
        }


def _close(x, y, rel):
    return abs(x - y) <= rel * max(abs(x), abs(y), 1e-300) or x == y


def classify_aloid(a, tol=DEFAULT):
    A = as_matrix(a, square=True)
    rho = linalg.spectral_radius(A, tol)
    nrm = linalg.operator_norm(A, tol)
    w = min(max(numerical_radius(A, tol), rho), nrm)
    normaloid = _close(rho, nrm, tol.aloid_tolerance)
    spectraloid = normaloid or _close(rho, w, tol.aloid_tolerance)
    return AloidClass(normaloid, spectraloid, rho, nrm, w)


def is_nilpotent(a, tol=DEFAULT):
    """``||A^n||_F <= tol * max(1, ||A||_F^n)``."""
    A = as_matrix(a, square=True)
    n = A.shape[0]
    p = np.linalg.matrix_power(A, n)
    scale = float(np.linalg.norm(A)) ** n
    return float(np.linalg.norm(p)) <= tol.nilpotent_tolerance * max(1.0, scale)
