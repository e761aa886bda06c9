"""Dense real linear algebra used throughout the package.

Eigenvalues come from a Householder reduction to upper Hessenberg form
followed by Francis double-shift QR iteration; symmetric spectra from
cyclic Jacobi rotations.  Linear systems use LU with partial (row)
pivoting.  NumPy is used only as an array container and for BLAS-level
products; no LAPACK driver is called.

Vectorization is column stacking, so that ``vec(M @ X @ N) ==
kron(N.T, M) @ vec(X)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT
from .errors import (
    ConvergenceError,
    DimensionError,
    InputError,
    SingularMatrixError,
    SymmetryError,
)

EPS = np.finfo(float).eps

__all__ = [
    "Spectrum",
    "as_matrix",
    "eigenvalues",
    "eigvals",
    "spectral_radius",
    "operator_norm",
    "symmetric_eigenvalues",
    "solve_linear",
    "inverse",
    "condition_number",
    "matrix_rank",
    "kron",
    "vec",
    "unvec",
    "commutation_matrix",
    "svec",
    "unsvec",
    "hessenberg",
]


def as_matrix(a, square=False, name="A"):
    """Validate and return ``a`` as a finite 2-D float array (a copy)."""
    try:
        m = np.array(a, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a real matrix ({exc})") from None
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"{name}: expected a nonempty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name}: entries must be finite")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name}: expected a square matrix, got {m.shape[0]}x{m.shape[1]}")
    return m


def _frob(a):
    return float(np.sqrt(np.sum(np.abs(a) ** 2)))


# ---------------------------------------------------------------------------
# Nonsymmetric eigenvalues


def hessenberg(a):
    """Orthogonally similar upper Hessenberg form of a square matrix."""
    h = as_matrix(a, square=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        if not np.any(x[1:]):
            continue
        alpha = -math.copysign(float(np.sqrt(x @ x)), x[0])
        v = x
        v[0] -= alpha
        v /= np.sqrt(v @ v)
        h[k + 1:, k:] -= 2.0 * np.outer(v, v @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v)
        h[k + 1, k] = alpha
        h[k + 2:, k] = 0.0
    return h


def _hqr(h, max_iter):
    """Francis double-shift QR on an upper Hessenberg matrix.

    Returns (real parts, imaginary parts, iterations).  Complex pairs are
    emitted as exact conjugates.  Works on Python floats: for the small
    matrices this is called on in sampling loops, per-element numpy
    indexing costs more than the arithmetic.
    """
    a = h.tolist()
    n = len(a)
    wr = [0.0] * n
    wi = [0.0] * n
    anorm = sum(abs(a[i][j]) for i in range(n) for j in range(max(i - 1, 0), n))
    nn = n - 1
    t = 0.0
    its = 0
    total = 0
    while nn >= 0:
        l = nn
        while l >= 1:
            s = abs(a[l - 1][l - 1]) + abs(a[l][l])
            if s == 0.0:
                s = anorm
            if abs(a[l][l - 1]) + s == s:
                a[l][l - 1] = 0.0
                break
            l -= 1
        x = a[nn][nn]
        if l == nn:
            wr[nn] = x + t
            nn -= 1
            its = 0
            continue
        y = a[nn - 1][nn - 1]
        w = a[nn][nn - 1] * a[nn - 1][nn]
        if l == nn - 1:
            p = 0.5 * (y - x)
            q = p * p + w
            z = math.sqrt(abs(q))
            x += t
            if q >= 0.0:
                z = p + math.copysign(z, p)
                wr[nn - 1] = wr[nn] = x + z
                if z != 0.0:
                    wr[nn] = x - w / z
            else:
                wr[nn - 1] = wr[nn] = x + p
                wi[nn - 1] = z
                wi[nn] = -z
            nn -= 2
            its = 0
            continue

        if total >= max_iter:
            raise ConvergenceError(
                f"QR iteration did not converge after {total} sweeps", iterations=total
            )
        if its in (10, 20):
            # exceptional shift
            t += x
            for i in range(nn + 1):
                a[i][i] -= x
            s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
            x = y = 0.75 * s
            w = -0.4375 * s * s
        its += 1
        total += 1

        m = nn - 2
        while m >= l:
            z = a[m][m]
            r = x - z
            s = y - z
            p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
            q = a[m + 1][m + 1] - z - r - s
            r = a[m + 2][m + 1]
            s = abs(p) + abs(q) + abs(r)
            p /= s
            q /= s
            r /= s
            if m == l:
                break
            u = abs(a[m][m - 1]) * (abs(q) + abs(r))
            v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
            if u + v == v:
                break
            m -= 1
        for i in range(m + 2, nn + 1):
            a[i][i - 2] = 0.0
            if i != m + 2:
                a[i][i - 3] = 0.0

        for k in range(m, nn):
            last = k == nn - 1
            if k != m:
                p = a[k][k - 1]
                q = a[k + 1][k - 1]
                r = 0.0 if last else a[k + 2][k - 1]
                x = abs(p) + abs(q) + abs(r)
                if x != 0.0:
                    p /= x
                    q /= x
                    r /= x
            s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
            if s == 0.0:
                continue
            if k == m:
                if l != m:
                    a[k][k - 1] = -a[k][k - 1]
            else:
                a[k][k - 1] = -s * x
            p += s
            x = p / s
            y = q / s
            z = r / s
            q /= p
            r /= p
            r0, r1 = a[k], a[k + 1]
            if last:
                for j in range(k, nn + 1):
                    pv = r0[j] + q * r1[j]
                    r1[j] -= pv * y
                    r0[j] -= pv * x
            else:
                r2 = a[k + 2]
                for j in range(k, nn + 1):
                    pv = r0[j] + q * r1[j] + r * r2[j]
                    r2[j] -= pv * z
                    r1[j] -= pv * y
                    r0[j] -= pv * x
            for i in range(l, min(nn, k + 3) + 1):
                row = a[i]
                if last:
                    pv = x * row[k] + y * row[k + 1]
                else:
                    pv = x * row[k] + y * row[k + 1] + z * row[k + 2]
                    row[k + 2] -= pv * r
                row[k + 1] -= pv * q
                row[k] -= pv
    return np.array(wr), np.array(wi), total


def _ordered(values):
    # descending modulus, then real part, positive imaginary part first
    keys = sorted(range(len(values)), key=lambda i: (-abs(values[i]), -values[i].real, -values[i].imag))
    return values[keys]


def eigvals(a, tol=DEFAULT):
    """All eigenvalues of a square matrix, without residual certificates."""
    m = as_matrix(a, square=True)
    n = m.shape[0]
    if n == 1:
        return np.array([complex(m[0, 0])])
    wr, wi, _ = _hqr(hessenberg(m), tol.qr_sweeps_per_dim * n)
    return _ordered(wr + 1j * wi)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with residual certificates.

    ``residuals[k]`` is ``||(A - lambda_k I) v||`` for a unit vector ``v``
    obtained by inverse iteration; it bounds the smallest singular value of
    ``A - lambda_k I`` from above.
    """

    eigenvalues: np.ndarray
    residuals: np.ndarray
    spectral_radius: float
    iterations: int = 0
    scale: float = field(default=0.0, compare=False)

    def max_residual(self):
        return float(np.max(self.residuals)) if len(self.residuals) else 0.0

    def certified(self, tol=DEFAULT):
        return self.max_residual() <= tol.residual_tolerance * (1.0 + self.scale)

    def as_dict(self):
        return {
            "eigenvalues": [{"re": float(z.real), "im": float(z.imag)} for z in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "spectral_radius": self.spectral_radius,
        }


_START = np.random.default_rng(20240229).standard_normal(512)


def _inverse_iteration_residual(a, lam, anorm):
    n = a.shape[0]
    if lam.imag == 0.0:
        b = a - lam.real * np.eye(n)
    else:
        b = a.astype(complex) - lam * np.eye(n)
    floor = EPS * max(anorm, 1.0)
    lu, piv = _lu_factor(b, floor=floor, perturb=True)
    reps = int(math.ceil(n / _START.size))
    v = np.tile(_START, reps)[:n].astype(b.dtype)
    v /= np.linalg.norm(v)
    best = float(np.linalg.norm(b @ v))
    for _ in range(3):
        v = _lu_solve(lu, piv, v)
        nv = np.linalg.norm(v)
        if not np.isfinite(nv) or nv == 0.0:
            break
        v /= nv
        best = min(best, float(np.linalg.norm(b @ v)))
    return best


def eigenvalues(a, tol=DEFAULT):
    """Spectrum of a square real matrix with per-eigenvalue residuals.

    Raises ConvergenceError if QR iteration needs more than
    ``tol.qr_sweeps_per_dim * n`` sweeps.
    """
    m = as_matrix(a, square=True)
    n = m.shape[0]
    if n == 1:
        lam = np.array([complex(m[0, 0])])
        iterations = 0
    else:
        wr, wi, iterations = _hqr(hessenberg(m), tol.qr_sweeps_per_dim * n)
        lam = _ordered(wr + 1j * wi)
    anorm = _frob(m)
    residuals = np.array([_inverse_iteration_residual(m, z, anorm) for z in lam])
    lam.setflags(write=False)
    residuals.setflags(write=False)
    return Spectrum(
        eigenvalues=lam,
        residuals=residuals,
        spectral_radius=float(np.max(np.abs(lam))),
        iterations=iterations,
        scale=anorm,
    )


def spectral_radius(a, tol=DEFAULT):
    """Largest eigenvalue modulus (same QR path as :func:`eigenvalues`)."""
    return float(np.max(np.abs(eigvals(a, tol))))


# ---------------------------------------------------------------------------
# Symmetric eigenvalues (cyclic Jacobi, round-robin ordering)


def _round_robin(n):
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        rounds.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_eigenvalues_batch(stack, tol=DEFAULT):
    """Sorted eigenvalues of each symmetric matrix in a (B, n, n) stack.

    One sweep visits every (p, q) pair once; the pairs are grouped into
    n - 1 rounds of disjoint rotations, and each round is applied to the
    whole stack as a single orthogonal similarity.
    """
    a = np.array(stack, dtype=float)
    a = 0.5 * (a + np.swapaxes(a, -1, -2))
    batch, n, _ = a.shape
    if n == 1:
        return a[:, 0, :].copy()
    fro = np.sqrt(np.sum(a * a, axis=(1, 2)))
    offmask = ~np.eye(n, dtype=bool)
    rounds = _round_robin(n)
    eye = np.broadcast_to(np.eye(n), (batch, n, n))
    for sweep in range(tol.jacobi_max_sweeps + 1):
        off = np.sqrt(np.sum((a * offmask) ** 2, axis=(1, 2)))
        if np.all(off <= tol.jacobi_tolerance * fro):
            break
        if sweep == tol.jacobi_max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {sweep} sweeps", iterations=sweep
            )
        for p, q in rounds:
            app = a[:, p, p]
            aqq = a[:, q, q]
            apq = a[:, p, q]
            nz = apq != 0.0
            safe = np.where(nz, apq, 1.0)
            tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0.0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            j = eye.copy()
            j[:, p, p] = c
            j[:, q, q] = c
            j[:, p, q] = s
            j[:, q, p] = -s
            a = np.swapaxes(j, -1, -2) @ a @ j
        a = 0.5 * (a + np.swapaxes(a, -1, -2))
    return np.sort(np.diagonal(a, axis1=1, axis2=2), axis=1)


def symmetric_eigenvalues(s, tol=DEFAULT):
    """Eigenvalues of a symmetric matrix in nondecreasing order."""
    m = as_matrix(s, square=True, name="S")
    fro = _frob(m)
    if _frob(m - m.T) > tol.symmetry_tolerance * fro:
        raise SymmetryError(f"S is not symmetric (asymmetry {_frob(m - m.T):.3e})")
    return jacobi_eigenvalues_batch(m[None], tol)[0]


def operator_norm(a, tol=DEFAULT):
    """Largest singular value, via the Jacobi spectrum of the Gram matrix."""
    m = as_matrix(a)
    gram = m.T @ m if m.shape[1] <= m.shape[0] else m @ m.T
    gram = 0.5 * (gram + gram.T)
    lam = symmetric_eigenvalues(gram, tol)[-1]
    return float(math.sqrt(max(lam, 0.0)))


# ---------------------------------------------------------------------------
# Linear systems


def _lu_factor(a, floor, perturb=False):
    lu = np.array(a, copy=True)
    n = lu.shape[0]
    piv = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            piv[[k, p]] = piv[[p, k]]
        pivot = lu[k, k]
        if abs(pivot) <= floor:
            if not perturb:
                raise SingularMatrixError(
                    f"matrix is singular to working precision (pivot {abs(pivot):.3e} at step {k})",
                    pivot=float(abs(pivot)),
                )
            lu[k, k] = floor if pivot == 0 else pivot / abs(pivot) * floor
        if k + 1 < n:
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, piv


def _lu_solve(lu, piv, b):
    n = lu.shape[0]
    x = np.array(b, dtype=np.result_type(lu, b), copy=True)[piv]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def _singular_floor(m):
    return m.shape[0] * EPS * float(np.max(np.abs(m))) if m.size else 0.0


def solve_linear(a, b, tol=DEFAULT):
    """Solve ``a @ x = b`` by LU with row pivoting.

    Up to two steps of iterative refinement are taken if the backward error
    exceeds ``solve_tolerance * (||a||_F ||x|| + ||b||)``.
    """
    m = as_matrix(a, square=True)
    rhs = np.asarray(b, dtype=float)
    if rhs.ndim != 1 or rhs.shape[0] != m.shape[0]:
        raise DimensionError(f"right-hand side has shape {rhs.shape}, expected ({m.shape[0]},)")
    if not np.all(np.isfinite(rhs)):
        raise InputError("right-hand side must be finite")
    lu, piv = _lu_factor(m, _singular_floor(m))
    x = _lu_solve(lu, piv, rhs)
    anorm = _frob(m)
    for _ in range(3):
        r = rhs - m @ x
        if np.linalg.norm(r) <= tol.solve_tolerance * (anorm * np.linalg.norm(x) + np.linalg.norm(rhs)):
            return x
        x = x + _lu_solve(lu, piv, r)
    raise SingularMatrixError(
        "system too ill-conditioned to meet the solve tolerance",
        pivot=float(np.min(np.abs(np.diagonal(lu)))),
    )


def inverse(a, tol=DEFAULT):
    m = as_matrix(a, square=True)
    n = m.shape[0]
    lu, piv = _lu_factor(m, _singular_floor(m))
    inv = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        inv[:, j] = _lu_solve(lu, piv, e)
    return inv


def condition_number(a, tol=DEFAULT):
    """1-norm condition number ``||a||_1 ||a^-1||_1``; inf when singular."""
    m = as_matrix(a, square=True)
    try:
        inv = inverse(m, tol)
    except SingularMatrixError:
        return math.inf
    return float(np.abs(m).sum(axis=0).max() * np.abs(inv).sum(axis=0).max())


def matrix_rank(a, rtol=None):
    """Rank by Gaussian elimination with complete pivoting."""
    m = as_matrix(a, name="M")
    rows, cols = m.shape
    if rtol is None:
        rtol = max(rows, cols) * EPS
    thresh = rtol * float(np.max(np.abs(m)))
    w = m.copy()
    rank = 0
    for k in range(min(rows, cols)):
        sub = np.abs(w[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= thresh or sub[i, j] == 0.0:
            break
        i += k
        j += k
        w[[k, i]] = w[[i, k]]
        w[:, [k, j]] = w[:, [j, k]]
        w[k + 1:, k:] -= np.outer(w[k + 1:, k] / w[k, k], w[k, k:])
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# Kronecker / vectorization toolkit


def kron(a, b):
    x = as_matrix(a, name="A")
    y = as_matrix(b, name="B")
    ra, ca = x.shape
    rb, cb = y.shape
    return (x[:, None, :, None] * y[None, :, None, :]).reshape(ra * rb, ca * cb)


def vec(a):
    """Column-stacking vectorization."""
    return as_matrix(a).reshape(-1, order="F")


def unvec(x, n):
    v = np.asarray(x, dtype=float).ravel()
    if v.size != n * n:
        raise DimensionError(f"unvec: length {v.size} is not {n}^2")
    return v.reshape((n, n), order="F").copy()


def commutation_matrix(n):
    """Permutation K with ``K @ vec(A) == vec(A.T)``."""
    if n < 1:
        raise DimensionError("n must be positive")
    k = np.zeros((n * n, n * n))
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    k[(i + j * n).ravel(), (j + i * n).ravel()] = 1.0
    return k


def _svec_index(n):
    # lower triangle, column by column: (0,0), (1,0), ..., (n-1,0), (1,1), ...
    return [(i, j) for j in range(n) for i in range(j, n)]


SQRT2 = math.sqrt(2.0)


def svec(s, tol=DEFAULT):
    """Coordinates of a symmetric matrix with off-diagonals scaled by sqrt(2).

    ``svec(S) @ svec(T) == trace(S @ T)`` for symmetric S, T.
    """
    m = as_matrix(s, square=True, name="S")
    if _frob(m - m.T) > tol.symmetry_tolerance * max(_frob(m), 1.0):
        raise SymmetryError("svec requires a symmetric matrix")
    n = m.shape[0]
    return np.array([m[i, j] if i == j else SQRT2 * 0.5 * (m[i, j] + m[j, i]) for i, j in _svec_index(n)])


def unsvec(x, n):
    v = np.asarray(x, dtype=float).ravel()
    if v.size != n * (n + 1) // 2:
        raise DimensionError(f"unsvec: length {v.size} is not {n}({n}+1)/2")
    m = np.zeros((n, n))
    for value, (i, j) in zip(v, _svec_index(n)):
        if i == j:
            m[i, i] = value
        else:
            m[i, j] = m[j, i] = value / SQRT2
    return m
