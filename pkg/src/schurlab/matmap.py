"""Linear maps on n x n matrix space and their n^2 x n^2 representations.

A map is described by a small expression tree (:class:`MapSpec` nodes) and
turned into a :class:`MatrixMap` by :func:`build`.  Representations act on
column-stacked coordinates, or on ``svec`` coordinates after
:func:`restrict_symmetric`.

``compose(L1, L2, ..., Lk)`` is the mathematical composition
``L1 o L2 o ... o Lk``: ``Lk`` is applied first.

Adjoints, normality and :func:`frobenius_operator_norm` are taken with
respect to the trace inner product ``<X, Y> = trace(X^t Y)``, in which both
vec and svec coordinates are orthonormal.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import linalg
from .config import DEFAULT
from .errors import AnalysisLimitError, DimensionError, InputError, SingularMatrixError, SymmetryError
from .linalg import as_matrix

FULL = "full"
SYMMETRIC = "symmetric"


# ---------------------------------------------------------------------------
# Expression tree


class MapSpec:
    """Base class for map expression nodes."""

    def size(self):
        raise NotImplementedError


def _frozen(m, name):
    arr = as_matrix(m, square=True, name=name)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LeftRight(MapSpec):
    """``X -> M X N``"""

    M: np.ndarray
    N: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "M", _frozen(self.M, "M"))
        object.__setattr__(self, "N", _frozen(self.N, "N"))
        if self.M.shape != self.N.shape:
            raise DimensionError("leftRight: M and N must have the same size")

    def size(self):
        return self.M.shape[0]


@dataclass(frozen=True, eq=False)
class Congruence(MapSpec):
    """``X -> A X A^t``"""

    A: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A, "A"))

    def size(self):
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class Similarity(MapSpec):
    """``X -> T X T^-1``"""

    T: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "T", _frozen(self.T, "T"))

    def size(self):
        return self.T.shape[0]


@dataclass(frozen=True, eq=False)
class Transpose(MapSpec):
    n: int

    def __post_init__(self):
        if int(self.n) < 1:
            raise DimensionError("transpose: n must be positive")

    def size(self):
        return int(self.n)


@dataclass(frozen=True, eq=False)
class TraceShift(MapSpec):
    """``X -> alpha trace(X) I + beta S^-1 X S`` (``X^t`` in place of X if transposed)."""

    alpha: float
    beta: float
    S: np.ndarray
    transposed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "S", _frozen(self.S, "S"))

    def size(self):
        return self.S.shape[0]


@dataclass(frozen=True, eq=False)
class Scale(MapSpec):
    c: float
    child: MapSpec

    def size(self):
        return self.child.size()


def _same_size(children, kind):
    sizes = sorted({c.size() for c in children})
    if len(sizes) != 1:
        raise DimensionError(f"{kind} children act on different sizes {sizes}")


@dataclass(frozen=True, eq=False)
class Sum(MapSpec):
    children: Tuple[MapSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise InputError("sum needs at least one child")
        _same_size(self.children, "sum")

    def size(self):
        return self.children[0].size()


@dataclass(frozen=True, eq=False)
class Compose(MapSpec):
    children: Tuple[MapSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise InputError("compose needs at least one child")
        _same_size(self.children, "compose")

    def size(self):
        return self.children[0].size()


def left_right(M, N):
    return LeftRight(M, N)


def congruence(A):
    return Congruence(A)


def similarity(T):
    return Similarity(T)


def transpose(n):
    return Transpose(n)


def trace_shift(alpha, beta, S, transposed=False):
    return TraceShift(float(alpha), float(beta), S, bool(transposed))


def scale(c, child):
    return Scale(float(c), child)


def sum_of(*children):
    return Sum(children)


def compose(*children):
    return Compose(children)


def identity_spec(n):
    return Similarity(np.eye(n))


def unit(n, i, j):
    e = np.zeros((n, n))
    e[i, j] = 1.0
    return e


def entry_map(n, moves):
    """Map sending entry ``src`` of X to entry ``dst`` with a coefficient.

    ``moves`` is an iterable of ``((i, j), (k, l), c)``; the result is the sum
    of ``c * E_ki X E_jl`` terms, so only leftRight/scale/sum nodes are used.
    """
    terms = [scale(c, left_right(unit(n, k, i), unit(n, j, l))) for (i, j), (k, l), c in moves]
    return Sum(terms)


def describe(spec):
    """Compact text form of a spec, used as provenance."""
    if isinstance(spec, LeftRight):
        return f"leftRight(M={spec.M.tolist()}, N={spec.N.tolist()})"
    if isinstance(spec, Congruence):
        return f"congruence({spec.A.tolist()})"
    if isinstance(spec, Similarity):
        return f"similarity({spec.T.tolist()})"
    if isinstance(spec, Transpose):
        return f"transpose(n={spec.n})"
    if isinstance(spec, TraceShift):
        t = ", transposed" if spec.transposed else ""
        return f"traceShift(alpha={spec.alpha!r}, beta={spec.beta!r}, S={spec.S.tolist()}{t})"
    if isinstance(spec, Scale):
        return f"{spec.c!r} * {describe(spec.child)}"
    if isinstance(spec, Sum):
        return "(" + " + ".join(describe(c) for c in spec.children) + ")"
    if isinstance(spec, Compose):
        return "(" + " o ".join(describe(c) for c in spec.children) + ")"
    return repr(spec)


# ---------------------------------------------------------------------------
# Concrete maps


@dataclass(frozen=True, eq=False)
class MatrixMap:
    n: int
    rep: np.ndarray
    provenance: str
    subspace: str = FULL
    spec: MapSpec = None

    def __post_init__(self):
        rep = np.array(self.rep, dtype=float)
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)
        d = self.dim
        if rep.shape != (d, d):
            raise DimensionError(f"rep is {rep.shape}, expected {d}x{d} for n={self.n} ({self.subspace})")

    @property
    def dim(self):
        return self.n * self.n if self.subspace == FULL else self.n * (self.n + 1) // 2

    def __call__(self, a):
        return apply(self, a)


def _checked_inverse(m, what, tol):
    cond = linalg.condition_number(m, tol)
    if not cond <= tol.condition_limit:
        raise SingularMatrixError(f"{what} is numerically singular (condition estimate {cond:.3e})")
    return linalg.inverse(m, tol)


def _rep(spec, n, tol):
    if spec.size() != n:
        raise DimensionError(f"map node acts on {spec.size()}x{spec.size()}, expected {n}x{n}")
    if isinstance(spec, LeftRight):
        return linalg.kron(spec.N.T, spec.M)
    if isinstance(spec, Congruence):
        return linalg.kron(spec.A, spec.A)
    if isinstance(spec, Similarity):
        t_inv = _checked_inverse(spec.T, "similarity parameter T", tol)
        return linalg.kron(t_inv.T, spec.T)
    if isinstance(spec, Transpose):
        return linalg.commutation_matrix(n)
    if isinstance(spec, TraceShift):
        s_inv = _checked_inverse(spec.S, "traceShift parameter S", tol)
        vi = linalg.vec(np.eye(n))
        conj = linalg.kron(spec.S.T, s_inv)
        if spec.transposed:
            conj = conj @ linalg.commutation_matrix(n)
        return spec.alpha * np.outer(vi, vi) + spec.beta * conj
    if isinstance(spec, Scale):
        return spec.c * _rep(spec.child, n, tol)
    if isinstance(spec, Sum):
        return sum(_rep(c, n, tol) for c in spec.children)
    if isinstance(spec, Compose):
        out = np.eye(n * n)
        for c in spec.children:
            out = out @ _rep(c, n, tol)
        return out
    raise InputError(f"unknown map node {type(spec).__name__}")


def build(spec, tol=DEFAULT):
    n = spec.size()
    return MatrixMap(n=n, rep=_rep(spec, n, tol), provenance=describe(spec), spec=spec)


def from_rep(rep, n, provenance="explicit", subspace=FULL):
    return MatrixMap(n=n, rep=rep, provenance=provenance, subspace=subspace)


def identity_map(n, subspace=FULL):
    d = n * n if subspace == FULL else n * (n + 1) // 2
    return MatrixMap(n=n, rep=np.eye(d), provenance="identity", subspace=subspace)


def apply(L, a, tol=DEFAULT):
    A = as_matrix(a, square=True)
    if A.shape[0] != L.n:
        raise DimensionError(f"map acts on {L.n}x{L.n}, got {A.shape[0]}x{A.shape[0]}")
    if L.subspace == SYMMETRIC:
        return linalg.unsvec(L.rep @ linalg.svec(A, tol), L.n)
    return linalg.unvec(L.rep @ linalg.vec(A), L.n)


def direct_apply(spec, a, tol=DEFAULT):
    """Evaluate a spec by its defining formula, bypassing the representation."""
    X = as_matrix(a, square=True)
    if isinstance(spec, LeftRight):
        return spec.M @ X @ spec.N
    if isinstance(spec, Congruence):
        return spec.A @ X @ spec.A.T
    if isinstance(spec, Similarity):
        return spec.T @ X @ linalg.inverse(spec.T, tol)
    if isinstance(spec, Transpose):
        return X.T.copy()
    if isinstance(spec, TraceShift):
        Y = X.T if spec.transposed else X
        n = X.shape[0]
        return spec.alpha * np.trace(X) * np.eye(n) + spec.beta * linalg.inverse(spec.S, tol) @ Y @ spec.S
    if isinstance(spec, Scale):
        return spec.c * direct_apply(spec.child, X, tol)
    if isinstance(spec, Sum):
        return sum(direct_apply(c, X, tol) for c in spec.children)
    if isinstance(spec, Compose):
        for c in reversed(spec.children):
            X = direct_apply(c, X, tol)
        return X
    raise InputError(f"unknown map node {type(spec).__name__}")


# ---------------------------------------------------------------------------
# Analysis


def map_spectrum(L, tol=DEFAULT):
    limit = tol.analysis_limit
    if L.dim > limit * limit:
        raise AnalysisLimitError(
            f"rep dimension {L.dim} exceeds the analysis limit ({limit}x{limit} matrices)", limit
        )
    return linalg.eigenvalues(L.rep, tol)


def congruence_eigenvalue_law_check(a, match_tol=1e-6, tol=DEFAULT):
    """Eigenvalues of ``X -> A X A^t`` are exactly the products ``l_i l_j``."""
    A = as_matrix(a, square=True)
    if A.shape[0] > 8:
        raise DimensionError("congruence law check is limited to n <= 8")
    lam = linalg.eigvals(A, tol)
    expected = [x * y for x in lam for y in lam]
    got = list(linalg.eigvals(linalg.kron(A, A), tol))
    scale = max(1.0, max(abs(z) for z in expected))
    for z in expected:
        k = min(range(len(got)), key=lambda i: abs(got[i] - z))
        if abs(got[k] - z) > match_tol * scale:
            return False
        got.pop(k)
    return True


def map_is_normal(L, tol=DEFAULT):
    R = L.rep
    nrm = float(np.linalg.norm(R))
    return float(np.linalg.norm(R @ R.T - R.T @ R)) <= tol.normal_tolerance * nrm * nrm


def map_inverse(L, tol=DEFAULT):
    inv = _checked_inverse(L.rep, "map representation", tol)
    return MatrixMap(n=L.n, rep=inv, provenance=f"inverse of {L.provenance}", subspace=L.subspace)


def restrict_symmetric(L, tol=DEFAULT):
    """Restriction to symmetric matrices, in svec coordinates."""
    if L.subspace == SYMMETRIC:
        return L
    n = L.n
    cols = []
    for k, (i, j) in enumerate(linalg._svec_index(n)):
        basis = np.zeros((n, n))
        if i == j:
            basis[i, i] = 0.5
        else:
            basis[i, j] = basis[j, i] = 0.5
        image = apply(L, basis, tol)
        gap = float(np.linalg.norm(image - image.T))
        if gap > tol.normal_tolerance * max(1.0, float(np.linalg.norm(image))):
            raise SymmetryError(
                f"map does not preserve symmetry: image of basis element {k} "
                f"(entries ({i},{j})/({j},{i})) has asymmetry {gap:.3e}"
            )
        # basis is a positive multiple of unsvec(e_k)
        cols.append(linalg.svec(0.5 * (image + image.T), tol) / np.linalg.norm(linalg.svec(basis, tol)))
    rep = np.column_stack(cols)
    return MatrixMap(n=n, rep=rep, provenance=f"restriction to symmetric matrices of {L.provenance}",
                     subspace=SYMMETRIC, spec=L.spec)


def frobenius_operator_norm(L, tol=DEFAULT):
    """Largest singular value of the representation."""
    return linalg.operator_norm(L.rep, tol)
