"""Matrix files and MapSpec JSON.

Matrix files are either JSON ``{"rows": r, "cols": c, "data": [[...], ...]}``
or plain text with whitespace-separated entries, one row per line (blank
lines and ``#`` comments ignored).  Floats are written with ``repr``, the
shortest decimal string that parses back to the identical double.

MapSpec JSON nodes::

    {"op": "leftRight", "M": <matrix>, "N": <matrix>}
    {"op": "congruence", "A": <matrix>}
    {"op": "similarity", "T": <matrix>}
    {"op": "transpose", "n": <int>}
    {"op": "traceShift", "alpha": <num>, "beta": <num>, "S": <matrix>, "transposed": <bool, optional>}
    {"op": "scale", "c": <num>, "child": <node>}
    {"op": "sum", "children": [<node>, ...]}
    {"op": "compose", "children": [<node>, ...]}     # first child applied last

``<matrix>`` is an array of row arrays or a matrix-file object.  The root
node may carry ``"subspace": "symmetric"`` to request the restriction to
symmetric matrices.
"""

import json
import math
import re
from pathlib import Path

import numpy as np

from . import matmap
from .errors import ParseError


def _reject_constant(name):
    raise ValueError(f"non-finite literal {name}")


def _loads(text, source):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from None


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {type(x).__name__}", path=path)
    v = float(x)
    if not math.isfinite(v):
        raise ParseError("non-finite entry", path=path)
    return v


def matrix_from_json(obj, path="$"):
    """Matrix from a row-array or a ``{"rows", "cols", "data"}`` object."""
    if isinstance(obj, dict):
        for key in ("rows", "cols", "data"):
            if key not in obj:
                raise ParseError(f"missing key {key!r}", path=path)
        rows, cols = obj["rows"], obj["cols"]
        if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
            raise ParseError("rows and cols must be positive integers", path=path)
        m = matrix_from_json(obj["data"], path + ".data")
        if m.shape != (rows, cols):
            raise ParseError(f"data is {m.shape[0]}x{m.shape[1]}, header says {rows}x{cols}", path=path)
        return m
    if not isinstance(obj, list) or not obj:
        raise ParseError("expected a nonempty array of rows", path=path)
    out = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise ParseError("expected a nonempty row array", path=f"{path}[{i}]")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"ragged row: {len(row)} entries, expected {width}", path=f"{path}[{i}]")
        out.append([_number(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    return np.array(out, dtype=float)


def parse_matrix_text(text, source="<text>"):
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        return matrix_from_json(_loads(text, source))
    rows = []
    width = None
    first_line = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        row = []
        for match in re.finditer(r"\S+", body):
            token, col = match.group(), match.start() + 1
            try:
                v = float(token)
            except ValueError:
                raise ParseError(f"{source}: not a number: {token!r}", line=lineno, column=col) from None
            if not math.isfinite(v):
                raise ParseError(f"{source}: non-finite entry {token!r}", line=lineno, column=col)
            row.append(v)
        if width is None:
            width, first_line = len(row), lineno
        elif len(row) != width:
            raise ParseError(
                f"{source}: ragged row with {len(row)} entries (line {first_line} has {width})", line=lineno
            )
        rows.append(row)
    if not rows:
        raise ParseError(f"{source}: empty matrix file")
    return np.array(rows, dtype=float)


def read_matrix(path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror}") from None
    return parse_matrix_text(text, str(p))


def matrix_to_json(m):
    m = np.asarray(m, dtype=float)
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]), "data": [[float(x) for x in row] for row in m]}


def write_matrix(path, m):
    Path(path).write_text(json.dumps(matrix_to_json(m)) + "\n", encoding="utf-8")


def format_matrix_text(m):
    return "".join(" ".join(repr(float(x)) for x in row) + "\n" for row in np.asarray(m, dtype=float))


# ---------------------------------------------------------------------------
# MapSpec


def _get(obj, key, path):
    if key not in obj:
        raise ParseError(f"missing key {key!r}", path=path)
    return obj[key]


def spec_from_json(obj, path="$"):
    if not isinstance(obj, dict):
        raise ParseError("map node must be an object", path=path)
    op = _get(obj, "op", path)
    try:
        if op == "leftRight":
            return matmap.left_right(matrix_from_json(_get(obj, "M", path), path + ".M"),
                                     matrix_from_json(_get(obj, "N", path), path + ".N"))
        if op == "congruence":
            return matmap.congruence(matrix_from_json(_get(obj, "A", path), path + ".A"))
        if op == "similarity":
            return matmap.similarity(matrix_from_json(_get(obj, "T", path), path + ".T"))
        if op == "transpose":
            n = _get(obj, "n", path)
            if isinstance(n, bool) or not isinstance(n, int):
                raise ParseError("n must be an integer", path=path + ".n")
            return matmap.transpose(n)
        if op == "traceShift":
            transposed = obj.get("transposed", False)
            if not isinstance(transposed, bool):
                raise ParseError("transposed must be a boolean", path=path + ".transposed")
            return matmap.trace_shift(_number(_get(obj, "alpha", path), path + ".alpha"),
                                      _number(_get(obj, "beta", path), path + ".beta"),
                                      matrix_from_json(_get(obj, "S", path), path + ".S"),
                                      transposed)
        if op == "scale":
            return matmap.scale(_number(_get(obj, "c", path), path + ".c"),
                                spec_from_json(_get(obj, "child", path), path + ".child"))
        if op in ("sum", "compose"):
            children = _get(obj, "children", path)
            if not isinstance(children, list) or not children:
                raise ParseError("children must be a nonempty array", path=path + ".children")
            nodes = [spec_from_json(c, f"{path}.children[{i}]") for i, c in enumerate(children)]
            sizes = {c.size() for c in nodes}
            if len(sizes) != 1:
                raise ParseError(f"children act on different sizes {sorted(sizes)}", path=path + ".children")
            return matmap.sum_of(*nodes) if op == "sum" else matmap.compose(*nodes)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from None
    raise ParseError(f"unknown op {op!r}", path=path + ".op")


def spec_to_json(spec):
    if isinstance(spec, matmap.LeftRight):
        return {"op": "leftRight", "M": spec.M.tolist(), "N": spec.N.tolist()}
    if isinstance(spec, matmap.Congruence):
        return {"op": "congruence", "A": spec.A.tolist()}
    if isinstance(spec, matmap.Similarity):
        return {"op": "similarity", "T": spec.T.tolist()}
    if isinstance(spec, matmap.Transpose):
        return {"op": "transpose", "n": int(spec.n)}
    if isinstance(spec, matmap.TraceShift):
        out = {"op": "traceShift", "alpha": spec.alpha, "beta": spec.beta, "S": spec.S.tolist()}
        if spec.transposed:
            out["transposed"] = True
        return out
    if isinstance(spec, matmap.Scale):
        return {"op": "scale", "c": spec.c, "child": spec_to_json(spec.child)}
    if isinstance(spec, matmap.Sum):
        return {"op": "sum", "children": [spec_to_json(c) for c in spec.children]}
    if isinstance(spec, matmap.Compose):
        return {"op": "compose", "children": [spec_to_json(c) for c in spec.children]}
    raise TypeError(f"not a map spec: {spec!r}")


def load_map(path, tol=None):
    """Read a MapSpec file and build the map (restricted if the root asks)."""
    from .config import DEFAULT

    tol = tol or DEFAULT
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror}") from None
    obj = _loads(text, str(p))
    spec = spec_from_json(obj)
    subspace = obj.get("subspace", matmap.FULL)
    if subspace not in (matmap.FULL, matmap.SYMMETRIC):
        raise ParseError(f"unknown subspace {subspace!r}", path="$.subspace")
    L = matmap.build(spec, tol)
    if subspace == matmap.SYMMETRIC:
        L = matmap.restrict_symmetric(L, tol)
    return L
