"""JSON documents for diagrams, representations, torsors, complexes and matrices.

Every document carries ``"format"`` and ``"version"``. Scalars are integers
or fraction strings such as ``"-3/4"``; floats and decimal strings are
rejected so that nothing is silently rounded. Problems are reported with
JSON-pointer paths.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .diagram import Diagram, GradedRepresentation, ProductStructure, Representation
from .field import format_scalar, parse_scalar
from .linalg import Matrix

__all__ = [
    "VERSION",
    "InputError",
    "SchemaError",
    "load_json",
    "parse_document",
    "parse_diagram",
    "emit_diagram",
    "parse_torsor",
    "emit_torsor",
    "parse_complex",
    "emit_complex",
    "parse_matrix",
    "emit_matrix",
    "parse_matrix_list",
    "parse_pairing",
    "emit_pairing",
    "parse_monoid",
    "emit_monoid",
    "schema_path",
]

VERSION = 1


class InputError(Exception):
    """Unreadable or malformed input (CLI exit status 2)."""


class SchemaError(InputError):
    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{p or '/'}: {m}" for p, m in errors))


def schema_path() -> Path:
    return Path(__file__).with_name("data") / "schema.json"


def _esc(key) -> str:
    return str(key).replace("~", "~0").replace("/", "~1")


def load_json(path) -> object:
    """Read JSON from a path (``-`` for stdin); syntax errors name line and column."""
    import sys
    try:
        text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


class _Ctx:
    def __init__(self):
        self.errors: list[tuple[str, str]] = []

    def err(self, ptr: str, msg: str):
        self.errors.append((ptr, msg))

    def done(self):
        if self.errors:
            raise SchemaError(self.errors)


def _scalar(ctx: _Ctx, x, ptr: str):
    if isinstance(x, bool) or isinstance(x, float):
        ctx.err(ptr, f"expected an integer or fraction string, got {json.dumps(x)}")
        return None
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_scalar(x)
        except ValueError as exc:
            ctx.err(ptr, str(exc))
            return None
    ctx.err(ptr, f"expected a scalar, got {type(x).__name__}")
    return None


def _matrix(ctx: _Ctx, data, ptr: str, shape=None):
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        ctx.err(ptr, "expected a list of rows")
        return None
    rows = len(data)
    cols = len(data[0]) if data else (shape[1] if shape else 0)
    if shape is not None:
        if rows != shape[0] or (rows and cols != shape[1]):
            ctx.err(ptr, f"expected shape {shape[0]}x{shape[1]}, got {rows}x{cols}")
            return None
        cols = shape[1]
    out = []
    ok = True
    for i, r in enumerate(data):
        if len(r) != cols:
            ctx.err(f"{ptr}/{i}", f"row has {len(r)} entries, expected {cols}")
            ok = False
            continue
        row = [_scalar(ctx, x, f"{ptr}/{i}/{j}") for j, x in enumerate(r)]
        if any(v is None for v in row):
            ok = False
        out.append(row)
    return Matrix(out, rows=rows, cols=cols) if ok else None


def emit_matrix(M: Matrix) -> list:
    return [[format_scalar(x) for x in r] for r in M.data]


def parse_matrix(data, ptr: str = "") -> Matrix:
    ctx = _Ctx()
    M = _matrix(ctx, data, ptr)
    ctx.done()
    return M


def parse_matrix_list(data, ptr: str = "") -> list[Matrix]:
    ctx = _Ctx()
    if not isinstance(data, list):
        ctx.err(ptr, "expected a list of matrices")
        ctx.done()
    out = [_matrix(ctx, m, f"{ptr}/{k}") for k, m in enumerate(data)]
    ctx.done()
    return out


def _header(ctx: _Ctx, doc, kind: str):
    if not isinstance(doc, dict):
        ctx.err("", "document must be a JSON object")
        ctx.done()
    if doc.get("format") != f"diagcat/{kind}":
        ctx.err("/format", f"expected \"diagcat/{kind}\", got {json.dumps(doc.get('format'))}")
        ctx.done()
    if doc.get("version") != VERSION:
        ctx.err("/version", f"unsupported version {json.dumps(doc.get('version'))}")


def parse_document(doc, kind: str | None = None):
    """Dispatch on ``format``."""
    fmt = doc.get("format") if isinstance(doc, dict) else None
    parsers = {"diagcat/diagram": parse_diagram, "diagcat/torsor": parse_torsor,
               "diagcat/complex": parse_complex, "diagcat/pairing": parse_pairing,
               "diagcat/monoid": parse_monoid}
    if kind is not None and fmt != f"diagcat/{kind}":
        raise SchemaError([("/format", f"expected \"diagcat/{kind}\", got {json.dumps(fmt)}")])
    if fmt not in parsers:
        raise SchemaError([("/format", f"unknown format {json.dumps(fmt)}")])
    return parsers[fmt](doc)


# -- diagrams ----------------------------------------------------------------

def emit_diagram(D: Diagram, reps=(), P: ProductStructure | None = None) -> dict:
    """Document for D, its representations (identity edges omitted) and product."""
    doc = {
        "format": "diagcat/diagram",
        "version": VERSION,
        "vertices": {v: D.grade(v) for v in D.sorted_vertices()},
        "edges": [{"id": e, "src": D.edges[e][0], "dst": D.edges[e][1]}
                  for e in sorted(D.edges) if not D.is_identity(e)],
        "identities": {v: D.identities[v] for v in sorted(D.identities)},
        "representations": [],
    }
    for T in reps:
        r = {"dims": {v: T.dims[v] for v in sorted(T.dims)},
             "maps": {e: emit_matrix(m) for e, m in sorted(T.mats.items())
                      if not D.is_identity(e) or not m.is_identity()}}
        if isinstance(T, GradedRepresentation) and T.tau:
            r["tau"] = [{"pair": [f, g], "matrix": emit_matrix(m)}
                        for (f, g), m in sorted(T.tau.items())]
        doc["representations"].append(r)
    if P is not None:
        doc["product"] = {
            "table": [[f, g, h] for (f, g), h in sorted(P.table.items())],
            "alpha": [[f, g, e] for (f, g), e in sorted(P.alpha.items())],
            "beta": [[f, g, h, e] for (f, g, h), e in sorted(P.beta.items())],
            "unit": P.unit,
            "unit_edges": dict(sorted(P.unit_edges.items())),
            "left": [[c, g, e] for (c, g), e in sorted(P.left.items())],
            "right": [[g, c, e] for (g, c), e in sorted(P.right.items())],
        }
    return doc


def _str_list(ctx, x, n, ptr):
    if not isinstance(x, list) or len(x) != n or not all(isinstance(s, str) for s in x):
        ctx.err(ptr, f"expected a list of {n} strings")
        return None
    return x


def parse_diagram(doc) -> tuple[Diagram, list, ProductStructure | None]:
    """Returns ``(D, representations, product or None)``; raises SchemaError."""
    ctx = _Ctx()
    _header(ctx, doc, "diagram")
    verts = doc.get("vertices")
    grades = {}
    if isinstance(verts, dict):
        for v, g in verts.items():
            if isinstance(g, bool) or not isinstance(g, int):
                ctx.err(f"/vertices/{_esc(v)}", "grade must be an integer")
            else:
                grades[v] = g % 2
    elif isinstance(verts, list):
        for k, v in enumerate(verts):
            if not isinstance(v, str):
                ctx.err(f"/vertices/{k}", "vertex id must be a string")
            else:
                grades[v] = 0
    else:
        ctx.err("/vertices", "expected an object {id: grade} or a list of ids")
    edges = []
    seen = set()
    for k, e in enumerate(doc.get("edges", [])):
        p = f"/edges/{k}"
        if not isinstance(e, dict):
            ctx.err(p, "edge must be an object with id, src, dst")
            continue
        for key in ("id", "src", "dst"):
            if not isinstance(e.get(key), str):
                ctx.err(f"{p}/{key}", "missing or not a string")
        if not all(isinstance(e.get(key), str) for key in ("id", "src", "dst")):
            continue
        if e["id"] in seen:
            ctx.err(f"{p}/id", f"duplicate edge id {e['id']!r}")
        seen.add(e["id"])
        known = True
        for key in ("src", "dst"):
            if e[key] not in grades:
                ctx.err(f"{p}/{key}", f"unknown vertex {e[key]!r}")
                known = False
        if known:
            edges.append((e["id"], e["src"], e["dst"]))
    ids = doc.get("identities", {})
    if not isinstance(ids, dict):
        ctx.err("/identities", "expected an object {vertex: edge id}")
        ids = {}
    good_ids = {}
    for v, e in ids.items():
        if v not in grades:
            ctx.err(f"/identities/{_esc(v)}", f"unknown vertex {v!r}")
        elif not isinstance(e, str):
            ctx.err(f"/identities/{_esc(v)}", "edge id must be a string")
        elif e in seen:
            ctx.err(f"/identities/{_esc(v)}", f"identity edge {e!r} also listed as an edge")
        else:
            edges.append((e, v, v))
            good_ids[v] = e
    # keep going with the well-formed part so later problems are reported too
    try:
        D = Diagram.build(grades, edges, identities=good_ids)
    except ValueError as exc:
        ctx.err("/edges", str(exc))
        ctx.done()
    reps = []
    raw = doc.get("representations", [])
    if not isinstance(raw, list):
        ctx.err("/representations", "expected a list")
        raw = []
    for k, r in enumerate(raw):
        p = f"/representations/{k}"
        if not isinstance(r, dict):
            ctx.err(p, "expected an object")
            continue
        dims = {}
        rd = r.get("dims", {})
        if not isinstance(rd, dict):
            ctx.err(f"{p}/dims", "expected an object {vertex: dimension}")
            rd = {}
        for v in D.sorted_vertices():
            n = rd.get(v)
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                ctx.err(f"{p}/dims/{_esc(v)}", "missing or not a non-negative integer")
            else:
                dims[v] = n
        for v in rd:
            if v not in D.vertices:
                ctx.err(f"{p}/dims/{_esc(v)}", f"unknown vertex {v!r}")
        mats = {}
        rm = r.get("maps", {})
        if not isinstance(rm, dict):
            ctx.err(f"{p}/maps", "expected an object {edge: matrix}")
            rm = {}
        for e, m in rm.items():
            if e not in D.edges:
                ctx.err(f"{p}/maps/{_esc(e)}", f"unknown edge {e!r}")
                continue
            s, t = D.edges[e]
            if s in dims and t in dims:
                M = _matrix(ctx, m, f"{p}/maps/{_esc(e)}", (dims[t], dims[s]))
                if M is not None:
                    mats[e] = M
        for e in D.non_identity_edges():
            if e not in rm:
                ctx.err(f"{p}/maps", f"no matrix for edge {e!r}")
        tau = {}
        for j, item in enumerate(r.get("tau", [])):
            q = f"{p}/tau/{j}"
            pair = _str_list(ctx, item.get("pair") if isinstance(item, dict) else None, 2,
                             f"{q}/pair")
            if pair is None:
                continue
            f, g = pair
            if f not in dims or g not in dims:
                ctx.err(f"{q}/pair", "unknown vertex")
                continue
            h = None
            prod = doc.get("product", {})
            for row in prod.get("table", []) if isinstance(prod, dict) else []:
                if isinstance(row, list) and row[:2] == [f, g] and len(row) == 3:
                    h = row[2]
            if h not in dims:
                ctx.err(f"{q}/pair", f"{f} x {g} is not in the product table")
                continue
            M = _matrix(ctx, item.get("matrix"), f"{q}/matrix", (dims[f] * dims[g], dims[h]))
            if M is not None:
                tau[(f, g)] = M
        if "tau" in r or "product" in doc:
            reps.append(GradedRepresentation.build(D, dims, mats, tau))
        else:
            reps.append(Representation.build(D, dims, mats))
    P = _parse_product(ctx, doc, D) if "product" in doc else None
    ctx.done()
    return D, reps, P


def _parse_product(ctx: _Ctx, doc, D: Diagram) -> ProductStructure | None:
    raw = doc["product"]
    if not isinstance(raw, dict):
        ctx.err("/product", "expected an object")
        return None

    def rows(key, n):
        out = []
        for k, row in enumerate(raw.get(key, [])):
            r = _str_list(ctx, row, n, f"/product/{key}/{k}")
            if r is None:
                continue
            for i, x in enumerate(r[:-1]):
                is_edge = key in ("left", "right") and (i == 0) == (key == "left")
                known = D.edges if is_edge else D.vertices
                if x not in known:
                    ctx.err(f"/product/{key}/{k}/{i}", f"unknown id {x!r}")
            last = r[-1]
            if (key == "table" and last not in D.vertices) or \
                    (key != "table" and last not in D.edges):
                ctx.err(f"/product/{key}/{k}/{n - 1}", f"unknown id {last!r}")
            out.append(r)
        return out

    table = {(f, g): h for f, g, h in rows("table", 3)}
    alpha = {(f, g): e for f, g, e in rows("alpha", 3)}
    beta = {(f, g, h): e for f, g, h, e in rows("beta", 4)}
    left = {(c, g): e for c, g, e in rows("left", 3)}
    right = {(g, c): e for g, c, e in rows("right", 3)}
    unit = raw.get("unit")
    if unit is not None and unit not in D.vertices:
        ctx.err("/product/unit", f"unknown vertex {unit!r}")
    ue = raw.get("unit_edges", {})
    if not isinstance(ue, dict):
        ctx.err("/product/unit_edges", "expected an object")
        ue = {}
    for v, e in ue.items():
        if e not in D.edges:
            ctx.err(f"/product/unit_edges/{_esc(v)}", f"unknown edge {e!r}")
    return ProductStructure(table, alpha, beta, unit, dict(ue), left, right)


# -- torsors -----------------------------------------------------------------

def emit_torsor(X) -> dict:
    return {"format": "diagcat/torsor", "version": VERSION, "table": X.to_list()}


def parse_torsor(doc):
    from .torsor import FiniteTorsor
    ctx = _Ctx()
    _header(ctx, doc, "torsor")
    t = doc.get("table")
    if not isinstance(t, list) or not t:
        ctx.err("/table", "expected a non-empty n x n x n array")
        ctx.done()
    n = len(t)
    for x, plane in enumerate(t):
        if not isinstance(plane, list) or len(plane) != n:
            ctx.err(f"/table/{x}", f"expected {n} rows")
            continue
        for y, row in enumerate(plane):
            if not isinstance(row, list) or len(row) != n:
                ctx.err(f"/table/{x}/{y}", f"expected {n} entries")
                continue
            for z, v in enumerate(row):
                if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                    ctx.err(f"/table/{x}/{y}/{z}", f"expected an element index in 0..{n - 1}")
    ctx.done()
    labels = doc.get("labels", ())
    return FiniteTorsor(tuple(tuple(tuple(r) for r in p) for p in t), tuple(labels))


# -- simplicial complexes ------------------------------------------------------

def emit_complex(X, Y=None, cover=None) -> dict:
    doc = {"format": "diagcat/complex", "version": VERSION,
           "simplices": [list(s) for s in X.maximal()]}
    if Y is not None:
        doc["subcomplex"] = [list(s) for s in Y.maximal()]
    if cover is not None:
        doc["cover"] = [[list(s) for s in U.maximal()] for U in cover]
    return doc


def _simplices(ctx, data, ptr):
    from .simplicial import SimplicialComplex
    if not isinstance(data, list):
        ctx.err(ptr, "expected a list of simplices")
        return None
    out = []
    for k, s in enumerate(data):
        if not isinstance(s, list) or not s or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in s):
            ctx.err(f"{ptr}/{k}", "a simplex is a non-empty list of integer vertices")
            continue
        out.append(s)
    return SimplicialComplex.from_maximal(out)


def parse_complex(doc):
    """Returns ``(X, Y, cover)``; Y defaults to empty and cover to None."""
    from .simplicial import SimplicialComplex
    ctx = _Ctx()
    _header(ctx, doc, "complex")
    X = _simplices(ctx, doc.get("simplices"), "/simplices")
    Y = _simplices(ctx, doc["subcomplex"], "/subcomplex") if "subcomplex" in doc \
        else SimplicialComplex.empty()
    cover = None
    if "cover" in doc:
        if not isinstance(doc["cover"], list):
            ctx.err("/cover", "expected a list of complexes")
        else:
            cover = [_simplices(ctx, U, f"/cover/{k}") for k, U in enumerate(doc["cover"])]
    if X is not None and Y is not None and not Y <= X:
        ctx.err("/subcomplex", "not a subcomplex of the main complex")
    ctx.done()
    return X, Y, cover


# -- pairings and monoids --------------------------------------------------------

def parse_pairing(doc) -> tuple[Matrix, list[Matrix]]:
    """``{"gram": matrix, "points": [matrices]}``; points are optional candidate isometries."""
    ctx = _Ctx()
    _header(ctx, doc, "pairing")
    A = _matrix(ctx, doc.get("gram"), "/gram")
    if A is not None and A.rows != A.cols:
        ctx.err("/gram", f"Gram matrix must be square, got {A.rows}x{A.cols}")
    pts = []
    for k, m in enumerate(doc.get("points", [])):
        X = _matrix(ctx, m, f"/points/{k}", A.shape if A is not None else None)
        if X is not None:
            pts.append(X)
    ctx.done()
    return A, pts


def emit_pairing(A: Matrix, points=()) -> dict:
    doc = {"format": "diagcat/pairing", "version": VERSION, "gram": emit_matrix(A)}
    if points:
        doc["points"] = [emit_matrix(X) for X in points]
    return doc


def parse_monoid(doc) -> tuple[list[Matrix], bool]:
    """``{"matrices": [...]}`` (the monoid itself) or ``{"generators": [...]}``.

    Returns the matrices and whether they are generators still to be closed.
    """
    ctx = _Ctx()
    _header(ctx, doc, "monoid")
    key = "generators" if "generators" in doc else "matrices"
    raw = doc.get(key)
    if not isinstance(raw, list) or not raw:
        ctx.err(f"/{key}", "expected a non-empty list of square matrices")
        ctx.done()
    out = [_matrix(ctx, m, f"/{key}/{k}") for k, m in enumerate(raw)]
    n = out[0].rows if out[0] is not None else None
    for k, M in enumerate(out):
        if M is not None and (M.rows != M.cols or M.rows != n):
            ctx.err(f"/{key}/{k}", f"expected a {n}x{n} matrix")
    ctx.done()
    return out, key == "generators"


def emit_monoid(mats, generators: bool = False) -> dict:
    return {"format": "diagcat/monoid", "version": VERSION,
            "generators" if generators else "matrices": [emit_matrix(M) for M in mats]}
