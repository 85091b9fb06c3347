"""Text format for algebras and modules.

    # comments run to the end of a line
    field: GF(32003)
    vars: x, y
    relations:
      x*y
      x^4 - y^2
    module M: quotient x, y^2
    module N: matrix
      x, y
      0, x

``inverse_system: <polynomial>`` replaces the relations block.  The dual
polynomial may use the ring variables or their upper-case forms.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraError, LocalAlgebra, Presentation, build_algebra, from_inverse_system
from .linalg import Field, parse_field
from .polynomials import ParseError, Poly, parse_poly


@dataclass
class ModuleSpec:
    name: str
    kind: str  # "quotient" or "matrix"
    entries: list  # quotient: [Poly]; matrix: [[Poly]] by rows
    line: int = 0


@dataclass
class RingFile:
    field: Field
    names: tuple
    relations: list | None = None
    inverse_system: Poly | None = None
    modules: dict = field(default_factory=dict)


_HEADER = re.compile(r"^(field|vars|relations|inverse_system|module)\b\s*(.*)$")
_MODULE = re.compile(r"^module\s+([A-Za-z_][A-Za-z_0-9]*)\s*:\s*(quotient|matrix)\b\s*(.*)$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _poly_at(text: str, names, lineno: int, col0: int) -> Poly:
    try:
        return parse_poly(text, names)
    except ParseError as exc:
        col = (exc.column or 1) + col0
        msg = str(exc).split(": ", 1)[-1] if exc.line is not None or exc.column is not None else str(exc)
        raise ParseError(msg, line=lineno, column=col) from None


def _split_commas(text: str, col0: int):
    """Comma-separated pieces with their starting columns (0-based offsets)."""
    out = []
    start = 0
    for part in text.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), col0 + start + lead))
        start += len(part) + 1
    return out


def parse_ring_file(text: str) -> RingFile:
    lines = text.splitlines()
    fld = None
    names = None
    relations = None
    inverse = None
    modules: dict = {}
    i = 0

    def block(start):
        """Indented continuation lines after a header."""
        out = []
        j = start
        while j < len(lines):
            raw = lines[j]
            body = _strip(raw)
            if not body.strip():
                j += 1
                continue
            if not raw[:1].isspace():
                break
            out.append((j + 1, body, len(body) - len(body.lstrip())))
            j += 1
        return out, j

    while i < len(lines):
        raw = lines[i]
        body = _strip(raw)
        lineno = i + 1
        if not body.strip():
            i += 1
            continue
        if raw[:1].isspace():
            raise ParseError("unexpected indented line", line=lineno, column=1)
        m = _HEADER.match(body)
        if not m:
            raise ParseError(f"unknown directive {body.split(':')[0]!r}", line=lineno, column=1)
        key, rest = m.group(1), m.group(2)
        if key != "module":
            if not rest.startswith(":"):
                raise ParseError(f"expected ':' after {key!r}", line=lineno, column=len(key) + 1)
            value = rest[1:]
            vcol = body.index(":") + 1
        if key == "field":
            try:
                fld = parse_field(value)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno, column=vcol + 2) from None
            i += 1
        elif key == "vars":
            names = tuple(n.strip() for n in value.split(",") if n.strip())
            bad = [n for n in names if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n)]
            if bad or not names:
                raise ParseError(f"invalid variable list {value.strip()!r}", line=lineno, column=vcol + 2)
            if len(set(names)) != len(names):
                raise ParseError("repeated variable name", line=lineno, column=vcol + 2)
            i += 1
        elif key == "relations":
            if names is None:
                raise ParseError("'vars' must come before 'relations'", line=lineno, column=1)
            if relations is not None:
                raise ParseError("repeated 'relations' block", line=lineno, column=1)
            rows, i = block(i + 1)
            relations = []
            if value.strip():
                relations.append(_poly_at(value, names, lineno, vcol))
            relations += [_poly_at(b, names, ln, 0) for ln, b, _ in rows]
        elif key == "inverse_system":
            if names is None:
                raise ParseError("'vars' must come before 'inverse_system'", line=lineno, column=1)
            dual = names
            if any(re.search(rf"\b{re.escape(n.upper())}\b", value) for n in names) and len({n.upper() for n in names}) == len(names):
                dual = tuple(n.upper() for n in names)
            inverse = _poly_at(value, dual, lineno, vcol)
            i += 1
        else:
            mm = _MODULE.match(body)
            if not mm:
                raise ParseError("expected 'module <name>: quotient ...' or 'module <name>: matrix'", line=lineno, column=1)
            if names is None:
                raise ParseError("'vars' must come before modules", line=lineno, column=1)
            name, kind, tail = mm.groups()
            if name in modules:
                raise ParseError(f"module {name!r} defined twice", line=lineno, column=8)
            tail_col = mm.start(3)
            if kind == "quotient":
                entries = [_poly_at(t, names, lineno, c) for t, c in _split_commas(tail, tail_col) if t]
                modules[name] = ModuleSpec(name, kind, entries, lineno)
                i += 1
            else:
                rows, i = block(i + 1)
                matrix = [[_poly_at(t, names, ln, c) for t, c in _split_commas(b, 0)] for ln, b, _ in rows]
                if not matrix:
                    raise ParseError("matrix module needs at least one row", line=lineno, column=1)
                width = {len(r) for r in matrix}
                if len(width) != 1:
                    raise ParseError("matrix rows have different lengths", line=rows[0][0], column=1)
                modules[name] = ModuleSpec(name, kind, matrix, lineno)
    if fld is None:
        raise ParseError("missing 'field' line", line=1, column=1)
    if names is None:
        raise ParseError("missing 'vars' line", line=1, column=1)
    if relations is not None and inverse is not None:
        raise ParseError("give either 'relations' or 'inverse_system', not both", line=1, column=1)
    if relations is None and inverse is None:
        raise ParseError("missing 'relations' or 'inverse_system'", line=1, column=1)
    return RingFile(fld, names, relations, inverse, modules)


def format_ring_file(rf: RingFile) -> str:
    out = [f"field: {rf.field}", "vars: " + ", ".join(rf.names)]
    if rf.inverse_system is not None:
        out.append("inverse_system: " + rf.inverse_system.format([n.upper() for n in rf.names]))
    else:
        out.append("relations:")
        out += ["  " + f.format(rf.names) for f in rf.relations]
    for spec in rf.modules.values():
        if spec.kind == "quotient":
            out.append(f"module {spec.name}: quotient " + ", ".join(f.format(rf.names) for f in spec.entries))
        else:
            out.append(f"module {spec.name}: matrix")
            out += ["  " + ", ".join(f.format(rf.names) for f in row) for row in spec.entries]
    return "\n".join(out) + "\n"


def algebra_from_file(rf: RingFile, n_max: int = 64) -> LocalAlgebra:
    if rf.inverse_system is not None:
        return from_inverse_system(rf.field, rf.names, rf.inverse_system)
    return build_algebra(Presentation(rf.field, rf.names, tuple(rf.relations)), n_max=n_max)


def module_from_spec(A: LocalAlgebra, spec: ModuleSpec):
    from .resolution import PresentedModule

    if spec.kind == "quotient":
        els = [A.evaluate(f) for f in spec.entries]
        if not els:
            return PresentedModule.free(A, 1)
        return PresentedModule.quotient(A, np.array(els, dtype=A.field.dtype))
    rows = spec.entries
    mat = A.field.zeros((len(rows), len(rows[0]), A.dim))
    for r, row in enumerate(rows):
        for c, f in enumerate(row):
            mat[r, c] = A.evaluate(f)
    return PresentedModule(A, mat)


def load(path) -> tuple[RingFile, LocalAlgebra]:
    with open(path, encoding="utf-8") as fh:
        rf = parse_ring_file(fh.read())
    return rf, algebra_from_file(rf)


def ring_file_from_algebra(A: LocalAlgebra, names=None) -> RingFile:
    """A minimal presentation of A written as a ring file."""
    from .algebra import presentation_of

    P = presentation_of(A, names)
    return RingFile(A.field, tuple(P.names), list(P.relations))
