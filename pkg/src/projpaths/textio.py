"""Plain-text matrix and path files.

Matrix file::

    R 2 2
    1 0
    0 0

The header is ``<field> <rows> <cols>`` with field ``R`` or ``C``. Complex
entries are written ``a,b`` for ``a + bi``. Numbers are rendered with 17
significant digits so every finite double survives a round trip.

Path file::

    PATH projector 3 R 2
    t 0
    <2 x 2 matrix body>
    t 0.5
    ...

Blank lines are ignored in both formats.
"""

from pathlib import Path

import numpy as np

from . import linalg as la
from .errors import ParseError, ShapeMismatch
from .homotopy import PathKind, SampledPath


def _fmt(x):
    return format(float(x), ".17g")


def _render_body(M):
    if np.iscomplexobj(M):
        rows = [" ".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in row) for row in M]
    else:
        rows = [" ".join(_fmt(x) for x in row) for row in M]
    return "\n".join(rows) + "\n"


def render_matrix(M):
    M = np.asarray(M)
    return f"{la.field_of(M).value} {M.shape[0]} {M.shape[1]}\n" + _render_body(M)


def render_path(path):
    out = [f"PATH {path.kind.value} {len(path)} {path.field.value} {path.n}\n"]
    for t, M in zip(path.times, path.matrices):
        out.append(f"t {_fmt(t)}\n")
        out.append(_render_body(M))
    return "".join(out)


def _lines(text):
    return [(i, line.split()) for i, line in enumerate(text.splitlines(), 1) if line.strip()]


def _parse_float(token, lineno):
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"bad number {token!r}", lineno) from None
    if not np.isfinite(x):
        raise ParseError(f"non-finite entry {token!r}", lineno)
    return x


def _parse_field(token, lineno):
    try:
        return la.FieldTag(token)
    except ValueError:
        raise ParseError(f"field must be R or C, got {token!r}", lineno) from None


def _parse_dim(token, lineno, what):
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno) from None
    if v <= 0:
        raise ParseError(f"{what} must be positive", lineno)
    return v


def _parse_body(lines, pos, fld, rows, cols):
    if pos + rows > len(lines):
        last = lines[-1][0] if lines else 1
        raise ParseError(f"expected {rows} matrix rows, file ends early", last)
    M = np.zeros((rows, cols), dtype=fld.dtype)
    for r in range(rows):
        lineno, toks = lines[pos + r]
        if len(toks) != cols:
            raise ParseError(f"expected {cols} entries, found {len(toks)}", lineno)
        for c, tok in enumerate(toks):
            if fld is la.FieldTag.COMPLEX:
                parts = tok.split(",")
                if len(parts) != 2:
                    raise ParseError(f"complex entry must be 'a,b', got {tok!r}", lineno)
                M[r, c] = complex(_parse_float(parts[0], lineno), _parse_float(parts[1], lineno))
            else:
                if "," in tok:
                    raise ParseError(f"complex entry {tok!r} in a real matrix", lineno)
                M[r, c] = _parse_float(tok, lineno)
    return M, pos + rows


def parse_matrix(text):
    lines = _lines(text)
    if not lines:
        raise ParseError("empty matrix file", 1)
    lineno, head = lines[0]
    if len(head) != 3:
        raise ParseError("header must be '<field> <rows> <cols>'", lineno)
    fld = _parse_field(head[0], lineno)
    rows = _parse_dim(head[1], lineno, "rows")
    cols = _parse_dim(head[2], lineno, "cols")
    M, pos = _parse_body(lines, 1, fld, rows, cols)
    if pos != len(lines):
        raise ParseError("trailing content after matrix", lines[pos][0])
    return M


def parse_path(text):
    lines = _lines(text)
    if not lines:
        raise ParseError("empty path file", 1)
    lineno, head = lines[0]
    if len(head) != 5 or head[0] != "PATH":
        raise ParseError("header must be 'PATH <kind> <count> <field> <n>'", lineno)
    try:
        kind = PathKind(head[1])
    except ValueError:
        raise ParseError(f"unknown path kind {head[1]!r}", lineno) from None
    count = _parse_dim(head[2], lineno, "count")
    fld = _parse_field(head[3], lineno)
    n = _parse_dim(head[4], lineno, "n")
    times, mats = [], []
    pos = 1
    for _ in range(count):
        if pos >= len(lines):
            raise ParseError(f"expected {count} samples, file ends early", lines[-1][0])
        lineno, toks = lines[pos]
        if len(toks) != 2 or toks[0] != "t":
            raise ParseError("sample must start with 't <value>'", lineno)
        t = _parse_float(toks[1], lineno)
        if times and t <= times[-1]:
            raise ParseError("sample times must increase strictly", lineno)
        times.append(t)
        M, pos = _parse_body(lines, pos + 1, fld, n, n)
        mats.append(M)
    if pos != len(lines):
        raise ParseError("trailing content after last sample", lines[pos][0])
    if times[0] != 0 or times[-1] != 1:
        raise ParseError("sample times must run from 0 to 1", lines[0][0])
    try:
        return SampledPath(kind, np.array(times), np.array(mats))
    except (ValueError, ShapeMismatch) as exc:
        raise ParseError(str(exc), lines[0][0]) from None


def read_matrix(path):
    return parse_matrix(Path(path).read_text())


def write_matrix(path, M):
    Path(path).write_text(render_matrix(M))


def read_path(path):
    return parse_path(Path(path).read_text())


def write_path(path, sampled):
    Path(path).write_text(render_path(sampled))
