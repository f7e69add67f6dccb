"""Matrix Market and JSON serialization of Hessenberg matrices and polynomials.

Matrix Market files are written in the ``coordinate real general`` layout.
In exact mode every entry is additionally recorded as a comment line::

    %= <row> <col> <p/q>

placed before the size line.  Ordinary readers skip these comments and see
the double values; :func:`from_mtx` prefers them when present, so rational
entries survive a round trip.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .companion import FloatHessenberg, SparseHessenberg, format_scalar
from .eig import format_float
from .errors import HessenbergStructureError
from .poly import BigPoly

__all__ = [
    "to_mtx",
    "from_mtx",
    "to_json",
    "from_json",
    "write_matrix",
    "read_matrix",
    "poly_to_json",
    "poly_from_json",
]

_BANNER = "%%MatrixMarket matrix coordinate"
_EXACT_TAG = "%="

PathLike = Union[str, Path]


def _double_field(v, is_complex: bool = False) -> str:
    if is_complex:
        v = complex(v)
        return f"{format_float(v.real)} {format_float(v.imag)}"
    return format_float(float(v))


def to_mtx(m: SparseHessenberg, exact: bool = True) -> str:
    """Serialize to Matrix Market text (exact comment lines only for exact matrices)."""
    is_complex = any(isinstance(v, complex) for v in m.entries.values())
    lines = [f"{_BANNER} {'complex' if is_complex else 'real'} general"]
    items = m.items()
    if exact and m.is_exact():
        lines.append("% exact rational entries: '%= row col p/q'")
        lines.extend(f"{_EXACT_TAG} {i} {j} {format_scalar(v)}" for (i, j), v in items)
    lines.append(f"{m.dim} {m.dim} {len(items)}")
    lines.extend(f"{i} {j} {_double_field(v, is_complex)}" for (i, j), v in items)
    return "\n".join(lines) + "\n"


def _is_integral_token(tok: str) -> bool:
    t = tok.lstrip("+-")
    return t.isdigit()


def from_mtx(text: str, exact: Optional[bool] = None) -> SparseHessenberg:
    """Parse Matrix Market coordinate text.

    Parameters
    ----------
    exact : bool, optional
        ``None`` (default) returns an exact matrix when ``%=`` lines are
        present or every value is an integer literal, otherwise a
        :class:`FloatHessenberg`.  ``True`` reads decimal values as exact
        decimals; ``False`` always returns floats.

    Raises
    ------
    HessenbergStructureError
        On structural violations, with the offending position.
    ValueError
        On malformed text, citing the line number.
    """
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith(_BANNER.lower()):
        raise ValueError("line 1: missing '%%MatrixMarket matrix coordinate' banner")
    banner = lines[0].lower().split()
    field = banner[3] if len(banner) > 3 else "real"
    if field not in ("real", "integer", "complex"):
        raise ValueError(f"line 1: unsupported field {field!r}")
    if len(banner) > 4 and banner[4] != "general":
        raise ValueError(f"line 1: only 'general' symmetry is supported, got {banner[4]!r}")

    exact_entries = {}
    size = None
    data = []
    for lineno, line in enumerate(lines[1:], start=2):
        s = line.strip()
        if not s:
            continue
        if s.startswith(_EXACT_TAG):
            parts = s[len(_EXACT_TAG):].split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed exact entry {s!r}")
            try:
                exact_entries[(int(parts[0]), int(parts[1]))] = Fraction(parts[2])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed exact entry {s!r}") from None
            continue
        if s.startswith("%"):
            continue
        parts = s.split()
        if size is None:
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'rows cols nnz'")
            rows, cols, nnz = (int(p) for p in parts)
            if rows != cols:
                raise HessenbergStructureError(f"matrix is {rows}x{cols}, not square")
            size = (rows, nnz)
            continue
        want = 4 if field == "complex" else 3
        if len(parts) != want:
            raise ValueError(f"line {lineno}: expected {want} fields, got {len(parts)}")
        data.append((lineno, parts))
    if size is None:
        raise ValueError("missing size line")
    dim, nnz = size
    if len(data) != nnz:
        raise ValueError(f"size line declares {nnz} entries, found {len(data)}")

    if exact_entries and exact is not False:
        return SparseHessenberg(dim, exact_entries)
    if field == "complex":
        if exact:
            raise ValueError("complex entries cannot be read exactly")
        return FloatHessenberg(
            dim, {(int(p[0]), int(p[1])): complex(float(p[2]), float(p[3])) for _, p in data}
        )
    if exact is None:
        exact = all(_is_integral_token(p[2]) for _, p in data)
    convert = Fraction if exact else float
    entries = {}
    for lineno, p in data:
        try:
            entries[(int(p[0]), int(p[1]))] = convert(p[2])
        except ValueError:
            raise ValueError(f"line {lineno}: non-numeric entry {' '.join(p)!r}") from None
    return (SparseHessenberg if exact else FloatHessenberg)(dim, entries)


def to_json(m: SparseHessenberg) -> str:
    """``{"dim": n, "entries": [[row, col, "p/q"], ...]}``; float matrices store numbers."""
    if m.is_exact():
        entries = [[i, j, format_scalar(v)] for (i, j), v in m.items()]
    else:
        entries = []
        for (i, j), v in m.items():
            entries.append([i, j, [v.real, v.imag] if isinstance(v, complex) else v])
    return json.dumps({"dim": m.dim, "entries": entries})


def from_json(text: str) -> SparseHessenberg:
    data = json.loads(text)
    try:
        dim = data["dim"]
        triples = data["entries"]
    except (KeyError, TypeError):
        raise ValueError("matrix JSON needs 'dim' and 'entries'") from None
    values = [t[2] for t in triples]
    if all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in values):
        return SparseHessenberg(dim, {(int(t[0]), int(t[1])): Fraction(t[2]) for t in triples})
    return FloatHessenberg(dim, {(int(t[0]), int(t[1])): _json_float(t[2]) for t in triples})


def _json_float(v):
    if isinstance(v, list):
        return complex(v[0], v[1])
    if isinstance(v, str):
        return float(Fraction(v))
    return v


def write_matrix(m: SparseHessenberg, path: PathLike, fmt: Optional[str] = None, exact: bool = True) -> None:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "mtx")
    text = to_json(m) + "\n" if fmt == "json" else to_mtx(m, exact=exact)
    path.write_text(text)


def read_matrix(path: PathLike, fmt: Optional[str] = None) -> SparseHessenberg:
    """Read ``.json`` or Matrix Market files, chosen by ``fmt`` or the file suffix."""
    path = Path(path)
    text = path.read_text()
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "mtx")
    return from_json(text) if fmt == "json" else from_mtx(text)


def poly_to_json(p: BigPoly) -> str:
    return p.to_json()


def poly_from_json(text: str) -> BigPoly:
    return BigPoly.from_json(text)
