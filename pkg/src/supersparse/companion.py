"""Sparse upper Hessenberg matrices and the block composition of companions.

Given upper Hessenberg companions ``A`` (for ``a``) and ``B`` (for ``b``),
:func:`compose` returns a companion for ``z*a(z)*b(z) + c0``::

    [  A              -alpha*c0 (corner) ]
    [ -r_a   0                           ]
    [       -c_b      B                  ]

where ``r_a = [0 ... 0 1]``, ``c_b = [1 0 ... 0]^T`` and ``alpha`` is the
reciprocal of the product of all subdiagonal entries of ``A`` and ``B``.
The selector vectors are never stored; they are the two fixed ``-1``
entries placed around the zero pivot.

Indices are 1-based throughout, so ``m[j + 1, j]`` is the subdiagonal entry
usually written ``a_{j+1,j}``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from types import MappingProxyType
from typing import Mapping, Optional

import numpy as np

from .errors import (
    DegreeCapExceeded,
    DegreeZero,
    DimensionTooSmall,
    HessenbergStructureError,
    NoCompanion,
    NotMonic,
)
from .poly import BigPoly, Family, FamilyId, degree_cap, family_degree

__all__ = [
    "SparseHessenberg",
    "FloatHessenberg",
    "CompositionPlan",
    "alpha",
    "compose",
    "compose_single",
    "family_matrix",
    "frobenius_companion",
    "height",
    "entry_set",
    "newton_example",
]


def exact_scalar(v) -> Fraction:
    """Coerce ``v`` to a Fraction, refusing binary floating point input."""
    if isinstance(v, bool):
        return Fraction(int(v))
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    if isinstance(v, str):
        text = v.strip()
        try:
            return Fraction(text)
        except ValueError:
            raise ValueError(f"not an exact rational literal: {v!r}") from None
    raise TypeError(
        f"exact matrices take int, Fraction or 'p/q' strings; got {type(v).__name__} ({v!r})"
    )


def format_scalar(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(v)


class SparseHessenberg:
    """Immutable upper Hessenberg matrix with exact rational entries.

    Parameters
    ----------
    dim : int
        Order of the (square) matrix.  ``0`` is allowed and stands for the
        empty companion of a constant polynomial.
    entries : mapping
        ``{(row, col): value}`` with 1-based indices.  Zero values are
        dropped.  Every position must satisfy ``col >= row - 1`` and every
        subdiagonal position ``(j + 1, j)`` must be present and nonzero.

    Raises
    ------
    HessenbergStructureError
        If an entry lies below the subdiagonal, is out of range, or a
        subdiagonal entry is missing or zero.
    """

    __slots__ = ("_dim", "_entries")

    def __init__(self, dim: int, entries: Mapping = None):
        if int(dim) != dim or dim < 0:
            raise HessenbergStructureError(f"dimension must be a nonnegative integer, got {dim!r}")
        dim = int(dim)
        store = {}
        for (i, j), v in (entries or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise HessenbergStructureError(f"entry ({i},{j}) is outside a {dim}x{dim} matrix")
            if j < i - 1:
                raise HessenbergStructureError(f"entry ({i},{j}) lies below the subdiagonal")
            v = self._coerce(v)
            if v != 0:
                store[(int(i), int(j))] = v
        for j in range(1, dim):
            if (j + 1, j) not in store:
                raise HessenbergStructureError(f"subdiagonal ({j + 1},{j}) is zero")
        self._dim = dim
        self._entries = MappingProxyType(store)

    _coerce = staticmethod(exact_scalar)
    _zero = Fraction(0)

    @classmethod
    def from_dense(cls, rows) -> "SparseHessenberg":
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise HessenbergStructureError("matrix must be square")
        return cls(n, {(i + 1, j + 1): v for i, r in enumerate(rows) for j, v in enumerate(r) if v != 0})

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def entries(self) -> Mapping:
        return self._entries

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key):
        i, j = key
        return self._entries.get((i, j), self._zero)

    def items(self):
        """Stored entries in row-major order."""
        return sorted(self._entries.items())

    def column(self, j: int) -> list:
        """Stored ``(row, value)`` pairs of column ``j``, rows ascending."""
        return sorted((i, v) for (i, jj), v in self._entries.items() if jj == j)

    def subdiagonal(self) -> list:
        return [self._entries[(j + 1, j)] for j in range(1, self._dim)]

    def to_dense(self) -> list:
        out = [[self._zero] * self._dim for _ in range(self._dim)]
        for (i, j), v in self._entries.items():
            out[i - 1][j - 1] = v
        return out

    def to_numpy(self, dtype=float) -> np.ndarray:
        out = np.zeros((self._dim, self._dim), dtype=dtype)
        for (i, j), v in self._entries.items():
            out[i - 1, j - 1] = complex(v) if np.issubdtype(dtype, np.complexfloating) else float(v)
        return out

    def to_float(self) -> "FloatHessenberg":
        return FloatHessenberg(self._dim, {k: float(v) for k, v in self._entries.items()})

    def is_exact(self) -> bool:
        return True

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._dim == other._dim and dict(self._entries) == dict(other._entries)

    def __hash__(self):
        return hash((self._dim, frozenset(self._entries.items())))

    def __repr__(self):
        if self._dim <= 6:
            body = [[format_scalar(v) for v in row] for row in self.to_dense()]
            return f"{type(self).__name__}({body})"
        return f"{type(self).__name__}(dim={self._dim}, nnz={self.nnz})"


def _float_scalar(v):
    if isinstance(v, str):
        v = complex(v.replace(" ", ""))
    c = complex(v)
    return c.real if c.imag == 0 else c


class FloatHessenberg(SparseHessenberg):
    """Upper Hessenberg matrix with real or complex double entries.

    Same structural invariants as :class:`SparseHessenberg`; used for
    companions with irrational entries such as ``[sqrt(2)]``.
    """

    __slots__ = ()
    _coerce = staticmethod(_float_scalar)
    _zero = 0.0

    def to_float(self) -> "FloatHessenberg":
        return self

    def is_exact(self) -> bool:
        return False


class CompositionPlan:
    """The factors ``(a, b, c0)`` of one composition step with its ``alpha``.

    ``b`` may be ``None``, meaning the second factor is the constant 1.
    """

    __slots__ = ("a", "b", "c0", "alpha")

    def __init__(self, a: SparseHessenberg, b: Optional[SparseHessenberg], c0):
        self.a = a
        self.b = b
        cls = _result_type(a) if b is None else _result_type(a, b)
        self.c0 = cls._coerce(c0)
        self.alpha = alpha(a, b)

    def build(self) -> SparseHessenberg:
        if self.b is None:
            return compose_single(self.a, self.c0)
        return compose(self.a, self.b, self.c0)

    def __repr__(self):
        return f"CompositionPlan(a={self.a!r}, b={self.b!r}, c0={self.c0}, alpha={self.alpha})"


def _result_type(*mats):
    return SparseHessenberg if all(m.is_exact() for m in mats) else FloatHessenberg


def alpha(a: SparseHessenberg, b: Optional[SparseHessenberg] = None):
    """Reciprocal of the product of all subdiagonal entries of ``a`` and ``b``.

    Empty products (1x1 factors, or ``b`` absent) contribute 1.  The result
    is a Fraction on the exact path and a float/complex otherwise.
    """
    mats = [a] if b is None else [a, b]
    prod = Fraction(1) if _result_type(*mats) is SparseHessenberg else 1.0
    for m in mats:
        for s in m.subdiagonal():
            prod *= s
    return 1 / prod


def compose(a: SparseHessenberg, b: SparseHessenberg, c0) -> SparseHessenberg:
    """Companion of ``z*a(z)*b(z) + c0`` from companions of ``a`` and ``b``.

    The result has order ``dim(a) + 1 + dim(b)``, with subdiagonal
    ``subdiag(a) + [-1, -1] + subdiag(b)`` and the single corner entry
    ``-alpha*c0`` at ``(1, n)``.  If either factor is a
    :class:`FloatHessenberg` the result is one too.

    Raises
    ------
    DimensionTooSmall
        If either factor has dimension 0.
    """
    da, db = a.dim, b.dim
    if da < 1 or db < 1:
        raise DimensionTooSmall(f"both factors need dimension >= 1, got {da} and {db}")
    cls = _result_type(a, b)
    c0 = cls._coerce(c0)
    n = da + 1 + db
    entries = dict(a.entries)
    entries[(da + 1, da)] = -1
    entries[(da + 2, da + 1)] = -1
    off = da + 1
    for (i, j), v in b.entries.items():
        entries[(i + off, j + off)] = v
    corner = -alpha(a, b) * c0
    if corner != 0:
        entries[(1, n)] = corner
    return cls(n, entries)


def compose_single(a: SparseHessenberg, c0) -> SparseHessenberg:
    """Companion of ``z*a(z) + c0``: ``a`` bordered by one zero pivot.

    The corner entry at ``(1, dim(a) + 1)`` is ``+alpha(a)*c0``; Laplace
    expansion along the last column produces ``c0`` with this sign.

    Raises
    ------
    DimensionTooSmall
        If ``a`` has dimension 0.
    """
    da = a.dim
    if da < 1:
        raise DimensionTooSmall("the factor needs dimension >= 1")
    cls = _result_type(a)
    c0 = cls._coerce(c0)
    entries = dict(a.entries)
    entries[(da + 1, da)] = -1
    corner = alpha(a) * c0
    if corner != 0:
        entries[(1, da + 1)] = corner
    return cls(da + 1, entries)


def _compose_factors(f: Optional[SparseHessenberg], g: Optional[SparseHessenberg], c0):
    # None stands for the constant factor 1 (no companion).
    if f is None and g is None:
        return SparseHessenberg(1, {(1, 1): -exact_scalar(c0)})
    if g is None:
        return compose_single(f, c0)
    if f is None:
        return compose_single(g, c0)
    return compose(f, g, c0)


def _seven_block(s: SparseHessenberg) -> SparseHessenberg:
    """Four copies of ``s`` chained by zero pivots, corner ``-1``.

    Companion of ``z**3 * s(z)**4 + 1`` when ``s`` has an all ``-1``
    subdiagonal (then every alpha in the nested composition is 1).
    """
    d = s.dim
    if any(v != -1 for v in s.subdiagonal()):
        raise HessenbergStructureError("seven-block layout needs an all -1 subdiagonal")
    n = 4 * d + 3
    entries = {}
    for k in range(4):
        off = k * (d + 1)
        for (i, j), v in s.entries.items():
            entries[(i + off, j + off)] = v
        if k:
            entries[(off, off - 1)] = -1
            entries[(off + 1, off)] = -1
    entries[(1, n)] = -1
    return SparseHessenberg(n, entries)


_ZERO = object()


@lru_cache(maxsize=16)
def _family_matrices(family: Family, n: int) -> tuple:
    rec = FamilyId(family, 0).recurrence
    # _ZERO: the zero polynomial; None: the constant 1; otherwise a companion
    seq: list = [_ZERO if b == 0 else None for b in rec.bases]
    while len(seq) <= n:
        m = len(seq) - 1
        factors = [seq[m - lag] for lag in rec.lags]
        if any(f is _ZERO for f in factors):
            seq.append(None)
        elif family is Family.QUARTICS:
            s = factors[0]
            if s is None:
                half = _compose_factors(None, None, 0)
                seq.append(compose(half, half, 1))
            else:
                seq.append(_seven_block(s))
        else:
            seq.append(_compose_factors(factors[0], factors[1], 1))
    return tuple(seq)


def family_matrix(id: FamilyId, cap: Optional[int] = None) -> SparseHessenberg:
    """Supersparse companion of a family member, built by recursive composition.

    Raises
    ------
    NoCompanion
        If the member is a constant polynomial.
    DegreeCapExceeded
        If the order would exceed ``cap`` (default: :func:`degree_cap`).
    """
    d = family_degree(id)
    if d < 1:
        raise NoCompanion(f"{id} is a constant polynomial; constant polynomial has no companion")
    cap = degree_cap() if cap is None else cap
    if d > cap:
        raise DegreeCapExceeded(f"{id} has degree {d}, above the cap of {cap}")
    return _family_matrices(id.family, id.n)[id.n]


def frobenius_companion(p: BigPoly) -> SparseHessenberg:
    """Classical companion: unit subdiagonal, negated coefficients in the last column."""
    if p.degree is None or p.degree < 1:
        raise DegreeZero("a companion needs degree >= 1")
    if not p.is_monic():
        raise NotMonic(f"leading coefficient is {p.coeffs[-1]}, expected 1")
    d = p.degree
    entries = {(j + 1, j): 1 for j in range(1, d)}
    for i in range(1, d + 1):
        if p[i - 1] != 0:
            entries[(i, d)] = -p[i - 1]
    return SparseHessenberg(d, entries)


def height(m: SparseHessenberg):
    """Largest entry magnitude (0 when nothing is stored)."""
    return max((abs(v) for v in m.entries.values()), default=m._zero)


def entry_set(m: SparseHessenberg) -> set:
    """Distinct entry values, including 0 whenever some position is unstored."""
    vals = set(m.entries.values())
    if m.nnz < m.dim * m.dim:
        vals.add(m._zero)
    return vals


def newton_example() -> FloatHessenberg:
    """Companion of ``x**3 - 2x - 5`` from the factors ``x - sqrt(2)`` and ``x + sqrt(2)``."""
    r2 = math.sqrt(2.0)
    return compose(FloatHessenberg(1, {(1, 1): r2}), FloatHessenberg(1, {(1, 1): -r2}), -5)
