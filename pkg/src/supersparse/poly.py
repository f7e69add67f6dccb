"""Exact dense univariate polynomials and the four family recurrences.

Coefficients are stored in ascending order (``coeffs[k]`` multiplies ``z**k``)
as Python integers, or :class:`fractions.Fraction` when a rational
coefficient is unavoidable.  The zero polynomial is the empty tuple.
"""

from __future__ import annotations

import enum
import json
import math
import os
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Optional, Sequence

from .errors import DegreeCapExceeded, EvaluationOverflow

__all__ = [
    "BigPoly",
    "Family",
    "FamilyId",
    "DEFAULT_DEGREE_CAP",
    "degree_cap",
    "poly_add",
    "poly_mul",
    "family_poly",
    "family_degree",
    "family_degrees",
    "poly_eval_complex",
]

DEFAULT_DEGREE_CAP = 200_000

# Operand length above which integer products go through Kronecker substitution.
_KRONECKER_THRESHOLD = 24

UNIT_ROUNDOFF = 2.0 ** -53


def _exact(c) -> int | Fraction:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _exact(Fraction(c.numerator, c.denominator))
    if isinstance(c, str):
        return _exact(Fraction(c))
    raise TypeError(f"polynomial coefficients must be exact rationals, got {type(c).__name__}")


class BigPoly:
    """Immutable polynomial with exact coefficients in ascending order.

    Parameters
    ----------
    coeffs : iterable
        Integers, fractions or ``"p/q"`` strings; ``coeffs[k]`` multiplies
        ``z**k``.  Trailing zeros are dropped.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_exact(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: tuple) -> "BigPoly":
        # Trusted constructor: coeffs already exact and canonical.
        obj = cls.__new__(cls)
        obj._coeffs = coeffs
        return obj

    @classmethod
    def constant(cls, c) -> "BigPoly":
        return cls((c,))

    @classmethod
    def z(cls) -> "BigPoly":
        return cls._raw((0, 1))

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    @property
    def degree(self) -> Optional[int]:
        """Degree, or ``None`` for the zero polynomial (degree minus infinity)."""
        return len(self._coeffs) - 1 if self._coeffs else None

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_monic(self) -> bool:
        return bool(self._coeffs) and self._coeffs[-1] == 1

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self._coeffs)

    def height(self):
        """Largest coefficient magnitude (0 for the zero polynomial)."""
        return max((abs(c) for c in self._coeffs), default=0)

    def __len__(self):
        return len(self._coeffs)

    def __getitem__(self, k):
        return self._coeffs[k]

    def __iter__(self):
        return iter(self._coeffs)

    def __eq__(self, other):
        if isinstance(other, BigPoly):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == BigPoly.constant(other)._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self._coeffs)

    def __neg__(self):
        return BigPoly._raw(tuple(-c for c in self._coeffs))

    def __add__(self, other):
        if not isinstance(other, BigPoly):
            other = BigPoly.constant(other)
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, BigPoly):
            other = BigPoly.constant(other)
        return poly_add(self, -other)

    def __rsub__(self, other):
        return BigPoly.constant(other) - self

    def __mul__(self, other):
        if not isinstance(other, BigPoly):
            c = _exact(other)
            if c == 0:
                return BigPoly()
            return BigPoly._raw(tuple(_exact(x * c) for x in self._coeffs))
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result, base = BigPoly.constant(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, k: int = 1) -> "BigPoly":
        """Multiply by ``z**k``."""
        if not self._coeffs:
            return self
        return BigPoly._raw((0,) * k + self._coeffs)

    def __call__(self, x):
        """Exact Horner evaluation at a rational (or any numeric) point."""
        acc = 0
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"BigPoly({list(self._coeffs)!r})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        terms = []
        for k in range(len(self._coeffs) - 1, -1, -1):
            c = self._coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = "z" if k == 1 else f"z^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        return {"degree": self.degree, "coeffs": [str(c) for c in self._coeffs]}

    @classmethod
    def from_dict(cls, data: dict) -> "BigPoly":
        poly = cls(Fraction(c) for c in data["coeffs"])
        if "degree" in data and data["degree"] != poly.degree:
            raise ValueError(
                f"declared degree {data['degree']} does not match coefficients (degree {poly.degree})"
            )
        return poly

    @classmethod
    def from_json(cls, text: str) -> "BigPoly":
        return cls.from_dict(json.loads(text))


def poly_add(p: BigPoly, q: BigPoly) -> BigPoly:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = _exact(out[i] + c)
    while out and out[-1] == 0:
        out.pop()
    return BigPoly._raw(tuple(out))


def _schoolbook(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _pack(coeffs: Sequence[int], nbytes: int, half: int) -> int:
    # Bias every digit into [0, 2**k) so the bytes can be concatenated directly.
    buf = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * len(coeffs), "little")
    return int.from_bytes(buf, "little") - bias


def _kronecker(a: Sequence[int], b: Sequence[int]) -> list:
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)
    length = len(a) + len(b) - 1
    if a is b:
        prod = _pack(a, nbytes, half) ** 2
    else:
        prod = _pack(a, nbytes, half) * _pack(b, nbytes, half)
    prod += int.from_bytes(half.to_bytes(nbytes, "little") * length, "little")
    raw = prod.to_bytes(nbytes * length, "little")
    return [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(length)
    ]


def poly_mul(p: BigPoly, q: BigPoly) -> BigPoly:
    """Exact product.

    Integer operands longer than a small threshold are multiplied by
    Kronecker substitution, which hands the convolution to CPython's
    big-integer multiply.
    """
    a, b = p.coeffs, q.coeffs
    if not a or not b:
        return BigPoly()
    if (
        min(len(a), len(b)) > _KRONECKER_THRESHOLD
        and p.is_integral()
        and q.is_integral()
    ):
        out = _kronecker(a, b)
    else:
        out = _schoolbook(a, b)
    return BigPoly(out)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


class Family(enum.Enum):
    MANDELBROT = "mandelbrot"
    FIBONACCI = "fibonacci"
    NARAYANA = "narayana"
    QUARTICS = "quartics"

    @classmethod
    def parse(cls, token) -> "Family":
        if isinstance(token, Family):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            names = ", ".join(f.value for f in cls)
            raise ValueError(f"unknown family {token!r} (expected one of {names})") from None


@dataclass(frozen=True)
class _Recurrence:
    # t_{n+1} = z**z_power * prod(t_{n - lag} for lag in lags) + 1
    bases: tuple
    lags: tuple
    z_power: int


_RECURRENCES = {
    Family.MANDELBROT: _Recurrence(bases=(0,), lags=(0, 0), z_power=1),
    Family.FIBONACCI: _Recurrence(bases=(0, 1), lags=(0, 1), z_power=1),
    Family.NARAYANA: _Recurrence(bases=(0, 1, 1), lags=(0, 2), z_power=1),
    Family.QUARTICS: _Recurrence(bases=(0,), lags=(0, 0, 0, 0), z_power=3),
}


@dataclass(frozen=True)
class FamilyId:
    """A member of one of the recurrence families, e.g. ``FamilyId("narayana", 36)``."""

    family: Family
    n: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise ValueError(f"family index must be a nonnegative integer, got {self.n!r}")

    @property
    def recurrence(self) -> _Recurrence:
        return _RECURRENCES[self.family]

    def __str__(self):
        return f"{self.family.value}[{self.n}]"


def degree_cap() -> int:
    """Degree cap for coefficient expansion; ``COMPANION_DEGREE_CAP`` overrides the default."""
    env = os.environ.get("COMPANION_DEGREE_CAP")
    return int(env) if env else DEFAULT_DEGREE_CAP


def family_degrees(family, n: int) -> list:
    """Degrees of members ``0..n`` by the integer recurrence; ``None`` marks the zero polynomial."""
    rec = _RECURRENCES[Family.parse(family)]
    degs: list = [None if b == 0 else 0 for b in rec.bases]
    while len(degs) <= n:
        m = len(degs) - 1
        parts = [degs[m - lag] for lag in rec.lags]
        if any(d is None for d in parts):
            # product vanishes, member is the constant 1
            degs.append(0)
        else:
            degs.append(rec.z_power + sum(parts))
    return degs[: n + 1]


def family_degree(id: FamilyId) -> int:
    """Degree of a family member without expanding coefficients (0 for constants)."""
    d = family_degrees(id.family, id.n)[id.n]
    return 0 if d is None else d


@lru_cache(maxsize=32)
def _family_poly_cached(family: Family, n: int) -> BigPoly:
    rec = _RECURRENCES[family]
    seq = [BigPoly.constant(b) for b in rec.bases]
    one = BigPoly.constant(1)
    while len(seq) <= n:
        m = len(seq) - 1
        prod = one
        for lag, count in Counter(rec.lags).items():
            prod = prod * seq[m - lag] ** count
        seq.append(prod.shift(rec.z_power) + one)
    return seq[n]


def family_poly(id: FamilyId, cap: Optional[int] = None) -> BigPoly:
    """Expand a family member exactly.

    Raises
    ------
    DegreeCapExceeded
        If the degree (computed first, without expansion) exceeds ``cap``.
    """
    cap = degree_cap() if cap is None else cap
    d = family_degree(id)
    if d > cap:
        raise DegreeCapExceeded(f"{id} has degree {d}, above the cap of {cap}")
    return _family_poly_cached(id.family, id.n)


def poly_eval_complex(p: BigPoly, z: complex) -> tuple:
    """Horner evaluation in complex double arithmetic with a running error bound.

    Returns
    -------
    value : complex
    bound : float
        A first-order bound on ``|value - p(z)|`` accumulated alongside the
        Horner recurrence.

    Raises
    ------
    EvaluationOverflow
        If a coefficient or an intermediate value is not representable.
    """
    z = complex(z)
    if not p.coeffs:
        return 0j, 0.0
    try:
        cs = [complex(float(c)) for c in p.coeffs]
    except OverflowError as exc:
        raise EvaluationOverflow("coefficient exceeds double range") from exc
    az = abs(z)
    y = cs[-1]
    mu = abs(y) / 2
    for c in reversed(cs[:-1]):
        y = z * y + c
        mu = az * mu + abs(y)
    if not (math.isfinite(y.real) and math.isfinite(y.imag) and math.isfinite(mu)):
        raise EvaluationOverflow(f"Horner evaluation overflowed at z={z!r}")
    # complex multiply-add costs a few extra roundings over the real case
    bound = UNIT_ROUNDOFF * (2 * mu - abs(y)) * 2 * math.sqrt(2)
    return y, max(bound, 0.0)
