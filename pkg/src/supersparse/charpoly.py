"""Exact characteristic polynomials and executable checks of the composition identity."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .companion import SparseHessenberg, compose, compose_single, exact_scalar, family_matrix
from .errors import BudgetExceeded, NoCompanion, SingularSample
from .poly import BigPoly, FamilyId, family_degree, family_poly

__all__ = [
    "DEFAULT_ORACLE_BUDGET",
    "VerificationReport",
    "char_poly_exact",
    "solve_e1",
    "verify_composition",
    "verify_cramer_v",
    "verify_family",
]

DEFAULT_ORACLE_BUDGET = 128


def _as_int_if_possible(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def char_poly_exact(m: SparseHessenberg) -> BigPoly:
    """``det(zI - m)`` by the Hessenberg column recurrence.

    With ``p_0 = 1`` and ``p_k`` the characteristic polynomial of the
    leading ``k x k`` block::

        p_k = (z - h_kk) p_{k-1} - sum_{i<k} h_ik (h_{i+1,i} ... h_{k,k-1}) p_{i-1}

    Only stored entries of each column are visited.  Integer matrices stay
    in integer arithmetic.
    """
    if not m.is_exact():
        raise TypeError("the exact oracle refuses floating point matrices")
    n = m.dim
    cols: dict = {}
    for (i, j), v in m.entries.items():
        cols.setdefault(j, []).append((i, _as_int_if_possible(v)))
    sub = [None, None] + [_as_int_if_possible(m[j, j - 1]) for j in range(2, n + 1)]

    ps = [[1]]
    for k in range(1, n + 1):
        prev = ps[k - 1]
        col = sorted(cols.get(k, ()), reverse=True)
        # (z - h_kk) * p_{k-1}
        nxt = [0] + prev
        diag = 0
        rest = []
        for i, v in col:
            if i == k:
                diag = v
            elif i < k:
                rest.append((i, v))
        if diag:
            for t, c in enumerate(prev):
                nxt[t] -= diag * c
        # rows above the diagonal, walking upward so the subdiagonal product grows incrementally
        prod = 1
        j = k
        for i, v in rest:
            while j > i:
                prod *= sub[j]
                j -= 1
            w = v * prod
            for t, c in enumerate(ps[i - 1]):
                nxt[t] -= w * c
        ps.append(nxt)
    return BigPoly(ps[n])


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of an exact polynomial comparison; truthy iff it passed."""

    ok: bool
    first_mismatch_degree: Optional[int] = None
    expected: Optional[str] = None
    got: Optional[str] = None
    label: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "first_mismatch_degree": self.first_mismatch_degree,
            "expected": self.expected,
            "got": self.got,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self):
        head = f"{self.label}: " if self.label else ""
        if self.ok:
            return f"{head}ok"
        return (
            f"{head}MISMATCH at z^{self.first_mismatch_degree}: "
            f"expected {self.expected}, got {self.got}"
        )


def _compare(expected: BigPoly, got: BigPoly, label: str = "") -> VerificationReport:
    if expected == got:
        return VerificationReport(True, label=label)
    e, g = expected.coeffs, got.coeffs
    for k in range(max(len(e), len(g))):
        ek = e[k] if k < len(e) else 0
        gk = g[k] if k < len(g) else 0
        if ek != gk:
            return VerificationReport(False, k, str(ek), str(gk), label=label)
    raise AssertionError("unequal polynomials with identical coefficients")


def verify_composition(a: SparseHessenberg, b: Optional[SparseHessenberg], c0) -> VerificationReport:
    """Check ``det(zI - compose(a, b, c0)) == z*a(z)*b(z) + c0`` exactly.

    ``b=None`` checks the one-factor border ``z*a(z) + c0`` instead.
    """
    c0 = exact_scalar(c0)
    pa = char_poly_exact(a)
    if b is None:
        c = compose_single(a, c0)
        expected = pa.shift(1) + c0
    else:
        c = compose(a, b, c0)
        expected = (pa * char_poly_exact(b)).shift(1) + c0
    return _compare(expected, char_poly_exact(c))


def solve_e1(b: SparseHessenberg, z) -> list:
    """Exact solution of ``(zI - b) v = e_1``.

    The nonzero subdiagonal lets every row below the first fix one more
    unknown: set ``w_n = 1``, solve rows ``n..2`` upward for ``w_{n-1}..w_1``,
    then scale by the residual of the first row.

    Raises
    ------
    SingularSample
        If ``zI - b`` is singular.
    """
    z = Fraction(z)
    n = b.dim
    h = {}
    for (i, j), v in b.entries.items():
        h[(i, j)] = -v
    for i in range(1, n + 1):
        h[(i, i)] = h.get((i, i), 0) + z
    rows: dict = {}
    for (i, j), v in h.items():
        if v != 0:
            rows.setdefault(i, []).append((j, v))
    w = [Fraction(0)] * (n + 1)
    w[n] = Fraction(1)
    for i in range(n, 1, -1):
        acc = sum((v * w[j] for j, v in rows.get(i, ()) if j >= i), Fraction(0))
        w[i - 1] = -acc / h[(i, i - 1)]
    s = sum((v * w[j] for j, v in rows.get(1, ())), Fraction(0))
    if s == 0:
        raise SingularSample(f"zI - B is singular at z = {z}")
    return [x / s for x in w[1:]]


def verify_cramer_v(b: SparseHessenberg, z) -> bool:
    """Check that the last entry of ``(zI - b)^{-1} e_1`` is ``prod(subdiag(b)) / b(z)``.

    Raises
    ------
    SingularSample
        If ``z`` is a root of ``b``; pick another sample point.
    """
    z = Fraction(z)
    bz = char_poly_exact(b)(z)
    if bz == 0:
        raise SingularSample(f"z = {z} is a root of the characteristic polynomial")
    prod = Fraction(1)
    for s in b.subdiagonal():
        prod *= s
    v = solve_e1(b, z)[-1]
    return v == prod / bz


def verify_family(id: FamilyId, budget: int = DEFAULT_ORACLE_BUDGET) -> VerificationReport:
    """Compare the exact characteristic polynomial of ``family_matrix(id)`` with ``family_poly(id)``.

    Raises
    ------
    NoCompanion
        For constant members.
    BudgetExceeded
        If the matrix order is above ``budget``.
    """
    d = family_degree(id)
    if d < 1:
        raise NoCompanion(f"{id} is a constant polynomial; constant polynomial has no companion")
    if d > budget:
        raise BudgetExceeded(f"{id} has dimension {d}, above the exact oracle budget {budget}")
    return _compare(family_poly(id), char_poly_exact(family_matrix(id)), label=str(id))
