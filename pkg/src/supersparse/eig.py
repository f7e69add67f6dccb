"""Eigenvalues of Hessenberg companions and residual certificates for their roots."""

from __future__ import annotations

import cmath
import csv
import io
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import mpmath
import numpy as np

from .companion import SparseHessenberg, family_matrix
from .errors import BudgetExceeded, ConvergenceFailure, EvaluationOverflow, NoCompanion
from .poly import FamilyId, family_degree

__all__ = [
    "DEFAULT_DENSE_CAP",
    "RootCloud",
    "ResidualOverflowWarning",
    "eigenvalues",
    "hqr",
    "residual",
    "root_cloud",
    "format_float",
]

DEFAULT_DENSE_CAP = 4096
UNIT_ROUNDOFF = 2.0 ** -53


class ResidualOverflowWarning(RuntimeWarning):
    """Double evaluation overflowed; the residual came from the scaled fallback."""


def _hqr_kernel(a, wr, wi, max_sweeps):
    # In-place Francis double-shift QR on the Hessenberg array ``a``.
    # Returns -1 on success, else the 0-based row that failed to deflate.
    n = a.shape[0]
    eps = 2.220446049250313e-16
    anorm = 0.0
    for i in range(n):
        for j in range(max(i - 1, 0), n):
            anorm += abs(a[i, j])
    nn = n - 1
    t = 0.0
    sweeps = 0
    while nn >= 0:
        its = 0
        while True:
            # look for a single small subdiagonal element
            l = nn
            while l > 0:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= eps * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn - 1] = z
                    wi[nn] = -z
                nn -= 2
                break
            if sweeps >= max_sweeps:
                return nn
            if its > 0 and its % 10 == 0:
                # exceptional shift
                t += x
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                x = 0.75 * s
                y = x
                w = -0.4375 * s * s
            its += 1
            sweeps += 1
            # look for two consecutive small subdiagonal elements
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u <= eps * v:
                    break
                m -= 1
            for i in range(m, nn - 1):
                a[i + 2, i] = 0.0
                if i != m:
                    a[i + 2, i - 1] = 0.0
            # chase the bulge down to row nn
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k + 1 != nn:
                        r = a[k + 2, k - 1]
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
                        a[k, k - 1] = -a[k, k - 1]
                else:
                    a[k, k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                three = k + 1 != nn
                for j in range(k, nn + 1):
                    p = a[k, j] + q * a[k + 1, j]
                    if three:
                        p += r * a[k + 2, j]
                        a[k + 2, j] -= p * z
                    a[k + 1, j] -= p * y
                    a[k, j] -= p * x
                mmin = min(nn, k + 3)
                for i in range(l, mmin + 1):
                    p = x * a[i, k] + y * a[i, k + 1]
                    if three:
                        p += z * a[i, k + 2]
                        a[i, k + 2] -= p * r
                    a[i, k + 1] -= p * q
                    a[i, k] -= p
            if l + 1 >= nn:
                break
    return -1


try:
    from numba import njit
except ImportError:  # pragma: no cover - plain Python fallback is correct but slow
    _hqr_compiled = _hqr_kernel
else:
    _hqr_compiled = njit(cache=True, nogil=True)(_hqr_kernel)


def hqr(a: np.ndarray, max_sweeps: Optional[int] = None) -> np.ndarray:
    """Eigenvalues of a real upper Hessenberg matrix by Francis double-shift QR.

    Eigenvalues only: each bulge-chase step touches just the active window,
    and deflation uses the usual small-subdiagonal test.  Exceptional
    shifts are taken every 10 sweeps without deflation.  The kernel is
    compiled with numba when it is installed.

    Parameters
    ----------
    a : ndarray
        Real upper Hessenberg matrix; it is copied.
    max_sweeps : int, optional
        Total QR sweep budget, ``40 * n`` by default.

    Raises
    ------
    ConvergenceFailure
        When the budget runs out; ``index`` is the 1-based trailing row that
        failed to deflate.
    """
    a = np.array(a, dtype=np.float64, copy=True, order="C")
    n = a.shape[0]
    if max_sweeps is None:
        max_sweeps = 40 * max(n, 1)
    wr = np.zeros(n)
    wi = np.zeros(n)
    stuck = _hqr_compiled(a, wr, wi, int(max_sweeps))
    if stuck >= 0:
        raise ConvergenceFailure(
            f"QR did not deflate row {stuck + 1} within {max_sweeps} sweeps", int(stuck) + 1
        )
    return wr + 1j * wi


def eigenvalues(
    m: Union[SparseHessenberg, np.ndarray],
    method: str = "francis",
    dense_cap: int = DEFAULT_DENSE_CAP,
) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix.

    ``method="francis"`` runs :func:`hqr` on real matrices; complex matrices
    and ``method="lapack"`` go through ``numpy.linalg.eigvals``.

    Raises
    ------
    BudgetExceeded
        If the order exceeds ``dense_cap``.
    ConvergenceFailure
        From :func:`hqr`.
    """
    if isinstance(m, SparseHessenberg):
        n = m.dim
        complex_entries = any(isinstance(v, complex) for v in m.entries.values())
        arr = m.to_numpy(complex if complex_entries else float)
    else:
        arr = np.asarray(m)
        n = arr.shape[0]
    if n > dense_cap:
        raise BudgetExceeded(f"dimension {n} is above the dense eigensolver cap {dense_cap}")
    if n == 0:
        return np.zeros(0, dtype=complex)
    if method == "lapack" or np.iscomplexobj(arr):
        return np.linalg.eigvals(arr).astype(complex)
    if method != "francis":
        raise ValueError(f"unknown method {method!r}")
    return hqr(arr)


def _log_add1(x: float) -> float:
    # log(exp(x) + 1) without overflow
    if x == -math.inf:
        return 0.0
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


def _log_phi(id: FamilyId, lam: complex) -> float:
    # the recurrence run on magnitudes, in logarithms
    rec = id.recurrence
    logphi = [-math.inf if b == 0 else 0.0 for b in rec.bases]
    log_abs = math.log(abs(lam)) if lam != 0 else -math.inf
    while len(logphi) <= id.n:
        m = len(logphi) - 1
        logphi.append(_log_add1(rec.z_power * log_abs + sum(logphi[m - lag] for lag in rec.lags)))
    return logphi[id.n]


def _log_abs_value(id: FamilyId, lam: complex) -> float:
    rec = id.recurrence
    vals = [complex(b) for b in rec.bases]
    while len(vals) <= id.n:
        m = len(vals) - 1
        v = lam ** rec.z_power if rec.z_power != 1 else lam
        for lag in rec.lags:
            v = v * vals[m - lag]
        v = v + 1
        if not cmath.isfinite(v):
            raise EvaluationOverflow(f"recurrence overflowed at step {m + 1}")
        vals.append(v)
    v = vals[id.n]
    return -math.inf if v == 0 else math.log(abs(v))


def _log_abs_value_scaled(id: FamilyId, lam: complex) -> float:
    rec = id.recurrence
    with mpmath.workprec(53):
        lam_mp = mpmath.mpc(lam)
        vals = [mpmath.mpc(b) for b in rec.bases]
        while len(vals) <= id.n:
            m = len(vals) - 1
            v = lam_mp ** rec.z_power
            for lag in rec.lags:
                v = v * vals[m - lag]
            vals.append(v + 1)
        v = vals[id.n]
        return -math.inf if v == 0 else float(mpmath.log(abs(v)))


def residual(id: FamilyId, lam: complex) -> float:
    """Backward-error style residual of ``lam`` as a root of a family member.

    The recurrence is evaluated at ``lam`` in complex double arithmetic and
    the same recurrence is run on magnitudes (``|lam|`` and the magnitudes
    of the factors) to get a scale ``phi``.  The result is
    ``|value| / (u * phi)`` with ``u = 2**-53``; values of order one (up to
    a few thousand for large members) certify ``lam``.

    The magnitude recurrence is carried in logarithms.  If the double
    evaluation itself overflows, it is redone with a 53-bit mantissa and
    unbounded exponent and a :class:`ResidualOverflowWarning` is issued.
    """
    if family_degree(id) < 1:
        raise NoCompanion(f"{id} is constant; it has no roots")
    lam = complex(lam)
    try:
        log_v = _log_abs_value(id, lam)
    except EvaluationOverflow:
        warnings.warn(
            f"double evaluation of {id} overflowed at {lam}; using scaled fallback",
            ResidualOverflowWarning,
            stacklevel=2,
        )
        log_v = _log_abs_value_scaled(id, lam)
    if log_v == -math.inf:
        return 0.0
    expo = log_v - math.log(UNIT_ROUNDOFF) - _log_phi(id, lam)
    return math.exp(expo) if expo < 700 else math.inf


def format_float(x: float) -> str:
    """Shortest round-trip decimal, without a trailing ``.0`` on integers."""
    x = float(x)
    if x == 0.0:
        return "0"
    if x.is_integer() and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


@dataclass(frozen=True)
class RootCloud:
    """Computed roots with residual certificates, sorted by ``(re, im, residual)``."""

    roots: tuple
    source: str
    dim: int

    def __post_init__(self):
        if len(self.roots) != self.dim:
            raise ValueError(f"{len(self.roots)} roots for a dimension {self.dim} problem")

    @classmethod
    def from_values(cls, values: Iterable[complex], residuals: Iterable[float], source="custom"):
        triples = sorted(
            (float(z.real), float(z.imag), float(r)) for z, r in zip(values, residuals)
        )
        return cls(tuple(triples), str(source), len(triples))

    @property
    def values(self) -> np.ndarray:
        return np.array([complex(re, im) for re, im, _ in self.roots], dtype=complex)

    @property
    def residuals(self) -> np.ndarray:
        return np.array([r for _, _, r in self.roots], dtype=float)

    def max_residual(self) -> float:
        return max((r for _, _, r in self.roots), default=0.0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("re,im,residual\n")
        for re, im, r in self.roots:
            buf.write(f"{format_float(re)},{format_float(im)},{format_float(r)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, source="custom") -> "RootCloud":
        """Parse the ``re,im,residual`` format.

        Raises
        ------
        ValueError
            Naming the 1-based line of the first malformed row.
        """
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["re", "im", "residual"]:
            raise ValueError("line 1: expected header 're,im,residual'")
        roots = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields, got {len(row)}")
            try:
                re, im, r = (float(x) for x in row)
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric field in {','.join(row)!r}") from None
            roots.append((re, im, r))
        return cls(tuple(roots), str(source), len(roots))


def root_cloud(id: FamilyId, method: str = "francis", dense_cap: int = DEFAULT_DENSE_CAP) -> RootCloud:
    """Eigenvalues of ``family_matrix(id)`` with per-root residuals, sorted."""
    d = family_degree(id)
    if d > dense_cap:
        raise BudgetExceeded(f"{id} has dimension {d}, above the dense eigensolver cap {dense_cap}")
    m = family_matrix(id)
    lams = eigenvalues(m.to_float(), method=method, dense_cap=dense_cap)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResidualOverflowWarning)
        res = [residual(id, lam) for lam in lams]
    return RootCloud.from_values(lams, res, source=str(id))
