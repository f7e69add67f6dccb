"""Shared oracles and helpers.

The oracles here deliberately avoid the package's own polynomial and
determinant code so they can check it independently.
"""

import random
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from supersparse import SparseHessenberg


# -- naive polynomial arithmetic on plain lists (ascending) ---------------------


def naive_convolution(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i in range(len(a)):
        for j in range(len(b)):
            out[i + j] += a[i] * b[j]
    while out and out[-1] == 0:
        out.pop()
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _pscale(a, c):
    return [x * c for x in a] if c != 0 else []


def brute_force_charpoly(dense):
    """det(zI - M) by cofactor expansion over the polynomial ring, memoised on row subsets.

    Entries of zI - M are polynomials [ -m_ij ] or [ -m_ii, 1 ].
    """
    n = len(dense)

    def entry(i, j):
        e = [-Fraction(dense[i][j])]
        if i == j:
            e = [e[0], Fraction(1)]
        while e and e[-1] == 0:
            e.pop()
        return e

    @lru_cache(maxsize=None)
    def minor(col, rows):
        # determinant of the submatrix with the given rows and columns col..n-1
        if col == n:
            return (Fraction(1),)
        total = []
        for pos, r in enumerate(rows):
            e = entry(r, col)
            if not e:
                continue
            rest = rows[:pos] + rows[pos + 1:]
            term = naive_convolution(e, list(minor(col + 1, rest)))
            total = _padd(total, term if pos % 2 == 0 else _pscale(term, -1))
        return tuple(total)

    return [x for x in minor(0, tuple(range(n)))]


def random_rational_hessenberg(rng: random.Random, dim: int, integer=False):
    entries = {}
    for i in range(1, dim + 1):
        for j in range(max(1, i - 1), dim + 1):
            if j == i - 1:
                entries[(i, j)] = rng.choice([-2, -1, 1, 2])
            else:
                q = 1 if integer else rng.choice([1, 2, 3])
                entries[(i, j)] = Fraction(rng.randint(-3 * q, 3 * q), q)
    return SparseHessenberg(dim, entries)


def random_c0(rng: random.Random, integer=False):
    q = 1 if integer else rng.choice([1, 2, 3])
    return Fraction(rng.randint(-5 * q, 5 * q), q)


def matched_distance(x, y):
    """Largest distance after optimal one-to-one matching of two point sets."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    assert x.shape == y.shape
    if x.size == 0:
        return 0.0
    cost = np.abs(x[:, None] - y[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def conjugate_pairing_error(values):
    """Largest distance between each root and its optimally matched conjugate."""
    v = np.asarray(values, dtype=complex)
    return matched_distance(v, np.conj(v))


# -- acceptance summary ---------------------------------------------------------

ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    entry = {"id": None, "text": "", "passed": False}

    def _set(cid, text):
        entry["id"], entry["text"] = cid, text

    yield _set
    rep = getattr(request.node, "rep_call", None)
    entry["passed"] = bool(rep and rep.passed)
    if entry["id"] is not None:
        ACCEPTANCE_RESULTS.append(entry)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for e in sorted(ACCEPTANCE_RESULTS, key=lambda e: e["id"]):
        mark = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(f"[{mark}] AC{e['id']}: {e['text']}")
