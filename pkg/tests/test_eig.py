import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest

from supersparse import (
    FamilyId,
    FloatHessenberg,
    RootCloud,
    SparseHessenberg,
    compose,
    eigenvalues,
    family_matrix,
    family_poly,
    newton_example,
    residual,
    root_cloud,
)
from supersparse.eig import ResidualOverflowWarning, format_float, hqr
from supersparse.errors import BudgetExceeded, ConvergenceFailure, NoCompanion

from conftest import conjugate_pairing_error, matched_distance

H = SparseHessenberg.from_dense


def cardano_real_root(p, q):
    """Real root of x^3 + p x + q with positive discriminant term."""
    d = math.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    return cbrt(-q / 2 + d) + cbrt(-q / 2 - d)


def cbrt(x):
    return math.copysign(abs(x) ** (1 / 3), x)


def oracle_roots(fid):
    coeffs = [int(c) for c in reversed(family_poly(fid).coeffs)]
    with mpmath.workdps(60):
        return [complex(r) for r in mpmath.polyroots(coeffs, maxsteps=400, extraprec=400)]


class TestEigenvalues:
    def test_cube_roots_of_unity(self):
        lam = eigenvalues(compose(H([[0]]), H([[0]]), -1).to_float())
        want = [cmath.exp(2j * math.pi * k / 3) for k in range(3)]
        assert matched_distance(lam, want) < 1e-14

    def test_newton(self):
        lam = eigenvalues(newton_example())
        x = cardano_real_root(-2.0, -5.0)
        # remaining pair from deflating x^3 - 2x - 5 by (x - x0)
        pair = np.roots([1.0, x, x * x - 2.0])
        assert matched_distance(lam, [x, *pair]) < 1e-12
        real = lam[np.argmin(np.abs(lam.imag))]
        assert abs(real.real - 2.0945514815423265) <= 1e-10
        assert abs(pair[0].real + 1.0472757) < 1e-6
        assert abs(abs(pair[0].imag) - 1.1359375) < 1e-5  # quoted value is rounded

    def test_one_by_one(self):
        assert list(eigenvalues(H([[-1]]).to_float())) == [-1]

    def test_empty(self):
        assert eigenvalues(SparseHessenberg(0).to_float()).size == 0

    def test_complex_entries_use_lapack(self):
        m = FloatHessenberg(2, {(1, 1): 1j, (2, 1): 1.0, (2, 2): 2.0})
        assert matched_distance(eigenvalues(m), [1j, 2]) < 1e-14

    def test_lapack_method_agrees(self):
        m = family_matrix(FamilyId("narayana", 16)).to_float()
        assert matched_distance(eigenvalues(m), eigenvalues(m, method="lapack")) < 1e-10

    def test_dense_cap(self):
        with pytest.raises(BudgetExceeded):
            eigenvalues(family_matrix(FamilyId("mandelbrot", 6)).to_float(), dense_cap=10)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            eigenvalues(H([[1, 2], [1, 1]]).to_float(), method="jacobi")

    def test_convergence_failure_reports_index(self):
        a = family_matrix(FamilyId("mandelbrot", 6)).to_numpy(float)
        with pytest.raises(ConvergenceFailure) as info:
            hqr(a, max_sweeps=5)
        assert 1 <= info.value.index <= a.shape[0]

    def test_deterministic(self):
        m = family_matrix(FamilyId("fibonacci", 10)).to_float()
        assert np.array_equal(eigenvalues(m), eigenvalues(m))

    @pytest.mark.parametrize("seed", range(5))
    def test_random_hessenberg_vs_lapack(self, seed):
        rng = np.random.default_rng(seed)
        a = np.triu(rng.standard_normal((40, 40)), -1)
        assert matched_distance(hqr(a), np.linalg.eigvals(a)) < 1e-9


class TestResidual:
    def test_exact_root(self):
        assert residual(FamilyId("mandelbrot", 2), -1) == 0

    def test_cube_root_certified(self):
        w = cmath.exp(2j * math.pi / 3)
        assert residual(FamilyId("narayana", 5), w) <= 10

    def test_non_root_rejected(self):
        assert residual(FamilyId("mandelbrot", 3), 0) > 1e15

    def test_constant_member(self):
        with pytest.raises(NoCompanion):
            residual(FamilyId("narayana", 3), 0.5)

    def test_overflow_fallback_warns(self):
        with pytest.warns(ResidualOverflowWarning):
            r = residual(FamilyId("mandelbrot", 14), 10.0)
        assert r > 1e15

    def test_no_overflow_near_roots_of_large_members(self):
        cloud = root_cloud(FamilyId("mandelbrot", 9))
        with warnings.catch_warnings():
            warnings.simplefilter("error", ResidualOverflowWarning)
            assert all(residual(FamilyId("mandelbrot", 9), z) < 1e4 for z in cloud.values)


class TestRootCloud:
    def test_narayana_4(self):
        c = root_cloud(FamilyId("narayana", 4))
        assert c.roots == ((-1.0, 0.0, 0.0),)
        assert c.dim == 1

    def test_mandelbrot_4(self):
        fid = FamilyId("mandelbrot", 4)
        c = root_cloud(fid)
        assert c.dim == 7
        assert c.max_residual() <= 1e3
        assert matched_distance(c.values, oracle_roots(fid)) <= 1e-8

    def test_narayana_20(self):
        c = root_cloud(FamilyId("narayana", 20))
        assert c.dim == 871
        assert conjugate_pairing_error(c.values) <= 1e-8

    def test_sorted(self):
        c = root_cloud(FamilyId("fibonacci", 9))
        keys = [(re, im, r) for re, im, r in c.roots]
        assert keys == sorted(keys)

    def test_source(self):
        fid = FamilyId("mandelbrot", 3)
        assert root_cloud(fid).source == str(fid)

    def test_lapack_cloud(self):
        c = root_cloud(FamilyId("narayana", 12), method="lapack")
        assert c.dim == 40 and c.max_residual() < 1e4

    def test_cap(self):
        with pytest.raises(BudgetExceeded):
            root_cloud(FamilyId("mandelbrot", 8), dense_cap=100)

    def test_length_invariant(self):
        with pytest.raises(ValueError):
            RootCloud(((0.0, 0.0, 0.0),), "custom", 2)


class TestCsv:
    def test_round_trip(self):
        c = root_cloud(FamilyId("narayana", 10))
        back = RootCloud.from_csv(c.to_csv())
        assert back.roots == c.roots

    def test_header_and_formatting(self):
        text = root_cloud(FamilyId("mandelbrot", 2)).to_csv()
        assert text == "re,im,residual\n-1,0,0\n"

    def test_header_only(self):
        assert RootCloud.from_csv("re,im,residual\n").dim == 0

    def test_bad_header(self):
        with pytest.raises(ValueError, match="line 1"):
            RootCloud.from_csv("x,y\n")

    def test_malformed_row(self):
        with pytest.raises(ValueError, match="line 3"):
            RootCloud.from_csv("re,im,residual\n1,2,3\na,b\n")
        with pytest.raises(ValueError, match="line 2"):
            RootCloud.from_csv("re,im,residual\na,b,c\n")

    def test_format_float(self):
        assert format_float(-0.0) == "0"
        assert format_float(3.0) == "3"
        assert format_float(0.1) == "0.1"
        assert float(format_float(1 / 3)) == 1 / 3


class TestAgreementSmallDims:
    @pytest.mark.parametrize(
        "name,top", [("mandelbrot", 6), ("fibonacci", 8), ("narayana", 11), ("quartics", 3)]
    )
    def test_matches_polyroots(self, name, top):
        for n in range(top + 1):
            fid = FamilyId(name, n)
            try:
                c = root_cloud(fid)
            except NoCompanion:
                continue
            assert c.dim <= 32
            assert matched_distance(c.values, oracle_roots(fid)) <= 1e-8
