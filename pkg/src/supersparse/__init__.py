"""Supersparse upper Hessenberg companion matrices.

Builds companions for polynomials ``c(z) = z*a(z)*b(z) + c0`` from
Hessenberg companions of ``a`` and ``b``, instantiates the Mandelbrot,
Fibonacci-Mandelbrot, Narayana-Mandelbrot and quartic ``s`` families,
checks them against exact characteristic polynomials and computes
certified root clouds.
"""

from .charpoly import (
    VerificationReport,
    char_poly_exact,
    verify_composition,
    verify_cramer_v,
    verify_family,
)
from .companion import (
    CompositionPlan,
    FloatHessenberg,
    SparseHessenberg,
    alpha,
    compose,
    compose_single,
    entry_set,
    family_matrix,
    frobenius_companion,
    height,
    newton_example,
)
from .eig import RootCloud, eigenvalues, residual, root_cloud
from .errors import *  # noqa: F401,F403
from .poly import (
    BigPoly,
    Family,
    FamilyId,
    family_degree,
    family_poly,
    poly_add,
    poly_eval_complex,
    poly_mul,
)

__version__ = "0.1.0"
