"""Exact computations with iterated Poisson polynomial algebras and quadratic Poisson fields."""

__version__ = "0.1.0"

from .catalog import FAMILIES, CatalogInstance, FamilyParams, build, draw_instances  # noqa: E402
from .cauchon import DeletionContext, GKResult, gk_normalize, theta, theta_inverse  # noqa: E402
from .errors import HypothesisError, NilpotencyError  # noqa: E402
from .exactalg import LaurentPoly, ScalarVector  # noqa: E402
from .poisson import (BracketTable, IteratedPPASpec, QuadraticSpec, bracket,  # noqa: E402
                      center_lattice, ppa_to_table, verify_jacobi)
from .skewfields import SkewMatrix, apply_congruence, skew_normal_form  # noqa: E402
from .torus import TorusData, verify_thm17  # noqa: E402

__all__ = [
    "FAMILIES", "BracketTable", "CatalogInstance", "DeletionContext", "FamilyParams", "GKResult",
    "HypothesisError", "IteratedPPASpec", "LaurentPoly", "NilpotencyError", "QuadraticSpec",
    "ScalarVector", "SkewMatrix", "TorusData", "apply_congruence", "bracket", "build",
    "center_lattice", "draw_instances", "gk_normalize", "ppa_to_table", "skew_normal_form",
    "theta", "theta_inverse", "verify_jacobi", "verify_thm17",
]
