"""frontal-lab: geometry of frontal surfaces with pure-frontal singular points.

Computes geometric invariants along singular curves, builds the normal
congruence / normal ruled surface / focal surfaces, classifies their
singularities, and verifies the underlying identities numerically.
"""

from .config import Tolerances, DEFAULT_TOL, DEFAULT_ORDER
from . import errors
from .jets import Jet2, JetVec3, lift, deflate_v, compose, apply_analytic, int_pow
from .expr import Expr, parse_expression, eval_expression, expr_to_string
from .surfaces import SurfaceDef, parse_surface_file, parse_surface_text
from .registry import example_names, example_surface, example_definition

__version__ = "0.1.0"

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DEFAULT_ORDER",
    "errors",
    "Jet2",
    "JetVec3",
    "lift",
    "deflate_v",
    "compose",
    "apply_analytic",
    "int_pow",
    "Expr",
    "parse_expression",
    "eval_expression",
    "expr_to_string",
    "SurfaceDef",
    "parse_surface_file",
    "parse_surface_text",
    "example_names",
    "example_surface",
    "example_definition",
]
