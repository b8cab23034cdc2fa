"""Built-in example surfaces.

Closed-form fixtures used throughout the test and verification suites:
the degree-5 cuspidal example with exactly known invariants, the helicoid
with fold singularities (entered in its log-reparametrized chart, where the
singular level sits at parameter 0), and the standard singularity germs.
"""
from __future__ import annotations

from .errors import UnknownExampleError
from .surfaces import SurfaceDef, parse_surface_text

_DEFINITIONS: dict[str, tuple[str, str]] = {
    "paper-52": (
        "degree-5 cuspidal edge example with invariants (2, 0, 2, 0, 0, 72) at 0",
        """
        name = "paper-52"
        x = "u"
        y = "u^2 + v^2/2"
        z = "u*v^2 + v^5/5"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "helicoid": (
        "helicoid with a fold curve, log-reparametrized chart: first parameter"
        " is transverse, singular level 0",
        """
        name = "helicoid"
        x = "-cosh(u)*sin(v)"
        y = "cosh(u)*cos(v)"
        z = "v"
        transverse_param = "u"
        singular_value = 0.0
        u_range = [-0.75, 0.75]
        v_range = [-1.1, 1.1]
        """,
    ),
    "cuspidal-edge": (
        "standard cuspidal edge germ (u, v^2, v^3)",
        """
        name = "cuspidal-edge"
        x = "u"
        y = "v^2"
        z = "v^3"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "ccr": (
        "cuspidal cross cap germ (u, v^2, u*v^3)",
        """
        name = "ccr"
        x = "u"
        y = "v^2"
        z = "u*v^3"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "s1-plus": (
        "cuspidal S1+ germ (u, v^2, v^3*(u^2 + v^2))",
        """
        name = "s1-plus"
        x = "u"
        y = "v^2"
        z = "v^3*(u^2 + v^2)"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "s1-minus": (
        "cuspidal S1- germ (u, v^2, v^3*(u^2 - v^2))",
        """
        name = "s1-minus"
        x = "u"
        y = "v^2"
        z = "v^3*(u^2 - v^2)"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "52-germ": (
        "5/2-cuspidal edge germ (u, v^2, v^5)",
        """
        name = "52-germ"
        x = "u"
        y = "v^2"
        z = "v^5"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "fold": (
        "fold germ (u, v^2, 0)",
        """
        name = "fold"
        x = "u"
        y = "v^2"
        z = "0"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
    "72-ccr": (
        "7/2-cuspidal cross cap germ (u, v^2, u*v^5)",
        """
        name = "72-ccr"
        x = "u"
        y = "v^2"
        z = "u*v^5"
        transverse_param = "v"
        singular_value = 0.0
        u_range = [-0.5, 0.5]
        v_range = [-0.5, 0.5]
        """,
    ),
}


def example_names() -> list[str]:
    return list(_DEFINITIONS)


def example_description(name: str) -> str:
    _require(name)
    return _DEFINITIONS[name][0]


def example_definition(name: str) -> str:
    _require(name)
    text = _DEFINITIONS[name][1]
    lines = [line.strip() for line in text.strip().splitlines()]
    return "\n".join(lines) + "\n"


def example_surface(name: str) -> SurfaceDef:
    _require(name)
    return parse_surface_text(example_definition(name), name_hint=name)


def _require(name: str):
    if name not in _DEFINITIONS:
        known = ", ".join(sorted(_DEFINITIONS))
        raise UnknownExampleError(f"unknown example {name!r} (known: {known})")
