import math
import random

import pytest

from frontallab.errors import (
    EvalDomainError,
    ExprSyntaxError,
    SurfaceFileError,
    UnknownIdentifierError,
)
from frontallab.expr import (
    Binary,
    IntPow,
    Unary,
    eval_expression,
    expr_to_string,
    parse_expression,
)
from frontallab.jets import lift
from frontallab.surfaces import parse_surface_text


def test_grammar_example_sum_of_powers():
    e = parse_expression("u^2 + v^2/2")
    assert isinstance(e, Binary) and e.op == "add"
    assert isinstance(e.left, IntPow) and e.left.exponent == 2
    assert isinstance(e.right, Binary) and e.right.op == "div"
    assert isinstance(e.right.left, IntPow)


def test_unary_minus_binds_looser_than_pow():
    e = parse_expression("-u^2")
    assert isinstance(e, Unary) and e.op == "neg"
    assert isinstance(e.arg, IntPow) and e.arg.exponent == 2


def test_unknown_identifier_rejected():
    with pytest.raises(UnknownIdentifierError, match="unknown identifier 'w'"):
        parse_expression("-cosh(w)*sin(v)")


def test_pow_right_associative():
    assert eval_expression(parse_expression("2^3^2"), {}) == pytest.approx(512.0)


def test_negative_integer_exponent():
    e = parse_expression("u^-2")
    assert isinstance(e, IntPow) and e.exponent == -2
    assert eval_expression(e, {"u": 2.0}) == pytest.approx(0.25)


def test_noninteger_exponent_routes_through_exp_log():
    e = parse_expression("u^2.5")
    assert isinstance(e, Unary) and e.op == "exp"
    assert eval_expression(e, {"u": 4.0}) == pytest.approx(32.0)


def test_integer_power_valid_for_negative_base():
    assert eval_expression(parse_expression("u^3"), {"u": -2.0}) == -8.0


def test_syntax_error_reports_offset():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expression("u + + v")
    assert "offset" in str(err.value)
    with pytest.raises(ExprSyntaxError):
        parse_expression("sin u")


def test_eval_desk_values():
    assert eval_expression(parse_expression("u^2 + v^2/2"), {"u": 1.0, "v": 2.0}) == 3.0
    got = eval_expression(parse_expression("u*v^2 + v^5/5"), {"u": 0.3, "v": 0.2})
    assert got == pytest.approx(0.012064, abs=1e-15)


def test_eval_domain_errors():
    with pytest.raises(EvalDomainError):
        eval_expression(parse_expression("sqrt(u)"), {"u": -1.0})
    with pytest.raises(EvalDomainError):
        eval_expression(parse_expression("u/v"), {"u": 1.0, "v": 0.0})
    with pytest.raises(EvalDomainError):
        eval_expression(parse_expression("log(u)"), {"u": 0.0})


def test_named_constants():
    assert eval_expression(parse_expression("pi - e"), {}) == pytest.approx(math.pi - math.e)


# -- random round-trip property ------------------------------------------------


def _random_expr(rng: random.Random, depth: int) -> str:
    if depth == 0:
        return rng.choice(
            ["u", "v", "pi", "e", str(rng.randint(0, 9)), f"{rng.uniform(0.1, 3):.3f}"]
        )
    kind = rng.randrange(6)
    if kind == 0:
        return f"{_random_expr(rng, depth - 1)} + {_random_expr(rng, depth - 1)}"
    if kind == 1:
        return f"{_random_expr(rng, depth - 1)} - {_random_expr(rng, depth - 1)}"
    if kind == 2:
        return f"{_random_expr(rng, depth - 1)}*{_random_expr(rng, depth - 1)}"
    if kind == 3:
        return f"({_random_expr(rng, depth - 1)})/({_random_expr(rng, depth - 1)})"
    if kind == 4:
        fn = rng.choice(["sin", "cos", "tanh", "exp", "atan"])
        return f"{fn}({_random_expr(rng, depth - 1)})"
    return f"-({_random_expr(rng, depth - 1)})^{rng.randint(1, 4)}"


def test_print_parse_print_fixed_point():
    rng = random.Random(1234)
    for _ in range(1000):
        text = _random_expr(rng, rng.randint(1, 3))
        once = expr_to_string(parse_expression(text))
        twice = expr_to_string(parse_expression(once))
        assert once == twice


def test_float_eval_matches_order0_jets_exactly():
    rng = random.Random(99)
    exprs = [
        "u*v^2 + v^5/5",
        "sin(u)*cos(v) + exp(u/4)",
        "sqrt(1 + u^2)/(2 + v)",
        "tanh(u) - atan(v)^3",
        "u^-2 + v^4",
    ]
    for text in exprs:
        e = parse_expression(text)
        for _ in range(20):
            u0 = rng.uniform(0.2, 1.5)
            v0 = rng.uniform(-1.0, 1.0)
            plain = eval_expression(e, {"u": u0, "v": v0})
            jet = eval_expression(
                e, {"u": lift("u", (u0, v0), 0), "v": lift("v", (u0, v0), 0)}
            )
            assert plain == float(jet.value)


# -- surface files ---------------------------------------------------------------

FILE_52 = """
# degree-5 example
name = "paper-52-example"
x = "u"
y = "u^2 + v^2/2"
z = "u*v^2 + v^5/5"
transverse_param = "v"
singular_value = 0.0
u_range = [-0.5, 0.5]
v_range = [-0.5, 0.5]
"""


def test_parse_surface_file_52():
    s = parse_surface_text(FILE_52)
    assert s.name == "paper-52-example"
    assert s.transverse_param == "v"
    assert s.singular_value == 0.0
    assert expr_to_string(s.components[2]) == "u*v^2 + v^5/5"
    assert s.internal_v_range == (-0.5, 0.5)


def test_surface_internal_swap_and_translate():
    text = """
    name = "swapped"
    x = "u"
    y = "v"
    z = "u^2"
    transverse_param = "u"
    singular_value = 1.0
    u_range = [0.5, 1.5]
    v_range = [-2.0, 2.0]
    """
    s = parse_surface_text(text)
    # internal (u, v) maps to file (v + 1, u)
    assert s.file_coords(0.3, -0.2) == (0.8, 0.3)
    assert s.internal_u_range == (-2.0, 2.0)
    assert s.internal_v_range == (-0.5, 0.5)
    p = s.point(0.3, -0.2)
    assert p[0] == pytest.approx(0.8)
    assert p[1] == pytest.approx(0.3)
    assert p[2] == pytest.approx(0.64)


def test_surface_file_missing_key():
    bad = "\n".join(line for line in FILE_52.splitlines() if not line.startswith("z"))
    with pytest.raises(SurfaceFileError, match="'z'"):
        parse_surface_text(bad)


def test_surface_file_malformed_number():
    bad = FILE_52.replace("singular_value = 0.0", "singular_value = zero")
    with pytest.raises(SurfaceFileError, match="malformed number"):
        parse_surface_text(bad)


def test_surface_file_bad_component():
    bad = FILE_52.replace('z = "u*v^2 + v^5/5"', 'z = "u*w"')
    with pytest.raises(SurfaceFileError, match="'z'"):
        parse_surface_text(bad)
