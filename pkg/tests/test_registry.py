import os

import numpy as np
import pytest

from frontallab import example_definition, example_names, example_surface, parse_surface_text
from frontallab.errors import UnknownExampleError
from frontallab.expr import eval_expression, expr_to_string, parse_expression
from frontallab.frontal import FrameBundle, eval_values


@pytest.mark.parametrize("name", example_names())
def test_registry_entries_satisfy_frontal_condition(name):
    # every built-in passes the frontal-condition grid check on load
    s = example_surface(name)
    ulo, uhi = s.internal_u_range
    vlo, vhi = s.internal_v_range
    uu, vv = np.meshgrid(
        np.linspace(ulo + 0.05, uhi - 0.05, 9),
        np.linspace(vlo + 0.05, vhi - 0.05, 9),
        indexing="ij",
    )

    def extract(b: FrameBundle) -> dict:
        return {
            "fu_nu": np.abs(np.asarray(b.fu.dot(b.nu).value)),
            "fv_nu": np.abs(np.asarray(b.fv.dot(b.nu).value)),
            "unit": np.abs(np.linalg.norm(b.nu.value, axis=-1) - 1.0),
        }

    vals = eval_values(s, uu, vv, extract)
    assert max(v.max() for v in vals.values()) < 1e-9


def test_registry_definitions_reparse(tmp_path):
    for name in example_names():
        text = example_definition(name)
        s = parse_surface_text(text)
        assert s.name == name


def test_unknown_example():
    with pytest.raises(UnknownExampleError):
        example_surface("nonexistent")


def test_thread_env_var_does_not_change_results():
    s = example_surface("paper-52")
    uu, vv = np.meshgrid(np.linspace(-0.3, 0.3, 13), np.linspace(-0.3, 0.3, 13), indexing="ij")

    def extract(b: FrameBundle) -> dict:
        return {"K": np.asarray(b.gauss.value)}

    baseline = eval_values(s, uu, vv, extract)["K"]
    os.environ["FRONTAL_LAB_THREADS"] = "3"
    try:
        threaded = eval_values(s, uu, vv, extract)["K"]
    finally:
        del os.environ["FRONTAL_LAB_THREADS"]
    assert np.array_equal(baseline, threaded)


def test_printed_expressions_evaluate_identically():
    import random

    rng = random.Random(77)
    texts = ["u*v^2 + v^5/5", "sin(u)/(2 + cos(v))", "-(u + v)^3*exp(v/3)"]
    for text in texts:
        e1 = parse_expression(text)
        e2 = parse_expression(expr_to_string(e1))
        for _ in range(10):
            u0, v0 = rng.uniform(-1, 1), rng.uniform(-1, 1)
            assert eval_expression(e1, {"u": u0, "v": v0}) == eval_expression(
                e2, {"u": u0, "v": v0}
            )
