"""Surface definitions and their internal pre-adapted chart.

A surface file declares a parametrization f(u,v), which parameter direction
is transverse to the singular curve (the null direction), and at which
parameter value the singular level sits.  Internally everything is computed
in a *pre-adapted* chart where the singular set is {v = 0} and the null
direction is d/dv: if the declared transverse parameter is u, the two
parameters are swapped; the singular level is translated to 0.

File format (keyed UTF-8 text, one `key = value` per line, '#' comments):

    name = "paper-52-example"
    x = "u"
    y = "u^2 + v^2/2"
    z = "u*v^2 + v^5/5"
    transverse_param = "v"
    singular_value = 0.0
    u_range = [-0.5, 0.5]
    v_range = [-0.5, 0.5]
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .errors import SurfaceFileError
from .expr import Expr, parse_expression, expr_to_string
from .jets import Jet2, JetVec3, lift
from .config import DEFAULT_ORDER


@dataclass(frozen=True)
class SurfaceDef:
    """A parsed closed-form surface with chart metadata."""

    name: str
    components: tuple[Expr, Expr, Expr]
    transverse_param: str  # "u" or "v": the declared null direction
    singular_value: float
    u_range: tuple[float, float]
    v_range: tuple[float, float]

    def __post_init__(self):
        if self.transverse_param not in ("u", "v"):
            raise SurfaceFileError(
                f"transverse_param must be 'u' or 'v', got {self.transverse_param!r}"
            )

    # -- internal chart ------------------------------------------------------
    # internal (u, v): singular set {v = 0}, null direction d/dv

    @property
    def swapped(self) -> bool:
        return self.transverse_param == "u"

    @property
    def internal_u_range(self) -> tuple[float, float]:
        return self.v_range if self.swapped else self.u_range

    @property
    def internal_v_range(self) -> tuple[float, float]:
        lo, hi = self.u_range if self.swapped else self.v_range
        s = self.singular_value
        return (lo - s, hi - s)

    def file_coords(self, u, v):
        """Map internal chart coordinates to the declared file chart."""
        if self.swapped:
            return v + self.singular_value, u
        return u, v + self.singular_value

    def eval_jets(self, bind_u: Jet2, bind_v: Jet2) -> JetVec3:
        """Evaluate the three components over internal-chart jet bindings."""
        from .expr import eval_expression

        fu, fv = self.file_coords(bind_u, bind_v)
        bindings = {"u": fu, "v": fv}
        x, y, z = (eval_expression(c, bindings) for c in self.components)
        return JetVec3(x, y, z)

    def jets_at(self, u, v, order: int = DEFAULT_ORDER) -> JetVec3:
        bu = lift("u", (u, v), order)
        bv = lift("v", (u, v), order)
        return self.eval_jets(bu, bv)

    def point(self, u, v):
        """Image point of internal coordinates (plain float evaluation)."""
        return self.jets_at(u, v, order=0).value

    def definition_text(self) -> str:
        lines = [
            f'name = "{self.name}"',
            f'x = "{expr_to_string(self.components[0])}"',
            f'y = "{expr_to_string(self.components[1])}"',
            f'z = "{expr_to_string(self.components[2])}"',
            f'transverse_param = "{self.transverse_param}"',
            f"singular_value = {self.singular_value}",
            f"u_range = [{self.u_range[0]}, {self.u_range[1]}]",
            f"v_range = [{self.v_range[0]}, {self.v_range[1]}]",
        ]
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# file parsing

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.+?)\s*$")
_REQUIRED = ("x", "y", "z", "transverse_param", "singular_value")


def _parse_scalar(key: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise SurfaceFileError(f"malformed number for key {key!r}: {raw!r}") from None


def _parse_interval(key: str, raw: str) -> tuple[float, float]:
    m = re.fullmatch(r"\[\s*([^,\]]+)\s*,\s*([^,\]]+)\s*\]", raw)
    if not m:
        raise SurfaceFileError(f"malformed interval for key {key!r}: {raw!r}")
    lo, hi = _parse_scalar(key, m.group(1)), _parse_scalar(key, m.group(2))
    if not lo < hi:
        raise SurfaceFileError(f"empty interval for key {key!r}: [{lo}, {hi}]")
    return lo, hi


def _parse_string(key: str, raw: str) -> str:
    m = re.fullmatch(r'"([^"]*)"', raw)
    if not m:
        raise SurfaceFileError(f"value for key {key!r} must be a quoted string, got {raw!r}")
    return m.group(1)


def parse_surface_text(text: str, name_hint: str = "unnamed") -> SurfaceDef:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if not m:
            raise SurfaceFileError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = m.group(1), m.group(2)
        if key in entries:
            raise SurfaceFileError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = raw

    for key in _REQUIRED:
        if key not in entries:
            raise SurfaceFileError(f"missing key {key!r}")

    name = _parse_string("name", entries["name"]) if "name" in entries else name_hint
    comps = []
    for key in ("x", "y", "z"):
        source = _parse_string(key, entries[key])
        try:
            comps.append(parse_expression(source, variables=("u", "v")))
        except Exception as err:
            raise SurfaceFileError(f"component {key!r}: {err}") from err
    transverse = _parse_string("transverse_param", entries["transverse_param"])
    singular = _parse_scalar("singular_value", entries["singular_value"])
    u_range = (
        _parse_interval("u_range", entries["u_range"]) if "u_range" in entries else (-0.5, 0.5)
    )
    v_range = (
        _parse_interval("v_range", entries["v_range"]) if "v_range" in entries else (-0.5, 0.5)
    )
    return SurfaceDef(
        name=name,
        components=tuple(comps),
        transverse_param=transverse,
        singular_value=singular,
        u_range=u_range,
        v_range=v_range,
    )


def parse_surface_file(path) -> SurfaceDef:
    path = Path(path)
    if not path.exists():
        raise SurfaceFileError(f"no such surface file: {path}")
    return parse_surface_text(path.read_text(encoding="utf-8"), name_hint=path.stem)
