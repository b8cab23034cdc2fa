"""Wavefront OBJ export for the base surface and its derived surfaces.

Grids are row-major (u-major); quads split into two triangles; masked cells
(focal data at infinity) are skipped and counted.  Traced singular curves are
appended as OBJ polylines ('l' records).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_ORDER, DEFAULT_TOL, Tolerances
from .errors import InputError, PreconditionError
from .frontal import FrameBundle, eval_values
from .derived import focal_singular_trace, nr_grid, nr_singular_points
from .surfaces import SurfaceDef

SURFACE_KINDS = ("f", "nr", "c1", "c2")


@dataclass
class MeshData:
    name: str
    kind: str
    nu: int
    nv: int
    vertices: np.ndarray  # (n, 3)
    faces: list[tuple[int, int, int]]  # 0-based vertex indices
    polylines: list[np.ndarray] = field(default_factory=list)  # each (m, 3)
    skipped_faces: int = 0

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def face_count(self) -> int:
        return len(self.faces)


def mesh_surface(
    surface: SurfaceDef,
    kind: str,
    nu: int = 41,
    nv: int = 41,
    *,
    order: int = DEFAULT_ORDER,
    tol: Tolerances = DEFAULT_TOL,
    w_range: tuple[float, float] = (-1.0, 1.0),
    trace: bool = True,
) -> MeshData:
    """Sample one of f, nr, c1, c2 on a parameter grid."""
    if kind not in SURFACE_KINDS:
        raise InputError(f"unknown surface kind {kind!r} (one of {SURFACE_KINDS})")
    if nu < 2 or nv < 2:
        raise InputError("grid resolutions must be >= 2")
    ulo, uhi = surface.internal_u_range
    vlo, vhi = surface.internal_v_range
    us = np.linspace(ulo, uhi, nu)

    polylines: list[np.ndarray] = []
    if kind == "f":
        vs = np.linspace(vlo, vhi, nv)
        uu, vv = np.meshgrid(us, vs, indexing="ij")

        def extract(b: FrameBundle) -> dict:
            return {"p": b.f.value}

        pts = eval_values(surface, uu, vv, extract, order=order, tol=tol)["p"]
        valid = np.ones(pts.shape[:2], dtype=bool)
        if trace:
            axis = eval_values(surface, us, np.zeros_like(us), extract, order=order, tol=tol)["p"]
            polylines.append(axis)
    elif kind == "nr":
        ws = np.linspace(w_range[0], w_range[1], nv)
        pts = nr_grid(surface, us, ws, order=order, tol=tol)
        valid = np.ones(pts.shape[:2], dtype=bool)
        if trace:
            try:
                tr = nr_singular_points(surface, order=order, tol=tol)
                if not tr.empty:
                    polylines.append(tr.image)
            except PreconditionError:
                pass
    else:
        j = 1 if kind == "c1" else 2
        vs = np.linspace(vlo, vhi, nv)
        uu, vv = np.meshgrid(us, vs, indexing="ij")

        def extract(b: FrameBundle) -> dict:
            k = b.kappa(j)
            kv = np.asarray(k.value)
            ok = np.abs(kv) >= tol.kappa_min
            safe = k.c.copy()
            safe[..., 0, 0] = np.where(ok, kv, 1.0)
            from .jets import Jet2

            rho = 1.0 / Jet2(k.u0, k.v0, k.order, safe)
            c = b.f + b.nu.scaled(rho)
            return {"p": c.value, "ok": ok}

        vals = eval_values(surface, uu, vv, extract, order=order, tol=tol)
        pts = vals["p"]
        valid = vals["ok"]
        pts = np.where(valid[..., None], pts, 0.0)
        if trace:
            tr = focal_singular_trace(surface, j, order=order, tol=tol, cells=101)
            if not tr.empty:
                chain = tr.image[np.argsort(tr.points[:, 0])]
                polylines.append(chain)

    vertices = pts.reshape(-1, 3)
    faces: list[tuple[int, int, int]] = []
    skipped = 0
    cols = pts.shape[1]
    for i in range(pts.shape[0] - 1):
        for k in range(cols - 1):
            corners = (
                i * cols + k,
                i * cols + k + 1,
                (i + 1) * cols + k,
                (i + 1) * cols + k + 1,
            )
            if not (
                valid[i, k] and valid[i, k + 1] and valid[i + 1, k] and valid[i + 1, k + 1]
            ):
                skipped += 1
                continue
            a, b_, c_, d = corners
            faces.append((a, b_, d))
            faces.append((a, d, c_))
    return MeshData(
        name=surface.name,
        kind=kind,
        nu=nu,
        nv=pts.shape[1],
        vertices=vertices,
        faces=faces,
        polylines=polylines,
        skipped_faces=skipped,
    )


def mesh_to_obj(mesh: MeshData) -> str:
    """Serialize to OBJ: v lines, triangle f lines, l polylines."""
    lines = [f"o {mesh.name}-{mesh.kind}"]
    for p in mesh.vertices:
        lines.append(f"v {p[0]:.17g} {p[1]:.17g} {p[2]:.17g}")
    for tri in mesh.faces:
        lines.append(f"f {tri[0] + 1} {tri[1] + 1} {tri[2] + 1}")
    offset = mesh.vertex_count
    for poly in mesh.polylines:
        for p in poly:
            lines.append(f"v {p[0]:.17g} {p[1]:.17g} {p[2]:.17g}")
        idx = " ".join(str(offset + i + 1) for i in range(poly.shape[0]))
        lines.append(f"l {idx}")
        offset += poly.shape[0]
    return "\n".join(lines) + "\n"


@dataclass
class ObjStats:
    vertices: int
    faces: int
    polylines: int
    groups: list[str]


def read_obj(text: str) -> ObjStats:
    """Minimal OBJ reader (round-trip check for the exporter)."""
    nv = nf = nl = 0
    groups = []
    for line in text.splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            if len(parts) != 4:
                raise InputError(f"malformed vertex line: {line!r}")
            [float(p) for p in parts[1:]]
            nv += 1
        elif parts[0] == "f":
            idx = [int(p.split("/")[0]) for p in parts[1:]]
            if any(i < 1 or i > nv for i in idx):
                raise InputError(f"face references missing vertex: {line!r}")
            nf += 1
        elif parts[0] == "l":
            idx = [int(p) for p in parts[1:]]
            if any(i < 1 or i > nv for i in idx):
                raise InputError(f"polyline references missing vertex: {line!r}")
            nl += 1
        elif parts[0] == "o":
            groups.append(" ".join(parts[1:]))
    return ObjStats(vertices=nv, faces=nf, polylines=nl, groups=groups)
