"""HTTP service wrapping the core package.

Input problems map to 400, numerical-precondition failures to 422; a
verification run with failing rows is still a 200 (the rows are the result).
Responses echo the resolved configuration so reports are reproducible; the
only non-deterministic field is `generated_at`.
"""
from __future__ import annotations

from datetime import datetime, timezone

from fastapi import FastAPI

from .. import __version__
from ..analysis import analyze_surface
from ..config import DEFAULT_TOL
from ..errors import InputError, NumericalError
from ..meshing import mesh_surface, mesh_to_obj
from ..registry import example_definition, example_description, example_names, example_surface
from ..surfaces import SurfaceDef, parse_surface_text
from ..verification import run_suite
from .models import (
    AnalyzeRequest,
    AnalyzeResponse,
    ExampleInfo,
    ExamplesResponse,
    MeshRequest,
    MeshResponse,
    VerifyRequest,
    VerifyResponse,
)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _resolve_surface(spec) -> SurfaceDef:
    if spec.example is not None:
        return example_surface(spec.example)
    return parse_surface_text(spec.definition)


def _tolerances(overrides: dict):
    try:
        return DEFAULT_TOL.with_overrides(**overrides)
    except ValueError as err:
        raise InputError(str(err)) from None


def create_app() -> FastAPI:
    app = FastAPI(
        title="frontal-lab",
        version=__version__,
        description=(
            "Geometry of frontal surfaces: invariants along singular curves, "
            "normal congruence, ruled and focal surfaces, singularity "
            "classification, and a verification suite."
        ),
    )

    @app.exception_handler(InputError)
    async def _input_error(request, exc):
        from fastapi.responses import JSONResponse

        return JSONResponse(
            status_code=400,
            content={"detail": {"kind": type(exc).__name__, "message": str(exc)}},
        )

    @app.exception_handler(NumericalError)
    async def _numerical_error(request, exc):
        from fastapi.responses import JSONResponse

        return JSONResponse(
            status_code=422,
            content={"detail": {"kind": type(exc).__name__, "message": str(exc)}},
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/examples", response_model=ExamplesResponse)
    def examples() -> ExamplesResponse:
        return ExamplesResponse(
            examples=[
                ExampleInfo(
                    name=name,
                    description=example_description(name),
                    definition=example_definition(name),
                )
                for name in example_names()
            ]
        )

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
        surface = _resolve_surface(req.surface)
        tol = _tolerances(req.tolerance_overrides)
        report = analyze_surface(
            surface,
            req.at_u,
            req.at_v,
            order=req.order,
            tol=tol,
            profile_samples=req.profile_samples,
        )
        config = req.model_dump()
        return AnalyzeResponse(config=config, generated_at=_now(), report=report)

    @app.post("/mesh", response_model=MeshResponse)
    def mesh(req: MeshRequest) -> MeshResponse:
        surface = _resolve_surface(req.surface)
        tol = _tolerances(req.tolerance_overrides)
        data = mesh_surface(
            surface,
            req.kind,
            req.nu,
            req.nv,
            order=req.order,
            tol=tol,
            w_range=(req.w_lo, req.w_hi),
        )
        return MeshResponse(
            config=req.model_dump(),
            generated_at=_now(),
            obj_text=mesh_to_obj(data),
            vertex_count=data.vertex_count,
            face_count=data.face_count,
            polyline_count=len(data.polylines),
            skipped_faces=data.skipped_faces,
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        tol = _tolerances(req.tolerance_overrides)
        rows = run_suite(req.suite, order=req.order, tol=tol)
        n_failed = sum(1 for r in rows if not r.passed)
        return VerifyResponse(
            config=req.model_dump(),
            generated_at=_now(),
            rows=[r.as_dict() for r in rows],
            passed=n_failed == 0,
            n_passed=len(rows) - n_failed,
            n_failed=n_failed,
        )

    return app


app = create_app()
