"""Request and response models of the HTTP service."""
from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class SurfaceSpec(BaseModel):
    """Either a built-in example name or full surface-definition text."""

    example: Optional[str] = None
    definition: Optional[str] = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.example is None) == (self.definition is None):
            raise ValueError("provide exactly one of 'example' or 'definition'")
        return self


class AnalyzeRequest(BaseModel):
    surface: SurfaceSpec
    at_u: float = 0.0
    at_v: float = 0.0
    order: int = Field(default=7, ge=4, le=12)
    tolerance_overrides: dict[str, float] = Field(default_factory=dict)
    profile_samples: int = Field(default=0, ge=0, le=2001)


class AnalyzeResponse(BaseModel):
    config: dict
    generated_at: str
    report: dict


class MeshRequest(BaseModel):
    surface: SurfaceSpec
    kind: str = "f"  # f | nr | c1 | c2
    nu: int = Field(default=41, ge=2, le=513)
    nv: int = Field(default=41, ge=2, le=513)
    order: int = Field(default=7, ge=4, le=12)
    w_lo: float = -1.0
    w_hi: float = 1.0
    tolerance_overrides: dict[str, float] = Field(default_factory=dict)


class MeshResponse(BaseModel):
    config: dict
    generated_at: str
    obj_text: str
    vertex_count: int
    face_count: int
    polyline_count: int
    skipped_faces: int


class VerifyRequest(BaseModel):
    suite: str = "all"
    order: int = Field(default=7, ge=4, le=12)
    tolerance_overrides: dict[str, float] = Field(default_factory=dict)


class VerifyResponse(BaseModel):
    config: dict
    generated_at: str
    rows: list[dict]
    passed: bool
    n_passed: int
    n_failed: int


class ExampleInfo(BaseModel):
    name: str
    description: str
    definition: str


class ExamplesResponse(BaseModel):
    examples: list[ExampleInfo]


class ErrorDetail(BaseModel):
    kind: str
    message: str
