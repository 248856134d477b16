"""Pydantic request/response models for the HTTP service.

The wire formats mirror the JSON file formats: a measure is
{label, atoms: [[re, im, mass]], circle_density: {coeffs: [[m, re, im]]},
disk_density: {kind, alpha}}; a polynomial is a list of [re, im]
coefficient pairs.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from ..measures import MeasureSpec
from ..poly import CPoly, TrigPoly

PolyJSON = list[list[float]]


class CircleDensityModel(BaseModel):
    coeffs: list[list[float]]  # [m, re, im]


class DiskDensityModel(BaseModel):
    kind: Literal["hardy", "alpha"]
    alpha: Optional[float] = None


class MeasureModel(BaseModel):
    label: str = "measure"
    atoms: list[list[float]] = Field(default_factory=list)  # [re, im, mass]
    circle_density: Optional[CircleDensityModel] = None
    disk_density: Optional[DiskDensityModel] = None

    @field_validator("atoms")
    @classmethod
    def _atoms_shape(cls, v):
        for row in v:
            if len(row) != 3:
                raise ValueError("each atom is [re, im, mass]")
        return v

    def to_spec(self) -> MeasureSpec:
        return MeasureSpec.from_json(self.model_dump(exclude_none=True))

    @classmethod
    def from_spec(cls, mu: MeasureSpec) -> "MeasureModel":
        return cls.model_validate(mu.to_json())


def poly_from_json(data: PolyJSON) -> CPoly:
    return CPoly.from_json(data)


class QuadratureOptions(BaseModel):
    n_r: int = Field(default=96, ge=1)
    n_theta: int = Field(default=192, ge=1)
    n_circle: int = Field(default=256, ge=1)


class WeightRequest(BaseModel):
    measure: MeasureModel
    points: list[list[float]]  # [re, im]
    options: QuadratureOptions = Field(default_factory=QuadratureOptions)


class WeightRow(BaseModel):
    re: float
    im: float
    u: float
    v: float


class WeightResponse(BaseModel):
    label: str
    rows: list[WeightRow]
    provenance: dict


class NormRequest(BaseModel):
    measure: MeasureModel
    poly: PolyJSON
    mode: Literal["u", "v", "measure"] = "v"
    options: QuadratureOptions = Field(default_factory=QuadratureOptions)


class NormResponse(BaseModel):
    value: float
    mode: str
    residuals: dict
    provenance: dict


class LocalDirichletRequest(BaseModel):
    poly: PolyJSON
    point: list[float]
    method: Literal["boundary", "area"] = "boundary"
    options: QuadratureOptions = Field(default_factory=QuadratureOptions)


class LocalDirichletResponse(BaseModel):
    value: float
    method: str
    residuals: dict
    provenance: dict


class DualCheckRequest(BaseModel):
    measure: MeasureModel
    p: PolyJSON
    q: PolyJSON


class DualCheckResponse(BaseModel):
    residual: float
    scaled_residual: float
    provenance: dict


class HDNormRequest(BaseModel):
    measure: MeasureModel
    coeffs: list[list[float]]  # [m, re, im]


class HDNormResponse(BaseModel):
    value: float
    l2_part: float
    provenance: dict


class CarlesonRequest(BaseModel):
    measure: MeasureModel        # embedding measure nu (no circle part)
    base_measure: MeasureModel   # mu
    degree: int = Field(default=12, ge=0)


class CarlesonResponse(BaseModel):
    constant: float
    degree: int
    refinement_delta: float
    gram_condition: float
    provenance: dict


class MultNormRequest(BaseModel):
    measure: MeasureModel
    poly: PolyJSON
    degree: int = Field(default=12, ge=0)
    certificate: bool = False


class MultNormResponse(BaseModel):
    lower_bound: float
    degree: int
    sup_circle: Optional[float] = None
    carleson_constant: Optional[float] = None
    provenance: dict


class PickRequest(BaseModel):
    measure: MeasureModel
    poly: PolyJSON
    points: list[list[float]]
    degree: int = Field(default=20, ge=0)
    space: Literal["h2", "dmu", "emu"] = "emu"


class PickResponse(BaseModel):
    min_eigenvalue: float
    degree: int
    provenance: dict


class CoronaSolveRequest(BaseModel):
    measure: MeasureModel
    f: list[PolyJSON]
    h: PolyJSON
    delta: Optional[float] = None
    grid_radius: float = Field(default=0.95, gt=0.0, lt=1.0)
    fit_degree: Optional[int] = None
    options: QuadratureOptions = Field(default_factory=QuadratureOptions)
    jobs: Optional[int] = None


class CoronaSolveResponse(BaseModel):
    solution: dict
    provenance: dict


class CoronaVerifyRequest(BaseModel):
    problem: CoronaSolveRequest
    solution: Optional[dict] = None   # cross-checked against a fresh solve if given


class CoronaVerifyResponse(BaseModel):
    report: dict
    matches_supplied: Optional[bool] = None
    provenance: dict


class SelftestRequest(BaseModel):
    criteria: Optional[list[int]] = None


class CriterionModel(BaseModel):
    index: int
    name: str
    passed: bool
    seconds: float
    limit_seconds: float
    details: dict


class SelftestResponse(BaseModel):
    passed: bool
    results: list[CriterionModel]


class ValidateMeasureResponse(BaseModel):
    valid: bool
    violations: list[str]
    total_mass: Optional[float] = None
