"""
Pydantic models for quatreg jobs, requests and reports
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Vector4 = List[float]


class Mode(str, Enum):
    PDE = "pde"
    FORMS = "forms"
    DQ_LEFT = "dq-left"
    DQ_RIGHT = "dq-right"
    ALL = "all"


class Verdict(str, Enum):
    REGULAR = "regular"
    NON_REGULAR = "non-regular"
    ERROR = "error"


def _check_vector(values: List[float]) -> List[float]:
    if len(values) != 4:
        raise ValueError(f"points need exactly 4 coordinates, got {len(values)}")
    return [float(v) for v in values]


# ============================================================================
# JOBS
# ============================================================================

class Tolerances(BaseModel):
    """Per-job tolerance overrides; unset values fall back to the settings"""
    model_config = ConfigDict(extra="forbid")

    pde: Optional[float] = Field(default=None, gt=0)
    forms: Optional[float] = Field(default=None, gt=0)
    limit: Optional[float] = Field(default=None, gt=0)


class GridAxis(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: float
    max: float
    count: int = Field(ge=1)


class Grid(BaseModel):
    model_config = ConfigDict(extra="forbid")

    axes: List[GridAxis]

    @field_validator("axes")
    @classmethod
    def four_axes(cls, axes: List[GridAxis]) -> List[GridAxis]:
        if len(axes) != 4:
            raise ValueError(f"a grid needs exactly 4 axes, got {len(axes)}")
        return axes


class Job(BaseModel):
    """A check or derivative job, as read from a job file or an HTTP request"""
    model_config = ConfigDict(extra="forbid")

    f0: str
    f1: str
    points: List[Vector4] = Field(default_factory=list)
    grid: Optional[Grid] = None
    mode: Mode = Mode.ALL
    tolerances: Tolerances = Field(default_factory=Tolerances)
    seed: Optional[int] = None
    directions: Optional[int] = Field(default=None, ge=0)

    @field_validator("points")
    @classmethod
    def four_coordinates(cls, points: List[Vector4]) -> List[Vector4]:
        return [_check_vector(p) for p in points]

    @model_validator(mode="after")
    def at_least_one_point(self) -> "Job":
        if not self.points and self.grid is None:
            raise ValueError("a job needs at least one point (points or grid)")
        return self


class ResolvedTolerances(BaseModel):
    pde: float
    forms: float
    limit: float


class ResolvedJob(BaseModel):
    """A job with every default filled in, echoed at the top of check reports"""
    f0: str
    f1: str
    mode: Mode
    points: List[Vector4]
    tolerances: ResolvedTolerances
    seed: int
    directions: int


# ============================================================================
# PER-POINT REPORTS
# ============================================================================

class PdeResiduals(BaseModel):
    """Residuals of the regularity PDE system at one point"""
    r_main: float
    r_2: float
    r_3: float
    r_4: float
    r_23: float
    r_24: float
    r_34: float

    def values(self) -> List[float]:
        return [self.r_main, self.r_2, self.r_3, self.r_4, self.r_23, self.r_24, self.r_34]

    def max_abs(self) -> float:
        return max(abs(v) for v in self.values())


class FormResiduals(BaseModel):
    """Volume coefficients of the left- and right-sided form equations"""
    left: Vector4
    right: Vector4

    def max_abs(self) -> float:
        return max(abs(v) for v in self.left + self.right)


class LimitDiagnostics(BaseModel):
    """Difference-quotient sweep at one point for one side"""
    side: str
    magnitudes: List[float]
    limit: Vector4
    derivative: Vector4
    spread: float  # final-stage quotients across directions
    extrapolated_spread: float  # decides `exists`
    stage_spreads: List[float]
    limit_error: float
    final_stage_error: float
    halving_ratio: Optional[float] = None
    exists: bool
    directions: Optional[List[Vector4]] = None
    quotients: Optional[List[List[Vector4]]] = None


class ResidualReport(BaseModel):
    """Everything computed at one evaluation point"""
    index: int
    point: Vector4
    verdict: Verdict
    scale: Optional[float] = None
    pde: Optional[PdeResiduals] = None
    pde_max: Optional[float] = None
    forms: Optional[FormResiduals] = None
    forms_max: Optional[float] = None
    dq_left: Optional[LimitDiagnostics] = None
    dq_right: Optional[LimitDiagnostics] = None
    error: Optional[str] = None


class Summary(BaseModel):
    regular: int
    non_regular: int
    errors: int
    exit_code: int


class CheckReport(BaseModel):
    job: ResolvedJob
    points: List[ResidualReport]
    summary: Summary


class DerivativeReport(BaseModel):
    f0: str
    f1: str
    derivative_f0: str
    derivative_f1: str
    check: CheckReport


# ============================================================================
# IDENTITY SUITE
# ============================================================================

class IdentityResult(BaseModel):
    name: str
    cases: int
    max_violation: float
    tolerance: float
    passed: bool


class IdentityReport(BaseModel):
    seed: int
    samples: int
    results: List[IdentityResult]
    warnings: List[str] = Field(default_factory=list)
    passed: bool
    exit_code: int


class IdentityRequest(BaseModel):
    """Request model for the identity suite endpoint"""
    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = None
    samples: int = Field(default=100, ge=0, le=2000)
    tol: Optional[float] = Field(default=None, gt=0)


class CheckRequest(BaseModel):
    """Request model for check and derivative endpoints: a job plus CLI-equivalent overrides"""
    model_config = ConfigDict(extra="forbid")

    job: Job
    tol: Optional[float] = Field(default=None, gt=0)
    seed: Optional[int] = None
    mode: Optional[Mode] = None
    directions: Optional[int] = Field(default=None, ge=0)
    detail: bool = False


class HealthResponse(BaseModel):
    """Response model for health check"""
    status: str
    message: str


class InfoResponse(BaseModel):
    name: str
    version: str
    modes: List[str]
    functions: List[str]
    settings: Dict[str, float]
