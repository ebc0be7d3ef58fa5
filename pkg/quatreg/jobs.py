"""
Job loading, point expansion and per-point regularity checks
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import ValidationError

from quatreg import expr as ex
from quatreg.config import Settings, get_settings
from quatreg.errors import DomainError, JobError, ParseError
from quatreg.models import (
    CheckReport,
    DerivativeReport,
    Job,
    Mode,
    ResidualReport,
    ResolvedJob,
    ResolvedTolerances,
    Summary,
    Verdict,
)
from quatreg.regularity import (
    SpecialFunction,
    dq_limit,
    form_report,
    pde_residuals,
    quaternion_derivative,
    residual_scale,
)
from quatreg.utils import key_line, load_json_file

logger = logging.getLogger(__name__)


def _validation_message(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "job"
    return f"{location}: {first['msg']}"


def parse_job(data: Dict[str, Any], path: Optional[str] = None) -> Job:
    try:
        return Job.model_validate(data)
    except ValidationError as e:
        raise JobError(_validation_message(e), path=path) from e


def load_job(path: Union[str, Path]) -> Job:
    """Read and validate a job file"""
    return parse_job(load_json_file(path), path=str(path))


def special_function(job: Job, path: Optional[str] = None) -> SpecialFunction:
    """Parse f0 and f1, reporting the failing field, its line in the job file and the offset"""
    parsed = {}
    for name in ("f0", "f1"):
        text = getattr(job, name)
        try:
            parsed[name] = ex.parse(text)
        except ParseError as e:
            line = key_line(path, name) if path else None
            raise JobError(f"{name}: {e}\n{e.caret()}", path=path, line=line) from e
    return SpecialFunction(parsed["f0"], parsed["f1"])


def expand_points(job: Job) -> List[List[float]]:
    """Explicit points first, then grid points with axis 1 varying slowest"""
    points = [list(p) for p in job.points]
    if job.grid is not None:
        axes = [np.linspace(a.min, a.max, a.count) for a in job.grid.axes]
        points.extend([float(v) for v in combo] for combo in itertools.product(*axes))
    return points


def resolve_job(
    job: Job,
    settings: Optional[Settings] = None,
    tol: Optional[float] = None,
    seed: Optional[int] = None,
    mode: Optional[Mode] = None,
    directions: Optional[int] = None,
) -> ResolvedJob:
    """
    Fill in defaults. Precedence: explicit arguments, then the job file, then
    settings. ``tol`` sets the PDE tolerance and ten times it for forms.
    """
    settings = settings or get_settings()
    pde_tol = job.tolerances.pde if job.tolerances.pde is not None else settings.pde_tol
    form_tol = job.tolerances.forms if job.tolerances.forms is not None else settings.form_tol
    limit_tol = job.tolerances.limit if job.tolerances.limit is not None else settings.limit_tol
    if tol is not None:
        pde_tol, form_tol = tol, 10.0 * tol

    def pick(flag, from_job, default):
        if flag is not None:
            return flag
        return from_job if from_job is not None else default

    return ResolvedJob(
        f0=job.f0,
        f1=job.f1,
        mode=mode or job.mode,
        points=expand_points(job),
        tolerances=ResolvedTolerances(
            pde=pde_tol,
            forms=form_tol,
            limit=limit_tol,
        ),
        seed=pick(seed, job.seed, settings.seed),
        directions=pick(directions, job.directions, settings.directions),
    )


def check_point(
    F: SpecialFunction,
    index: int,
    point: List[float],
    job: ResolvedJob,
    detail: bool = False,
) -> ResidualReport:
    """Run the checks selected by the job's mode at one point; domain errors and overflow become an error verdict"""
    report = ResidualReport(index=index, point=point, verdict=Verdict.REGULAR)
    mode = job.mode
    try:
        scale = residual_scale(F, point)
        if not np.isfinite(scale):
            raise DomainError("overflow", value=scale)
        report.scale = scale
        regular = True

        if mode in (Mode.PDE, Mode.ALL):
            report.pde = pde_residuals(F, point)
            report.pde_max = report.pde.max_abs()
            regular &= report.pde_max <= job.tolerances.pde * scale

        if mode in (Mode.FORMS, Mode.ALL):
            report.forms = form_report(F, point)
            report.forms_max = report.forms.max_abs()
            regular &= report.forms_max <= job.tolerances.forms * scale

        for side, selected in (("left", (Mode.DQ_LEFT, Mode.ALL)), ("right", (Mode.DQ_RIGHT, Mode.ALL))):
            if mode not in selected:
                continue
            diagnostics = dq_limit(
                F,
                point,
                side,
                directions=job.directions,
                seed=job.seed,
                limit_tol=job.tolerances.limit,
                detail=detail,
            )
            setattr(report, f"dq_{side}", diagnostics)
            regular &= diagnostics.exists

        report.verdict = Verdict.REGULAR if regular else Verdict.NON_REGULAR
    except (DomainError, ArithmeticError) as e:
        logger.warning("point %d %s: %s", index, point, e)
        report.verdict = Verdict.ERROR
        report.error = str(e)
    return report


def _summarise(points: List[ResidualReport]) -> Summary:
    regular = sum(1 for p in points if p.verdict is Verdict.REGULAR)
    non_regular = sum(1 for p in points if p.verdict is Verdict.NON_REGULAR)
    errors = sum(1 for p in points if p.verdict is Verdict.ERROR)
    return Summary(
        regular=regular,
        non_regular=non_regular,
        errors=errors,
        exit_code=0 if regular == len(points) else 1,
    )


def run_check(
    F: SpecialFunction,
    job: ResolvedJob,
    workers: int = 1,
    detail: bool = False,
) -> CheckReport:
    """Check every point of a resolved job; report order follows point order for any worker count"""
    logger.info("checking %s at %d points (mode %s)", F, len(job.points), job.mode.value)

    def task(args):
        index, point = args
        return check_point(F, index, point, job, detail)

    items = list(enumerate(job.points))
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(task, items))
    else:
        points = [task(item) for item in items]

    return CheckReport(job=job, points=points, summary=_summarise(points))


def run_derivative(
    F: SpecialFunction,
    job: ResolvedJob,
    workers: int = 1,
) -> DerivativeReport:
    """Differentiate with respect to x1 and re-run the PDE check on the derivative at the job's points"""
    derivative = quaternion_derivative(F)
    derivative_job = job.model_copy(update={
        "f0": str(derivative.f0),
        "f1": str(derivative.f1),
        "mode": Mode.PDE,
    })
    return DerivativeReport(
        f0=str(F.f0),
        f1=str(F.f1),
        derivative_f0=str(derivative.f0),
        derivative_f1=str(derivative.f1),
        check=run_check(derivative, derivative_job, workers=workers),
    )
