"""
Regularity check and quaternion derivative endpoints
"""

import logging

from fastapi import APIRouter

from quatreg.config import get_settings
from quatreg.jobs import resolve_job, run_check, run_derivative, special_function
from quatreg.models import CheckReport, CheckRequest, DerivativeReport

router = APIRouter(tags=["Regularity"])
logger = logging.getLogger(__name__)


@router.post("/check", response_model=CheckReport)
def check(request: CheckRequest):
    """Check a special-shape function at the job's points"""
    settings = get_settings()
    logger.info(f"Processing check request - Mode: {(request.mode or request.job.mode).value}")
    F = special_function(request.job)
    resolved = resolve_job(
        request.job,
        settings,
        tol=request.tol,
        seed=request.seed,
        mode=request.mode,
        directions=request.directions,
    )
    return run_check(F, resolved, workers=settings.workers, detail=request.detail)


@router.post("/derivative", response_model=DerivativeReport)
def derivative(request: CheckRequest):
    """Quaternion derivative of the job's function and its PDE check"""
    settings = get_settings()
    logger.info("Processing derivative request")
    F = special_function(request.job)
    resolved = resolve_job(request.job, settings, tol=request.tol)
    return run_derivative(F, resolved, workers=settings.workers)
