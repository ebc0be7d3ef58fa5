"""
Identity suite endpoint
"""

import logging

from fastapi import APIRouter

from quatreg.config import get_settings
from quatreg.identities import run_identities
from quatreg.models import IdentityReport, IdentityRequest

router = APIRouter(tags=["Identities"])
logger = logging.getLogger(__name__)


@router.post("/identities", response_model=IdentityReport)
def identities(request: IdentityRequest):
    """Run the seeded identity suite"""
    settings = get_settings()
    seed = settings.seed if request.seed is None else request.seed
    logger.info(f"Processing identity suite request - seed {seed}, samples {request.samples}")
    return run_identities(seed=seed, samples=request.samples, tol=request.tol, settings=settings)
