"""
Health check and system information endpoints
"""

import logging

from fastapi import APIRouter

from quatreg import __version__
from quatreg.config import get_settings
from quatreg.expr import FUNCTIONS
from quatreg.models import HealthResponse, InfoResponse, Mode

router = APIRouter(tags=["Health"])
logger = logging.getLogger(__name__)


@router.get("/health", response_model=HealthResponse)
async def health_check():
    """Check that the service is up"""
    return {
        "status": "healthy",
        "message": "quatreg service is operational"
    }


@router.get("/info", response_model=InfoResponse)
async def system_info():
    """Version, supported modes and DSL functions, effective default tolerances"""
    settings = get_settings()
    return {
        "name": "quatreg",
        "version": __version__,
        "modes": [m.value for m in Mode],
        "functions": list(FUNCTIONS),
        "settings": {
            "pde_tol": settings.pde_tol,
            "form_tol": settings.form_tol,
            "limit_tol": settings.limit_tol,
            "identity_tol": settings.identity_tol,
            "directions": settings.directions,
        },
    }
