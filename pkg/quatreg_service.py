# Imports
from contextlib import asynccontextmanager
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.middleware.cors import CORSMiddleware

from quatreg import __description__, __version__
from quatreg.config import get_settings
from quatreg.errors import DomainError, JobError, ParseError
from quatreg.routes import check, health, identities
from quatreg.utils import setup_logger


# Initialize logger
logger = setup_logger("quatreg", get_settings().log_level)


# Lifespan context manager for startup/shutdown events
@asynccontextmanager
async def lifespan(app: FastAPI):
    """Handle startup and shutdown events"""
    settings = get_settings()
    logger.info(f"quatreg service starting (seed {settings.seed}, workers {settings.workers})")

    yield

    logger.info("quatreg service shutting down")


# Create FastAPI application
app = FastAPI(
    title="quatreg API",
    description=__description__,
    version=__version__,
    docs_url="/docs",
    openapi_url="/openapi.json",
    lifespan=lifespan
)

# Add CORS middleware for cross-origin requests
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include route modules
app.include_router(health.router)
app.include_router(check.router)
app.include_router(identities.router)


# Global exception handlers
@app.exception_handler(HTTPException)
async def http_exception_handler(request, exc):
    """Handle HTTP exceptions with proper formatting"""
    return JSONResponse(
        status_code=exc.status_code,
        content={"detail": exc.detail}
    )


@app.exception_handler(ParseError)
async def parse_error_handler(request, exc):
    """Expression text that does not parse"""
    return JSONResponse(
        status_code=422,
        content={"detail": str(exc), "offset": exc.offset}
    )


@app.exception_handler(JobError)
async def job_error_handler(request, exc):
    """Malformed job, including f0/f1 parse failures"""
    offset = getattr(exc.__cause__, "offset", None)
    return JSONResponse(
        status_code=422,
        content={"detail": str(exc), "offset": offset}
    )


@app.exception_handler(DomainError)
async def domain_error_handler(request, exc):
    """Evaluation outside a function's domain"""
    return JSONResponse(
        status_code=422,
        content={"detail": str(exc), "offset": exc.position}
    )


@app.exception_handler(Exception)
async def general_exception_handler(request, exc):
    """Handle unexpected exceptions"""
    logger.error(f"Unhandled exception: {str(exc)}", exc_info=True)
    return JSONResponse(
        status_code=500,
        content={"detail": "Internal server error"}
    )
