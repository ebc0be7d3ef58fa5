"""
API Routes Package
"""

from quatreg.routes import check, health, identities

__all__ = ["check", "health", "identities"]
