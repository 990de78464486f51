"""Utility modules for casimir-friction."""

from .logger import logger

__all__ = ["logger"]
