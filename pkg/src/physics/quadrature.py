"""Adaptive and fixed-rule quadrature shared by the physics modules."""

import math
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from ..errors import AccuracyError

# QUADPACK ier codes other than "subdivision limit" tolerate this much slack
_SOFT_FAILURE_SLACK = 1e3


def adaptive_quad(fn: Callable[[float], float], a: float, b: float, rel_tol: float,
                  abs_tol: float = 0.0, limit: int = 200, points: Optional[Sequence[float]] = None,
                  weight: Optional[str] = None, wvar: Optional[float] = None,
                  label: str = "integral") -> Tuple[float, float]:
    """Gauss-Kronrod quadrature that raises AccuracyError instead of warning."""
    kwargs = {"epsabs": abs_tol, "epsrel": rel_tol, "limit": limit, "full_output": 1}
    if points is not None:
        inside = sorted({p for p in points if min(a, b) < p < max(a, b)})
        if inside:
            kwargs["points"] = inside
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
    result = integrate.quad(fn, a, b, **kwargs)
    value, err = float(result[0]), float(result[1])
    if len(result) > 3:
        message = str(result[3])
        budget = max(abs_tol, rel_tol * abs(value))
        slack = 1.0 if "subdivisions" in message else _SOFT_FAILURE_SLACK
        if not math.isfinite(value) or err > slack * budget:
            raise AccuracyError(f"{label} on [{a:.6g}, {b:.6g}] did not converge: {message}", value, err)
    return value, err


@lru_cache(maxsize=32)
def _legendre(n_nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n_nodes)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre_panels(lo, hi, n_panels: int, n_nodes: int = 20) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [lo, hi]; lo and hi may be arrays of equal shape.

    Returns (points, weights) with a trailing axis of length n_panels * n_nodes.
    """
    x, w = _legendre(n_nodes)
    lo = np.asarray(lo, dtype=float)[..., None]
    hi = np.asarray(hi, dtype=float)[..., None]
    frac = (np.arange(n_panels)[:, None] + 0.5 * (x[None, :] + 1.0)).ravel() / n_panels
    width = (hi - lo) / n_panels
    points = lo + (hi - lo) * frac
    weights = 0.5 * width * np.tile(w, n_panels)
    return points, weights


def panel_quad(fn: Callable[[float], float], edges: Sequence[float], rel_tol: float,
               label: str = "integral") -> float:
    """Sum of adaptive quadratures over consecutive panels."""
    parts = []
    for a, b in zip(edges[:-1], edges[1:]):
        parts.append(adaptive_quad(fn, a, b, rel_tol, limit=100, label=label)[0])
    return math.fsum(parts)
