"""Finite-dimensional lp geometry and duality mappings.

A point of X = R^n carries the p-norm; a dual point lives in X* = R^n with
the conjugate q-norm, 1/p + 1/q = 1.  For 1 < p < inf these spaces are smooth
and locally uniformly convex, so the duality mapping with any gauge phi is
single-valued:

    J_phi x = phi(||x||) / ||x|| * Jx,      J the normalized duality mapping,

with the defining identities <J_phi x, x> = phi(||x||) ||x|| and
||J_phi x||_q = phi(||x||).  The inverse of J_phi is the duality mapping of
the dual space with gauge phi^{-1}.

Points and dual points are plain float64 numpy arrays throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gauges import Gauge, eval_inverse

__all__ = [
    "PNormSpace",
    "pnorm",
    "dual_norm",
    "dual_pairing",
    "normalized_duality",
    "gauge_duality",
    "gauge_duality_batch",
    "inverse_gauge_duality",
]

# Below this norm the scaling phi(||x||)/||x|| is treated as the x = 0 branch;
# avoids overflow of ||x||**(2-p) for p > 2.
_TINY_NORM = 1e-300


@dataclass(frozen=True)
class PNormSpace:
    """R^dim under the p-norm, 1 < p < inf."""

    dim: int
    p: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        p = float(self.p)
        if not (1.0 < p < math.inf):
            raise ValueError(f"p must lie in (1, inf), got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        """Conjugate exponent, 1/p + 1/q = 1."""
        return self.p / (self.p - 1.0)

    def dual(self) -> "PNormSpace":
        return PNormSpace(self.dim, self.q)


def as_vector(sp: PNormSpace, x) -> np.ndarray:
    """Coerce to a finite float64 vector of the space's dimension."""
    arr = np.asarray(x, dtype=float)
    if arr.shape != (sp.dim,):
        raise ValueError(f"expected vector of shape ({sp.dim},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite coordinates")
    return arr


def _hoelder_norm(x: np.ndarray, exponent: float) -> float:
    # max-rescaled to dodge overflow/underflow of |x_i|**exponent
    m = float(np.max(np.abs(x))) if x.size else 0.0
    if m == 0.0:
        return 0.0
    return m * float(np.sum(np.abs(x / m) ** exponent)) ** (1.0 / exponent)


def pnorm(sp: PNormSpace, x) -> float:
    """||x||_p."""
    return _hoelder_norm(as_vector(sp, x), sp.p)


def dual_norm(sp: PNormSpace, x_star) -> float:
    """||x*||_q, the norm of the dual space."""
    return _hoelder_norm(as_vector(sp, x_star), sp.q)


def dual_pairing(x_star, x) -> float:
    """<x*, x>, the value of the functional x* at x."""
    a = np.asarray(x_star, dtype=float)
    b = np.asarray(x, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"pairing needs matching vectors, got {a.shape} and {b.shape}")
    return float(np.dot(a, b))


def _signed_power(u: np.ndarray, exponent: float) -> np.ndarray:
    """sign(u_i) |u_i|**exponent, elementwise; exponent > 0 so 0 maps to 0."""
    return np.sign(u) * np.abs(u) ** exponent


def normalized_duality(sp: PNormSpace, x) -> np.ndarray:
    """Jx with <Jx, x> = ||x||^2 and ||Jx||_q = ||x||; J0 = 0.

    Computed on the unit vector u = x/||x|| as ||x|| * sign(u)|u|^(p-1),
    which equals the coordinate formula ||x||^(2-p) |x_i|^(p-2) x_i without
    intermediate overflow.
    """
    x = as_vector(sp, x)
    n = _hoelder_norm(x, sp.p)
    if n < _TINY_NORM:
        return np.zeros(sp.dim)
    return n * _signed_power(x / n, sp.p - 1.0)


def gauge_duality(sp: PNormSpace, g: Gauge, x) -> np.ndarray:
    """J_phi x = phi(||x||)/||x|| Jx, with the x = 0 branch mapping to 0."""
    x = as_vector(sp, x)
    n = _hoelder_norm(x, sp.p)
    if n < _TINY_NORM:
        return np.zeros(sp.dim)
    return float(g.fn(n)) * _signed_power(x / n, sp.p - 1.0)


def gauge_duality_batch(sp: PNormSpace, g: Gauge, points: np.ndarray) -> np.ndarray:
    """Row-wise J_phi over an (m, dim) array.  Rows of norm < 1e-300 map to 0."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != sp.dim:
        raise ValueError(f"expected (m, {sp.dim}) array, got {pts.shape}")
    scale = np.max(np.abs(pts), axis=1, keepdims=True)
    safe = np.where(scale > 0.0, scale, 1.0)
    norms = scale[:, 0] * np.sum(np.abs(pts / safe) ** sp.p, axis=1) ** (1.0 / sp.p)
    out = np.zeros_like(pts)
    live = norms >= _TINY_NORM
    if np.any(live):
        u = pts[live] / norms[live, None]
        out[live] = np.asarray(g.fn(norms[live]))[:, None] * _signed_power(u, sp.p - 1.0)
    return out


def inverse_gauge_duality(sp: PNormSpace, g: Gauge, x_star, tol: float = 1e-10) -> np.ndarray:
    """J_phi^{-1} x* = J_{phi^{-1}} x*, the duality mapping of X* with gauge phi^{-1}.

    phi^{-1} is evaluated by :func:`gaugedual.gauges.eval_inverse` (closed form
    when present, bracketing search otherwise), so the round trip
    J_{phi^{-1}}(J_phi x) = x holds to the inversion tolerance.
    """
    y = as_vector(sp, x_star)
    m = _hoelder_norm(y, sp.q)
    if m < _TINY_NORM:
        return np.zeros(sp.dim)
    r = eval_inverse(g, m, tol=tol)
    return r * _signed_power(y / m, sp.q - 1.0)
