"""Gauge functions.

A gauge is a strictly increasing continuous function phi on [0, inf) with
phi(0) = 0 and phi(r) -> inf.  Gauges parameterize the duality mappings in
:mod:`gaugedual.spaces`; their inverses drive the inverse duality mapping and
their antiderivatives Phi(r) = integral_0^r phi(s) ds supply the convex merit
used by the variational resolvent solver.

Closed-form inverses and antiderivatives are attached where available; the
generic fallbacks are a bracketing root search and adaptive quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

__all__ = [
    "Gauge",
    "ValidationReport",
    "eval_gauge",
    "eval_inverse",
    "eval_antiderivative",
    "validate_gauge",
    "power_gauge",
    "log1p_gauge",
    "expm1_gauge",
    "catalog",
    "from_label",
]

# Hard cap on geometric bracket expansion: 2**1024 overflows float64 anyway.
_MAX_BRACKET_DOUBLINGS = 1100


@dataclass(frozen=True)
class Gauge:
    """A gauge phi with optional closed-form inverse and antiderivative.

    ``fn`` must accept scalars and numpy arrays (the batch paths in
    :mod:`gaugedual.analysis` evaluate phi on arrays of radii).
    """

    fn: Callable
    label: str
    inverse: Optional[Callable] = None
    antiderivative: Optional[Callable] = None

    def __call__(self, r):
        return self.fn(r)

    def without_closed_forms(self) -> "Gauge":
        """Copy of this gauge forced onto the numeric inverse/quadrature paths."""
        return replace(self, inverse=None, antiderivative=None,
                       label=self.label + "#numeric")


@dataclass
class ValidationReport:
    """Outcome of :func:`validate_gauge`.  Failures are recorded, not raised."""

    label: str
    origin_ok: bool
    monotonicity_violations: list = field(default_factory=list)
    divergence_witness: Optional[float] = None
    inverse_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.origin_ok
                and not self.monotonicity_violations
                and self.divergence_witness is not None
                and not self.inverse_failures)


def _check_scalar(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < 0.0:
        raise ValueError(f"{name} must be nonnegative, got {value!r}")
    return value


def eval_gauge(g: Gauge, r: float) -> float:
    """Evaluate phi(r) for r >= 0."""
    r = _check_scalar("r", r)
    return float(g.fn(r))


def eval_inverse(g: Gauge, s: float, tol: float = 1e-10) -> float:
    """Return r with |phi(r) - s| <= tol * (1 + s).

    Uses the closed-form inverse when the gauge carries one; otherwise the
    bracket [0, hi] is grown geometrically until phi(hi) >= s and the root of
    phi(r) - s is located by Brent's method (bracketing, unconditionally
    convergent for strictly increasing continuous phi).
    """
    s = _check_scalar("s", s)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if s == 0.0:
        return 0.0
    if g.inverse is not None:
        return float(g.inverse(s))

    hi = 1.0
    doublings = 0
    while float(g.fn(hi)) < s:
        hi *= 2.0
        doublings += 1
        if doublings > _MAX_BRACKET_DOUBLINGS:
            raise RuntimeError(
                f"gauge '{g.label}' never exceeded {s}; not a valid gauge?")
    lo = 0.0 if hi == 1.0 else hi / 2.0
    root = optimize.brentq(lambda t: float(g.fn(t)) - s, lo, hi,
                           xtol=1e-300, rtol=4 * np.finfo(float).eps,
                           maxiter=300)
    root = float(root)
    if abs(float(g.fn(root)) - s) > tol * (1.0 + s):
        raise RuntimeError(
            f"inversion of gauge '{g.label}' at s={s} missed tolerance {tol}")
    return root


def eval_antiderivative(g: Gauge, r: float, tol: float = 1e-10) -> float:
    """Return Phi(r) = integral_0^r phi, by closed form or adaptive quadrature."""
    r = _check_scalar("r", r)
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if r == 0.0:
        return 0.0
    if g.antiderivative is not None:
        return float(g.antiderivative(r))
    value, err = integrate.quad(lambda t: float(g.fn(t)), 0.0, r,
                                epsabs=tol, epsrel=tol, limit=200)
    if not math.isfinite(value):
        raise RuntimeError(
            f"quadrature of gauge '{g.label}' on [0, {r}] returned {value}")
    if err > tol * (1.0 + abs(value)):
        raise RuntimeError(
            f"quadrature of gauge '{g.label}' on [0, {r}] reported error {err}")
    return float(value)


def validate_gauge(g: Gauge, grid: Sequence[float], divergence_bound: float,
                   tol: float = 1e-8) -> ValidationReport:
    """Check the gauge axioms on a finite grid.

    The grid must be sorted and start at 0.  Divergence is certified by a
    witness r with phi(r) > divergence_bound, searched by doubling beyond the
    grid; a bounded function (e.g. arctan) produces no witness.
    """
    grid = [float(r) for r in grid]
    if not grid or grid[0] != 0.0 or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted, start at 0, and be duplicate-free")
    if divergence_bound <= 0.0:
        raise ValueError("divergence_bound must be positive")

    values = [float(g.fn(r)) for r in grid]
    report = ValidationReport(label=g.label, origin_ok=(values[0] == 0.0))
    for (r1, v1), (r2, v2) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if not v1 < v2:
            report.monotonicity_violations.append((r1, r2))

    witness = max(grid[-1], 1.0)
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        value = float(g.fn(witness))
        if value > divergence_bound:   # inf counts: the gauge escaped the bound
            report.divergence_witness = witness
            break
        witness *= 2.0

    if g.inverse is not None:
        for r, v in zip(grid, values):
            back = float(g.inverse(v))
            if abs(back - r) > tol * (1.0 + r):
                report.inverse_failures.append((r, back))
    return report


# ---------------------------------------------------------------------------
# Shipped catalog
# ---------------------------------------------------------------------------

def power_gauge(exponent: float) -> Gauge:
    """phi(r) = r**exponent for exponent > 0.  ``power:1`` is the normalized gauge."""
    a = float(exponent)
    if not (a > 0.0 and math.isfinite(a)):
        raise ValueError(f"power gauge exponent must be positive, got {exponent!r}")
    return Gauge(
        fn=lambda r, a=a: np.power(r, a),
        inverse=lambda s, a=a: np.power(s, 1.0 / a),
        antiderivative=lambda r, a=a: np.power(r, a + 1.0) / (a + 1.0),
        label=f"power:{a:g}",
    )


def log1p_gauge() -> Gauge:
    return Gauge(
        fn=np.log1p,
        inverse=np.expm1,
        antiderivative=lambda r: (1.0 + r) * np.log1p(r) - r,
        label="log1p",
    )


def expm1_gauge() -> Gauge:
    return Gauge(
        fn=np.expm1,
        inverse=np.log1p,
        antiderivative=lambda r: np.expm1(r) - r,
        label="expm1",
    )


def catalog() -> dict:
    """The shipped gauges, keyed by label.

    Power exponents 0.5, 1, 2, 3 cover the homogeneous family r**(p-1) for
    p in {1.5, 2, 3, 4}; log1p and expm1 exercise the nonhomogeneous paths
    where no closed-form Yosida approximant exists.
    """
    gauges = [power_gauge(0.5), power_gauge(1.0), power_gauge(2.0),
              power_gauge(3.0), log1p_gauge(), expm1_gauge()]
    return {g.label: g for g in gauges}


def from_label(label: str) -> Gauge:
    """Resolve a CLI/config gauge label: ``power:<a>``, ``log1p``, ``expm1``."""
    label = label.strip()
    if label in ("normalized", "power:1"):
        return power_gauge(1.0)
    if label == "log1p":
        return log1p_gauge()
    if label == "expm1":
        return expm1_gauge()
    if label.startswith("power:"):
        try:
            return power_gauge(float(label.split(":", 1)[1]))
        except ValueError as exc:
            raise ValueError(f"bad power gauge label {label!r}") from exc
    raise ValueError(f"unknown gauge label {label!r}")
