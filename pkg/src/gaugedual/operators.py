"""A zoo of single-valued maximal monotone operators A: R^n -> R^n*.

Every shipped operator is continuous, monotone with respect to the coordinate
pairing <Au - Av, u - v> >= 0, and defined on all of R^n.  Operators built
from a convex potential f carry it along (evaluate = grad f), which lets the
resolvent solver take the variational route; linear PSD operators carry the
closed-form Euclidean resolvent (lam, x) -> (I + lam M)^{-1} x used as an
independent oracle.

Monotonicity/convexity are validated statistically by sampling, never proven;
violations surface with a witnessing pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.special import expit

__all__ = [
    "MonotoneOperator",
    "evaluate",
    "zero_operator",
    "identity_operator",
    "make_linear_psd",
    "make_gradient",
    "combine",
    "quartic_operator",
    "softplus_operator",
    "monotonicity_margin",
    "from_label",
]

_PSD_SLACK = 1e-10
_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MonotoneOperator:
    """An evaluable monotone map with optional extras for oracles and solvers.

    dim is None for dimension-generic operators.  lipschitz_bound, when set,
    holds on the ball of radius lipschitz_radius.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    label: str
    dim: Optional[int] = None
    potential: Optional[Callable[[np.ndarray], float]] = None
    lipschitz_bound: Optional[float] = None
    lipschitz_radius: Optional[float] = None
    closed_form_resolvent: Optional[Callable] = None
    matrix: Optional[np.ndarray] = None

    def without_closed_form(self) -> "MonotoneOperator":
        """Copy with the resolvent oracle detached (forces the iterative path)."""
        return replace(self, closed_form_resolvent=None)


def evaluate(op: MonotoneOperator, x) -> np.ndarray:
    """Ax.  Non-finite output signals an ill-posed operator instance."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError(f"operator input must be a vector, got shape {x.shape}")
    if op.dim is not None and x.shape != (op.dim,):
        raise ValueError(f"operator '{op.label}' expects dim {op.dim}, got {x.shape}")
    y = np.asarray(op.fn(x), dtype=float)
    if y.shape != x.shape:
        raise ValueError(f"operator '{op.label}' returned shape {y.shape} for {x.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError(f"operator '{op.label}' produced non-finite output at {x!r}")
    return y


def zero_operator() -> MonotoneOperator:
    return MonotoneOperator(
        fn=lambda x: np.zeros_like(x),
        label="zero",
        potential=lambda x: 0.0,
        lipschitz_bound=0.0,
        closed_form_resolvent=lambda lam, x: np.array(x, dtype=float),
    )


def identity_operator() -> MonotoneOperator:
    return MonotoneOperator(
        fn=lambda x: np.array(x, dtype=float),
        label="identity",
        potential=lambda x: 0.5 * float(np.dot(x, x)),
        lipschitz_bound=1.0,
        closed_form_resolvent=lambda lam, x: np.asarray(x, dtype=float) / (1.0 + lam),
    )


def make_linear_psd(matrix, label: Optional[str] = None) -> MonotoneOperator:
    """Operator x -> Mx for M with positive-semidefinite symmetric part.

    Rejects M when the smallest eigenvalue of (M + M^T)/2 falls below
    -1e-10 * (1 + ||M||); a skew-symmetric part is fine (<Mu, u> = 0).
    A symmetric M also gets the potential x -> x.Mx/2.
    """
    M = np.array(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    n = M.shape[0]
    sym = 0.5 * (M + M.T)
    scale = 1.0 + float(np.linalg.norm(M))
    eigmin = float(np.linalg.eigvalsh(sym).min()) if n else 0.0
    if eigmin < -_PSD_SLACK * scale:
        raise ValueError(
            f"matrix is not positive semidefinite: min eig of symmetric part {eigmin}")

    potential = None
    if float(np.max(np.abs(M - M.T))) <= _SYMMETRY_TOL * scale:
        potential = lambda x: 0.5 * float(x @ (M @ x))

    eye = np.eye(n)
    return MonotoneOperator(
        fn=lambda x: M @ x,
        label=label or f"psd:{n}x{n}",
        dim=n,
        potential=potential,
        lipschitz_bound=float(np.linalg.norm(M, 2)),
        closed_form_resolvent=lambda lam, x: np.linalg.solve(eye + lam * M, x),
        matrix=M,
    )


def make_gradient(f: Callable[[np.ndarray], float],
                  grad: Callable[[np.ndarray], np.ndarray],
                  label: str = "gradient",
                  dim: Optional[int] = None,
                  check: bool = True,
                  check_dim: int = 4,
                  samples: int = 128,
                  radius: float = 5.0,
                  seed: int = 0) -> MonotoneOperator:
    """Operator grad f for convex f, the potential attached.

    Convexity is screened by the midpoint inequality
    f((a+b)/2) <= (f(a)+f(b))/2 on sampled pairs in a ball.
    """
    if check:
        d = dim if dim is not None else check_dim
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            a = rng.uniform(-radius, radius, d)
            b = rng.uniform(-radius, radius, d)
            fa, fb = float(f(a)), float(f(b))
            fm = float(f(0.5 * (a + b)))
            gap = fm - 0.5 * (fa + fb)
            if gap > 1e-10 * (1.0 + abs(fa) + abs(fb)):
                raise ValueError(
                    f"midpoint convexity check failed for '{label}': "
                    f"gap {gap} at a={a!r}, b={b!r}")
    return MonotoneOperator(fn=grad, label=label, dim=dim, potential=f)


def combine(a: MonotoneOperator, b: MonotoneOperator,
            alpha: float, beta: float,
            label: Optional[str] = None) -> MonotoneOperator:
    """alpha * A + beta * B with alpha, beta >= 0 (monotonicity is preserved)."""
    alpha, beta = float(alpha), float(beta)
    if alpha < 0.0 or beta < 0.0:
        raise ValueError("combination weights must be nonnegative")
    if a.dim is not None and b.dim is not None and a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    dim = a.dim if a.dim is not None else b.dim

    if a.matrix is not None and b.matrix is not None:
        return make_linear_psd(alpha * a.matrix + beta * b.matrix,
                               label=label or f"{alpha:g}*{a.label}+{beta:g}*{b.label}")

    potential = None
    if a.potential is not None and b.potential is not None:
        pa, pb = a.potential, b.potential
        potential = lambda x: alpha * float(pa(x)) + beta * float(pb(x))

    lip = None
    if a.lipschitz_bound is not None and b.lipschitz_bound is not None:
        lip = alpha * a.lipschitz_bound + beta * b.lipschitz_bound

    fa, fb = a.fn, b.fn
    return MonotoneOperator(
        fn=lambda x: alpha * np.asarray(fa(x), dtype=float)
        + beta * np.asarray(fb(x), dtype=float),
        label=label or f"{alpha:g}*{a.label}+{beta:g}*{b.label}",
        dim=dim,
        potential=potential,
        lipschitz_bound=lip,
    )


def quartic_operator() -> MonotoneOperator:
    """grad of f(x) = ||x||_2^4 / 4, i.e. x -> ||x||^2 x."""
    return MonotoneOperator(
        fn=lambda x: float(np.dot(x, x)) * np.asarray(x, dtype=float),
        label="quartic",
        potential=lambda x: 0.25 * float(np.dot(x, x)) ** 2,
        lipschitz_bound=300.0,  # Jacobian norm 3 r^2 on the ball r <= 10
        lipschitz_radius=10.0,
    )


def softplus_operator() -> MonotoneOperator:
    """grad of f(x) = sum_i log(1 + exp(x_i)); componentwise logistic map."""
    return MonotoneOperator(
        fn=lambda x: expit(np.asarray(x, dtype=float)),
        label="softplus",
        potential=lambda x: float(np.sum(np.logaddexp(0.0, x))),
        lipschitz_bound=0.25,  # sup sigma' = 1/4
    )


def monotonicity_margin(op: MonotoneOperator, dim: int, samples: int = 10_000,
                        radius: float = 10.0, seed: int = 0):
    """Worst sampled <Au - Av, u - v> together with its witnessing pair.

    Nonnegative (up to roundoff) for a genuinely monotone operator; a clearly
    negative margin exhibits a counterexample.
    """
    rng = np.random.default_rng(seed)
    worst = math.inf
    witness = None
    for _ in range(samples):
        u = rng.uniform(-radius, radius, dim)
        v = rng.uniform(-radius, radius, dim)
        margin = float(np.dot(evaluate(op, u) - evaluate(op, v), u - v))
        if margin < worst:
            worst, witness = margin, (u, v)
    return worst, witness


def from_label(label: str, dim: int) -> MonotoneOperator:
    """Resolve a CLI/config operator label.

    Known labels: ``zero``, ``identity``, ``quartic``, ``softplus``,
    ``psd:<csv-file>`` (square matrix, one row per line).
    """
    label = label.strip()
    if label == "zero":
        return zero_operator()
    if label == "identity":
        return identity_operator()
    if label == "quartic":
        return quartic_operator()
    if label == "softplus":
        return softplus_operator()
    if label.startswith("psd:"):
        path = Path(label.split(":", 1)[1])
        if not path.exists():
            raise ValueError(f"matrix file not found: {path}")
        M = np.atleast_2d(np.loadtxt(path, delimiter=","))
        op = make_linear_psd(M, label=f"psd:{path.name}")
        if op.dim != dim:
            raise ValueError(f"matrix is {op.dim}x{op.dim} but space has dim {dim}")
        return op
    raise ValueError(f"unknown operator label {label!r}")
