"""Condat primal-dual solver for the constrained group-sparse problem.

Minimizes ``|Lv x|_21 + lam * |Lh x|_21`` subject to
``||y - P x||_2 <= delta`` over coefficient fields ``x``, where Lv/Lh are
the stacked vertical/horizontal differences and P the synthesis operator.
The iteration keeps one primal variable and three duals (one per
difference family, one for the data ball) and needs no inner loops; every
prox involved is closed-form.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DivergenceError
from .model import SynthesisOperator, field_shape, zero_field
from .prox import (
    diff_horizontal,
    diff_horizontal_adjoint,
    diff_vertical,
    diff_vertical_adjoint,
    dual_ball_step,
    norm_l21,
    project_l2_ball,
)

HISTORY_FIELDS = ("iter", "objective", "feasibility_gap", "fixed_point_residual")

# Slack for the step-size product check; saturating the bound with
# xi = sigma = 1/sqrt(bound) must not be rejected over rounding.
_BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class ProblemSpec:
    """One denoising problem: observation, operator and parameters.

    Attributes
    ----------
    y : ndarray (M, N)
        Noisy observation.
    operator : SynthesisOperator
        Synthesis map from coefficient fields to images.
    lam : float
        Weight of the horizontal-difference penalty (1.0 = isotropic
        treatment of both directions).
    delta : float
        Radius of the data-fidelity ball around ``y``.
    """

    y: np.ndarray
    operator: SynthesisOperator
    lam: float
    delta: float

    def __post_init__(self):
        if self.y.shape != self.operator.image_shape:
            raise ConfigurationError(
                f"observation shape {self.y.shape} != operator image shape "
                f"{self.operator.image_shape}"
            )
        if min(self.y.shape) < 2:
            raise ConfigurationError(
                f"image {self.y.shape} too small to difference in both directions"
            )
        if not self.lam > 0:
            raise ConfigurationError(f"lam must be positive, got {self.lam}")
        if self.delta < 0:
            raise ConfigurationError(f"delta must be nonnegative, got {self.delta}")


@dataclass(frozen=True)
class SolverConfig:
    """Step sizes and loop control for the primal-dual iteration."""

    xi: float
    sigma: float
    rho: float = 1.0
    max_iters: int = 500
    fixed_point_tol: float = 0.0


@dataclass
class SolverState:
    """Primal/dual iterates plus the per-iteration history.

    ``history`` rows are ``(iter, objective, feasibility_gap,
    fixed_point_residual)`` with the objective evaluated at the new
    primal iterate, the gap as ``max(0, ||y - P x|| - delta)`` and the
    residual as ``||x_new - x_old||``.
    """

    x: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    iter: int = 0
    history: list = field(default_factory=list)


def step_bound(operator: SynthesisOperator) -> float:
    """The quantity ``max diag(P P^T) + 8 (K+1)**2`` that the step-size
    product must stay under (sufficient convergence condition)."""
    return operator.max_diag_ppt() + 8.0 * (operator.degree + 1) ** 2


def default_config(
    operator: SynthesisOperator,
    rho: float = 1.0,
    max_iters: int = 500,
    fixed_point_tol: float = 0.0,
) -> SolverConfig:
    """Equal primal/dual steps saturating the convergence bound."""
    step = 1.0 / np.sqrt(step_bound(operator))
    return SolverConfig(
        xi=step, sigma=step, rho=rho, max_iters=max_iters, fixed_point_tol=fixed_point_tol
    )


def validate_config(cfg: SolverConfig, spec: ProblemSpec) -> None:
    if not 0.0 < cfg.rho < 2.0:
        raise ConfigurationError(f"rho must lie in (0, 2), got {cfg.rho}")
    if cfg.xi <= 0 or cfg.sigma <= 0:
        raise ConfigurationError("step sizes must be positive")
    if cfg.max_iters < 1:
        raise ConfigurationError(f"max_iters must be >= 1, got {cfg.max_iters}")
    if cfg.fixed_point_tol < 0:
        raise ConfigurationError("fixed_point_tol must be nonnegative")
    product = cfg.xi * cfg.sigma * step_bound(spec.operator)
    if product > 1.0 + _BOUND_SLACK:
        raise ConfigurationError(
            f"step sizes violate the convergence condition "
            f"(xi*sigma*bound = {product:.6g} > 1)"
        )


def initial_state(spec: ProblemSpec, x0: np.ndarray | None = None) -> SolverState:
    """Zero duals; primal from ``x0`` or zero."""
    shape = field_shape(spec.operator.basis)
    if x0 is None:
        x = zero_field(spec.operator.basis)
    else:
        if x0.shape != shape:
            raise ConfigurationError(f"x0 shape {x0.shape} != field shape {shape}")
        x = x0.astype(float).copy()
    p, m, n = shape
    return SolverState(
        x=x,
        u1=np.zeros((p, m - 1, n)),
        u2=np.zeros((p, m, n - 1)),
        u3=np.zeros((m, n)),
    )


def objective(spec: ProblemSpec, x: np.ndarray) -> float:
    """Exact penalty value ``|Lv x|_21 + lam * |Lh x|_21``."""
    return norm_l21(diff_vertical(x)) + spec.lam * norm_l21(diff_horizontal(x))


def feasibility_gap(spec: ProblemSpec, x: np.ndarray) -> float:
    """How far ``P x`` sits outside the data ball (0 when feasible)."""
    return max(0.0, float(np.linalg.norm(spec.y - spec.operator.apply(x))) - spec.delta)


def _check_finite(i: int, **arrays: np.ndarray) -> None:
    for name, a in arrays.items():
        # one fast reduction; any inf/nan poisons the sum
        if not np.isfinite(a.sum()):
            raise DivergenceError(f"non-finite values in {name} at iteration {i}")


def condat_step(state: SolverState, spec: ProblemSpec, cfg: SolverConfig) -> SolverState:
    """One full primal-dual update; returns a new state with history row."""
    P = spec.operator
    xi, sg, rho = cfg.xi, cfg.sigma, cfg.rho
    x, u1, u2, u3 = state.x, state.u1, state.u2, state.u3
    i = state.iter + 1

    # in-place chains below only touch freshly allocated arrays
    xbar = diff_vertical_adjoint(u1)
    xbar += diff_horizontal_adjoint(u2)
    xbar += P.adjoint(u3)
    xbar *= -xi
    xbar += x
    x_new = xbar if rho == 1.0 else rho * xbar + (1.0 - rho) * x

    w = 2.0 * xbar
    w -= x

    p1 = diff_vertical(w)
    p1 *= sg
    p1 += u1
    u1bar = dual_ball_step(p1, 1.0)
    u1_new = u1bar if rho == 1.0 else rho * u1bar + (1.0 - rho) * u1

    p2 = diff_horizontal(w)
    p2 *= sg
    p2 += u2
    u2bar = dual_ball_step(p2, spec.lam)
    u2_new = u2bar if rho == 1.0 else rho * u2bar + (1.0 - rho) * u2

    p3 = P.apply(w)
    p3 *= sg
    p3 += u3
    u3bar = p3 - sg * project_l2_ball(p3 / sg, spec.y, spec.delta)
    u3_new = u3bar if rho == 1.0 else rho * u3bar + (1.0 - rho) * u3

    _check_finite(i, x=x_new, u1=u1_new, u2=u2_new, u3=u3_new)

    residual = float(np.linalg.norm(x_new - x))
    row = (i, objective(spec, x_new), feasibility_gap(spec, x_new), residual)
    return SolverState(
        x=x_new, u1=u1_new, u2=u2_new, u3=u3_new, iter=i, history=state.history + [row]
    )


def solve(
    spec: ProblemSpec,
    cfg: SolverConfig | None = None,
    x0: np.ndarray | None = None,
) -> tuple[np.ndarray, SolverState]:
    """Run the iteration to ``max_iters`` or the fixed-point tolerance.

    Returns the final coefficient field and the full solver state.  With
    ``fixed_point_tol > 0`` the loop stops early once
    ``||x_new - x_old|| <= tol * ||x_old||``.
    """
    if cfg is None:
        cfg = default_config(spec.operator)
    validate_config(cfg, spec)
    state = initial_state(spec, x0)
    for _ in range(cfg.max_iters):
        x_old_norm = float(np.linalg.norm(state.x))
        state = condat_step(state, spec, cfg)
        if cfg.fixed_point_tol > 0:
            residual = state.history[-1][3]
            if residual <= cfg.fixed_point_tol * max(x_old_norm, 1e-300):
                break
    return state.x, state


def write_history_csv(state: SolverState, path) -> None:
    """Dump the per-iteration history as CSV."""
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh)
        writer.writerow(HISTORY_FIELDS)
        for i, obj, gap, res in state.history:
            writer.writerow([i, f"{obj:.10g}", f"{gap:.10g}", f"{res:.10g}"])
