"""Projected quasi-subgradient iterations and the shared run loop.

Three methods are provided: the standard method (exact unit
quasi-subgradient), the inexact method (unit ε-quasi-subgradient) and the
conditional method (quasi-subgradient plus a unit normal of the feasible
set on its boundary).  All three satisfy the same per-iteration distance
bound with method-specific constants, see :func:`framework_constants`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np

from .problems import HolderCertificate, ProblemInstance, eps_quasi_subgradient
from .sets import DEFAULT_TOL
from .stepsizes import Dynamic, FrameworkConstants, StepsizeRule, stepsize


@dataclass(frozen=True)
class Standard:
    name = "standard"


@dataclass(frozen=True)
class Inexact:
    eps: float
    tilt: float = 0.0
    name = "inexact"

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("inexact method needs eps > 0")
        if not 0.0 <= self.tilt <= 1.0:
            raise ValueError("tilt must lie in [0, 1]")


@dataclass(frozen=True)
class Conditional:
    boundary_tol: float = DEFAULT_TOL
    name = "conditional"


SolverKind = (Standard, Inexact, Conditional)


@dataclass(frozen=True)
class RunConfig:
    x1: tuple
    max_iter: int
    gap_stop: Optional[float] = None
    record_points: bool = False
    random_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x1", tuple(float(v) for v in np.atleast_1d(self.x1)))
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.gap_stop is not None and self.gap_stop < 0:
            raise ValueError("gap_stop must be nonnegative")


@dataclass
class IterationRecord:
    k: int
    f_value: float
    gap: float
    dist: float
    stepsize: float
    step_length: float
    h1_residual: float
    point: Optional[np.ndarray] = None

    @property
    def dist_sq(self) -> float:
        return self.dist * self.dist


@dataclass
class IterationTrace:
    records: list
    problem: str
    solver: object
    rule: StepsizeRule
    constants: FrameworkConstants
    terminated_reason: str
    #: distance to the optimal set of the iterate produced by the last record
    final_dist: float = math.nan
    max_iterate_norm: float = 0.0
    final_point: Optional[np.ndarray] = None
    optimal_value: float = 0.0

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def dist_sq(self) -> np.ndarray:
        """Squared distances of ``x_1 .. x_{n+1}`` (includes the final iterate)."""
        d = self.column("dist")
        return np.append(d, self.final_dist) ** 2

    @property
    def gaps(self) -> np.ndarray:
        return self.column("gap")


def framework_constants(kind, holder: HolderCertificate) -> FrameworkConstants:
    """Coefficients of the basic inequality satisfied by each method.

    Standard and inexact methods: ``alpha = 2 L**(-1/p)``, ``beta = gamma = 1``.
    Conditional method: same ``alpha``, ``beta = 4``, ``gamma = 2``.
    """
    p, L = holder.order, holder.modulus
    alpha = 2.0 * L ** (-1.0 / p)
    if isinstance(kind, Conditional):
        beta, gamma, eps = 4.0, 2.0, 0.0
    elif isinstance(kind, Inexact):
        beta, gamma, eps = 1.0, 1.0, kind.eps
    elif isinstance(kind, Standard):
        beta, gamma, eps = 1.0, 1.0, 0.0
    else:
        raise TypeError(f"unknown solver kind {kind!r}")
    return FrameworkConstants(alpha=alpha, beta=beta, gamma=gamma, alpha_inf=alpha,
                              beta_sup=beta, eps=eps, p=p)


def step(kind, problem: ProblemInstance, x, v: float,
         rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """One projected update ``x+ = P_X(x - v * direction)``."""
    x = np.asarray(x, dtype=float)
    X = problem.feasible
    tol = kind.boundary_tol if isinstance(kind, Conditional) else DEFAULT_TOL
    if not X.contains(x, tol):
        raise ValueError("current iterate is infeasible")
    if v < 0:
        raise ValueError("stepsize must be nonnegative")
    if isinstance(kind, Inexact):
        g = eps_quasi_subgradient(problem, x, kind.eps, kind.tilt, rng)
    else:
        g = problem.objective.quasi_subgradient(x)
    if isinstance(kind, Conditional):
        g = g + X.unit_normal(x, tol)
    return X.project(x - v * g)


def run(kind, problem: ProblemInstance, rule: StepsizeRule, config: RunConfig) -> IterationTrace:
    """Iterate until ``max_iter``, the gap threshold, or a zero dynamic step.

    Each record holds ``f(x_k)``, the gap, ``dist(x_k, X*)``, ``v_k``,
    ``||x_{k+1} - x_k||`` and the slack of the basic inequality at ``k``
    (``-inf`` when ``gap <= eps`` makes the inequality vacuous).
    """
    constants = framework_constants(kind, problem.holder)
    rng = np.random.default_rng(config.random_seed)
    fstar = problem.optimal_value
    eps, alpha, beta, inv_p = constants.eps, constants.alpha, constants.beta, 1.0 / constants.p
    f = problem.objective.value
    dist = problem.optimal_set.distance

    x = problem.feasible.project(np.asarray(config.x1, dtype=float))
    fx = f(x)
    dx = dist(x)
    max_norm = float(np.linalg.norm(x))
    records = []
    reason = "max_iter"
    for k in range(1, config.max_iter + 1):
        gap = fx - fstar
        v = stepsize(rule, k, fx, constants)
        x_next = step(kind, problem, x, v, rng)
        f_next = f(x_next)
        d_next = dist(x_next)
        if gap > eps:
            h1 = d_next * d_next - dx * dx + alpha * v * (gap - eps) ** inv_p - beta * v * v
        else:
            h1 = -math.inf
        records.append(IterationRecord(
            k=k, f_value=fx, gap=gap, dist=dx, stepsize=v,
            step_length=float(np.linalg.norm(x_next - x)), h1_residual=h1,
            point=x.copy() if config.record_points else None,
        ))
        max_norm = max(max_norm, float(np.linalg.norm(x_next)))
        x, fx, dx = x_next, f_next, d_next
        if config.gap_stop is not None and gap <= config.gap_stop:
            reason = "gap_stop"
            break
        if isinstance(rule, Dynamic) and v == 0.0 and gap <= eps:
            reason = "entered_optimal_set"
            break
    return IterationTrace(
        records=records, problem=problem.name, solver=kind, rule=rule, constants=constants,
        terminated_reason=reason, final_dist=dx, max_iterate_norm=max_norm,
        final_point=x.copy(), optimal_value=fstar,
    )
