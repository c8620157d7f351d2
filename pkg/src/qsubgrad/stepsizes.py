"""Constant, diminishing and dynamic (Polyak-type) stepsize rules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import math


@dataclass(frozen=True)
class FrameworkConstants:
    """Limits of the basic-inequality coefficients of a subgradient method.

    ``alpha`` and ``beta`` weigh the descent and stepsize terms of the
    per-iteration distance bound, ``gamma`` bounds the step length relative
    to the stepsize. ``eps`` is the noise level of the oracle and ``p`` the
    Hölder order of the objective.
    """

    alpha: float
    beta: float
    gamma: float
    alpha_inf: float
    beta_sup: float
    eps: float
    p: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "alpha_inf", "beta_sup"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.alpha_inf > self.alpha or self.beta > self.beta_sup:
            raise ValueError("need alpha_inf <= alpha and beta <= beta_sup")
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")
        if not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")


class StepsizeRule:
    kind: str

    def __call__(self, k: int, f_xk: float, constants: FrameworkConstants) -> float:
        return stepsize(self, k, f_xk, constants)


@dataclass(frozen=True)
class Constant(StepsizeRule):
    v: float
    kind = "constant"

    def __post_init__(self):
        if not self.v > 0:
            raise ValueError("constant stepsize v must be positive")


@dataclass(frozen=True)
class Diminishing(StepsizeRule):
    """``v_k = c * k**(-s)``."""

    c: float
    s: float
    kind = "diminishing"

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive")
        if not 0 < self.s < 1:
            raise ValueError("s must lie in (0,1) (diminishing rule c*k^-s)")


@dataclass(frozen=True)
class Dynamic(StepsizeRule):
    """Polyak-type rule scaled by the positive part of ``f(x_k) - target``.

    ``schedule`` is cycled: a single value gives a constant relaxation,
    two values alternate. ``target`` is ``f* + eps`` and must be known.
    """

    schedule: tuple
    target: float
    p: float = 1.0
    kind = "dynamic"

    def __init__(self, schedule: Union[float, Sequence[float]], target: float, p: float = 1.0):
        sched = (float(schedule),) if isinstance(schedule, (int, float)) else tuple(map(float, schedule))
        object.__setattr__(self, "schedule", sched)
        object.__setattr__(self, "target", float(target))
        object.__setattr__(self, "p", float(p))
        if not sched:
            raise ValueError("empty relaxation schedule")
        if not all(0 < lam < 2 for lam in sched):
            raise ValueError("relaxation parameters must satisfy 0 < lambda_k < 2")
        if not 0 < self.p <= 1:
            raise ValueError("p must lie in (0, 1]")

    @property
    def lam_lower(self) -> float:
        return min(self.schedule)

    @property
    def lam_upper(self) -> float:
        return max(self.schedule)

    def lam(self, k: int) -> float:
        return self.schedule[(k - 1) % len(self.schedule)]


def stepsize(rule: StepsizeRule, k: int, f_xk: float, constants: FrameworkConstants) -> float:
    if k < 1:
        raise ValueError("iteration index k must be >= 1")
    if isinstance(rule, Constant):
        return rule.v
    if isinstance(rule, Diminishing):
        return rule.c * k ** (-rule.s)
    if isinstance(rule, Dynamic):
        gap = f_xk - rule.target
        if gap <= 0:
            return 0.0
        scale = constants.alpha * rule.lam(k) / (2.0 * constants.beta)
        return scale * gap ** (1.0 / rule.p)
    raise TypeError(f"unknown stepsize rule {rule!r}")


def diminishing_partial_sum_lower(c: float, s: float, K: int) -> float:
    """Integral lower bound ``c ((K+1)**(1-s) - 1) / (1-s)`` on ``sum_{k<=K} c k**-s``."""
    return c * ((K + 1) ** (1.0 - s) - 1.0) / (1.0 - s)


def rule_from_params(name: str, params: dict, target: float = math.nan, p: float = 1.0) -> StepsizeRule:
    """Build a rule from config-style parameters (``v``, ``c``, ``s``, ``lambda``)."""
    if name == "constant":
        return Constant(params["v"])
    if name == "diminishing":
        return Diminishing(params["c"], params["s"])
    if name == "dynamic":
        return Dynamic(params["lambda"], target, p)
    raise ValueError(f"unknown stepsize rule {name!r}")
