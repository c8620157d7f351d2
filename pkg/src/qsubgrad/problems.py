"""Catalog of quasi-convex test problems with known optimal data.

Each :class:`ProblemInstance` bundles an objective, a feasible set, the
optimal value and optimal set, and the certificates (Hölder condition,
weak sharp minima) that the convergence theory consumes.  Universally
quantified conditions are checked by random sampling only.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import itertools
import math
from typing import NamedTuple, Optional

import numpy as np

from .sets import Ball, Box, FeasibleSet, sample_in_ball, uniform_ball

INNER_TOL = 1e-9


class DomainError(ValueError):
    """Objective evaluated where it is undefined."""


@dataclass(frozen=True)
class HolderCertificate:
    """``f(x) - f* <= modulus * dist(x, X*)**order``."""

    order: float
    modulus: float

    def __post_init__(self):
        if not 0 < self.order <= 1:
            raise ValueError("Hölder order must lie in (0, 1]")
        if not self.modulus > 0:
            raise ValueError("Hölder modulus must be positive")


@dataclass(frozen=True)
class SharpCertificate:
    """``f(y) - f* >= modulus * dist(y, X*)**order`` on ``B(0, radius) ∩ X``.

    Orders below one are accepted: the rate theorems are applied with
    ``q = p`` and ``q = 2p`` for ``p`` in (0, 1].
    """

    order: float
    modulus: float
    radius: float

    def __post_init__(self):
        if not self.order > 0:
            raise ValueError("sharpness order must be positive")
        if not self.modulus > 0:
            raise ValueError("sharpness modulus must be positive")
        if not self.radius > 0:
            raise ValueError("certificate radius must be positive")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _orthogonal_unit(rng, u):
    """Random unit vector orthogonal to the unit vector ``u``."""
    for _ in range(16):
        w = rng.standard_normal(u.shape[0])
        w -= (w @ u) * u
        n = np.linalg.norm(w)
        if n > 1e-8:
            return w / n
    raise RuntimeError("could not draw an orthogonal direction")


# --------------------------------------------------------------------------
# objectives


class Objective:
    dim: int
    #: Hölder bound holds on all of R^n (otherwise only on the feasible set)
    holder_is_global = True

    def values(self, pts) -> np.ndarray:
        """Vectorised values over the last axis; ``nan`` outside the domain."""
        raise NotImplementedError

    def value(self, x) -> float:
        raise NotImplementedError

    def quasi_subgradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def eps_quasi_subgradient(self, x, eps, tilt, rng) -> np.ndarray:
        raise NotImplementedError

    def sublevel_ball(self, level):
        """``(center, radius)`` of a ball containing ``{f < level}``, or None."""
        return None


@dataclass(frozen=True, eq=False)
class _Radial(Objective):
    """Objectives of the form ``phi(||x - center||)`` with ``phi`` increasing."""

    center: np.ndarray

    def profile(self, r):
        raise NotImplementedError

    def inverse_profile(self, t: float) -> float:
        """Radius at which the profile equals ``t`` (``t >= 0``)."""
        raise NotImplementedError

    @property
    def dim(self):
        return self.center.shape[0]

    def values(self, pts):
        pts = np.asarray(pts, dtype=float)
        return self.profile(np.linalg.norm(pts - self.center, axis=-1))

    def value(self, x):
        d = np.asarray(x, dtype=float) - self.center
        if d.shape != self.center.shape:
            raise ValueError(f"expected a vector of dimension {self.dim}")
        return float(self.profile(math.sqrt(float(d @ d))))

    def quasi_subgradient(self, x):
        d = np.asarray(x, dtype=float) - self.center
        r = math.sqrt(float(d @ d))
        if r == 0.0:
            # strict sublevel set is empty: every vector is a quasi-subgradient
            g = np.zeros(self.dim)
            g[0] = 1.0
            return g
        return d / r

    def eps_quasi_subgradient(self, x, eps, tilt, rng):
        x = np.asarray(x, dtype=float)
        level = self.value(x) - eps
        if level <= 0.0:
            return self.quasi_subgradient(x)
        d = x - self.center
        r = math.sqrt(float(d @ d))
        u = d / r
        if tilt == 0.0 or self.dim == 1:
            return u
        rho = self.inverse_profile(level)
        theta = tilt * math.acos(min(1.0, rho / r))
        w = _orthogonal_unit(rng, u)
        g = math.cos(theta) * u + math.sin(theta) * w
        return g / np.linalg.norm(g)

    def sublevel_ball(self, level):
        if level <= 0.0:
            return None
        return self.center, self.inverse_profile(level)


@dataclass(frozen=True, eq=False)
class PowerNorm(_Radial):
    """``f(x) = modulus * ||x - center||**exponent``."""

    exponent: float = 1.0
    modulus: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center))
        if not 0 < self.exponent <= 1:
            raise ValueError("exponent must lie in (0, 1]")
        if not self.modulus > 0:
            raise ValueError("modulus must be positive")

    def profile(self, r):
        return self.modulus * np.power(r, self.exponent)

    def inverse_profile(self, t):
        return (t / self.modulus) ** (1.0 / self.exponent)


@dataclass(frozen=True, eq=False)
class PiecewisePower(_Radial):
    """``||x - c||**inner`` inside the unit ball around ``c``, ``||x - c||**outer`` outside."""

    outer: float = 1.0
    inner: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center))
        if not 0 < self.outer <= 1:
            raise ValueError("outer exponent must lie in (0, 1]")
        if not self.inner >= self.outer:
            raise ValueError("inner exponent must be >= outer exponent")

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r <= 1.0, np.power(r, self.inner), np.power(r, self.outer))
        return out if out.ndim else float(out)

    def inverse_profile(self, t):
        if t <= 1.0:
            return t ** (1.0 / self.inner)
        return t ** (1.0 / self.outer)


@dataclass(frozen=True, eq=False)
class LinearFractional(Objective):
    """``f(x) = (<c, x> + d) / (<e, x> + g)``, defined where the denominator is positive."""

    c: np.ndarray
    d: float
    e: np.ndarray
    g: float

    holder_is_global = False

    def __post_init__(self):
        object.__setattr__(self, "c", _frozen(self.c))
        object.__setattr__(self, "e", _frozen(self.e))
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "g", float(self.g))
        if self.c.shape != self.e.shape or self.c.ndim != 1:
            raise ValueError("c and e must be vectors of equal length")

    @property
    def dim(self):
        return self.c.shape[0]

    def values(self, pts):
        pts = np.asarray(pts, dtype=float)
        den = pts @ self.e + self.g
        num = pts @ self.c + self.d
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(den > 0, num / np.where(den > 0, den, 1.0), np.nan)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != self.c.shape:
            raise ValueError(f"expected a vector of dimension {self.dim}")
        den = float(self.e @ x) + self.g
        if den <= 0:
            raise DomainError(f"denominator {den:g} is not positive")
        return (float(self.c @ x) + self.d) / den

    def _level_normal(self, level):
        n = self.c - level * self.e
        norm = float(np.linalg.norm(n))
        if norm == 0.0:
            g = np.zeros(self.dim)
            g[0] = 1.0
            return g
        return n / norm

    def quasi_subgradient(self, x):
        # (<e,x>+g) c - (<c,x>+d) e is a positive multiple of c - f(x) e
        return self._level_normal(self.value(x))

    def eps_quasi_subgradient(self, x, eps, tilt, rng):
        # the shifted sublevel set is a half-space: its normal is the only
        # admissible unit direction, so tilt has no room to act
        return self._level_normal(self.value(x) - eps)


# --------------------------------------------------------------------------
# problem instances


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    name: str
    objective: Objective
    feasible: FeasibleSet
    optimal_value: float
    optimal_set: FeasibleSet
    holder: HolderCertificate
    sharp: Optional[SharpCertificate] = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.feasible.dim

    def with_sharp(self, cert: SharpCertificate) -> "ProblemInstance":
        return replace(self, sharp=cert)

    def anchor(self, x) -> np.ndarray:
        """Reference point for sampling around the sublevel sets seen from ``x``."""
        if isinstance(self.objective, _Radial):
            return np.array(self.objective.center)
        return self.optimal_set.project(x)

    def sample_domain(self, rng, n, radius) -> np.ndarray:
        if self.objective.holder_is_global:
            return uniform_ball(rng, n, np.zeros(self.dim), radius)
        return sample_in_ball(self.feasible, rng, n, radius)


def value(problem: ProblemInstance, x) -> float:
    return problem.objective.value(x)


def quasi_subgradient(problem: ProblemInstance, x) -> np.ndarray:
    return problem.objective.quasi_subgradient(x)


def eps_quasi_subgradient(problem: ProblemInstance, x, eps: float, tilt: float = 0.0,
                          rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Unit element of the ε-quasi-subdifferential.

    ``tilt`` in [0, 1] rotates the exact direction toward the largest
    admissible angle, which makes the oracle as adversarial as the
    definition allows.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not 0.0 <= tilt <= 1.0:
        raise ValueError("tilt must lie in [0, 1]")
    x = np.asarray(x, dtype=float)
    if problem.objective.value(x) <= problem.optimal_value + eps:
        return problem.objective.quasi_subgradient(x)
    if rng is None:
        rng = np.random.default_rng()
    return problem.objective.eps_quasi_subgradient(x, eps, tilt, rng)


def distance_to_optimum(problem: ProblemInstance, x) -> float:
    return problem.optimal_set.distance(x)


def distances(fset: FeasibleSet, pts) -> np.ndarray:
    """Row-wise distance from ``pts`` to ``fset``."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if isinstance(fset, Box):
        return np.linalg.norm(pts - np.clip(pts, fset.lower, fset.upper), axis=1)
    if isinstance(fset, Ball):
        return np.maximum(np.linalg.norm(pts - fset.center, axis=1) - fset.radius, 0.0)
    return np.array([fset.distance(p) for p in pts])


def check_subgradient_certificate(problem: ProblemInstance, x, g, eps: float = 0.0,
                                  samples: int = 10_000,
                                  rng: Optional[np.random.Generator] = None,
                                  max_rounds: int = 20) -> bool:
    """Sampled test of ``<g, y - x> <= 0`` over ``{y : f(y) < f(x) - eps}``."""
    g = np.asarray(g, dtype=float)
    if abs(np.linalg.norm(g) - 1.0) > 1e-9:
        raise ValueError("g must have unit norm")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    rng = np.random.default_rng() if rng is None else rng
    x = np.asarray(x, dtype=float)
    level = problem.objective.value(x) - eps
    if level <= problem.optimal_value:
        return True
    center = problem.anchor(x)
    half = 2.0 * max(1.0, float(np.linalg.norm(x - center)))
    ball = problem.objective.sublevel_ball(level)
    if ball is not None:
        # the sublevel ball fits inside the default box; shrink onto it
        center, rho = np.asarray(ball[0]), ball[1]
        half = min(half, rho)
    found = 0
    for _ in range(max_rounds):
        y = rng.uniform(center - half, center + half, size=(samples, problem.dim))
        fy = problem.objective.values(y)
        y = y[fy < level]
        if y.size and np.max((y - x) @ g) > INNER_TOL:
            return False
        found += y.shape[0]
        if found >= samples:
            break
    return True


def lemma41_slack(problem: ProblemInstance, x, g, eps: float, x_star) -> float:
    """``<g, x - x*> - ((f(x) - f* - eps)/L)**(1/p)``; nonnegative when the bound holds."""
    x = np.asarray(x, dtype=float)
    gap = problem.objective.value(x) - problem.optimal_value - eps
    p, L = problem.holder.order, problem.holder.modulus
    return float(np.asarray(g) @ (x - np.asarray(x_star))) - (max(gap, 0.0) / L) ** (1.0 / p)


def validate_holder(problem: ProblemInstance, samples: int = 10_000, box_radius: float = 10.0,
                    rng: Optional[np.random.Generator] = None,
                    cert: Optional[HolderCertificate] = None) -> bool:
    cert = problem.holder if cert is None else cert
    rng = np.random.default_rng() if rng is None else rng
    pts = problem.sample_domain(rng, samples, box_radius)
    gap = problem.objective.values(pts) - problem.optimal_value
    bound = cert.modulus * distances(problem.optimal_set, pts) ** cert.order
    ok = np.isnan(gap) | (gap <= bound + INNER_TOL)
    return bool(np.all(ok))


def validate_sharp(problem: ProblemInstance, cert: Optional[SharpCertificate] = None,
                   samples: int = 10_000, rng: Optional[np.random.Generator] = None) -> bool:
    cert = problem.sharp if cert is None else cert
    if cert is None:
        raise ValueError("problem carries no sharpness certificate")
    rng = np.random.default_rng() if rng is None else rng
    pts = sample_in_ball(problem.feasible, rng, samples, cert.radius)
    if pts.shape[0] == 0:
        return True
    gap = problem.objective.values(pts) - problem.optimal_value
    growth = cert.modulus * distances(problem.optimal_set, pts) ** cert.order
    return bool(np.all(gap >= growth - INNER_TOL))


def check_quasiconvex(problem: ProblemInstance, samples: int = 10_000, radius: float = 10.0,
                      rng: Optional[np.random.Generator] = None) -> bool:
    """Sampled ``f((1-a)x + a y) <= max(f(x), f(y))`` on the objective's domain."""
    rng = np.random.default_rng() if rng is None else rng
    xs = problem.sample_domain(rng, samples, radius)
    ys = problem.sample_domain(rng, samples, radius)
    n = min(len(xs), len(ys))
    xs, ys = xs[:n], ys[:n]
    a = rng.uniform(size=(n, 1))
    mid = problem.objective.values((1 - a) * xs + a * ys)
    hi = np.maximum(problem.objective.values(xs), problem.objective.values(ys))
    return bool(np.all(mid <= hi + 1e-10))


def validate_instance(problem: ProblemInstance, samples: int = 2_000,
                      rng: Optional[np.random.Generator] = None) -> list[str]:
    """Sampled consistency checks of the stored optimal data; returns failures."""
    rng = np.random.default_rng() if rng is None else rng
    errors = []
    xstar = problem.optimal_set.sample(rng, samples)
    if not all(problem.feasible.contains(p, 1e-12) for p in xstar[:200]):
        errors.append("optimal set is not contained in the feasible set")
    fstar = problem.objective.values(xstar)
    if np.any(np.abs(fstar - problem.optimal_value) > 1e-12):
        errors.append("f differs from f* on the optimal set")
    pts = problem.feasible.sample(rng, samples)
    if np.any(problem.objective.values(pts) < problem.optimal_value - 1e-12):
        errors.append("found a feasible point below f*")
    return errors


# --------------------------------------------------------------------------
# catalog


def _default_box(dim: int) -> Box:
    return Box.cube(dim, -10.0, 10.0)


def _radius_for(feasible: FeasibleSet) -> float:
    r = feasible.bounding_radius()
    return r if math.isfinite(r) else 100.0


def radial_sharp_certificate(objective: _Radial, order: float, radius: float) -> SharpCertificate:
    """Largest modulus for ``order`` on ``B(0, radius)`` for a radial objective.

    The farthest point of the ball from the center sits at distance
    ``radius + ||center||``; the modulus is the minimum of
    ``profile(r) / r**order`` over ``(0, that distance]``.
    """
    far = radius + float(np.linalg.norm(objective.center))
    if isinstance(objective, PowerNorm):
        if order < objective.exponent:
            raise ValueError("no positive modulus: order is below the objective exponent")
        eta = objective.modulus * far ** (objective.exponent - order)
    elif isinstance(objective, PiecewisePower):
        if order < objective.inner:
            raise ValueError("no positive modulus: order is below the inner exponent")
        eta = min(1.0, far) ** (objective.inner - order)
        if far > 1.0:
            eta = min(eta, far ** (objective.outer - order))
    else:
        raise TypeError("radial objective expected")
    return SharpCertificate(order=order, modulus=float(eta), radius=float(radius))


def _require_center_feasible(center, feasible):
    if not feasible.contains(center, 1e-12):
        raise ValueError("objective center must lie in the feasible set")


def power_norm(center=(0.0, 0.0), exponent: float = 1.0, modulus: float = 1.0,
               feasible: Optional[FeasibleSet] = None) -> ProblemInstance:
    obj = PowerNorm(center, exponent, modulus)
    feasible = _default_box(obj.dim) if feasible is None else feasible
    _require_center_feasible(obj.center, feasible)
    return ProblemInstance(
        name="power_norm",
        objective=obj,
        feasible=feasible,
        optimal_value=0.0,
        optimal_set=Box.point(obj.center),
        holder=HolderCertificate(exponent, modulus),
        sharp=radial_sharp_certificate(obj, exponent, _radius_for(feasible)),
        params={"center": list(map(float, obj.center)), "exponent": exponent,
                "modulus": modulus},
    )


def piecewise_power(center=(0.0, 0.0), outer: float = 1.0, inner: float = 2.0,
                    feasible: Optional[FeasibleSet] = None) -> ProblemInstance:
    obj = PiecewisePower(center, outer, inner)
    feasible = _default_box(obj.dim) if feasible is None else feasible
    _require_center_feasible(obj.center, feasible)
    return ProblemInstance(
        name="piecewise_power",
        objective=obj,
        feasible=feasible,
        optimal_value=0.0,
        optimal_set=Box.point(obj.center),
        holder=HolderCertificate(outer, 1.0),
        sharp=radial_sharp_certificate(obj, inner, _radius_for(feasible)),
        params={"center": list(map(float, obj.center)), "outer": outer, "inner": inner},
    )


def _vertices(box: Box) -> np.ndarray:
    return np.array(list(itertools.product(*zip(box.lower, box.upper))), dtype=float)


def linear_fractional(c=(1.0, 0.0), d: float = 1.0, e=(0.0, 1.0), g: float = 2.0,
                      feasible: Optional[Box] = None,
                      sharp: Optional[SharpCertificate] = None) -> ProblemInstance:
    """Linear-fractional objective over a box.

    The optimum of a quasi-linear ratio over a box is attained on a face
    spanned by optimal vertices, so enumeration gives ``f*`` and ``X*``.
    The Hölder modulus is ``max ||c - t e|| / min_{X*} (<e,x*> + g)`` over
    the range of values ``t`` taken on the box: that ratio bounds how far
    each level hyperplane can sit from ``X*``.
    """
    obj = LinearFractional(c, d, e, g)
    if feasible is None:
        feasible = Box.cube(obj.dim, 0.0, 1.0)
    if not isinstance(feasible, Box):
        raise ValueError("linear_fractional supports box feasible sets only")
    den_min = obj.g + float(np.sum(np.minimum(obj.e * feasible.lower, obj.e * feasible.upper)))
    if den_min <= 0:
        raise ValueError("denominator <e,x>+g must stay positive on the feasible set")
    verts = _vertices(feasible)
    vals = obj.values(verts)
    fstar = float(vals.min())
    best = verts[vals <= fstar + 1e-14]
    xstar = Box(best.min(axis=0), best.max(axis=0))
    fmax = float(vals.max())
    den_star = obj.g + float(np.sum(np.minimum(obj.e * xstar.lower, obj.e * xstar.upper)))
    modulus = max(float(np.linalg.norm(obj.c - t * obj.e)) for t in (fstar, fmax)) / den_star
    return ProblemInstance(
        name="linear_fractional",
        objective=obj,
        feasible=feasible,
        optimal_value=fstar,
        optimal_set=xstar,
        holder=HolderCertificate(1.0, modulus),
        sharp=sharp,
        params={"c": list(map(float, obj.c)), "d": obj.d, "e": list(map(float, obj.e)),
                "g": obj.g},
    )


def default_linear_fractional() -> ProblemInstance:
    """``(x1 + 1) / (x2 + 2)`` on the unit square, minimised at ``(0, 1)``.

    With ``t = 1 - x2`` the gap is ``(3 x1 + t) / (3 (3 - t)) >= (x1 + t) / 9``,
    hence sharp of order one with modulus 1/9 on the whole square.
    """
    prob = linear_fractional()
    return prob.with_sharp(SharpCertificate(1.0, 1.0 / 9.0, prob.feasible.bounding_radius()))


CATALOG = {
    "power_norm": power_norm,
    "piecewise_power": piecewise_power,
    "linear_fractional": linear_fractional,
}


def make_problem(family: str, feasible: Optional[FeasibleSet] = None, **params) -> ProblemInstance:
    try:
        factory = CATALOG[family]
    except KeyError:
        raise ValueError(f"unknown problem family {family!r}") from None
    return factory(feasible=feasible, **params)


class CertificateCounterexample(NamedTuple):
    label: str
    problem: ProblemInstance
    certificate: object  # HolderCertificate or SharpCertificate
    witness: tuple


def counterexample_certificates() -> list[CertificateCounterexample]:
    """Deliberately invalid certificates, each with a point where it fails.

    - ``|x|`` scaled by 2 against Hölder modulus 1 (witness ``(1, 0)``).
    - ``|x|`` against order-2 sharpness with modulus ``2/r`` on ``B(0, r)``
      (witness on the sphere of radius ``r``).
    - the unit-square linear-fractional problem against sharpness modulus 1
      (witness ``(1, 1)``: gap 1/3 at distance 1).
    """
    r = 5.0
    norm = power_norm(exponent=1.0, modulus=1.0)
    return [
        CertificateCounterexample("holder_modulus_too_small",
                                  power_norm(exponent=1.0, modulus=2.0),
                                  HolderCertificate(1.0, 1.0), (1.0, 0.0)),
        CertificateCounterexample("sharp_modulus_doubled", norm,
                                  SharpCertificate(2.0, 2.0 / r, r), (r, 0.0)),
        CertificateCounterexample("linear_fractional_modulus_too_large",
                                  default_linear_fractional(),
                                  SharpCertificate(1.0, 1.0, math.sqrt(2.0)), (1.0, 1.0)),
    ]
