"""Closed convex feasible sets with exact Euclidean projection.

Every set supports ``project``, ``contains``, ``is_interior`` and
``unit_normal``; the last two are what the conditional subgradient step
needs to pick an element of the normal cone on the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

DEFAULT_TOL = 1e-9


def _as_vector(x, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != dim:
        raise ValueError(f"expected a vector of dimension {dim}, got shape {x.shape}")
    return x


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


class FeasibleSet:
    """Base class. Subclasses are immutable value objects."""

    dim: int

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def distance(self, x) -> float:
        x = _as_vector(x, self.dim)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tol: float = 0.0) -> bool:
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        return self.distance(x) <= tol

    def boundary_distance(self, x) -> float:
        """Distance from a member point to the boundary of the set."""
        raise NotImplementedError

    def is_interior(self, x, tol: float = DEFAULT_TOL) -> bool:
        self._require_member(x, tol)
        return self.boundary_distance(x) > tol

    def unit_normal(self, x, tol: float = DEFAULT_TOL) -> np.ndarray:
        """Unit element of the normal cone at ``x``; zero in the interior."""
        self._require_member(x, tol)
        if self.boundary_distance(x) > tol:
            return np.zeros(self.dim)
        return self._boundary_normal(_as_vector(x, self.dim), tol)

    def _boundary_normal(self, x: np.ndarray, tol: float) -> np.ndarray:
        raise NotImplementedError

    def _require_member(self, x, tol):
        if not self.contains(x, tol):
            raise ValueError("point lies outside the feasible set")

    def bounding_radius(self) -> float:
        """Radius of the smallest origin-centred ball containing the set."""
        return math.inf

    def sample(self, rng: np.random.Generator, n: int, radius: float = 10.0) -> np.ndarray:
        """Draw ``n`` points of the set (restricted to ``B(0, radius)`` when unbounded)."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class WholeSpace(FeasibleSet):
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    def project(self, x):
        return _as_vector(x, self.dim).copy()

    def boundary_distance(self, x):
        return math.inf

    def sample(self, rng, n, radius=10.0):
        return _uniform_ball(rng, n, np.zeros(self.dim), radius)

    def __eq__(self, other):
        return isinstance(other, WholeSpace) and other.dim == self.dim

    def __hash__(self):
        return hash(("whole", self.dim))


@dataclass(frozen=True, eq=False)
class Box(FeasibleSet):
    """Axis-aligned box; ``lower == upper`` in a coordinate is allowed (faces, points)."""

    lower: np.ndarray
    upper: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        lower, upper = _frozen(self.lower), _frozen(self.upper)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("lower and upper must be vectors of equal length")
        if np.any(lower > upper):
            raise ValueError("box is empty: lower[i] > upper[i] for some i")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("box bounds must be finite")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "dim", lower.shape[0])

    @classmethod
    def point(cls, x) -> "Box":
        return cls(x, x)

    @classmethod
    def cube(cls, dim: int, lo: float, hi: float) -> "Box":
        return cls(np.full(dim, lo), np.full(dim, hi))

    def project(self, x):
        return np.clip(_as_vector(x, self.dim), self.lower, self.upper)

    def boundary_distance(self, x):
        x = _as_vector(x, self.dim)
        return float(np.min(np.minimum(x - self.lower, self.upper - x)))

    def _boundary_normal(self, x, tol):
        at_upper = x >= self.upper - tol
        at_lower = x <= self.lower + tol
        normal = at_upper.astype(float) - at_lower.astype(float)
        norm = np.linalg.norm(normal)
        if norm == 0.0:
            # only degenerate coordinates are active; both signs are normal there
            normal = np.zeros(self.dim)
            normal[np.flatnonzero(at_upper)[0]] = 1.0
            return normal
        return normal / norm

    def bounding_radius(self):
        return float(np.linalg.norm(np.maximum(np.abs(self.lower), np.abs(self.upper))))

    def sample(self, rng, n, radius=10.0):
        return rng.uniform(self.lower, self.upper, size=(n, self.dim))

    def __eq__(self, other):
        return (isinstance(other, Box) and np.array_equal(self.lower, other.lower)
                and np.array_equal(self.upper, other.upper))

    def __hash__(self):
        return hash(("box", self.lower.tobytes(), self.upper.tobytes()))


@dataclass(frozen=True, eq=False)
class Ball(FeasibleSet):
    center: np.ndarray
    radius: float
    dim: int = field(init=False)

    def __post_init__(self):
        center = _frozen(self.center)
        if center.ndim != 1:
            raise ValueError("center must be a vector")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "dim", center.shape[0])

    def project(self, x):
        x = _as_vector(x, self.dim)
        d = x - self.center
        r = np.linalg.norm(d)
        if r <= self.radius:
            return x.copy()
        return self.center + (self.radius / r) * d

    def boundary_distance(self, x):
        x = _as_vector(x, self.dim)
        return float(self.radius - np.linalg.norm(x - self.center))

    def _boundary_normal(self, x, tol):
        d = x - self.center
        return d / np.linalg.norm(d)

    def bounding_radius(self):
        return float(np.linalg.norm(self.center) + self.radius)

    def sample(self, rng, n, radius=10.0):
        return _uniform_ball(rng, n, self.center, self.radius)

    def __eq__(self, other):
        return (isinstance(other, Ball) and np.array_equal(self.center, other.center)
                and self.radius == other.radius)

    def __hash__(self):
        return hash(("ball", self.center.tobytes(), self.radius))


@dataclass(frozen=True, eq=False)
class Halfspace(FeasibleSet):
    """The set ``{x : <normal, x> <= offset}``."""

    normal: np.ndarray
    offset: float
    dim: int = field(init=False)

    def __post_init__(self):
        normal = _frozen(self.normal)
        if normal.ndim != 1:
            raise ValueError("normal must be a vector")
        if not np.any(normal != 0):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "dim", normal.shape[0])

    def project(self, x):
        x = _as_vector(x, self.dim)
        excess = float(self.normal @ x) - self.offset
        if excess <= 0:
            return x.copy()
        return x - (excess / float(self.normal @ self.normal)) * self.normal

    def boundary_distance(self, x):
        x = _as_vector(x, self.dim)
        return (self.offset - float(self.normal @ x)) / float(np.linalg.norm(self.normal))

    def _boundary_normal(self, x, tol):
        return self.normal / np.linalg.norm(self.normal)

    def sample(self, rng, n, radius=10.0):
        # not uniform: violators are mapped onto the bounding hyperplane
        pts = _uniform_ball(rng, n, np.zeros(self.dim), radius)
        return np.array([self.project(p) for p in pts])

    def __eq__(self, other):
        return (isinstance(other, Halfspace) and np.array_equal(self.normal, other.normal)
                and self.offset == other.offset)

    def __hash__(self):
        return hash(("half", self.normal.tobytes(), self.offset))


def _uniform_ball(rng, n, center, radius):
    dim = center.shape[0]
    direction = rng.standard_normal((n, dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    r = radius * rng.uniform(size=(n, 1)) ** (1.0 / dim)
    return center + r * direction


def uniform_ball(rng: np.random.Generator, n: int, center, radius: float) -> np.ndarray:
    """Uniform samples from the closed ball ``B(center, radius)``."""
    return _uniform_ball(rng, n, np.asarray(center, dtype=float), float(radius))


def sample_in_ball(fset: FeasibleSet, rng: np.random.Generator, n: int, radius: float,
                   max_rounds: int = 200) -> np.ndarray:
    """Rejection-sample ``n`` points of ``B(0, radius) ∩ fset``.

    Returns fewer than ``n`` rows only if the intersection is too thin to hit.
    """
    dim = fset.dim
    accepted = []
    total = 0
    if isinstance(fset, Box):
        lo = np.maximum(fset.lower, -radius)
        hi = np.minimum(fset.upper, radius)
        if np.any(lo > hi):
            return np.empty((0, dim))
    for _ in range(max_rounds):
        if isinstance(fset, Box):
            pts = rng.uniform(lo, hi, size=(max(n, 64), dim))
            keep = np.linalg.norm(pts, axis=1) <= radius
        else:
            pts = _uniform_ball(rng, max(n, 64), np.zeros(dim), radius)
            keep = np.array([fset.contains(p) for p in pts])
        accepted.append(pts[keep])
        total += int(keep.sum())
        if total >= n:
            break
    out = np.concatenate(accepted) if accepted else np.empty((0, dim))
    return out[:n]


# module-level spellings of the set operations


def project(fset: FeasibleSet, x) -> np.ndarray:
    return fset.project(x)


def contains(fset: FeasibleSet, x, tol: float = 0.0) -> bool:
    return fset.contains(x, tol)


def is_interior(fset: FeasibleSet, x, tol: float = DEFAULT_TOL) -> bool:
    return fset.is_interior(x, tol)


def unit_normal(fset: FeasibleSet, x, tol: float = DEFAULT_TOL) -> np.ndarray:
    return fset.unit_normal(x, tol)
