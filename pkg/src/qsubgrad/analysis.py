"""Checks of recorded traces against the quantitative convergence theory.

Everything here is a pure function of an :class:`IterationTrace` (or of
scalar parameters), so checks can run on traces produced elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import math
from typing import NamedTuple, Optional

import numpy as np

from .problems import ProblemInstance, SharpCertificate, validate_sharp
from .solvers import IterationTrace
from .stepsizes import Constant, Diminishing, Dynamic, FrameworkConstants

RESIDUAL_TOL = 1e-9
H3_TOL = 1e-10
# recursion sweeps can reach magnitudes where 1e-9 is below double resolution
SWEEP_RTOL = 1e-12


class FitError(ValueError):
    pass


# --------------------------------------------------------------------------
# framework conditions


def check_h1(trace: IterationTrace, constants: Optional[FrameworkConstants] = None) -> float:
    """Largest slack of the basic inequality over iterations with ``gap > eps``.

    Returns ``-inf`` when no iteration qualifies (vacuous condition).  The
    condition holds when the result is at most ``RESIDUAL_TOL``.
    """
    c = trace.constants if constants is None else constants
    u = trace.dist_sq
    gap = trace.gaps
    v = trace.column("stepsize")
    active = gap > c.eps
    if not np.any(active):
        return -math.inf
    descent = c.alpha * v[active] * (gap[active] - c.eps) ** (1.0 / c.p)
    res = u[1:][active] - u[:-1][active] + descent - c.beta * v[active] ** 2
    return float(np.max(res))


def check_h3(trace: IterationTrace, constants: Optional[FrameworkConstants] = None) -> float:
    """Largest ``||x_{k+1} - x_k|| - gamma * v_k``; holds when at most ``H3_TOL``."""
    c = trace.constants if constants is None else constants
    if not trace.records:
        return -math.inf
    return float(np.max(trace.column("step_length") - c.gamma * trace.column("stepsize")))


# --------------------------------------------------------------------------
# iteration complexity


@dataclass(frozen=True)
class ComplexityReport:
    kind: str
    K: int
    K_exact: float
    value_bound: float
    delta: float
    achieved_min: float = math.nan
    achieved_at: Optional[int] = None
    holds: Optional[bool] = None


def _budget(k_exact: float) -> int:
    # absorb representation error so that e.g. 250.00000000000003 -> 250
    return max(1, math.ceil(k_exact * (1.0 - 1e-12)))


def complexity_budget(kind: str, problem: ProblemInstance, rule, constants: FrameworkConstants,
                      delta: float, x1) -> ComplexityReport:
    """Iteration budget and value bound of the complexity theorem for ``rule``.

    ``kind`` is ``"K1"`` (constant), ``"K2"`` (diminishing) or ``"K3"``
    (dynamic).  For ``K2`` the bound depends on ``k``; the report then stores
    ``f* + eps`` and :func:`check_complexity` subtracts the ``k``-dependent
    term from each ``f(x_k)``.
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    expected = {"K1": Constant, "K2": Diminishing, "K3": Dynamic}
    if kind not in expected:
        raise ValueError(f"unknown complexity kind {kind!r}")
    if not isinstance(rule, expected[kind]):
        raise ValueError(f"{kind} requires a {expected[kind].kind} stepsize rule")
    c = constants
    x1 = problem.feasible.project(np.asarray(x1, dtype=float))
    d2 = problem.optimal_set.distance(x1) ** 2
    fstar = problem.optimal_value
    if kind == "K1":
        k_exact = d2 / (c.alpha_inf * rule.v * delta)
        bound = fstar + (c.beta_sup * rule.v / c.alpha_inf + delta) ** c.p + c.eps
    elif kind == "K2":
        k_exact = ((1.0 - rule.s) * d2 / (c.alpha_inf * rule.c * delta)) ** (1.0 / (1.0 - rule.s))
        bound = fstar + c.eps
    else:
        lam, lam_bar = rule.lam_lower, rule.lam_upper
        k_exact = 4.0 * c.beta_sup * d2 / (c.alpha_inf ** 2 * lam * (2.0 - lam_bar) * delta ** 2)
        bound = fstar + delta ** c.p + c.eps
    return ComplexityReport(kind=kind, K=_budget(k_exact), K_exact=k_exact,
                            value_bound=bound, delta=delta)


def check_complexity(trace: IterationTrace, report: ComplexityReport) -> ComplexityReport:
    f = trace.column("f_value")
    K = report.K
    if report.kind == "K2":
        c = trace.constants
        rule = trace.rule
        k = np.arange(1, len(f) + 1, dtype=float)
        f = f - (c.beta_sup * rule.c * k ** (-rule.s) / c.alpha_inf + report.delta) ** c.p
    window = f[:K]
    if window.size == 0:
        raise ValueError("empty trace")
    i = int(np.argmin(window))
    achieved = float(window[i])
    holds = achieved <= report.value_bound + RESIDUAL_TOL
    if len(f) < K and not holds and trace.terminated_reason != "entered_optimal_set":
        raise ValueError(f"trace has {len(f)} records, budget needs {K}")
    return replace(report, achieved_min=achieved, achieved_at=i + 1, holds=holds)


# --------------------------------------------------------------------------
# rate fitting


@dataclass(frozen=True)
class RateFit:
    model: str
    rate: float  # tau for "geometric", exponent e for "power"
    amplitude: float
    floor: float
    r_squared: float
    window: tuple

    @property
    def reliable(self) -> bool:
        if self.model == "geometric":
            return self.r_squared >= 0.9 and 0.0 < self.rate < 1.0
        return self.r_squared >= 0.9


def _linear_fit(t, y):
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return float(slope), float(intercept), r2


def fit_geometric(series, floor: float = 0.0, burn_in: int = 0) -> RateFit:
    """Fit ``u_k ~ A * tau**k + floor`` by regressing ``log(u_k - floor)`` on ``k``.

    ``k`` counts from 1 at the first series entry.
    """
    u = np.asarray(series, dtype=float)
    idx = np.arange(burn_in, u.size)
    w = u[burn_in:] - floor
    if w.size < 5:
        raise FitError("need at least 5 points to fit")
    if np.any(w <= 0):
        raise FitError("series must exceed the floor on the fit window")
    slope, intercept, r2 = _linear_fit(idx + 1.0, np.log(w))
    return RateFit("geometric", math.exp(slope), math.exp(intercept), floor, r2,
                   (burn_in + 1, u.size))


def fit_power(series, burn_in: int = 0) -> RateFit:
    """Fit ``u_k ~ A * k**(-e)`` by regressing ``log u_k`` on ``log k``."""
    u = np.asarray(series, dtype=float)
    k = np.arange(burn_in, u.size) + 1.0
    w = u[burn_in:]
    if w.size < 5:
        raise FitError("need at least 5 points to fit")
    if np.any(w <= 0):
        raise FitError("series must be positive on the fit window")
    slope, intercept, r2 = _linear_fit(np.log(k), np.log(w))
    return RateFit("power", -slope, math.exp(intercept), 0.0, r2, (burn_in + 1, u.size))


# --------------------------------------------------------------------------
# convergence-rate envelopes

THEOREMS = ("t3.3i", "t3.3ii", "t3.4i", "t3.4ii", "t3.4iii", "t3.5i", "t3.5ii")
_RULE_FOR = {"t3.3": Constant, "t3.4": Dynamic, "t3.5": Diminishing}


@dataclass
class EnvelopeReport:
    theorem: str
    status: str  # "pass", "fail" or "inapplicable"
    reason: str = ""
    N: Optional[int] = None
    floor: Optional[float] = None
    required_tau: Optional[float] = None
    max_violation: Optional[float] = None
    fit: Optional[RateFit] = None
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status != "fail"

    def __bool__(self):
        return self.holds


def default_burn_in(trace: IterationTrace) -> int:
    """First index from which a dynamic-step trace has non-increasing ``dist^2``.

    Other rules (or traces that never settle) use 10% of the trace.
    """
    u = trace.dist_sq
    n = len(trace.records)
    if isinstance(trace.rule, Dynamic):
        up = np.flatnonzero(np.diff(u) > 0)
        start = 1 if up.size == 0 else int(up[-1]) + 2
        if start <= n:
            return start
    return max(1, n // 10)


def required_tau(u: np.ndarray, N: int, floor: float, tol: float = RESIDUAL_TOL) -> float:
    """Smallest ``tau`` with ``u[N+k] <= tau**k u[N] + floor`` for all recorded ``k >= 1``.

    ``u`` is 1-indexed through ``u[N - 1]``; ``inf`` means no ``tau`` works.
    """
    base = u[N - 1]
    tail = u[N:]
    if tail.size == 0:
        return 0.0
    excess = tail - floor - tol
    k = np.arange(1, tail.size + 1, dtype=float)
    pos = excess > 0
    if not np.any(pos):
        return 0.0
    if base <= 0:
        return math.inf
    return float(np.max((excess[pos] / base) ** (1.0 / k[pos])))


def _excess_fit(u, N, floor, tol=0.0):
    """Geometric fit of the leading run of points above ``floor + tol`` from ``N``."""
    w = u[N - 1:]
    above = w > floor + tol
    run = int(np.argmin(above)) if not np.all(above) else w.size
    if run < 5:
        return None
    try:
        return fit_geometric(w[:run], floor)
    except FitError:
        return None


def _geometric_verdict(u, N, floor, tol):
    """Existence of a linear rate towards ``floor`` on a finite trace.

    Requires a finite-horizon ``tau < 1`` and either an excess over the
    floor that has died out over the last quarter of the trace or a
    reliable geometric fit of the excess.  The second part is what rules
    out a stationary oscillation above the floor, which any finite trace
    would otherwise satisfy with ``tau`` close to one.
    """
    tau = required_tau(u, N, floor, tol)
    fit = _excess_fit(u, N, floor, tol)
    tail = u[N - 1:][-max(1, (u.size - N + 1) // 4):]
    settled = bool(np.all(tail <= floor + tol))
    if not tau < 1.0:
        return False, tau, fit, f"no tau < 1 fits (required tau = {tau:.6g})"
    if settled:
        return True, tau, fit, f"excess over floor {floor:.6g} died out; required tau = {tau:.6g}"
    if fit is not None and fit.reliable:
        return True, tau, fit, f"fitted tau = {fit.rate:.6g} (r^2 = {fit.r_squared:.3f})"
    detail = "too few points" if fit is None else (
        f"fitted tau = {fit.rate:.6g}, r^2 = {fit.r_squared:.3f}")
    return False, tau, fit, f"no geometric decay towards floor {floor:.6g} ({detail})"

def envelope_floor(theorem: str, constants: FrameworkConstants, rule,
                   cert: SharpCertificate) -> Optional[float]:
    """Asymptotic floor on ``dist^2`` for the geometric-rate statements (else ``None``)."""
    p, alpha, beta, eps = constants.p, constants.alpha, constants.beta, constants.eps
    q, eta = cert.order, cert.modulus
    if theorem == "t3.3i":
        return 2 ** (1 / p - 1) * eta ** (-1 / p) * (eps ** (1 / p) + beta * rule.v / alpha)
    if theorem == "t3.3ii":
        return (2 ** (2 / q - 2 * p / q) * eta ** (-2 / q)
                * (eps ** (1 / p) + beta * rule.v / alpha) ** (2 * p / q))
    if theorem == "t3.4i":
        return 2 ** (2 / p - 1) * eta ** (-2 / p) * eps ** (2 / p)
    if theorem == "t3.4iii":
        return 2 ** (2 / q - p / q) * eta ** (-2 / q) * eps ** (2 / q)
    if theorem == "t3.5ii":
        return (2 * eps / eta) ** (1 / p)
    return None


def envelope_check(trace: IterationTrace, theorem: str, cert: SharpCertificate,
                   N: Optional[int] = None, problem: Optional[ProblemInstance] = None,
                   tol: float = RESIDUAL_TOL, rtol: float = 1e-6,
                   certificate_samples: int = 10_000) -> EnvelopeReport:
    """Check one convergence-rate statement on the squared-distance series.

    The sharpness order and modulus come from ``cert``; the stepsize rule and
    the constants from the trace.  If ``problem`` is given the certificate is
    re-validated by sampling first.  Statements whose hypotheses do not match
    the run come back as ``"inapplicable"``.
    """
    theorem = theorem.lower()
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem id {theorem!r}")
    c = trace.constants
    rule = trace.rule
    p, alpha, beta, eps = c.p, c.alpha, c.beta, c.eps
    q, eta = cert.order, cert.modulus
    report = EnvelopeReport(theorem, "pass")

    family = theorem[:4]
    if not isinstance(rule, _RULE_FOR[family]):
        report.status = "inapplicable"
        report.reason = f"{theorem} needs a {_RULE_FOR[family].kind} stepsize rule"
        return report

    # hypotheses on (q, eps)
    inapplicable = None
    if theorem in ("t3.3i", "t3.5i", "t3.5ii") and not math.isclose(q, 2 * p):
        inapplicable = "requires q = 2p"
    elif theorem == "t3.3ii" and not q > 2 * p:
        inapplicable = "requires q > 2p"
    elif theorem == "t3.4i" and not math.isclose(q, p):
        inapplicable = "requires q = p"
    elif theorem in ("t3.4ii", "t3.4iii") and not (q > p and not math.isclose(q, p)):
        inapplicable = "requires q > p"
    elif theorem in ("t3.4ii", "t3.5i") and eps != 0:
        inapplicable = "requires eps = 0"
    elif theorem in ("t3.4iii", "t3.5ii") and not eps > 0:
        inapplicable = "requires eps > 0"
    if inapplicable is None and theorem == "t3.3ii":
        lhs = eps ** (1 / p) + beta * rule.v / alpha
        rhs = eta ** (-2 / (q - 2 * p)) * (2 * p / (alpha * rule.v * q)) ** (q / (q - 2 * p))
        report.extra["eps_threshold"] = {"lhs": lhs, "rhs": rhs}
        if not lhs < rhs:
            inapplicable = "noise/stepsize above the theorem's threshold"
    if inapplicable is None and theorem == "t3.4iii":
        lam, lam_bar = rule.lam_lower, rule.lam_upper
        thr = ((alpha ** 2 * q * lam * (2 - lam_bar) / (4 * beta * p)) ** (-p * q / (2 * (q - p)))
               * eta ** (-p / (q - p)))
        report.extra["eps_threshold"] = thr
        if not eps < thr:
            inapplicable = f"eps must be below {thr:.6g}"
    if inapplicable:
        report.status = "inapplicable"
        report.reason = inapplicable
        return report

    report.floor = envelope_floor(theorem, c, rule, cert)
    # the sharpness modulus is only certified on B(0, radius)
    if trace.max_iterate_norm > cert.radius * (1 + 1e-12):
        report.status = "fail"
        report.reason = "certificate radius exceeded"
        return report
    if problem is not None:
        rng = np.random.default_rng(0)
        if not validate_sharp(problem, cert, certificate_samples, rng):
            report.status = "fail"
            report.reason = f"sharp certificate (q={q:g}, eta={eta:g}) violated by sampling"
            return report

    u = trace.dist_sq
    n = u.size
    entered = bool(np.any(trace.gaps <= eps))
    user_N = N
    N = default_burn_in(trace) if N is None else int(N)
    if not 1 <= N <= n:
        raise ValueError(f"burn-in N={N} outside the trace")
    report.N = N

    if theorem in ("t3.3i", "t3.3ii", "t3.4i", "t3.4iii", "t3.5ii"):
        ok, tau, fit, reason = _geometric_verdict(u, N, report.floor, tol)
        report.required_tau, report.fit, report.reason = tau, fit, reason
    elif theorem == "t3.4ii":
        lam, lam_bar = rule.lam_lower, rule.lam_upper
        uN = u[N - 1]
        gamma = (2 ** (1 - 2 / p) * alpha ** 2 * (q - p) / (4 * beta * p) * lam * (2 - lam_bar)
                 * eta ** (2 / p) * uN ** (q / p - 1))
        k = np.arange(1, n - N + 1, dtype=float)
        env = uN / (1 + gamma * k) ** (p / (q - p))
        viol = u[N:] - env * (1 + rtol) - tol
        report.extra["gamma"] = gamma
        report.max_violation = float(np.max(viol)) if viol.size else -math.inf
        ok = report.max_violation <= 0
        report.reason = f"envelope dist_N^2/(1+{gamma:.6g} k)^{p / (q - p):g}"
    elif theorem == "t3.5i":
        k = np.arange(1, n + 1, dtype=float)
        env = beta * rule.c / alpha * (2 / eta) ** (1 / p) * k ** (-rule.s)
        bad = np.flatnonzero(u > env * (1 + rtol) + tol)
        first_ok = 1 if bad.size == 0 else int(bad[-1]) + 2
        report.extra["empirical_N"] = first_ok if first_ok <= n else None
        if user_N is not None:
            ok = first_ok <= N
        else:
            ok = first_ok <= n // 2
        report.N = first_ok if first_ok <= n else None
        if report.N is not None:
            report.max_violation = float(np.max(u[report.N - 1:] - env[report.N - 1:] * (1 + rtol)))
        report.reason = f"bound holds from k = {first_ok}" if first_ok <= n else "bound never settles"
    if not ok and entered:
        ok = True
        report.reason += "; trace entered the eps-optimal set"
    report.status = "pass" if ok else "fail"
    return report


# --------------------------------------------------------------------------
# scalar recursion bounds


class LemmaBound(NamedTuple):
    value: float
    asymptotic: bool


def lemma22_threshold(a: float, r: float) -> float:
    """Upper limit on ``b`` for the linear-rate part of the nonlinear recursion bound."""
    return a ** (-1.0 / r) * (1.0 + r) ** (-(1.0 + r) / r)


def lemma22_bound(u1: float, a: float, b: float, r: float, k) -> float:
    """Bound on ``u_{k+1}`` for ``u_{k+1} <= u_k - a u_k^{1+r} + b``.

    ``b = 0`` gives the sublinear bound ``u1 (1 + r a u1^r k)^{-1/r}``;
    ``b > 0`` gives ``u1 tau^k + (b/a)^{1/(1+r)}`` with
    ``tau = 1 - a (1+r) (b/a)^{r/(1+r)}``.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    if not a > 0:
        raise ValueError("a must be positive")
    if b < 0:
        raise ValueError("b must be nonnegative")
    k = np.asarray(k, dtype=float)
    if b == 0:
        out = u1 * (1.0 + r * a * u1 ** r * k) ** (-1.0 / r)
    else:
        thr = lemma22_threshold(a, r)
        if not b < thr:
            raise ValueError(f"b must be below a^(-1/r) (1+r)^(-(1+r)/r) = {thr:.6g}")
        fixed = (b / a) ** (1.0 / (1.0 + r))
        tau = 1.0 - a * (1.0 + r) * fixed ** r
        out = u1 * tau ** k + fixed
    return float(out) if out.ndim == 0 else out


def lemma23_bound(u1: float, a: float, b: float, s: float, t: float, k) -> LemmaBound:
    """Bound on ``u_{k+1}`` for ``u_{k+1} <= (1 - a k^-s) u_k + b k^-t``.

    For ``t = s`` the closed form ``u1 e^{as/(1-s)} e^{-ak} + b/a``; for
    ``t > s`` only the leading asymptotic term ``(b/a) k^{s-t}`` (flagged).
    """
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    if not t >= s:
        raise ValueError("t must be >= s")
    if not (a > 0 and b > 0):
        raise ValueError("a and b must be positive")
    k = np.asarray(k, dtype=float)
    if t == s:
        out = u1 * math.exp(a * s / (1 - s)) * np.exp(-a * k) + b / a
        asym = False
    else:
        with np.errstate(divide="ignore"):
            out = (b / a) * np.power(k, s - t)
        asym = True
    return LemmaBound(float(out) if out.ndim == 0 else out, asym)


def lemma23_integral_bound(u1: float, a: float, b: float, s: float, k) -> float:
    """Valid bound for the ``t = s`` recursion with ``0 < a < 1``.

    Uses ``prod_{i<=k} (1 - a i^-s) <= exp(-a ((k+1)^{1-s} - 1) / (1-s))``
    without converting the exponent into a linear one.
    """
    if not 0 < a < 1:
        raise ValueError("a must lie in (0, 1)")
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    k = np.asarray(k, dtype=float)
    decay = np.exp(-a * ((k + 1) ** (1 - s) - 1) / (1 - s))
    out = b / a + max(u1 - b / a, 0.0) * decay
    return float(out) if out.ndim == 0 else out


def simulate_lemma22(u1, a, b, r, steps: int) -> np.ndarray:
    """Equality recursion (clamped at 0), vectorised over parameter arrays.

    Returns shape ``(steps + 1, m)``; row ``j`` holds ``u_{j+1}``.
    """
    u1, a, b, r = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (u1, a, b, r))
    out = np.empty((steps + 1, u1.size))
    u = u1.copy()
    out[0] = u
    for j in range(1, steps + 1):
        u = np.maximum(u - a * u ** (1 + r) + b, 0.0)
        out[j] = u
    return out


def simulate_lemma23(u1, a, b, s, t, steps: int) -> np.ndarray:
    u1, a, b, s, t = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (u1, a, b, s, t))
    out = np.empty((steps + 1, u1.size))
    u = u1.copy()
    out[0] = u
    for k in range(1, steps + 1):
        u = (1 - a * k ** (-s)) * u + b * k ** (-t)
        out[k] = u
    return out


@dataclass
class SweepResult:
    name: str
    draws: int
    violations: int
    worst: float

    @property
    def holds(self) -> bool:
        return self.violations == 0


def lemma22_sweep(draws: int = 100, steps: int = 10_000, seed: int = 0,
                  tol: float = RESIDUAL_TOL) -> list[SweepResult]:
    """Random-parameter test of both parts of the nonlinear recursion bound."""
    rng = np.random.default_rng(seed)
    k = np.arange(1, steps + 1, dtype=float)[:, None]
    results = []
    for part in ("i", "ii"):
        u1 = rng.uniform(0.01, 10.0, draws)
        a = rng.uniform(0.01, 2.0, draws)
        r = rng.uniform(0.1, 3.0, draws)
        if part == "i":
            b = np.zeros(draws)
        else:
            b = rng.uniform(0.0, 1.0, draws) * lemma22_threshold(a, r)
            b = np.maximum(b, 1e-12)
        u = simulate_lemma22(u1, a, b, r, steps)[1:]
        bound = np.column_stack([lemma22_bound(u1[j], a[j], b[j], r[j], k[:, 0])
                                 for j in range(draws)])
        excess = np.max(u - bound * (1 + SWEEP_RTOL), axis=0)
        results.append(SweepResult(f"lemma22_{part}", draws, int(np.sum(excess > tol)),
                                   float(np.max(excess))))
    return results


def lemma23_sweep(draws: int = 100, steps: int = 10_000, seed: int = 0,
                  tol: float = RESIDUAL_TOL) -> list[SweepResult]:
    """Random-parameter test of the ``t = s`` bound, as stated and in integral form."""
    rng = np.random.default_rng(seed)
    u1 = rng.uniform(0.0, 10.0, draws)
    a = rng.uniform(0.01, 0.99, draws)
    b = rng.uniform(0.01, 2.0, draws)
    s = rng.uniform(0.05, 0.95, draws)
    u = simulate_lemma23(u1, a, b, s, s, steps)[1:]
    k = np.arange(1, steps + 1, dtype=float)
    closed = np.column_stack([lemma23_bound(u1[j], a[j], b[j], s[j], s[j], k).value
                              for j in range(draws)])
    integral = np.column_stack([lemma23_integral_bound(u1[j], a[j], b[j], s[j], k)
                                for j in range(draws)])
    out = []
    for name, bound in (("lemma23_ii", closed), ("lemma23_ii_integral", integral)):
        excess = np.max(u - bound * (1 + SWEEP_RTOL), axis=0)
        out.append(SweepResult(name, draws, int(np.sum(excess > tol)), float(np.max(excess))))
    return out


def lemma23_power_fit(a: float, b: float, s: float, t: float, u1: float = 1.0,
                      steps: int = 100_000, burn_in: int = 10_000) -> RateFit:
    """Fitted decay exponent of the ``t > s`` recursion (expected ``t - s``)."""
    u = simulate_lemma23(u1, a, b, s, t, steps)[1:, 0]
    return fit_power(u, burn_in)
