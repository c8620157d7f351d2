"""Projected quasi-subgradient methods for quasi-convex minimization.

Modules: ``sets`` (feasible sets and projections), ``problems`` (objectives
with certificates), ``stepsizes``, ``solvers`` (the three iterations and the
run loop), ``analysis`` (checks of traces against the convergence theory)
and ``cli``.
"""

from .analysis import (
    check_complexity,
    check_h1,
    check_h3,
    complexity_budget,
    envelope_check,
    fit_geometric,
    fit_power,
    lemma22_bound,
    lemma23_bound,
)
from .problems import (
    HolderCertificate,
    ProblemInstance,
    SharpCertificate,
    make_problem,
)
from .sets import Ball, Box, Halfspace, WholeSpace
from .solvers import Conditional, Inexact, RunConfig, Standard, framework_constants, run
from .stepsizes import Constant, Diminishing, Dynamic, stepsize

__version__ = "0.1.0"
