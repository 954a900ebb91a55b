"""Solution-space co-design: baseline, solution box, sections and trade-off.

Boxes, traces, baselines and sections cross the boundary as JSON and are
returned here as plain Python objects.
"""

import json

from . import _core
from ._core import (
    DomainFailure,
    InfeasibleSeedError,
    Problem,
    ProblemError,
    RunLoadError,
    SolspaceError,
    TradeoffError,
)

__version__ = _core.__version__

__all__ = [
    "DomainFailure",
    "InfeasibleSeedError",
    "Problem",
    "ProblemError",
    "RunLoadError",
    "SolspaceError",
    "TradeoffError",
    "bind_requirements",
    "compute_baseline",
    "export_section",
    "make_section",
    "restrict_and_resolve",
    "run_command",
    "solve_box",
    "validate_box",
]


def compute_baseline(problem, seed=0, budget=None):
    return json.loads(_core.compute_baseline(problem, seed, budget))


def bind_requirements(problem, baseline):
    return problem.bind_requirements(json.dumps(baseline))


def solve_box(problem, seed_point, seed=0, n_samples=100):
    """Returns {"box": [[lower, upper], ...], "trace": [...]}."""
    return json.loads(_core.solve_box(problem, list(seed_point), seed, n_samples))


def validate_box(problem, box, n, seed=0):
    return json.loads(_core.validate_box(problem, json.dumps(box), n, seed))


def restrict_and_resolve(problem, box, dv, lower, upper, seed=0, n_samples=100):
    return json.loads(_core.restrict_and_resolve(problem, json.dumps(box), dv, lower, upper, seed, n_samples))


def make_section(problem, box, i, j, n=1000, seed=0, span="design_space"):
    return json.loads(_core.make_section(problem, json.dumps(box), i, j, n, seed, span))


def export_section(section, fmt):
    return _core.export_section(json.dumps(section), fmt)


def run_command(args):
    """Runs the command-line tool in-process. Returns (exit_code, stdout, stderr)."""
    return _core.run_command([str(a) for a in args])
