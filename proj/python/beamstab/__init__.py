"""Damped Euler-Bernoulli beam with end springs and dampers.

Problems are plain dicts in the JSON problem format, or preset names.
"""

import json

from . import _core
from ._core import DomainError, NoAdmissiblePenalty, NumericalError, StructuralError, Trace

__all__ = [
    "DomainError",
    "NoAdmissiblePenalty",
    "NumericalError",
    "StructuralError",
    "Trace",
    "beta_constants",
    "convergence",
    "decay_bound",
    "decay_estimate",
    "energy",
    "load_problem",
    "preset",
    "preset_names",
    "simulate",
    "sweep",
    "validate",
]


def _text(problem):
    if isinstance(problem, str):
        return _core.preset_json(problem)
    return json.dumps(problem)


def preset_names():
    return list(_core.preset_names())


def preset(name):
    return json.loads(_core.preset_json(name))


def load_problem(path):
    with open(path, encoding="utf-8") as f:
        return json.loads(_core.normalize(f.read()))


def validate(problem):
    """List of (severity, clause, message); empty when admissible."""
    return _core.validate(_text(problem))


def simulate(problem, nodes=41, dt=None, ratio=None):
    """Runs the scheme; h_t = h_x / ratio (default 40) unless dt is given."""
    return _core.simulate(_text(problem), nodes, dt, ratio)


def energy(trace, mode="paper"):
    return _core.energy(trace, mode)


def beta_constants(problem):
    return _core.beta_constants(_text(problem))


def decay_estimate(beta0, beta1, lam):
    return _core.decay_estimate(beta0, beta1, lam)


def decay_bound(problem, trace=None, mode="paper", lam=None):
    """Decay constants; with a trace also the envelope check."""
    return json.loads(_core.decay_bound(_text(problem), trace, mode, lam))


def convergence(problem, study, nodes=41, dt=0.01, ratio=40.0, levels=4, mode="paper"):
    return _core.convergence(_text(problem), study, nodes, dt, ratio, levels, mode)


def sweep(problem, parameter, values, nodes=41, dt=None, ratio=None, mode="paper"):
    return _core.sweep(_text(problem), parameter, list(values), nodes, dt, ratio, mode)
