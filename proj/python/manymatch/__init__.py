"""Exact minimum-cost many-to-many matching between red and blue grid points.

Instances and results are plain dicts in the same JSON layout the command-line
tool reads and writes.
"""

import json

from . import _manymatch
from ._manymatch import InputError, InvariantError, penalty_matching

__all__ = ["generate", "solve", "verify", "render", "penalty_matching", "InputError", "InvariantError"]


def generate(n, delta, seed=0):
    return json.loads(_manymatch.generate(n, delta, seed))


def solve(instance, mode="exact", precision=30, theta_exp=None, epsilon=None):
    return json.loads(_manymatch.solve(json.dumps(instance), mode, precision, theta_exp, epsilon))


def verify(instance, result):
    """Returns (ok, message)."""
    return _manymatch.verify(json.dumps(instance), json.dumps(result))


def render(instance, result=None, size=800):
    return _manymatch.render(json.dumps(instance), None if result is None else json.dumps(result), size)
