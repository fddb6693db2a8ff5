"""Edge patterns in a box and the flat cone-manifolds they describe.

Every function takes and returns plain Python data: patterns are lists of
eight edge ids, rationals are "p/q" strings, angles are strings such as
"1/2pi", and documents are dicts in the same layout the cone-forge tool
writes.
"""

import json

from . import _core

__version__ = _core.__version__

__all__ = [
    "enumerate_patterns",
    "validate",
    "realize",
    "report",
    "holonomy",
    "doubled_disc",
    "validate_description",
    "classify",
    "explore",
]


def _pattern(pattern):
    if isinstance(pattern, dict):
        return json.dumps(pattern)
    return json.dumps({"free_edge_at_vertex": list(pattern)})


def enumerate_patterns(up_to_symmetry=False, jobs=1):
    return json.loads(_core.enumerate_patterns(up_to_symmetry, jobs))


def validate(pattern):
    return json.loads(_core.validate(_pattern(pattern)))


def realize(pattern, box=("1", "1", "1"), margin=None):
    """Realization document, or an infeasibility certificate with feasible=False."""
    box = [str(d) for d in box]
    return json.loads(_core.realize(_pattern(pattern), json.dumps(box), "" if margin is None else str(margin)))


def report(realization, seed=1, count=5, jobs=1):
    return json.loads(_core.report(json.dumps(realization), seed, count, jobs))


def holonomy(realization):
    return json.loads(_core.holonomy(json.dumps(realization)))


def doubled_disc(corner_angles):
    return json.loads(_core.doubled_disc(json.dumps(list(corner_angles))))


def validate_description(description, cap="3/2pi"):
    return json.loads(_core.validate_description(json.dumps(description), cap))


def classify(description):
    return json.loads(_core.classify(json.dumps(description)))


def explore(depth=16):
    return json.loads(_core.explore(depth))
