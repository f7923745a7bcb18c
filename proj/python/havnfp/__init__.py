"""Python bindings for the HA-VNFP solver suite.

Instances are passed as JSON text (the same documents the CLI reads);
reports and placements come back as dicts.
"""

import json

from . import _havnfp
from ._havnfp import InputError

__all__ = ["InputError", "generate", "validate", "solve", "evaluate", "campaign", "summarize"]


def generate(requests=50, aps_per_request=2, multiplier=1.0, seed=1, vnf_types=5, clusters=3, access_points=3):
    """Random instance document (JSON text)."""
    return _havnfp.generate(requests, aps_per_request, multiplier, seed, vnf_types, clusters, access_points)


def validate(instance):
    return json.loads(_havnfp.validate(instance))


def solve(instance, algorithm="vns", policy="bestfit", split="fallback",
          per_start_time_limit=None, max_iterations=None, seed=0):
    """Returns {"report": ..., "placement": ... or None}; exact adds "optimal"."""
    return json.loads(_havnfp.solve(instance, algorithm, policy, split,
                                    per_start_time_limit, max_iterations, seed))


def evaluate(instance, placement):
    if not isinstance(placement, str):
        placement = json.dumps(placement)
    return json.loads(_havnfp.evaluate(instance, placement))


def campaign(spec, include_runtime=True):
    """Runs a campaign and returns the rows as CSV text."""
    if not isinstance(spec, str):
        spec = json.dumps(spec)
    return _havnfp.campaign(spec, include_runtime)


def summarize(rows_csv):
    return _havnfp.summarize(rows_csv)
