"""Python access to the xplab report engine."""

import json

from . import _xplab
from ._xplab import (
    NumericalError,
    ParameterError,
    circular_moment,
    geodesic,
    psi,
    rosenthal_distortion,
    schatten_norm,
    subcommands,
    theta,
    verify,
)

__version__ = _xplab.version()


def run(subcommand, **params):
    """Run one CLI report in-process and return it as a dict."""
    config = dict(params, subcommand=subcommand)
    return json.loads(_xplab.run_json(json.dumps(config)))


def linear_xp(a, k, p, seed=0):
    return json.loads(_xplab.linear_xp_json(list(a), k, p, seed))


def trace_inequality(a, b, q, kind="main", param=1.0):
    return json.loads(_xplab.trace_json(a, b, q, kind, param))


__all__ = [
    "NumericalError",
    "ParameterError",
    "circular_moment",
    "geodesic",
    "linear_xp",
    "psi",
    "rosenthal_distortion",
    "run",
    "schatten_norm",
    "subcommands",
    "theta",
    "trace_inequality",
    "verify",
]
