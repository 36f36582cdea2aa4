"""Runge-Kutta DG solver for conservation laws with discontinuous flux."""

import json

from ._core import (
    ConfigError,
    DfluxError,
    InadmissibleState,
    IoError,
    MappingInfeasible,
    SolverError,
    analyze_waves,
    builtin_names,
    delta_map_elastic,
    delta_map_traffic,
    elastic_stress,
)
from . import _core

__all__ = [
    "ConfigError",
    "DfluxError",
    "InadmissibleState",
    "IoError",
    "MappingInfeasible",
    "SolverError",
    "analyze_waves",
    "builtin_names",
    "builtin_scenario",
    "convergence",
    "delta_map_elastic",
    "delta_map_traffic",
    "elastic_stress",
    "run",
]


def _dump(config):
    return config if isinstance(config, str) else json.dumps(config)


def builtin_scenario(name):
    """Built-in scenario as a config dict."""
    return json.loads(_core.builtin_scenario_json(name))


def run(config, out_dir=None, precision=17):
    """Run a scenario given as a config dict or JSON string.

    Returns a dict with "snapshots" (time, columns, x, values arrays),
    "steps" and the parsed "manifest".
    """
    result = _core.run(_dump(config), None if out_dir is None else str(out_dir), precision)
    result["manifest"] = json.loads(result["manifest"])
    return result


def convergence(config, meshes, reference=0):
    """Self-convergence table: list of (cells, l1_error, order or None)."""
    return _core.convergence(_dump(config), list(meshes), reference)
