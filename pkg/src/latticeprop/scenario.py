"""Declarative scenario files and their evaluation into density grids.

A scenario is one JSON object::

    {
      "kind": "shutter",
      "description": "optional free text",
      "params": {"k": 0.785398},
      "grid": {"n_range": [-40, 40], "t_range": [0, 30], "resolution": 161},
      "truncation": {"M": 30, "tail_tol": 1e-10},
      "output": {"csv": "shutter.csv", "pgm": "shutter.pgm", "gamma": 1.0}
    }

Unknown keys anywhere are rejected.  Grid axes per kind:

=====================  =================================  ==================
kind                   grid keys                          params
=====================  =================================  ==================
kernel                 n_range, t_range, resolution       m
point_source           n_range, t_range, resolution       (none)
shutter                n_range, t_range, resolution       k
poisson_edge           n_range, t_range, resolution       b
circular               x_range, y_range, resolution       n
helmholtz_continuous   x_range, z_range, resolution,      E
                       columns (optional)
helmholtz_discrete     n_range, z_range, resolution       E, k_x
pathsum_demo           t_range, resolution                n, m, N_max
=====================  =================================  ==================

``resolution`` is the number of row samples (and, for ``circular``, the
number of points per side).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from numbers import Integral, Real

import numpy as np

from . import evolve, grids, helmholtz, kernel, pathsum, specfun
from .errors import ComputeError, ConfigError, LatticePropError

TOP_KEYS = {"kind", "description", "params", "grid", "truncation", "output"}
TRUNCATION_KEYS = {"M", "window", "tail_tol"}
OUTPUT_KEYS = {"csv", "pgm", "gamma"}

KINDS = {
    "kernel": ({"n_range", "t_range", "resolution"}, {"m": "int"}),
    "point_source": ({"n_range", "t_range", "resolution"}, {}),
    "shutter": ({"n_range", "t_range", "resolution"}, {"k": "real"}),
    "poisson_edge": ({"n_range", "t_range", "resolution"}, {"b": "real"}),
    "circular": ({"x_range", "y_range", "resolution"}, {"n": "int"}),
    "helmholtz_continuous": ({"x_range", "z_range", "resolution"}, {"E": "real"}),
    "helmholtz_discrete": ({"n_range", "z_range", "resolution"}, {"E": "real", "k_x": "real"}),
    "pathsum_demo": ({"t_range", "resolution"}, {"n": "int", "m": "int", "N_max": "int"}),
}
OPTIONAL_GRID_KEYS = {"helmholtz_continuous": {"columns"}}


@dataclass
class Scenario:
    kind: str
    params: dict
    grid: dict
    truncation: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    description: str = ""
    name: str = "scenario"


def _is_int(v):
    return isinstance(v, Integral) and not isinstance(v, bool)


def _is_real(v):
    return isinstance(v, Real) and not isinstance(v, bool) and math.isfinite(v)


def _require_mapping(obj, path):
    if not isinstance(obj, dict):
        raise ConfigError("expected an object", path)
    return obj


def _check_keys(obj, allowed, path, required=()):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r}", f"{path}.{key}" if path else key)
    for key in required:
        if key not in obj:
            raise ConfigError("missing required field", f"{path}.{key}" if path else key)


def _range(grid, key, integer, path):
    value = grid[key]
    where = f"{path}.{key}"
    if not isinstance(value, list) or len(value) != 2:
        raise ConfigError("expected a two-element list [lo, hi]", where)
    check = _is_int if integer else _is_real
    if not all(check(v) for v in value):
        raise ConfigError("bounds must be " + ("integers" if integer else "finite numbers"), where)
    lo, hi = value
    if lo > hi or (not integer and lo == hi):
        raise ConfigError("range is empty", where)
    return lo, hi


def validate(data, name="scenario") -> Scenario:
    """Check a parsed scenario document and return a :class:`Scenario`."""
    _require_mapping(data, "")
    _check_keys(data, TOP_KEYS, "", required=("kind", "grid"))
    kind = data["kind"]
    if kind not in KINDS:
        raise ConfigError(f"unknown kind {kind!r}; expected one of {sorted(KINDS)}", "kind")
    grid_keys, param_types = KINDS[kind]

    params = _require_mapping(data.get("params", {}), "params")
    _check_keys(params, set(param_types), "params", required=tuple(param_types))
    for key, kind_of in param_types.items():
        ok = _is_int(params[key]) if kind_of == "int" else _is_real(params[key])
        if not ok:
            raise ConfigError(f"expected {'an integer' if kind_of == 'int' else 'a number'}", f"params.{key}")

    grid = _require_mapping(data["grid"], "grid")
    _check_keys(grid, grid_keys | OPTIONAL_GRID_KEYS.get(kind, set()), "grid", required=tuple(sorted(grid_keys)))
    for key in ("resolution", "columns"):
        if key in grid and (not _is_int(grid[key]) or grid[key] < 2):
            raise ConfigError("must be an integer >= 2", f"grid.{key}")
    for key in grid:
        if key.endswith("_range"):
            _range(grid, key, key == "n_range", "grid")
    if "t_range" in grid and grid["t_range"][0] < 0:
        raise ConfigError("times must be non-negative", "grid.t_range")
    if "z_range" in grid and not grid["z_range"][0] > 0:
        raise ConfigError("propagation distances must be positive", "grid.z_range")
    if kind == "pathsum_demo":
        if not grid["t_range"][0] > 0:
            raise ConfigError("path sums need t > 0", "grid.t_range")
        if not 1 <= params["N_max"] <= 6:
            raise ConfigError("N_max must lie in 1..6", "params.N_max")
    if kind in ("helmholtz_continuous", "helmholtz_discrete") and not params["E"] > 0:
        raise ConfigError("energy must be positive", "params.E")

    truncation = _require_mapping(data.get("truncation", {}), "truncation")
    _check_keys(truncation, TRUNCATION_KEYS, "truncation")
    for key in ("M", "window"):
        if key in truncation and (not _is_int(truncation[key]) or truncation[key] < 1):
            raise ConfigError("must be a positive integer", f"truncation.{key}")
    if "tail_tol" in truncation and not (_is_real(truncation["tail_tol"]) and truncation["tail_tol"] > 0):
        raise ConfigError("must be a positive number", "truncation.tail_tol")

    output = _require_mapping(data.get("output", {}), "output")
    _check_keys(output, OUTPUT_KEYS, "output")
    for key in ("csv", "pgm"):
        if key in output and not (isinstance(output[key], str) and output[key]):
            raise ConfigError("must be a non-empty path string", f"output.{key}")
    if "gamma" in output and not (_is_real(output["gamma"]) and output["gamma"] > 0):
        raise ConfigError("must be a positive number", "output.gamma")

    description = data.get("description", "")
    if not isinstance(description, str):
        raise ConfigError("must be a string", "description")
    return Scenario(kind, params, grid, truncation, output, description, name)


def load(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario: {exc.strerror}", str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}: {exc.msg}", str(path)) from exc
    name = os.path.splitext(os.path.basename(path))[0]
    return validate(data, name)


def bundled_names():
    files = resources.files("latticeprop").joinpath("scenarios")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def bundled_path(name):
    """Filesystem path of a scenario shipped with the package."""
    return str(resources.files("latticeprop").joinpath("scenarios", f"{name}.json"))


def _linspace(bounds, count):
    return np.linspace(bounds[0], bounds[1], count)


def _sites(bounds):
    return np.arange(bounds[0], bounds[1] + 1)


def compute_grid(sc: Scenario, threads=1) -> grids.DensityGrid:
    """Evaluate the scenario's density grid (no files written)."""
    g, p, tr = sc.grid, sc.params, sc.truncation
    res = g["resolution"]
    tail_tol = tr.get("tail_tol", evolve.SHUTTER_TAIL_TOL)

    if sc.kind in ("kernel", "point_source", "shutter", "poisson_edge", "helmholtz_discrete"):
        n_lo, n_hi = g["n_range"]
        cols = _sites(g["n_range"])
        time_key = "z_range" if sc.kind == "helmholtz_discrete" else "t_range"
        rows = _linspace(g[time_key], res)
        row_name = time_key[0]

        if sc.kind == "kernel":
            m = p["m"]

            def row(t):
                return specfun.bessel_j_orders(n_lo - m, n_hi - m, t) ** 2

        elif sc.kind == "point_source":

            def row(t):
                return evolve.point_source_profile(n_lo, n_hi, t)

        elif sc.kind == "shutter":

            def row(t):
                if "M" in tr:
                    # an explicit minimum series length is honoured site by site
                    return np.array(
                        [abs(evolve.shutter_psi(n, t, p["k"], tr["M"], tail_tol)) ** 2 for n in cols]
                    )
                return np.abs(evolve.shutter_profile(n_lo, n_hi, t, p["k"], tail_tol)) ** 2

        elif sc.kind == "poisson_edge":

            def row(t):
                return np.abs(evolve.poisson_edge_profile(n_lo, n_hi, t, p["b"])) ** 2

        else:

            def row(z):
                return np.abs(helmholtz.edge_profile(n_lo, n_hi, z, p["E"], p["k_x"])) ** 2

        return grids.DensityGrid(row_name, rows, "n", cols, grids.fill_rows(row, rows, threads))

    if sc.kind == "circular":
        xs = _linspace(g["x_range"], res)
        ys = _linspace(g["y_range"], res)
        r_max = max(math.hypot(x, y) for x in g["x_range"] for y in g["y_range"])
        M = max(tr.get("M", 1), evolve.shutter_terms(p["n"], r_max, 1, tail_tol))

        def row(y):
            return [
                abs(evolve.circular_partial_sum(p["n"], math.hypot(x, y), math.atan2(y, x), M)) ** 2
                for x in xs
            ]

        return grids.DensityGrid("y", ys, "x", xs, grids.fill_rows(row, ys, threads))

    if sc.kind == "helmholtz_continuous":
        xs = _linspace(g["x_range"], g.get("columns", res))
        zs = _linspace(g["z_range"], res)

        def row(z):
            return [abs(helmholtz.continuous_kernel_closed(x, z, p["E"])) ** 2 for x in xs]

        return grids.DensityGrid("z", zs, "x", xs, grids.fill_rows(row, zs, threads))

    # pathsum_demo: residual of the sliced path sum against the kernel per slice count
    ts = _linspace(g["t_range"], res)
    Ns = np.arange(1, p["N_max"] + 1)
    window = tr.get("window")

    def row(t):
        exact = kernel.k1d(p["n"], p["m"], t)
        return [
            abs(pathsum.multi_slice_sum(p["n"], p["m"], t, int(N), window, mode="convolve") - exact)
            for N in Ns
        ]

    return grids.DensityGrid("t", ts, "N", Ns, grids.fill_rows(row, ts, threads))


def run_scenario(path, out_dir=None, threads=1):
    """Load, evaluate and write a scenario.

    Returns ``(grid, written)`` where ``written`` lists the artifact paths.
    Numerical failures are re-raised as :class:`ComputeError`.
    """
    sc = load(path)
    try:
        grid = compute_grid(sc, threads)
    except ConfigError:
        raise
    except (LatticePropError, ArithmeticError, ValueError) as exc:
        raise ComputeError(f"{sc.name}: {exc}") from exc
    base = out_dir if out_dir is not None else os.getcwd()
    os.makedirs(base, exist_ok=True)
    written = []
    csv_path = os.path.join(base, sc.output.get("csv", f"{sc.name}.csv"))
    grids.write_csv(grid, csv_path)
    written.append(csv_path)
    if "pgm" in sc.output:
        pgm_path = os.path.join(base, sc.output["pgm"])
        grids.write_pgm(grid.values, pgm_path, sc.output.get("gamma", 1.0))
        written.append(pgm_path)
    return grid, written
