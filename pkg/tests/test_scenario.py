import copy
import json

import numpy as np
import pytest

from latticeprop import grids, scenario, specfun
from latticeprop.errors import ComputeError, ConfigError

BASE = {
    "kind": "shutter",
    "params": {"k": 0.5},
    "grid": {"n_range": [-5, 5], "t_range": [0, 4], "resolution": 5},
}


def _write(tmp_path, doc, name="sc.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_ok():
    sc = scenario.validate(BASE)
    assert sc.kind == "shutter" and sc.params["k"] == 0.5


@pytest.mark.parametrize(
    "mutate,where",
    [
        (lambda d: d["grid"].update(n_range=[3, 1]), "grid.n_range"),
        (lambda d: d["grid"].update(n_range=[]), "grid.n_range"),
        (lambda d: d["grid"].update(resolution=1), "grid.resolution"),
        (lambda d: d["params"].pop("k"), "params.k"),
        (lambda d: d["params"].update(k="pi"), "params.k"),
        (lambda d: d.update(colour="red"), "colour"),
        (lambda d: d["grid"].update(z_range=[1, 2]), "grid.z_range"),
        (lambda d: d.update(kind="laser"), "kind"),
        (lambda d: d.update(output={"csv": ""}), "output.csv"),
        (lambda d: d.update(truncation={"M": 0}), "truncation.M"),
        (lambda d: d["grid"].update(t_range=[-1, 2]), "grid.t_range"),
    ],
)
def test_validate_errors_name_field(mutate, where):
    doc = copy.deepcopy(BASE)
    mutate(doc)
    with pytest.raises(ConfigError) as info:
        scenario.validate(doc)
    assert info.value.path == where


def test_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        scenario.load(str(path))


def test_bundled_scenarios_validate():
    names = scenario.bundled_names()
    assert "point_source_density" in names
    for name in names:
        scenario.load(scenario.bundled_path(name))


def test_point_source_grid_values(tmp_path):
    doc = {"kind": "point_source", "grid": {"n_range": [-3, 3], "t_range": [0, 2], "resolution": 3}}
    grid, written = scenario.run_scenario(_write(tmp_path, doc), str(tmp_path))
    assert grid.values.shape == (3, 7)
    assert grid.values[0, 3] == 1.0
    assert grid.values[2, 5] == pytest.approx(specfun.bessel_j(2, 2.0) ** 2)
    assert written == [str(tmp_path / "sc.csv")]


def test_csv_round_trip_and_determinism(tmp_path):
    doc = dict(BASE, output={"csv": "a.csv", "pgm": "a.pgm"})
    path = _write(tmp_path, doc)
    grid, _ = scenario.run_scenario(path, str(tmp_path))
    first = (tmp_path / "a.csv").read_bytes()
    scenario.run_scenario(path, str(tmp_path), threads=4)
    assert (tmp_path / "a.csv").read_bytes() == first
    back = grids.read_csv(str(tmp_path / "a.csv"))
    np.testing.assert_array_equal(back.values, grid.values)
    np.testing.assert_array_equal(back.cols, grid.cols)
    assert back.row_name == "t" and back.col_name == "n"
    img = grids.read_pgm(str(tmp_path / "a.pgm"))
    assert img.shape == grid.values.shape and img.max() == 255


def test_parallel_equals_serial():
    sc = scenario.load(scenario.bundled_path("shutter_k_quarter_pi"))
    sc.grid["resolution"] = 12
    serial = scenario.compute_grid(sc, threads=1)
    parallel = scenario.compute_grid(sc, threads=4)
    assert np.max(np.abs(serial.values - parallel.values)) <= 1e-12


@pytest.mark.parametrize(
    "doc",
    [
        {"kind": "kernel", "params": {"m": 2}, "grid": {"n_range": [-3, 3], "t_range": [0, 2], "resolution": 2}},
        {"kind": "poisson_edge", "params": {"b": 1.0}, "grid": {"n_range": [-3, 3], "t_range": [0, 2], "resolution": 2}},
        {"kind": "circular", "params": {"n": 1}, "grid": {"x_range": [-2, 2], "y_range": [-2, 2], "resolution": 4}},
        {"kind": "helmholtz_continuous", "params": {"E": 4.0},
         "grid": {"x_range": [-2, 2], "z_range": [0.5, 2], "resolution": 3, "columns": 5}},
        {"kind": "helmholtz_discrete", "params": {"E": 9.0, "k_x": 1.0},
         "grid": {"n_range": [-3, 3], "z_range": [0.5, 2], "resolution": 3}},
        {"kind": "pathsum_demo", "params": {"n": 1, "m": 0, "N_max": 2}, "grid": {"t_range": [0.5, 2], "resolution": 2}},
    ],
)
def test_every_kind_runs(doc):
    grid = scenario.compute_grid(scenario.validate(doc))
    assert np.all(np.isfinite(grid.values))


def test_compute_errors_are_wrapped(tmp_path):
    doc = {"kind": "shutter", "params": {"k": 0.1}, "grid": {"n_range": [0, 1], "t_range": [0, 1e7], "resolution": 2}}
    with pytest.raises(ComputeError):
        scenario.run_scenario(_write(tmp_path, doc), str(tmp_path))


def test_pgm_gamma_and_blank():
    data = grids.to_pgm_bytes(np.array([[0.0, 0.25], [0.5, 1.0]]), gamma=2.0)
    assert data.startswith(b"P5\n2 2\n255\n")
    assert list(data[-4:]) == [0, 128, 180, 255]
    blank = grids.to_pgm_bytes(np.zeros((1, 3)))
    assert list(blank[-3:]) == [0, 0, 0]
