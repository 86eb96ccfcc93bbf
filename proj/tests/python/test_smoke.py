import json
import math
from pathlib import Path

import numpy as np
import pytest

import latcell

ROOT = Path(__file__).resolve().parents[2]

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
W_IDENTITY = 67.0 - 24.0 * SQRT2 - 16.0 * SQRT3


def test_cauchy_born_reference_value():
    lat = latcell.BravaisLattice.cubic()
    phi = latcell.builtin_potential("quadratic_cutoff")
    assert abs(latcell.cauchy_born_W(phi, lat, np.eye(3)) - W_IDENTITY) < 1e-12


def test_gamma_diamond_identity():
    lat = latcell.BravaisLattice.cubic()
    phi = latcell.builtin_potential("quadratic_cutoff")
    F = np.eye(3)
    F[0, 2] = 0.1
    m = [1, 1, 2]
    norm = math.sqrt(6.0)
    gd = latcell.gamma_diamond(phi, lat, F, m)
    g = latcell.gamma(phi, lat, F, np.array(m) / norm)
    w = latcell.cauchy_born_W(phi, lat, F)
    assert abs(gd - (g + w / (2.0 * norm))) < 1e-12


def test_discrete_energy_halfopen_cube():
    lat = latcell.BravaisLattice.cubic()
    phi = latcell.builtin_potential("quadratic_cutoff")
    cube = latcell.ConvexPolytope.from_box(np.zeros(3), np.ones(3))
    d = latcell.affine_deformation(np.eye(3))
    e = latcell.discrete_energy(cube, lat, 0.5, d, phi, rule="halfopen")
    assert abs(e - (14.0 - 6.0 * SQRT2 - 2.0 * SQRT3)) < 1e-12


def test_piecewise_deformation_tau():
    lat = latcell.BravaisLattice.cubic()
    phi = latcell.builtin_potential("quadratic_cutoff")
    t, t_hat = latcell.tau(phi, lat, np.eye(3), np.eye(3), [0, 0, 1])
    g = latcell.gamma(phi, lat, np.eye(3), np.array([0.0, 0.0, 1.0]))
    assert t == pytest.approx(0.0, abs=1e-14)
    assert t_hat == pytest.approx(-2.0 * g, abs=1e-12)


def test_verify_proposition_summary():
    scene = json.dumps({
        "version": 1,
        "domain": {"type": "named", "name": "unit_cube"},
        "schedule": {"kind": "reciprocal", "k_min": 2, "k_max": 8},
    })
    rep = latcell.verify_proposition("P4", scene)
    assert abs(rep["target_bulk"] - W_IDENTITY) < 1e-12
    assert abs(rep["fitted_surface"] - (42.0 - 24.0 * SQRT2)) < 1e-6
    assert len(rep["residuals"]) == 7


def test_density_table_from_scene_file():
    text = (ROOT / "scenes" / "reference_density.json").read_text()
    rows = latcell.density_table(text)
    labels = [r["label"] for r in rows]
    assert labels == ["W", "gamma", "gamma_diamond"]
    assert abs(rows[0]["value"] - W_IDENTITY) < 1e-12


def test_scene_errors_map_to_python_exceptions():
    with pytest.raises(latcell.SceneValidationError):
        latcell.parse_scene('{"version": 1, "frobnicate": 2}')
    with pytest.raises(ValueError):
        latcell.parse_scene("not json at all")
    lat = latcell.BravaisLattice.cubic()
    phi = latcell.builtin_potential("quadratic_cutoff")
    with pytest.raises(latcell.NumericalFailure):
        latcell.cauchy_born_W(phi, lat, np.zeros((3, 3)))
