"""Poincare sections, return maps, closed geodesics and their stability."""

import json
import math

import numpy as np
import pytest

from harmgeo.poincare import (
    SectionData,
    equator_monodromy,
    equator_state,
    find_closed_geodesics,
    generate_section,
    max_trajectory_occupancy,
    occupancy,
    phi_dot_max,
    return_map,
    section_to_csv,
    section_to_json,
    section_to_svg,
)

TWO_PI = 2.0 * math.pi


# -- section geometry ---------------------------------------------------------


def test_phi_dot_max_is_true_maximum():
    """1/phi_dot_max^2 equals the maximum of g_pp over the equator."""
    for n, eps in [(3, 0.05), (3, 0.3), (2, 0.5), (1, 0.4)]:
        cs = np.linspace(-1.0, 1.0, 20001)
        g_pp = (1 + eps * cs) ** 2 + eps**2 * n**2 * (1 - cs**2)
        assert math.isclose(
            phi_dot_max(n, eps), 1.0 / math.sqrt(g_pp.max()), rel_tol=1e-7
        )


def test_phi_dot_max_continuous_at_regime_change():
    n = 3
    e0 = 1.0 / (n * n - 1)
    assert math.isclose(
        phi_dot_max(n, e0 - 1e-9), phi_dot_max(n, e0 + 1e-9), rel_tol=1e-6
    )


def test_equator_state_on_energy_shell():
    from harmgeo.surface import PolarSurface

    n, eps = 3, 0.2
    surf = PolarSurface.sectoral(n, eps)
    y = equator_state(n, eps, 0.7, 0.5)
    assert math.isclose(surf.hamiltonian2(*y), 1.0, rel_tol=1e-12)
    assert y[2] >= 0.0
    with pytest.raises(ValueError):
        equator_state(n, eps, 0.0, 2.0)


# -- return map ----------------------------------------------------------------


def test_return_map_inverse_by_time_reversal():
    """Reflecting through the equatorial plane and reversing time inverts the
    section map, so P(phi', -pd') must recover (phi, -pd)."""
    n, eps = 3, 0.1
    phi0, pd0 = 0.9, 0.3
    phi1, pd1, _ = return_map(n, eps, phi0, pd0)
    phi2, pd2, _ = return_map(n, eps, phi1 % TWO_PI, -pd1)
    assert abs((phi2 - phi0 + math.pi) % TWO_PI - math.pi) < 1e-6
    assert abs(pd2 + pd0) < 1e-6


def test_planar_geodesic_is_fixed_point():
    """The geodesic in the symmetry plane phi = pi/n is closed, so it returns
    to the section at the same point."""
    n, eps = 3, 0.1
    phi0 = math.pi / n
    phi1, pd1, length = return_map(n, eps, phi0, 0.0)
    assert abs((phi1 - phi0 + math.pi) % TWO_PI - math.pi) < 1e-8
    assert abs(pd1) < 1e-8
    assert 2 * math.pi * 0.8 < length < 2 * math.pi * 1.2


def test_return_map_higher_iterates_compose():
    n, eps = 2, 0.15
    p1, d1, s1 = return_map(n, eps, 0.4, 0.2)
    p2a, d2a, s2a = return_map(n, eps, p1 % TWO_PI, d1)
    p2b, d2b, s2b = return_map(n, eps, 0.4, 0.2, k=2)
    assert abs((p2b - p2a - p1 + (p1 % TWO_PI) + math.pi) % TWO_PI - math.pi) < 1e-7
    assert abs(d2b - d2a) < 1e-8
    assert abs(s2b - (s1 + s2a)) < 1e-7


# -- seeded sections ---------------------------------------------------------------


def test_sections_are_deterministic():
    a = generate_section(2, 0.1, n_traj=3, n_crossings=15, seed=11, rtol=1e-9, atol=1e-9)
    b = generate_section(2, 0.1, n_traj=3, n_crossings=15, seed=11, rtol=1e-9, atol=1e-9)
    for ta, tb in zip(a.trajectories, b.trajectories):
        assert np.array_equal(ta, tb)
    assert a.initials == b.initials


def test_section_streams_independent_of_trajectory_count():
    """Philox streams are keyed per trajectory, so asking for more
    trajectories must not perturb the earlier ones."""
    a = generate_section(2, 0.1, n_traj=1, n_crossings=10, seed=3, rtol=1e-9, atol=1e-9)
    b = generate_section(2, 0.1, n_traj=2, n_crossings=10, seed=3, rtol=1e-9, atol=1e-9)
    assert np.array_equal(a.trajectories[0], b.trajectories[0])


def test_parallel_section_matches_serial():
    a = generate_section(2, 0.2, n_traj=4, n_crossings=10, seed=5, rtol=1e-8, atol=1e-8)
    b = generate_section(
        2, 0.2, n_traj=4, n_crossings=10, seed=5, rtol=1e-8, atol=1e-8, workers=2
    )
    for ta, tb in zip(a.trajectories, b.trajectories):
        assert np.array_equal(ta, tb)


def test_rotated_section_contains_equator_orbit():
    sec = generate_section(
        3, 0.1, n_traj=2, n_crossings=10, seed=1, rotated=True, rtol=1e-9, atol=1e-9
    )
    pts = sec.all_points()
    assert len(pts) == 20
    assert np.all(np.abs(pts[:, 2]) <= 1.0 / (1.0 - 0.1) + 1e-9)


# -- occupancy ------------------------------------------------------------------


def _fake_section(trajectories, eps=0.2):
    return SectionData(3, eps, 0, 10, trajectories, [(0.0, 0.0)] * len(trajectories))


def test_occupancy_counts_cells():
    lim = 1.0 / (1.0 - 0.2)
    # two points in the same cell, one in another
    pts = np.array([[0.0, 0.01, 0.0], [0.0, 0.011, 0.0], [0.0, 3.0, 0.5]])
    sec = _fake_section([pts])
    assert occupancy(sec, grid=100) == 2 / 10000.0
    assert max_trajectory_occupancy(sec, grid=100) == 2 / 10000.0


def test_max_trajectory_occupancy_takes_maximum():
    a = np.array([[0.0, 0.1, 0.0]])
    b = np.array([[0.0, 1.0, 0.0], [0.0, 2.0, 0.1], [0.0, 3.0, -0.2]])
    sec = _fake_section([a, b])
    assert max_trajectory_occupancy(sec, grid=50) == 3 / 2500.0
    assert occupancy(sec, grid=50) == 4 / 2500.0


def test_occupancy_empty_section():
    sec = _fake_section([])
    assert occupancy(sec) == 0.0
    assert max_trajectory_occupancy(sec) == 0.0


# -- closed geodesics ----------------------------------------------------------------


def test_closed_geodesics_order_two_planar_elliptic():
    found = find_closed_geodesics(2, 0.1, families=("planar",), max_period=1)
    assert found
    for g in found:
        assert g.classification == "elliptic"
        assert abs(g.det - 1.0) < 1e-4  # the return map is area-preserving
        assert abs(g.trace) < 2.0


def test_equator_monodromy_shape():
    mat = equator_monodromy(2, 0.1)
    assert mat.shape == (2, 2)
    assert abs(np.linalg.det(mat) - 1.0) < 1e-6


# -- writers ------------------------------------------------------------------------


def test_section_writers(tmp_path):
    sec = generate_section(2, 0.1, n_traj=2, n_crossings=5, seed=0, rtol=1e-8, atol=1e-8)

    csv_path = tmp_path / "s.csv"
    section_to_csv(sec, csv_path)
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("traj_id,crossing_index,s,")
    assert len(lines) == 1 + 10

    json_path = tmp_path / "s.json"
    section_to_json(sec, json_path)
    blob = json.loads(json_path.read_text())
    assert blob["n"] == 2 and len(blob["trajectories"]) == 2

    svg_path = tmp_path / "s.svg"
    section_to_svg(sec, svg_path)
    body = svg_path.read_text()
    assert body.startswith("<svg") or "<svg" in body
    assert body.count("circle") >= 10
