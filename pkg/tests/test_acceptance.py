"""Acceptance gate: end-to-end checks of every guaranteed behavior.

Each test pins down one externally promised property of the package, at the
stated tolerance and within the stated runtime budget.  These are the tests
that must stay green for a release.
"""

import math
import time
from fractions import Fraction
from importlib import resources

import numpy as np
import pytest

from harmgeo.algebra import Poly, QuadExt, RatFunc
from harmgeo.geodesic import (
    clairaut_values,
    integrate,
    lemma1_critical_eps,
    normalize_speed,
    nve_dual_residual,
    sphere_closure_error,
)
from harmgeo.kovacic import FuchsianODE, census_table_text, run_kovacic
from harmgeo.nve import appendix_delta1, equatorial_nve
from harmgeo.poincare import (
    find_closed_geodesics,
    generate_section,
    max_trajectory_occupancy,
)
from harmgeo.surface import PolarSurface

EPS_SAMPLES = (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2))
POPULATED = {2, 3, 4, 5, 6, 10, 12}
EMPTY = {7, 8, 9, 11}


def _rat(x):
    return x.to_fraction() if isinstance(x, QuadExt) else Fraction(x)


# -- 1. candidate-count table, byte-exact -----------------------------------------


def test_acceptance_1_candidate_table_matches_golden():
    golden = (
        resources.files("harmgeo").joinpath("data/table1.txt").read_text()
    )
    start = time.monotonic()
    text = census_table_text(range(2, 13))
    elapsed = time.monotonic() - start
    assert text == golden
    assert elapsed < 10.0


# -- 2. non-solvability for all orders >= 2 ----------------------------------------


def test_acceptance_2_orders_two_to_twelve_unsolvable():
    start = time.monotonic()
    for n in range(2, 13):
        for eps in EPS_SAMPLES:
            res = run_kovacic(FuchsianODE.from_nve(equatorial_nve(n, eps)))
            assert res.verdict == "Unsolvable", (n, eps)
            if n in POPULATED:
                assert res.ledger, (n, eps)
                assert all(e.searched and not e.success for e in res.ledger)
            else:
                assert n in EMPTY and res.ledger == [], (n, eps)
    assert time.monotonic() - start < 1800.0


# -- 3. solvability for order one, with exact witness ---------------------------------


@pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 3), Fraction(1, 2)])
def test_acceptance_3_order_one_solvable_with_witness(eps):
    ode = FuchsianODE.from_nve(equatorial_nve(1, eps))
    res = run_kovacic(ode)
    assert res.verdict == "Solvable"
    sol = res.solution
    assert sol.N == 1 and sol.d == 0

    # Riccati residual omega' + omega^2 - r vanishes identically
    residual = sol.omega.derivative() + sol.omega * sol.omega - ode.r
    assert residual.is_zero()

    # the witness is the logarithmic derivative of
    # (z+1) (z^2-eps^2)^(3/4) (z-rho)^(-1/4) with rho = -(1+eps^2)/2
    rho = -Fraction(1 + eps * eps, 2)

    def pole(coeff, a):
        return RatFunc(Poly([coeff]), Poly([-a, Fraction(1)]))

    witness = (
        pole(Fraction(1), Fraction(-1))
        + pole(Fraction(3, 4), eps)
        + pole(Fraction(3, 4), -eps)
        + pole(Fraction(-1, 4), rho)
    )
    assert sol.omega == witness


# -- 4. exact local data of the variational equation -----------------------------------


def test_acceptance_4_exact_fuchsian_data():
    for n in range(2, 13):
        for eps in EPS_SAMPLES:
            data = equatorial_nve(n, eps)
            betas = [_rat(b) for b in data.betas]
            assert betas[0] == 0
            assert betas[1] == betas[2] == Fraction(-3, 16)
            assert all(b == Fraction(5, 16) for b in betas[3:])
            assert _rat(data.beta_inf) == Fraction(n + 1, n * n)
            assert not sum(data.deltas, Fraction(0))
            assert _rat(data.deltas[0]) == Fraction(2, 1) / (n * (eps * eps - 1))
            assert _rat(data.deltas[0]) == appendix_delta1(n, eps)
    assert _rat(equatorial_nve(1, Fraction(1, 3)).beta_inf) == Fraction(45, 16)


# -- 5. critical deformation strengths ----------------------------------------------


def test_acceptance_5_critical_deformation():
    start = time.monotonic()
    targets = {2: 0.570, 3: 0.497, 4: 0.445}
    for n, expected in targets.items():
        assert abs(lemma1_critical_eps(n) - expected) <= 0.005, n
    assert time.monotonic() - start < 60.0


# -- 6. integrator quality ------------------------------------------------------------


def test_acceptance_6_sphere_great_circle_closes():
    rng = np.random.Generator(np.random.Philox(key=[2024, 0]))
    theta0 = rng.uniform(0.4, math.pi - 0.4)
    phi0 = rng.uniform(0.0, 2 * math.pi)
    alpha = rng.uniform(0.0, 2 * math.pi)
    assert sphere_closure_error(theta0, phi0, alpha) < 1e-8


def test_acceptance_6_clairaut_conserved_long_run():
    surf = PolarSurface.zonal(2, 0.3)
    y0 = normalize_speed(surf, [1.1, 0.0, 0.25, 0.7])
    traj = integrate(surf, y0, 1000.0, n_samples=500)
    vals = clairaut_values(surf, traj)
    assert np.max(np.abs(vals - vals[0])) < 1e-9


def test_acceptance_6_hamiltonian_drift_long_run():
    surf = PolarSurface.sectoral(3, 0.2)
    y0 = normalize_speed(surf, [1.2, 0.4, 0.3, 0.6])
    traj = integrate(surf, y0, 1000.0, n_samples=500)
    assert np.max(np.abs(traj.h2 - 1.0)) <= 1e-9


# -- 7. closed-geodesic stability ------------------------------------------------------


def test_acceptance_7_stability_classification():
    found3 = find_closed_geodesics(3, 0.1)
    planar3 = [g for g in found3 if g.family == "planar"]
    perp3 = [g for g in found3 if g.family == "perpendicular"]
    assert planar3 and perp3
    for g in planar3:
        assert g.classification == "hyperbolic", g
    for g in perp3:
        assert g.classification == "elliptic", g
    for g in found3:
        assert abs(g.det - 1.0) < 1e-4

    found2 = find_closed_geodesics(2, 0.1, families=("planar",))
    assert found2
    for g in found2:
        assert g.classification == "elliptic", g
        assert abs(g.det - 1.0) < 1e-4


# -- 8. onset of large-scale chaos ------------------------------------------------------


def test_acceptance_8_occupancy_grows_with_deformation():
    kwargs = dict(n_traj=1, n_crossings=400, seed=0, rtol=1e-9, atol=1e-9)
    weak = generate_section(3, 0.1, **kwargs)
    strong = generate_section(3, 0.3, **kwargs)
    occ_weak = max_trajectory_occupancy(weak, grid=100)
    occ_strong = max_trajectory_occupancy(strong, grid=100)
    assert occ_weak > 0
    assert occ_strong > 5.0 * occ_weak


# -- 9. exact-versus-numeric cross-validation --------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_acceptance_9_dual_representation_oracle(n):
    assert nve_dual_residual(n, Fraction(1, 5)) < 1e-6
