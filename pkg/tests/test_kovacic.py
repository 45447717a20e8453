"""Liouvillian-solvability decision procedure: candidates, searches, census."""

from fractions import Fraction

import pytest

from harmgeo.algebra import Poly, QuadExt, RatFunc
from harmgeo.kovacic import (
    FuchsianODE,
    candidate_census,
    candidates_for,
    case1_candidates,
    census_cell,
    census_for_order,
    result_to_json,
    run_kovacic,
    verify_solution,
)
from harmgeo.nve import equatorial_nve


def _pole_term(coeff, a, order=1):
    lin = Poly([-a, Fraction(1)])
    return RatFunc(Poly([coeff]), lin**order)


def hypergeometric_r(lam, mu, nu) -> RatFunc:
    """Standard form of the hypergeometric equation with exponent differences
    lam, mu, nu at z = 0, 1, infinity."""
    b0 = (lam * lam - 1) * Fraction(1, 4)
    b1 = (mu * mu - 1) * Fraction(1, 4)
    c = (1 + nu * nu - lam * lam - mu * mu) * Fraction(1, 4)
    return (
        _pole_term(b0, Fraction(0), 2)
        + _pole_term(b1, Fraction(1), 2)
        + _pole_term(c, Fraction(1))
        - _pole_term(c, Fraction(0))
    )


def hypergeometric_ode(lam, mu, nu) -> FuchsianODE:
    return FuchsianODE.from_ratfunc(
        hypergeometric_r(lam, mu, nu), [Fraction(0), Fraction(1)]
    )


# -- elementary solvable / unsolvable equations --------------------------------


def test_power_solution_found_exactly():
    # xi'' = 2 z^-2 xi has xi = z^2; expect omega = 2/z with empty remainder
    ode = FuchsianODE.from_ratfunc(_pole_term(Fraction(2), Fraction(0), 2), [Fraction(0)])
    res = run_kovacic(ode)
    assert res.verdict == "Solvable"
    assert res.solution.N == 1 and res.solution.d == 0
    assert res.solution.omega == RatFunc(Poly([2]), Poly([0, 1]))


def test_irrational_power_solved_over_quadratic_extension():
    # xi'' = (1/5) z^-2 xi has xi = z^c with c = (1 + 3/sqrt(5))/2; the
    # logarithmic derivative c/z lives in Q(sqrt(5))(z) and case 1 finds it
    ode = FuchsianODE.from_ratfunc(
        _pole_term(Fraction(1, 5), Fraction(0), 2), [Fraction(0)]
    )
    res = run_kovacic(ode)
    assert res.solvable and res.solution.N == 1
    c = res.solution.omega.num[0]
    assert isinstance(c, QuadExt) and c.D == 5
    # c solves the indicial equation c(c-1) = 1/5
    assert c * (c - 1) == QuadExt(Fraction(1, 5), 0, 5)


@pytest.mark.parametrize(
    "exponents,expected_N",
    [
        ((Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)), 2),  # dihedral
        ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 3)), 4),  # tetrahedral
        ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)), 6),  # octahedral
        ((Fraction(1, 2), Fraction(1, 3), Fraction(1, 5)), 12),  # icosahedral
    ],
)
def test_schwarz_list_hypergeometrics_solvable(exponents, expected_N):
    res = run_kovacic(hypergeometric_ode(*exponents))
    assert res.solvable
    assert res.solution.N == expected_N
    # every reported success in the ledger is a verified one
    assert any(e.success for e in res.ledger)


def test_generic_hypergeometric_unsolvable():
    res = run_kovacic(
        hypergeometric_ode(Fraction(1, 7), Fraction(1, 7), Fraction(1, 7))
    )
    assert res.verdict == "Unsolvable"
    assert res.solution is None
    assert res.ledger == []  # no admissible candidates at all


def test_verification_rejects_tampered_solution():
    ode = FuchsianODE.from_ratfunc(_pole_term(Fraction(2), Fraction(0), 2), [Fraction(0)])
    sol = run_kovacic(ode).solution
    assert verify_solution(ode, sol)
    sol.omega = sol.omega + RatFunc(Poly([1]))
    assert not verify_solution(ode, sol)


def test_minpoly_reported_for_higher_degree():
    res = run_kovacic(
        hypergeometric_ode(Fraction(1, 2), Fraction(1, 3), Fraction(1, 3))
    )
    sol = res.solution
    assert sol.minpoly is not None and len(sol.minpoly) == sol.N + 1
    lead = sol.minpoly[-1]
    # leading coefficient is (up to sign) the N-th power of the pole product
    assert lead == -RatFunc(Poly.from_roots([0, 1]) ** sol.N)


# -- equatorial variational equations -------------------------------------------


@pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 3)])
def test_order_one_solvable_with_known_first_integral(eps):
    """For n = 1 the equation is solvable in case 1 with degree-zero P; the
    logarithmic derivative has residues (1, 3/4, 3/4, -1/4) at the poles
    (-1, eps, -eps, -(1+eps^2)/2)."""
    ode = FuchsianODE.from_nve(equatorial_nve(1, eps))
    res = run_kovacic(ode)
    assert res.solvable and res.solution.N == 1 and res.solution.d == 0
    rho = -Fraction(1 + eps * eps, 2)
    expected = (
        _pole_term(Fraction(1), Fraction(-1))
        + _pole_term(Fraction(3, 4), eps)
        + _pole_term(Fraction(3, 4), -eps)
        - _pole_term(Fraction(1, 4), rho)
    )
    assert res.solution.omega == expected
    assert res.solution.P == Poly([1])


def test_order_two_unsolvable_with_full_ledger():
    res = run_kovacic(FuchsianODE.from_nve(equatorial_nve(2, Fraction(1, 2))))
    assert res.verdict == "Unsolvable"
    assert all(e.searched and not e.success for e in res.ledger)
    # candidate multiplicities must add up to the census totals
    census = candidate_census(FuchsianODE.from_nve(equatorial_nve(2, Fraction(1, 2))))
    total = sum(c for counts in census.values() for c in counts.values())
    assert sum(e.multiplicity for e in res.ledger) == total


# -- candidate census -------------------------------------------------------------


def test_census_counts_for_order_two():
    census = census_for_order(2)
    assert census[1] == {0: 4}
    assert census[2] == {0: 3, 1: 1}
    assert census[4] == {0: 4, 1: 2, 2: 1}
    assert census[6] == {0: 21, 1: 10, 2: 3, 3: 1}
    assert census[12] == {0: 31, 1: 20, 2: 13, 3: 8, 4: 4, 5: 2, 6: 1}


def test_census_counts_for_prime_orders_mostly_empty():
    for n in (7, 8, 9, 11):
        census = census_for_order(n)
        assert all(not counts for counts in census.values()), n


def test_census_independent_of_eps():
    assert census_for_order(3, Fraction(1, 10)) == census_for_order(3, Fraction(2, 5))


def test_census_cell_formatting():
    assert census_cell({}) == "-"
    assert census_cell({1: 2, 0: 3}) == "0(3),1(2)"


def test_case1_counts_formal_sign_tuples():
    """The pole with vanishing double-pole coefficient contributes the same
    exponent for both signs; candidates are still counted once per sign."""
    ode = FuchsianODE.from_nve(equatorial_nve(2, Fraction(1, 10)))
    cands = case1_candidates(ode)
    assert len(cands) == 4
    labels = {c.labels for c in cands}
    assert len(labels) == 4  # distinguished by sign labels, not values


def test_candidates_rejects_bad_order():
    ode = FuchsianODE.from_nve(equatorial_nve(2, Fraction(1, 10)))
    with pytest.raises(ValueError):
        candidates_for(ode, 5)


def test_result_json_shape():
    import json

    res = run_kovacic(FuchsianODE.from_nve(equatorial_nve(1, Fraction(1, 3))))
    blob = json.loads(result_to_json(res))
    assert blob["verdict"] == "Solvable"
    assert blob["solution"]["N"] == 1
    assert isinstance(blob["ledger"], list) and blob["ledger"]
