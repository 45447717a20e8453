"""Kovacic's algorithm for xi'' = r(z) xi with r rational and Fuchsian.

Given the double-pole data (beta_j, delta_j, beta_inf) of r, the algorithm
decides whether the equation has Liouvillian solutions, by hunting for a
solution xi = exp(int omega) whose logarithmic derivative omega is algebraic
of degree 1 (case 1), 2 (case 2) or 4/6/12 (case 3) over the rationals.

Each case reduces to finitely many *candidates*: a choice of local exponent
at every singular point together with a non-negative integer degree d, and
for each candidate a polynomial P of degree d that must satisfy a linear
differential identity.  P enters that identity linearly, so every search is
an exact linear solve over the coefficient field; a found P is certified by
an independent residual identity before the equation is declared solvable.

Every candidate examined is recorded in a ledger, so a negative answer is a
finite, checkable case analysis and not just a failure to find something.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Optional, Sequence

from .algebra import (
    FieldElement,
    Poly,
    QuadExt,
    RatFunc,
    field_inv,
    sqrt_decompose,
)

CASE_ORDERS = {1: (1,), 2: (2,), 3: (4, 6, 12)}
ALL_N = (1, 2, 4, 6, 12)


# ---------------------------------------------------------------------------
# problem statement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FuchsianODE:
    """xi'' = r xi with regular singular points only.

    ``betas``/``deltas`` are the coefficients of (z-a)^-2 and (z-a)^-1 in the
    expansion of r at each pole; ``beta_inf`` is the z^-2 coefficient at
    infinity.  The betas and beta_inf must be rational (real quadratic local
    exponents are still produced when 1+4*beta is not a perfect square).
    """

    r: RatFunc
    poles: tuple
    betas: tuple
    deltas: tuple
    beta_inf: Fraction

    @classmethod
    def from_nve(cls, data) -> "FuchsianODE":
        return cls(
            r=data.r,
            poles=tuple(data.poles),
            betas=tuple(_require_rational(b, "beta") for b in data.betas),
            deltas=tuple(data.deltas),
            beta_inf=_require_rational(data.beta_inf, "beta_inf"),
        )

    @classmethod
    def from_ratfunc(cls, r: RatFunc, poles: Sequence[FieldElement]) -> "FuchsianODE":
        from .algebra import partial_fractions

        pf = partial_fractions(r, poles)
        return cls(
            r=r,
            poles=tuple(pf.poles),
            betas=tuple(_require_rational(b, "beta") for b in pf.betas),
            deltas=tuple(pf.deltas),
            beta_inf=_require_rational(pf.beta_inf, "beta_inf"),
        )


def _require_rational(x, what: str) -> Fraction:
    if isinstance(x, QuadExt):
        if not x.is_rational:
            raise NotImplementedError(f"irrational {what} not supported: {x}")
        return x.a
    return Fraction(x)


# ---------------------------------------------------------------------------
# candidates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    """One exponent selection: N (algebraic degree of omega), the degree d of
    the auxiliary polynomial, per-pole exponents and the exponent at
    infinity.  ``labels`` is a human-readable transcript of the selection
    (sign choices for N=1, integer set elements otherwise)."""

    N: int
    d: int
    exps: tuple
    exp_inf: object
    labels: tuple


class _ExpSum:
    """Exact sum of quadratic irrationals grouped by discriminant."""

    def __init__(self):
        self.rat = Fraction(0)
        self.irr: dict[int, Fraction] = {}

    def add(self, x, sign=1):
        if isinstance(x, QuadExt):
            self.rat += sign * x.a
            if x.b:
                new = self.irr.get(x.D, Fraction(0)) + sign * x.b
                if new:
                    self.irr[x.D] = new
                else:
                    self.irr.pop(x.D, None)
        else:
            self.rat += sign * Fraction(x)

    def as_nonneg_int(self) -> Optional[int]:
        if self.irr:
            return None
        if self.rat.denominator != 1 or self.rat < 0:
            return None
        return int(self.rat)


def _sqrt_1p4b(beta: Fraction):
    """sqrt(1+4*beta) as a Fraction, a QuadExt, or None when complex."""
    t = 1 + 4 * Fraction(beta)
    if t < 0:
        return None
    q, d = sqrt_decompose(t)
    if d == 1:
        return q
    return QuadExt(0, q, d)


def case1_candidates(ode: FuchsianODE) -> list[Candidate]:
    """All formal +/- exponent selections with a non-negative integer degree.

    Coincident exponent values (a pole with beta = 0 contributes the same
    value for both signs) are still enumerated per sign; this formal count is
    what the candidate-census table reports.
    """
    per_pole = []
    for beta, delta in zip(ode.betas, ode.deltas):
        if beta == 0:
            val = Fraction(1) if delta else Fraction(0)
            per_pole.append([("+", val), ("-", val)])
            continue
        s = _sqrt_1p4b(beta)
        if s is None:
            raise NotImplementedError("complex local exponents (beta < -1/4)")
        half = Fraction(1, 2)
        plus = half + half * s if isinstance(s, Fraction) else QuadExt(half, 0) + half * s
        minus = half - half * s if isinstance(s, Fraction) else QuadExt(half, 0) - half * s
        per_pole.append([("+", plus), ("-", minus)])

    if ode.beta_inf == 0:
        inf_opts = [("+", Fraction(1)), ("-", Fraction(0))]
    else:
        s = _sqrt_1p4b(ode.beta_inf)
        if s is None:
            raise NotImplementedError("complex local exponents at infinity")
        half = Fraction(1, 2)
        inf_opts = [("+", half + half * s), ("-", half - half * s)]

    out = []
    for combo in product(*per_pole):
        for lab_inf, a_inf in inf_opts:
            acc = _ExpSum()
            acc.add(a_inf)
            for _, a in combo:
                acc.add(a, -1)
            d = acc.as_nonneg_int()
            if d is None:
                continue
            out.append(
                Candidate(
                    N=1,
                    d=d,
                    exps=tuple(a for _, a in combo),
                    exp_inf=a_inf,
                    labels=tuple(lab for lab, _ in combo) + (lab_inf,),
                )
            )
    return out


def _int_set(center: int, step_values) -> list[int]:
    vals = set()
    for v in step_values:
        x = center + v
        if isinstance(x, Fraction):
            if x.denominator != 1:
                continue
            x = int(x)
        vals.add(x)
    return sorted(vals)


def _e_set(beta: Fraction, delta) -> list[int]:
    if beta == 0:
        return [4] if delta else [0]
    s = _sqrt_1p4b(beta)
    if s is None or isinstance(s, QuadExt):
        return [2]
    return _int_set(2, [Fraction(0), 2 * s, -2 * s])


def _e_set_inf(beta_inf: Fraction) -> list[int]:
    if beta_inf == 0:
        return [0, 2, 4]
    s = _sqrt_1p4b(beta_inf)
    if s is None or isinstance(s, QuadExt):
        return [2]
    return _int_set(2, [Fraction(0), 2 * s, -2 * s])


def _f_set(beta: Fraction, delta, N: int) -> list[int]:
    if beta == 0:
        return [12] if delta else [0]
    s = _sqrt_1p4b(beta)
    if s is None or isinstance(s, QuadExt):
        return [6]
    steps = [Fraction(12 * e, N) * s for e in range(-N // 2, N // 2 + 1)]
    return _int_set(6, steps)


def _f_set_inf(beta_inf: Fraction, N: int) -> list[int]:
    s = _sqrt_1p4b(beta_inf)
    if s is None or isinstance(s, QuadExt):
        return [6]
    steps = [Fraction(12 * e, N) * s for e in range(-N // 2, N // 2 + 1)]
    return _int_set(6, steps)


def case2_candidates(ode: FuchsianODE) -> list[Candidate]:
    """Integer exponent-set selections for algebraic degree 2.

    Selections where every chosen integer is even are excluded: such a
    selection would already have been captured by an N=1 candidate.
    """
    sets = [_e_set(b, d) for b, d in zip(ode.betas, ode.deltas)]
    set_inf = _e_set_inf(ode.beta_inf)
    out = []
    for combo in product(*sets):
        for e_inf in set_inf:
            if all(e % 2 == 0 for e in combo) and e_inf % 2 == 0:
                continue
            num = e_inf - sum(combo)
            if num < 0 or num % 2:
                continue
            out.append(
                Candidate(
                    N=2,
                    d=num // 2,
                    exps=combo,
                    exp_inf=e_inf,
                    labels=tuple(str(e) for e in combo) + (str(e_inf),),
                )
            )
    return out


def case3_candidates(ode: FuchsianODE, N: int) -> list[Candidate]:
    """Integer exponent-set selections for algebraic degree N in {4, 6, 12}."""
    if N not in (4, 6, 12):
        raise ValueError("N must be 4, 6 or 12")
    sets = [_f_set(b, d, N) for b, d in zip(ode.betas, ode.deltas)]
    set_inf = _f_set_inf(ode.beta_inf, N)
    out = []
    for combo in product(*sets):
        for f_inf in set_inf:
            num = Fraction(N * (f_inf - sum(combo)), 12)
            if num < 0 or num.denominator != 1:
                continue
            out.append(
                Candidate(
                    N=N,
                    d=int(num),
                    exps=combo,
                    exp_inf=f_inf,
                    labels=tuple(str(f) for f in combo) + (str(f_inf),),
                )
            )
    return out


def candidates_for(ode: FuchsianODE, N: int) -> list[Candidate]:
    if N == 1:
        return case1_candidates(ode)
    if N == 2:
        return case2_candidates(ode)
    return case3_candidates(ode, N)


# ---------------------------------------------------------------------------
# searches (exact linear algebra)
# ---------------------------------------------------------------------------


def _theta(poles, coeffs) -> RatFunc:
    th = RatFunc.zero()
    for a, c in zip(poles, coeffs):
        if c:
            th = th + RatFunc(Poly([c]), Poly([-a, 1]))
    return th


def _poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        raise ValueError("lcm with zero polynomial")
    return a.exact_div(a.gcd(b)) * b


def _clear(f: RatFunc, m: Poly) -> Poly:
    """f * m, which must be a polynomial."""
    g = RatFunc(m) * f
    if not g.is_polynomial():
        raise ValueError("common denominator did not clear the expression")
    return g.num * field_inv(g.den.leading())


def _solve_linear(columns: list[Poly], rhs: Poly) -> Optional[list]:
    """Solve sum x_i * columns[i] = rhs exactly, coefficient by coefficient.

    Returns one solution (the system is generically overdetermined) or None.
    """
    nrows = max([c.degree for c in columns] + [rhs.degree]) + 1
    ncols = len(columns)
    rows = [[col[k] for col in columns] + [rhs[k]] for k in range(max(nrows, 1))]

    pivots = []
    rank_row = 0
    for col in range(ncols):
        piv = None
        for rr in range(rank_row, len(rows)):
            if rows[rr][col]:
                piv = rr
                break
        if piv is None:
            continue
        rows[rank_row], rows[piv] = rows[piv], rows[rank_row]
        inv = field_inv(rows[rank_row][col])
        rows[rank_row] = [x * inv for x in rows[rank_row]]
        for rr in range(len(rows)):
            if rr != rank_row and rows[rr][col]:
                fac = rows[rr][col]
                rows[rr] = [x - fac * y for x, y in zip(rows[rr], rows[rank_row])]
        pivots.append(col)
        rank_row += 1
        if rank_row == len(rows):
            break
    # consistency: remaining rows must have zero rhs
    for rr in range(rank_row, len(rows)):
        if rows[rr][ncols]:
            return None
    sol = [Fraction(0)] * ncols
    for rr, col in enumerate(pivots):
        sol[col] = rows[rr][ncols]
    return sol


def _monic_from_solution(d: int, sol: list) -> Poly:
    return Poly(list(sol[:d]) + [Fraction(1)])


@dataclass
class Solution:
    """Certified output of a successful search."""

    N: int
    d: int
    theta: RatFunc
    P: Poly
    omega: Optional[RatFunc] = None  # N = 1: xi = exp(int omega)
    phi: Optional[RatFunc] = None  # N = 2: omega^2 - phi*omega + psi = 0
    psi: Optional[RatFunc] = None
    minpoly: Optional[tuple] = None  # N >= 4: coefficients of omega^0..omega^N


def case1_search(ode: FuchsianODE, cand: Candidate) -> Optional[Solution]:
    """Monic P of degree d with P'' + 2*theta*P' + (theta' + theta^2 - r)P = 0."""
    theta = _theta(ode.poles, cand.exps)
    phi = theta.derivative() + theta * theta - ode.r
    m = _poly_lcm(phi.den, theta.den * theta.den)

    def lop(mono: Poly) -> Poly:
        expr = (
            RatFunc(mono.derivative().derivative())
            + 2 * theta * RatFunc(mono.derivative())
            + phi * RatFunc(mono)
        )
        return _clear(expr, m)

    d = cand.d
    cols = [lop(Poly.monomial(i)) for i in range(d)]
    target = -lop(Poly.monomial(d))
    if d == 0:
        if not target.is_zero():
            return None
        sol = []
    else:
        sol = _solve_linear(cols, target)
        if sol is None:
            return None
    P = _monic_from_solution(d, sol)
    omega = theta + RatFunc(P.derivative()) / RatFunc(P)
    return Solution(N=1, d=d, theta=theta, P=P, omega=omega)


def case2_search(ode: FuchsianODE, cand: Candidate) -> Optional[Solution]:
    """Monic P of degree d satisfying the third-order auxiliary equation
    P''' + 3*theta*P'' + (3*theta^2 + 3*theta' - 4r)P'
        + (theta'' + 3*theta*theta' + theta^3 - 4*r*theta - 2*r')P = 0."""
    half = Fraction(1, 2)
    theta = _theta(ode.poles, [half * Fraction(e) for e in cand.exps])
    r = ode.r
    a2 = 3 * theta
    a1 = 3 * theta * theta + 3 * theta.derivative() - 4 * r
    a0 = (
        theta.derivative().derivative()
        + 3 * theta * theta.derivative()
        + theta * theta * theta
        - 4 * r * theta
        - 2 * r.derivative()
    )
    m = _poly_lcm(_poly_lcm(a0.den, a1.den), a2.den)

    def lop(mono: Poly) -> Poly:
        d3 = mono.derivative().derivative().derivative()
        expr = (
            RatFunc(d3)
            + a2 * RatFunc(mono.derivative().derivative())
            + a1 * RatFunc(mono.derivative())
            + a0 * RatFunc(mono)
        )
        return _clear(expr, m)

    d = cand.d
    cols = [lop(Poly.monomial(i)) for i in range(d)]
    target = -lop(Poly.monomial(d))
    if d == 0:
        if not target.is_zero():
            return None
        sol = []
    else:
        sol = _solve_linear(cols, target)
        if sol is None:
            return None
    P = _monic_from_solution(d, sol)
    phi = theta + RatFunc(P.derivative()) / RatFunc(P)
    psi = half * phi.derivative() + half * phi * phi - r
    return Solution(N=2, d=d, theta=theta, P=P, phi=phi, psi=psi)


def _case3_descend(N: int, S: Poly, T: Poly, R2: Poly, P: Poly) -> list[Poly]:
    """Run the downward recursion P_N = -P, ...; returns [P_N, ..., P_-1]."""
    seq = [-P]
    Sp = S.derivative()
    for i in range(N, -1, -1):
        Pi = seq[-1]
        nxt = -(S * Pi.derivative()) + ((N - i) * Sp - T) * Pi
        if i < N:
            nxt = nxt - Poly([(N - i) * (i + 1)]) * R2 * seq[-2]
        seq.append(nxt)
    return seq


def case3_search(ode: FuchsianODE, cand: Candidate) -> Optional[Solution]:
    """Monic P of degree d making the degree-N recursion terminate at zero."""
    N = cand.N
    frac = Fraction(N, 12)
    theta = _theta(ode.poles, [frac * Fraction(f) for f in cand.exps])
    S = Poly.from_roots(ode.poles)
    T = _clear(theta, S)
    R2 = _clear(ode.r, S * S)

    d = cand.d

    def residual(mono: Poly) -> Poly:
        return _case3_descend(N, S, T, R2, mono)[-1]

    cols = [residual(Poly.monomial(i)) for i in range(d)]
    target = -residual(Poly.monomial(d))
    if d == 0:
        if not target.is_zero():
            return None
        sol = []
    else:
        sol = _solve_linear(cols, target)
        if sol is None:
            return None
    P = _monic_from_solution(d, sol)
    seq = _case3_descend(N, S, T, R2, P)
    if not seq[-1].is_zero():
        return None
    # minimal polynomial sum_i S^i P_i / (N-i)! * omega^i, i = 0..N
    coeffs = []
    for i in range(N + 1):
        Pi = seq[N - i]  # seq[0] = P_N ... seq[N] = P_0
        coeffs.append(RatFunc(Poly([Fraction(1, factorial(N - i))]) * S**i * Pi))
    return Solution(N=N, d=d, theta=theta, P=P, minpoly=tuple(coeffs))


def search_for(ode: FuchsianODE, cand: Candidate) -> Optional[Solution]:
    if cand.N == 1:
        return case1_search(ode, cand)
    if cand.N == 2:
        return case2_search(ode, cand)
    return case3_search(ode, cand)


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


def verify_solution(ode: FuchsianODE, sol: Solution) -> bool:
    """Independent residual check of a claimed solution.

    N=1: the logarithmic derivative satisfies the Riccati equation
         omega' + omega^2 = r.
    N=2: with phi = omega + conj(omega) and psi = omega*conj(omega), both
         Riccati copies combine into psi' + phi*psi - phi*r = 0 (together
         with psi = phi'/2 + phi^2/2 - r, which defines psi).
    N>=4: the recursion residual is recomputed from scratch and the minimal
         polynomial must have a nonzero leading coefficient.
    """
    if sol.N == 1:
        res = sol.omega.derivative() + sol.omega * sol.omega - ode.r
        return res.is_zero()
    if sol.N == 2:
        res = sol.psi.derivative() + sol.phi * sol.psi - sol.phi * ode.r
        return res.is_zero()
    N = sol.N
    S = Poly.from_roots(ode.poles)
    T = _clear(sol.theta, S)
    R2 = _clear(ode.r, S * S)
    seq = _case3_descend(N, S, T, R2, sol.P)
    return seq[-1].is_zero() and bool(sol.minpoly[-1])


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LedgerEntry:
    N: int
    d: int
    labels: tuple
    multiplicity: int
    searched: bool
    success: bool


@dataclass
class KovacicResult:
    solvable: bool
    solution: Optional[Solution]
    ledger: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "Solvable" if self.solvable else "Unsolvable"


def run_kovacic(ode: FuchsianODE, cases=(1, 2, 3)) -> KovacicResult:
    """Try every candidate in order of increasing algebraic degree; stop at
    the first certified solution.  The ledger records every candidate with
    its search outcome (unsearched ones, after a success, included)."""
    ledger: list[LedgerEntry] = []
    winner: Optional[Solution] = None
    for case in cases:
        for N in CASE_ORDERS[case]:
            groups: dict = {}
            for cand in candidates_for(ode, N):
                key = (cand.d, tuple(map(_exp_key, cand.exps)), _exp_key(cand.exp_inf))
                if key in groups:
                    groups[key][1] += 1
                else:
                    groups[key] = [cand, 1]
            for cand, mult in sorted(
                groups.values(), key=lambda g: (g[0].d, g[0].labels)
            ):
                if winner is not None:
                    ledger.append(
                        LedgerEntry(N, cand.d, cand.labels, mult, False, False)
                    )
                    continue
                sol = search_for(ode, cand)
                ok = sol is not None and verify_solution(ode, sol)
                ledger.append(LedgerEntry(N, cand.d, cand.labels, mult, True, ok))
                if ok:
                    winner = sol
        if winner is not None:
            break
    return KovacicResult(solvable=winner is not None, solution=winner, ledger=ledger)


def _exp_key(x):
    if isinstance(x, QuadExt):
        return (x.a, x.b, x.D)
    return (Fraction(x), Fraction(0), None)


# ---------------------------------------------------------------------------
# candidate census table
# ---------------------------------------------------------------------------


def candidate_census(ode: FuchsianODE) -> dict[int, dict[int, int]]:
    """Count candidates by degree d for every algebraic degree N.

    N=1 counts formal sign selections (coincident values counted per sign);
    N>=2 counts distinct integer-set selections.
    """
    out: dict[int, dict[int, int]] = {}
    for N in ALL_N:
        counts: dict[int, int] = {}
        for cand in candidates_for(ode, N):
            counts[cand.d] = counts.get(cand.d, 0) + 1
        out[N] = dict(sorted(counts.items()))
    return out


def census_for_order(n: int, eps=Fraction(1, 10)) -> dict[int, dict[int, int]]:
    """Census for the equatorial variational equation of a sectoral surface.

    The local exponent data depends only on n, not on eps, so any rational
    0 < eps < 1 gives the same table; eps = 1/10 is used by default.
    """
    from .nve import equatorial_nve

    return candidate_census(FuchsianODE.from_nve(equatorial_nve(n, eps)))


def census_cell(counts: dict[int, int]) -> str:
    if not counts:
        return "-"
    return ",".join(f"{d}({c})" for d, c in sorted(counts.items()))


def census_table_text(orders=range(2, 13)) -> str:
    """Aligned text table of candidate counts d(count) per harmonic order."""
    header = ["n"] + [f"N={N}" for N in ALL_N]
    rows = [header]
    for n in orders:
        census = census_for_order(n)
        rows.append([str(n)] + [census_cell(census[N]) for N in ALL_N])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for k, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def census_table_json(orders=range(2, 13)) -> str:
    data = {
        str(n): {str(N): counts for N, counts in census_for_order(n).items()}
        for n in orders
    }
    return json.dumps(data, indent=2)


def result_to_json(res: KovacicResult) -> str:
    out = {
        "verdict": res.verdict,
        "solution": None,
        "ledger": [
            {
                "N": e.N,
                "d": e.d,
                "selection": list(e.labels),
                "multiplicity": e.multiplicity,
                "searched": e.searched,
                "success": e.success,
            }
            for e in res.ledger
        ],
    }
    if res.solution is not None:
        s = res.solution
        out["solution"] = {
            "N": s.N,
            "d": s.d,
            "P": [str(c) for c in s.P.coeffs],
            "omega": _rf_str(s.omega),
            "phi": _rf_str(s.phi),
            "psi": _rf_str(s.psi),
            "minpoly": [_rf_str(c) for c in s.minpoly] if s.minpoly else None,
        }
    return json.dumps(out, indent=2)


def _rf_str(f: Optional[RatFunc]) -> Optional[dict]:
    if f is None:
        return None
    return {
        "num": [str(c) for c in f.num.coeffs],
        "den": [str(c) for c in f.den.coeffs],
    }
