"""Exact linear programming over the rationals.

Two-phase primal simplex on a dense tableau of Fractions, with Bland's
anti-cycling rule.  All variables are free (each is split into a
difference of two non-negative parts), which matches how the solver is
used here: the unknowns are rational weight vectors and a threshold, none
of which carries a sign constraint a priori.

No floating point enters at any stage, so a reported optimum is exact and
a feasibility verdict is a theorem about the input data.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import InfeasibleError, UnboundedError


@dataclass
class LPResult:
    """Exact optimum of a linear program.

    Attributes
    ----------
    value : Fraction
        Optimal objective value.
    x : list of Fraction
        An optimal assignment of the original (free) variables.
    """

    value: Fraction
    x: list


def _frac_matrix(rows, width):
    out = []
    for row in rows:
        r = [Fraction(v) for v in row]
        if len(r) != width:
            raise ValueError("row of length %d, expected %d" % (len(r), width))
        out.append(r)
    return out


def _pivot(rows, cost, basis, r, c):
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    for i in range(len(rows)):
        if i != r and rows[i][c] != 0:
            f = rows[i][c]
            rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
    if cost[c] != 0:
        f = cost[c]
        for j in range(len(cost)):
            cost[j] -= f * rows[r][j]
    basis[r] = c


def _simplex(rows, cost, basis, ncols):
    """Minimize with reduced-cost row ``cost`` (rhs cell holds minus the
    current objective value).  Bland's rule throughout."""
    while True:
        enter = -1
        for j in range(ncols):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return
        leave = -1
        best = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leave]
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise UnboundedError("objective unbounded along column %d" % enter)
        _pivot(rows, cost, basis, leave, enter)


def lp_solve(objective, a_ub=(), b_ub=(), a_eq=(), b_eq=(), maximize=False):
    """Solve max/min objective . x  s.t.  a_ub x <= b_ub, a_eq x = b_eq.

    All coefficients are coerced to Fraction; variables are free.  Returns
    an LPResult with exact rational value and solution.  Raises
    InfeasibleError when the constraints admit no point and UnboundedError
    when the objective is unbounded over the feasible region.
    """
    nvar = len(objective)
    c_obj = [Fraction(v) for v in objective]
    if maximize:
        c_obj = [-v for v in c_obj]
    a_ub = _frac_matrix(a_ub, nvar)
    a_eq = _frac_matrix(a_eq, nvar)
    b_ub = [Fraction(v) for v in b_ub]
    b_eq = [Fraction(v) for v in b_eq]
    if len(b_ub) != len(a_ub) or len(b_eq) != len(a_eq):
        raise ValueError("constraint matrix / rhs length mismatch")

    nslack = len(a_ub)
    m = len(a_ub) + len(a_eq)
    # Columns: u_0, v_0, ..., u_{nvar-1}, v_{nvar-1}, slacks, artificials.
    nstruct = 2 * nvar + nslack
    ncols = nstruct + m

    rows = []
    for k, (arow, rhs) in enumerate(
        list(zip(a_ub, b_ub)) + list(zip(a_eq, b_eq))
    ):
        row = []
        for v in arow:
            row.extend((v, -v))
        for s in range(nslack):
            row.append(Fraction(1 if (k < nslack and s == k) else 0))
        row.extend([Fraction(0)] * m)
        row.append(rhs)
        if rhs < 0:
            row = [-v for v in row]
        row[nstruct + k] = Fraction(1)
        rows.append(row)

    basis = [nstruct + k for k in range(m)]

    # Phase 1: minimize the sum of artificials.  With the artificial
    # basis the reduced cost of column j is -(column sum over rows).
    cost = [Fraction(0)] * (ncols + 1)
    for j in range(nstruct):
        cost[j] = -sum(row[j] for row in rows)
    cost[-1] = -sum(row[-1] for row in rows)
    _simplex(rows, cost, basis, nstruct)
    if -cost[-1] != 0:
        raise InfeasibleError("phase-1 optimum %s > 0" % (-cost[-1],))

    # Drive any artificial still in the basis out, dropping rows that
    # turn out to be redundant.
    for i in reversed(range(len(rows))):
        if basis[i] >= nstruct:
            pivot_col = next(
                (j for j in range(nstruct) if rows[i][j] != 0), None
            )
            if pivot_col is None:
                del rows[i]
                del basis[i]
            else:
                _pivot(rows, cost, basis, i, pivot_col)

    # Phase 2: reduced costs of the real objective for the current basis.
    full = [Fraction(0)] * (ncols + 1)
    for i in range(nvar):
        full[2 * i] = c_obj[i]
        full[2 * i + 1] = -c_obj[i]
    cost = list(full)
    for i, row in enumerate(rows):
        cb = full[basis[i]]
        if cb != 0:
            for j in range(ncols + 1):
                cost[j] -= cb * row[j]
    for k in range(nstruct, ncols):
        cost[k] = Fraction(0)  # artificials never re-enter
    _simplex(rows, cost, basis, nstruct)

    assign = [Fraction(0)] * ncols
    for i, b in enumerate(basis):
        assign[b] = rows[i][-1]
    x = [assign[2 * i] - assign[2 * i + 1] for i in range(nvar)]
    value = -cost[-1]
    if maximize:
        value = -value
    return LPResult(value=value, x=x)
