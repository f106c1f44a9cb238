"""Row-generated cut LPs solved at exact vertices.

A cut LP here is: minimize sum(cost_e * x_e) subject to generated rows of the
form sum(x_e for e in ids) >= rhs, bounds 0 <= x <= 1, and a partial 0/1
fixing.  Rows come from a separation oracle that inspects candidate solutions.

Substituting x = 1 - y turns every row into a packing row sum(y) <= cap whose
all-slack basis is feasible, so a single-phase bounded simplex suffices.  The
float tableau drives the search; the answer handed back is always rebuilt in
exact rational arithmetic from the final basis and certified optimal through
an exact dual feasibility check, with a full exact-arithmetic simplex as the
fallback.  Identical inputs produce identical row sequences and solutions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    LpInfeasibleError,
    LpResourceError,
    OracleContractError,
    ValidationError,
)

# Tolerance ledger.  Float arithmetic appears only inside the simplex and the
# violation prefilter; every returned solution is exact.
EPS_SEP = 1e-7                     # cut violation below this does not drive the float stage
EPS_ROUND = Fraction(1, 10**6)     # slack under 1/2 when choosing edges to round up
EPS_BOUNDS = 1e-9                  # float-stage bound drift considered numerical noise

_FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class CutRow:
    """Requires sum of x over `edge_ids` to be at least `rhs`."""

    edge_ids: frozenset[int]
    rhs: Fraction


@dataclass(frozen=True)
class FractionalSolution:
    """Exact vertex solution of the generated system, fixed values included."""

    x: dict[int, Fraction]
    objective: Fraction
    is_vertex: bool
    rows: tuple[CutRow, ...]

    def fractional_ids(self) -> tuple[int, ...]:
        return tuple(sorted(e for e, v in self.x.items() if 0 < v < 1))


CutOracle = Callable[[Mapping[int, Fraction]], CutRow | None]


class _SimplexStall(Exception):
    """Internal: the float tableau hit its pivot cap or went numerically bad."""


def _simplex(k: int, rows: Sequence[tuple[tuple[int, ...], object]], costs, exact: bool):
    """Minimize -costs.y  s.t.  sum(y[cols]) <= cap per row, 0 <= y <= 1.

    Starts from the all-slack basis (y = 0), pivots by Bland's rule, and
    returns (y values, basis column per tableau row).  Columns are laid out as
    [y_0..y_{k-1} | s_0..s_{R-1} | t_0..t_{k-1}] with t the bound slacks.
    """
    big_r = len(rows)
    nrows = big_r + k
    ncols = k + big_r + k
    dtype = object if exact else np.float64
    one = Fraction(1) if exact else 1.0
    tab = np.zeros((nrows, ncols + 1), dtype=dtype)
    obj = np.zeros(ncols + 1, dtype=dtype)
    if exact:
        tab[:, :] = Fraction(0)
        obj[:] = Fraction(0)
    for r, (cols, cap) in enumerate(rows):
        for j in cols:
            tab[r, j] = one
        tab[r, k + r] = one
        tab[r, ncols] = cap
    for j in range(k):
        tab[big_r + j, j] = one
        tab[big_r + j, k + big_r + j] = one
        tab[big_r + j, ncols] = one
    for j in range(k):
        obj[j] = -costs[j]
    basis = [k + r for r in range(big_r)] + [k + big_r + j for j in range(k)]

    tol = 0 if exact else _FLOAT_TOL
    tie = 0 if exact else 1e-12
    cap_pivots = max(2000, 80 * nrows)
    pivots = 0
    while True:
        enter = -1
        for j in range(ncols):
            if obj[j] < -tol:
                enter = j
                break
        if enter < 0:
            break
        best_ratio = None
        for r in range(nrows):
            a = tab[r, enter]
            if a > tol:
                ratio = tab[r, ncols] / a
                if best_ratio is None or ratio < best_ratio:
                    best_ratio = ratio
        if best_ratio is None:
            if exact:
                raise LpResourceError("unbounded pivot in a bounded system")
            raise _SimplexStall
        leave = -1
        for r in range(nrows):
            a = tab[r, enter]
            if a > tol and tab[r, ncols] / a <= best_ratio + tie:
                if leave < 0 or basis[r] < basis[leave]:
                    leave = r
        piv = tab[leave, enter]
        tab[leave] = tab[leave] / piv
        col = np.array(tab[:, enter], copy=True)
        col[leave] = 0
        tab -= np.outer(col, tab[leave])
        factor = obj[enter]
        if factor != 0:
            obj = obj - factor * tab[leave]
        tab[:, enter] = Fraction(0) if exact else 0.0
        tab[leave, enter] = one
        obj[enter] = Fraction(0) if exact else 0.0
        basis[leave] = enter
        pivots += 1
        if pivots > cap_pivots:
            if exact:
                raise LpResourceError(f"simplex exceeded {cap_pivots} pivots")
            raise _SimplexStall

    y = [Fraction(0) if exact else 0.0] * k
    for r, b in enumerate(basis):
        if b < k:
            y[b] = tab[r, ncols]
    return y, basis


def _solve_square(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Exact Gaussian elimination; None when the system is singular."""
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col]
        a[col] = [v / inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def _basis_sets(k: int, big_r: int, basis: Sequence[int]):
    basic_y = set()
    basic_s = set()
    basic_t = set()
    for b in basis:
        if b < k:
            basic_y.add(b)
        elif b < k + big_r:
            basic_s.add(b - k)
        else:
            basic_t.add(b - k - big_r)
    return basic_y, basic_s, basic_t


def _primal_from_basis(k, rows, basis) -> list[Fraction] | None:
    """Rebuild the basic solution exactly from the basis combinatorics.

    Unit columns pin most variables: a nonbasic y is 0, a basic y whose bound
    slack is nonbasic sits at 1.  Only y variables whose bound slack is also
    basic stay unknown, and the rows with nonbasic row slack supply exactly as
    many tight equations.
    """
    big_r = len(rows)
    basic_y, basic_s, basic_t = _basis_sets(k, big_r, basis)
    y: list[Fraction | None] = [None] * k
    unknown = []
    for j in range(k):
        if j not in basic_y and j not in basic_t:
            return None
        if j not in basic_y:
            y[j] = Fraction(0)
        elif j not in basic_t:
            y[j] = Fraction(1)
        else:
            unknown.append(j)
    tight = [r for r in range(big_r) if r not in basic_s]
    if len(tight) != len(unknown):
        return None
    upos = {j: i for i, j in enumerate(unknown)}
    mat = []
    rhs = []
    for r in tight:
        cols, cap = rows[r]
        vec = [Fraction(0)] * len(unknown)
        acc = Fraction(cap)
        for j in cols:
            if j in upos:
                vec[upos[j]] = Fraction(1)
            else:
                acc -= y[j]
        mat.append(vec)
        rhs.append(acc)
    sol = _solve_square(mat, rhs) if unknown else []
    if sol is None:
        return None
    for j, v in zip(unknown, sol):
        y[j] = v
    out = [v for v in y]
    for v in out:
        if v < 0 or v > 1:
            return None
    for cols, cap in rows:
        if sum((out[j] for j in cols), Fraction(0)) > cap:
            return None
    return out


def _dual_certifies(k, rows, costs, basis) -> bool:
    """Exact optimality check: the basis prices must be dual feasible.

    Row prices solve the transposed version of the same structured system; the
    basis is optimal exactly when all prices are nonpositive and every
    nonbasic y column prices out at or above its objective coefficient.
    """
    big_r = len(rows)
    basic_y, basic_s, basic_t = _basis_sets(k, big_r, basis)
    d = [-Fraction(c) for c in costs]
    tight = [r for r in range(big_r) if r not in basic_s]
    unknown = [j for j in range(k) if j in basic_y and j in basic_t]
    if len(tight) != len(unknown):
        return False
    tpos = {r: i for i, r in enumerate(tight)}
    touching: dict[int, list[int]] = {j: [] for j in range(k)}
    for r in tight:
        for j in rows[r][0]:
            touching[j].append(r)
    mat = []
    rhs = []
    for j in unknown:
        vec = [Fraction(0)] * len(tight)
        for r in touching[j]:
            vec[tpos[r]] = Fraction(1)
        mat.append(vec)
        rhs.append(d[j])
    sol = _solve_square(mat, rhs) if unknown else []
    if sol is None:
        return False
    price = {r: v for r, v in zip(tight, sol)}
    if any(v > 0 for v in price.values()):
        return False
    for j in range(k):
        covered = sum((price[r] for r in touching[j] if r in price), Fraction(0))
        if j in basic_y and j not in basic_t:
            bound_price = d[j] - covered
            if bound_price > 0:
                return False
        elif j not in basic_y:
            if j not in basic_t:
                return False
            # bound slack basic means its price is zero
            if covered > d[j]:
                return False
    return True


def solve_cut_lp(
    costs: Mapping[int, object],
    fixed: Mapping[int, int] | None,
    oracle: CutOracle,
    *,
    initial_rows: Sequence[CutRow] = (),
    max_rows: int = 2000,
) -> FractionalSolution:
    """Row generation over `oracle` until no constraint is violated.

    `costs` maps edge id to a nonnegative cost and defines the variable set;
    `fixed` pins a subset of edges to 0 or 1.  Returns an exact optimal vertex
    of the generated system (fixed values included in `x`); the accumulated
    row pool is returned for reuse.  Raises LpInfeasibleError when a generated
    row cannot be met under the fixing.
    """
    fixed = dict(fixed or {})
    cost_map = {e: Fraction(c) for e, c in costs.items()}
    for e, c in cost_map.items():
        if c < 0:
            raise ValidationError(f"negative cost on edge {e}")
    for e, v in fixed.items():
        if e not in cost_map:
            raise ValidationError(f"fixed edge {e} is not a variable")
        if v not in (0, 1):
            raise ValidationError(f"fixed value {v!r} for edge {e} must be 0 or 1")
    var_ids = sorted(e for e in cost_map if e not in fixed)
    pos = {e: j for j, e in enumerate(var_ids)}
    k = len(var_ids)
    cvec = [cost_map[e] for e in var_ids]
    fixed_cost = sum((cost_map[e] for e, v in fixed.items() if v == 1), Fraction(0))

    rows: list[CutRow] = []
    active: list[tuple[tuple[int, ...], Fraction]] = []
    seen: set[tuple[frozenset[int], Fraction]] = set()

    def register(row: CutRow) -> bool:
        key = (row.edge_ids, Fraction(row.rhs))
        if key in seen:
            return False
        for e in row.edge_ids:
            if e not in cost_map:
                raise ValidationError(f"cut references unknown edge {e}")
        if len(rows) >= max_rows:
            raise LpResourceError(f"row cap {max_rows} exceeded")
        seen.add(key)
        rows.append(row)
        covered = sum(1 for e in row.edge_ids if fixed.get(e) == 1)
        need = Fraction(row.rhs) - covered
        cols = tuple(pos[e] for e in sorted(row.edge_ids) if e in pos)
        if need <= 0:
            return True
        if need > len(cols):
            raise LpInfeasibleError(
                f"cut needs {row.rhs} but only {covered} fixed and "
                f"{len(cols)} free edges cross it",
                row=row,
            )
        active.append((cols, Fraction(len(cols)) - need))
        return True

    def violation(cut: CutRow, x: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for e in cut.edge_ids:
            if e not in x:
                raise OracleContractError(f"cut references unknown edge {e}")
            total += x[e]
        return Fraction(cut.rhs) - total

    for row in initial_rows:
        register(row)

    while True:
        basis = None
        if k > 0:
            float_rows = [(cols, float(cap)) for cols, cap in active]
            float_costs = [float(c) for c in cvec]
            try:
                y_float, basis = _simplex(k, float_rows, float_costs, exact=False)
            except _SimplexStall:
                basis = None
        else:
            y_float, basis = [], []

        go_exact = basis is None
        if not go_exact:
            x_map = {e: Fraction(v) for e, v in fixed.items()}
            for j, e in enumerate(var_ids):
                x_map[e] = Fraction(min(1.0, max(0.0, 1.0 - y_float[j])))
            cut = oracle(x_map)
            if cut is None:
                go_exact = True
            else:
                viol = violation(cut, x_map)
                if viol <= 0:
                    raise OracleContractError(
                        f"cut {sorted(cut.edge_ids)} >= {cut.rhs} is not violated"
                    )
                fresh = register(cut)
                if not fresh or viol <= EPS_SEP:
                    go_exact = True
                else:
                    continue

        # Exact stage: rebuild the vertex from the basis and certify it, or
        # fall back to the exact-arithmetic simplex.
        y_exact = None
        if basis is not None:
            y_exact = _primal_from_basis(k, active, basis)
            if y_exact is not None and not _dual_certifies(k, active, cvec, basis):
                y_exact = None
        if y_exact is None:
            y_exact, _ = _simplex(k, active, cvec, exact=True)

        x_exact = {e: Fraction(v) for e, v in fixed.items()}
        for j, e in enumerate(var_ids):
            x_exact[e] = 1 - y_exact[j]
        objective = fixed_cost + sum(
            (cost_map[e] * x_exact[e] for e in var_ids), Fraction(0)
        )
        cut = oracle(x_exact)
        if cut is None:
            return FractionalSolution(x_exact, objective, True, tuple(rows))
        viol = violation(cut, x_exact)
        if viol <= 0:
            raise OracleContractError(
                f"cut {sorted(cut.edge_ids)} >= {cut.rhs} is not violated"
            )
        if not register(cut):
            raise OracleContractError("oracle repeated a row the solution satisfies")
