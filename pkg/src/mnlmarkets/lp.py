"""Clairvoyant LP benchmark for the online assortment problem.

The benchmark is a packing LP over one column per nonempty assortment S:
column S consumes the equilibrium demand vector q(S) from each item's
inventory and earns the equilibrium revenue R(S). With identical buyers the
per-buyer probability simplexes collapse exactly into a single mass budget,
so the LP has variables z(S) >= 0 with

    max  sum_S R(S) z(S)
    s.t. sum_S q_i(S) z(S) <= c_i   for every item i
         sum_S z(S)        <= m,

whose optimum upper-bounds the expected revenue of any policy that knows the
buyer count and inventories but not the realized choices. A fixed-revenue
variant replaces R(S) by sum_i r_i q_i(S).

The LP is solved by a dense-tableau simplex with Bland's anti-cycling rule;
scales here are tiny (n + 1 rows), so determinism beats speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .equilibrium import DomainError, ItemCatalog, SolverError, equilibrium_outcome

_MAX_COLUMNS_EXPONENT = 20
_PIVOT_TOL = 1e-9


@dataclass(frozen=True)
class Column:
    """One assortment column: members, their demands, and the revenue."""

    members: tuple[int, ...]
    demands: tuple[float, ...]
    revenue: float

    def fixed_revenue(self, r: Sequence[float]) -> float:
        """Column value when item i pays a constant r_i per sale."""
        return sum(r[i] * q for i, q in zip(self.members, self.demands))


@dataclass(frozen=True)
class ColumnSet:
    """All 2^n - 1 nonempty assortment columns of a catalog."""

    catalog: ItemCatalog
    columns: tuple[Column, ...]

    def demand_matrix(self) -> np.ndarray:
        """Dense (n, 2^n - 1) matrix of q_i(S) by column."""
        n = len(self.catalog)
        a = np.zeros((n, len(self.columns)))
        for j, col in enumerate(self.columns):
            for i, q in zip(col.members, col.demands):
                a[i, j] = q
        return a


@dataclass(frozen=True)
class LpSolution:
    """Optimal collapsed-LP point: objective, column masses, row duals."""

    objective: float
    masses: tuple[float, ...]
    inventory_duals: tuple[float, ...]
    mass_dual: float


@dataclass(frozen=True)
class SimplexResult:
    objective: float
    x: np.ndarray
    duals: np.ndarray
    iterations: int


def simplex_solve(rows: np.ndarray, rhs: np.ndarray, objective: np.ndarray) -> SimplexResult:
    """Maximize objective @ x subject to rows @ x <= rhs, x >= 0.

    Requires rhs >= 0 so the slack basis is feasible. Dense tableau with
    Bland's rule (lowest-index entering and leaving variable), which cannot
    cycle. Raises SolverError on an unbounded direction.
    """
    a = np.asarray(rows, dtype=float)
    b = np.asarray(rhs, dtype=float)
    c = np.asarray(objective, dtype=float)
    if a.ndim != 2 or a.shape != (b.size, c.size):
        raise DomainError("inconsistent LP dimensions")
    if np.any(b < 0):
        raise DomainError("rhs must be nonnegative for a slack start")
    m, n = a.shape
    # Tableau: columns [structural | slack | rhs]; last row holds reduced
    # costs (c_B B^-1 A - c), so optimality is "all >= -tol".
    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = a
    t[:m, n : n + m] = np.eye(m)
    t[:m, -1] = b
    t[-1, :n] = -c
    basis = list(range(n, n + m))

    for iteration in range(100_000):
        red = t[-1, :-1]
        entering_candidates = np.nonzero(red < -_PIVOT_TOL)[0]
        if entering_candidates.size == 0:
            break
        j = int(entering_candidates[0])  # Bland: lowest index enters
        col = t[:m, j]
        positive = col > _PIVOT_TOL
        if not positive.any():
            raise SolverError("LP is unbounded")
        ratios = np.full(m, np.inf)
        ratios[positive] = t[:m, -1][positive] / col[positive]
        best = ratios.min()
        ties = np.nonzero(ratios <= best * (1 + 1e-12) + 1e-15)[0]
        r = int(min(ties, key=lambda k: basis[k]))  # Bland: lowest basic index leaves
        # Pivot on (r, j).
        t[r] /= t[r, j]
        for k in range(m + 1):
            if k != r and t[k, j] != 0.0:
                t[k] -= t[k, j] * t[r]
        basis[r] = j
    else:
        raise SolverError("simplex iteration cap exceeded")

    x = np.zeros(n + m)
    x[basis] = t[:m, -1]
    return SimplexResult(
        objective=float(t[-1, -1]),
        x=x[:n].copy(),
        duals=t[-1, n : n + m].copy(),
        iterations=iteration,
    )


@lru_cache(maxsize=32)
def enumerate_columns(catalog: ItemCatalog) -> ColumnSet:
    """Materialize every nonempty assortment as an LP column.

    Capped at 20 items (about a million columns) to bound memory. Columns
    are ordered by subset bitmask, which fixes the LP column order and hence
    the reported masses.
    """
    n = len(catalog)
    if n > _MAX_COLUMNS_EXPONENT:
        raise DomainError(f"column enumeration capped at {_MAX_COLUMNS_EXPONENT} items")
    columns = []
    for mask in range(1, 1 << n):
        members = tuple(i for i in range(n) if mask >> i & 1)
        out = equilibrium_outcome(catalog, members)
        columns.append(Column(members=members, demands=out.demands, revenue=out.total_revenue))
    return ColumnSet(catalog=catalog, columns=tuple(columns))


def _solve_columns(catalog: ItemCatalog, m: int, values: np.ndarray) -> LpSolution:
    if m < 1:
        raise DomainError(f"buyer count must be >= 1, got {m}")
    cols = enumerate_columns(catalog)
    a = cols.demand_matrix()
    rows = np.vstack([a, np.ones((1, a.shape[1]))])
    rhs = np.array(list(catalog.inventories) + [float(m)], dtype=float)
    res = simplex_solve(rows, rhs, values)
    return LpSolution(
        objective=res.objective,
        masses=tuple(res.x.tolist()),
        inventory_duals=tuple(res.duals[:-1].tolist()),
        mass_dual=float(res.duals[-1]),
    )


def solve_opt(catalog: ItemCatalog, m: int) -> LpSolution:
    """Optimal clairvoyant value for m identical buyers."""
    values = np.array([c.revenue for c in enumerate_columns(catalog).columns])
    return _solve_columns(catalog, m, values)


def solve_opt_fixed_rev(catalog: ItemCatalog, m: int, r: Sequence[float]) -> LpSolution:
    """Clairvoyant value when item i earns a constant r_i per sale."""
    if len(r) != len(catalog):
        raise DomainError("fixed revenue vector must have one entry per item")
    values = np.array([c.fixed_revenue(r) for c in enumerate_columns(catalog).columns])
    return _solve_columns(catalog, m, values)
