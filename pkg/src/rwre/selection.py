"""Data-driven smoothing-order selection by pairwise comparison.

A candidate order is charged the largest sup-norm clash between its estimate
and the finer estimates on the grid, discounted by the competitors'
stochastic widths; the chosen order minimizes clash plus twice its own width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDataError, ParameterError
from .estimator import PiecewiseDensity, estimate_density, visit_count


def sup_norm_diff(p, q):
    """Exact sup distance between two piecewise-constant functions on [0,1].

    Evaluates at midpoints of the merged cell grid plus the x = 1 singleton;
    both functions are constant there, so the maximum is exact.
    """
    if not isinstance(p, PiecewiseDensity) or not isinstance(q, PiecewiseDensity):
        raise ParameterError("sup_norm_diff expects two piecewise densities")
    pts = np.union1d(
        np.arange(p.order + 1) / p.order, np.arange(q.order + 1) / q.order
    )
    mids = 0.5 * (pts[:-1] + pts[1:])
    interior = float(np.max(np.abs(p.evaluate(mids) - q.evaluate(mids))))
    endpoint = abs(float(p.coeffs[-1]) - float(q.coeffs[-1]))
    return max(interior, endpoint)


def variance_term(z, order, n):
    """Stochastic width V_n(M) = (M+1)/N_n^M * sqrt(3 n log n); +inf if never visited."""
    if n < 2:
        raise ParameterError(f"need n >= 2 for the log factor, got {n}")
    if order < 1:
        raise ParameterError(f"order must be >= 1, got {order}")
    visits = visit_count(z, order)
    if visits == 0:
        return math.inf
    return (order + 1.0) / visits * math.sqrt(3.0 * n * math.log(n))


def comparison_term(estimates, widths, index, scope="above"):
    """Largest discounted clash of estimates[index] against the grid.

    scope "above" restricts the maximum to strictly larger orders, the range
    the selection guarantee actually exploits; scope "all" takes the literal
    maximum over every grid point, where entries at or below index contribute
    -2 width and may leave the value negative.  Candidates with infinite
    width are excluded from selection, so they are skipped here as well
    (their term would be -inf and could never attain the maximum); when the
    scope holds no finite-width partner the term is 0.
    """
    if scope not in ("all", "above"):
        raise ParameterError(f"scope must be 'all' or 'above', got {scope!r}")
    if not (0 <= index < len(estimates)):
        raise ParameterError("index outside the grid")
    start = index + 1 if scope == "above" else 0
    vals = []
    for i in range(start, len(estimates)):
        if math.isinf(widths[i]):
            continue
        clash = 0.0 if i <= index else sup_norm_diff(estimates[index], estimates[i])
        vals.append(clash - 2.0 * widths[i])
    return max(vals) if vals else 0.0


@dataclass
class SelectionDiagnostics:
    """Everything the selection rule looked at, plus its choice."""

    grid: list
    widths: list
    clashes: list
    objective: list
    chosen: int

    def to_dict(self):
        def enc(v):
            return "inf" if math.isinf(v) else v

        return {
            "grid": list(self.grid),
            "V": [enc(v) for v in self.widths],
            "C": [enc(c) for c in self.clashes],
            "objective": [enc(o) for o in self.objective],
            "chosen": self.chosen,
        }


def select_order(z, grid, scope="above"):
    """Pick the order minimizing clash + 2 width; ties go to the smallest order.

    The default scope "above" compares each candidate only against finer
    orders.  The literal scope "all" also folds in the always-zero clashes
    against coarser orders as -2 width offsets; on short trajectories those
    offsets swamp the data-dependent clashes and pin the choice at the
    coarsest candidate, so "all" is kept reachable but not the default.
    """
    grid = [int(m) for m in grid]
    if not grid:
        raise ParameterError("selection grid must be nonempty")
    if any(m < 1 for m in grid) or sorted(set(grid)) != grid:
        raise ParameterError("selection grid must be strictly increasing orders >= 1")
    arr = np.asarray(getattr(z, "z", z), dtype=float)
    n = arr.size - 1
    if n < 2:
        raise ParameterError("need at least two transitions to select an order")
    widths = [variance_term(arr, m, n) for m in grid]
    if all(math.isinf(v) for v in widths):
        raise DegenerateDataError("every candidate order has zero qualifying visits")
    estimates = [estimate_density(arr, m) for m in grid]
    clashes = [comparison_term(estimates, widths, i, scope=scope) for i in range(len(grid))]
    # an infinitely wide candidate can never win, whatever its clash value
    objective = [
        math.inf if math.isinf(v) else c + 2.0 * v for c, v in zip(clashes, widths)
    ]
    best = min(objective)
    chosen_idx = objective.index(best)
    return SelectionDiagnostics(
        grid=grid,
        widths=widths,
        clashes=clashes,
        objective=objective,
        chosen=grid[chosen_idx],
    )


def default_grid(n, cap=128):
    """Geometric candidate grid 1, 2, 4, ... capped at min(n-1, cap)."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    top = min(n - 1, cap)
    grid = []
    m = 1
    while m <= top:
        grid.append(m)
        m *= 2
    return grid