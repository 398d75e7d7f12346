"""Density estimation from one branch-chain trajectory.

The chain's annealed transitions mix binomial weights with the beta moments
of the environment density; inverting that structure turns empirical
transition averages into estimates of the moments m^{a,b} and, through the
beta-kernel smoother of order M, into a piecewise-constant density estimate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .densities import exact_beta_moment
from .errors import ParameterError, StabilityError

_CDF_ORDER_CAP = 40  # alternating binomial sums lose all precision beyond this


def _counts(z):
    """Accept a BranchSequence or a raw array of generation sizes."""
    arr = np.asarray(getattr(z, "z", z), dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise ParameterError("need a 1-d sequence with at least two generations")
    return arr


def _log_falling(x, k):
    """log of the falling factorial x(x-1)...(x-k+1), elementwise over x.

    Stays exact for astronomically large x where differences of log-gamma
    values would cancel catastrophically.  Requires x >= k.
    """
    if k == 0:
        return np.zeros_like(x)
    t = np.arange(k, dtype=float)
    return np.log(x[:, None] - t[None, :]).sum(axis=1)


def log_transition_weight(a, b, i, j):
    """log phi on entries already known to satisfy i >= a, j >= b."""
    return (
        _log_falling(i, a)
        + _log_falling(j, b)
        - _log_falling(i + j, a + b)
    )


def transition_weight(a, b, i, j):
    """phi^{a,b}(i,j) = C(i+j-a-b, i-a) / C(i+j, i), gated to 0 when i < a or j < b.

    Always lies in [0, 1]; phi^{0,0} is identically 1.
    """
    if a < 0 or b < 0:
        raise ParameterError(f"weight orders must be >= 0, got ({a}, {b})")
    if i < 0 or j < 0:
        raise ParameterError(f"transition states must be >= 0, got ({i}, {j})")
    if i < a or j < b:
        return 0.0
    iv = np.asarray([i], dtype=float)
    jv = np.asarray([j], dtype=float)
    return float(np.exp(log_transition_weight(a, b, iv, jv))[0])


def visit_count(z, a):
    """N_n^a: number of transitions whose source generation holds at least a."""
    arr = _counts(z)
    if a < 0:
        raise ParameterError(f"threshold must be >= 0, got {a}")
    return int((arr[:-1] >= a).sum())


def estimate_beta_moment(z, a, b):
    """Empirical estimate of m^{a,b}, averaging phi over qualifying transitions.

    Returns 0 when no transition qualifies (the 0/0 convention), so the
    value always stays inside [0, 1].
    """
    arr = _counts(z)
    if a < 0 or b < 0:
        raise ParameterError(f"moment orders must be >= 0, got ({a}, {b})")
    i = arr[:-1]
    j = arr[1:]
    visits = int((i >= a).sum())
    if visits == 0:
        return 0.0
    mask = (i >= a) & (j >= b)
    if not mask.any():
        return 0.0
    lw = log_transition_weight(a, b, i[mask], j[mask])
    return float(np.exp(lw).sum()) / visits


@dataclass(eq=False)
class PiecewiseDensity:
    """Piecewise-constant function on [0,1] with M+1 coefficients.

    Cell k covers [k/M, (k+1)/M); the point x = 1 carries its own
    coefficient, index M.
    """

    order: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.order < 1:
            raise ParameterError(f"order must be >= 1, got {self.order}")
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.order + 1,):
            raise ParameterError(
                f"need {self.order + 1} coefficients, got shape {c.shape}"
            )
        self.coeffs = c

    def cell_index(self, x):
        x_arr = np.asarray(x, dtype=float)
        idx = np.minimum(np.floor(x_arr * self.order), self.order).astype(int)
        return idx

    def evaluate(self, x):
        x_arr = np.asarray(x, dtype=float)
        if ((x_arr < 0) | (x_arr > 1)).any():
            raise ParameterError("evaluation points must lie in [0, 1]")
        out = self.coeffs[self.cell_index(x_arr)]
        return float(out) if np.asarray(x).ndim == 0 else out


def estimate_density(z, order):
    """Order-M density estimate from one trajectory.

    Coefficient k is (M+1) C(M,k) m_hat^{k,M-k}.  Each summand of the phi
    average is assembled in log space and exponentiated individually; the
    product C(M,k) phi is bounded by 1, so the coefficients never exceed M+1
    no matter how large the generation sizes are.
    """
    arr = _counts(z)
    if order < 1:
        raise ParameterError(f"order must be >= 1, got {order}")
    i = arr[:-1]
    j = arr[1:]
    coeffs = np.zeros(order + 1)
    log_norm = math.log(order + 1.0)
    for k in range(order + 1):
        b = order - k
        visits = int((i >= k).sum())
        if visits == 0:
            continue
        mask = (i >= k) & (j >= b)
        if not mask.any():
            continue
        log_binom = gammaln(order + 1) - gammaln(k + 1) - gammaln(b + 1)
        lw = (
            log_transition_weight(k, b, i[mask], j[mask])
            + log_binom
            + log_norm
        )
        coeffs[k] = float(np.exp(lw).sum()) / visits
    return PiecewiseDensity(order, coeffs)


def oracle_density(d, order):
    """Order-M smoother applied to exact moments: the estimator's target."""
    if order < 1:
        raise ParameterError(f"order must be >= 1, got {order}")
    coeffs = np.zeros(order + 1)
    log_norm = math.log(order + 1.0)
    for k in range(order + 1):
        m = exact_beta_moment(d, k, order - k)
        if m <= 0.0:
            continue
        log_binom = gammaln(order + 1) - gammaln(k + 1) - gammaln(order - k + 1)
        coeffs[k] = math.exp(log_norm + log_binom + math.log(m))
    return PiecewiseDensity(order, coeffs)


def cdf_from_moments(mu, x):
    """Moment-reconstructed CDF value at x from raw moments (mu_0, ..., mu_M).

    Alternating binomial sums over exact integer coefficients, combined with
    compensated summation; refuses orders beyond 40 where double precision
    has no correct digits left.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size < 1:
        raise ParameterError("moment vector must be 1-d and nonempty")
    order = mu.size - 1
    if order > _CDF_ORDER_CAP:
        raise StabilityError(
            f"moment order {order} exceeds the cancellation guard {_CDF_ORDER_CAP}"
        )
    if abs(mu[0] - 1.0) > 1e-9:
        raise ParameterError("mu_0 must equal 1")
    if not (0.0 <= x <= 1.0):
        raise ParameterError(f"x must lie in [0, 1], got {x}")
    kmax = min(int(math.floor(order * x)), order)
    terms = []
    for k in range(kmax + 1):
        for jj in range(k, order + 1):
            c = math.comb(order, jj) * math.comb(jj, k)
            terms.append((c if (jj - k) % 2 == 0 else -c) * mu[jj])
    return math.fsum(terms)


def density_from_cdf(mu, order, x):
    """Density of the moment-reconstructed law, cell-averaged at scale 1/M.

    Differences the reconstructed CDF across the cell containing x (the cell
    difference at x > 1 - 1/M is clamped to end at 1), which reproduces the
    beta-kernel coefficients of oracle_density exactly.
    """
    mu = np.asarray(mu, dtype=float)
    if order != mu.size - 1:
        raise ParameterError("order must match the moment vector length")
    if not (0.0 <= x <= 1.0):
        raise ParameterError(f"x must lie in [0, 1], got {x}")
    upper = cdf_from_moments(mu, x)
    if x * order >= 1.0:
        lower = cdf_from_moments(mu, max(0.0, x - 1.0 / order))
    else:
        lower = 0.0
    return (order + 1.0) * (upper - lower)


def bias_bound(holder_const, smoothness, order):
    """Worst-case approximation error of the order-M smoother on a Holder class."""
    if holder_const < 1:
        raise ParameterError(f"Holder constant must be >= 1, got {holder_const}")
    if not (0 < smoothness <= 2):
        raise ParameterError(f"smoothness must lie in (0, 2], got {smoothness}")
    if order < 1:
        raise ParameterError(f"order must be >= 1, got {order}")
    return 31.0 * holder_const * order ** (-smoothness / 2.0)
