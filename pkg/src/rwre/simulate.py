"""Trajectory simulation: quenched walks, step counts, and the branch chain.

The left-step counts of a walk stopped on first hitting n, read from site n
downward, form a branching process with one immigrant per generation and
geometric offspring; both routes to that chain live here so they can be
checked against each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .densities import exact_beta_moment
from .errors import ParameterError, TruncatedTrajectoryError

DEFAULT_MAX_STEPS = 100_000_000

# negative-binomial sampling: direct geometric sums up to this many successes
_DIRECT_GEOMETRIC_LIMIT = 32
# ... and a normal approximation to the Poisson stage beyond this intensity
_POISSON_EXACT_LIMIT = 1e15
_GAMMA_CLIP = 1e300


class LazyEnvironment:
    """Site probabilities drawn on first visit and cached forever after."""

    def __init__(self, density, rng):
        self._density = density
        self._rng = rng
        self._omega = {}

    def omega(self, site):
        w = self._omega.get(site)
        if w is None:
            w = self._density.sample(self._rng)
            self._omega[site] = w
        return w

    @property
    def materialized(self):
        return dict(self._omega)


@dataclass
class SiteCounts:
    """Left/right step counts of a walk stopped at first hitting n."""

    n: int
    hitting_time: int
    left: dict
    right: dict
    truncated: bool

    def left_count(self, site):
        return self.left.get(site, 0)

    def right_count(self, site):
        return self.right.get(site, 0)

    def min_site(self):
        sites = set(self.left) | set(self.right)
        return min(sites) if sites else 0

    def check_step_identities(self):
        """Non-truncated walks satisfy exact bookkeeping identities; assert them."""
        if self.truncated:
            raise TruncatedTrajectoryError("identities hold only for completed walks")
        lo = self.min_site()
        for y in range(lo - 1, self.n + 1):
            expected = self.right_count(y) - (1 if 0 <= y <= self.n - 1 else 0)
            if self.left_count(y + 1) != expected:
                raise AssertionError(
                    f"left({y + 1}) = {self.left_count(y + 1)} != {expected}"
                )
        for y in range(self.n, self.n + 2):
            if self.left_count(y) != 0:
                raise AssertionError(f"left({y}) must vanish at or beyond the target")
        total = sum(self.left.values()) + sum(self.right.values())
        if total != self.hitting_time:
            raise AssertionError("step counts do not sum to the hitting time")


@dataclass
class BranchSequence:
    """Generation sizes (Z_0, ..., Z_n) of the branch chain; Z_0 = 0.

    Stored as float64: values are exact integers while below 2^53, and
    near-recurrent or heavy-tailed environments push generation sizes far
    beyond any integer type (e^100 and more), where the float magnitude is
    the honest representation.
    """

    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        if z.ndim != 1 or z.size < 1:
            raise ParameterError("branch sequence must be a nonempty 1-d array")
        if z[0] != 0:
            raise ParameterError("branch sequence must start at 0")
        if (z < 0).any() or not np.isfinite(z).all():
            raise ParameterError("branch sequence entries must be finite and >= 0")
        self.z = z

    @property
    def n(self):
        return self.z.size - 1


def sample_environment(d, lo, hi, rng):
    """Materialize i.i.d. site probabilities for sites lo..hi inclusive."""
    if lo > hi:
        raise ParameterError(f"empty site range [{lo}, {hi}]")
    draws = d.sample(rng, size=hi - lo + 1)
    return {site: float(w) for site, w in zip(range(lo, hi + 1), draws)}


def run_walk_to_hit(d, n, max_steps=DEFAULT_MAX_STEPS, rng=None):
    """Walk from 0 until first hitting n (or max_steps), counting steps per site.

    The environment is drawn lazily: a site's probability is sampled on the
    walk's first visit and reused on every return.
    """
    if n < 1:
        raise ParameterError(f"target must be >= 1, got {n}")
    if max_steps < n:
        raise ParameterError("max_steps is below the minimum possible hitting time")
    if rng is None:
        raise ParameterError("an explicit rng is required")
    omega = {}
    left = {}
    right = {}
    sample = d.sample
    rand = rng.random
    x = 0
    steps = 0
    while x != n and steps < max_steps:
        w = omega.get(x)
        if w is None:
            w = sample(rng)
            omega[x] = w
        if rand() < w:
            right[x] = right.get(x, 0) + 1
            x += 1
        else:
            left[x] = left.get(x, 0) + 1
            x -= 1
        steps += 1
    return SiteCounts(
        n=n, hitting_time=steps, left=left, right=right, truncated=(x != n)
    )


def counts_to_branch(counts):
    """Read the branch chain off a completed walk: Z_y = left(n - y)."""
    if counts.truncated:
        raise TruncatedTrajectoryError(
            "walk never reached its target; branch chain is undefined"
        )
    n = counts.n
    z = np.array([counts.left_count(n - y) for y in range(n + 1)], dtype=float)
    return BranchSequence(z)


def _offspring_total(successes, omega, rng):
    """Total failures before the given number of geometric successes.

    Small counts sum geometric draws directly; larger ones use the
    gamma-Poisson composition, switching to the Poisson normal
    approximation once the intensity outgrows exact integer sampling.
    """
    if successes <= _DIRECT_GEOMETRIC_LIMIT:
        draws = rng.geometric(omega, size=int(successes))
        return float(draws.sum() - successes)
    lam = rng.gamma(shape=successes, scale=(1.0 - omega) / omega)
    if lam > _GAMMA_CLIP:
        lam = _GAMMA_CLIP
    if lam <= _POISSON_EXACT_LIMIT:
        return float(rng.poisson(lam))
    return float(max(0.0, np.rint(lam + math.sqrt(lam) * rng.standard_normal())))


def simulate_bpire(d, n, rng):
    """Branch chain of length n: fresh omega per generation, one immigrant each.

    Z_y given Z_{y-1} is negative binomial with Z_{y-1} + 1 successes and
    success probability omega_y, counting failures.
    """
    if n < 1:
        raise ParameterError(f"chain length must be >= 1, got {n}")
    omegas = d.sample(rng, size=n)
    z = np.zeros(n + 1, dtype=float)
    for y in range(1, n + 1):
        z[y] = _offspring_total(z[y - 1] + 1.0, omegas[y - 1], rng)
    return BranchSequence(z)


def annealed_kernel(d, i, j):
    """Averaged one-step law of the branch chain: P(Z_y = j | Z_{y-1} = i)."""
    if i < 0 or j < 0:
        raise ParameterError(f"kernel states must be >= 0, got ({i}, {j})")
    m = exact_beta_moment(d, i + 1, j)
    if m <= 0.0:
        return 0.0
    logc = gammaln(i + j + 1) - gammaln(i + 1) - gammaln(j + 1)
    return math.exp(logc + math.log(m))
