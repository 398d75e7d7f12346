"""Environment distributions on (0,1).

Each site of the environment holds an independent right-step probability
drawn from one of the families below.  A family provides a pdf, an exact
sampler, and enough structure (support, smooth pieces, vanishing order at
the origin) for the moment and regime computations to stay exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .errors import ParameterError

# ----- quadrature backbone -----

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(64)
_PANELS_PER_PIECE = 32


def piecewise_quadrature(f, breakpoints):
    """Composite 64-node Gauss-Legendre integral of f, panelled per smooth piece.

    Each interval between consecutive breakpoints is split into 32 uniform
    panels, so an integrand that is smooth between breakpoints is resolved
    to ~1e-14 relative accuracy.
    """
    total = []
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        if hi <= lo:
            continue
        edges = np.linspace(lo, hi, _PANELS_PER_PIECE + 1)
        half = 0.5 * (edges[1] - edges[0])
        mids = 0.5 * (edges[:-1] + edges[1:])
        x = (mids[:, None] + half * _GL_NODES[None, :]).ravel()
        w = half * np.broadcast_to(_GL_WEIGHTS, (_PANELS_PER_PIECE, 64)).ravel()
        total.append(float(np.dot(w, f(x))))
    return math.fsum(total)


# ----- beta kernel -----

def beta_kernel(a, b, u):
    """Beta(a, b) density at u, zero outside [0, 1].

    Evaluated in log space so large shape parameters do not overflow.
    Accepts scalars or arrays; boundary values follow the pointwise limit
    (finite for shape 1, zero for shape > 1, +inf for shape < 1).
    """
    if a <= 0 or b <= 0:
        raise ParameterError(f"beta kernel shapes must be positive, got ({a}, {b})")
    u_arr = np.asarray(u, dtype=float)
    scalar = u_arr.ndim == 0
    u_arr = np.atleast_1d(u_arr)
    out = np.zeros_like(u_arr)
    lognorm = gammaln(a + b) - gammaln(a) - gammaln(b)
    core = (u_arr > 0) & (u_arr < 1)
    uc = u_arr[core]
    out[core] = np.exp(lognorm + (a - 1) * np.log(uc) + (b - 1) * np.log1p(-uc))
    at0 = u_arr == 0
    at1 = u_arr == 1
    if at0.any():
        out[at0] = math.inf if a < 1 else (math.exp(lognorm) if a == 1 else 0.0)
    if at1.any():
        out[at1] = math.inf if b < 1 else (math.exp(lognorm) if b == 1 else 0.0)
    return float(out[0]) if scalar else out


def _open_interval_fill(draw, m):
    """Draw m values via draw(count), redrawing any that land on 0 or 1."""
    vals = np.asarray(draw(m), dtype=float)
    bad = (vals <= 0.0) | (vals >= 1.0)
    while bad.any():
        vals[bad] = draw(int(bad.sum()))
        bad = (vals <= 0.0) | (vals >= 1.0)
    return vals


# ----- families -----

@dataclass(frozen=True)
class EnvDensity:
    """Base class; concrete families implement pdf and _draw."""

    @property
    def label(self):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def _draw(self, rng, m):
        raise NotImplementedError

    def sample(self, rng, size=None):
        """Draw from the density; guaranteed to land strictly inside (0,1)."""
        m = 1 if size is None else int(size)
        vals = _open_interval_fill(lambda k: self._draw(rng, k), m)
        return float(vals[0]) if size is None else vals

    def support(self):
        return (0.0, 1.0)

    def breakpoints(self):
        """Sorted knots between which the pdf is smooth (includes support ends)."""
        return (0.0, 1.0)

    def left_tail_order(self):
        """p with pdf(x) ~ c x^p as x -> 0+, when the support starts at 0."""
        return None

    def to_spec(self):
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(EnvDensity):
    @property
    def label(self):
        return "uniform"

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        out = np.where((x_arr >= 0) & (x_arr <= 1), 1.0, 0.0)
        return float(out) if x_arr.ndim == 0 else out

    def _draw(self, rng, m):
        return rng.random(m)

    def left_tail_order(self):
        return 0.0

    def to_spec(self):
        return {"kind": "uniform", "params": {}}


@dataclass(frozen=True)
class Beta(EnvDensity):
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParameterError(
                f"beta density needs positive shapes, got ({self.alpha}, {self.beta})"
            )

    @property
    def label(self):
        return f"beta-{self.alpha:g}-{self.beta:g}"

    def pdf(self, x):
        return beta_kernel(self.alpha, self.beta, x)

    def _draw(self, rng, m):
        return rng.beta(self.alpha, self.beta, m)

    def left_tail_order(self):
        return self.alpha - 1.0

    def to_spec(self):
        return {"kind": "beta", "params": {"alpha": self.alpha, "beta": self.beta}}


def _triangle(x, center, halfwidth, height):
    return height * np.maximum(1.0 - np.abs(x - center) / halfwidth, 0.0)


def _triangle_inverse_cdf(v, lo, hi):
    # symmetric triangle on [lo, hi]: invert the piecewise-quadratic CDF
    width = hi - lo
    left = lo + width * np.sqrt(v / 2.0)
    right = hi - width * np.sqrt((1.0 - v) / 2.0)
    return np.where(v < 0.5, left, right)


@dataclass(frozen=True)
class TriangleMix(EnvDensity):
    """Two triangular bumps, masses 0.3 on [0.225, 0.375] and 0.7 on [0.45, 0.75]."""

    @property
    def label(self):
        return "triangle_mix"

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        out = _triangle(x_arr, 0.3, 0.075, 4.0) + _triangle(x_arr, 0.6, 0.15, 14.0 / 3.0)
        return float(out) if x_arr.ndim == 0 else out

    def _draw(self, rng, m):
        pick = rng.random(m) < 0.3
        v = rng.random(m)
        first = _triangle_inverse_cdf(v, 0.225, 0.375)
        second = _triangle_inverse_cdf(v, 0.45, 0.75)
        return np.where(pick, first, second)

    def support(self):
        return (0.225, 0.75)

    def breakpoints(self):
        return (0.225, 0.3, 0.375, 0.45, 0.6, 0.75)

    def to_spec(self):
        return {"kind": "triangle_mix", "params": {}}


@dataclass(frozen=True)
class SplitBeta(EnvDensity):
    """Beta(3,3) compressed onto each half of (0,1), weighted 0.6 / 1.4."""

    @property
    def label(self):
        return "split_beta"

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        # the kernel vanishes outside [0,1], so the half-interval indicators are implicit
        out = 0.6 * beta_kernel(3, 3, 2 * x_arr) + 1.4 * beta_kernel(3, 3, 2 * x_arr - 1)
        return float(out) if x_arr.ndim == 0 else out

    def _draw(self, rng, m):
        pick = rng.random(m) < 0.3
        y = _open_interval_fill(lambda k: rng.beta(3, 3, k), m)
        return np.where(pick, 0.5 * y, 0.5 * (1.0 + y))

    def breakpoints(self):
        return (0.0, 0.25, 0.5, 0.75, 1.0)

    def left_tail_order(self):
        return 2.0

    def to_spec(self):
        return {"kind": "split_beta", "params": {}}


@dataclass(frozen=True)
class TwoBump(EnvDensity):
    """Shifted beta(3,3) bumps of mass 0.4 at c1 and 0.6 at c2."""

    c1: float
    c2: float

    def __post_init__(self):
        if not (0 < self.c1 < 1 and 0 < self.c2 < 1):
            raise ParameterError(
                f"bump centers must lie in (0,1), got ({self.c1}, {self.c2})"
            )

    @property
    def label(self):
        return f"two_bump-{self.c1:g}-{self.c2:g}"

    def pdf(self, x):
        x_arr = np.asarray(x, dtype=float)
        u1 = 0.5 + 2 * (x_arr - self.c1)
        u2 = 0.5 + 2 * (x_arr - self.c2)
        out = 0.8 * beta_kernel(3, 3, u1) + 1.2 * beta_kernel(3, 3, u2)
        return float(out) if x_arr.ndim == 0 else out

    def _draw(self, rng, m):
        pick = rng.random(m) < 0.4
        y = _open_interval_fill(lambda k: rng.beta(3, 3, k), m)
        center = np.where(pick, self.c1, self.c2)
        return center + (y - 0.5) / 2.0

    def support(self):
        lo = max(0.0, min(self.c1, self.c2) - 0.25)
        hi = min(1.0, max(self.c1, self.c2) + 0.25)
        return (lo, hi)

    def breakpoints(self):
        pts = set()
        for c in (self.c1, self.c2):
            for p in (c - 0.25, c, c + 0.25):
                if 0.0 <= p <= 1.0:
                    pts.add(p)
        pts.update(self.support())
        return tuple(sorted(pts))

    def left_tail_order(self):
        if self.support()[0] > 0.0:
            return None
        if self.pdf(0.0) > 0.0:
            return 0.0
        return 2.0  # a bump edge sits exactly at 0: kernel vanishes quadratically

    def to_spec(self):
        return {"kind": "two_bump", "params": {"c1": self.c1, "c2": self.c2}}


# ----- JSON spec round trip -----

_KINDS = {
    "uniform": (Uniform, ()),
    "beta": (Beta, ("alpha", "beta")),
    "triangle_mix": (TriangleMix, ()),
    "split_beta": (SplitBeta, ()),
    "two_bump": (TwoBump, ("c1", "c2")),
}


def density_from_spec(spec):
    """Build a density from {"kind": ..., "params": {...}}."""
    if not isinstance(spec, dict):
        raise ParameterError("density spec must be a JSON object")
    kind = spec.get("kind")
    if kind not in _KINDS:
        raise ParameterError(f"unknown density kind {kind!r}")
    cls, names = _KINDS[kind]
    params = spec.get("params", {}) or {}
    extra = set(spec) - {"kind", "params"}
    if extra:
        raise ParameterError(f"unknown density spec fields: {sorted(extra)}")
    unknown = set(params) - set(names)
    if unknown:
        raise ParameterError(f"unknown parameters for {kind}: {sorted(unknown)}")
    missing = set(names) - set(params)
    if missing:
        raise ParameterError(f"missing parameters for {kind}: {sorted(missing)}")
    try:
        args = [float(params[n]) for n in names]
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"non-numeric parameter for {kind}: {exc}") from None
    return cls(*args)


# ----- beta moments -----

def exact_beta_moment(d, a, b):
    """integral of u^a (1-u)^b d.pdf(u) du over [0,1].

    Closed form for beta environments, composite Gauss-Legendre otherwise.
    """
    if a < 0 or b < 0:
        raise ParameterError(f"moment orders must be >= 0, got ({a}, {b})")
    if isinstance(d, Beta):
        return math.exp(
            betaln(d.alpha + a, d.beta + b) - betaln(d.alpha, d.beta)
        )
    return quadrature_beta_moment(d, a, b)


def quadrature_beta_moment(d, a, b):
    """Quadrature route for the (a, b) beta moment; kept separate as a cross-check."""
    # Gauss nodes are strictly interior to each panel, so u stays inside (0,1)
    def integrand(u):
        return u**a * (1.0 - u) ** b * d.pdf(u)

    return piecewise_quadrature(integrand, d.breakpoints())


def sample_by_rejection(d, rng, size, envelope=None):
    """Generic sampler: rejection against a uniform proposal.

    The envelope defaults to 1.05 times the pdf maximum on a 10^4-point grid.
    Families above all have exact samplers; this path serves ad hoc densities
    and doubles as an independent check on the exact ones.
    """
    if envelope is None:
        grid = np.linspace(0.0, 1.0, 10_001)
        envelope = 1.05 * float(np.max(d.pdf(grid)))
    if envelope <= 0:
        raise ParameterError("rejection envelope must be positive")
    out = np.empty(size, dtype=float)
    filled = 0
    while filled < size:
        need = size - filled
        cand = rng.random(need)
        keep = rng.random(need) * envelope < d.pdf(cand)
        keep &= (cand > 0) & (cand < 1)
        took = int(keep.sum())
        out[filled : filled + took] = cand[keep]
        filled += took
    return out
