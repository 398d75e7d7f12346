"""Walk regime analysis from the environment distribution.

Everything here is a functional of the density of the right-step probability:
the drift indicator E[log rho] with rho = (1-omega)/omega, the moments
E[rho^s], the tail exponent solving E[rho^kappa] = 1, and the resulting
classification (recurrent, transient with or without a linear speed).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import IntegrationWarning, quad
from scipy.special import betaln, digamma

from .densities import Beta, EnvDensity
from .errors import NoFiniteKappaError, NumericsError, ParameterError, RegimeError

RECURRENT = "recurrent"
TRANSIENT_RIGHT_BALLISTIC = "transient_right_ballistic"
TRANSIENT_RIGHT_SUBBALLISTIC = "transient_right_subballistic"
TRANSIENT_RIGHT_KAPPA_ONE = "transient_right_kappa_one"
TRANSIENT_LEFT = "transient_left"

_QUAD_TOL = 1e-9
_DIVERGENCE_CAP = 1e12
_KAPPA_ONE_WINDOW = 1e-3


@dataclass(frozen=True)
class RegimeReport:
    """Classification summary for one environment distribution."""

    mean_log_rho: float
    mean_rho: float
    kappa: float | None
    walk_class: str
    ballistic_speed: float | None

    def to_dict(self):
        def enc(v):
            if v is None:
                return None
            return "inf" if math.isinf(v) else v

        return {
            "mean_log_rho": self.mean_log_rho,
            "mean_rho": enc(self.mean_rho),
            "kappa": self.kappa,
            "class": self.walk_class,
            "ballistic_speed": self.ballistic_speed,
        }


def _piecewise_quad(f, breakpoints, split_at_half=True):
    """Adaptive quadrature summed over smooth pieces, with accuracy tracking."""
    pts = sorted(set(breakpoints))
    if split_at_half and pts[0] < 0.5 < pts[-1]:
        pts = sorted(set(pts) | {0.5})
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        # accuracy is judged by the summed error estimate below, not by warnings
        warnings.simplefilter("ignore", IntegrationWarning)
        for lo, hi in zip(pts[:-1], pts[1:]):
            if hi <= lo:
                continue
            val, e = quad(f, lo, hi, limit=200)
            total += val
            err += e
    if err > 1e-6:
        raise NumericsError(f"quadrature error estimate {err:.3g} exceeds 1e-6")
    return total


def log_rho_mean(d):
    """E[log rho] = E[log(1-omega)] - E[log omega]; the sign drives transience."""
    if isinstance(d, Beta):
        return float(digamma(d.beta) - digamma(d.alpha))

    def integrand(u):
        return (math.log1p(-u) - math.log(u)) * float(d.pdf(u))

    return _piecewise_quad(integrand, d.breakpoints())


def rho_moment(d, s):
    """E[rho^s] for s >= 0, +inf when the integrand is non-integrable at 0.

    For beta environments the closed form B(alpha-s, beta+s)/B(alpha, beta)
    applies whenever s < alpha.  Otherwise the density's vanishing order p at
    the origin decides integrability (finite iff s < p+1) and the moment is
    computed by adaptive quadrature over the smooth pieces; any blow-up past
    1e12 is reported as +inf as well.
    """
    if s < 0:
        raise ParameterError(f"moment order must be >= 0, got {s}")
    if s == 0:
        return 1.0
    if isinstance(d, Beta):
        if s >= d.alpha:
            return math.inf
        return math.exp(betaln(d.alpha - s, d.beta + s) - betaln(d.alpha, d.beta))

    lo, _ = d.support()
    if lo <= 0.0:
        p = d.left_tail_order()
        if p is None or s >= p + 1.0:
            return math.inf

    def integrand(u):
        expo = s * (math.log1p(-u) - math.log(u))
        if expo > 700.0:
            return 1e300
        return math.exp(expo) * float(d.pdf(u))

    val = _piecewise_quad(integrand, d.breakpoints(), split_at_half=False)
    if val > _DIVERGENCE_CAP:
        return math.inf
    return val


def solve_kappa(d, tol=1e-6, cap=50.0):
    """Root of E[rho^s] = 1 on s > 0 for a right-transient environment.

    g(s) = E[rho^s] - 1 is convex with g(0) = 0 and negative slope at 0, so
    there is at most one positive root.  The bracket grows geometrically from
    s = tol until the sign changes (an infinite moment counts as positive);
    bisection then runs until both the bracket width and |g| fall below tol.
    """
    if tol <= 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    if log_rho_mean(d) >= 0:
        raise RegimeError("kappa is defined only for right-transient environments")

    def g(s):
        m = rho_moment(d, s)
        return math.inf if math.isinf(m) else m - 1.0

    s_lo = tol
    s_hi = tol
    while g(s_hi) <= 0.0:
        s_lo = s_hi
        s_hi *= 2.0
        if s_hi > cap:
            raise NoFiniteKappaError(
                f"E[rho^s] stays below 1 for all s up to the cap {cap}"
            )

    for _ in range(300):
        mid = 0.5 * (s_lo + s_hi)
        gm = g(mid)
        if s_hi - s_lo < tol and abs(gm) < tol:
            return mid
        if gm > 0.0:
            s_hi = mid
        else:
            s_lo = mid
    raise NumericsError("kappa bisection failed to meet tolerance")


def classify(d, tol=1e-6):
    """Full regime report; recurrence is declared when |E[log rho]| <= tol."""
    if not isinstance(d, EnvDensity):
        raise ParameterError("classify expects an environment density")
    mean_log = log_rho_mean(d)
    mean_rho = rho_moment(d, 1.0)
    speed = None
    if mean_rho < 1.0:
        speed = (1.0 + mean_rho) / (1.0 - mean_rho)

    if abs(mean_log) <= tol:
        return RegimeReport(mean_log, mean_rho, None, RECURRENT, speed)
    if mean_log > tol:
        return RegimeReport(mean_log, mean_rho, None, TRANSIENT_LEFT, None)

    try:
        kappa = solve_kappa(d)
    except NoFiniteKappaError:
        # rho <= 1 almost surely: every moment is below 1, the walk is ballistic
        if speed is None:
            raise RegimeError(
                "no finite kappa yet E[rho] >= 1; classification is inconsistent"
            ) from None
        return RegimeReport(mean_log, mean_rho, None, TRANSIENT_RIGHT_BALLISTIC, speed)

    if abs(kappa - 1.0) <= _KAPPA_ONE_WINDOW:
        cls = TRANSIENT_RIGHT_KAPPA_ONE
    elif kappa < 1.0:
        cls = TRANSIENT_RIGHT_SUBBALLISTIC
    else:
        cls = TRANSIENT_RIGHT_BALLISTIC
    return RegimeReport(mean_log, mean_rho, kappa, cls, speed)


def rate_optimal_order(report, smoothness, n):
    """Smoothing order with the best risk rate for a Holder(smoothness) density.

    Recurrent walks only deliver sqrt(n)/log(n) usable transitions, transient
    ones n/log(n) discounted by the tail exponent; both floors at 1.
    """
    if not (0 < smoothness <= 2):
        raise ParameterError(f"smoothness must lie in (0, 2], got {smoothness}")
    if n < 2:
        raise ParameterError(f"chain length must be >= 2, got {n}")
    if report.walk_class == RECURRENT:
        base = math.sqrt(n) / math.log(n)
        order = base ** (2.0 / (smoothness + 2.0))
    elif report.walk_class in (
        TRANSIENT_RIGHT_BALLISTIC,
        TRANSIENT_RIGHT_SUBBALLISTIC,
        TRANSIENT_RIGHT_KAPPA_ONE,
    ):
        if report.kappa is None:
            raise RegimeError("transient report carries no tail exponent")
        base = n / math.log(n)
        order = base ** (1.0 / (smoothness + 2.0 * (1.0 + report.kappa)))
    else:
        raise RegimeError(f"no rate-optimal order for class {report.walk_class!r}")
    return max(1, int(math.floor(order)))
