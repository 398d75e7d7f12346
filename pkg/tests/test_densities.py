"""Environment density families: pdfs, moments, samplers, and the JSON spec."""
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rwre import (
    Beta,
    ParameterError,
    SplitBeta,
    TriangleMix,
    TwoBump,
    Uniform,
    beta_kernel,
    density_from_spec,
    exact_beta_moment,
    piecewise_quadrature,
    quadrature_beta_moment,
    sample_by_rejection,
)

ALL_FAMILIES = [
    Uniform(),
    Beta(3, 3),
    Beta(5, 2),
    TriangleMix(),
    SplitBeta(),
    TwoBump(0.3, 0.7),
]


def _uniform_moment(a, b):
    # integral of u^a (1-u)^b over [0,1] is a! b! / (a+b+1)!
    return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 1))


def _beta33_moment(a, b):
    # integral of u^a (1-u)^b u^2 (1-u)^2 / B(3,3); B(3,3) = 1/30
    return 30 * Fraction(
        math.factorial(2 + a) * math.factorial(2 + b), math.factorial(5 + a + b)
    )


# ----- pdf point values -----

def test_uniform_pdf_is_indicator():
    d = Uniform()
    assert d.pdf(0.0) == 1.0
    assert d.pdf(0.5) == 1.0
    assert d.pdf(1.0) == 1.0
    assert d.pdf(-0.2) == 0.0
    assert d.pdf(1.2) == 0.0


def test_beta33_pdf_at_half():
    # Gamma(6)/(Gamma(3)Gamma(3)) * (1/4)^2 = 30/16
    assert Beta(3, 3).pdf(0.5) == pytest.approx(1.875, rel=1e-12)


def test_triangle_mix_pdf_peaks_and_gap():
    d = TriangleMix()
    assert d.pdf(0.3) == pytest.approx(4.0, abs=1e-12)
    assert d.pdf(0.6) == pytest.approx(14.0 / 3.0, rel=1e-12)
    for x in (0.2, 0.225, 0.375, 0.4, 0.45, 0.75, 0.8):
        assert d.pdf(x) == pytest.approx(0.0, abs=1e-12)


def test_split_beta_pdf_halves():
    d = SplitBeta()
    assert d.pdf(0.25) == pytest.approx(0.6 * 1.875, rel=1e-12)
    assert d.pdf(0.75) == pytest.approx(1.4 * 1.875, rel=1e-12)
    assert d.pdf(0.5) == pytest.approx(0.0, abs=1e-12)
    assert d.pdf(0.0) == pytest.approx(0.0, abs=1e-12)


def test_two_bump_pdf_centers():
    d = TwoBump(0.3, 0.7)
    assert d.pdf(0.3) == pytest.approx(0.8 * 1.875, rel=1e-12)
    assert d.pdf(0.7) == pytest.approx(1.2 * 1.875, rel=1e-12)
    # the half-width-0.25 bumps overlap on [0.45, 0.55]
    overlap = 2.0 * 30.0 * 0.81 * 0.01
    assert d.pdf(0.5) == pytest.approx(overlap, rel=1e-12)
    assert d.pdf(0.0) == 0.0
    assert d.pdf(1.0) == 0.0
    assert d.support() == (0.3 - 0.25, 0.7 + 0.25)


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.label)
def test_pdf_nonnegative_and_vectorized(d):
    grid = np.linspace(-0.25, 1.25, 601)
    vals = d.pdf(grid)
    assert vals.shape == grid.shape
    assert np.all(vals >= 0.0)
    assert np.all(np.isfinite(vals))
    lo, hi = d.support()
    outside = (grid < lo - 1e-9) | (grid > hi + 1e-9)
    assert np.all(vals[outside] == 0.0)
    # scalar calls agree with the vectorized path
    for x in (0.1, 0.5, 0.9):
        assert d.pdf(x) == pytest.approx(float(d.pdf(np.asarray(x))), rel=1e-15)


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.label)
def test_pdf_mass_is_one(d):
    assert quadrature_beta_moment(d, 0, 0) == pytest.approx(1.0, abs=1e-9)


# ----- beta kernel -----

def test_beta_kernel_flat_case():
    u = np.linspace(0, 1, 11)
    assert np.allclose(beta_kernel(1, 1, u), 1.0)


def test_beta_kernel_boundary_limits():
    assert beta_kernel(1, 3, 0.0) == pytest.approx(3.0, rel=1e-12)
    assert beta_kernel(3, 1, 1.0) == pytest.approx(3.0, rel=1e-12)
    assert beta_kernel(2, 2, 0.0) == 0.0
    assert beta_kernel(2, 2, 1.0) == 0.0
    assert beta_kernel(0.5, 0.5, 0.0) == math.inf
    assert beta_kernel(0.5, 0.5, 1.0) == math.inf
    assert beta_kernel(3, 3, -0.5) == 0.0
    assert beta_kernel(3, 3, 1.5) == 0.0


def test_beta_kernel_rejects_bad_shapes():
    with pytest.raises(ParameterError):
        beta_kernel(0.0, 1.0, 0.5)
    with pytest.raises(ParameterError):
        beta_kernel(2.0, -1.0, 0.5)


@given(a=st.integers(1, 80), b=st.integers(1, 80))
def test_beta_kernel_normalized(a, b):
    mass = piecewise_quadrature(lambda u: beta_kernel(a, b, u), (0.0, 1.0))
    assert mass == pytest.approx(1.0, abs=1e-9)


# ----- moments -----

def test_moment_examples():
    assert exact_beta_moment(Uniform(), 1, 1) == pytest.approx(1.0 / 6.0, rel=1e-12)
    assert exact_beta_moment(Beta(3, 3), 2, 2) == pytest.approx(1.0 / 21.0, rel=1e-12)
    for d in ALL_FAMILIES:
        assert exact_beta_moment(d, 0, 0) == pytest.approx(1.0, abs=1e-9)


@given(a=st.integers(0, 12), b=st.integers(0, 12))
def test_uniform_moments_match_fraction_oracle(a, b):
    want = float(_uniform_moment(a, b))
    assert exact_beta_moment(Uniform(), a, b) == pytest.approx(want, rel=1e-10)


@given(a=st.integers(0, 12), b=st.integers(0, 12))
def test_beta33_moments_match_fraction_oracle(a, b):
    want = float(_beta33_moment(a, b))
    assert exact_beta_moment(Beta(3, 3), a, b) == pytest.approx(want, rel=1e-10)


@given(
    # integer shapes keep the integrand polynomial, where the fixed-node rule
    # is exact; fractional shapes get a looser spot check below
    alpha=st.integers(1, 40),
    beta=st.integers(1, 40),
    a=st.integers(0, 10),
    b=st.integers(0, 10),
)
@settings(max_examples=25)
def test_beta_closed_form_matches_quadrature(alpha, beta, a, b):
    d = Beta(alpha, beta)
    closed = exact_beta_moment(d, a, b)
    quad = quadrature_beta_moment(d, a, b)
    assert quad == pytest.approx(closed, rel=1e-9, abs=1e-13)


def test_beta_closed_form_matches_quadrature_fractional_shapes():
    for alpha, beta in [(1.5, 2.5), (3.25, 1.75), (2.0, 5.5)]:
        d = Beta(alpha, beta)
        assert quadrature_beta_moment(d, 1, 2) == pytest.approx(
            exact_beta_moment(d, 1, 2), rel=1e-6
        )


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.label)
@given(a=st.integers(0, 8), b=st.integers(0, 8))
@settings(max_examples=15)
def test_moments_shrink_with_order(d, a, b):
    base = exact_beta_moment(d, a, b)
    assert exact_beta_moment(d, a + 1, b) <= base + 1e-12
    assert exact_beta_moment(d, a, b + 1) <= base + 1e-12


def test_moment_rejects_negative_orders():
    with pytest.raises(ParameterError):
        exact_beta_moment(Uniform(), -1, 0)


# ----- samplers -----

def _mean_tol(d, n):
    # 4 standard errors from the exact first two moments
    m1 = exact_beta_moment(d, 1, 0)
    m2 = quadrature_beta_moment(d, 2, 0)
    return 4.0 * math.sqrt(max(m2 - m1 * m1, 0.0) / n)


@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.label)
def test_sampler_mean_matches_quadrature(d):
    rng = np.random.default_rng(11)
    draws = d.sample(rng, 100_000)
    want = exact_beta_moment(d, 1, 0)
    assert abs(draws.mean() - want) < _mean_tol(d, draws.size)
    lo, hi = d.support()
    assert draws.min() > max(lo, 0.0) - 1e-12
    assert draws.max() < min(hi, 1.0) + 1e-12
    assert np.all(draws > 0.0) and np.all(draws < 1.0)


def test_beta33_sample_variance():
    rng = np.random.default_rng(7)
    draws = Beta(3, 3).sample(rng, 100_000)
    assert abs(draws.var() - 1.0 / 28.0) < 0.003


def test_triangle_mix_respects_gap_and_weights():
    rng = np.random.default_rng(5)
    draws = TriangleMix().sample(rng, 50_000)
    assert not np.any((draws > 0.375) & (draws < 0.45))
    frac_low = float(np.mean(draws < 0.4))
    assert abs(frac_low - 0.3) < 4.0 * math.sqrt(0.3 * 0.7 / draws.size)


def test_split_beta_component_weights():
    rng = np.random.default_rng(3)
    draws = SplitBeta().sample(rng, 50_000)
    frac_low = float(np.mean(draws < 0.5))
    assert abs(frac_low - 0.3) < 4.0 * math.sqrt(0.3 * 0.7 / draws.size)


def test_two_bump_component_weights():
    rng = np.random.default_rng(9)
    draws = TwoBump(0.3, 0.7).sample(rng, 50_000)
    frac_low = float(np.mean(draws < 0.5))
    assert abs(frac_low - 0.4) < 4.0 * math.sqrt(0.4 * 0.6 / draws.size)


def test_sample_size_semantics():
    rng = np.random.default_rng(1)
    scalar = Uniform().sample(rng)
    assert isinstance(scalar, float)
    arr = Uniform().sample(rng, 5)
    assert arr.shape == (5,)
    empty = Uniform().sample(rng, 0)
    assert empty.shape == (0,)


def test_rejection_sampler_cross_checks_exact_one():
    d = Beta(3, 3)
    rng = np.random.default_rng(21)
    draws = sample_by_rejection(d, rng, 50_000)
    assert abs(draws.mean() - 0.5) < _mean_tol(d, draws.size)
    assert np.all((draws > 0) & (draws < 1))


# ----- JSON spec round trip -----

@pytest.mark.parametrize("d", ALL_FAMILIES, ids=lambda d: d.label)
def test_spec_round_trip(d):
    spec = d.to_spec()
    assert set(spec) == {"kind", "params"}
    rebuilt = density_from_spec(spec)
    assert rebuilt == d
    assert rebuilt.label == d.label


def test_spec_rejects_unknown_kind():
    with pytest.raises(ParameterError, match="unknown density kind"):
        density_from_spec({"kind": "gaussian", "params": {}})


def test_spec_rejects_unknown_field():
    with pytest.raises(ParameterError, match="unknown density spec fields"):
        density_from_spec({"kind": "uniform", "params": {}, "seed": 4})


def test_spec_rejects_unknown_parameter():
    with pytest.raises(ParameterError, match="unknown parameters"):
        density_from_spec({"kind": "beta", "params": {"alpha": 3, "beta": 3, "c": 1}})


def test_spec_rejects_missing_parameter():
    with pytest.raises(ParameterError, match="missing parameters"):
        density_from_spec({"kind": "beta", "params": {"alpha": 3}})


def test_spec_rejects_non_numeric_parameter():
    with pytest.raises(ParameterError, match="non-numeric"):
        density_from_spec({"kind": "beta", "params": {"alpha": "wide", "beta": 3}})


def test_spec_rejects_non_object():
    with pytest.raises(ParameterError):
        density_from_spec(["uniform"])


def test_bad_family_parameters():
    with pytest.raises(ParameterError):
        Beta(0, 3)
    with pytest.raises(ParameterError):
        TwoBump(0.0, 0.7)
    with pytest.raises(ParameterError):
        TwoBump(0.3, 1.0)
