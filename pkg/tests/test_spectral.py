import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy.integrate import quad

from funkinv.errors import (
    DivergenceError,
    DomainError,
    ExcludedComponentError,
    InvalidArgumentError,
    PoleError,
    ResolutionError,
)
from funkinv.grids import build_grid
from funkinv.spectral import (
    HarmonicSpectrum,
    analyze,
    cosine_multiplier,
    delta_op_eigenvalue,
    funk_hecke_multiplier_quadrature,
    funk_multiplier,
    harmonic_basis,
    log_cosine_multiplier,
    multiplier_table,
    pushforward_constant,
    random_even_spectrum,
    sine_multiplier,
    synthesize,
    zonal_eval,
    zonal_norm_sq,
)
from funkinv.transforms import delta_norm, funk_scale, gamma_norm

SQPI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# zonal profiles


def test_zonal_values():
    assert zonal_eval(0, 5, 0.3) == 1.0
    assert zonal_eval(1, 4, 0.37) == 0.37
    assert abs(zonal_eval(2, 3, 0.0) + 0.5) <= 1e-15  # (3t^2-1)/2 at 0
    t = np.linspace(-1, 1, 7)
    assert_allclose(zonal_eval(2, 3, t), (3 * t**2 - 1) / 2, atol=1e-14)
    assert zonal_eval(6, 4, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_zonal_domain_error():
    with pytest.raises(DomainError):
        zonal_eval(2, 3, 1.5)
    with pytest.raises(InvalidArgumentError):
        zonal_eval(-1, 3, 0.0)


def test_zonal_norms_match_quadrature_oracle():
    # oracle: direct adaptive quadrature of the profile squared
    for j, n in [(2, 3), (4, 3), (2, 4), (3, 5)]:
        oracle, _ = quad(
            lambda t: zonal_eval(j, n, t) ** 2 * (1 - t * t) ** ((n - 3) / 2.0), -1, 1
        )
        oracle *= pushforward_constant(n)
        assert abs(zonal_norm_sq(j, n) - oracle) <= 1e-12


# ---------------------------------------------------------------------------
# Funk-Hecke quadrature and the closed-form gate


def test_quadrature_trivial_cases():
    assert abs(funk_hecke_multiplier_quadrature(lambda t: np.ones_like(t), 0, 3) - 1.0) <= 1e-14
    assert abs(funk_hecke_multiplier_quadrature(lambda t: np.ones_like(t), 2, 3)) <= 1e-12
    assert abs(funk_hecke_multiplier_quadrature(lambda t: np.ones_like(t), 0, 4) - 1.0) <= 1e-12


def test_oracle_gate(oracle_gate):
    assert oracle_gate <= 1e-9


def test_degree0_multiplier_at_limit_parameter():
    # the defining integral diverges at lambda = -1 while its coefficient
    # vanishes; the product continues analytically to Gamma(1/2)/Gamma(1)
    closed = cosine_multiplier(0, 3, -1.0)
    assert abs(closed - SQPI) <= 1e-10
    errors = []
    for eps in (1e-2, 1e-3, 1e-4):
        lam = -1.0 + eps
        val = funk_hecke_multiplier_quadrature(
            lambda t, lam=lam: gamma_norm(lam, 3) * np.abs(t) ** lam, 0, 3, power=lam
        )
        errors.append(abs(val - SQPI))
    assert errors[2] < errors[0]
    assert errors[2] <= 1e-3


def test_quadrature_divergence_detection():
    with pytest.raises(DivergenceError):
        funk_hecke_multiplier_quadrature(
            lambda t: np.abs(t) ** -1.2, 0, 3, power=-1.2
        )


def test_sine_kernel_quadrature_matches_closed_form():
    lam = -0.5
    val = funk_hecke_multiplier_quadrature(
        lambda t, lam=lam: delta_norm(lam, 3) * (1 - t * t) ** (lam / 2.0),
        2, 3, edge_power=lam / 2.0,
    )
    assert abs(val - sine_multiplier(2, 3, lam)) <= 1e-9


def test_log_kernel_quadrature_matches_closed_form():
    # oracle: adaptive quadrature of the logarithmic kernel (split at 0)
    for n in (3, 4):
        kernel_scale = 2.0 / math.gamma(n / 2.0)
        oracle, _ = quad(
            lambda t: kernel_scale
            * math.log(1.0 / abs(t))
            * zonal_eval(2, n, t)
            * (1 - t * t) ** ((n - 3) / 2.0),
            -1, 1, points=[0.0], limit=200,
        )
        oracle *= pushforward_constant(n)
        assert abs(log_cosine_multiplier(2, n) - oracle) <= 1e-10
        # the production rule converges on the same value, just more slowly
        prod = funk_hecke_multiplier_quadrature(
            lambda t, s=kernel_scale: s * np.log(1.0 / np.abs(t)), 2, n, num_nodes=400
        )
        assert abs(prod - oracle) <= 1e-5


# ---------------------------------------------------------------------------
# closed forms: values and identities


def test_cosine_multiplier_values():
    assert abs(cosine_multiplier(0, 3, -1.0) - SQPI) <= 1e-12
    prod = cosine_multiplier(2, 3, 0.7) * cosine_multiplier(2, 3, -0.7 - 3)
    assert abs(prod - 1.0) <= 1e-12
    assert abs(cosine_multiplier(2, 4, -1.0) - (-2.0 / 3.0)) <= 1e-12
    assert abs(cosine_multiplier(2, 3, 1.0) - (-SQPI / 2.0)) <= 1e-13


def test_cosine_multiplier_pole_handling():
    with pytest.raises(PoleError) as err:
        cosine_multiplier(2, 3, 4.0)
    assert err.value.pole == 4.0
    with pytest.raises(PoleError):
        cosine_multiplier(2, 3, 2.0 + 1e-13)
    with pytest.raises(InvalidArgumentError):
        cosine_multiplier(3, 3, 0.5)
    # denominator pole gives an exact zero, not an error
    assert cosine_multiplier(0, 3, -5.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([0, 2, 4, 6, 8, 10]),
    st.sampled_from([3, 4, 5]),
    st.floats(min_value=-3.9, max_value=3.9),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_duality_product_property(j, n, lam_re, lam_im):
    lam = complex(lam_re, lam_im)
    if abs(lam.imag) < 0.1:
        # keep away from the real pole sets of both factors
        if min(abs(lam.real - p) for p in range(0, 16, 2)) < 0.1:
            return
        if min(abs(-lam.real - n - p) for p in range(-16, 16, 2)) < 0.1:
            return
    prod = cosine_multiplier(j, n, lam) * cosine_multiplier(j, n, -lam - n)
    assert abs(prod - 1.0) <= 1e-10


def test_recursion_property():
    # one factor of the weighted Laplacian lowers the parameter by two
    for n in (3, 4, 5):
        for j in (0, 2, 4, 8):
            for lam in (-2.7, -0.5, 0.9, 1.3 + 0.8j):
                lhs = delta_op_eigenvalue(j, n, lam, 1) * cosine_multiplier(j, n, lam + 2)
                assert abs(lhs - cosine_multiplier(j, n, lam)) <= 1e-10


def test_delta_chain_property():
    for ell in (1, 2, 3):
        for j in (0, 2, 6):
            for n in (3, 4, 5):
                lam = -0.77
                lhs = delta_op_eigenvalue(j, n, lam, ell) * cosine_multiplier(
                    j, n, lam + 2 * ell
                )
                assert abs(lhs - cosine_multiplier(j, n, lam)) <= 1e-10


def test_funk_multiplier_values():
    assert funk_multiplier(0, 3) == pytest.approx(1.0, abs=1e-14)
    assert funk_multiplier(0, 7) == pytest.approx(1.0, abs=1e-14)
    assert abs(funk_multiplier(2, 3) + 0.5) <= 1e-13  # equals the profile at 0
    assert abs(funk_multiplier(2, 3) - zonal_eval(2, 3, 0.0)) <= 1e-13
    assert abs(funk_multiplier(2, 4) + 1.0 / 3.0) <= 1e-13
    for j in (0, 2, 4, 8):
        # n = 4 reduction: alternating 1/(j+1)
        want = (-1.0) ** (j // 2) / (j + 1)
        assert abs(funk_multiplier(j, 4) - want) <= 1e-13
        # consistency with the cosine family at its limit parameter
        assert abs(funk_multiplier(j, 5) - cosine_multiplier(j, 5, -1.0) / funk_scale(5)) <= 1e-13


def test_funk_multiplier_vs_great_circle_oracle():
    # oracle: direct great-circle average of a zonal profile about a tilted pole
    pole = np.array([0.6, 0.0, 0.8])
    u = np.array([0.0, 1.0, 0.0])
    ang = 2 * np.pi * np.arange(256) / 256
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 0.0, 1.0])
    circle = np.outer(np.cos(ang), e1) + np.outer(np.sin(ang), e2)
    for j in (2, 4, 6):
        oracle = np.mean(zonal_eval(j, 3, circle @ pole))
        want = funk_multiplier(j, 3) * zonal_eval(j, 3, float(u @ pole))
        assert abs(oracle - want) <= 1e-12


def test_sine_multiplier_values():
    for n in (3, 4, 5):
        for j in (0, 2, 4, 10):
            assert abs(sine_multiplier(j, n, 1 - n) - 1.0) <= 1e-12
    assert abs(sine_multiplier(0, 3, -1.0) - math.pi) <= 1e-12


def test_log_multiplier_values():
    assert abs(log_cosine_multiplier(2, 3) + 4.0 / (3.0 * SQPI)) <= 1e-13
    assert abs(log_cosine_multiplier(2, 4) + 0.5) <= 1e-13
    with pytest.raises(ExcludedComponentError):
        log_cosine_multiplier(0, 3)
    # removable-singularity value: continuity of the cosine family at 0
    assert abs(cosine_multiplier(2, 3, 1e-6) - log_cosine_multiplier(2, 3)) <= 1e-5


def test_delta_op_values():
    assert delta_op_eigenvalue(4, 3, 0.3 + 1j, 0) == 1.0
    assert delta_op_eigenvalue(0, 3, -3.0, 1) == 0.0
    assert abs(delta_op_eigenvalue(2, 4, -3.0, 1) - 2.25) <= 1e-14
    with pytest.raises(InvalidArgumentError):
        delta_op_eigenvalue(2, 3, 0.0, -1)


# ---------------------------------------------------------------------------
# analysis / synthesis


def test_analyze_constant(grid3):
    from funkinv.grids import constant_function

    spec = analyze(constant_function(grid3, 1.0), 6)
    assert abs(spec.coeffs[0] - 1.0) <= 1e-12
    assert np.max(np.abs(spec.coeffs[1:])) <= 1e-12


def test_full_round_trip(grid3, even_f3):
    grid_f = even_f3.to_grid(grid3)
    back = analyze(grid_f, 8)
    assert np.max(np.abs(back.coeffs - even_f3.coeffs)) <= 1e-12
    again = analyze(synthesize(back, grid3), 8)
    assert np.max(np.abs(again.coeffs - back.coeffs)) <= 1e-12


def test_even_function_has_no_odd_degrees(grid3, even_f3):
    spec = analyze(even_f3.to_grid(grid3), 8)
    for j in range(1, 9, 2):
        assert spec.degree_l2(j) <= 1e-12


def test_analyze_second_moment(grid3):
    from funkinv.grids import grid_function

    spec = analyze(grid_function(grid3, lambda v: (v[:, 0] ** 2).astype(complex)), 4)
    assert abs(spec.coeffs[0] - 1.0 / 3.0) <= 1e-13


def test_zonal_round_trip(grid4, even_f4):
    grid_f = even_f4.to_grid(grid4)
    back = analyze(grid_f, 6, pole=even_f4.pole)
    assert np.max(np.abs(back.coeffs - even_f4.coeffs)) <= 1e-12


def test_analyze_resolution_guard(grid4):
    from funkinv.grids import constant_function

    with pytest.raises(ResolutionError):
        analyze(constant_function(grid4, 1.0), 8, pole=np.eye(4)[0])
    with pytest.raises(InvalidArgumentError):
        analyze(constant_function(grid4, 1.0), 4)  # n > 3 needs a pole


def test_addition_formula_links_basis_and_zonal():
    rng = np.random.default_rng(7)
    u = rng.standard_normal(3); u /= np.linalg.norm(u)
    v = rng.standard_normal(3); v /= np.linalg.norm(v)
    B = harmonic_basis(np.vstack([u, v]), 8)
    for j in (1, 3, 6, 8):
        got = np.sum(B[0, j * j : (j + 1) ** 2] * np.conj(B[1, j * j : (j + 1) ** 2]))
        want = (2 * j + 1) * zonal_eval(j, 3, float(u @ v))
        assert abs(got - want) <= 1e-12


def test_random_even_spectrum_is_real_and_even(grid3):
    f = random_even_spectrum(3, 8, seed=5)
    vals = f.to_grid(grid3).values
    assert np.max(np.abs(vals.imag)) <= 1e-13
    assert np.max(np.abs(vals - vals[grid3.antipode])) <= 1e-13
    f2 = random_even_spectrum(3, 8, seed=5)
    assert np.array_equal(f.coeffs, f2.coeffs)


def test_multiplier_table():
    table = multiplier_table("cosine", 3, 8, lam=-1.0)
    assert table.degrees == (0, 2, 4, 6, 8)
    assert abs(table.value(0) - SQPI) <= 1e-12
    with pytest.raises(InvalidArgumentError):
        table.value(1)
    log_table = multiplier_table("log-cosine", 4, 8)
    assert log_table.degrees == (2, 4, 6, 8)
    with pytest.raises(InvalidArgumentError):
        multiplier_table("nope", 3, 8)
