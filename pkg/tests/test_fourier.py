import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from heatlab.exceptions import DimensionError, ParityError, RangeError
from heatlab.fourier import (
    FourierCoeffs,
    decay_report,
    derivative_coeff_identity_check,
    exp_grid,
    fourier_coeffs,
    inverse,
    modes,
    phi,
    psi,
    restricted_coeff_identity_check,
    restricted_coeffs,
    symbols,
    theta,
    theta_full,
    u,
)
from heatlab.grid import CircleGrid, GridFunction, integrate, sample
from heatlab.presets import get_preset


def naive_coeffs(f):
    """Oracle: the defining sum, one mode at a time in plain Python."""
    out = []
    for m in range(-f.eta, f.eta):
        s = sum(v * complex(math.cos(x * m), -math.sin(x * m)) for x, v in zip(f.grid.points, f.values))
        out.append(s * (math.pi / f.eta) / (2 * math.pi))
    return np.array(out)


def random_function(eta, seed):
    rng = np.random.default_rng(seed)
    return GridFunction(CircleGrid(eta), rng.normal(size=2 * eta) + 1j * rng.normal(size=2 * eta))


@st.composite
def grid_functions(draw, etas=st.integers(1, 64)):
    eta = draw(etas)
    el = st.floats(-10, 10)
    re = draw(arrays(float, 2 * eta, elements=el))
    im = draw(arrays(float, 2 * eta, elements=el))
    return GridFunction(CircleGrid(eta), re + 1j * im)


# --- basis --------------------------------------------------------------------


def test_modes_range():
    np.testing.assert_array_equal(modes(3), [-3, -2, -1, 0, 1, 2])


def test_exp_grid_zero_mode_is_constant():
    assert exp_grid(5, 0).allclose(1, atol=0)


def test_exp_grid_value():
    f = exp_grid(4, 2)
    assert abs(f.values[3] - (-1j)) < 1e-15


@pytest.mark.parametrize("m", [4, -5, 100])
def test_exp_grid_range(m):
    with pytest.raises(RangeError):
        exp_grid(4, m)


# --- coefficients -------------------------------------------------------------


def test_coeffs_of_constant():
    c = fourier_coeffs(GridFunction.constant(CircleGrid(6), 1))
    assert abs(c[0] - 1) < 1e-14
    assert max(abs(v) for m, v in c.items() if m != 0) < 1e-14


@pytest.mark.parametrize("eta", [2, 3, 16, 64])
def test_coeffs_of_cosine(eta):
    c = fourier_coeffs(sample(np.cos, eta))
    assert abs(c[1] - 0.5) < 1e-14 and abs(c[-1] - 0.5) < 1e-14
    assert max(abs(v) for m, v in c.items() if abs(m) != 1) < 1e-14


def test_coeffs_of_cosine_two_points():
    # the coarsest even grid (modes -2..1) still resolves cos exactly
    c = fourier_coeffs(sample(np.cos, 2))
    assert abs(c[1] - 0.5) < 1e-15


def test_exp_grid_orthogonality():
    c = fourier_coeffs(exp_grid(8, 3))
    assert abs(c[3] - 1) < 1e-12
    assert max(abs(v) for m, v in c.items() if m != 3) < 1e-12


@settings(max_examples=40)
@given(grid_functions(st.integers(1, 12)))
def test_coeffs_match_naive_sum(f):
    np.testing.assert_allclose(fourier_coeffs(f).coeffs, naive_coeffs(f), atol=1e-12 * max(1, f.sup()))


@given(grid_functions())
def test_direct_and_fft_agree(f):
    a = fourier_coeffs(f, "direct").coeffs
    b = fourier_coeffs(f, "fft").coeffs
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1, f.sup())


@given(grid_functions())
def test_roundtrip(f):
    tol = 1e-10 * max(1, f.sup())
    assert (inverse(fourier_coeffs(f)) - f).sup() <= tol
    assert (inverse(fourier_coeffs(f, "fft"), "fft") - f).sup() <= tol


@given(grid_functions())
def test_parseval(f):
    lhs = integrate(f * f.conj()).real / (2 * math.pi)
    rhs = float(np.sum(np.abs(fourier_coeffs(f).coeffs) ** 2))
    assert abs(lhs - rhs) <= 1e-10 * max(1, lhs)


def test_inverse_of_deltas():
    c = np.zeros(8, dtype=complex)
    c[4] = 1
    assert inverse(FourierCoeffs(4, c)).allclose(1, atol=1e-15)
    c = np.zeros(8, dtype=complex)
    c[3] = c[5] = 0.5
    assert inverse(FourierCoeffs(4, c)).allclose(sample(np.cos, 4), atol=1e-15)


def test_coeff_container_checks():
    with pytest.raises(DimensionError):
        FourierCoeffs(3, np.zeros(5))
    c = FourierCoeffs(2, np.arange(4))
    assert c[-2] == 0 and c[1] == 3
    with pytest.raises(RangeError):
        c[2]


# --- symbols ------------------------------------------------------------------


def test_symbols_at_zero():
    s = symbols(8, 0)
    assert s.phi == 0 and s.psi == 0 and s.theta == 0 and s.u == 1


def test_phi_value():
    assert abs(phi(8, 2) - (-1.8006326323142121j)) < 1e-14


def test_theta_value():
    t = theta(64, 1)
    assert abs(t - (-0.9991970675392312)) < 1e-15
    assert abs(t + 1) < 8.04e-4


def test_symbol_ranges():
    with pytest.raises(RangeError):
        phi(4, 5)
    with pytest.raises(RangeError):
        psi(4, 3)
    with pytest.raises(RangeError):
        theta(4, -3)
    s = symbols(4, 3)
    assert s.psi is None and s.theta is None and s.phi is not None


@given(st.integers(1, 200), st.data())
def test_symbol_relations(eta, data):
    m = data.draw(st.integers(-(eta // 2), eta // 2))
    ph, ps, uu, th = phi(eta, m), psi(eta, m), u(eta, m), theta(eta, m)
    assert abs(ph - (-1j * eta / math.pi * math.sin(math.pi * m / eta))) <= 1e-12 * eta
    assert abs(ps**2 * uu - th) <= 1e-10 * eta**2
    assert th <= 0
    assert abs(abs(uu) - 1) < 1e-15
    assert abs(theta_full(eta, m) - th) <= 1e-12 * eta**2
    if m:
        a = abs(ps)
        assert 2 * abs(m) / math.pi * (1 - 1e-12) <= a <= abs(m) * (1 + 1e-12)


@given(st.integers(1, 6), st.integers(2, 500))
def test_theta_converges_monotonically(m, eta):
    eta = max(eta, 2 * m)
    err = abs(theta(eta, m) + m * m)
    assert err <= math.pi**2 * m**4 / (3 * eta**2)
    assert abs(theta(eta + 2, m) + m * m) <= err


# --- coefficient identities ---------------------------------------------------


@pytest.mark.parametrize("m", [-8, -3, 0, 5, 7])
def test_derivative_identity_eigenfunction(m):
    rep = derivative_coeff_identity_check(exp_grid(8, m), tol=1e-12)
    assert rep["first"].passed and rep["second"].passed


def test_derivative_identity_random():
    rep = derivative_coeff_identity_check(random_function(32, 1))
    assert rep["first"].residual <= 1e-10 and rep["second"].residual <= 1e-10


def test_derivative_identity_constant():
    rep = derivative_coeff_identity_check(GridFunction.constant(CircleGrid(5), 2))
    assert rep["first"].residual <= 1e-14 and rep["second"].residual <= 1e-14


@pytest.mark.parametrize("m", [-4, -1, 0, 2, 4])
def test_restricted_identity_eigenfunction(m):
    assert restricted_coeff_identity_check(exp_grid(8, m), tol=1e-12).passed


def test_restricted_identity_random_and_constant():
    assert restricted_coeff_identity_check(random_function(32, 2)).residual <= 1e-10
    assert restricted_coeff_identity_check(GridFunction.constant(CircleGrid(6), 1)).residual <= 1e-14


def test_restricted_identity_parity():
    with pytest.raises(ParityError):
        restricted_coeff_identity_check(GridFunction.constant(CircleGrid(5), 1))


def test_restricted_coeffs_live_on_half_grid():
    c = restricted_coeffs(random_function(8, 3))
    assert c.eta == 4 and len(c) == 8


@settings(max_examples=50)
@given(grid_functions(st.integers(1, 32).map(lambda k: 2 * k)))
def test_identity_checks_hold_for_any_input(f):
    tol = 1e-10 * max(1, f.sup())
    rep = derivative_coeff_identity_check(f, tol=tol * f.eta**2)
    assert rep["first"].passed and rep["second"].passed
    assert restricted_coeff_identity_check(f, tol=tol * f.eta**2).passed


# --- decay --------------------------------------------------------------------


def test_decay_cosine_finite_spectrum():
    f = sample(np.cos, 16)
    c = restricted_coeffs(f)
    assert max(abs(v) for m, v in c.items() if abs(m) > 1) < 1e-14
    assert decay_report(f).passed


@pytest.mark.parametrize("name", ["expcos", "cos+halfcos2"])
def test_decay_presets(name):
    rep = decay_report(get_preset(name).grid_function(64))
    assert rep.passed and rep.checked == 63


def test_decay_single_mode():
    eta = 16
    m = eta // 4
    rep = decay_report(exp_grid(eta, m))
    assert rep.F_const == pytest.approx(abs(theta(eta, m)), rel=1e-12)
    assert 1 <= (math.pi**2 / 4) * rep.F_const / m**2
    assert rep.passed


@given(grid_functions(st.integers(1, 32).map(lambda k: 2 * k)))
def test_decay_bound_holds_for_random_smooth(f):
    # holds for every grid function, not only sampled smooth ones
    assert decay_report(f).passed
