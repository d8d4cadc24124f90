import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatlab.chain import (
    GENERAL,
    ODD,
    CyclicChain,
    Distribution,
    MixingBound,
    coupling_tail_exact,
    delta_n,
    eps_n,
    evolve,
    n_step_matrix,
    simulate_meeting_time,
    steps_to_equilibrium,
    tv_gap,
)
from heatlab.exceptions import DimensionError, DomainError, InvalidVariantError, ResourceError


def eigen_tv_gap(N, n):
    """Independent oracle: diagonalise the circulant kernel.

    Row 0 of ``P**n`` is ``(1/N) sum_k lambda_k**n exp(2 pi i k j / N)`` with
    ``lambda_k = (1 + 2 cos(2 pi k / N)) / 3``.
    """
    k = np.arange(N)
    lam = (1 + 2 * np.cos(2 * np.pi * k / N)) / 3
    j = np.arange(N)
    row = (np.exp(2j * np.pi * np.outer(j, k) / N) @ lam**n).real / N
    return float(np.max(np.abs(row - 1 / N)))


def brute_tail(N, n):
    """P(T > n) by enumerating every move sequence of both copies."""
    alive = total = 0
    for y0 in range(N):
        for moves in itertools.product((-1, 0, 1), repeat=2 * n):
            x, y = 0, y0
            met = False
            for k in range(n):
                x = (x + moves[2 * k]) % N
                y = (y + moves[2 * k + 1]) % N
                if x == y:
                    met = True
                    break
            alive += not met
            total += 1
    return Fraction(alive, total)


# --- kernel -----------------------------------------------------------------


def test_one_step_three_states_is_uniform():
    P = n_step_matrix(CyclicChain(3), 1, exact=True)
    assert (P == Fraction(1, 3)).all()


def test_zero_steps_is_identity():
    np.testing.assert_array_equal(n_step_matrix(CyclicChain(5), 0), np.eye(5))


def test_fifty_steps_close_to_uniform():
    P = n_step_matrix(CyclicChain(5), 50)
    assert np.max(np.abs(P - 0.2)) < 1e-12


def test_two_state_kernel():
    P = CyclicChain(2).kernel(exact=True)
    assert list(P[0]) == [Fraction(1, 3), Fraction(2, 3)]


@given(st.integers(2, 12), st.integers(0, 30))
def test_matrix_is_doubly_stochastic_and_symmetric(N, n):
    P = n_step_matrix(CyclicChain(N), n, exact=True)
    assert all(sum(row) == 1 for row in P)
    assert all(sum(col) == 1 for col in P.T)
    assert (P == P.T).all()


@given(st.integers(2, 9), st.integers(0, 25))
def test_exact_and_float_matrices_agree(N, n):
    c = CyclicChain(N)
    exact = n_step_matrix(c, n, exact=True).astype(float)
    np.testing.assert_allclose(n_step_matrix(c, n), exact, atol=1e-14)


def test_chain_rejects_single_state():
    with pytest.raises(DomainError):
        CyclicChain(1)


# --- evolve / distributions ---------------------------------------------------


def test_uniform_is_invariant():
    d = Distribution.uniform(4)
    assert evolve(CyclicChain(4), d, 7).weights == d.weights


def test_two_state_delta_one_step():
    d = Distribution((1, 0), exact=True)
    assert evolve(CyclicChain(2), d, 1).weights == (Fraction(1, 3), Fraction(2, 3))


def test_concentrated_mass_within_odd_bound():
    d = Distribution((5, 0, 0, 0, 0), exact=True)
    out = evolve(CyclicChain(5), d, 200)
    bound = 5 * delta_n(5, 200)
    assert all(abs(float(w) - 1) <= bound for w in out.weights)


def test_evolve_length_mismatch():
    with pytest.raises(DimensionError):
        evolve(CyclicChain(4), Distribution.uniform(3), 1)


def test_negative_weights_rejected():
    with pytest.raises(DomainError):
        Distribution((1, -1, 2))


def test_mass_mismatch_rejected():
    with pytest.raises(DomainError):
        Distribution((1, 2), mass=4, exact=True)


def test_from_values_picks_exactness():
    assert Distribution.from_values([1, Fraction(1, 2)]).exact
    assert not Distribution.from_values([1.0, 0.5]).exact


@given(
    st.lists(st.fractions(min_value=0, max_value=10), min_size=2, max_size=10),
    st.integers(0, 20),
)
def test_mass_conserved_exactly(weights, n):
    d = Distribution(tuple(weights), exact=True)
    out = evolve(CyclicChain(len(weights)), d, n)
    assert out.mass == d.mass
    assert min(out.weights) >= 0


# --- tv gap -------------------------------------------------------------------


def test_gap_three_states_one_step():
    assert tv_gap(CyclicChain(3), 1, exact=True) == 0


def test_gap_below_bound_at_exponent_zero():
    assert tv_gap(CyclicChain(5), 4, exact=True) <= eps_n(5, 4) == 1.0


def test_gap_matches_eigen_oracle_n20():
    assert abs(tv_gap(CyclicChain(5), 20) - eigen_tv_gap(5, 20)) <= 1e-10


@settings(max_examples=60)
@given(st.integers(2, 15), st.integers(0, 60))
def test_gap_matches_eigen_oracle(N, n):
    c = CyclicChain(N)
    assert abs(tv_gap(c, n) - eigen_tv_gap(N, n)) <= 1e-12
    assert abs(float(tv_gap(c, n, exact=True)) - eigen_tv_gap(N, n)) <= 1e-12


@given(st.integers(2, 9), st.integers(0, 60))
def test_gap_nonincreasing(N, n):
    c = CyclicChain(N)
    assert tv_gap(c, n + 1, exact=True) <= tv_gap(c, n, exact=True)


# --- bounds -------------------------------------------------------------------


def test_bound_values():
    assert eps_n(5, 4) == 1.0
    assert delta_n(5, 4) == pytest.approx(8 / 9, rel=1e-15)
    assert eps_n(5, 8) == pytest.approx(80 / 81, rel=1e-15)


def test_odd_variant_needs_odd_n():
    with pytest.raises(InvalidVariantError):
        MixingBound(4, ODD)
    with pytest.raises(InvalidVariantError):
        MixingBound(5, "sharp")


@given(st.integers(2, 9), st.integers(1, 120))
def test_exact_comparison_agrees_with_float(N, n):
    b = MixingBound(N, GENERAL)
    gap = tv_gap(CyclicChain(N), n, exact=True)
    assert b.holds_exact(gap, n)
    assert float(gap) <= b(n) * (1 + 1e-12)


@given(st.integers(1, 6), st.integers(0, 100))
def test_odd_bound_is_sharper(k, extra):
    # below n = N-1 both exponents are negative and the comparison flips
    N = 2 * k + 1
    n = N - 1 + extra
    assert delta_n(N, n) <= eps_n(N, n) * (1 + 1e-15)


# --- threshold ----------------------------------------------------------------


def test_threshold_frozen_values():
    assert steps_to_equilibrium(5, 1e-3, GENERAL) == 2229
    assert steps_to_equilibrium(3, 0.5, GENERAL) == 14


def test_threshold_near_one_is_one_past_block_length():
    # the real-valued threshold decreases to m = 4 as eps -> 1 but stays above it
    assert steps_to_equilibrium(5, 1 - 1e-15) == 5
    assert steps_to_equilibrium(5, eps_n(5, 5) * (1 + 1e-12)) == 5


@pytest.mark.parametrize("eps", [0.0, 1.0, 1.5, -0.1])
def test_threshold_domain(eps):
    with pytest.raises(DomainError):
        steps_to_equilibrium(5, eps)


def test_threshold_large_eta_uses_extended_precision():
    # 3**-700 underflows a double; the answer is roughly m * 3**m * log(1/eps)
    n = steps_to_equilibrium(701, 0.5)
    digits = 700 * math.log10(3) + math.log10(700 * math.log(2))
    assert abs(math.log10(n) - digits) < 1e-6


@given(st.integers(3, 12), st.floats(1e-9, 0.99), st.floats(1e-9, 0.99))
def test_threshold_monotone_in_eps(eta, a, b):
    lo, hi = sorted((a, b))
    assert steps_to_equilibrium(eta, lo) >= steps_to_equilibrium(eta, hi)


# --- coupling -----------------------------------------------------------------


def test_coupling_three_states():
    t = coupling_tail_exact(3, 2)
    assert t[1] == Fraction(2, 3)
    assert t[2] == Fraction(4, 9) <= 1 - Fraction(1, 9)


def test_coupling_two_states_first_step():
    # started from delta_0 x uniform the copies meet at step 1 with probability 1/2
    assert coupling_tail_exact(2, 1)[1] == Fraction(1, 2)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_coupling_matches_enumeration(N):
    t = coupling_tail_exact(N, 4)
    assert t[0] == 1
    for n in range(1, 5):
        assert t[n] == brute_tail(N, n)


@given(st.integers(2, 12), st.integers(0, 11))
def test_coupling_first_step_general(N, start):
    assert coupling_tail_exact(N, 1, start=start)[1] == 1 - Fraction(1, N)


def test_coupling_resource_limit():
    with pytest.raises(ResourceError):
        coupling_tail_exact(41, 2)


@given(st.integers(2, 10))
@settings(max_examples=15)
def test_coupling_nonincreasing_and_geometric(N):
    m = N - 1
    t = coupling_tail_exact(N, 6 * m)
    assert all(a >= b for a, b in zip(t.tail, t.tail[1:]))
    rho = Fraction(1, 3**m)
    for k in range(7):
        assert t[k * m] <= (1 - rho) ** k


def test_coupling_bounds_gap():
    # coupling inequality: the distance to uniform never exceeds P(T > n)
    N = 5
    t = coupling_tail_exact(N, 30)
    c = CyclicChain(N)
    for n in range(1, 31):
        assert tv_gap(c, n, exact=True) <= t[n]


def test_simulation_three_states():
    mc = simulate_meeting_time(3, 100_000, seed=7, n_max=1)
    assert abs(mc[1] - 2 / 3) < 0.006


def test_simulation_single_trial_starts_alive():
    for seed in range(5):
        assert simulate_meeting_time(3, 1, seed=seed)[0] == 1.0


def test_simulation_seven_states_geometric():
    trials = 100_000
    mc = simulate_meeting_time(7, trials, seed=3, n_max=30)
    for k in range(1, 6):
        p = (1 - 3.0**-6) ** k
        assert mc[6 * k] <= p + 4 * math.sqrt(p * (1 - p) / trials)


def test_simulation_is_reproducible():
    a = simulate_meeting_time(5, 40_000, seed=11)
    b = simulate_meeting_time(5, 40_000, seed=11)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, simulate_meeting_time(5, 40_000, seed=12))


def test_simulation_within_binomial_error():
    trials = 100_000
    exact = coupling_tail_exact(5, 20).as_float()
    mc = simulate_meeting_time(5, trials, seed=0, n_max=20)
    sigma = np.sqrt(exact * (1 - exact) / trials)
    assert np.all(np.abs(mc - exact) <= 4 * sigma + 1e-15)
