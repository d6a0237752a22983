import numpy as np
import pytest
from hypothesis import given, settings

from quess.game import make_initial_state, validate_game
from quess.quantum import (
    InvalidDensityMatrix,
    apply_tactics,
    check_density,
    column_operator,
    initial_density,
    payoff_closed_form,
    payoff_oracle,
    payoff_trace,
    row_operator,
)

from conftest import phases, probabilities, valid_games

S1S1 = np.diag([1, 0, 0, 0]).astype(complex)
S2S2 = np.diag([0, 0, 0, 1]).astype(complex)


def outer_product_density(s):
    psi = np.array([s.a, 0, 0, s.b], dtype=complex)
    return np.outer(psi, psi.conj())


def mixture_of_pure_states(s, p, q):
    # Each branch flips the chosen qubits of the state vector directly.
    psi = np.array([s.a, 0, 0, s.b], dtype=complex).reshape(2, 2)
    out = np.zeros((4, 4), dtype=complex)
    for first, w1 in ((False, p), (True, 1 - p)):
        for second, w2 in ((False, q), (True, 1 - q)):
            phi = psi
            if first:
                phi = phi[::-1, :]
            if second:
                phi = phi[:, ::-1]
            v = phi.reshape(4)
            out += w1 * w2 * np.outer(v, v.conj())
    return out


def test_initial_density_product_state():
    rho = initial_density(make_initial_state(1.0))
    np.testing.assert_array_equal(rho, S1S1)


def test_initial_density_maximally_entangled():
    rho = initial_density(make_initial_state(0.5))
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(rho, expected, atol=1e-15)


def test_initial_density_with_phase():
    s = make_initial_state(0.3, 1.2, 0.0)
    rho = initial_density(s)
    np.testing.assert_allclose(np.diag(rho).real, [0.3, 0, 0, 0.7], atol=1e-15)
    assert abs(abs(rho[0, 3]) - np.sqrt(0.21)) <= 1e-15
    np.testing.assert_allclose(rho, outer_product_density(s), atol=1e-15)


@given(probabilities, phases, phases)
def test_initial_density_is_outer_product(a_sq, pa, pb):
    s = make_initial_state(a_sq, pa, pb)
    rho = initial_density(s)
    np.testing.assert_allclose(rho, outer_product_density(s), atol=1e-15)
    check_density(rho)


def test_identity_tactics_leave_state_alone():
    rho = initial_density(make_initial_state(0.3, 0.4, -1.0))
    np.testing.assert_allclose(apply_tactics(rho, 1, 1), rho, atol=1e-15)


def test_double_flip_of_basis_state():
    np.testing.assert_allclose(apply_tactics(S1S1, 0, 0), S2S2, atol=1e-15)


def test_uniform_mixture_from_basis_state():
    np.testing.assert_allclose(apply_tactics(S1S1, 0.5, 0.5), np.eye(4) / 4, atol=1e-15)


def test_single_flips_of_basis_state():
    s1s2 = np.diag([0, 1, 0, 0]).astype(complex)
    s2s1 = np.diag([0, 0, 1, 0]).astype(complex)
    np.testing.assert_allclose(apply_tactics(S1S1, 1, 0), s1s2, atol=1e-15)
    np.testing.assert_allclose(apply_tactics(S1S1, 0, 1), s2s1, atol=1e-15)


def test_tactics_out_of_range():
    with pytest.raises(ValueError):
        apply_tactics(S1S1, 1.2, 0.5)


@given(probabilities, phases, phases, probabilities, probabilities)
def test_tactics_match_branch_mixture_and_stay_physical(a_sq, pa, pb, p, q):
    s = make_initial_state(a_sq, pa, pb)
    rho = apply_tactics(initial_density(s), p, q)
    np.testing.assert_allclose(rho, mixture_of_pure_states(s, p, q), atol=1e-14)
    check_density(rho)


@pytest.mark.parametrize(
    "rho",
    [
        np.eye(4) / 2,
        np.diag([1.5, -0.5, 0, 0]),
        np.array([[0.5, 0.5j, 0, 0], [0.5j, 0.5, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
        np.eye(3) / 3,
    ],
)
def test_check_density_rejects(rho):
    with pytest.raises(InvalidDensityMatrix):
        check_density(rho)


def test_payoff_trace_examples(canonical):
    w = row_operator(canonical)
    assert payoff_trace(S1S1, w) == 1.0
    assert payoff_trace(np.eye(4) / 4, w) == pytest.approx(1.75, abs=1e-15)


@given(probabilities, phases, phases, probabilities, probabilities)
def test_constant_operator_returns_constant(a_sq, pa, pb, p, q):
    rho = apply_tactics(initial_density(make_initial_state(a_sq, pa, pb)), p, q)
    assert abs(payoff_trace(rho, np.full(4, 2.5)) - 2.5) <= 1e-12


def test_operator_layout(canonical):
    np.testing.assert_array_equal(row_operator(canonical), [1, 0, 2, 4])
    np.testing.assert_array_equal(column_operator(canonical), [1, 2, 0, 4])


@pytest.mark.parametrize("p, q", [(1, 1), (0, 0)])
def test_closed_form_maximally_entangled(canonical, p, q):
    s = make_initial_state(0.5)
    assert payoff_closed_form(canonical, s, p, q) == pytest.approx(2.5, abs=1e-15)
    assert payoff_oracle(canonical, s, p, q) == pytest.approx(2.5, abs=1e-15)


@given(valid_games(), probabilities, probabilities)
def test_classical_limit(g, p, q):
    s = make_initial_state(1.0)
    classical = (
        g.alpha * p * q + g.beta * p * (1 - q) + g.gamma * (1 - p) * q + g.sigma * (1 - p) * (1 - q)
    )
    assert abs(payoff_closed_form(g, s, p, q) - classical) <= 1e-12


@settings(max_examples=300)
@given(valid_games(), probabilities, phases, phases, probabilities, probabilities)
def test_closed_form_matches_oracle(g, a_sq, pa, pb, p, q):
    s = make_initial_state(a_sq, pa, pb)
    assert abs(payoff_closed_form(g, s, p, q) - payoff_oracle(g, s, p, q)) <= 1e-12


@given(valid_games(), probabilities, phases, phases, probabilities, probabilities)
def test_player_symmetry(g, a_sq, pa, pb, p, q):
    s = make_initial_state(a_sq, pa, pb)
    assert abs(payoff_oracle(g, s, p, q, "column") - payoff_closed_form(g, s, q, p)) <= 1e-12


@given(valid_games(), probabilities, phases, phases, probabilities, probabilities)
def test_phase_invariance(g, a_sq, pa, pb, p, q):
    plain = make_initial_state(a_sq)
    phased = make_initial_state(a_sq, pa, pb)
    assert abs(payoff_oracle(g, phased, p, q) - payoff_oracle(g, plain, p, q)) <= 1e-12
    assert abs(payoff_closed_form(g, phased, p, q) - payoff_closed_form(g, plain, p, q)) <= 1e-12


@given(valid_games(), probabilities, probabilities, probabilities, probabilities)
def test_bilinearity(g, a_sq, p, q, lam):
    s = make_initial_state(a_sq)
    pay = lambda x, y: payoff_closed_form(g, s, x, y)
    # Three collinear points: the midpoint value is the interpolation of the ends.
    assert abs(pay(lam * p, q) - (lam * pay(p, q) + (1 - lam) * pay(0, q))) <= 1e-12
    assert abs(pay(p, lam * q) - (lam * pay(p, q) + (1 - lam) * pay(p, 0))) <= 1e-12
