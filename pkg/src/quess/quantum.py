"""Two-qubit density-matrix evolution for the identity / spin-flip tactic scheme.

Basis order is (S1S1, S1S2, S2S1, S2S2) throughout. The trace path here is
kept deliberately independent from :func:`payoff_closed_form` so the two can
check each other.
"""

from __future__ import annotations

import numpy as np

from .game import GameMatrix, InitialState

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

IDENTITY = np.eye(2, dtype=complex)
FLIP = np.array([[0, 1], [1, 0]], dtype=complex)

# (first player's operator, second player's operator), each paired with the
# weight function of (p, q) it receives in the mixture.
_TERMS = (
    (np.kron(IDENTITY, IDENTITY), lambda p, q: p * q),
    (np.kron(IDENTITY, FLIP), lambda p, q: p * (1 - q)),
    (np.kron(FLIP, IDENTITY), lambda p, q: (1 - p) * q),
    (np.kron(FLIP, FLIP), lambda p, q: (1 - p) * (1 - q)),
)


class InvalidDensityMatrix(ValueError):
    pass


def check_density(rho: np.ndarray) -> np.ndarray:
    """Raise :class:`InvalidDensityMatrix` unless ``rho`` is a 4x4 Hermitian, unit-trace PSD matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidDensityMatrix(f"expected shape (4, 4), got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise InvalidDensityMatrix("matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrix(f"trace is {np.trace(rho)}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise InvalidDensityMatrix("matrix has a negative eigenvalue")
    return rho


def initial_density(s: InitialState) -> np.ndarray:
    """Return ``|psi><psi|`` for ``psi = a|S1S1> + b|S2S2>``."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(s.a) ** 2
    rho[0, 3] = s.a * np.conj(s.b)
    rho[3, 0] = np.conj(s.a) * s.b
    rho[3, 3] = abs(s.b) ** 2
    return rho


def apply_tactics(rho: np.ndarray, p: float, q: float) -> np.ndarray:
    """Mix the four conjugations of ``rho`` by {I, X} x {I, X}.

    ``p`` and ``q`` are the probabilities that the first and second player
    apply the identity rather than the spin flip.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError(f"tactic probabilities must lie in [0, 1], got ({p}, {q})")
    out = np.zeros((4, 4), dtype=complex)
    for op, weight in _TERMS:
        out += weight(p, q) * (op @ rho @ op.conj().T)
    return out


def row_operator(g: GameMatrix) -> np.ndarray:
    """Diagonal of the first player's payoff operator."""
    return np.array([g.alpha, g.beta, g.gamma, g.sigma], dtype=float)


def column_operator(g: GameMatrix) -> np.ndarray:
    """Diagonal of the second player's payoff operator (transpose of the row game)."""
    return np.array([g.alpha, g.gamma, g.beta, g.sigma], dtype=float)


def payoff_trace(rho_final: np.ndarray, weights: np.ndarray) -> float:
    """Expected payoff ``Tr(W rho)`` for a diagonal payoff operator ``W``."""
    value = np.trace(np.diag(np.asarray(weights, dtype=complex)) @ rho_final)
    return float(value.real)


def payoff_oracle(g: GameMatrix, s: InitialState, p: float, q: float, player: str = "row") -> float:
    """Payoff via initial density -> tactic mixture -> trace."""
    weights = row_operator(g) if player == "row" else column_operator(g)
    return payoff_trace(apply_tactics(initial_density(s), p, q), weights)


def payoff_closed_form(g: GameMatrix, s: InitialState, p: float, q: float) -> float:
    """Payoff to a ``p`` player against a ``q`` player, expanded in |a|^2 and |b|^2."""
    a2, b2 = s.a_sq, s.b_sq
    return (
        g.alpha * (p * q * a2 + (1 - p) * (1 - q) * b2)
        + g.beta * (p * (1 - q) * a2 + q * (1 - p) * b2)
        + g.gamma * (p * (1 - q) * b2 + q * (1 - p) * a2)
        + g.sigma * (p * q * b2 + (1 - p) * (1 - q) * a2)
    )
