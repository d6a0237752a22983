"""Evolutionary stability of Nash equilibria in the symmetric identity/flip quantum game."""

from .dynamics import fixed_points, integrate, invasion_trial, replicator_rhs
from .equilibria import (
    EquilibriumReport,
    Kind,
    Stability,
    classify,
    ess_by_definition,
    ess_second_order_gap,
    mixed_p_star,
    ne_gap,
)
from .game import GameMatrix, InitialState, make_initial_state, thresholds, validate_game
from .quantum import apply_tactics, initial_density, payoff_closed_form, payoff_trace

__version__ = "0.1.0"
