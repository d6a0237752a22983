"""Nash equilibrium enumeration and evolutionary-stability classification."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .game import GameMatrix, InitialState, thresholds
from .quantum import payoff_closed_form

THRESHOLD_TOL = 1e-12
RANGE_TOL = 1e-12


class Kind(str, enum.Enum):
    PURE0 = "Pure0"
    PURE1 = "Pure1"
    MIXED = "Mixed"


class Stability(str, enum.Enum):
    ESS = "ESS"
    NE_NOT_ESS = "NeNotEss"
    NOT_NE = "NotNe"


class DegenerateDeviation(ValueError):
    pass


class BadGrid(ValueError):
    pass


@dataclass(frozen=True)
class EquilibriumReport:
    p_star: float
    kind: Kind
    is_ne: bool
    is_ess: Stability
    boundary_case: bool


def _bracket(g: GameMatrix, s: InitialState, r: float) -> float:
    # P(1, r) - P(0, r): the fitness advantage of the identity tactic against r.
    return -s.a_sq * g.sigma_beta + s.b_sq * g.gamma_alpha + r * (g.sigma_beta - g.gamma_alpha)


def ne_gap(g: GameMatrix, s: InitialState, p_star: float, p: float) -> float:
    """``P(p*, p*) - P(p, p*)``; non-negative for every ``p`` iff ``p*`` is a symmetric NE."""
    return (p_star - p) * _bracket(g, s, p_star)


def ess_second_order_gap(g: GameMatrix, s: InitialState, p_star: float, p: float) -> float:
    """``P(p*, p) - P(p, p)``, the invasion test used when the NE gap vanishes."""
    if p == p_star:
        raise DegenerateDeviation("deviation p must differ from p_star")
    return (p_star - p) * _bracket(g, s, p)


def mixed_p_star(g: GameMatrix, s: InitialState) -> tuple[float, bool]:
    """Interior NE candidate and whether it lies in [0, 1].

    Values within ``RANGE_TOL`` of an endpoint are snapped onto it; anything
    further out is reported as out of range, never clamped.
    """
    sb, ga = g.sigma_beta, g.gamma_alpha
    value = (sb * s.a_sq - ga * s.b_sq) / (sb - ga)
    if -RANGE_TOL <= value < 0.0:
        value = 0.0
    elif 1.0 < value <= 1.0 + RANGE_TOL:
        value = 1.0
    return value, 0.0 <= value <= 1.0


def classify(g: GameMatrix, s: InitialState) -> list[EquilibriumReport]:
    """Classify the pure candidates and, when it exists, the interior one.

    Pure0 is ESS above the lower threshold, Pure1 below the upper one; at a
    threshold the NE gap vanishes identically and the second-order gap is
    strictly negative, so the candidate is a NE but not an ESS. The interior
    candidate always has a zero NE gap and a second-order gap of
    ``-delta**2 * ((sigma - beta) - (gamma - alpha))``, so it is never ESS.
    """
    th = thresholds(g)
    a2 = s.a_sq
    reports = []

    d0 = a2 - th.tau0
    if abs(d0) <= THRESHOLD_TOL:
        reports.append(EquilibriumReport(0.0, Kind.PURE0, True, Stability.NE_NOT_ESS, True))
    elif d0 > 0:
        reports.append(EquilibriumReport(0.0, Kind.PURE0, True, Stability.ESS, False))
    else:
        reports.append(EquilibriumReport(0.0, Kind.PURE0, False, Stability.NOT_NE, False))

    d1 = th.tau1 - a2
    if abs(d1) <= THRESHOLD_TOL:
        reports.append(EquilibriumReport(1.0, Kind.PURE1, True, Stability.NE_NOT_ESS, True))
    elif d1 > 0:
        reports.append(EquilibriumReport(1.0, Kind.PURE1, True, Stability.ESS, False))
    else:
        reports.append(EquilibriumReport(1.0, Kind.PURE1, False, Stability.NOT_NE, False))

    p_mix, in_range = mixed_p_star(g, s)
    if in_range:
        reports.append(EquilibriumReport(p_mix, Kind.MIXED, True, Stability.NE_NOT_ESS, True))
    return reports


def ess_by_definition(
    g: GameMatrix,
    s: InitialState,
    x: float,
    grid_size: int = 1001,
    tol: float = 1e-9,
) -> bool:
    """Brute-force ESS test of ``x`` against every mutant on a uniform grid.

    Uses only payoff evaluations: ``P[x, x] >= P[y, x]`` for all ``y``, and
    ``P[x, y] > P[y, y]`` wherever the first comparison is a tie within ``tol``.
    """
    if int(grid_size) != grid_size or grid_size < 3:
        raise BadGrid(f"grid_size must be an integer >= 3, got {grid_size!r}")
    ys = np.linspace(0.0, 1.0, int(grid_size))
    ys = ys[ys != x]
    first = payoff_closed_form(g, s, x, x) - payoff_closed_form(g, s, ys, x)
    if np.any(first < -tol):
        return False
    tied = np.abs(first) <= tol
    second = payoff_closed_form(g, s, x, ys[tied]) - payoff_closed_form(g, s, ys[tied], ys[tied])
    return bool(np.all(second > tol))


def ne_by_definition(
    g: GameMatrix, s: InitialState, x: float, grid_size: int = 1001, tol: float = 1e-9
) -> bool:
    """Grid check of the Nash requirement alone."""
    if int(grid_size) != grid_size or grid_size < 3:
        raise BadGrid(f"grid_size must be an integer >= 3, got {grid_size!r}")
    ys = np.linspace(0.0, 1.0, int(grid_size))
    first = payoff_closed_form(g, s, x, x) - payoff_closed_form(g, s, ys, x)
    return bool(np.all(first >= -tol))


def find(reports: list[EquilibriumReport], kind: Kind) -> Optional[EquilibriumReport]:
    return next((r for r in reports if r.kind == kind), None)
