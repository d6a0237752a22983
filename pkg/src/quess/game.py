"""Payoff constants, entangled initial state and the stability thresholds in |a|^2."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

NORM_TOL = 1e-12


class GameValidationError(ValueError):
    """Base class for rejected game or state parameters."""


class NonNegativityViolated(GameValidationError):
    pass


class SigmaBetaOrderViolated(GameValidationError):
    pass


class GammaAlphaNegative(GameValidationError):
    pass


class DominanceViolated(GameValidationError):
    pass


class AmplitudeOutOfRange(GameValidationError):
    pass


@dataclass(frozen=True)
class GameMatrix:
    """Symmetric 2x2 game; row player earns alpha, beta, gamma, sigma on S1S1, S1S2, S2S1, S2S2.

    Construct through :func:`validate_game` unless the admissibility
    conditions are already known to hold.
    """

    alpha: float
    beta: float
    gamma: float
    sigma: float

    @property
    def sigma_beta(self) -> float:
        return self.sigma - self.beta

    @property
    def gamma_alpha(self) -> float:
        return self.gamma - self.alpha

    @property
    def degenerate(self) -> bool:
        """True on the gamma == alpha edge, where the lower threshold collapses to zero."""
        return self.gamma == self.alpha


@dataclass(frozen=True)
class InitialState:
    """Amplitudes of ``a|S1S1> + b|S2S2>``."""

    a: complex
    b: complex
    # |a|^2 as requested, kept so that it survives the sqrt/abs round trip exactly.
    exact_a_sq: Optional[float] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise AmplitudeOutOfRange(f"|a|^2 + |b|^2 = {norm!r}, expected 1")
        if self.exact_a_sq is not None and abs(abs(self.a) ** 2 - self.exact_a_sq) > NORM_TOL:
            raise AmplitudeOutOfRange("exact_a_sq disagrees with |a|^2")

    @property
    def a_sq(self) -> float:
        if self.exact_a_sq is not None:
            return self.exact_a_sq
        return abs(self.a) ** 2

    @property
    def b_sq(self) -> float:
        if self.exact_a_sq is not None:
            return 1.0 - self.exact_a_sq
        return abs(self.b) ** 2


@dataclass(frozen=True)
class Thresholds:
    tau0: float
    tau1: float


def validate_game(alpha: float, beta: float, gamma: float, sigma: float) -> GameMatrix:
    """Check the admissibility conditions in order and return a :class:`GameMatrix`.

    Raises the subclass of :class:`GameValidationError` naming the first
    violated condition. Inequalities are exact, with no tolerance.
    """
    values = (alpha, beta, gamma, sigma)
    if not all(math.isfinite(v) for v in values):
        raise GameValidationError(f"payoffs must be finite, got {values}")
    alpha, beta, gamma, sigma = (float(v) for v in values)
    if min(alpha, beta, gamma, sigma) < 0:
        raise NonNegativityViolated(f"payoffs must be >= 0, got {values}")
    if not sigma - beta > 0:
        raise SigmaBetaOrderViolated(f"sigma - beta = {sigma - beta} must be > 0")
    if not gamma - alpha >= 0:
        raise GammaAlphaNegative(f"gamma - alpha = {gamma - alpha} must be >= 0")
    if not gamma - alpha < sigma - beta:
        raise DominanceViolated(
            f"gamma - alpha = {gamma - alpha} must be < sigma - beta = {sigma - beta}"
        )
    return GameMatrix(alpha, beta, gamma, sigma)


def make_initial_state(a_sq: float, phase_a: float = 0.0, phase_b: float = 0.0) -> InitialState:
    """Build the initial state with ``|a|^2 = a_sq`` and the given amplitude phases (radians)."""
    if not (0.0 <= a_sq <= 1.0):
        raise AmplitudeOutOfRange(f"a_sq must lie in [0, 1], got {a_sq!r}")
    if not (math.isfinite(phase_a) and math.isfinite(phase_b)):
        raise GameValidationError("phases must be finite")
    a = cmath.rect(math.sqrt(a_sq), phase_a)
    b = cmath.rect(math.sqrt(1.0 - a_sq), phase_b)
    return InitialState(a, b, float(a_sq))


def thresholds(g: GameMatrix) -> Thresholds:
    total = g.gamma_alpha + g.sigma_beta
    return Thresholds(g.gamma_alpha / total, g.sigma_beta / total)
