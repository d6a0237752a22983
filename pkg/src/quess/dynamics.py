"""Two-tactic replicator dynamic, its fixed points, and mutant invasion trials."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numba
import numpy as np

from .game import GameMatrix, InitialState
from .quantum import payoff_closed_form

DT = 1e-3
T_MAX = 200.0
CONV_TOL = 1e-9
EPSILON = 0.01
MARGINAL_TOL = 1e-9
PROJECTION_TOL = 1e-12
STAGE_BOUNDS = (-0.1, 1.1)


class IntegrationError(RuntimeError):
    pass


class StepTooLarge(IntegrationError):
    """An RK stage left [-0.1, 1.1]; the step size is grossly unstable."""


class ProjectionError(IntegrationError):
    """A completed step left [0, 1] by more than rounding error."""


class Stability(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    p_bar: np.ndarray
    dt: float
    converged_to: Optional[float] = None

    @property
    def final(self) -> float:
        return float(self.p_bar[-1])


@dataclass(frozen=True)
class FixedPointReport:
    location: float
    stability: Stability
    eigen_slope: float


def advantage_coefficients(g: GameMatrix, s: InitialState) -> tuple[float, float]:
    """Intercept and slope of ``P(1, x) - P(0, x)``, read off from payoff evaluations.

    Payoffs are bilinear in the two tactic probabilities, so the identity
    tactic's advantage is affine in the population mean.
    """
    g0 = payoff_closed_form(g, s, 1.0, 0.0) - payoff_closed_form(g, s, 0.0, 0.0)
    g1 = payoff_closed_form(g, s, 1.0, 1.0) - payoff_closed_form(g, s, 0.0, 1.0)
    return g0, g1 - g0


def replicator_rhs(g: GameMatrix, s: InitialState, p_bar: float) -> float:
    """``dp/dt = p (f_I - F)`` with ``f_I = P(1, p)``, ``f_X = P(0, p)``, ``F = p f_I + (1 - p) f_X``."""
    f_id = payoff_closed_form(g, s, 1.0, p_bar)
    f_flip = payoff_closed_form(g, s, 0.0, p_bar)
    mean = p_bar * f_id + (1.0 - p_bar) * f_flip
    return p_bar * (f_id - mean)


_OK, _STAGE_ESCAPED, _PROJECTION_FAILED = 0, 1, 2


@numba.njit(cache=True)
def _rate(c0, c1, x):
    return x * (1.0 - x) * (c0 + c1 * x)


@numba.njit(cache=True)
def _rk4_run(c0, c1, p, dt, n_max, conv_tol, out):
    # Returns (samples written, status, converged).
    lo, hi = STAGE_BOUNDS
    half = 0.5 * dt
    out[0] = p
    n = 1
    for _ in range(n_max + 1):
        k1 = _rate(c0, c1, p)
        if abs(k1) < conv_tol:
            return n, _OK, True
        if n > n_max:
            break
        x2 = p + half * k1
        if not lo <= x2 <= hi:
            return n, _STAGE_ESCAPED, False
        k2 = _rate(c0, c1, x2)
        x3 = p + half * k2
        if not lo <= x3 <= hi:
            return n, _STAGE_ESCAPED, False
        k3 = _rate(c0, c1, x3)
        x4 = p + dt * k3
        if not lo <= x4 <= hi:
            return n, _STAGE_ESCAPED, False
        k4 = _rate(c0, c1, x4)
        p = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if p < 0.0:
            if -p > PROJECTION_TOL:
                return n, _PROJECTION_FAILED, False
            p = 0.0
        elif p > 1.0:
            if p - 1.0 > PROJECTION_TOL:
                return n, _PROJECTION_FAILED, False
            p = 1.0
        out[n] = p
        n += 1
    return n, _OK, False


def integrate(
    g: GameMatrix,
    s: InitialState,
    p0: float,
    dt: float = DT,
    t_max: float = T_MAX,
    conv_tol: float = CONV_TOL,
) -> Trajectory:
    """Classical fixed-step RK4 on the replicator dynamic.

    Stops as soon as ``|dp/dt| < conv_tol`` (recording ``converged_to``) or
    when ``t_max`` is reached. Each accepted state is projected onto [0, 1];
    a projection larger than rounding error raises :class:`ProjectionError`.
    """
    if not (dt > 0 and t_max > 0 and conv_tol > 0):
        raise ValueError("dt, t_max and conv_tol must be positive")
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"p0 must lie in [0, 1], got {p0!r}")

    c0, c1 = advantage_coefficients(g, s)
    n_max = int(round(t_max / dt))
    out = np.empty(n_max + 1)
    n, status, converged = _rk4_run(
        c0, c1, float(p0), float(dt), n_max, float(conv_tol), out
    )
    if status == _STAGE_ESCAPED:
        raise StepTooLarge(
            f"an RK stage left [{STAGE_BOUNDS[0]}, {STAGE_BOUNDS[1]}] at dt={dt}"
        )
    if status == _PROJECTION_FAILED:
        raise ProjectionError(f"state left [0, 1] by more than {PROJECTION_TOL}")
    p_bar = out[:n].copy()
    t = dt * np.arange(n)
    return Trajectory(t, p_bar, dt, float(p_bar[-1]) if converged else None)


def fixed_points(g: GameMatrix, s: InitialState) -> list[FixedPointReport]:
    """Both endpoints, plus the interior rest point when the advantage changes sign inside (0, 1)."""
    c0, c1 = advantage_coefficients(g, s)
    g_at_0, g_at_1 = c0, c0 + c1

    def verdict(slope):
        if abs(slope) <= MARGINAL_TOL:
            return Stability.MARGINAL
        return Stability.STABLE if slope < 0 else Stability.UNSTABLE

    # d/dp [p (1 - p) G(p)] is G(0) at 0 and -G(1) at 1.
    reports = [FixedPointReport(0.0, verdict(g_at_0), g_at_0)]
    if g_at_0 * g_at_1 < 0 and min(abs(g_at_0), abs(g_at_1)) > MARGINAL_TOL:
        x = -c0 / c1
        slope = x * (1.0 - x) * c1
        reports.append(FixedPointReport(x, verdict(slope), slope))
    reports.append(FixedPointReport(1.0, verdict(-g_at_1), -g_at_1))
    return reports


def _restored(traj: Trajectory, start: float, resident: float) -> bool:
    # The flow is one-dimensional and monotone, so a trajectory that stalls
    # closer to the resident than halfway has nowhere else to settle.
    if traj.converged_to is None:
        return False
    return abs(traj.converged_to - resident) <= 0.5 * abs(start - resident)


def invasion_trial(
    g: GameMatrix,
    s: InitialState,
    resident: float,
    epsilon: float = EPSILON,
    dt: float = DT,
    t_max: float = T_MAX,
    conv_tol: float = CONV_TOL,
) -> bool:
    """Shift the population mean by ``epsilon`` and report whether the dynamic restores it.

    Interior residents are perturbed in both directions and must recover from
    both. Starting points are clipped to [0, 1].
    """
    if not 0.0 < epsilon <= 0.05:
        raise ValueError(f"epsilon must lie in (0, 0.05], got {epsilon!r}")
    if not 0.0 <= resident <= 1.0:
        raise ValueError(f"resident must lie in [0, 1], got {resident!r}")
    if resident == 0.0:
        starts = [epsilon]
    elif resident == 1.0:
        starts = [1.0 - epsilon]
    else:
        starts = [min(resident + epsilon, 1.0), max(resident - epsilon, 0.0)]
    for start in starts:
        traj = integrate(g, s, start, dt=dt, t_max=t_max, conv_tol=conv_tol)
        if not _restored(traj, start, resident):
            return False
    return True
