import numpy as np
import pytest
from hypothesis import strategies as st

from quess.game import thresholds, validate_game

CANONICAL = (1.0, 0.0, 2.0, 4.0)

_acceptance_lines = []


@pytest.fixture
def canonical():
    return validate_game(*CANONICAL)


@pytest.fixture
def acceptance_report():
    def record(number, title, passed, detail=""):
        status = "PASS" if passed else "FAIL"
        _acceptance_lines.append(f"[{status}] criterion {number}: {title} {detail}".rstrip())

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@st.composite
def valid_games(draw):
    alpha = draw(st.floats(0.0, 5.0))
    beta = draw(st.floats(0.0, 5.0))
    sigma_beta = draw(st.floats(0.05, 5.0))
    frac = draw(st.floats(0.0, 0.95))
    return validate_game(alpha, beta, alpha + frac * sigma_beta, beta + sigma_beta)


def random_valid_game(rng, high=5.0):
    """Rejection-sample a valid game with payoffs uniform on [0, high]."""
    while True:
        values = rng.uniform(0.0, high, 4)
        try:
            return validate_game(*values)
        except ValueError:
            continue


probabilities = st.floats(0.0, 1.0)
phases = st.floats(-np.pi, np.pi)


def cross_validation_samples(seed, n_games=100, per_game=20, margin=1e-6):
    """Random valid games, each with ``per_game`` values of |a|^2 at least ``margin`` from both thresholds."""
    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(n_games):
        g = random_valid_game(rng)
        th = thresholds(g)
        values = []
        while len(values) < per_game:
            a_sq = float(rng.uniform(0.0, 1.0))
            if min(abs(a_sq - th.tau0), abs(a_sq - th.tau1)) >= margin:
                values.append(a_sq)
        samples.extend((g, a_sq) for a_sq in values)
    return samples
