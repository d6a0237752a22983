"""``quess`` command line: analyze one state, sweep |a|^2, or simulate the replicator dynamic.

Exit codes: 0 success, 1 invalid input, 2 analytic/dynamic disagreement or
integrator failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import dynamics
from .dynamics import IntegrationError, integrate, invasion_trial
from .equilibria import Kind, Stability, classify, ess_by_definition, find
from .game import GameValidationError, make_initial_state, thresholds, validate_game
from .quantum import payoff_closed_form, payoff_oracle

SWEEP_COLUMNS = (
    "a_sq",
    "ne_pure0",
    "ne_pure1",
    "ne_mixed",
    "mixed_p_star",
    "ess_pure0",
    "ess_pure1",
    "region",
)
ORACLE_SAMPLES = 64
ORACLE_TOL = 1e-12


class InputError(Exception):
    pass


def fmt(x: float) -> str:
    return repr(float(x))


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def read_config(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys may use - or _."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


# -- sweep ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    a_sq: float
    ne_pure0: bool
    ne_pure1: bool
    ne_mixed: bool
    mixed_p_star: Optional[float]
    ess_pure0: bool
    ess_pure1: bool
    region: str

    def as_fields(self) -> list[str]:
        return [
            fmt(self.a_sq),
            fmt_bool(self.ne_pure0),
            fmt_bool(self.ne_pure1),
            fmt_bool(self.ne_mixed),
            "" if self.mixed_p_star is None else fmt(self.mixed_p_star),
            fmt_bool(self.ess_pure0),
            fmt_bool(self.ess_pure1),
            self.region,
        ]


def sweep_row(game, a_sq: float) -> SweepRow:
    reports = classify(game, make_initial_state(a_sq))
    pure0, pure1, mixed = (find(reports, k) for k in (Kind.PURE0, Kind.PURE1, Kind.MIXED))
    ess0 = pure0.is_ess == Stability.ESS
    ess1 = pure1.is_ess == Stability.ESS
    if pure0.boundary_case or pure1.boundary_case:
        region = "Boundary"
    elif ess0 and ess1:
        region = "Bistable"
    elif ess1:
        region = "Pure1Only"
    else:
        region = "Pure0Only"
    return SweepRow(
        a_sq,
        pure0.is_ne,
        pure1.is_ne,
        mixed is not None,
        None if mixed is None else mixed.p_star,
        ess0,
        ess1,
        region,
    )


def sweep_grid(start: float, stop: float, steps: int) -> list[float]:
    if steps < 2:
        raise InputError(f"--steps must be >= 2, got {steps}")
    if not (0.0 <= start <= 1.0 and 0.0 <= stop <= 1.0):
        raise InputError(f"sweep range [{start}, {stop}] must lie within [0, 1]")
    if start > stop:
        raise InputError(f"--a-sq-from {start} exceeds --a-sq-to {stop}")
    n = steps - 1
    grid = [start + (stop - start) * i / n for i in range(n)]
    return grid + [stop]


def sweep_csv(game, rows: list[SweepRow]) -> str:
    th = thresholds(game)
    buf = io.StringIO()
    buf.write(
        f"# quess sweep alpha={fmt(game.alpha)} beta={fmt(game.beta)} gamma={fmt(game.gamma)} "
        f"sigma={fmt(game.sigma)} tau0={fmt(th.tau0)} tau1={fmt(th.tau1)}\n"
    )
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(row.as_fields())
    return buf.getvalue()


def sweep_text(rows: list[SweepRow]) -> str:
    table = [list(SWEEP_COLUMNS)] + [r.as_fields() for r in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(SWEEP_COLUMNS))]
    return "".join(
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() + "\n" for r in table
    )


# -- analyze ----------------------------------------------------------------


@dataclass(frozen=True)
class CandidateCheck:
    kind: str
    p_star: float
    is_ne: bool
    ess_status: str
    boundary_case: bool
    invasion_restored: bool
    definition_ess: bool

    @property
    def agree(self) -> bool:
        analytic = self.ess_status == Stability.ESS.value
        return analytic == self.invasion_restored == self.definition_ess


def oracle_spot_check(game, state, seed: int, n: int = ORACLE_SAMPLES) -> float:
    """Largest |closed form - density-matrix oracle| over ``n`` seeded tactic pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for p, q in rng.uniform(0.0, 1.0, size=(n, 2)):
        row = abs(payoff_closed_form(game, state, p, q) - payoff_oracle(game, state, p, q))
        col = abs(
            payoff_closed_form(game, state, q, p) - payoff_oracle(game, state, p, q, "column")
        )
        worst = max(worst, row, col)
    return worst


def analyze(game, state, args) -> tuple[list[CandidateCheck], float]:
    checks = []
    for r in classify(game, state):
        restored = invasion_trial(
            game,
            state,
            r.p_star,
            epsilon=args.epsilon,
            dt=args.dt,
            t_max=args.t_max,
            conv_tol=args.conv_tol,
        )
        checks.append(
            CandidateCheck(
                r.kind.value,
                r.p_star,
                r.is_ne,
                r.is_ess.value,
                r.boundary_case,
                restored,
                ess_by_definition(game, state, r.p_star),
            )
        )
    return checks, oracle_spot_check(game, state, args.seed)


def analyze_text(game, state, checks, oracle_err) -> str:
    th = thresholds(game)
    lines = [
        f"game: alpha={fmt(game.alpha)} beta={fmt(game.beta)} "
        f"gamma={fmt(game.gamma)} sigma={fmt(game.sigma)}",
        f"|a|^2={fmt(state.a_sq)}  tau0={fmt(th.tau0)}  tau1={fmt(th.tau1)}",
    ]
    if game.degenerate:
        lines.append("note: gamma == alpha, lower threshold is 0")
    for c in checks:
        lines += [
            f"[{c.kind}] p*={fmt(c.p_star)}",
            f"  NE: {'yes' if c.is_ne else 'no'}  stability: {c.ess_status}"
            + ("  (boundary)" if c.boundary_case else ""),
            f"  invasion trial: {'restored' if c.invasion_restored else 'invaded'}"
            f"  grid definition: {'ESS' if c.definition_ess else 'not ESS'}"
            f"  -> {'agree' if c.agree else 'DISAGREE'}",
        ]
    if not any(c.kind == Kind.MIXED.value for c in checks):
        lines.append("[Mixed] absent (outside [0, 1])")
    lines.append(
        f"oracle check: max |closed form - density matrix| = {oracle_err:.3e} "
        f"({'ok' if oracle_err <= ORACLE_TOL else 'FAIL'})"
    )
    return "\n".join(lines) + "\n"


def analyze_csv(checks) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "kind",
            "p_star",
            "is_ne",
            "ess_status",
            "boundary_case",
            "invasion_restored",
            "definition_ess",
            "agree",
        ]
    )
    for c in checks:
        writer.writerow(
            [
                c.kind,
                fmt(c.p_star),
                fmt_bool(c.is_ne),
                c.ess_status,
                fmt_bool(c.boundary_case),
                fmt_bool(c.invasion_restored),
                fmt_bool(c.definition_ess),
                fmt_bool(c.agree),
            ]
        )
    return buf.getvalue()


# -- simulate ---------------------------------------------------------------


def trajectory_csv(traj, stride: int) -> str:
    if stride < 1:
        raise InputError(f"--stride must be >= 1, got {stride}")
    idx = list(range(0, len(traj.t), stride))
    if idx[-1] != len(traj.t) - 1:
        idx.append(len(traj.t) - 1)
    buf = io.StringIO()
    buf.write("t,p_bar\n")
    for i in idx:
        buf.write(f"{fmt(traj.t[i])},{fmt(traj.p_bar[i])}\n")
    if traj.converged_to is not None:
        buf.write(f"# converged_to={fmt(traj.converged_to)}\n")
    return buf.getvalue()


# -- plumbing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of 'key = value' lines; flags override it")
    for name in ("alpha", "beta", "gamma", "sigma"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--phase-a", type=float, default=0.0)
    common.add_argument("--phase-b", type=float, default=0.0)
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--format", choices=("csv", "text"))
    common.add_argument("--dt", type=float, default=dynamics.DT)
    common.add_argument("--t-max", type=float, default=dynamics.T_MAX)
    common.add_argument("--conv-tol", type=float, default=dynamics.CONV_TOL)
    common.add_argument("--epsilon", type=float, default=dynamics.EPSILON)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(
        prog="quess",
        description="Evolutionary stability of equilibria in the entangled identity/flip game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="classify equilibria at one |a|^2")
    p.add_argument("--a-sq", type=float)

    p = sub.add_parser("sweep", parents=[common], help="tabulate verdicts over a |a|^2 grid")
    p.add_argument("--a-sq-from", type=float, default=0.0)
    p.add_argument("--a-sq-to", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=101)

    p = sub.add_parser("simulate", parents=[common], help="integrate the replicator dynamic")
    p.add_argument("--a-sq", type=float)
    p.add_argument("--p0", type=float)
    p.add_argument("--stride", type=int, default=1)
    return parser


def parse_args(argv) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        # Re-parse with file values as defaults so explicit flags still win.
        config = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(config) - known)
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise InputError(f"missing required parameter(s): {flags}")


def emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from exc


def run(args) -> int:
    require(args, "alpha", "beta", "gamma", "sigma")
    game = validate_game(args.alpha, args.beta, args.gamma, args.sigma)

    if args.command == "sweep":
        rows = [sweep_row(game, a) for a in sweep_grid(args.a_sq_from, args.a_sq_to, args.steps)]
        emit(sweep_text(rows) if args.format == "text" else sweep_csv(game, rows), args.out)
        return 0

    require(args, "a_sq")
    state = make_initial_state(args.a_sq, args.phase_a, args.phase_b)

    if args.command == "analyze":
        checks, oracle_err = analyze(game, state, args)
        report = analyze_text(game, state, checks, oracle_err)
        sys.stdout.write(report)
        if args.out:
            emit(analyze_csv(checks) if args.format == "csv" else report, args.out)
        ok = all(c.agree for c in checks) and oracle_err <= ORACLE_TOL
        return 0 if ok else 2

    require(args, "p0")
    if not 0.0 <= args.p0 <= 1.0:
        raise InputError(f"--p0 must lie in [0, 1], got {args.p0}")
    traj = integrate(game, state, args.p0, dt=args.dt, t_max=args.t_max, conv_tol=args.conv_tol)
    if args.format == "text":
        conv = "not converged" if traj.converged_to is None else f"converged to {fmt(traj.converged_to)}"
        emit(f"t={fmt(traj.t[-1])} p_bar={fmt(traj.final)} ({conv})\n", args.out)
    else:
        emit(trajectory_csv(traj, args.stride), args.out)
    return 0


def main(argv=None) -> int:
    try:
        return run(parse_args(argv))
    except (GameValidationError, InputError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except IntegrationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
