"""Command-line interface: synthesis, inversion, generation, verification.

Exit codes: 0 = success/pass, 1 = verification failure, 2 = input or usage
error.  All randomness is seeded through flags, so every subcommand is a
pure function of its inputs.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import sim
from .circuit import (
    STAGES,
    depth,
    depth_by_stage,
    parse_circuit,
    serialize_circuit,
    synthesize,
    synthesize_from_inverse,
    two_qubit_gate_count,
)
from .tableau import (
    invert,
    parse_tableau,
    random_clifford,
    serialize_gates,
    serialize_tableau,
    tableau_weight,
)

BRANCHES_MAX_N = 6
SAMPLE_MAX_N = 12


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the verification-style subcommands."""

    subcommand: str
    n: int = 1
    seed: int = 0
    trials: int = 20
    tolerance: float = 1e-10
    mode: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be > 0, got {self.tolerance}")


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _print_report(pairs):
    for key, value in pairs:
        if isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key} {value}")


def _stats_pairs(c) -> list:
    per_stage = depth_by_stage(c)
    pairs = [
        ("n", c.n_data),
        ("two_qubit_cpn", two_qubit_gate_count(c, "CPn")),
        ("two_qubit_cp1", two_qubit_gate_count(c, "CP1")),
        ("tableau_weight_of_payloads",
         sum(two_qubit_gate_count(c, s) for s in ("CPn",))),
        ("depth_total", depth(c)),
    ]
    pairs.extend((f"depth_per_stage.{s}", per_stage[s]) for s in STAGES)
    pairs.append(("ancilla_count", c.n_ancilla))
    return pairs


def cmd_synth(args) -> int:
    t = parse_tableau(_read(args.tableau))
    c = synthesize_from_inverse(t) if args.from_inverse else synthesize(t)
    _write(args.out, serialize_circuit(c))
    _print_report(_stats_pairs(c))
    return 0


def cmd_invert(args) -> int:
    t = parse_tableau(_read(args.tableau))
    _write(args.out, serialize_tableau(invert(t)))
    return 0


def cmd_random(args) -> int:
    config = RunConfig("random", n=args.n, seed=args.seed)
    t, gates = random_clifford(config.n, config.seed)
    _write(args.out, serialize_tableau(t))
    if args.gates:
        _write(args.gates, serialize_gates(gates))
    return 0


def _verify_branches(t, c, config: RunConfig):
    if c.n_data > BRANCHES_MAX_N:
        raise ValueError(
            f"branches mode is limited to n <= {BRANCHES_MAX_N}, got {c.n_data}")
    rng = np.random.default_rng(config.seed)
    u_mat = sim.tableau_unitary(t)
    checked = 0
    max_infidelity = 0.0
    for _ in range(config.trials):
        psi = sim.random_state(c.n_data, rng)
        expected = u_mat @ psi
        for _, _, state in sim.run_all_branches(c, psi):
            if state is None:
                continue
            checked += 1
            max_infidelity = max(max_infidelity,
                                 float(1.0 - abs(np.vdot(state, expected))))
    return checked, max_infidelity, max_infidelity <= config.tolerance


def _verify_sample(t, c, config: RunConfig):
    if c.n_data > SAMPLE_MAX_N:
        raise ValueError(
            f"sample mode is limited to n <= {SAMPLE_MAX_N}, got {c.n_data}")
    rng = np.random.default_rng(config.seed)
    checked = 0
    max_infidelity = 0.0
    for _ in range(config.trials):
        psi = sim.random_state(c.n_data, rng)
        expected = sim.tableau_apply(t, psi)
        _, state = sim.sample_run(c, psi, rng)
        checked += 1
        max_infidelity = max(max_infidelity,
                             float(1.0 - abs(np.vdot(state, expected))))
    return checked, max_infidelity, max_infidelity <= config.tolerance


def _verify_stabilizer(t, c, config: RunConfig):
    rng = np.random.default_rng(config.seed)
    expected = [t.z_row(i) for i in range(1, t.n + 1)]
    ok = True
    for _ in range(config.trials):
        gens = sim.stabilizer_run(c, rng)
        ok = ok and sim.groups_match(gens, expected)
    return config.trials, 0.0, ok


def cmd_verify(args) -> int:
    config = RunConfig("verify", seed=args.seed, trials=args.trials,
                       tolerance=args.tol, mode=args.mode)
    t = parse_tableau(_read(args.tableau))
    c = parse_circuit(_read(args.circuit)) if args.circuit else synthesize(t)
    if c.n_data != t.n:
        raise ValueError(
            f"circuit acts on {c.n_data} qubits but tableau has {t.n}")
    runner = {"branches": _verify_branches, "sample": _verify_sample,
              "stabilizer": _verify_stabilizer}[config.mode]
    checked, max_infidelity, passed = runner(t, c, config)
    _print_report([
        ("mode", config.mode),
        ("n", t.n),
        ("trials", config.trials),
        ("branches_checked", checked),
        ("max_infidelity", f"{max_infidelity:.3e}"),
        ("max_trace_distance", f"{0.0:.3e}"),
        ("pass", passed),
    ])
    return 0 if passed else 1


def cmd_stats(args) -> int:
    c = parse_circuit(_read(args.circuit))
    _print_report(_stats_pairs(c))
    return 0


def cmd_filter_check(args) -> int:
    config = RunConfig("filter-check", seed=args.seed, trials=args.trials,
                       tolerance=args.tol)
    if not 1 <= args.kraus <= 4:
        raise ValueError(f"--kraus must be in 1..4, got {args.kraus}")
    if args.states < 1:
        raise ValueError(f"--states must be >= 1, got {args.states}")
    rng = np.random.default_rng(config.seed)
    worst = 0.0
    passed = True
    for _ in range(config.trials):
        ch = sim.random_channel(args.kraus, rng)
        report = sim.filter_identity_check(ch, tol=config.tolerance,
                                           num_states=args.states, seed=rng)
        worst = max(worst, float(report.max_trace_distance))
        passed = passed and report.passed
    _print_report([
        ("mode", "filter-check"),
        ("n", 1),
        ("trials", config.trials),
        ("branches_checked", config.trials * args.states),
        ("max_infidelity", f"{0.0:.3e}"),
        ("max_trace_distance", f"{worst:.3e}"),
        ("pass", passed),
    ])
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcsynth",
        description="Synthesize and verify Clifford circuits built from "
                    "ancilla measurements.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="compile a tableau into a circuit file")
    p.add_argument("--tableau", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--from-inverse", action="store_true",
                   help="treat the input tableau as already inverted")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("invert", help="write the inverse tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("random", help="generate a pseudo-random tableau")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--gates", help="also write the generating gate list")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("verify", help="check a circuit against its tableau")
    p.add_argument("--tableau", required=True)
    p.add_argument("--circuit", help="circuit file (default: fresh synthesis)")
    p.add_argument("--mode", required=True,
                   choices=("branches", "sample", "stabilizer"))
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="print circuit resource metrics")
    p.add_argument("--circuit", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("filter-check", help="verify the measurement filter "
                                            "on random channels")
    p.add_argument("--kraus", type=int, default=4,
                   help="Kraus elements per random channel (1..4)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--states", type=int, default=20,
                   help="random input states per channel")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_filter_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
