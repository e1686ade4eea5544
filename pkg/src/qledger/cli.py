"""Command-line front end.

Three commands: ``run`` samples a built-in scenario and writes its
energy ledger, ``analyze`` does the same for a trajectory file, and
``verify`` runs the self-check suite.

Exit codes: 0 on success, 1 when a computation fails (tracking loss,
no eigensolver convergence, failed checks), 2 on usage errors and
malformed or unreadable input files.
"""

from __future__ import annotations

import argparse
import sys

from . import accounting, scenarios, trajio, verify
from .errors import InvalidSpec, QledgerError, TrajectoryFormatError

# CLI spelling -> ScenarioSpec.kind
SCENARIO_KEYS = {
    "zeeman": "zeeman",
    "rabi": "rabi",
    "se": "spontaneous_emission",
    "isothermal": "isothermal",
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qledger",
        description="Work / heat / coherence-energy accounting for "
                    "finite-dimensional quantum trajectories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run", help="sample a built-in scenario and write its energy ledger"
    )
    run.add_argument("scenario", choices=sorted(SCENARIO_KEYS))
    run.add_argument("--eg", type=float, default=0.0,
                     help="ground level energy (default 0)")
    run.add_argument("--ee", type=float, default=1.0,
                     help="excited level energy at t = 0 (default 1)")
    run.add_argument("--t-max", type=float, default=1.0,
                     help="duration of the run (default 1)")
    run.add_argument("--steps", type=int, default=1000,
                     help="number of uniform steps (default 1000)")
    run.add_argument("--omega", type=float,
                     help="drive angular frequency (rabi)")
    run.add_argument("--gamma", type=float,
                     help="decay rate (se)")
    run.add_argument("--temperature", type=float,
                     help="bath temperature (isothermal)")
    run.add_argument("--e-end", type=float,
                     help="excited level energy at t = t-max (isothermal)")
    run.add_argument("--shift", type=float,
                     help="total shift of the excited level (zeeman)")
    run.add_argument("--b-field", type=float,
                     help="field amplitude; multiplied by --shift-coefficient (zeeman)")
    run.add_argument("--shift-coefficient", type=float,
                     help="energy shift per unit field (zeeman)")
    run.add_argument("--out", required=True, help="ledger CSV output path")
    run.add_argument("--emit-trajectory", metavar="PATH",
                     help="also write the sampled trajectory as JSON")
    run.set_defaults(handler=_cmd_run)

    analyze = sub.add_parser(
        "analyze", help="compute the energy ledger of a trajectory file"
    )
    analyze.add_argument("trajectory", help="trajectory JSON path")
    analyze.add_argument("--out", help="ledger CSV output path")
    analyze.set_defaults(handler=_cmd_analyze)

    check = sub.add_parser("verify", help="run the built-in self-check suite")
    check.set_defaults(handler=_cmd_verify)
    return parser


def _print_summary(ledger) -> None:
    du = float(ledger.energy[-1] - ledger.energy[0])
    print(f"samples            {len(ledger)} over t in [{ledger.t[0]:g}, {ledger.t[-1]:g}]")
    print(f"U(end) - U(start)  {du:+.9e}")
    print(f"work               {float(ledger.work[-1]):+.9e}")
    print(f"heat               {float(ledger.heat[-1]):+.9e}")
    print(f"coherence energy   {float(ledger.coherence[-1]):+.9e}")
    print(f"max closure defect {ledger.max_closure_defect:.3e} "
          f"(tolerance {ledger.closure_tolerance:.3e})")


def _cmd_run(args) -> int:
    spec = scenarios.ScenarioSpec(
        kind=SCENARIO_KEYS[args.scenario],
        e_ground=args.eg,
        e_excited=args.ee,
        t_max=args.t_max,
        steps=args.steps,
        omega=args.omega,
        gamma=args.gamma,
        temperature=args.temperature,
        e_final=args.e_end,
        shift=args.shift,
        b_field=args.b_field,
        shift_coefficient=args.shift_coefficient,
    )
    traj = scenarios.build_trajectory(spec)
    ledger = accounting.analyze(traj)
    trajio.write_ledger(ledger, args.out)
    print(f"scenario           {args.scenario}")
    _print_summary(ledger)
    print(f"wrote {args.out}")
    if args.emit_trajectory:
        trajio.write_trajectory(traj, args.emit_trajectory)
        print(f"wrote {args.emit_trajectory}")
    return 0


def _cmd_analyze(args) -> int:
    traj = trajio.read_trajectory(args.trajectory)
    ledger = accounting.analyze(traj)
    if args.out:
        trajio.write_ledger(ledger, args.out)
    print(f"trajectory         {args.trajectory} ({traj.dim} levels)")
    _print_summary(ledger)
    if args.out:
        print(f"wrote {args.out}")
    return 0


def _cmd_verify(args) -> int:
    results = verify.run_all()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<{width}}  {r.detail}")
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (InvalidSpec, TrajectoryFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QledgerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
