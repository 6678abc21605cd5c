"""Command line interface.

Subcommands:

* ``run``            run an experiment from a preset or config file
* ``gen-sat``        generate a uniform random 3SAT instance (DIMACS CNF)
* ``gen-spin``       generate a random spin system (coupling triples)
* ``signals``        print analytic vs brute-force staircase signals
* ``hyperclimb``     run the reference decimation loop on a basic staircase
* ``refractal``      render the worked 16-bit staircase example as a grid CSV
* ``symmetry-test``  compare a staircase function against its basic form
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import harness, hyperclimb, problems, refractal, staircase
from .presets import PRESETS, get_preset
from .rng import RandomStream
from .uga import ClampingConfig, UgaConfig


_UNSET = object()  # distinguishes "--clamp not given" from "--clamp none"


def _parse_clamp(text: str) -> ClampingConfig | None:
    if text == "none":
        return None
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("clamp must be flag:unflag:wait:activation or 'none'")
    return ClampingConfig(float(parts[0]), float(parts[1]), int(parts[2]), int(parts[3]))


def _add_run(sub):
    p = sub.add_parser("run", help="run an experiment")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS), help="named preset")
    src.add_argument("--config", help="flat key-value config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--generations", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--clamp", type=_parse_clamp, default=_UNSET,
                   help="flag:unflag:wait:activation, or 'none' to disable")
    p.add_argument("--no-noise", action="store_true",
                   help="noiseless staircase evaluation")


def _cmd_run(args) -> int:
    cfg = get_preset(args.preset) if args.preset else harness.parse_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.generations is not None:
        overrides["generations"] = args.generations
    if args.out_dir is not None:
        overrides["out_dir"] = args.out_dir
    if args.clamp is not _UNSET:
        overrides["clamp"] = args.clamp
    if args.no_noise:
        overrides["noisy"] = False
    if overrides:
        cfg = replace(cfg, **overrides)
    trace = harness.run_experiment(cfg)
    final_avg, _ = harness.stats_aggregate(trace.avg_fitness)
    print(f"{cfg.name}: {cfg.trials} trials x {cfg.generations} generations")
    print(f"final mean average fitness: {final_avg[-1]!r}")
    print(f"wrote {cfg.out_dir}/{cfg.name}_trials.csv and {cfg.out_dir}/{cfg.name}_aggregate.csv")
    return 0


def _cmd_gen_sat(args) -> int:
    inst = problems.gen_uniform_3sat(args.n_vars, args.n_clauses, RandomStream(args.seed))
    problems.write_dimacs(inst, args.out)
    print(f"wrote {args.out}: {inst.n_vars} variables, {inst.n_clauses} clauses")
    return 0


def _cmd_gen_spin(args) -> int:
    sys_ = problems.gen_sk(args.spins, RandomStream(args.seed))
    problems.write_couplings(sys_, args.out)
    print(f"wrote {args.out}: {args.spins} spins, {args.spins * (args.spins - 1) // 2} couplings")
    return 0


def _cmd_signals(args) -> int:
    desc = staircase.make_basic(args.height, args.order, args.delta)
    print("stage  analytic_stage  analytic_step  analytic_cond  brute_stage  brute_step  brute_cond")
    for i in range(1, desc.height + 1):
        sig = staircase.analytic_signals(desc, i)
        stage_mean = staircase.brute_force_schema_mean(desc, staircase.stage_schema(desc, i))
        step_mean = staircase.brute_force_schema_mean(desc, staircase.step_schema(desc, i))
        prev_mean = staircase.brute_force_schema_mean(desc, staircase.stage_schema(desc, i - 1))
        print(
            f"{i:5d}  {sig.stage_signal:14.9f}  {sig.step_signal:13.9f}  "
            f"{sig.conditional_step_signal:13.9f}  {stage_mean:11.9f}  "
            f"{step_mean:10.9f}  {stage_mean - prev_mean:10.9f}"
        )
    return 0


def _cmd_hyperclimb(args) -> int:
    desc = staircase.make_basic(args.height, args.order, args.delta)
    f = staircase.StaircaseFunction(desc, noisy=not args.no_noise)
    trace = hyperclimb.run_hyperclimb(
        f, desc.span, args.max_order, args.samples, args.threshold,
        args.max_rounds, RandomStream(args.seed),
    )
    for i, r in enumerate(trace.rounds, start=1):
        loci = sorted(r.partition.loci)
        bits = [r.fixed.assignment[l] for l in loci]
        print(f"round {i}: loci {loci} fixed {bits} effect {r.effect_estimate:.6f} mean {r.mean_estimate:.6f}")
    if not trace.rounds:
        print("no partition cleared the effect threshold; empty trace")
    if args.out:
        hyperclimb.write_trace(trace, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_refractal(args) -> int:
    desc = refractal.appendix_example_descriptor(args.delta)
    addressing = refractal.aligned_addressing(desc, m=4)
    f = staircase.StaircaseFunction(desc, noisy=not args.no_noise)
    grid = refractal.render_grid(
        f, addressing, rng=RandomStream(args.seed), noisy=not args.no_noise
    )
    refractal.write_grid_csv(grid, args.out)
    print(f"wrote {args.out}: {grid.shape[0]}x{grid.shape[1]} grid, delta={args.delta}")
    return 0


def _cmd_symmetry(args) -> int:
    basic = staircase.make_basic(args.height, args.order, args.delta)
    embedded = staircase.random_embedding(
        args.height, args.order, args.delta, args.span, RandomStream(args.seed + 1)
    )
    cfg = UgaConfig(
        population_size=args.population,
        mutation_rate=args.mutation_rate,
        generations=args.generations,
        seed=args.seed,
    )
    report = harness.symmetry_test(basic, embedded, cfg, args.trials, seed=args.seed)
    for i, p in enumerate(report.p_values, start=1):
        print(f"stage {i}: KS p-value {p:.4f}")
    print("PASS" if report.passed else "FAIL",
          f"(all stages vs significance {report.significance})")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ugalab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run(sub)

    p = sub.add_parser("gen-sat", help="generate a uniform random 3SAT instance")
    p.add_argument("n_vars", type=int)
    p.add_argument("n_clauses", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("gen-spin", help="generate a random spin system")
    p.add_argument("spins", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("signals", help="analytic vs brute-force staircase signals")
    p.add_argument("--height", type=int, default=2)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--delta", type=float, default=1.0)

    p = sub.add_parser("hyperclimb", help="run the reference decimation loop")
    p.add_argument("--height", type=int, default=4)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--max-order", type=int, default=2)
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--max-rounds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-noise", action="store_true")
    p.add_argument("--out", default=None)

    p = sub.add_parser("refractal", help="render the 16-bit staircase example grid")
    p.add_argument("--delta", type=float, default=3.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-noise", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("symmetry-test", help="staircase vs basic form distribution check")
    p.add_argument("--height", type=int, default=6)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--delta", type=float, default=0.3)
    p.add_argument("--span", type=int, default=200)
    p.add_argument("--population", type=int, default=200)
    p.add_argument("--mutation-rate", type=float, default=0.003)
    p.add_argument("--generations", type=int, default=500)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)

    return parser


_COMMANDS = {
    "run": _cmd_run,
    "gen-sat": _cmd_gen_sat,
    "gen-spin": _cmd_gen_spin,
    "signals": _cmd_signals,
    "hyperclimb": _cmd_hyperclimb,
    "refractal": _cmd_refractal,
    "symmetry-test": _cmd_symmetry,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
