"""Command-line entry point: ``landalloc <subcommand> ...``.

Exit codes: 0 on success, 1 on validation errors, 2 on coverage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .engines import EngineConfig, run
from .errors import ContractError, CoverageError, ValidationError
from .harness import ExperimentPlan, compare, run_experiment, tune_config, write_table_csv
from .instance import GeneratorParams, generate_instance, load_instance, save_instance
from .objectives import TEL_MODES
from .operators import CROSSOVER_KINDS, INIT_KINDS, MUTATION_KINDS, REPAIR_KINDS, OperatorConfig
from .records import RunRecord

log = logging.getLogger("landalloc")


def _add_engine_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--engine", choices=("NSGA-II", "MOEA/D"), default="MOEA/D")
    p.add_argument("--init", choices=INIT_KINDS, default="SP-I")
    p.add_argument("--crossover", choices=CROSSOVER_KINDS, default="DRC")
    p.add_argument("--mutation", choices=MUTATION_KINDS, default="MutC")
    p.add_argument("--repair", choices=REPAIR_KINDS, default="RRM")
    p.add_argument("--pop", type=int, default=100)
    p.add_argument("--p-cross", type=float, default=0.5)
    p.add_argument("--p-mut", type=float, default=0.5)
    p.add_argument("--budget", type=int, default=100_000, help="FFE budget")
    p.add_argument("--neighborhood", type=int, default=None, help="MOEA/D neighbourhood size")
    p.add_argument("--tel-mode", choices=TEL_MODES, default="boundary")
    p.add_argument("--drc-bridge-fixed-urban", action="store_true")


def _engine_config(args, seed: int = 0) -> EngineConfig:
    ops = OperatorConfig(
        crossover=args.crossover,
        mutation=args.mutation,
        repair=args.repair,
        init=args.init,
        p_cross=args.p_cross,
        p_mut=args.p_mut,
        drc_bridge_fixed_urban=args.drc_bridge_fixed_urban,
    )
    return EngineConfig(
        engine=args.engine,
        pop_size=args.pop,
        ffe_budget=args.budget,
        operators=ops,
        moead_neighborhood=args.neighborhood,
        seed=seed,
        tel_mode=args.tel_mode,
    )


def cmd_generate(args) -> int:
    params = GeneratorParams(
        budget_fraction=args.budget_fraction,
        n_categories=args.categories,
        fixed_patches=not args.no_fixed_patches,
    )
    inst = generate_instance(args.seed, args.rows, args.cols, params)
    save_instance(inst, args.out)
    print(f"{args.out}: {inst.rows}x{inst.cols}, n={inst.n_vars}, T={inst.budget}, U={inst.urban_target}")
    return 0


def cmd_run(args) -> int:
    inst = load_instance(args.instance)
    rec = run(inst, _engine_config(args, args.seed))
    rec.save(args.out)
    print(f"{args.out}: {len(rec.front)} front points, {rec.ffe_used} FFE")
    return 0


def cmd_tune(args) -> int:
    instances = [load_instance(p) for p in args.instances]
    base = _engine_config(args)
    tuned, report = tune_config(
        instances, base, n_seeds=args.seeds, master_seed=args.master_seed, iterations=args.iterations,
        start_pop=args.pop,
    )
    Path(args.out).write_text(
        json.dumps({"config": tuned.to_dict(), "report": report}, indent=1, sort_keys=True) + "\n"
    )
    print(f"{args.out}: pop={tuned.pop_size} p_cross={tuned.p_cross} p_mut={tuned.p_mut}")
    return 0


def cmd_experiment(args) -> int:
    plan = ExperimentPlan.from_file(args.plan, out=args.out)
    manifest = run_experiment(plan, workers=args.workers)
    failed = [c for c in manifest["cells"] if c["status"] != "ok"]
    print(f"{plan.out}: {len(manifest['cells']) - len(failed)} runs ok, {len(failed)} failed")
    return 2 if failed else 0


def cmd_compare(args) -> int:
    from .harness import load_archive

    report = compare(load_archive(args.archive))
    out = Path(args.out)
    out.write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    if args.csv:
        write_table_csv(report, args.csv)
    if args.figures:
        from .plotting import render_comparison

        render_comparison(report, args.figures)
    w = max(len(r["optimizer"]) for r in report["table"])
    for row in report["table"]:
        print(f"{row['optimizer']:<{w}}  joined={row['joined_rank']:.2f}  "
              f"igd_avg={row['igd_average']:.2f}  hv_avg={row['hv_average']:.2f}")
    return 0


def cmd_front_dump(args) -> int:
    rec = RunRecord.load(args.record)
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["lap", "tel"])
        for p in rec.front:
            writer.writerow([repr(p["lap"]), repr(p["tel"])])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="landalloc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="synthesize an instance file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rows", type=int, default=30)
    p.add_argument("--cols", type=int, default=30)
    p.add_argument("--budget-fraction", type=float, default=0.1)
    p.add_argument("--categories", type=int, default=5)
    p.add_argument("--no-fixed-patches", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("run", help="single optimizer run")
    p.add_argument("--instance", required=True)
    _add_engine_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("tune", help="tune population size and probabilities")
    p.add_argument("--instances", nargs="+", required=True)
    _add_engine_args(p)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--master-seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("experiment", help="run a plan file")
    p.add_argument("--plan", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="output directory (default: from plan)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("compare", help="compare optimizers in an experiment directory")
    p.add_argument("--archive", required=True)
    p.add_argument("--out", required=True, help="report JSON path")
    p.add_argument("--csv", default=None, help="also write the ranking table as CSV")
    p.add_argument("--figures", default=None, help="directory for normalized HV/IGD bar charts")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("front-dump", help="write a run's front as lap,tel CSV")
    p.add_argument("--record", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_front_dump)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValidationError, ContractError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CoverageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
