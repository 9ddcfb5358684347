"""Command-line front end.

Subcommands: simulate one GEMM, sweep a model over a range of m across
architectures, compare two architectures head to head, and validate the
analytical model against the register-accurate microsim. Errors leave as
machine-readable JSON on stderr with distinct exit codes: 2 for bad
configuration or requests, 3 for workloads that cannot be staged, 4 for
validation failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import microsim
from .baselines import ArchModel, simulate_arch
from .config import RunSetup, load_config
from .errors import CapacityError, ConfigError
from .geometry import select_mode
from .perfmodel import result_to_json_dict, simulate
from .scheduler import GemmShape, dump_schedule, plan_gemm
from .workloads import aggregate, expand, load_bundled_model, load_model

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAPACITY = 3
EXIT_VALIDATION = 4

CSV_HEADER = (
    "m,arch,mode,cycles,energy_j,edp_js,dram_rd,dram_wr,"
    "active_slab_cycles,gated_slab_cycles,speedup,norm_edp"
)


def _parse_gemm(text: str) -> GemmShape:
    parts = text.lower().split("x")
    if len(parts) != 3:
        raise ConfigError(f"--gemm expects MxNxK, got {text!r}")
    try:
        m, n, k = (int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"--gemm expects three integers, got {text!r}")
    return GemmShape(m, n, k)


def _parse_m_values(args) -> list[int]:
    if args.m_range and args.m_list:
        raise ConfigError("sweep takes --m-range or --m-list, not both")
    if args.m_range:
        bits = args.m_range.split(":")
        if len(bits) not in (2, 3):
            raise ConfigError(f"--m-range expects START:STOP[:STEP], got {args.m_range!r}")
        try:
            nums = [int(b) for b in bits]
        except ValueError:
            raise ConfigError(f"--m-range expects integers, got {args.m_range!r}")
        start, stop = nums[0], nums[1]
        step = nums[2] if len(nums) == 3 else 1
        if step < 1 or stop < start or start < 1:
            raise ConfigError(f"--m-range must be ascending from >= 1, got {args.m_range!r}")
        return list(range(start, stop + 1, step))
    if args.m_list:
        try:
            values = [int(v) for v in args.m_list.split(",")]
        except ValueError:
            raise ConfigError(f"--m-list expects comma-separated integers, got {args.m_list!r}")
        if not values or any(v < 1 for v in values) or values != sorted(values):
            raise ConfigError("--m-list must be ascending positive integers")
        return values
    raise ConfigError("sweep needs --m-range or --m-list")


def _resolve_model(name_or_path: str):
    p = Path(name_or_path)
    if p.suffix in (".yaml", ".yml") or p.exists():
        return load_model(p)
    return load_bundled_model(name_or_path)


def _arch_for(setup: RunSetup, name: str, power_gating: bool) -> ArchModel:
    model = setup.arch(name)
    if model.variant == "sisa" and not power_gating:
        model = dataclasses.replace(model, power_gating=False)
    return model


def _regime_label(m: int, setup: RunSetup) -> str:
    g = setup.geometry
    if m <= g.rows:
        return select_mode(m, g).label()
    residual = m % g.rows
    if residual == 0:
        return "monolithic"
    return f"monolithic+res({select_mode(residual, g).label()})"


def _sweep_mode_label(arch_name: str, m: int, setup: RunSetup, runs) -> str:
    if arch_name == "sisa":
        return _regime_label(m, setup)
    if arch_name == "tpu":
        return "monolithic"
    shapes = {run.chosen_shape for run in runs}
    if len(shapes) == 1:
        h, w = shapes.pop()
        return f"{h}x{w}"
    return "mixed"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_simulate(args) -> int:
    setup = load_config(args.config)
    shape = _parse_gemm(args.gemm)
    model = _arch_for(setup, args.arch, not args.no_gating)
    run = simulate_arch(
        model, shape, setup.geometry, setup.memory, setup.fmt, drain_overlap=args.drain_overlap
    )
    doc = {
        "arch": run.arch,
        "gemm": {"m": shape.m, "n": shape.n, "k": shape.k},
        **result_to_json_dict(run.result),
        "static_j": run.energy.static_j,
        "dynamic_j": run.energy.dynamic_j,
        "delay_s": run.energy.delay_s,
    }
    if run.chosen_shape:
        doc["chosen_shape"] = f"{run.chosen_shape[0]}x{run.chosen_shape[1]}"
    if args.dump_schedule:
        if model.variant != "sisa":
            raise ConfigError("--dump-schedule is only meaningful for --arch sisa")
        doc["schedule"] = dump_schedule(
            plan_gemm(shape, setup.geometry, setup.memory, setup.fmt, model.power_gating)
        ).splitlines()
    _emit(json.dumps(doc, indent=2), args.out)
    return EXIT_OK


def _sweep_point(setup, model, descriptor, m, drain_overlap):
    runs = [
        simulate_arch(model, shape, setup.geometry, setup.memory, setup.fmt, drain_overlap)
        for shape, _ in expand(descriptor, m)
    ]
    weights = [w for _, w in expand(descriptor, m)]
    point = aggregate(
        [(r.result, r.energy, w) for r, w in zip(runs, weights)], m=m
    )
    return point, runs


def cmd_sweep(args) -> int:
    setup = load_config(args.config)
    descriptor = _resolve_model(args.model)
    arch_names = [a.strip() for a in args.archs.split(",") if a.strip()]
    if not arch_names:
        raise ConfigError("--archs needs at least one architecture")
    m_values = _parse_m_values(args)
    lines = [CSV_HEADER]
    for m in m_values:
        points = {}
        run_lists = {}
        for name in arch_names:
            model = _arch_for(setup, name, not args.no_gating)
            points[name], run_lists[name] = _sweep_point(
                setup, model, descriptor, m, args.drain_overlap
            )
        ref = points[arch_names[0]]
        for name in arch_names:
            p = points[name]
            lines.append(
                f"{m},{name},{_sweep_mode_label(name, m, setup, run_lists[name])},"
                f"{p.cycles},{p.energy_j:.9e},{p.edp_js:.9e},"
                f"{p.counters.dram_read_bytes},{p.counters.dram_write_bytes},"
                f"{p.active_slab_cycles},{p.gated_slab_cycles},"
                f"{ref.cycles / p.cycles:.6f},{p.edp_js / ref.edp_js:.6f}"
            )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    setup = load_config(args.config)
    model_a = _arch_for(setup, args.arch_a, not args.no_gating)
    model_b = _arch_for(setup, args.arch_b, not args.no_gating)

    def one(model):
        if args.gemm:
            shape = _parse_gemm(args.gemm)
            run = simulate_arch(
                model, shape, setup.geometry, setup.memory, setup.fmt, args.drain_overlap
            )
            return run.result, result_to_json_dict(run.result)
        descriptor = _resolve_model(args.model)
        point, _ = _sweep_point(setup, model, descriptor, args.m, args.drain_overlap)
        return point, {
            "cycles": point.cycles,
            "energy_j": point.energy_j,
            "edp": point.edp_js,
            "macs": point.macs,
        }

    if bool(args.gemm) == bool(args.model):
        raise ConfigError("compare needs exactly one of --gemm or --model")
    if args.model and not args.m:
        raise ConfigError("compare --model needs --m")
    a, a_doc = one(model_a)
    b, b_doc = one(model_b)
    doc = {
        "a": {"arch": args.arch_a, **a_doc},
        "b": {"arch": args.arch_b, **b_doc},
        "speedup": b.cycles / a.cycles,
        "edp_ratio": a.edp_js / b.edp_js,
    }
    _emit(json.dumps(doc, indent=2), args.out)
    return EXIT_OK


def _validate_microsim() -> dict:
    cases = []
    for grid_h in (2, 4, 8, 16):
        for grid_w in (2, 4, 8, 16):
            for r in range(1, grid_h + 1):
                for c in range(1, grid_w + 1):
                    for k in (1, 3, 17):
                        cases.append((r, k, c, grid_h))
    records = microsim.oracle_sweep(cases)
    failures = [
        rec for rec in records
        if not (rec["exact_match"] and rec["correct_result"]
                and rec["macs"] == rec["macs_expected"])
    ]
    report = {
        "cases": len(records),
        "vacuous": len(records) == 0,
        "failures": len(failures),
        "pass": not failures and len(records) > 0,
    }
    if failures:
        report["first_counterexample"] = {
            k: v for k, v in failures[0].items() if k != "macs"
        }
    return report


def _validate_mutation() -> dict:
    # a deliberately wrong formula must be flagged, proving the sweep can fail
    off_by_one = lambda r, d, c, h: microsim.predicted_cycles(r, d, c, h) + 1
    records = microsim.oracle_sweep([(4, 8, 4, 8), (2, 5, 3, 4)], expected_cycles_fn=off_by_one)
    detected = all(not rec["exact_match"] for rec in records)
    return {"cases": len(records), "detected": detected, "pass": detected}


def _validate_scheduler(setup: RunSetup) -> dict:
    import random

    from .geometry import ArrayGeometry

    rng = random.Random(2024)
    geometries = [setup.geometry, ArrayGeometry(rows=4, cols=4, slab_height=2, num_slabs=2)]
    checked = 0
    for _ in range(150):
        m, n, k = (int(2 ** rng.uniform(0, 10)) for _ in range(3))
        shape = GemmShape(m, n, k)
        for g in geometries:
            schedule = plan_gemm(shape, g, setup.memory, setup.fmt)
            vol = 0
            seen_rows = set()
            for phase in schedule.phases:
                seen_rows.add((phase.m_off, phase.m_len))
                for rnd in phase.rounds:
                    for t in rnd:
                        vol += t.row_len * t.col_len * t.k_len
            if vol != shape.macs:
                return {
                    "shapes": checked, "pass": False,
                    "first_counterexample": {"shape": (m, n, k), "geometry": g.rows},
                }
            checked += 1
    return {"shapes": checked, "pass": True}


def cmd_validate(args) -> int:
    setup = load_config(args.config)
    report = {
        "microsim": _validate_microsim(),
        "mutation_check": _validate_mutation(),
        "scheduler": _validate_scheduler(setup),
    }
    report["pass"] = all(section["pass"] for section in report.values() if isinstance(section, dict))
    _emit(json.dumps(report, indent=2), args.out)
    return EXIT_OK if report["pass"] else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slabsim",
        description="Cycle and energy model for slab-partitioned systolic arrays",
    )
    parser.add_argument("--config", help="architecture config YAML (default: "
                        "$SLABSIM_CONFIG, then the packaged default)")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--no-gating", action="store_true", help="disable slab power gating")
    common.add_argument("--drain-overlap", action="store_true",
                        help="let drain overlap the next round (experiment knob)")

    p_sim = sub.add_parser("simulate", parents=[common], help="simulate one GEMM")
    p_sim.add_argument("--gemm", required=True, help="shape as MxNxK, e.g. 12x8192x3072")
    p_sim.add_argument("--arch", default="sisa", help="sisa | tpu | redas")
    p_sim.add_argument("--dump-schedule", action="store_true",
                       help="include the tile-by-tile schedule in the report")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="sweep a model descriptor over m across architectures")
    p_sweep.add_argument("--model", required=True,
                         help="bundled model name or descriptor path")
    p_sweep.add_argument("--m-range", help="START:STOP[:STEP], inclusive")
    p_sweep.add_argument("--m-list", help="comma-separated ascending m values")
    p_sweep.add_argument("--archs", default="sisa,tpu",
                         help="comma-separated, first is the reference")
    p_sweep.add_argument("--format", choices=["csv"], default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="two architectures head to head")
    p_cmp.add_argument("--arch-a", default="sisa")
    p_cmp.add_argument("--arch-b", default="tpu")
    p_cmp.add_argument("--gemm", help="shape as MxNxK")
    p_cmp.add_argument("--model", help="bundled model name or descriptor path")
    p_cmp.add_argument("--m", type=int, help="row extent for --model")
    p_cmp.set_defaults(func=cmd_compare)

    p_val = sub.add_parser("validate", parents=[common],
                           help="check the analytical model against the microsim")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        _error_out(e, "config")
        return EXIT_CONFIG
    except CapacityError as e:
        _error_out(e, "capacity")
        return EXIT_CAPACITY


def _error_out(exc: Exception, kind: str) -> None:
    json.dump(
        {"error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)}},
        sys.stderr,
    )
    sys.stderr.write("\n")


if __name__ == "__main__":
    sys.exit(main())
