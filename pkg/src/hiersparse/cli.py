"""Command-line entry point.

Subcommands: gen-dataset, run-delay-est, run-nmse-1d, run-nmse-3d,
predict-complexity. Exit codes: 0 success, 2 config error, 3 budget
refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__, experiments
from .errors import BudgetExceeded, ConfigError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def _load_config(args) -> experiments.ExperimentConfig:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if args.seed is not None:
        raw["master_seed"] = args.seed
    if args.budget is not None:
        raw["budget"] = args.budget
    return experiments.config_from_dict(raw)


def _write_manifest(path: str, cfg, wall_time: float) -> None:
    manifest = {
        "config": experiments.config_to_dict(cfg),
        "version": __version__,
        "wall_time_s": wall_time,
    }
    with open(path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _cmd_gen_dataset(args) -> int:
    cfg = _load_config(args)
    start = time.perf_counter()
    count = experiments.gen_dataset(cfg, args.out)
    _write_manifest(args.out, cfg, time.perf_counter() - start)
    print(f"wrote {count} records to {args.out}")
    return EXIT_OK


def _run_scenario(args, runner, scenario) -> int:
    cfg = _load_config(args)
    if cfg.scenario is not scenario:
        raise ConfigError(
            f"config scenario {cfg.scenario.value!r} does not match the subcommand"
        )
    start = time.perf_counter()
    rows = runner(cfg)
    experiments.write_csv(rows, args.out)
    _write_manifest(args.out, cfg, time.perf_counter() - start)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    cfg = _load_config(args)
    report = []
    for point in cfg.sweep:
        report.append(
            {
                "method": point.method,
                "S_or_A": point.s_or_a,
                "sel_mults_per_selection": experiments.predicted_point_mults(cfg, point),
                "correlations_per_selection": experiments.predicted_point_correlations(
                    cfg, point
                ),
            }
        )
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hiersparse",
        description="Hierarchical atom-selection experiments for sparse recovery",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_out=True):
        p.add_argument("--config", required=True, help="JSON experiment config")
        p.add_argument("--seed", type=int, default=None, help="override master_seed")
        p.add_argument(
            "--budget", type=int, default=None, help="max selection mults per invocation"
        )
        if needs_out:
            p.add_argument("--out", required=True, help="output path")

    p = sub.add_parser("gen-dataset", help="write a JSON-lines channel dataset")
    add_common(p)
    p.set_defaults(func=_cmd_gen_dataset)

    for name, runner, scenario in (
        ("run-delay-est", experiments.run_delay_estimation, experiments.Scenario.DELAY_1D),
        ("run-nmse-1d", experiments.run_nmse_1d, experiments.Scenario.NMSE_1D),
        ("run-nmse-3d", experiments.run_nmse_3d, experiments.Scenario.NMSE_3D),
    ):
        p = sub.add_parser(name, help=f"run the {scenario.value} experiment to CSV")
        add_common(p)
        p.set_defaults(func=lambda a, r=runner, s=scenario: _run_scenario(a, r, s))

    p = sub.add_parser("predict-complexity", help="Table-style predicted costs")
    add_common(p, needs_out=False)
    p.add_argument("--out", default=None, help="optional output path (stdout default)")
    p.set_defaults(func=_cmd_predict)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
