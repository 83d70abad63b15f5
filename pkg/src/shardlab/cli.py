"""Command-line front end.

    shardlab game run <config-or-preset> [--out DIR] [--seed N]
    shardlab game batch <config-or-preset> --seeds a..b [--out DIR]
    shardlab protocol run <scenario-file> [--out DIR]
    shardlab verify <suite>
    shardlab report plot <trace-or-summary.csv> [--out FILE]

Output defaults to ./runs/<name>; set SHARDLAB_OUT to move the root.
Config errors exit with status 2 and a line-numbered message.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .configio import ConfigError
from .experiments import (
    GAME_PRESETS,
    load_game_experiment,
    load_protocol_scenario,
    output_root,
    run_game_batch,
    run_game_experiment,
    run_protocol_experiment,
)
from .plotting import line_chart
from .verify import run_suite, suite_names


def _parse_seed_range(text: str) -> list[int]:
    if ".." in text:
        first, _, last = text.partition("..")
        lo, hi = int(first), int(last)
        if hi < lo:
            raise ValueError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(text)]


def _default_out(name: str) -> Path:
    return Path(output_root()) / name


def _cmd_game_run(args) -> int:
    experiment = load_game_experiment(args.config)
    out = Path(args.out) if args.out else _default_out(experiment.name)
    artifacts = run_game_experiment(experiment, out, seed=args.seed)
    for path in artifacts:
        print(path)
    return 0


def _cmd_game_batch(args) -> int:
    experiment = load_game_experiment(args.config)
    seeds = _parse_seed_range(args.seeds)
    out = Path(args.out) if args.out else _default_out(experiment.name)
    for path in run_game_batch(experiment, out, seeds):
        print(path)
    return 0


def _cmd_protocol_run(args) -> int:
    scenario, _output = load_protocol_scenario(args.scenario)
    out = Path(args.out) if args.out else _default_out(Path(args.scenario).stem)
    result, artifacts = run_protocol_experiment(scenario, out)
    for path in artifacts:
        print(path)
    certified = len(result.certified)
    print(
        f"blocks={len(result.blocks)} certified={certified} "
        f"fraud={len(result.fraud_proven)} disputes={len(result.disputes)}"
    )
    return 0


def _cmd_verify(args) -> int:
    return 0 if run_suite(args.suite) else 1


def _read_csv_columns(path: Path) -> tuple[list[str], list[list[float]]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].split(",")
    columns = [[] for _ in header]
    for line in lines[1:]:
        for col, cell in zip(columns, line.split(",")):
            col.append(float(cell))
    return header, columns


def _cmd_report_plot(args) -> int:
    """Plot worst-shard fraction over time from a trace or summary CSV."""
    src = Path(args.csv)
    header, columns = _read_csv_columns(src)
    if header == ["t", "psi", "distance"]:
        ts, psi = columns[0], columns[1]
    elif header == ["t", "shard", "gamma", "beta", "r", "rbar"]:
        worst: dict[float, float] = {}
        for t, rbar in zip(columns[0], columns[5]):
            worst[t] = min(worst.get(t, 1.0), rbar)
        ts = sorted(worst)
        psi = [worst[t] for t in ts]
    else:
        raise ValueError(f"{src}: unrecognized header {','.join(header)!r}")
    out = Path(args.out) if args.out else src.with_suffix(".svg")
    line_chart({src.stem: (ts, psi)}, out, title=src.stem, ylabel="worst-shard average")
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shardlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    game = sub.add_parser("game", help="allocation-game experiments")
    game_sub = game.add_subparsers(dest="game_command", required=True)

    presets = ", ".join(sorted(GAME_PRESETS))
    run_p = game_sub.add_parser("run", help="run one game experiment")
    run_p.add_argument("config", help=f"config file or preset ({presets})")
    run_p.add_argument("--out", help="output directory")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.set_defaults(func=_cmd_game_run)

    batch_p = game_sub.add_parser("batch", help="rerun an experiment across seeds")
    batch_p.add_argument("config", help=f"config file or preset ({presets})")
    batch_p.add_argument("--seeds", required=True, help="inclusive range a..b or one seed")
    batch_p.add_argument("--out", help="output directory")
    batch_p.set_defaults(func=_cmd_game_batch)

    protocol = sub.add_parser("protocol", help="protocol world simulation")
    protocol_sub = protocol.add_subparsers(dest="protocol_command", required=True)
    prun = protocol_sub.add_parser("run", help="run a scenario file")
    prun.add_argument("scenario", help="scenario config file")
    prun.add_argument("--out", help="output directory")
    prun.set_defaults(func=_cmd_protocol_run)

    verify_p = sub.add_parser("verify", help="run a verification suite")
    verify_p.add_argument("suite", choices=suite_names(), metavar="suite",
                          help=", ".join(suite_names()))
    verify_p.set_defaults(func=_cmd_verify)

    report = sub.add_parser("report", help="artifact post-processing")
    report_sub = report.add_subparsers(dest="report_command", required=True)
    plot_p = report_sub.add_parser("plot", help="render an SVG from a CSV")
    plot_p.add_argument("csv", help="trace or summary CSV")
    plot_p.add_argument("--out", help="output SVG path")
    plot_p.set_defaults(func=_cmd_report_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
