"""Experiment presets and artifact writers.

An experiment bundles one or more labeled game runs with an output plot
kind. Presets reproduce the three reference settings (large homogeneous,
small homogeneous, heterogeneous targets); arbitrary runs come from config
files parsed by :mod:`shardlab.configio`.

Artifact conventions, fixed so reruns are byte-identical for the same
config and seed:
  <label>_trace.csv    t,shard,gamma,beta,r,rbar      (full per-round record)
  <label>_summary.csv  t,psi,distance                 (worst shard + distance)
  <label>_batch.csv    seed,psi,distance              (endpoint per seed)
  resources.csv        category,dimension,bytes
  log.txt              ordered log dump
  psi_vs_t.svg / achieved_vs_target.svg
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .configio import load_game_config, load_scenario
from .game import GameConfig, GameTrace, run
from .plotting import achieved_vs_target_chart, line_chart
from .protocol.world import Scenario, WorldResult, run_world
from .resources import ResourceMeter

__all__ = [
    "GameExperiment",
    "GAME_PRESETS",
    "load_game_experiment",
    "run_game_experiment",
    "run_game_batch",
    "run_protocol_experiment",
    "write_trace_csv",
    "write_summary_csv",
    "write_resources_csv",
]


@dataclass
class GameExperiment:
    name: str
    runs: list[tuple[str, GameConfig]]
    plot: str = "psi"  # "psi" (line chart) | "bars" (achieved vs target) | "none"


def _homogeneous_large() -> GameExperiment:
    base = dict(
        num_shards=100,
        rounds=5000,
        gamma=0.5,
        beta=0.5,
        mode="stochastic",
        adversary="cascade",
        num_nodes=1000,
        seed=0,
    )
    prop = GameConfig(policy="deficit_proportional", **base)
    # focus = K keeps every deficient shard eligible; the per-round budget
    # normalization then matches the proportional sampler with a floor.
    foc = GameConfig(
        policy="deficit_focused", targets=0.5, focus=100, floor_budget=0.1, **base
    )
    return GameExperiment(
        name="homogeneous-large",
        runs=[("deficit_proportional", prop), ("deficit_focused", foc)],
    )


def _homogeneous_small() -> GameExperiment:
    cfg = GameConfig(
        num_shards=100,
        rounds=5000,
        gamma=0.5,
        beta=0.5,
        mode="stochastic",
        policy="deficit_focused",
        adversary="cascade",
        num_nodes=10,
        seed=0,
        targets=0.05,
        focus=100,
        floor_budget=0.1,
    )
    return GameExperiment(name="homogeneous-small", runs=[("deficit_focused", cfg)])


def _heterogeneous() -> GameExperiment:
    # Per-shard targets 1/(ceil(i/5)+1) for i = 1..K: five shards at 1/2,
    # five at 1/3, and so on down to 1/21.
    targets = [1.0 / (-(-i // 5) + 1) for i in range(1, 101)]
    cfg = GameConfig(
        num_shards=100,
        rounds=5000,
        gamma=0.5,
        beta=0.5,
        mode="stochastic",
        policy="deficit_focused",
        adversary="cascade",
        num_nodes=10,
        seed=0,
        targets=targets,
        focus=100,
        floor_budget=0.1,
    )
    return GameExperiment(name="heterogeneous", runs=[("deficit_focused", cfg)], plot="bars")


GAME_PRESETS = {
    "homogeneous-large": _homogeneous_large,
    "homogeneous-small": _homogeneous_small,
    "heterogeneous": _heterogeneous,
}


def load_game_experiment(source: str) -> GameExperiment:
    """Resolve a preset name or parse a game config file."""
    if source in GAME_PRESETS:
        return GAME_PRESETS[source]()
    text = Path(source).read_text(encoding="utf-8")
    config, output = load_game_config(text)
    label = output.get("label") or config.policy
    plot = "psi" if output.get("plot", True) else "none"
    return GameExperiment(name=Path(source).stem, runs=[(label, config)], plot=plot)


def load_protocol_scenario(source: str) -> tuple[Scenario, dict]:
    text = Path(source).read_text(encoding="utf-8")
    return load_scenario(text)


def _format(value: float) -> str:
    return format(value, ".10g")


def write_trace_csv(path, trace: GameTrace) -> None:
    """Full per-round, per-shard record. Requires a trace run with record_full."""
    if trace.honest is None:
        raise ValueError("trace was recorded without per-round detail")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t,shard,gamma,beta,r,rbar\n")
        for t in range(trace.rounds):
            hon, adv = trace.honest[t], trace.adversary[t]
            frac, avg = trace.fractions[t], trace.averages[t]
            for i in range(trace.num_shards):
                fh.write(
                    f"{t + 1},{i},{_format(hon[i])},{_format(adv[i])},"
                    f"{_format(frac[i])},{_format(avg[i])}\n"
                )


def write_summary_csv(path, trace: GameTrace) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("t,psi,distance\n")
        for t in range(trace.rounds):
            fh.write(f"{t + 1},{_format(trace.psi[t])},{_format(trace.distance[t])}\n")


def write_resources_csv(path, meter: ResourceMeter) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("category,dimension,bytes\n")
        for category, dimension, amount in meter.csv_rows():
            fh.write(f"{category},{dimension},{amount}\n")


def _apply_seed(config: GameConfig, seed: int | None) -> GameConfig:
    return config if seed is None else replace(config, seed=seed)


def run_game_experiment(experiment: GameExperiment, out_dir, seed: int | None = None) -> list[str]:
    """Run every labeled config, write trace/summary CSVs and the plot."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = []
    traces: list[tuple[str, GameTrace]] = []
    for label, config in experiment.runs:
        trace = run(_apply_seed(config, seed), record_full=True)
        traces.append((label, trace))
        trace_path = out / f"{label}_trace.csv"
        summary_path = out / f"{label}_summary.csv"
        write_trace_csv(trace_path, trace)
        write_summary_csv(summary_path, trace)
        artifacts += [str(trace_path), str(summary_path)]

    if experiment.plot == "psi":
        series = {
            label: (list(range(1, tr.rounds + 1)), tr.psi.tolist())
            for label, tr in traces
        }
        svg = out / "psi_vs_t.svg"
        line_chart(series, svg, title=experiment.name, ylabel="worst-shard average")
        artifacts.append(str(svg))
    elif experiment.plot == "bars":
        label, tr = traces[-1]
        svg = out / "achieved_vs_target.svg"
        achieved_vs_target_chart(
            tr.final_average.tolist(), tr.targets.tolist(), svg,
            title=f"{experiment.name}: {label}",
        )
        artifacts.append(str(svg))
    return artifacts


def _batch_endpoint(task: tuple[GameConfig, int]) -> tuple[float, float]:
    config, seed = task
    trace = run(replace(config, seed=seed))
    return trace.psi_final, trace.distance_final


def run_game_batch(experiment: GameExperiment, out_dir, seeds) -> list[str]:
    """Rerun each labeled config across seeds; one endpoint row per seed.

    Seeds fan out over a process pool (runs are independent, each worker
    owns its generator); rows are merged back in seed order so the CSV
    never depends on scheduling.
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise ValueError("batch needs at least one seed")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    workers = min(len(seeds), os.cpu_count() or 1)
    artifacts = []
    for label, config in experiment.runs:
        tasks = [(config, s) for s in seeds]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                endpoints = list(pool.map(_batch_endpoint, tasks))
        else:
            endpoints = [_batch_endpoint(t) for t in tasks]
        path = out / f"{label}_batch.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("seed,psi,distance\n")
            for s, (psi, dist) in zip(seeds, endpoints):
                fh.write(f"{s},{_format(psi)},{_format(dist)}\n")
        artifacts.append(str(path))
    return artifacts


def run_protocol_experiment(scenario: Scenario, out_dir) -> tuple[WorldResult, list[str]]:
    """Run the protocol world; dump the ordered log and the resource CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_world(scenario)
    log_path = out / "log.txt"
    log_path.write_text(result.log.dump(), encoding="utf-8")
    res_path = out / "resources.csv"
    write_resources_csv(res_path, result.meter)
    return result, [str(log_path), str(res_path)]


def output_root(default: str = "runs") -> str:
    """Output directory root, overridable via SHARDLAB_OUT."""
    return os.environ.get("SHARDLAB_OUT", default)
