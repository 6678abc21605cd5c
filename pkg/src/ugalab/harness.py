"""Experiment orchestration: multi-trial runs with split seeds, trial and
aggregate statistics, CSV emission, and the distribution-equality check
between a staircase function and its basic form.

CSV schemas (documented headers, written with repr-exact floats):

* per-trial file: ``trial,generation,avg_fitness,best_fitness,
  step{i}_freq...,clamped_loci``, one row per (trial, generation);
* aggregate file: ``generation,mean_avg_fitness,se_avg_fitness,
  mean_best_fitness,se_best_fitness,step{i}_freq_mean,step{i}_freq_se...,
  clamped_loci_mean``, one row per generation.

Standard errors are sample standard deviation / sqrt(trials); a single
trial yields SE 0 by convention.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import stats as scipy_stats

from . import problems, staircase
from .rng import RandomStream
from .uga import ClampingConfig, UgaConfig, run_uga

__all__ = [
    "ExperimentConfig",
    "RunTrace",
    "run_experiment",
    "stats_aggregate",
    "symmetry_test",
    "SymmetryReport",
    "parse_config",
    "parse_config_text",
    "config_to_text",
]


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    problem: str                       # staircase | sat | spin | sat_file | spin_file
    population_size: int
    mutation_rate: float
    generations: int
    trials: int = 1
    seed: int = 0
    clamp: ClampingConfig | None = None
    out_dir: str = "."
    # staircase parameters
    height: int = 0
    order: int = 0
    increment: float = 0.0
    span: int = 0                      # 0 means basic (span = height * order)
    noisy: bool = True
    track_steps: int = 0
    # sat / spin parameters
    n_vars: int = 0
    n_clauses: int = 0
    n_spins: int = 0
    path: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.problem not in ("staircase", "sat", "spin", "sat_file", "spin_file"):
            raise ValueError(f"unknown problem kind {self.problem!r}")


@dataclass(frozen=True)
class RunTrace:
    """Per-(trial, generation) statistics. Arrays have shape
    (trials, generations); tracker frequencies (trials, generations, k)."""

    avg_fitness: np.ndarray
    best_fitness: np.ndarray
    tracker_freqs: np.ndarray
    clamped_loci: np.ndarray
    tracker_labels: tuple[str, ...] = field(default_factory=tuple)

    @property
    def trials(self) -> int:
        return self.avg_fitness.shape[0]

    @property
    def generations(self) -> int:
        return self.avg_fitness.shape[1]


def stats_aggregate(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-generation mean and standard error across trials."""
    values = np.atleast_2d(np.asarray(values, dtype=float))
    mean = values.mean(axis=0)
    if values.shape[0] < 2:
        return mean, np.zeros_like(mean)
    se = values.std(axis=0, ddof=1) / np.sqrt(values.shape[0])
    return mean, se


def _build_fitness(cfg: ExperimentConfig, instance_rng: RandomStream):
    """Problem construction; one instance shared by all trials.
    Returns (fitness callable, tracker schema list, tracker labels)."""
    if cfg.problem == "staircase":
        if cfg.span and cfg.span != cfg.height * cfg.order:
            desc = staircase.random_embedding(
                cfg.height, cfg.order, cfg.increment, cfg.span, instance_rng
            )
        else:
            desc = staircase.make_basic(cfg.height, cfg.order, cfg.increment)
        f = staircase.StaircaseFunction(desc, noisy=cfg.noisy)
        k = min(cfg.track_steps, cfg.height)
        trackers = [staircase.step_schema(desc, i) for i in range(1, k + 1)]
        labels = tuple(f"step{i}_freq" for i in range(1, k + 1))
        return f, trackers, labels
    if cfg.problem == "sat":
        inst = problems.gen_uniform_3sat(cfg.n_vars, cfg.n_clauses, instance_rng)
        return problems.SatFitness(inst), [], ()
    if cfg.problem == "sat_file":
        return problems.SatFitness(problems.read_dimacs(cfg.path)), [], ()
    if cfg.problem == "spin":
        return problems.SpinFitness(problems.gen_sk(cfg.n_spins, instance_rng)), [], ()
    if cfg.problem == "spin_file":
        return problems.SpinFitness(problems.read_couplings(cfg.path)), [], ()
    raise ValueError(f"unknown problem kind {cfg.problem!r}")


def _run_trials(cfg: ExperimentConfig) -> RunTrace:
    master = RandomStream(cfg.seed)
    streams = master.split(cfg.trials + 1)
    fitness, trackers, labels = _build_fitness(cfg, streams[0])
    uga_cfg = UgaConfig(
        population_size=cfg.population_size,
        mutation_rate=cfg.mutation_rate,
        generations=cfg.generations,
        seed=cfg.seed,
        clamping=cfg.clamp,
    )
    gens, k = cfg.generations, len(trackers)
    avg = np.zeros((cfg.trials, gens))
    best = np.zeros((cfg.trials, gens))
    freqs = np.zeros((cfg.trials, gens, k))
    clamped = np.zeros((cfg.trials, gens))
    for t in range(cfg.trials):
        stats = run_uga(uga_cfg, fitness, trackers, rng=streams[t + 1])
        avg[t] = [s.avg_fitness for s in stats]
        best[t] = [s.best_fitness for s in stats]
        clamped[t] = [s.mutation_exempt_count for s in stats]
        for g, s in enumerate(stats):
            freqs[t, g] = s.tracker_freqs
    return RunTrace(avg, best, freqs, clamped, labels)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trial_csv(trace: RunTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["trial", "generation", "avg_fitness", "best_fitness"]
            + list(trace.tracker_labels)
            + ["clamped_loci"]
        )
        for t in range(trace.trials):
            for g in range(trace.generations):
                w.writerow(
                    [t, g, _fmt(trace.avg_fitness[t, g]), _fmt(trace.best_fitness[t, g])]
                    + [_fmt(v) for v in trace.tracker_freqs[t, g]]
                    + [int(trace.clamped_loci[t, g])]
                )


def write_aggregate_csv(trace: RunTrace, path) -> None:
    mean_avg, se_avg = stats_aggregate(trace.avg_fitness)
    mean_best, se_best = stats_aggregate(trace.best_fitness)
    mean_clamped, _ = stats_aggregate(trace.clamped_loci)
    freq_stats = [
        stats_aggregate(trace.tracker_freqs[:, :, i])
        for i in range(trace.tracker_freqs.shape[2])
    ]
    header = ["generation", "mean_avg_fitness", "se_avg_fitness", "mean_best_fitness", "se_best_fitness"]
    for label in trace.tracker_labels:
        header += [f"{label}_mean", f"{label}_se"]
    header.append("clamped_loci_mean")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for g in range(trace.generations):
            row = [g, _fmt(mean_avg[g]), _fmt(se_avg[g]), _fmt(mean_best[g]), _fmt(se_best[g])]
            for mean_f, se_f in freq_stats:
                row += [_fmt(mean_f[g]), _fmt(se_f[g])]
            row.append(_fmt(mean_clamped[g]))
            w.writerow(row)


def run_experiment(cfg: ExperimentConfig) -> RunTrace:
    """Run all trials (independent split streams, aggregated in trial
    order) and emit the per-trial and aggregate CSV files."""
    trace = _run_trials(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    write_trial_csv(trace, os.path.join(cfg.out_dir, f"{cfg.name}_trials.csv"))
    write_aggregate_csv(trace, os.path.join(cfg.out_dir, f"{cfg.name}_aggregate.csv"))
    return trace


# -- distribution-equality check against the basic form ---------------------


@dataclass(frozen=True)
class SymmetryReport:
    crossing_threshold: float
    significance: float
    p_values: tuple[float, ...]      # one per stage
    passed: bool
    basic_crossings: np.ndarray      # (trials, h) first generation above threshold
    embedded_crossings: np.ndarray


def _stage_crossings(desc, uga_cfg: UgaConfig, trials: int, master: RandomStream, threshold: float):
    """First generation at which each stage's population frequency exceeds
    ``threshold``, per trial (censored at the horizon when never crossed)."""
    f = staircase.StaircaseFunction(desc, noisy=True)
    trackers = [staircase.stage_schema(desc, i) for i in range(1, desc.height + 1)]
    out = np.full((trials, desc.height), uga_cfg.generations, dtype=np.int64)
    for t, stream in enumerate(master.split(trials)):
        stats = run_uga(uga_cfg, f, trackers, rng=stream)
        freqs = np.array([s.tracker_freqs for s in stats])  # (gens, h)
        for i in range(desc.height):
            hits = np.nonzero(freqs[:, i] > threshold)[0]
            if len(hits):
                out[t, i] = hits[0]
    return out


def symmetry_test(
    basic: staircase.StaircaseDescriptor,
    embedded: staircase.StaircaseDescriptor,
    uga_cfg: UgaConfig,
    trials: int,
    crossing_threshold: float = 0.5,
    significance: float = 0.01,
    seed: int = 0,
) -> SymmetryReport:
    """Two-sample KS comparison, stage by stage, of the first-crossing
    generation distributions of a staircase function and its basic form.
    Distributional equality is the expected outcome: the engine's dynamics
    do not depend on where the steps live or what their target bits are.
    """
    if staircase.basic_form(embedded) != basic:
        raise ValueError("embedded descriptor's basic form does not match the basic descriptor")
    master = RandomStream(seed)
    left, right = master.split(2)
    a = _stage_crossings(basic, uga_cfg, trials, left, crossing_threshold)
    b = _stage_crossings(embedded, uga_cfg, trials, right, crossing_threshold)
    p_values = []
    for i in range(basic.height):
        if np.array_equal(a[:, i], b[:, i]):
            p_values.append(1.0)
        else:
            p_values.append(float(scipy_stats.ks_2samp(a[:, i], b[:, i]).pvalue))
    passed = all(p > significance for p in p_values)
    return SymmetryReport(crossing_threshold, significance, tuple(p_values), passed, a, b)


# -- flat key-value config files --------------------------------------------

_INT_KEYS = {
    "population_size", "generations", "trials", "seed", "height", "order",
    "span", "track_steps", "n_vars", "n_clauses", "n_spins",
}
_FLOAT_KEYS = {"mutation_rate", "increment"}
_BOOL_KEYS = {"noisy"}
_STR_KEYS = {"name", "problem", "out_dir", "path"}


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        try:
            if key in _INT_KEYS:
                values[key] = int(raw)
            elif key in _FLOAT_KEYS:
                values[key] = float(raw)
            elif key in _BOOL_KEYS:
                if raw not in ("true", "false"):
                    raise ValueError(f"expected true/false, got {raw!r}")
                values[key] = raw == "true"
            elif key in _STR_KEYS:
                values[key] = raw
            elif key == "clamp":
                if raw == "none":
                    values[key] = None
                else:
                    parts = raw.split(":")
                    if len(parts) != 4:
                        raise ValueError("clamp must be flag:unflag:wait:activation or none")
                    values[key] = ClampingConfig(
                        float(parts[0]), float(parts[1]), int(parts[2]), int(parts[3])
                    )
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from exc
    try:
        return ExperimentConfig(**values)
    except TypeError as exc:
        raise ValueError(f"{source}: {exc}") from exc


def parse_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), source=str(path))


def config_to_text(cfg: ExperimentConfig) -> str:
    lines = [f"name = {cfg.name}", f"problem = {cfg.problem}"]
    if cfg.problem == "staircase":
        lines += [
            f"height = {cfg.height}",
            f"order = {cfg.order}",
            f"increment = {cfg.increment!r}",
            f"span = {cfg.span}",
            f"noisy = {'true' if cfg.noisy else 'false'}",
            f"track_steps = {cfg.track_steps}",
        ]
    elif cfg.problem == "sat":
        lines += [f"n_vars = {cfg.n_vars}", f"n_clauses = {cfg.n_clauses}"]
    elif cfg.problem == "spin":
        lines += [f"n_spins = {cfg.n_spins}"]
    else:
        lines += [f"path = {cfg.path}"]
    lines += [
        f"population_size = {cfg.population_size}",
        f"mutation_rate = {cfg.mutation_rate!r}",
        f"generations = {cfg.generations}",
        f"trials = {cfg.trials}",
        f"seed = {cfg.seed}",
    ]
    if cfg.clamp is None:
        lines.append("clamp = none")
    else:
        c = cfg.clamp
        lines.append(
            f"clamp = {c.flag_freq_threshold!r}:{c.unflag_freq_threshold!r}"
            f":{c.waiting_period}:{c.activation_generation}"
        )
    lines.append(f"out_dir = {cfg.out_dir}")
    return "\n".join(lines) + "\n"
