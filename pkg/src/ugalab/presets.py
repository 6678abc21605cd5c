"""Named experiment presets.

Each benchmark ships in a full-scale form (the long-running published
parameterization) and a ``-desk`` form small enough for CI.  Presets are
plain :class:`~ugalab.harness.ExperimentConfig` values; ``dump_presets``
writes them out as flat key-value config files.
"""

from __future__ import annotations

import os

from .harness import ExperimentConfig, config_to_text
from .uga import ClampingConfig

__all__ = ["PRESETS", "get_preset", "dump_presets"]


def _staircase(name, h, o, delta, *, span=0, n=500, pm=0.003, gens, trials, clamp=None, track=4, seed=0):
    return ExperimentConfig(
        name=name, problem="staircase", height=h, order=o, increment=delta, span=span,
        population_size=n, mutation_rate=pm, generations=gens, trials=trials,
        clamp=clamp, track_steps=track, seed=seed,
    )


def _sat(name, n_vars, m, *, gens, trials, clamp=None, seed=0):
    return ExperimentConfig(
        name=name, problem="sat", n_vars=n_vars, n_clauses=m,
        population_size=200, mutation_rate=0.01, generations=gens, trials=trials,
        clamp=clamp, seed=seed,
    )


def _spin(name, spins, *, gens, trials, clamp=None, seed=0):
    return ExperimentConfig(
        name=name, problem="spin", n_spins=spins,
        population_size=200, mutation_rate=0.01, generations=gens, trials=trials,
        clamp=clamp, seed=seed,
    )


PRESETS: dict[str, ExperimentConfig] = {
    # staircase benchmarks: N=500, p_m=0.003
    "phi-star": _staircase("phi-star", 50, 4, 0.3, gens=5000, trials=20),
    "phi-star-desk": _staircase("phi-star-desk", 10, 4, 0.3, gens=500, trials=20),
    "phi-embedded": _staircase("phi-embedded", 50, 4, 0.3, span=20000, gens=5000, trials=20),
    "phi-embedded-desk": _staircase(
        "phi-embedded-desk", 6, 3, 0.3, span=200, n=200, gens=500, trials=30
    ),
    "phi-star-clamped": _staircase(
        "phi-star-clamped", 50, 4, 0.3, gens=5000, trials=20,
        clamp=ClampingConfig(0.99, 0.9, 200, 0),
    ),
    "phi-star-clamped-desk": _staircase(
        "phi-star-clamped-desk", 10, 4, 0.3, gens=500, trials=20,
        clamp=ClampingConfig(0.99, 0.9, 50, 0),
    ),
    # MAX-3SAT: N=200, p_m=0.01
    "sat-plain": _sat("sat-plain", 1000, 4000, gens=7000, trials=10),
    "sat-clamped": _sat(
        "sat-clamped", 1000, 4000, gens=7000, trials=10,
        clamp=ClampingConfig(0.99, 0.8, 200, 2000),
    ),
    "sat-plain-desk": _sat("sat-plain-desk", 100, 430, gens=2000, trials=10),
    "sat-clamped-desk": _sat(
        "sat-clamped-desk", 100, 430, gens=2000, trials=10,
        clamp=ClampingConfig(0.99, 0.8, 100, 600),
    ),
    # SK spin glass: N=200, p_m=0.01
    "spin-plain": _spin("spin-plain", 1000, gens=7000, trials=10),
    "spin-clamped": _spin(
        "spin-clamped", 1000, gens=7000, trials=10,
        clamp=ClampingConfig(0.99, 0.8, 200, 2000),
    ),
    "spin-plain-desk": _spin("spin-plain-desk", 100, gens=2000, trials=10),
    "spin-clamped-desk": _spin(
        "spin-clamped-desk", 100, gens=2000, trials=10,
        clamp=ClampingConfig(0.99, 0.8, 100, 600),
    ),
}


def get_preset(name: str) -> ExperimentConfig:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r}; known presets: {known}") from None


def dump_presets(directory: str) -> list[str]:
    """Write every preset as a <name>.cfg file; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, cfg in sorted(PRESETS.items()):
        path = os.path.join(directory, f"{name}.cfg")
        with open(path, "w") as fh:
            fh.write(config_to_text(cfg))
        paths.append(path)
    return paths


if __name__ == "__main__":  # pragma: no cover
    import sys

    dump_presets(sys.argv[1] if len(sys.argv) > 1 else "configs")
