"""Genetic algorithm with uniform crossover, plus the clamping mechanism.

One generation: evaluate raw fitness, record statistics, sigma-scale the
fitness values, select N parents by stochastic universal sampling, pair the
(shuffled) parents and recombine them with uniform crossover masks, then
flip bits with per-bit probability p_m via mutation masks.  Clamping, when
enabled, watches per-locus allele frequencies at the start of each
generation and exempts from mutation any locus whose majority allele has
stayed above the flag/unflag thresholds for a waiting period.

Note on sigma scaling: the adjusted fitness is max(0, 1 + (f - mean)/std)
(all ones when std is 0).  Some presentations print min instead of max,
which would zero out every above-average individual and invert selection;
max is the standard form and is what this engine implements.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import Population, init_population
from .rng import RandomStream
from .schema import SchemaModel

__all__ = [
    "UgaConfig",
    "ClampingConfig",
    "ClampState",
    "GenerationStats",
    "sigma_scale",
    "sus_select",
    "uniform_crossover",
    "crossover_with_masks",
    "mutate",
    "clamp_update",
    "run_uga",
]


@dataclass(frozen=True)
class ClampingConfig:
    flag_freq_threshold: float
    unflag_freq_threshold: float
    waiting_period: int
    activation_generation: int = 0

    def __post_init__(self):
        if not 0.5 <= self.unflag_freq_threshold <= self.flag_freq_threshold <= 1.0:
            raise ValueError("need 0.5 <= unflag <= flag <= 1")
        if self.waiting_period < 1:
            raise ValueError("waiting_period must be >= 1")
        if self.activation_generation < 0:
            raise ValueError("activation_generation must be >= 0")


@dataclass(frozen=True)
class UgaConfig:
    population_size: int
    mutation_rate: float
    generations: int
    seed: int = 0
    clamping: ClampingConfig | None = None

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2 != 0:
            raise ValueError("population_size must be even and >= 2")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must lie in [0, 1]")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")


@dataclass(frozen=True)
class ClampState:
    """Per-locus clamp bookkeeping: whether the locus is flagged, which
    allele crossed the flag threshold, and for how many consecutive
    generations it has stayed flagged."""

    flagged: np.ndarray      # (ell,) bool
    flagged_bit: np.ndarray  # (ell,) uint8
    counter: np.ndarray      # (ell,) int64; 0 wherever not flagged

    @classmethod
    def empty(cls, ell: int) -> "ClampState":
        return cls(
            np.zeros(ell, dtype=bool),
            np.zeros(ell, dtype=np.uint8),
            np.zeros(ell, dtype=np.int64),
        )


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    avg_fitness: float
    best_fitness: float
    tracker_freqs: tuple[float, ...] = field(default_factory=tuple)
    mutation_exempt_count: int = 0


def sigma_scale(raw) -> np.ndarray:
    """Adjusted fitness max(0, 1 + (raw - mean)/std); all ones if std = 0.

    Uses the population standard deviation (divide by N). Handles negative
    raw fitness without further ceremony.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.ndim != 1 or len(raw) < 1:
        raise ValueError("raw fitness must be a nonempty vector")
    std = raw.std()
    if std == 0.0:
        return np.ones_like(raw)
    return np.maximum(0.0, 1.0 + (raw - raw.mean()) / std)


def sus_select(pop: Population, adjusted, rng: RandomStream) -> Population:
    """Fitness-proportionate stochastic universal sampling.

    One wheel spin with N equally spaced pointers, so each individual's
    realized copy count is floor or ceil of its expectation.  The selected
    parents are shuffled before pairing (SUS output is positionally
    correlated otherwise).  If every adjusted value is 0 the fallback is
    uniform random selection.
    """
    adjusted = np.asarray(adjusted, dtype=float)
    n = pop.size
    if adjusted.shape != (n,):
        raise ValueError("adjusted fitness length must equal population size")
    if adjusted.min() < 0:
        raise ValueError("adjusted fitness must be nonnegative")
    total = adjusted.sum()
    if total <= 0.0:
        idx = rng.integers(0, n, size=n)
    else:
        spacing = total / n
        start = rng.uniform() * spacing
        pointers = start + spacing * np.arange(n)
        idx = np.searchsorted(np.cumsum(adjusted), pointers, side="right")
        idx = np.minimum(idx, n - 1)  # guard against float roundoff at the wheel edge
    idx = np.asarray(idx)
    rng.shuffle(idx)
    return Population(pop.bits[idx])


def crossover_with_masks(parents: Population, masks: np.ndarray) -> Population:
    """Uniform crossover of row i with row i + N/2 under the given
    (N/2, ell) bit masks: mask bit 1 swaps the alleles, 0 keeps them."""
    n = parents.size
    half = n // 2
    masks = np.asarray(masks, dtype=bool)
    if masks.shape != (half, parents.chrom_len):
        raise ValueError("masks must have shape (N/2, ell)")
    top = parents.bits[:half]
    bottom = parents.bits[half:]
    child_top = np.where(masks, bottom, top)
    child_bottom = np.where(masks, top, bottom)
    return Population(np.vstack([child_top, child_bottom]))


def uniform_crossover(parents: Population, rng: RandomStream) -> Population:
    """Uniform crossover with i.i.d. uniform mask bits."""
    return crossover_with_masks(parents, rng.bits((parents.size // 2, parents.chrom_len)))


def mutate(pop: Population, p_m: float, exempt: set[int] | frozenset[int], rng: RandomStream) -> Population:
    """Flip each bit independently with probability p_m, except at the
    exempt loci (1-based), which are never touched."""
    if not 0.0 <= p_m <= 1.0:
        raise ValueError("p_m must lie in [0, 1]")
    if any(not 1 <= l <= pop.chrom_len for l in exempt):
        raise ValueError("exempt loci out of range")
    masks = rng.uniform((pop.size, pop.chrom_len)) < p_m
    if exempt:
        masks[:, np.array(sorted(exempt)) - 1] = False
    return Population(pop.bits ^ masks.astype(np.uint8))


def clamp_update(
    state: ClampState,
    pop: Population,
    cfg: ClampingConfig,
    generation: int,
) -> tuple[ClampState, frozenset[int]]:
    """One clamp bookkeeping step on the start-of-generation population.

    A locus is flagged when its one- or zero-frequency exceeds the flag
    threshold; it stays flagged while the flagged allele's frequency stays
    above the unflag threshold, and is exempted from mutation once it has
    been flagged for waiting_period consecutive generations.  Before the
    activation generation the state stays empty.
    """
    ell = pop.chrom_len
    if generation < cfg.activation_generation:
        return ClampState.empty(ell), frozenset()
    one_freq = pop.bits.mean(axis=0)
    freq_by_bit = np.stack([1.0 - one_freq, one_freq])  # freq of allele 0, allele 1

    flagged = state.flagged.copy()
    flagged_bit = state.flagged_bit.copy()
    counter = state.counter.copy()

    # unflag: flagged allele's frequency fell to or below the unflag threshold
    keep = freq_by_bit[flagged_bit, np.arange(ell)] > cfg.unflag_freq_threshold
    drop = flagged & ~keep
    flagged[drop] = False
    counter[drop] = 0

    # flag newly qualifying loci (a frequency > flag >= 0.5 identifies the allele)
    newly = ~flagged & (freq_by_bit.max(axis=0) > cfg.flag_freq_threshold)
    flagged_bit[newly] = (one_freq[newly] >= 0.5).astype(np.uint8)
    flagged[newly] = True

    counter[flagged] += 1
    counter[~flagged] = 0

    exempt = frozenset(int(l) + 1 for l in np.nonzero(counter >= cfg.waiting_period)[0])
    return ClampState(flagged, flagged_bit, counter), exempt


def _tracker_arrays(trackers: list[SchemaModel], ell: int):
    compiled = []
    for schema in trackers:
        if any(not 1 <= l <= ell for l in schema.assignment):
            raise ValueError("tracker loci out of chromosome range")
        loci = np.array(sorted(schema.assignment), dtype=np.int64)
        vals = np.array([schema.assignment[int(l)] for l in loci], dtype=np.uint8)
        compiled.append((loci, vals))
    return compiled


def run_uga(
    cfg: UgaConfig,
    fitness,
    trackers: list[SchemaModel] | None = None,
    rng: RandomStream | None = None,
) -> list[GenerationStats]:
    """Run the engine for exactly cfg.generations generations.

    ``fitness`` is a callable f(bits, rng) -> values over a (N, ell) bit
    matrix, exposing the chromosome length as ``fitness.span``.  Returns one
    GenerationStats per generation; fully deterministic given cfg.seed (or
    the explicitly supplied stream, which overrides it).
    """
    ell = fitness.span
    if rng is None:
        rng = RandomStream(cfg.seed)
    pop = init_population(cfg.population_size, ell, rng)
    clamp_state = ClampState.empty(ell)
    compiled = _tracker_arrays(trackers or [], ell)
    stats: list[GenerationStats] = []

    for gen in range(cfg.generations):
        values = np.asarray(fitness(pop.bits, rng), dtype=float)
        exempt: frozenset[int] = frozenset()
        if cfg.clamping is not None:
            clamp_state, exempt = clamp_update(clamp_state, pop, cfg.clamping, gen)
        freqs = tuple(
            float((pop.bits[:, loci - 1] == vals).all(axis=1).mean())
            for loci, vals in compiled
        )
        stats.append(
            GenerationStats(
                generation=gen,
                avg_fitness=float(values.mean()),
                best_fitness=float(values.max()),
                tracker_freqs=freqs,
                mutation_exempt_count=len(exempt),
            )
        )
        adjusted = sigma_scale(values)
        parents = sus_select(pop, adjusted, rng)
        offspring = uniform_crossover(parents, rng)
        pop = mutate(offspring, cfg.mutation_rate, exempt, rng)

    return stats
