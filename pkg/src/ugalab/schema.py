"""Schema models, partition models, effects and fitness signals.

A schema fixes some loci of the length-ell hypercube to bits and leaves the
rest free; a schema partition is the family of all 2^o schemata sharing the
same o fixed loci.  The *effect* of a partition is the population variance
(normalized by 2^-o) of the expected fitnesses of its schemata under
uniform sampling; the *signal* of a schema is its expected fitness minus
the global expected fitness.  Conditioning on an orthogonal schema restricts
both notions to the strings it contains.

Fitness oracles are consumed through a single interface: a callable taking
a (k, ell) uint8 bit matrix and returning k real values.  Exact mode
requires a noiseless oracle (the value must equal the expected fitness) and
enumerates the full space, so it is limited to ell <= 24.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .core import enumerate_bitstrings
from .rng import RandomStream

__all__ = [
    "SchemaPartitionModel",
    "SchemaModel",
    "concat",
    "effect",
    "conditional_effect",
    "signal",
    "schema_mean",
    "fitness_table",
]

ENUMERATION_BOUND = 24

FitnessOracle = Callable[..., np.ndarray]


@dataclass(frozen=True)
class SchemaPartitionModel:
    """Locus subset of [ell] identifying a schema partition. 1-based loci."""

    span: int
    loci: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        loci = frozenset(int(l) for l in self.loci)
        if any(not 1 <= l <= self.span for l in loci):
            raise ValueError(f"loci must lie in [1, {self.span}]")
        object.__setattr__(self, "loci", loci)

    @property
    def order(self) -> int:
        return len(self.loci)


@dataclass(frozen=True)
class SchemaModel:
    """Partial bit assignment over [ell]. 1-based loci."""

    span: int
    assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        assignment = {int(l): int(v) for l, v in dict(self.assignment).items()}
        if any(not 1 <= l <= self.span for l in assignment):
            raise ValueError(f"loci must lie in [1, {self.span}]")
        if any(v not in (0, 1) for v in assignment.values()):
            raise ValueError("assigned values must be bits")
        object.__setattr__(self, "assignment", assignment)

    def __hash__(self):
        return hash((self.span, tuple(sorted(self.assignment.items()))))

    def __eq__(self, other):
        return (
            isinstance(other, SchemaModel)
            and self.span == other.span
            and self.assignment == other.assignment
        )

    @property
    def order(self) -> int:
        return len(self.assignment)

    @property
    def partition(self) -> SchemaPartitionModel:
        return SchemaPartitionModel(self.span, frozenset(self.assignment))

    def matches(self, bits: np.ndarray) -> np.ndarray:
        """Boolean membership mask for a (k, ell) bit matrix."""
        bits = np.atleast_2d(bits)
        if not self.assignment:
            return np.ones(len(bits), dtype=bool)
        loci = np.array(sorted(self.assignment), dtype=np.int64)
        vals = np.array([self.assignment[int(l)] for l in loci], dtype=np.uint8)
        return (bits[:, loci - 1] == vals).all(axis=1)


def concat(a: SchemaModel, b: SchemaModel) -> SchemaModel:
    """Concatenation of two orthogonal schema models (union of assignments)."""
    if a.span != b.span:
        raise ValueError("schema spans differ")
    overlap = set(a.assignment) & set(b.assignment)
    if overlap:
        raise ValueError(f"schemata are not orthogonal: shared loci {sorted(overlap)}")
    merged = dict(a.assignment)
    merged.update(b.assignment)
    return SchemaModel(a.span, merged)


def fitness_table(f: FitnessOracle, span: int) -> np.ndarray:
    """Evaluate a noiseless oracle on all 2^span strings in index order
    (bit 1 of the string is the most significant index bit)."""
    if span > ENUMERATION_BOUND:
        raise ValueError(f"span {span} exceeds enumeration bound {ENUMERATION_BOUND}")
    parts = [np.asarray(f(chunk), dtype=float) for chunk in enumerate_bitstrings(span)]
    return np.concatenate(parts)


def _pack_index(bits: np.ndarray, loci: np.ndarray) -> np.ndarray:
    """Pack the projection onto ``loci`` (1-based, ascending) into integers,
    first locus most significant."""
    k = len(loci)
    weights = (1 << np.arange(k - 1, -1, -1)).astype(np.int64)
    return (bits[:, loci - 1].astype(np.int64) * weights).sum(axis=1)


def _cell_means_exact(f, span: int, loci: np.ndarray, given: SchemaModel | None) -> np.ndarray:
    """Expected fitness of every schema in the partition over ``loci``
    (conditioned on ``given`` when supplied), by full enumeration."""
    if span > ENUMERATION_BOUND:
        raise ValueError(f"span {span} exceeds enumeration bound {ENUMERATION_BOUND}")
    fixed = dict(given.assignment) if given is not None else {}
    free = [l for l in range(1, span + 1) if l not in fixed]
    k = len(loci)
    sums = np.zeros(1 << k)
    counts = np.zeros(1 << k, dtype=np.int64)
    for chunk in enumerate_bitstrings(len(free)):
        bits = np.empty((len(chunk), span), dtype=np.uint8)
        for l, v in fixed.items():
            bits[:, l - 1] = v
        if free:
            bits[:, np.array(free) - 1] = chunk
        vals = np.asarray(f(bits), dtype=float)
        cells = _pack_index(bits, loci)
        sums += np.bincount(cells, weights=vals, minlength=1 << k)
        counts += np.bincount(cells, minlength=1 << k)
    return sums / counts


def _cell_means_sampled(
    f, span: int, loci: np.ndarray, given: SchemaModel | None, samples: int, rng: RandomStream
) -> np.ndarray:
    """Monte-Carlo schema means: ``samples`` uniform draws per schema."""
    if samples < 1:
        raise ValueError("sampled mode needs samples >= 1")
    fixed = dict(given.assignment) if given is not None else {}
    k = len(loci)
    means = np.empty(1 << k)
    for cell in range(1 << k):
        bits = rng.bits((samples, span))
        for l, v in fixed.items():
            bits[:, l - 1] = v
        for j, l in enumerate(loci):
            bits[:, l - 1] = (cell >> (k - 1 - j)) & 1
        means[cell] = float(np.asarray(f(bits), dtype=float).mean())
    return means


def _resolve_loci(part: SchemaPartitionModel) -> np.ndarray:
    return np.array(sorted(part.loci), dtype=np.int64)


def effect(
    f: FitnessOracle,
    part: SchemaPartitionModel,
    exact: bool = True,
    samples: int | None = None,
    rng: RandomStream | None = None,
) -> float:
    """Variance of the partition's schema expected fitnesses.

    Exact mode enumerates all of B_ell (noiseless oracle required); sampled
    mode estimates each schema mean from ``samples`` uniform draws.
    """
    return conditional_effect(f, part, SchemaModel(part.span), exact=exact, samples=samples, rng=rng)


def conditional_effect(
    f: FitnessOracle,
    part: SchemaPartitionModel,
    given: SchemaModel,
    exact: bool = True,
    samples: int | None = None,
    rng: RandomStream | None = None,
) -> float:
    """Effect of ``part`` restricted to the strings of ``given``."""
    if part.span != given.span:
        raise ValueError("partition and conditioning schema spans differ")
    overlap = part.loci & set(given.assignment)
    if overlap:
        raise ValueError(f"partition not orthogonal to conditioning schema: {sorted(overlap)}")
    loci = _resolve_loci(part)
    if len(loci) == 0:
        return 0.0
    if exact:
        means = _cell_means_exact(f, part.span, loci, given)
    else:
        if rng is None:
            raise ValueError("sampled mode needs a RandomStream")
        means = _cell_means_sampled(f, part.span, loci, given, samples or 1, rng)
    return float(((means - means.mean()) ** 2).mean())


def schema_mean(
    f: FitnessOracle,
    schema: SchemaModel,
    exact: bool = True,
    samples: int | None = None,
    rng: RandomStream | None = None,
) -> float:
    """Expected fitness of a schema under uniform sampling."""
    if schema.order == 0 and not exact:
        if rng is None:
            raise ValueError("sampled mode needs a RandomStream")
        bits = rng.bits((samples or 1, schema.span))
        return float(np.asarray(f(bits), dtype=float).mean())
    if schema.order == 0:
        loci = np.array([1], dtype=np.int64)  # any locus; mean over both cells
        means = _cell_means_exact(f, schema.span, loci, None)
        return float(means.mean())
    loci = np.array(sorted(schema.assignment), dtype=np.int64)
    cell = 0
    k = len(loci)
    for j, l in enumerate(loci):
        cell |= schema.assignment[int(l)] << (k - 1 - j)
    if exact:
        means = _cell_means_exact(f, schema.span, loci, None)
    else:
        if rng is None:
            raise ValueError("sampled mode needs a RandomStream")
        means = _cell_means_sampled(f, schema.span, loci, None, samples or 1, rng)
    return float(means[cell])


def signal(
    f: FitnessOracle,
    schema: SchemaModel,
    exact: bool = True,
    samples: int | None = None,
    rng: RandomStream | None = None,
) -> float:
    """Schema expected fitness minus the global expected fitness."""
    empty = SchemaModel(schema.span)
    return schema_mean(f, schema, exact=exact, samples=samples, rng=rng) - schema_mean(
        f, empty, exact=exact, samples=samples, rng=rng
    )
