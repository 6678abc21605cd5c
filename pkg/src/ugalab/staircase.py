"""Staircase fitness functions.

A staircase function is described by a 6-tuple (h, o, delta, ell, L, V):
height h, order o, increment delta, span ell, an h-by-o matrix L of distinct
1-based loci and an h-by-o binary matrix V of target values.  Evaluation
walks the steps in order: a chromosome whose L-row-i projection matches
V-row-i earns +delta and continues; the first mismatch costs
delta/(2^o - 1) and stops the walk.  A standard-normal noise term is added
unless the noiseless mode is requested (its expectation is zero, so the
noiseless value equals the expected fitness).

Analytic facts used as oracles: the expected-fitness excess of stage i over
the whole space is i*delta; of step i alone, delta / 2^(o*(i-1)); of step i
conditioned on stage i-1, delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import enumerate_bitstrings
from .rng import RandomStream
from .schema import SchemaModel

__all__ = [
    "StaircaseDescriptor",
    "StaircaseFunction",
    "make_basic",
    "basic_form",
    "random_embedding",
    "evaluate",
    "stage_membership",
    "AnalyticSignals",
    "analytic_signals",
    "brute_force_schema_mean",
    "step_schema",
    "stage_schema",
    "write_descriptor",
    "read_descriptor",
]

ENUMERATION_BOUND = 24  # max span for exhaustive brute-force oracles


@dataclass(frozen=True, eq=False)
class StaircaseDescriptor:
    height: int
    order: int
    increment: float
    span: int
    loci: np.ndarray     # (h, o) ints, 1-based, all distinct
    targets: np.ndarray  # (h, o) bits

    def __eq__(self, other):
        return (
            isinstance(other, StaircaseDescriptor)
            and (self.height, self.order, self.increment, self.span)
            == (other.height, other.order, other.increment, other.span)
            and np.array_equal(self.loci, other.loci)
            and np.array_equal(self.targets, other.targets)
        )

    def __hash__(self):
        return hash((self.height, self.order, self.increment, self.span,
                     self.loci.tobytes(), self.targets.tobytes()))

    def __post_init__(self):
        h, o = self.height, self.order
        if h < 1 or o < 1:
            raise ValueError("height and order must be positive")
        if self.increment <= 0:
            raise ValueError("increment must be positive")
        if h * o > self.span:
            raise ValueError(f"h*o = {h * o} exceeds span {self.span}")
        loci = np.asarray(self.loci, dtype=np.int64)
        targets = np.asarray(self.targets, dtype=np.uint8)
        if loci.shape != (h, o) or targets.shape != (h, o):
            raise ValueError("loci and targets must be h-by-o matrices")
        if loci.min() < 1 or loci.max() > self.span:
            raise ValueError("loci must lie in [1, span]")
        if len(np.unique(loci)) != h * o:
            raise ValueError("loci must be distinct")
        if targets.max(initial=0) > 1:
            raise ValueError("targets must be bits")
        loci.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "loci", loci)
        object.__setattr__(self, "targets", targets)

    @property
    def is_basic(self) -> bool:
        return (
            self.span == self.height * self.order
            and np.array_equal(self.loci.ravel(), np.arange(1, self.span + 1))
            and bool(self.targets.all())
        )


def make_basic(h: int, o: int, delta: float) -> StaircaseDescriptor:
    """Canonical staircase: span h*o, loci 1..h*o laid out row-wise, all-ones targets."""
    if h < 1 or o < 1 or delta <= 0:
        raise ValueError("h, o must be >= 1 and delta > 0")
    loci = np.arange(1, h * o + 1, dtype=np.int64).reshape(h, o)
    return StaircaseDescriptor(h, o, float(delta), h * o, loci, np.ones((h, o), dtype=np.uint8))


def basic_form(desc: StaircaseDescriptor) -> StaircaseDescriptor:
    return make_basic(desc.height, desc.order, desc.increment)


def random_embedding(h: int, o: int, delta: float, ell: int, rng: RandomStream) -> StaircaseDescriptor:
    """Staircase with the given shape whose loci are a uniform random
    injection into [ell] and whose targets are uniform random bits."""
    if h * o > ell:
        raise ValueError(f"h*o = {h * o} exceeds span {ell}")
    loci = rng.gen.permutation(ell)[: h * o].astype(np.int64) + 1
    return StaircaseDescriptor(h, o, float(delta), ell, loci.reshape(h, o), rng.bits((h, o)))


def _stage_counts(desc: StaircaseDescriptor, bits: np.ndarray) -> np.ndarray:
    """Number of leading matched steps for each chromosome row."""
    proj = bits[:, desc.loci - 1]  # (k, h, o)
    match = (proj == desc.targets).all(axis=2)
    return np.cumprod(match, axis=1).sum(axis=1)


def _noiseless_values(desc: StaircaseDescriptor, bits: np.ndarray) -> np.ndarray:
    stages = _stage_counts(desc, bits)
    penalty = desc.increment / (2**desc.order - 1)
    return stages * desc.increment - (stages < desc.height) * penalty


class StaircaseFunction:
    """Vectorized fitness oracle over (k, span) bit matrices.

    With ``noisy=True`` each evaluation adds an independent N(0, 1) draw
    from the supplied stream; with ``noisy=False`` the returned value is the
    exact expected fitness.
    """

    def __init__(self, desc: StaircaseDescriptor, noisy: bool = True):
        self.desc = desc
        self.noisy = noisy
        self.span = desc.span

    def __call__(self, bits: np.ndarray, rng: RandomStream | None = None) -> np.ndarray:
        bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        if bits.shape[1] != self.span:
            raise ValueError(f"chromosome length {bits.shape[1]} != span {self.span}")
        values = _noiseless_values(self.desc, bits)
        if self.noisy:
            if rng is None:
                raise ValueError("noisy evaluation needs a RandomStream")
            values = values + rng.normal(len(values))
        return values


def evaluate(
    desc: StaircaseDescriptor,
    g,
    rng: RandomStream | None = None,
    noisy: bool = True,
) -> float:
    """Fitness of a single chromosome ``g`` (sequence of span bits)."""
    g = np.asarray(g, dtype=np.uint8)
    if g.shape != (desc.span,):
        raise ValueError(f"chromosome length {g.shape} != span {desc.span}")
    return float(StaircaseFunction(desc, noisy=noisy)(g[None, :], rng)[0])


def stage_membership(desc: StaircaseDescriptor, g) -> int:
    """Largest k such that steps 1..k all match (0 if step 1 fails)."""
    g = np.asarray(g, dtype=np.uint8)
    if g.shape != (desc.span,):
        raise ValueError(f"chromosome length {g.shape} != span {desc.span}")
    return int(_stage_counts(desc, g[None, :])[0])


class AnalyticSignals(NamedTuple):
    stage_signal: float
    step_signal: float
    conditional_step_signal: float


def analytic_signals(desc: StaircaseDescriptor, i: int) -> AnalyticSignals:
    """Closed-form expected-fitness excesses for stage/step i.

    stage i carries signal i*delta; step i alone, delta / 2^(o*(i-1));
    step i given stage i-1, delta (for i=1 stage 0 is the whole space, so
    the conditional value coincides with the stage signal).
    """
    if not 1 <= i <= desc.height:
        raise IndexError(f"stage index {i} out of range [1, {desc.height}]")
    d = desc.increment
    return AnalyticSignals(i * d, d / 2 ** (desc.order * (i - 1)), d)


def step_schema(desc: StaircaseDescriptor, i: int) -> SchemaModel:
    """Schema model fixing step i's loci to its target bits."""
    if not 1 <= i <= desc.height:
        raise IndexError(f"step index {i} out of range [1, {desc.height}]")
    row = desc.loci[i - 1]
    vals = desc.targets[i - 1]
    return SchemaModel(desc.span, {int(l): int(v) for l, v in zip(row, vals)})


def stage_schema(desc: StaircaseDescriptor, i: int) -> SchemaModel:
    """Schema model fixing the loci of steps 1..i (stage 0 = whole space)."""
    if not 0 <= i <= desc.height:
        raise IndexError(f"stage index {i} out of range [0, {desc.height}]")
    assignment: dict[int, int] = {}
    for j in range(i):
        assignment.update(
            (int(l), int(v)) for l, v in zip(desc.loci[j], desc.targets[j])
        )
    return SchemaModel(desc.span, assignment)


def brute_force_schema_mean(desc: StaircaseDescriptor, schema: SchemaModel) -> float:
    """Exact mean of the noiseless fitness over all chromosomes in ``schema``.

    Exhaustive enumeration; requires span <= 24. The noise term has zero
    mean, so this equals the expected noisy fitness.
    """
    if desc.span > ENUMERATION_BOUND:
        raise ValueError(f"span {desc.span} exceeds enumeration bound {ENUMERATION_BOUND}")
    if schema.span != desc.span:
        raise ValueError("schema span does not match descriptor span")
    fixed = sorted(schema.assignment)
    free = [l for l in range(1, desc.span + 1) if l not in schema.assignment]
    total = 0.0
    count = 0
    for chunk in enumerate_bitstrings(len(free)):
        bits = np.empty((len(chunk), desc.span), dtype=np.uint8)
        for l in fixed:
            bits[:, l - 1] = schema.assignment[l]
        if free:
            bits[:, np.array(free) - 1] = chunk
        total += float(_noiseless_values(desc, bits).sum())
        count += len(chunk)
    return total / count


# -- descriptor file format ------------------------------------------------
#
# Structured text, one key per line:
#   h <int> / o <int> / delta <repr float> / ell <int>
#   L <o ints>   (h lines, row-wise)
#   V <o bits>   (h lines, row-wise)
# Floats are serialized with repr() so the round-trip is bit-exact.


def write_descriptor(desc: StaircaseDescriptor, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"h {desc.height}\n")
        fh.write(f"o {desc.order}\n")
        fh.write(f"delta {desc.increment!r}\n")
        fh.write(f"ell {desc.span}\n")
        for row in desc.loci:
            fh.write("L " + " ".join(str(int(x)) for x in row) + "\n")
        for row in desc.targets:
            fh.write("V " + " ".join(str(int(x)) for x in row) + "\n")


def read_descriptor(path) -> StaircaseDescriptor:
    h = o = ell = None
    delta = None
    l_rows: list[list[int]] = []
    v_rows: list[list[int]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            key, rest = parts[0], parts[1:]
            try:
                if key == "h":
                    h = int(rest[0])
                elif key == "o":
                    o = int(rest[0])
                elif key == "delta":
                    delta = float(rest[0])
                elif key == "ell":
                    ell = int(rest[0])
                elif key == "L":
                    l_rows.append([int(x) for x in rest])
                elif key == "V":
                    v_rows.append([int(x) for x in rest])
                else:
                    raise ValueError(f"unknown key {key!r}")
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if None in (h, o, delta, ell):
        raise ValueError(f"{path}: missing h, o, delta or ell")
    if len(l_rows) != h or len(v_rows) != h:
        raise ValueError(f"{path}: expected {h} L rows and {h} V rows")
    return StaircaseDescriptor(
        h, o, delta, ell, np.array(l_rows, dtype=np.int64), np.array(v_rows, dtype=np.uint8)
    )
