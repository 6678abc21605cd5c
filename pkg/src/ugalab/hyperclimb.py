"""Explicit decimation loop: the search heuristic the engine is meant to
implement implicitly, written out as an explicit reference procedure for
desk-scale demonstration.

Each round draws a fresh batch of samples uniformly from the schema fixed
so far, scans candidate low-order partitions over the unfixed loci for the
highest estimated effect, and, if one clears the threshold, fixes the
defining bits of its best-mean schema.  The fixed loci shrink the search
space and the loop recurses until nothing clears the threshold or the round
budget is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .rng import RandomStream
from .schema import SchemaModel, SchemaPartitionModel

__all__ = ["DecimationRound", "DecimationTrace", "run_hyperclimb", "write_trace", "SCAN_CAP"]

SCAN_CAP = 100_000  # max candidate partitions scanned per round


@dataclass(frozen=True)
class DecimationRound:
    partition: SchemaPartitionModel
    fixed: SchemaModel
    effect_estimate: float
    mean_estimate: float
    samples_used: int


@dataclass(frozen=True)
class DecimationTrace:
    span: int
    rounds: tuple[DecimationRound, ...]

    def fixed_schema(self) -> SchemaModel:
        """Union of all bits fixed so far."""
        assignment: dict[int, int] = {}
        for r in self.rounds:
            assignment.update(r.fixed.assignment)
        return SchemaModel(self.span, assignment)


def _candidate_partitions(unfixed: list[int], max_order: int, rng: RandomStream):
    """All locus subsets of order 1..max_order when that is affordable,
    otherwise SCAN_CAP random subsets (orders weighted by their counts)."""
    counts = [comb(len(unfixed), o) for o in range(1, max_order + 1)]
    if sum(counts) <= SCAN_CAP:
        for o in range(1, max_order + 1):
            yield from combinations(unfixed, o)
        return
    orders = rng.gen.choice(
        np.arange(1, max_order + 1), size=SCAN_CAP, p=np.array(counts) / sum(counts)
    )
    unfixed_arr = np.array(unfixed)
    for o in orders:
        pick = rng.gen.choice(len(unfixed_arr), size=int(o), replace=False)
        yield tuple(sorted(int(unfixed_arr[i]) for i in pick))


def _estimate(loci: tuple[int, ...], bits: np.ndarray, values: np.ndarray, global_mean: float):
    """Effect and cell means of the partition over ``loci`` from a shared
    sample batch. Cells with no samples contribute the global sample mean."""
    k = len(loci)
    weights = (1 << np.arange(k - 1, -1, -1)).astype(np.int64)
    cells = (bits[:, np.array(loci) - 1].astype(np.int64) * weights).sum(axis=1)
    sums = np.bincount(cells, weights=values, minlength=1 << k)
    counts = np.bincount(cells, minlength=1 << k)
    means = np.full(1 << k, global_mean)
    hit = counts > 0
    means[hit] = sums[hit] / counts[hit]
    effect = float(((means - means.mean()) ** 2).mean())
    return effect, means, counts


def run_hyperclimb(
    f,
    ell: int,
    max_order: int,
    samples_per_round: int,
    effect_threshold: float,
    max_rounds: int,
    rng: RandomStream,
) -> DecimationTrace:
    """Run the decimation loop. ``f`` is a fitness callable f(bits, rng)
    over (k, ell) bit matrices (noisy oracles draw from the stream)."""
    if max_order < 1 or samples_per_round < 1:
        raise ValueError("max_order and samples_per_round must be >= 1")
    fixed: dict[int, int] = {}
    rounds: list[DecimationRound] = []

    for _ in range(max_rounds):
        unfixed = [l for l in range(1, ell + 1) if l not in fixed]
        if not unfixed:
            break
        bits = rng.bits((samples_per_round, ell))
        for l, v in fixed.items():
            bits[:, l - 1] = v
        values = np.asarray(f(bits, rng), dtype=float)
        global_mean = float(values.mean())

        best = None  # (effect, loci, means, counts)
        for loci in _candidate_partitions(unfixed, max_order, rng):
            effect, means, counts = _estimate(loci, bits, values, global_mean)
            if best is None or effect > best[0] or (effect == best[0] and loci < best[1]):
                best = (effect, loci, means, counts)
        if best is None or best[0] <= effect_threshold:
            break
        effect, loci, means, _ = best
        cell = int(means.argmax())  # ties broken toward the lexicographically lowest bits
        k = len(loci)
        assignment = {loci[j]: (cell >> (k - 1 - j)) & 1 for j in range(k)}
        fixed.update(assignment)
        rounds.append(
            DecimationRound(
                partition=SchemaPartitionModel(ell, frozenset(loci)),
                fixed=SchemaModel(ell, assignment),
                effect_estimate=effect,
                mean_estimate=float(means[cell]),
                samples_used=samples_per_round,
            )
        )

    return DecimationTrace(ell, tuple(rounds))


def write_trace(trace: DecimationTrace, path) -> None:
    """Structured text export, one round per record."""
    with open(path, "w") as fh:
        fh.write(f"span {trace.span}\n")
        for i, r in enumerate(trace.rounds, start=1):
            loci = " ".join(str(l) for l in sorted(r.partition.loci))
            bits = " ".join(f"{l}={r.fixed.assignment[l]}" for l in sorted(r.fixed.assignment))
            fh.write(
                f"round {i} loci [{loci}] fixed [{bits}] "
                f"effect {r.effect_estimate!r} mean {r.mean_estimate!r} samples {r.samples_used}\n"
            )
