"""Population representation and locus-frequency utilities.

A population is an N-by-l matrix of bits, one chromosome per row.  Loci are
addressed 1-based everywhere in the public API (matching the descriptor and
schema conventions used throughout the package); the underlying numpy array
is of course 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RandomStream

__all__ = [
    "Population",
    "init_population",
    "one_frequency",
    "enumerate_bitstrings",
    "write_population",
    "read_population",
]


@dataclass(frozen=True)
class Population:
    """Immutable snapshot of an evolving population.

    ``bits`` has shape (N, chrom_len), dtype uint8, values in {0, 1}.
    N must be even: the crossover step pairs row i with row i + N/2.
    """

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError("population bits must be a 2-D matrix")
        n, ell = bits.shape
        if n < 2 or n % 2 != 0:
            raise ValueError(f"population size must be even and >= 2, got {n}")
        if ell < 1:
            raise ValueError("chromosome length must be >= 1")
        if bits.max(initial=0) > 1:
            raise ValueError("population entries must be bits")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def size(self) -> int:
        return self.bits.shape[0]

    @property
    def chrom_len(self) -> int:
        return self.bits.shape[1]


def init_population(n: int, length: int, rng: RandomStream) -> Population:
    """Fresh population of ``n`` chromosomes of ``length`` i.i.d. uniform bits."""
    if n < 2 or n % 2 != 0:
        raise ValueError(f"population size must be even and >= 2, got {n}")
    if length < 1:
        raise ValueError(f"chromosome length must be >= 1, got {length}")
    return Population(rng.bits((n, length)))


def one_frequency(pop: Population, locus: int) -> float:
    """Frequency of the bit 1 at ``locus`` (1-based)."""
    if not 1 <= locus <= pop.chrom_len:
        raise IndexError(f"locus {locus} out of range [1, {pop.chrom_len}]")
    return float(pop.bits[:, locus - 1].mean())


def enumerate_bitstrings(n_bits: int, chunk: int | None = None):
    """Yield all 2**n_bits bitstrings as (rows, n_bits) uint8 chunks.

    Bit 1 of the string is the most significant bit of the row index, so the
    enumeration is in lexicographic string order.
    """
    if n_bits < 0:
        raise ValueError("n_bits must be nonnegative")
    total = 1 << n_bits
    if chunk is None:
        chunk = min(total, 1 << 20)
    shifts = np.arange(n_bits - 1, -1, -1, dtype=np.uint64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        yield ((idx[:, None] >> shifts) & 1).astype(np.uint8)


def write_population(pop: Population, path) -> None:
    """Plain-text dump, one 0/1 string per line."""
    with open(path, "w") as fh:
        for row in pop.bits:
            fh.write("".join("1" if b else "0" for b in row))
            fh.write("\n")


def read_population(path) -> Population:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty population file")
    rows = []
    for i, line in enumerate(lines, start=1):
        if set(line) - {"0", "1"}:
            raise ValueError(f"{path}:{i}: invalid characters in chromosome")
        rows.append([int(c) for c in line])
    return Population(np.array(rows, dtype=np.uint8))
