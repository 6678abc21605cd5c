"""Refractal addressing: mapping length-2mn bitstrings onto a square grid.

An addressing system (m, n, X, Y) splits the 2mn loci evenly between two
m-by-n matrices.  A chromosome's grid address interleaves m levels of
detail: at level i the X_i / Y_i projections (read most-significant-bit
first) pick a sub-block along x and y, and the block size shrinks by 2^n
per level.  The resulting map is a bijection onto the 2^mn x 2^mn grid,
which makes it possible to render a fitness function over the hypercube as
an image whose nested blocks expose coarse schema structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import enumerate_bitstrings
from .rng import RandomStream
from .staircase import StaircaseDescriptor, StaircaseFunction

__all__ = [
    "RefractalAddressing",
    "address",
    "render_grid",
    "write_grid_csv",
    "read_grid_csv",
    "aligned_addressing",
    "appendix_example_descriptor",
    "block_contrast",
]

RENDER_BOUND = 24  # max chromosome length for full-grid rendering


@dataclass(frozen=True)
class RefractalAddressing:
    m: int
    n: int
    x_loci: np.ndarray  # (m, n) distinct 1-based loci
    y_loci: np.ndarray  # (m, n) distinct 1-based loci; X and Y partition [2mn]

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")
        x = np.asarray(self.x_loci, dtype=np.int64)
        y = np.asarray(self.y_loci, dtype=np.int64)
        if x.shape != (self.m, self.n) or y.shape != (self.m, self.n):
            raise ValueError("X and Y must be m-by-n matrices")
        total = 2 * self.m * self.n
        combined = np.concatenate([x.ravel(), y.ravel()])
        if sorted(combined) != list(range(1, total + 1)):
            raise ValueError("X and Y must jointly partition [2mn]")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x_loci", x)
        object.__setattr__(self, "y_loci", y)

    @property
    def chrom_len(self) -> int:
        return 2 * self.m * self.n

    @property
    def grid_side(self) -> int:
        return 1 << (self.m * self.n)


def _bin_to_int(bits: np.ndarray) -> np.ndarray:
    """Integer value of bit rows, leftmost bit most significant."""
    k = bits.shape[-1]
    weights = (1 << np.arange(k - 1, -1, -1)).astype(np.int64)
    return (bits.astype(np.int64) * weights).sum(axis=-1)


def _addresses(a: RefractalAddressing, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.ones(len(bits), dtype=np.int64)
    y = np.ones(len(bits), dtype=np.int64)
    granularity = a.grid_side >> a.n
    for i in range(a.m):
        x += granularity * _bin_to_int(bits[:, a.x_loci[i] - 1])
        y += granularity * _bin_to_int(bits[:, a.y_loci[i] - 1])
        granularity >>= a.n
    return x, y


def address(a: RefractalAddressing, g) -> tuple[int, int]:
    """Grid address (x, y), each in [1, 2^mn], of a single chromosome."""
    g = np.asarray(g, dtype=np.uint8)
    if g.shape != (a.chrom_len,):
        raise ValueError(f"chromosome length {g.shape} != {a.chrom_len}")
    x, y = _addresses(a, g[None, :])
    return int(x[0]), int(y[0])


def render_grid(
    f,
    a: RefractalAddressing,
    rng: RandomStream | None = None,
    noisy: bool = False,
) -> np.ndarray:
    """Evaluate ``f`` once on every chromosome and write its value at its
    grid address.  Returns raw values: grid[y - 1, x - 1] with row y = 1
    first.  ``f`` is a callable f(bits, rng) over bit matrices.
    """
    if a.chrom_len > RENDER_BOUND:
        raise ValueError(f"chromosome length {a.chrom_len} exceeds render bound {RENDER_BOUND}")
    side = a.grid_side
    grid = np.empty((side, side))
    for chunk in enumerate_bitstrings(a.chrom_len):
        values = np.asarray(f(chunk, rng) if noisy else f(chunk), dtype=float)
        x, y = _addresses(a, chunk)
        grid[y - 1, x - 1] = values
    return grid


def write_grid_csv(grid: np.ndarray, path) -> None:
    """Dense comma-separated matrix, row y = 1 first, repr-exact floats."""
    with open(path, "w") as fh:
        for row in grid:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_grid_csv(path) -> np.ndarray:
    with open(path) as fh:
        rows = [[float(v) for v in line.split(",")] for line in fh if line.strip()]
    return np.array(rows)


def appendix_example_descriptor(delta: float = 3.0) -> StaircaseDescriptor:
    """The 16-bit worked example: h=4, o=2, contiguous loci, targets
    (1,0), (0,1), (0,0), (1,1)."""
    loci = np.arange(1, 9, dtype=np.int64).reshape(4, 2)
    targets = np.array([[1, 0], [0, 1], [0, 0], [1, 1]], dtype=np.uint8)
    return StaircaseDescriptor(4, 2, float(delta), 16, loci, targets)


def aligned_addressing(desc: StaircaseDescriptor, m: int) -> RefractalAddressing:
    """Addressing whose top rows alternate the descriptor's step loci
    (X_1 = L_1, Y_1 = L_2, X_2 = L_3, ...), with any remaining rows filled
    by the unused loci.  Requires 2*m*o = span and height >= the number of
    L rows consumed."""
    n = desc.order
    if 2 * m * n != desc.span:
        raise ValueError("need 2*m*n equal to the descriptor span")
    x = np.zeros((m, n), dtype=np.int64)
    y = np.zeros((m, n), dtype=np.int64)
    used_rows = min(desc.height, 2 * m)
    remaining = [l for l in range(1, desc.span + 1) if l not in set(desc.loci[:used_rows].ravel())]
    rem_iter = iter(remaining)
    for r in range(2 * m):
        target = x if r % 2 == 0 else y
        row = r // 2
        if r < used_rows:
            target[row] = desc.loci[r]
        else:
            target[row] = [next(rem_iter) for _ in range(n)]
    return RefractalAddressing(m, n, x, y)


def block_contrast(grid: np.ndarray, n: int, block: int) -> float:
    """z-score contrast of one top-level x-block against the rest.

    The top addressing level splits the grid into 2^n column blocks; this
    returns (mean_in - mean_out) / sqrt(var_in/k_in + var_out/k_out) over
    pixel values, the separation statistic for that block.
    """
    side = grid.shape[1]
    width = side >> n
    if not 0 <= block < (1 << n):
        raise IndexError(f"block {block} out of range [0, {(1 << n) - 1}]")
    cols = slice(block * width, (block + 1) * width)
    inside = grid[:, cols].ravel()
    outside = np.concatenate([grid[:, : block * width], grid[:, (block + 1) * width:]], axis=1).ravel()
    se = np.sqrt(inside.var(ddof=1) / len(inside) + outside.var(ddof=1) / len(outside))
    return float((inside.mean() - outside.mean()) / se)
