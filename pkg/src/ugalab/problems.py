"""MAX-3SAT and Sherrington-Kirkpatrick fitness backends with file IO.

SAT chromosomes assign bit 1 = variable true; fitness is the number of
satisfied clauses (returned as floats so sigma scaling is uniform across
problems).  Spin chromosomes map bit 1 to spin +1 and bit 0 to spin -1;
fitness is the negated energy sum over coupled pairs, so maximizing fitness
minimizes energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import enumerate_bitstrings
from .rng import RandomStream

__all__ = [
    "SatInstance",
    "SpinSystem",
    "SatFitness",
    "SpinFitness",
    "gen_uniform_3sat",
    "sat_fitness",
    "spin_fitness",
    "gen_sk",
    "write_dimacs",
    "read_dimacs",
    "write_couplings",
    "read_couplings",
    "brute_force_optimum",
]

BRUTE_FORCE_BOUND = 20


@dataclass(frozen=True)
class SatInstance:
    """3SAT instance: clauses are triples of nonzero literals (positive =
    variable, negative = its negation), three distinct variables each."""

    n_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("n_vars must be positive")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have 3 literals")
            if any(l == 0 or abs(l) > self.n_vars for l in c):
                raise ValueError(f"clause {c} has a literal out of range")
            if len({abs(l) for l in c}) != 3:
                raise ValueError(f"clause {c} repeats a variable")
        object.__setattr__(self, "clauses", clauses)

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class SpinSystem:
    """Couplings J[i, j] for 1 <= i < j <= n_spins, stored as a strictly
    upper-triangular matrix (everything on or below the diagonal is 0)."""

    n_spins: int
    couplings: np.ndarray

    def __post_init__(self):
        if self.n_spins < 1:
            raise ValueError("n_spins must be positive")
        j = np.asarray(self.couplings, dtype=float)
        if j.shape != (self.n_spins, self.n_spins):
            raise ValueError("couplings must be an n_spins x n_spins matrix")
        if np.any(np.tril(j) != 0.0):
            raise ValueError("couplings must be strictly upper-triangular")
        j.setflags(write=False)
        object.__setattr__(self, "couplings", j)


def gen_uniform_3sat(n: int, m: int, rng: RandomStream) -> SatInstance:
    """Uniform random 3SAT: each clause draws 3 literals uniformly with
    replacement from the 2n literals; clauses repeating a variable or
    pairing a variable with its negation are discarded and redrawn."""
    if n < 3:
        raise ValueError("need at least 3 variables")
    if m < 1:
        raise ValueError("need at least one clause")
    clauses = []
    while len(clauses) < m:
        raw = rng.integers(0, 2 * n, size=3)
        lits = tuple(int(v) + 1 if v < n else -(int(v) - n + 1) for v in raw)
        if len({abs(l) for l in lits}) != 3:
            continue
        clauses.append(lits)
    return SatInstance(n, tuple(clauses))


class SatFitness:
    """Vectorized clause-count fitness over (k, n_vars) bit matrices."""

    def __init__(self, inst: SatInstance):
        self.inst = inst
        self.span = inst.n_vars
        cls = np.array(inst.clauses, dtype=np.int64)
        self._vars = np.abs(cls) - 1            # (m, 3) 0-based variable index
        self._want = (cls > 0).astype(np.uint8)  # bit value satisfying the literal

    def __call__(self, bits: np.ndarray, rng: RandomStream | None = None) -> np.ndarray:
        bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        if bits.shape[1] != self.span:
            raise ValueError(f"chromosome length {bits.shape[1]} != n_vars {self.span}")
        lit_true = bits[:, self._vars] == self._want  # (k, m, 3)
        return lit_true.any(axis=2).sum(axis=1).astype(float)


def sat_fitness(inst: SatInstance, g) -> int:
    """Number of clauses satisfied by a single assignment."""
    return int(SatFitness(inst)(np.asarray(g, dtype=np.uint8)[None, :])[0])


class SpinFitness:
    """Vectorized negated-energy fitness over (k, n_spins) bit matrices."""

    def __init__(self, sys: SpinSystem):
        self.sys = sys
        self.span = sys.n_spins
        # symmetrize so fitness = 0.5 * s (J + J^T) s^T = sum_{i<j} J_ij s_i s_j
        self._jsym = sys.couplings + sys.couplings.T

    def __call__(self, bits: np.ndarray, rng: RandomStream | None = None) -> np.ndarray:
        bits = np.atleast_2d(np.asarray(bits, dtype=np.uint8))
        if bits.shape[1] != self.span:
            raise ValueError(f"chromosome length {bits.shape[1]} != n_spins {self.span}")
        spins = bits.astype(float) * 2.0 - 1.0
        return 0.5 * ((spins @ self._jsym) * spins).sum(axis=1)

    def flip_delta(self, g, locus: int) -> float:
        """Fitness change from flipping the bit at ``locus`` (1-based),
        without recomputing the full sum."""
        if not 1 <= locus <= self.span:
            raise IndexError(f"locus {locus} out of range [1, {self.span}]")
        spins = np.asarray(g, dtype=np.uint8).astype(float) * 2.0 - 1.0
        k = locus - 1
        return float(-2.0 * spins[k] * (self._jsym[k] @ spins))


def spin_fitness(sys: SpinSystem, g) -> float:
    """Negated energy of a single spin configuration."""
    return float(SpinFitness(sys)(np.asarray(g, dtype=np.uint8)[None, :])[0])


def gen_sk(ell: int, rng: RandomStream) -> SpinSystem:
    """Couplings J_ij ~ N(0,1) i.i.d. for i < j."""
    if ell < 2:
        raise ValueError("need at least 2 spins")
    j = np.triu(rng.normal((ell, ell)), k=1)
    return SpinSystem(ell, j)


def brute_force_optimum(fitness, span: int) -> tuple[float, np.ndarray]:
    """True maximum over all 2^span chromosomes (span <= 20). Oracle for
    gauging heuristic runs on small instances."""
    if span > BRUTE_FORCE_BOUND:
        raise ValueError(f"span {span} exceeds brute-force bound {BRUTE_FORCE_BOUND}")
    best_val = -np.inf
    best_g = None
    for chunk in enumerate_bitstrings(span):
        vals = np.asarray(fitness(chunk), dtype=float)
        i = int(vals.argmax())
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_g = chunk[i].copy()
    return best_val, best_g


# -- DIMACS CNF --------------------------------------------------------------


def write_dimacs(inst: SatInstance, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"p cnf {inst.n_vars} {inst.n_clauses}\n")
        for c in inst.clauses:
            fh.write(" ".join(str(l) for l in c) + " 0\n")


def read_dimacs(path, strict_3sat: bool = True) -> SatInstance:
    n_vars = n_clauses = None
    clauses: list[tuple[int, ...]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ValueError(f"{path}:{lineno}: malformed header {line!r}")
                n_vars, n_clauses = int(parts[2]), int(parts[3])
                continue
            if n_vars is None:
                raise ValueError(f"{path}:{lineno}: clause before header")
            lits = [int(x) for x in line.split()]
            if not lits or lits[-1] != 0:
                raise ValueError(f"{path}:{lineno}: clause not zero-terminated")
            lits = lits[:-1]
            if any(l == 0 or abs(l) > n_vars for l in lits):
                raise ValueError(f"{path}:{lineno}: literal out of range")
            if strict_3sat:
                if len(lits) != 3:
                    raise ValueError(f"{path}:{lineno}: clause arity {len(lits)} != 3")
                if len({abs(l) for l in lits}) != 3:
                    raise ValueError(f"{path}:{lineno}: clause repeats a variable")
            clauses.append(tuple(lits))
    if n_vars is None:
        raise ValueError(f"{path}: missing 'p cnf' header")
    if len(clauses) != n_clauses:
        raise ValueError(f"{path}: header claims {n_clauses} clauses, found {len(clauses)}")
    return SatInstance(n_vars, tuple(clauses))


# -- coupling triples --------------------------------------------------------
#
# Text format: first line is the spin count, then one "i j J_ij" triple per
# line with 1 <= i < j.  Values are serialized with repr() so the binary
# double round-trips exactly.


def write_couplings(sys: SpinSystem, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"{sys.n_spins}\n")
        rows, cols = np.nonzero(sys.couplings)
        for i, j in zip(rows, cols):
            fh.write(f"{i + 1} {j + 1} {float(sys.couplings[i, j])!r}\n")


def read_couplings(path) -> SpinSystem:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"{path}: empty couplings file")
    try:
        ell = int(lines[0])
    except ValueError as exc:
        raise ValueError(f"{path}:1: malformed spin count") from exc
    j = np.zeros((ell, ell))
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'i j value'")
        a, b, val = int(parts[0]), int(parts[1]), float(parts[2])
        if not 1 <= a < b <= ell:
            raise ValueError(f"{path}:{lineno}: need 1 <= i < j <= {ell}, got ({a}, {b})")
        if (a, b) in seen:
            raise ValueError(f"{path}:{lineno}: duplicate coupling ({a}, {b})")
        seen.add((a, b))
        j[a - 1, b - 1] = val
    return SpinSystem(ell, j)
