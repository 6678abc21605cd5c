import numpy as np
import pytest
from scipy import stats as scipy_stats

from ugalab.problems import (
    SatFitness,
    SatInstance,
    SpinFitness,
    SpinSystem,
    brute_force_optimum,
    gen_sk,
    gen_uniform_3sat,
    read_couplings,
    read_dimacs,
    write_couplings,
    write_dimacs,
)
from ugalab.rng import RandomStream


def reference_sat_count(inst, g):
    """Independent oracle: literal-by-literal clause evaluation."""
    count = 0
    for clause in inst.clauses:
        for lit in clause:
            value = g[abs(lit) - 1]
            if (lit > 0 and value == 1) or (lit < 0 and value == 0):
                count += 1
                break
    return count


def reference_spin_fitness(sys, g):
    """Independent oracle: explicit double loop over coupled pairs."""
    spins = [1 if b else -1 for b in g]
    total = 0.0
    for i in range(sys.n_spins):
        for j in range(i + 1, sys.n_spins):
            total += sys.couplings[i, j] * spins[i] * spins[j]
    return total


# -- generation --------------------------------------------------------------


def test_gen_3sat_counts_and_validity():
    inst = gen_uniform_3sat(50, 300, RandomStream(1))
    assert inst.n_clauses == 300
    for c in inst.clauses:
        assert len({abs(l) for l in c}) == 3


def test_gen_3sat_three_vars_forced():
    inst = gen_uniform_3sat(3, 1, RandomStream(2))
    assert {abs(l) for l in inst.clauses[0]} == {1, 2, 3}


def test_gen_3sat_literal_marginals_uniform():
    # chi-square over all 2n literal slots at significance 0.01
    n = 100
    inst = gen_uniform_3sat(n, 10_000, RandomStream(3))
    counts = np.zeros(2 * n)
    for clause in inst.clauses:
        for lit in clause:
            counts[lit - 1 if lit > 0 else n - lit - 1] += 1
    # rejection only discards variable collisions, which is symmetric across
    # literals, so marginals stay uniform
    assert scipy_stats.chisquare(counts).pvalue > 0.01


def test_gen_sk():
    sys = gen_sk(1000, RandomStream(4))
    vals = sys.couplings[np.triu_indices(1000, k=1)]
    assert len(vals) == 499500
    assert abs(vals.mean()) < 0.02
    assert abs(vals.var() - 1.0) < 0.03
    assert np.count_nonzero(gen_sk(2, RandomStream(0)).couplings) == 1


# -- evaluation --------------------------------------------------------------


def test_sat_fitness_single_clause():
    inst = SatInstance(3, (( 1, 2, 3),))
    f = SatFitness(inst)
    assert f(np.array([[0, 0, 0]]))[0] == 0
    assert f(np.array([[1, 0, 0]]))[0] == 1
    neg = SatInstance(3, ((-1, -2, 3),))
    g = SatFitness(neg)
    assert g(np.array([[1, 1, 0]]))[0] == 0
    assert g(np.array([[1, 1, 1]]))[0] == 1


def test_sat_fitness_matches_reference():
    inst = gen_uniform_3sat(20, 80, RandomStream(5))
    f = SatFitness(inst)
    rng = RandomStream(6)
    for _ in range(30):
        g = rng.bits(20)
        assert f(g[None, :])[0] == reference_sat_count(inst, g)


def test_sat_fitness_monotone_under_clause_subset():
    inst = gen_uniform_3sat(15, 60, RandomStream(7))
    sub = SatInstance(15, inst.clauses[:30])
    g = RandomStream(8).bits(15)
    assert SatFitness(sub)(g[None, :])[0] <= SatFitness(inst)(g[None, :])[0]


def test_spin_fitness_examples():
    j = np.zeros((2, 2))
    j[0, 1] = 1.0
    sys = SpinSystem(2, j)
    f = SpinFitness(sys)
    assert f(np.array([[1, 1]]))[0] == pytest.approx(1.0)
    assert f(np.array([[1, 0]]))[0] == pytest.approx(-1.0)
    zero = SpinSystem(3, np.zeros((3, 3)))
    assert SpinFitness(zero)(np.array([[1, 0, 1]]))[0] == 0.0


def test_spin_fitness_matches_reference_and_flip_symmetry():
    sys = gen_sk(12, RandomStream(9))
    f = SpinFitness(sys)
    rng = RandomStream(10)
    for _ in range(20):
        g = rng.bits(12)
        assert f(g[None, :])[0] == pytest.approx(reference_spin_fitness(sys, g))
        assert f(g[None, :])[0] == pytest.approx(f((1 - g)[None, :])[0])


def test_spin_flip_delta_matches_recompute():
    sys = gen_sk(30, RandomStream(11))
    f = SpinFitness(sys)
    rng = RandomStream(12)
    for _ in range(200):
        g = rng.bits(30)
        locus = int(rng.integers(1, 31))
        flipped = g.copy()
        flipped[locus - 1] ^= 1
        direct = f(flipped[None, :])[0] - f(g[None, :])[0]
        assert f.flip_delta(g, locus) == pytest.approx(direct, abs=1e-9)


def test_brute_force_optimum():
    sys = gen_sk(10, RandomStream(13))
    f = SpinFitness(sys)
    best_val, best_g = brute_force_optimum(f, 10)
    rng = RandomStream(14)
    assert f(best_g[None, :])[0] == pytest.approx(best_val)
    for _ in range(100):
        assert f(rng.bits(10)[None, :])[0] <= best_val + 1e-12


# -- invariants of the instance types ---------------------------------------


def test_sat_instance_validation():
    with pytest.raises(ValueError):
        SatInstance(3, ((1, 1, 2),))  # repeated variable
    with pytest.raises(ValueError):
        SatInstance(3, ((1, -1, 2),))  # variable and its negation
    with pytest.raises(ValueError):
        SatInstance(3, ((1, 2, 4),))  # out of range
    with pytest.raises(ValueError):
        SatInstance(4, ((1, 2, 3, 4),))  # wrong arity


def test_spin_system_validation():
    with pytest.raises(ValueError):
        SpinSystem(2, np.array([[0.0, 1.0], [2.0, 0.0]]))  # below diagonal
    with pytest.raises(ValueError):
        SpinSystem(2, np.eye(2))  # on diagonal


# -- file formats ------------------------------------------------------------


def test_dimacs_golden_and_round_trip(tmp_path):
    inst = SatInstance(3, ((1, 2, 3),))
    path = tmp_path / "one.cnf"
    write_dimacs(inst, path)
    assert path.read_text() == "p cnf 3 1\n1 2 3 0\n"
    assert read_dimacs(path) == inst

    big = gen_uniform_3sat(40, 150, RandomStream(15))
    path2 = tmp_path / "big.cnf"
    write_dimacs(big, path2)
    assert read_dimacs(path2) == big


def test_dimacs_errors(tmp_path):
    path = tmp_path / "bad.cnf"
    path.write_text("p cnf 3 1\n1 1 2 0\n")
    with pytest.raises(ValueError):
        read_dimacs(path)  # repeated variable in 3SAT-strict mode
    path.write_text("p dnf 3 1\n1 2 3 0\n")
    with pytest.raises(ValueError):
        read_dimacs(path)
    path.write_text("p cnf 3 1\n1 2 5 0\n")
    with pytest.raises(ValueError):
        read_dimacs(path)
    path.write_text("1 2 3 0\n")
    with pytest.raises(ValueError):
        read_dimacs(path)


def test_couplings_golden_and_round_trip(tmp_path):
    j = np.zeros((2, 2))
    j[0, 1] = 1.0
    path = tmp_path / "tiny.j"
    write_couplings(SpinSystem(2, j), path)
    got = read_couplings(path)
    assert got.n_spins == 2 and got.couplings[0, 1] == 1.0

    sys = gen_sk(15, RandomStream(16))
    path2 = tmp_path / "sk.j"
    write_couplings(sys, path2)
    assert np.array_equal(read_couplings(path2).couplings, sys.couplings)


def test_couplings_errors(tmp_path):
    path = tmp_path / "bad.j"
    path.write_text("2\n1 2 1.0\n1 2 2.0\n")
    with pytest.raises(ValueError):
        read_couplings(path)  # duplicate
    path.write_text("2\n2 1 1.0\n")
    with pytest.raises(ValueError):
        read_couplings(path)  # i >= j
    path.write_text("2\n1 3 1.0\n")
    with pytest.raises(ValueError):
        read_couplings(path)  # out of range
