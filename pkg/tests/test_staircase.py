import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ugalab.rng import RandomStream
from ugalab.schema import SchemaModel
from ugalab.staircase import (
    StaircaseDescriptor,
    StaircaseFunction,
    analytic_signals,
    basic_form,
    brute_force_schema_mean,
    evaluate,
    make_basic,
    random_embedding,
    read_descriptor,
    stage_membership,
    stage_schema,
    step_schema,
    write_descriptor,
)


def reference_evaluate(desc, g):
    """Independent oracle: direct walk of the step list, noiseless."""
    x = 0.0
    for i in range(desc.height):
        block = [g[l - 1] for l in desc.loci[i]]
        if block == list(desc.targets[i]):
            x += desc.increment
        else:
            x -= desc.increment / (2**desc.order - 1)
            break
    return x


def test_make_basic_layout():
    d = make_basic(2, 2, 1.0)
    assert d.span == 4
    assert np.array_equal(d.loci, [[1, 2], [3, 4]])
    assert np.array_equal(d.targets, [[1, 1], [1, 1]])
    assert make_basic(1, 1, 0.3).span == 1
    assert make_basic(50, 4, 0.3).span == 200


@pytest.mark.parametrize("h,o,delta", [(0, 1, 1.0), (1, 0, 1.0), (1, 1, 0.0), (1, 1, -2.0)])
def test_make_basic_rejects_bad_parameters(h, o, delta):
    with pytest.raises(ValueError):
        make_basic(h, o, delta)


def test_basic_form():
    emb = random_embedding(50, 4, 0.3, 20000, RandomStream(1))
    assert basic_form(emb) == make_basic(50, 4, 0.3)
    basic = make_basic(2, 2, 1.0)
    assert basic_form(basic) == basic
    arbitrary = StaircaseDescriptor(
        2, 2, 1.0, 9, np.array([[9, 2], [5, 7]]), np.array([[0, 1], [1, 0]])
    )
    assert basic_form(arbitrary) == make_basic(2, 2, 1.0)


def test_random_embedding():
    d = random_embedding(2, 2, 1.0, 4, RandomStream(0))
    assert sorted(d.loci.ravel()) == [1, 2, 3, 4]
    d2 = random_embedding(50, 4, 0.3, 20000, RandomStream(0))
    assert len(set(d2.loci.ravel())) == 200
    with pytest.raises(ValueError):
        random_embedding(2, 2, 1.0, 3, RandomStream(0))


def test_evaluate_hand_traces():
    d = make_basic(2, 2, 1.0)
    assert evaluate(d, [1, 1, 1, 1], noisy=False) == pytest.approx(2.0)
    assert evaluate(d, [1, 1, 0, 1], noisy=False) == pytest.approx(2 / 3)
    assert evaluate(d, [0, 0, 1, 1], noisy=False) == pytest.approx(-1 / 3)
    with pytest.raises(ValueError):
        evaluate(d, [1, 1, 1], noisy=False)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**9 - 1))
@settings(max_examples=200, deadline=None)
def test_evaluate_matches_reference_walk(h, o, gidx):
    d = make_basic(h, o, 0.7)
    g = [(gidx >> j) & 1 for j in range(d.span)]
    assert evaluate(d, g, noisy=False) == pytest.approx(reference_evaluate(d, g))


def test_stage_membership():
    d = make_basic(2, 2, 1.0)
    assert stage_membership(d, [1, 1, 1, 1]) == 2
    assert stage_membership(d, [1, 1, 0, 1]) == 1
    assert stage_membership(d, [0, 1, 1, 1]) == 0


def test_noise_is_standard_normal():
    d = make_basic(2, 2, 1.0)
    f_noisy = StaircaseFunction(d, noisy=True)
    f_clean = StaircaseFunction(d, noisy=False)
    rng = RandomStream(31)
    bits = rng.bits((100_000, 4))
    residual = f_noisy(bits, rng) - f_clean(bits)
    assert abs(residual.mean()) < 0.02
    assert abs(residual.var() - 1.0) < 0.03


def test_analytic_signals():
    d = make_basic(2, 2, 1.0)
    assert analytic_signals(d, 2) == (2.0, 0.25, 1.0)
    assert analytic_signals(d, 1)[:2] == (1.0, 1.0)
    d2 = make_basic(50, 4, 0.3)
    assert analytic_signals(d2, 3).step_signal == pytest.approx(0.3 / 2**8)
    assert analytic_signals(d2, 3).step_signal == pytest.approx(0.001171875)
    with pytest.raises(IndexError):
        analytic_signals(d, 3)


def test_brute_force_schema_mean_examples():
    d = make_basic(2, 2, 1.0)
    step2 = SchemaModel(4, {3: 1, 4: 1})
    stage1 = SchemaModel(4, {1: 1, 2: 1})
    everything = SchemaModel(4)
    assert brute_force_schema_mean(d, step2) == pytest.approx(0.25, abs=1e-12)
    assert brute_force_schema_mean(d, everything) == pytest.approx(0.0, abs=1e-12)
    assert brute_force_schema_mean(d, step2) - brute_force_schema_mean(d, everything) == pytest.approx(0.25)
    assert brute_force_schema_mean(d, stage1) == pytest.approx(1.0, abs=1e-12)


def test_brute_force_rejects_large_span():
    big = random_embedding(2, 2, 1.0, 30, RandomStream(0))
    with pytest.raises(ValueError):
        brute_force_schema_mean(big, SchemaModel(30))


def test_permutation_equivariance():
    rng = RandomStream(101)
    d = random_embedding(2, 3, 0.5, 10, rng)
    perm = rng.gen.permutation(10)  # position i moves to perm[i] (0-based)
    permuted_loci = perm[d.loci - 1] + 1
    d_perm = StaircaseDescriptor(d.height, d.order, d.increment, d.span, permuted_loci, d.targets)
    for _ in range(50):
        g = rng.bits(10)
        g_perm = np.empty(10, dtype=np.uint8)
        g_perm[perm] = g
        assert evaluate(d, g, noisy=False) == evaluate(d_perm, g_perm, noisy=False)


def test_step_and_stage_schemas():
    d = make_basic(2, 2, 1.0)
    assert step_schema(d, 2).assignment == {3: 1, 4: 1}
    assert stage_schema(d, 2).assignment == {1: 1, 2: 1, 3: 1, 4: 1}
    assert stage_schema(d, 0).assignment == {}


def test_descriptor_file_round_trip(tmp_path):
    d = random_embedding(3, 2, 0.1 + 0.2, 17, RandomStream(8))  # awkward float on purpose
    path = tmp_path / "desc.txt"
    write_descriptor(d, path)
    assert read_descriptor(path) == d


def test_descriptor_parser_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("h 2\no 2\ndelta 1.0\n")
    with pytest.raises(ValueError):
        read_descriptor(path)
    path.write_text("h 2\no 2\ndelta 1.0\nell 4\nL 1 2\nL 3 4\nV 1 1\n")
    with pytest.raises(ValueError):
        read_descriptor(path)


def test_descriptor_invariants_enforced():
    with pytest.raises(ValueError):  # duplicate loci
        StaircaseDescriptor(2, 2, 1.0, 4, np.array([[1, 2], [2, 4]]), np.ones((2, 2)))
    with pytest.raises(ValueError):  # h*o > ell
        StaircaseDescriptor(2, 2, 1.0, 3, np.array([[1, 2], [3, 3]]), np.ones((2, 2)))
    with pytest.raises(ValueError):  # non-binary targets
        StaircaseDescriptor(2, 2, 1.0, 4, np.array([[1, 2], [3, 4]]), np.full((2, 2), 2))
