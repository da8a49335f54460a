import numpy as np
import pytest
from hypothesis import given, strategies as st

from sepvar import matrixlab as ml
from sepvar.combinatorics import Composition, ParameterError, Permutation
from sepvar.matrixlab import (
    BlockTuple,
    MatrixTuple,
    ResamplingError,
    construct_max_general,
    construct_pair,
    d_matrix,
    degenerate_tuple,
    degeneration_check,
    is_max_general,
    is_simple,
    is_supermax_general,
    necklaces,
    numerical_rank,
    random_tuple,
    rank_condition,
    scramble_matrix,
    trace_discrepancy,
    trace_scale,
    trace_word,
)


def cnormal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


# basics


def test_random_tuple_deterministic():
    assert np.array_equal(random_tuple(2, 2, 1).matrices, random_tuple(2, 2, 1).matrices)
    assert not np.array_equal(random_tuple(3, 3, 1).matrices, random_tuple(3, 3, 2).matrices)
    assert random_tuple(3, 2, 0).matrices.dtype == np.complex128


def test_matrix_tuple_shape_checked():
    with pytest.raises(ParameterError):
        MatrixTuple(np.zeros((2, 2, 3)))
    with pytest.raises(ParameterError):
        random_tuple(0, 2, 0)


def test_numerical_rank_relative():
    assert numerical_rank(np.diag([1.0, 1e-9])) == 1
    assert numerical_rank(np.diag([1.0, 1e-7])) == 2
    assert numerical_rank(1e-20 * np.diag([1.0, 1.0])) == 2
    assert numerical_rank(np.zeros((3, 3))) == 0


def test_block_tuple_fit():
    with pytest.raises(ParameterError):
        BlockTuple(random_tuple(2, 3, 0), Composition((1, 1)))


# simplicity


def test_simple_examples():
    assert is_simple(random_tuple(2, 4, 7))
    assert is_simple(MatrixTuple(np.array([[[5.0]]])))
    assert not is_simple(MatrixTuple([np.diag([1, 2]), np.diag([3, 4])]))


def test_random_simple_rate():
    assert sum(is_simple(random_tuple(2, 3, s)) for s in range(100)) >= 99


def test_reducible_detected():
    M = np.array(random_tuple(3, 4, 3).matrices)
    M[:, 2:, :2] = 0
    assert not is_simple(MatrixTuple(M))
    # direct sum of two copies
    B = random_tuple(2, 2, 4).matrices
    assert not is_simple(MatrixTuple(np.kron(np.eye(2), B)))


@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(2, 3), st.booleans())
def test_simplicity_conjugation_invariant(seed, p, n, reducible):
    rng = np.random.default_rng(seed)
    M = cnormal(rng, (n, p, p))
    if reducible:
        M[:, 1:, 0] = 0
    A = MatrixTuple(M)
    g = cnormal(rng, (p, p))
    assert is_simple(A) == is_simple(A.conjugate_by(g)) == (not reducible)


# d-map


def test_d_matrix_scalar_column():
    b, bp = np.array([1 + 2j, 3.0]), np.array([0.5, -1j])
    D = d_matrix(MatrixTuple(b.reshape(2, 1, 1)), MatrixTuple(bp.reshape(2, 1, 1)))
    assert D.matrix.shape == (2, 1)
    assert np.allclose(D.matrix[:, 0], b - bp)


def test_d_matrix_applies_map():
    rng = np.random.default_rng(0)
    B, Bp = random_tuple(3, 2, 1), random_tuple(3, 3, 2)
    X = cnormal(rng, (3, 2))
    want = np.concatenate([(X @ Bi - Bpi @ X).reshape(-1, order="F") for Bi, Bpi in zip(B, Bp)])
    assert np.allclose(d_matrix(B, Bp).matrix @ X.reshape(-1, order="F"), want)


def test_d_matrix_length_mismatch():
    with pytest.raises(ParameterError):
        d_matrix(random_tuple(2, 2, 0), random_tuple(3, 2, 0))


@pytest.mark.parametrize("seed", range(100))
def test_schur_and_rank_nullity(seed):
    rng = np.random.default_rng(seed)
    p1, p2, n = (int(x) for x in rng.integers([1, 1, 2], [5, 5, 5]))
    B = random_tuple(n, p1, seed)
    C = random_tuple(n, p2, seed + 500)
    same = d_matrix(B, B)
    other = d_matrix(B, C)
    assert same.hom_dim == 1
    assert other.hom_dim == 0
    assert other.ext_dim == (n - 1) * p1 * p2
    for D, a, b in ((same, p1, p1), (other, p1, p2)):
        assert D.ext_dim + D.rank == n * a * b
        assert D.ext_dim - D.hom_dim == (n - 1) * a * b


def test_hom_dim_at_least_one_for_reducible():
    M = np.array(random_tuple(2, 3, 1).matrices)
    M[:, 1:, 0] = 0
    B = MatrixTuple(M)
    assert d_matrix(B, B).hom_dim >= 1


# rank condition


def scalars(rng, n):
    return MatrixTuple(cnormal(rng, (n, 1, 1)))


def test_rank_condition_vacuous_for_two():
    rng = np.random.default_rng(1)
    for _ in range(100):
        assert rank_condition(scalars(rng, 2), scalars(rng, 2), cnormal(rng, (2, 1, 1)), cnormal(rng, (2, 1, 1)))


def test_rank_condition_generic_false_for_three():
    rng = np.random.default_rng(2)
    hits = sum(
        not rank_condition(scalars(rng, 3), scalars(rng, 3), cnormal(rng, (3, 1, 1)), cnormal(rng, (3, 1, 1)))
        for _ in range(100)
    )
    assert hits >= 99


def test_rank_condition_scalar_dependent_form():
    # for 1x1 blocks X b11 - b22 X and b11 X - X b22 span the same line
    rng = np.random.default_rng(3)
    for _ in range(100):
        b11, b22 = scalars(rng, 3), scalars(rng, 3)
        C = cnormal(rng, (3, 1, 1))
        X, w = cnormal(rng, (1, 1)), complex(*rng.standard_normal(2))
        Cp = X @ b11.matrices - b22.matrices @ X - w * C
        assert rank_condition(b11, b22, C, Cp)


@pytest.mark.parametrize("seed", range(30))
def test_rank_condition_orbit_oracle(seed):
    """``A' = g A g^{-1}`` with ``g = [[wI, X], [0, zI]]`` must pass the test."""
    rng = np.random.default_rng(seed)
    p1, p2, n = 2, 3, 3
    B11, B22 = random_tuple(n, p1, seed), random_tuple(n, p2, seed + 1)
    C = cnormal(rng, (n, p1, p2))
    A = np.zeros((n, p1 + p2, p1 + p2), dtype=complex)
    A[:, :p1, :p1], A[:, p1:, p1:], A[:, :p1, p1:] = B11.matrices, B22.matrices, C
    w, z = cnormal(rng, 2)
    g = np.block([[w * np.eye(p1), cnormal(rng, (p1, p2))], [np.zeros((p2, p1)), z * np.eye(p2)]])
    Ap = MatrixTuple(A).conjugate_by(g).matrices
    assert np.allclose(Ap[:, :p1, :p1], B11.matrices) and np.allclose(Ap[:, p1:, p1:], B22.matrices)
    assert rank_condition(B11, B22, C, Ap[:, :p1, p1:])
    # an unrelated superdiagonal block does not
    assert not rank_condition(B11, B22, C, cnormal(rng, (n, p1, p2)))


@given(st.integers(0, 10**6), st.complex_numbers(min_magnitude=0.1, max_magnitude=10))
def test_rank_condition_symmetries(seed, scale):
    rng = np.random.default_rng(seed)
    n, p1, p2 = 3, 2, 2
    B11, B22 = random_tuple(n, p1, seed), random_tuple(n, p2, seed + 1)
    C = cnormal(rng, (n, p1, p2))
    X = cnormal(rng, (p1, p2))
    dependent = 0.5 * C + (X @ B22.matrices - B11.matrices @ X)
    for Cp in (dependent, cnormal(rng, (n, p1, p2))):
        base = rank_condition(B11, B22, C, Cp)
        assert rank_condition(B11, B22, Cp, C) == base
        assert rank_condition(B11, B22, scale * C, Cp) == base
        assert rank_condition(B11, B22, C, scale * Cp) == base


def test_rank_condition_shape_check():
    B = random_tuple(3, 2, 0)
    with pytest.raises(ParameterError):
        rank_condition(B, B, np.zeros((3, 2, 1)), np.zeros((3, 2, 2)))


# constructions


def test_single_block_is_simple():
    A = construct_max_general((3,), 2, 0)
    assert is_simple(A.tuple)
    A, Ap = construct_pair((3,), (1,), 2, 0)
    assert A is Ap or np.array_equal(A.tuple.matrices, Ap.tuple.matrices)


def test_scalar_extension_nontrivial():
    A = construct_max_general((1, 1), 3, 4)
    D = ml.extension_map(A.diagonal(1), A.diagonal(2))
    aug = np.column_stack([D.matrix, A.block(1, 2).reshape(-1)])
    assert D.matrix.shape == (3, 1) and numerical_rank(aug) == 2


@pytest.mark.parametrize("pi", [(2, 1), (1, 2, 1), (2, 2), (1, 1, 1, 1)])
def test_max_general_predicates(pi):
    A = construct_max_general(pi, 2, 11)
    assert A.is_upper_triangular() and is_max_general(A)


def test_max_general_deterministic():
    a = construct_max_general((2, 1), 3, 5).tuple.matrices
    b = construct_max_general((2, 1), 3, 5).tuple.matrices
    assert np.array_equal(a, b)


def test_swapped_scalars():
    A, Ap = construct_pair((1, 1), (2, 1), 2, 0)
    assert np.allclose(A.block(1, 1), Ap.block(2, 2)) and np.allclose(A.block(2, 2), Ap.block(1, 1))


def test_supermaximal_pair():
    A, Ap = construct_pair((1, 1, 1), (2, 3, 1), 3, 0, supermaximal=True)
    assert is_supermax_general(A, Ap, Permutation((2, 3, 1)))


@pytest.mark.parametrize("pi,sigma", [((2, 1, 1), (3, 1, 2)), ((1, 2, 1), (2, 3, 1)), ((1, 3), (2, 1))])
def test_pair_diagonal_placement(pi, sigma):
    A, Ap = construct_pair(pi, sigma, 2, 3)
    s = Permutation(sigma)
    assert Ap.pi == ml.target_composition(Composition(pi), s)
    for i in range(1, len(pi) + 1):
        assert np.array_equal(A.block(i, i), Ap.block(s(i), s(i)))


def test_pair_size_mismatch():
    with pytest.raises(ParameterError):
        construct_pair((1, 1), (1, 2, 3), 2, 0)


def test_resampling_error_reports_seed(monkeypatch):
    monkeypatch.setattr(ml, "is_simple", lambda A, tol=ml.DEFAULT_TOL: False)
    with pytest.raises(ResamplingError, match="seed=17"):
        construct_max_general((2, 1), 2, 17)


# scramble matrix


def test_scramble_examples():
    assert np.array_equal(scramble_matrix((1, 1), (2, 1)), [[0, 1], [1, 0]])
    assert np.array_equal(scramble_matrix((2, 1, 1), (1, 2, 3)), np.eye(4))
    S = scramble_matrix((2, 1), (2, 1))
    assert np.array_equal(S, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def test_scramble_is_permutation():
    S = scramble_matrix((1, 2, 1), (3, 1, 2))
    assert np.array_equal(S @ S.T, np.eye(4))
    with pytest.raises(ParameterError):
        scramble_matrix((1, 1), (1,))


# degeneration


@pytest.mark.parametrize("seed", range(20))
def test_degeneration_linear(seed):
    splits = [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1)]
    A, Ap = construct_pair(splits[seed % len(splits)], (2, 1), 3, seed)
    ts = [10.0**-k for k in range(1, 7)]
    ratios = [r / t for r, t in zip(degeneration_check(A, Ap, ts), ts)]
    assert min(ratios) > 0 and max(ratios) / min(ratios) <= 10


def test_degenerate_tuple_at_zero():
    A, Ap = construct_pair((1, 2), (2, 1), 2, 1)
    assert np.array_equal(degenerate_tuple(A, Ap, 0.0).matrices, A.tuple.matrices)


def test_degeneration_fixed_point():
    B = random_tuple(2, 1, 0).matrices
    M = np.zeros((2, 2, 2), dtype=complex)
    M[:, 0, 0] = M[:, 1, 1] = B[:, 0, 0]
    A = BlockTuple(MatrixTuple(M), Composition((1, 1)))
    assert degeneration_check(A, A, [0.1, 1e-3]) == [0.0, 0.0]


def test_degeneration_preconditions():
    A, Ap = construct_pair((1, 2), (2, 1), 2, 1)
    with pytest.raises(ParameterError):
        degeneration_check(A, A, [0.1])
    with pytest.raises(ParameterError):
        degeneration_check(A, Ap, [0.0])
    B, Bp = construct_pair((1, 1, 1), (2, 1, 3), 2, 1)
    with pytest.raises(ParameterError):
        degeneration_check(B, Bp, [0.1])


# trace words


def test_trace_identity():
    assert trace_word(MatrixTuple(np.eye(3)[None]), [1]) == 3


def test_trace_word_errors():
    A = random_tuple(2, 2, 0)
    with pytest.raises(ParameterError):
        trace_word(A, [])
    with pytest.raises(ParameterError):
        trace_word(A, [3])


@given(st.lists(st.integers(1, 3), min_size=1, max_size=6), st.integers(0, 5), st.integers(0, 100))
def test_trace_cyclic(word, r, seed):
    A = random_tuple(3, 3, seed)
    r %= len(word)
    assert np.isclose(trace_word(A, word), trace_word(A, word[r:] + word[:r]))


@given(st.lists(st.integers(1, 2), min_size=1, max_size=5), st.integers(0, 100))
def test_trace_block_triangular(word, seed):
    A = construct_max_general((2, 1, 2), 2, seed)
    total = sum(trace_word(A.diagonal(i), word) for i in (1, 2, 3))
    assert np.isclose(trace_word(A.tuple, word), total)


def test_necklace_counts():
    # binary necklaces of lengths 1..4: 2, 3, 4, 6
    assert len(necklaces(2, 4)) == 2 + 3 + 4 + 6
    assert all(w == min(w[i:] + w[:i] for i in range(len(w))) for w in necklaces(3, 4))
    with pytest.raises(ParameterError):
        necklaces(5, 12)


def test_trace_discrepancy_self():
    A = random_tuple(2, 3, 0)
    assert trace_discrepancy(A, A, 6) == 0


@pytest.mark.parametrize("L", [2, 6, 8])
def test_pair_traces_agree(L):
    A, Ap = construct_pair((1, 2, 1), (3, 1, 2), 2, L)
    assert trace_discrepancy(A.tuple, Ap.tuple, L) < 1e-8 * trace_scale(A.tuple, L)


def test_independent_traces_differ():
    hits = sum(
        trace_discrepancy(random_tuple(2, 2, s), random_tuple(2, 2, s + 1000), 2) > 0.1 for s in range(100)
    )
    assert hits >= 99


def test_trace_discrepancy_shape_check():
    with pytest.raises(ParameterError):
        trace_discrepancy(random_tuple(2, 2, 0), random_tuple(2, 3, 0))
