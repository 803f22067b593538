import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tforge.gfp_linalg import (
    GFMatrix,
    PrimeModulus,
    RrefBuilder,
    Scalar,
    SubspaceBasis,
    contains,
    dump_matrix,
    is_prime,
    load_matrix,
    mat_mul,
    nilpotency_index,
    rref_extend,
    span_of,
    transpose,
)

PRIMES = [2, 3, 5, 7, 97, 2147483647]
prime_st = st.sampled_from(PRIMES)


def _random_mat(rng, rows, cols, p):
    return GFMatrix(rng.integers(0, p, size=(rows, cols)), PrimeModulus(p))


def test_prime_modulus_rejects_composites():
    for bad in (0, 1, 4, 6, 9, 2147483646):
        with pytest.raises(ValueError):
            PrimeModulus(bad)
    assert is_prime(2147483647)


def test_scalar_inverse_all_residues():
    mod = PrimeModulus(13)
    for v in range(1, 13):
        s = Scalar(v, mod)
        assert (s.inverse() * s).value == 1


@settings(max_examples=60, deadline=None)
@given(prime_st, st.integers(0, 2**32))
def test_scalar_reduction_matches_python_int(p, v):
    assert Scalar(v, PrimeModulus(p)).value == v % p


@settings(max_examples=40, deadline=None)
@given(prime_st, st.integers(0, 2**63 - 1), st.integers(2, 5), st.integers(2, 5),
       st.integers(2, 5))
def test_matmul_associative_and_matches_bigint(p, seed, a, b, c):
    rng = np.random.default_rng(seed)
    x = _random_mat(rng, a, b, p)
    y = _random_mat(rng, b, c, p)
    z = _random_mat(rng, c, a, p)
    left = mat_mul(mat_mul(x, y), z)
    right = mat_mul(x, mat_mul(y, z))
    assert np.array_equal(left.array, right.array)
    # reference product through unbounded Python ints
    ref = np.array(
        [[sum(int(x.array[i, k]) * int(y.array[k, j]) for k in range(b)) % p
          for j in range(c)] for i in range(a)],
        dtype=np.int64,
    )
    assert np.array_equal(mat_mul(x, y).array, ref)


def test_matmul_huge_prime_stays_exact():
    p = 2147483647
    rng = np.random.default_rng(7)
    x = _random_mat(rng, 8, 8, p)
    y = _random_mat(rng, 8, 8, p)
    got = mat_mul(x, y).array
    ref = (np.array(x.array, dtype=object) @ np.array(y.array, dtype=object)) % p
    assert np.array_equal(got, ref.astype(np.int64))


def test_transpose_involution_and_product_rule():
    rng = np.random.default_rng(3)
    x = _random_mat(rng, 4, 6, 5)
    y = _random_mat(rng, 6, 3, 5)
    assert np.array_equal(transpose(transpose(x)).array, x.array)
    assert np.array_equal(
        transpose(mat_mul(x, y)).array, mat_mul(transpose(y), transpose(x)).array
    )


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([2, 3, 7]), st.integers(1, 8))
def test_rref_insertion_order_irrelevant(seed, p, count):
    rng = np.random.default_rng(seed)
    vecs = [rng.integers(0, p, size=12) for _ in range(count)]
    mod = PrimeModulus(p)
    b1 = RrefBuilder(12, mod)
    for v in vecs:
        b1.insert(v)
    b2 = RrefBuilder(12, mod)
    for v in reversed(vecs):
        b2.insert(v)
    assert b1.finish() == b2.finish()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from([3, 5]))
def test_rref_membership_and_idempotence(seed, p):
    rng = np.random.default_rng(seed)
    mod = PrimeModulus(p)
    vecs = [rng.integers(0, p, size=10) for _ in range(5)]
    basis = span_of(vecs, 10, mod)
    # every generator is contained; random combinations are contained
    for v in vecs:
        assert contains(basis, v)
    combo = sum(int(rng.integers(0, p)) * v for v in vecs) % p
    assert basis.contains_vector(combo.astype(np.int64))
    # inserting members changes nothing
    ext, was_new = rref_extend(basis, vecs[0])
    assert not was_new and ext == basis
    # reduce returns the zero vector exactly on members
    assert not basis.reduce(combo.astype(np.int64)).any()


def test_rref_builder_grows_past_capacity():
    mod = PrimeModulus(2)
    builder = RrefBuilder(64, mod, capacity=2)
    rng = np.random.default_rng(0)
    for _ in range(40):
        builder.insert(rng.integers(0, 2, size=64))
    basis = builder.finish()
    assert basis.dim > 2
    assert list(basis.pivot_cols) == sorted(basis.pivot_cols)


def test_nilpotency_index_of_shift_matrix():
    mod = PrimeModulus(5)
    shift = np.eye(6, k=1, dtype=np.int64)
    m = GFMatrix(shift, mod)
    assert nilpotency_index(m, 10) == 6
    assert nilpotency_index(GFMatrix(np.eye(6, dtype=np.int64), mod), 10) is None


def test_dump_load_roundtrip():
    rng = np.random.default_rng(11)
    m = _random_mat(rng, 5, 7, 97)
    buf = io.StringIO()
    dump_matrix(m, buf)
    buf.seek(0)
    back = load_matrix(buf)
    assert back.modulus.p == 97 and np.array_equal(back.array, m.array)


def test_load_matrix_rejects_malformed():
    with pytest.raises(ValueError):
        load_matrix(io.StringIO("2 2\n0 1\n1 0\n"))
    with pytest.raises(ValueError):
        load_matrix(io.StringIO("2 2 4\n0 1\n1 0\n"))


def test_subspace_empty_and_equality():
    mod = PrimeModulus(3)
    empty = SubspaceBasis.empty(9, mod)
    assert empty.dim == 0
    assert not empty.contains_vector(np.ones(9, dtype=np.int64))
    assert empty == span_of([], 9, mod)
