import numpy as np
import pytest

from tforge.gfp_linalg import RrefBuilder
from tforge.talgebra import (
    A,
    AlgExpr,
    Coeff,
    CoefficientError,
    E,
    HALF,
    Imat,
    Jmat,
    NM2,
    UnsupportedCaseError,
    _MaskedGenerator,
    adjacency_matrix,
    closure_generate,
    corner_subalgebra,
    dual_idempotent,
    nonzero_triples,
    paper_basis,
    t0_basis,
    triple_product,
)


def test_coeff_exact_evaluation():
    assert NM2.eval(8, 5) == (8 - 2) % 5
    assert HALF.eval(4, 3) == pow(2, -1, 3)
    with pytest.raises(CoefficientError):
        HALF.eval(4, 2)  # denominator 2 vanishes mod 2
    assert (Coeff.const(3) * Coeff.const(4)).eval(4, 7) == 12 % 7


def test_algexpr_operator_protocol():
    e = E(1) @ A(2) @ E(3)
    assert (2 * e).terms == (e * 2).terms == (Coeff.const(2) * e).terms
    assert (NM2 * e).terms == (e * NM2).terms
    assert (e - e).terms == AlgExpr.zero().terms
    # transpose reverses words
    w = next(iter(e.terms))
    assert next(iter(e.transpose().terms)) == tuple(reversed(w))


def test_adjacency_and_idempotent_arrays(get_ctx):
    ctx = get_ctx(3, 4)
    total = np.zeros((ctx.N, ctx.N), dtype=np.int64)
    for i in range(5):
        arr = adjacency_matrix(ctx, i).array
        assert np.array_equal(arr, arr.T)
        total += arr
    assert np.all(total == 1)  # relations partition X x X
    for i in range(5):
        e = dual_idempotent(ctx, i)
        assert np.array_equal(e.array @ e.array % 3, e.array)
    esum = sum(dual_idempotent(ctx, i).array for i in range(5)) % 3
    assert np.array_equal(esum, np.eye(ctx.N, dtype=np.int64))


def test_evaluate_array_matches_dense_products(get_ctx):
    ctx = get_ctx(5, 8)
    rng = np.random.default_rng(42)
    for _ in range(20):
        a, b, c, d, e_ = (int(v) for v in rng.integers(0, 5, size=5))
        expr = E(a) @ A(b) @ E(c) @ A(d) @ E(e_)
        dense = ctx.evaluate_array(E(a))
        for factor in (A(b), E(c), A(d), E(e_)):
            dense = dense @ ctx.evaluate_array(factor) % 5
        assert np.array_equal(ctx.evaluate_array(expr), dense)


def test_masked_generator_products_match_dense(get_ctx):
    ctx = get_ctx(3, 8)
    gen = _MaskedGenerator(ctx, 4, 1, 4)
    dense_gen = ctx.evaluate_array(E(4) @ A(1) @ E(4))
    rng = np.random.default_rng(0)
    m = rng.integers(0, 3, size=(ctx.N, ctx.N))
    assert np.array_equal(gen.right_product(m, 3), m @ dense_gen % 3)
    assert np.array_equal(gen.left_product(m, 3), dense_gen @ m % 3)


def test_t0_rank_is_the_nonzero_word_count(get_ctx):
    for (p, n) in [(3, 4), (2, 8)]:
        ctx = get_ctx(p, n)
        assert t0_basis(ctx).dim == len(nonzero_triples(n)) == 50


def test_triple_product_zero_iff_closed_form_zero(get_ctx):
    ctx = get_ctx(2, 4)
    zero_words = {(a, b, c) for a in range(5) for b in range(5) for c in range(5)}
    zero_words -= set(nonzero_triples(4))
    for (a, b, c) in sorted(zero_words)[:10]:
        assert not triple_product(ctx, a, b, c).array.any()
    for (a, b, c) in nonzero_triples(4)[:10]:
        assert triple_product(ctx, a, b, c).array.any()


def test_closure_dimensions(get_algebra):
    assert get_algebra(3, 4).dim == 51
    assert get_algebra(2, 8).dim == 61
    assert get_algebra(3, 8).dim == 62


def test_closure_contains_generators_and_identity(get_ctx, get_algebra):
    ctx = get_ctx(3, 4)
    alg = get_algebra(3, 4)
    assert alg.span.contains_vector(ctx.identity_array().reshape(-1))
    for (a, b, c) in nonzero_triples(4)[:12]:
        vec = ctx.evaluate_array(E(a) @ A(b) @ E(c)).reshape(-1)
        assert alg.span.contains_vector(vec)
    assert alg.span.contains_vector(ctx.evaluate_array(Jmat()).reshape(-1))


def test_paper_basis_cardinalities(get_ctx):
    expected = {(3, 4): 51, (2, 8): 61, (5, 8): 62, (3, 16): 62, (2, 16): 62}
    for (p, n), size in expected.items():
        basis = paper_basis(get_ctx(p, n))
        assert len(basis) == size


def test_paper_basis_is_independent(get_ctx):
    ctx = get_ctx(5, 8)
    basis = paper_basis(ctx)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=len(basis))
    for expr in basis:
        assert builder.insert(ctx.evaluate_array(expr).reshape(-1))
    assert builder.dim == len(basis)


def test_corner_subalgebra_requires_idempotent(get_ctx, get_algebra):
    ctx = get_ctx(3, 4)
    alg = get_algebra(3, 4)
    corner = corner_subalgebra(alg, dual_idempotent(ctx, 4))
    assert corner.span.dim == 6
    from tforge.gfp_linalg import GFMatrix
    bad = GFMatrix(ctx.adjacency_array(1), ctx.modulus, _reduced=True)
    with pytest.raises(UnsupportedCaseError):
        corner_subalgebra(alg, bad)


def test_closure_gate_large_instance():
    from tforge.scheme import GroupSpec
    from tforge.talgebra import make_context
    ctx = make_context(GroupSpec.elementary_abelian_2(5), 7)
    with pytest.raises(UnsupportedCaseError):
        closure_generate(ctx)


def test_context_rejects_odd_basepoint_or_group():
    from tforge.scheme import GroupSpec
    from tforge.talgebra import make_context
    g = GroupSpec.elementary_abelian_2(2)
    with pytest.raises(ValueError):
        make_context(g, 3, basepoint=99)
    with pytest.raises(ValueError):
        make_context(g, 6)  # modulus must be prime
