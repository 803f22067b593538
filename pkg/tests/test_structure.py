import numpy as np
import pytest

from tforge.gfp_linalg import RrefBuilder, SubspaceBasis
from tforge.structure import (
    CaseLabel,
    caseI_lemma_basis,
    certify_radical,
    classify_case,
    corner_radical_candidate,
    decompose,
    expected_block_sizes,
    is_two_sided_ideal,
    matrix_unit_scheme,
    nilpotency_exponent,
    radical_candidate,
    semisimple_closed_form,
)
from tforge.talgebra import A, E, UnsupportedCaseError


CASE_TABLE = {
    (3, 4): CaseLabel.I, (5, 16): CaseLabel.I, (7, 8): CaseLabel.I,
    (3, 16): CaseLabel.I,
    (3, 8): CaseLabel.II, (7, 16): CaseLabel.II,
    (2, 4): CaseLabel.P2, (2, 8): CaseLabel.P2, (2, 16): CaseLabel.P2,
    (5, 4): CaseLabel.III, (7, 4): CaseLabel.III, (7, 32): CaseLabel.III,
    (5, 8): CaseLabel.IV,
}


def test_classify_case_table():
    for (p, n), label in CASE_TABLE.items():
        assert classify_case(p, n) == label


def test_classify_case_rejections():
    for bad_n in (2, 3, 6, 12):
        with pytest.raises(UnsupportedCaseError):
            classify_case(3, bad_n)
    with pytest.raises(ValueError):
        classify_case(6, 4)


def test_semisimple_closed_form_matrix():
    assert semisimple_closed_form(5, 4) and semisimple_closed_form(7, 4)
    assert semisimple_closed_form(5, 8) and semisimple_closed_form(7, 32) is False
    for n in (4, 8, 16):
        assert not semisimple_closed_form(2, n)
        assert not semisimple_closed_form(3, n)


def test_expected_block_sizes_per_case():
    assert expected_block_sizes(CaseLabel.I) == [4, 1, 1]
    assert expected_block_sizes(CaseLabel.II) == [6, 4, 1]
    assert expected_block_sizes(CaseLabel.P2) == [5, 4, 1]
    assert expected_block_sizes(CaseLabel.III) == [5, 5, 1]
    assert expected_block_sizes(CaseLabel.IV) == [6, 5, 1]


def test_unit_scheme_block_sizes_match_expectations():
    for case in CaseLabel:
        scheme = matrix_unit_scheme(case)
        assert scheme.block_sizes == expected_block_sizes(case)
        corner = matrix_unit_scheme(case, corner=True)
        assert sum(s * s for s in corner.block_sizes) <= sum(
            s * s for s in scheme.block_sizes
        )


def test_radical_candidate_sizes():
    assert len(radical_candidate(CaseLabel.IV, 5, 8)) == 0
    assert len(radical_candidate(CaseLabel.II, 3, 8)) > 0
    assert len(corner_radical_candidate(CaseLabel.IV, 5)) == 0
    assert len(corner_radical_candidate(CaseLabel.I, 3)) > 0


def test_decompose_small_case_I(get_algebra):
    rep = decompose(3, 4, algebra=get_algebra(3, 4))
    assert rep["case"] == "I"
    assert rep["dim_T"] == 51 and rep["dim_rad"] == 33
    assert rep["blocks"] == [4, 1, 1]
    assert rep["pass"] and not rep["partial_certificate"]
    assert all(rep["certificate"].values())
    audit = rep["basis_audit"]
    assert audit is not None and audit["paper_set_rank"] == 51


def test_decompose_p2_and_corner_reports(get_algebra):
    rep = decompose(2, 4, algebra=get_algebra(2, 4))
    assert rep["case"] == "P2" and rep["blocks"] == [5, 4, 1]
    assert rep["dim_rad"] == 9
    corners = rep["corners"]
    assert corners[0]["dim"] == 1 and corners[0]["blocks"] == [1]
    for a in (1, 2, 3):
        assert corners[a]["blocks"] == [1, 1] and corners[a]["rad_dim"] == 0
    assert corners[4]["blocks"] == [2, 1]
    assert corners[4]["radical_projection"]["pass"]
    assert rep["basis_audit"] is None  # audit only applies in Case I


def test_decompose_semisimple_case(get_algebra):
    rep = decompose(5, 4, algebra=get_algebra(5, 4))
    assert rep["case"] == "III" and rep["dim_rad"] == 0
    assert rep["semisimple"] and rep["semisimple_closed_form"]
    assert rep["blocks"] == [5, 5, 1]


def test_negative_control_wrong_candidate_fails(get_algebra):
    alg = get_algebra(2, 8)
    report = certify_radical(alg, CaseLabel.P2, [])
    assert not report["pass"]
    assert report["stages"]["units"]["pass"] is False
    assert report["stages"]["units"]["failures"]  # concrete witnesses


def test_is_two_sided_ideal_negative(get_ctx, get_algebra):
    ctx = get_ctx(2, 4)
    alg = get_algebra(2, 4)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=4)
    builder.insert(ctx.evaluate_array(E(1) @ A(4) @ E(2)).reshape(-1))
    not_ideal = builder.finish()
    ok, witness = is_two_sided_ideal(alg, not_ideal)
    assert not ok and witness is not None


def test_nilpotency_exponent_of_certified_radical(get_ctx, get_algebra):
    ctx = get_ctx(2, 4)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=16)
    for expr in radical_candidate(CaseLabel.P2, 2, 4):
        builder.insert(ctx.evaluate_array(expr).reshape(-1))
    V = builder.finish()
    assert V.dim == 9
    expo = nilpotency_exponent(V, ctx.modulus, ctx.N)
    assert expo is not None and 2 <= expo <= 4
    zero = SubspaceBasis.empty(ctx.N * ctx.N, ctx.modulus)
    assert nilpotency_exponent(zero, ctx.modulus, ctx.N) == 1


def test_caseI_lemma_basis_has_the_duplicate(get_ctx):
    exprs = caseI_lemma_basis(5, 16)
    assert len(exprs) == 63
    keys = {
        frozenset((w, (c.num, c.den)) for w, c in e.terms.items()) for e in exprs
    }
    assert len(keys) == 62  # one repeated word, as the audit reports


def test_partial_mode_report_shape():
    rep = decompose(3, 8, partial=True)
    assert rep["partial_certificate"]
    assert rep["dim_T"] == 62 and rep["dim_rad"] == 9
    assert rep["blocks"] == [6, 4, 1] and rep["pass"]


def test_basepoint_flows_through(get_algebra):
    rep = decompose(3, 4, basepoint=5)
    assert rep["basepoint"] == 5
    base = decompose(3, 4, algebra=get_algebra(3, 4))
    for key in ("dim_T", "dim_rad", "blocks", "case"):
        assert rep[key] == base[key]
