import json
import os

import pytest

from tforge.verify import (
    check_transpose_pairing,
    identity_registry,
    predicate_registry,
    registry_manifest,
    run_identities,
    run_predicates,
    transpose_pairs,
)

SNAPSHOT = os.path.join(os.path.dirname(__file__), "data", "registry_manifest.json")


def test_manifest_shape_and_required_ids():
    man = registry_manifest()
    ids = [m["id"] for m in man]
    assert len(ids) == len(set(ids)) == 103
    assert len(ids) >= 60
    assert "L2.15.iv" in ids and "Eq.4" in ids
    kinds = {m["kind"] for m in man}
    assert kinds == {"identity", "predicate"}
    assert sum(1 for m in man if m["kind"] == "identity") == len(identity_registry())
    assert sum(1 for m in man if m["kind"] == "predicate") == len(predicate_registry())


def test_manifest_matches_snapshot():
    with open(SNAPSHOT) as fh:
        frozen = json.load(fh)
    live = json.loads(json.dumps(registry_manifest(), sort_keys=True))
    assert live == frozen


def test_transpose_pairs_verify_symbolically():
    pairs = transpose_pairs()
    assert len(pairs) == 28
    flat = [x for pair in pairs for x in pair]
    assert len(flat) == len(set(flat))  # no id paired twice
    assert check_transpose_pairing() == []


def test_identities_pass_at_small_config(get_ctx):
    rep = run_identities(get_ctx(3, 4))
    assert rep["pass"]
    assert rep["counts"]["fail"] == 0
    by_id = {r["id"]: r for r in rep["results"]}
    assert by_id["L1.19"]["status"] == "skipped"          # needs p=2, n=8
    assert by_id["L1.20.i"]["status"] == "pass"           # Klein four-group
    assert by_id["Eq.2"]["instances"] == 50
    assert by_id["TP.i"]["instances"] == 250


def test_identity_gating_at_n8(get_ctx):
    rep = run_identities(get_ctx(3, 8))
    by_id = {r["id"]: r for r in rep["results"]}
    for klein_only in ("L1.5.i", "L1.5.ii", "L1.20.v"):
        assert by_id[klein_only]["status"] == "skipped"
    assert by_id["L1.19"]["status"] == "skipped"
    rep2 = run_identities(get_ctx(2, 8), ids=["L1.19"])
    assert [r["status"] for r in rep2["results"]] == ["pass"]


def test_predicates_pass_and_report_counts(get_ctx):
    rep = run_predicates(get_ctx(2, 8))
    assert rep["pass"]
    by_id = {r["id"]: r for r in rep["results"]}
    assert by_id["L1.18"]["status"] == "skipped"          # needs odd p
    assert by_id["L1.17"]["status"] == "pass"
    assert by_id["L1.3"]["checked"] >= 200                # exhaustive scan
    assert by_id["L1.15"]["checked"] >= 200


def test_filter_restricts_ids(get_ctx):
    ctx = get_ctx(3, 4)
    rep = run_identities(ctx, ids=["L2.15"])
    assert sorted(r["id"] for r in rep["results"]) == [
        "L2.15.i", "L2.15.ii", "L2.15.iii", "L2.15.iv", "L2.15.v", "L2.15.vi",
    ]
    rep = run_predicates(ctx, ids=["L1.13"])
    assert [r["id"] for r in rep["results"]] == ["L1.13"]


def test_hypothesis_strings_are_informative():
    for entry in identity_registry() + predicate_registry():
        assert entry.hypothesis and "group" in entry.hypothesis or "p =" in entry.hypothesis


def test_b6_kernel_dimensions(get_ctx):
    from tforge.talgebra import t0_basis
    from tforge.verify import _b6_kernel
    # (2,8): one kernel vector, hitting the (1,2,3) word (the all-ones sum)
    ctx = get_ctx(2, 8)
    kernel = _b6_kernel(ctx, t0_basis(ctx))
    assert len(kernel) == 1 and kernel[0][0] != 0
    assert [int(v) for v in kernel[0]] == [1, 1, 1, 1, 1, 1]
    # odd characteristic: empty kernel
    ctx = get_ctx(3, 8)
    assert _b6_kernel(ctx, t0_basis(ctx)) == []
