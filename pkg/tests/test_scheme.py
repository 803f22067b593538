import io

import numpy as np
import pytest

from tforge.scheme import (
    GroupSpec,
    MalformedTableError,
    build_descriptor,
    build_triple_space,
    check_scheme_axioms,
    class_matrix,
    classify_pair,
    intersection_brute,
    intersection_closed,
    is_elementary_abelian_2,
    load_cayley_table,
    valencies_closed,
    valency,
)

Z4_TABLE = "4\n0 1 2 3\n1 2 3 0\n2 3 0 1\n3 0 1 2\n"


def z4_group():
    return load_cayley_table(io.StringIO(Z4_TABLE))


def test_ea2_group_axioms():
    g = GroupSpec.elementary_abelian_2(2)
    assert g.n == 4
    for a in range(4):
        assert g.mul(a, a) == 0  # every element is an involution
    assert is_elementary_abelian_2(g)


def test_z4_loads_but_is_not_ea2():
    g = z4_group()
    assert g.n == 4 and g.mul(1, 1) == 2
    assert not is_elementary_abelian_2(g)


def test_malformed_tables_rejected():
    for text in (
        "2 2\n0 1\n1 0\n",          # bad header
        "2\n0 1\n",                  # missing row
        "2\n0 0\n1 0\n",             # row not a permutation
        "2\n0 1\n1 2\n",             # out-of-range entry
    ):
        with pytest.raises(MalformedTableError):
            load_cayley_table(io.StringIO(text))


def test_triple_space_points_satisfy_group_equation():
    g = GroupSpec.elementary_abelian_2(3)
    ts = build_triple_space(g)
    assert ts.size == 64
    for point in range(ts.size):
        x1, x2, x3 = ts.triple(point)
        assert g.mul(x1, x2) == x3


def test_class_matrix_partition_and_symmetry():
    ts = build_triple_space(GroupSpec.elementary_abelian_2(2))
    cls = class_matrix(ts)
    assert np.array_equal(cls, cls.T)
    assert np.all(np.diag(cls) == 0)
    off = cls[~np.eye(ts.size, dtype=bool)]
    assert set(np.unique(off)) <= {1, 2, 3, 4}
    # class counts per row are the valencies
    for i, k in enumerate(valencies_closed(4)):
        assert np.all((cls == i).sum(axis=1) == k)


def test_classify_pair_counts_agreements():
    ts = build_triple_space(GroupSpec.elementary_abelian_2(2))
    cls = class_matrix(ts)
    for y in range(ts.size):
        for z in range(ts.size):
            assert classify_pair(ts, y, z) == cls[y, z]


@pytest.mark.parametrize("n", [4, 8])
def test_intersection_brute_matches_closed_form(n):
    ts = build_triple_space(GroupSpec.elementary_abelian_2(n.bit_length() - 1))
    cls = class_matrix(ts)
    for g in range(5):
        for h in range(5):
            for i in range(5):
                assert intersection_brute(ts, g, h, i, cls=cls) == \
                    intersection_closed(g, h, i, n)


def test_intersection_constancy_exhaustive_n4():
    ts = build_triple_space(GroupSpec.elementary_abelian_2(2))
    cls = class_matrix(ts)
    for g in range(5):
        for h in range(5):
            for i in range(5):
                intersection_brute(ts, g, h, i, constancy="full", cls=cls)


def test_descriptor_and_valency_access():
    ts = build_triple_space(GroupSpec.elementary_abelian_2(2))
    sd = build_descriptor(ts)
    assert sd.valencies == (1, 3, 3, 3, 6)
    assert valency(sd, 4) == 6
    with pytest.raises(ValueError):
        valency(sd, 5)
    assert sd.tensor.shape == (5, 5, 5)
    assert sd.tensor[1, 1, 0] == valencies_closed(4)[1]


def test_axiom_battery_on_general_group():
    ts = build_triple_space(z4_group())
    report = check_scheme_axioms(ts, "full")
    assert report["pass"]
    sd = build_descriptor(ts)
    assert sd.valencies == (1, 3, 3, 3, 6)


def test_intersection_tensor_group_independent():
    # the closed form is a function of n alone: compare z4 against ea2:2
    ts = build_triple_space(z4_group())
    cls = class_matrix(ts)
    for g in range(5):
        for h in range(5):
            for i in range(5):
                assert intersection_brute(ts, g, h, i, cls=cls) == \
                    intersection_closed(g, h, i, 4)
