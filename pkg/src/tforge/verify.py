"""Registry of algebra identities and entrywise predicates, run exactly.

Every entry carries a stable id, the hypothesis it needs, and a builder that
expands it into concrete instances over relation indices.  Identities compare
evaluated matrices over GF(p); predicates scan matrix entries against
coordinate formulas on the triple space.  All scans are vectorized and
exhaustive -- at n = 4 that is the whole domain, and for larger n it still
covers every admissible pair, which comfortably exceeds the sampled-coverage
floor the reports advertise.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gfp_linalg import GFMatrix, RrefBuilder, SubspaceBasis
from .scheme import intersection_closed, valencies_closed
from .talgebra import (
    A,
    AlgExpr,
    AlgebraHandle,
    Coeff,
    E,
    Imat,
    Jmat,
    NM2,
    NM3,
    NM4,
    TerwilligerContext,
    _jw,
    _tp,
    _w5,
    nonzero_triples,
    set_B4,
    set_B6,
    t0_basis,
)

__all__ = [
    "IdentityEntry",
    "PredicateEntry",
    "identity_registry",
    "predicate_registry",
    "registry_manifest",
    "run_identities",
    "run_predicates",
    "transpose_pairs",
]

PERMS: Tuple[Tuple[int, int, int], ...] = tuple(itertools.permutations((1, 2, 3)))


def _path(*indices: int) -> AlgExpr:
    """E_{i0} A_{i1} E_{i2} A_{i3} ... E_{ik} for an odd index list."""
    if len(indices) % 2 == 0:
        raise ValueError("a dual-idempotent path needs an odd index list")
    expr = E(indices[0])
    for k in range(1, len(indices), 2):
        expr = expr @ A(indices[k]) @ E(indices[k + 1])
    return expr


def _const(c: int) -> Coeff:
    return Coeff.const(c)


# An instance is (label, lhs, rhs, mode); mode "eq" compares lhs to rhs,
# "nonzero" asserts lhs evaluates to a nonzero matrix, "symmetric" asserts
# lhs equals its own transpose, and "custom" calls lhs(ctx, t0_basis).
Instance = Tuple[str, object, Optional[AlgExpr], str]


def _always(p: int, n: int) -> bool:
    return True


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    hypothesis: str
    build: Callable[[int], List[Instance]]
    applies: Callable[[int, int], bool] = _always
    needs_t0: bool = False


@dataclass(frozen=True)
class PredicateEntry:
    id: str
    hypothesis: str
    run: Callable[[TerwilligerContext, Optional[SubspaceBasis]], Dict]
    applies: Callable[[int, int], bool] = _always
    needs_t0: bool = False


# ---------------------------------------------------------------------------
# identity builders
# ---------------------------------------------------------------------------

def _build_eq1(n: int) -> List[Instance]:
    out: List[Instance] = []
    for i in range(5):
        out.append((f"A{i} symmetric", A(i), None, "symmetric"))
        out.append((f"E{i}* symmetric", E(i), None, "symmetric"))
    return out


def _build_eq2(n: int) -> List[Instance]:
    out: List[Instance] = []
    for h in range(5):
        for i in range(5):
            rhs = AlgExpr.zero()
            for j in range(5):
                c = intersection_closed(h, i, j, n)
                if c:
                    rhs = rhs + _const(c) * A(j)
            out.append((f"A{h}A{i}", A(h) @ A(i), rhs, "eq"))
            erhs = E(i) if h == i else AlgExpr.zero()
            out.append((f"E{h}*E{i}*", E(h) @ E(i), erhs, "eq"))
    return out


def _build_eq3(n: int) -> List[Instance]:
    asum = AlgExpr.zero()
    esum = AlgExpr.zero()
    for j in range(5):
        asum = asum + A(j)
        esum = esum + E(j)
    return [
        ("J = sum A_j", Jmat(), asum, "eq"),
        ("I = sum E_j*", Imat(), esum, "eq"),
        ("A_0 = I", A(0), Imat(), "eq"),
    ]


def _build_eq4(n: int) -> List[Instance]:
    out: List[Instance] = []
    k = valencies_closed(n)
    for h in range(5):
        for i in range(5):
            out.append((f"E{h}*JE{i}* != O", _jw(h, i), None, "nonzero"))
    for i in range(5):
        out.append(
            (f"JE{i}*J", Jmat() @ E(i) @ Jmat(), _const(k[i]) * Jmat(), "eq")
        )
    return out


def _build_tp_i(n: int) -> List[Instance]:
    out: List[Instance] = []
    for g, h, i in itertools.product(range(5), repeat=3):
        out.append((
            f"E{g}*A{h}E{i}*J",
            _path(g, h, i) @ Jmat(),
            _const(intersection_closed(i, h, g, n)) * (E(g) @ Jmat()),
            "eq",
        ))
        out.append((
            f"JE{g}*A{h}E{i}*",
            Jmat() @ _path(g, h, i),
            _const(intersection_closed(g, h, i, n)) * (Jmat() @ E(i)),
            "eq",
        ))
    return out


def _build_tp_ii(n: int) -> List[Instance]:
    k = valencies_closed(n)
    out: List[Instance] = []
    for g, h, i in itertools.product(range(5), repeat=3):
        if intersection_closed(i, h, g, n) and min(k[g], k[i]) == 1:
            out.append((f"g={g},h={h},i={i}", _path(g, h, i), _jw(g, i), "eq"))
    return out


def _build_tp_iii(n: int) -> List[Instance]:
    out: List[Instance] = []
    for g, h, i in itertools.product(range(5), repeat=3):
        if intersection_closed(i, h, g, n):
            out.append((f"E{g}*A{h}E{i}* != O", _path(g, h, i), None, "nonzero"))
        else:
            out.append((f"E{g}*A{h}E{i}* = O", _path(g, h, i), AlgExpr.zero(), "eq"))
    return out


def _check_tp_iv(ctx: TerwilligerContext, t0: Optional[SubspaceBasis]):
    expected = len(nonzero_triples(ctx.n))
    ok = t0 is not None and t0.dim == expected
    ok = ok and t0.contains_vector(ctx.evaluate_array(Jmat()).reshape(-1))
    return ok, {"t0_rank": None if t0 is None else t0.dim, "nonzero_words": expected}


def _check_tp_v(ctx: TerwilligerContext, t0: Optional[SubspaceBasis]):
    from .structure import is_two_sided_ideal, nilpotency_exponent

    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=32)
    for expr in set_B4(ctx.p, ctx.n):
        builder.insert(ctx.evaluate_array(expr).reshape(-1))
    V = builder.finish()
    handle = AlgebraHandle(
        ctx=ctx,
        span=None,
        generators=[],
        generator_words=[],
        identity=GFMatrix(ctx.identity_array(), ctx.modulus, _reduced=True),
    )
    ideal_ok, witness = is_two_sided_ideal(handle, V)
    expo = nilpotency_exponent(V, ctx.modulus, ctx.N)
    ok = ideal_ok and expo is not None
    return ok, {"dim": V.dim, "ideal": ideal_ok, "witness": witness, "exponent": expo}


def _check_tp_vi(ctx: TerwilligerContext, t0: Optional[SubspaceBasis]):
    """Entries of E_g*A_h E_i*A_r E_s* against direct intersection counts."""
    p = ctx.p
    if ctx.n == 4:
        tuples = list(itertools.product(range(5), repeat=5))
    else:
        rng = np.random.default_rng(20240816)
        tuples = [tuple(int(v) for v in rng.integers(0, 5, size=5)) for _ in range(60)]
    sup = ctx.support
    failures = []
    for (g, h, i, r, s) in tuples:
        word = ctx.evaluate_array(_path(g, h, i, r, s))
        ah = ctx.adjacency_array(h)
        ar = ctx.adjacency_array(r)
        count = ah[:, sup[i]] @ ar[sup[i], :]
        expected = np.zeros_like(count)
        block = np.ix_(sup[g], sup[s])
        expected[block] = count[block] % p
        if not np.array_equal(word, expected):
            failures.append((g, h, i, r, s))
    return not failures, {"tuples": len(tuples), "failures": failures[:5]}


def _build_l1_5_i(n: int) -> List[Instance]:
    return [
        (f"g={g},h={h},i={i}", _path(g, h, i, g, 4), _path(g, 4, 4), "eq")
        for g, h, i in PERMS
    ]


def _build_l1_5_ii(n: int) -> List[Instance]:
    return [
        (f"g={g},h={h},i={i}", _path(4, g, i, h, g), _path(4, 4, g), "eq")
        for g, h, i in PERMS
    ]


def _build_l1_19(n: int) -> List[Instance]:
    total = AlgExpr.zero()
    for a, b, c in PERMS:
        total = total + _w5(4, a, b, c, 4)
    return [("sum of six words", total, _path(4, 4, 4), "eq")]


def _build_l1_20(part: str) -> Callable[[int], List[Instance]]:
    def build(n: int) -> List[Instance]:
        w = {abc: _w5(4, *abc, 4) for abc in PERMS}
        base = w[(1, 2, 3)]
        table = {
            "i": (w[(1, 3, 2)] + base,
                  _path(4, 2, 4) + _path(4, 3, 4) + _path(4, 4, 4)),
            "ii": (w[(2, 1, 3)] + base,
                   _path(4, 1, 4) + _path(4, 2, 4) + _path(4, 4, 4)),
            "iii": (w[(2, 3, 1)] - base, _path(4, 3, 4) - _path(4, 2, 4)),
            "iv": (w[(3, 1, 2)] - base, _path(4, 1, 4) - _path(4, 2, 4)),
            "v": (w[(3, 2, 1)] + base, 2 * _path(4, 2, 4) + _path(4, 4, 4)),
        }
        lhs, rhs = table[part]
        return [(part, lhs, rhs, "eq")]

    return build


def _perm_family(
    make: Callable[[int, int, int], Tuple[AlgExpr, AlgExpr]]
) -> Callable[[int], List[Instance]]:
    def build(n: int) -> List[Instance]:
        out = []
        for g, h, i in PERMS:
            lhs, rhs = make(g, h, i)
            out.append((f"g={g},h={h},i={i}", lhs, rhs, "eq"))
        return out

    return build


def _build_l2_9(n: int) -> List[Instance]:
    out = []
    for g in (1, 2, 3):
        for h in (1, 2, 3):
            if g != h:
                out.append((
                    f"g={g},h={h}",
                    _path(4, g, h, g, 4),
                    _path(4) + _path(4, g, 4),
                    "eq",
                ))
    return out


def _build_l2_13_i(n: int) -> List[Instance]:
    return [
        (f"g={g}", _path(4, g, 4, g, 4), NM3 * E(4) + NM4 * _path(4, g, 4), "eq")
        for g in (1, 2, 3)
    ]


def _build_l2_13_ii(n: int) -> List[Instance]:
    out = []
    for g, h, i in PERMS:
        out.append((
            f"g={g},h={h}",
            _path(4, g, 4, h, 4),
            _jw(4, 4) - E(4) - _path(4, g, 4) - _path(4, h, 4) - _path(4, g, i, h, 4),
            "eq",
        ))
    return out


_EA2 = "elementary abelian 2-group"
_ANY = "any finite group"
_KLEIN = "Klein four-group (n = 4)"


def _identity_entries() -> List[IdentityEntry]:
    ent: List[IdentityEntry] = [
        IdentityEntry("Eq.1", _ANY, _build_eq1),
        IdentityEntry("Eq.2", _ANY, _build_eq2),
        IdentityEntry("Eq.3", _ANY, _build_eq3),
        IdentityEntry("Eq.4", _ANY, _build_eq4),
        IdentityEntry("TP.i", _ANY, _build_tp_i),
        IdentityEntry("TP.ii", _ANY, _build_tp_ii),
        IdentityEntry("TP.iii", _ANY, _build_tp_iii),
        IdentityEntry(
            "TP.iv", _ANY,
            lambda n: [("triple products span T0 independently", _check_tp_iv, None, "custom")],
            needs_t0=True,
        ),
        IdentityEntry(
            "TP.v", _ANY,
            lambda n: [("B4 spans a nilpotent two-sided ideal", _check_tp_v, None, "custom")],
        ),
        IdentityEntry(
            "TP.vi", _ANY,
            lambda n: [("five-factor entries count intersections", _check_tp_vi, None, "custom")],
        ),
        IdentityEntry("L1.5.i", _KLEIN, _build_l1_5_i, applies=lambda p, n: n == 4),
        IdentityEntry("L1.5.ii", _KLEIN, _build_l1_5_ii, applies=lambda p, n: n == 4),
        IdentityEntry(
            "L1.19", "p = 2 and n = 8", _build_l1_19,
            applies=lambda p, n: p == 2 and n == 8,
        ),
    ]
    for part in ("i", "ii", "iii", "iv", "v"):
        ent.append(IdentityEntry(
            f"L1.20.{part}", _KLEIN, _build_l1_20(part), applies=lambda p, n: n == 4,
        ))

    def add(id_, hyp, make):
        ent.append(IdentityEntry(id_, hyp, _perm_family(make)))

    add("L2.1", _ANY, lambda g, h, i: (_path(g, h, i, h, g), E(g)))
    add("L2.2", _EA2, lambda g, h, i: (_path(g, h, i, g, h), _path(g, i, h)))
    add("L2.3.i", _ANY, lambda g, h, i: (_path(g, h, i, h, 4), _path(g, h, 4)))
    add("L2.3.ii", _ANY, lambda g, h, i: (_path(4, h, i, h, g), _path(4, h, g)))
    add("L2.4.i", _EA2, lambda g, h, i: (_path(g, h, i, g, 4), _path(g, i, h, g, 4)))
    add("L2.4.ii", _EA2, lambda g, h, i: (_path(4, g, i, h, g), _path(4, g, h, i, g)))
    add("L2.5.i", _EA2, lambda g, h, i: (_path(g, h, 4, g, h), _jw(g, h) - _path(g, i, h)))
    add("L2.5.ii", _EA2, lambda g, h, i: (_path(g, h, 4, g, i), _jw(g, i) - _path(g, h, i)))
    add("L2.5.iii", _EA2, lambda g, h, i: (_path(g, h, 4, h, g), NM2 * E(g)))
    add("L2.5.iv", _EA2, lambda g, h, i: (_path(g, h, 4, h, i), NM2 * _path(g, h, i)))
    add("L2.5.v", _EA2, lambda g, h, i: (_path(g, h, 4, i, g), _jw(g, g) - E(g)))
    add("L2.5.vi", _EA2, lambda g, h, i: (_path(g, h, 4, i, h), _jw(g, h) - _path(g, i, h)))
    add("L2.6.i", _EA2, lambda g, h, i: (_path(i, h, g, h, i, g, 4), _path(i, g, 4)))
    add("L2.6.ii", _EA2, lambda g, h, i: (_path(4, g, i, h, g, h, i), _path(4, g, i)))
    add("L2.6.iii", _EA2, lambda g, h, i: (_path(h, i, g, h, i, g, 4), _path(h, g, 4)))
    add("L2.6.iv", _EA2, lambda g, h, i: (_path(4, g, i, h, g, i, h), _path(4, g, h)))
    add("L2.7.i", _EA2, lambda g, h, i: (_path(g, h, i, g, 4, g, h), NM2 * _path(g, i, h)))
    add("L2.7.ii", _EA2, lambda g, h, i: (_path(h, g, 4, g, i, h, g), NM2 * _path(h, i, g)))
    add("L2.7.iii", _EA2, lambda g, h, i: (_path(g, h, i, g, 4, g, i), NM2 * _path(g, h, i)))
    add("L2.7.iv", _EA2, lambda g, h, i: (_path(i, g, 4, g, i, h, g), NM2 * _path(i, h, g)))
    add("L2.7.v", _EA2, lambda g, h, i: (_path(g, h, i, g, 4, h, g), _jw(g, g) - E(g)))
    add("L2.7.vi", _EA2, lambda g, h, i: (_path(g, h, 4, g, i, h, g), _jw(g, g) - E(g)))
    add("L2.7.vii", _EA2, lambda g, h, i: (_path(g, h, i, g, 4, h, i), _jw(g, i) - _path(g, h, i)))
    add("L2.7.viii", _EA2, lambda g, h, i: (_path(i, h, 4, g, i, h, g), _jw(i, g) - _path(i, h, g)))
    add("L2.7.ix", _EA2, lambda g, h, i: (_path(g, h, i, g, 4, i, g), _jw(g, g) - E(g)))
    add("L2.7.x", _EA2, lambda g, h, i: (_path(g, i, 4, g, i, h, g), _jw(g, g) - E(g)))
    add("L2.7.xi", _EA2, lambda g, h, i: (_path(g, h, i, g, 4, i, h), _jw(g, h) - _path(g, i, h)))
    add("L2.7.xii", _EA2, lambda g, h, i: (_path(h, i, 4, g, i, h, g), _jw(h, g) - _path(h, i, g)))
    add("L2.8.i", _ANY, lambda g, h, i: (
        _path(g, h, 4, g, 4), _jw(g, 4) - _path(g, h, 4) - _path(g, h, i, g, 4)))
    add("L2.8.ii", _ANY, lambda g, h, i: (
        _path(4, g, 4, h, g), _jw(4, g) - _path(4, h, g) - _path(4, g, i, h, g)))
    add("L2.8.iii", _ANY, lambda g, h, i: (_path(g, h, 4, h, 4), NM3 * _path(g, h, 4)))
    add("L2.8.iv", _ANY, lambda g, h, i: (_path(4, h, 4, h, g), NM3 * _path(4, h, g)))
    add("L2.8.v", _ANY, lambda g, h, i: (
        _path(g, h, 4, i, 4), _jw(g, 4) - _path(g, h, 4) - _path(g, i, 4)))
    add("L2.8.vi", _ANY, lambda g, h, i: (
        _path(4, i, 4, h, g), _jw(4, g) - _path(4, h, g) - _path(4, i, g)))
    ent.append(IdentityEntry("L2.9", _ANY, _build_l2_9))
    add("L2.10.i", _EA2, lambda g, h, i: (
        _path(g, h, i, g, 4, g, 4), NM3 * _path(g, h, i, g, 4)))
    add("L2.10.ii", _EA2, lambda g, h, i: (
        _path(4, g, 4, g, i, h, g), NM3 * _path(4, g, i, h, g)))
    add("L2.10.iii", _EA2, lambda g, h, i: (
        _path(g, h, i, g, 4, h, 4),
        _jw(g, 4) - _path(g, h, 4) - _path(g, h, i, g, 4)))
    add("L2.10.iv", _EA2, lambda g, h, i: (
        _path(4, h, 4, g, i, h, g),
        _jw(4, g) - _path(4, h, g) - _path(4, g, i, h, g)))
    add("L2.10.v", _EA2, lambda g, h, i: (
        _path(g, h, i, g, 4, i, 4),
        _jw(g, 4) - _path(g, i, 4) - _path(g, h, i, g, 4)))
    add("L2.10.vi", _EA2, lambda g, h, i: (
        _path(4, i, 4, g, i, h, g),
        _jw(4, g) - _path(4, i, g) - _path(4, g, i, h, g)))
    add("L2.11.i", _EA2, lambda g, h, i: (_path(4, h, g, h, i, g, 4), _path(4, h, i, g, 4)))
    add("L2.11.ii", _EA2, lambda g, h, i: (_path(4, g, i, h, g, h, 4), _path(4, g, i, h, 4)))
    add("L2.11.iii", _EA2, lambda g, h, i: (_path(4, i, g, h, i, g, 4), _path(4, i, h, g, 4)))
    add("L2.11.iv", _EA2, lambda g, h, i: (_path(4, g, i, h, g, i, 4), _path(4, g, h, i, 4)))
    add("L2.12.i", _EA2, lambda g, h, i: (_path(h, g, 4, g, h, i, 4), NM2 * _path(h, i, 4)))
    add("L2.12.ii", _EA2, lambda g, h, i: (_path(4, i, h, g, 4, g, h), NM2 * _path(4, i, h)))
    add("L2.12.iii", _EA2, lambda g, h, i: (
        _path(i, g, 4, g, h, i, 4), NM2 * _path(i, g, h, i, 4)))
    add("L2.12.iv", _EA2, lambda g, h, i: (
        _path(4, i, h, g, 4, g, i), NM2 * _path(4, i, h, g, i)))
    add("L2.12.v", _EA2, lambda g, h, i: (
        _path(g, h, 4, g, h, i, 4), _jw(g, 4) - _path(g, i, 4)))
    add("L2.12.vi", _EA2, lambda g, h, i: (
        _path(4, i, h, g, 4, h, g), _jw(4, g) - _path(4, i, g)))
    add("L2.12.vii", _EA2, lambda g, h, i: (
        _path(i, h, 4, g, h, i, 4), _jw(i, 4) - _path(i, g, h, i, 4)))
    add("L2.12.viii", _EA2, lambda g, h, i: (
        _path(4, i, h, g, 4, h, i), _jw(4, i) - _path(4, i, h, g, i)))
    add("L2.12.ix", _EA2, lambda g, h, i: (
        _path(g, i, 4, g, h, i, 4), _jw(g, 4) - _path(g, i, 4)))
    add("L2.12.x", _EA2, lambda g, h, i: (
        _path(4, i, h, g, 4, i, g), _jw(4, g) - _path(4, i, g)))
    add("L2.12.xi", _EA2, lambda g, h, i: (
        _path(h, i, 4, g, h, i, 4), _jw(h, 4) - _path(h, i, 4)))
    add("L2.12.xii", _EA2, lambda g, h, i: (
        _path(4, i, h, g, 4, i, h), _jw(4, h) - _path(4, i, h)))
    ent.append(IdentityEntry("L2.13.i", _ANY, _build_l2_13_i))
    ent.append(IdentityEntry("L2.13.ii", _ANY, _build_l2_13_ii))
    add("L2.14.i", _ANY, lambda g, h, i: (
        _path(4, g, 4, g, h, i, 4), NM3 * _path(4, g, h, i, 4)))
    add("L2.14.ii", _ANY, lambda g, h, i: (
        _path(4, i, h, g, 4, g, 4), NM3 * _path(4, i, h, g, 4)))
    add("L2.14.iii", _ANY, lambda g, h, i: (
        _path(4, h, 4, g, h, i, 4),
        _jw(4, 4) - _path(4, g, h, i, 4) - _path(4, h, g, i, 4)))
    add("L2.14.iv", _ANY, lambda g, h, i: (
        _path(4, i, h, g, 4, h, 4),
        _jw(4, 4) - _path(4, i, h, g, 4) - _path(4, i, g, h, 4)))
    add("L2.14.v", _ANY, lambda g, h, i: (
        _path(4, i, 4, g, h, i, 4),
        _jw(4, 4) - _path(4, g, h, i, 4) - E(4) - _path(4, i, 4)))
    add("L2.14.vi", _ANY, lambda g, h, i: (
        _path(4, i, h, g, 4, i, 4),
        _jw(4, 4) - _path(4, i, h, g, 4) - E(4) - _path(4, i, 4)))
    add("L2.15.i", _EA2, lambda g, h, i: (
        _path(4, g, h, i, 4, g, h, i, 4), _jw(4, 4) - _path(4, g, h, i, 4)))
    add("L2.15.ii", _EA2, lambda g, h, i: (
        _path(4, g, h, i, 4, g, i, h, 4), _jw(4, 4) - _path(4, g, i, h, 4)))
    add("L2.15.iii", _EA2, lambda g, h, i: (
        _path(4, g, h, i, 4, h, g, i, 4), _jw(4, 4) - _path(4, g, h, i, 4)))
    add("L2.15.iv", _EA2, lambda g, h, i: (
        _path(4, g, h, i, 4, h, i, g, 4), _jw(4, 4) - E(4) - _path(4, g, 4)))
    add("L2.15.v", _EA2, lambda g, h, i: (
        _path(4, g, h, i, 4, i, g, h, 4), NM2 * _path(4, g, i, h, 4)))
    add("L2.15.vi", _EA2, lambda g, h, i: (
        _path(4, g, h, i, 4, i, h, g, 4), NM2 * E(4) + NM2 * _path(4, g, 4)))
    return ent


_IDENTITIES: List[IdentityEntry] = _identity_entries()


def identity_registry() -> List[IdentityEntry]:
    return list(_IDENTITIES)


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

def _components(ctx: TerwilligerContext) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(comps, xc, table): per-point coordinates, basepoint coordinates,
    and the group multiplication table."""
    comps = ctx.ts.triples()
    xc = comps[ctx.basepoint]
    return comps, xc, ctx.group.table


def _pair_domain(ctx: TerwilligerContext, row_class: int, col_class: int) -> np.ndarray:
    rows = ctx.cls[ctx.basepoint] == row_class
    cols = ctx.cls[ctx.basepoint] == col_class
    return np.outer(rows, cols)


def _pred_l1_3(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(g, h, i, g, 4))
        domain = _pair_domain(ctx, g, 4) & np.isin(ctx.cls, (h, i))
        checked += int(domain.sum())
        if W[domain].any():
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_4(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        for label, expr in (
            (f"E{g}*A{h}E{i}*A{g}E4*", _path(g, h, i, g, 4)),
            (f"E4*A{g}E{i}*A{h}E{g}*", _path(4, g, i, h, g)),
        ):
            checked += 1
            if t0.contains_vector(ctx.evaluate_array(expr).reshape(-1)):
                failures.append(label)
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_6(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    sup = ctx.support
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        count = ctx.adjacency_array(g)[:, sup[h]] @ ctx.adjacency_array(i)[sup[h], :]
        nz = W != 0
        checked += int(nz.sum())
        if not (np.all(count[nz] == 1) and np.all(W[nz] == 1 % ctx.p)):
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_7(ctx: TerwilligerContext, t0) -> Dict:
    comps, xc, table = _components(ctx)
    in4 = ctx.cls[ctx.basepoint] == 4
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        prod_hg = table[xc[h - 1], comps[:, g - 1]]   # x_h * y_g per point y
        prod_ig = table[xc[i - 1], comps[:, g - 1]]   # x_i * y_g
        # scalar part: x_i y_g avoids both x_h and y_h on xR4
        bad_scalar = in4 & ((prod_ig == xc[h - 1]) | (prod_ig == comps[:, h - 1]))
        if bad_scalar.any():
            failures.append(f"scalar g={g},h={h},i={i}")
        domain = _pair_domain(ctx, 4, 4) & (ctx.cls == 4)
        nz = domain & (W != 0)
        checked += int(domain.sum())
        zi_ok = comps[:, i - 1][None, :] == prod_hg[:, None]
        zh = comps[:, h - 1]
        zh_bad = (
            (zh[None, :] == xc[h - 1])
            | (zh[None, :] == comps[:, h - 1][:, None])
            | (zh[None, :] == prod_ig[:, None])
        )
        if not np.all(zi_ok[nz]) or zh_bad[nz].any():
            failures.append(f"entry g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_8(ctx: TerwilligerContext, t0) -> Dict:
    comps, xc, table = _components(ctx)
    cls_x = ctx.cls[ctx.basepoint]
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        prod_hg = table[xc[h - 1], comps[:, g - 1]]
        prod_ig = table[xc[i - 1], comps[:, g - 1]]
        zi_eq = comps[:, i - 1][None, :] == prod_hg[:, None]
        zh = comps[:, h - 1]
        zh_ok = (
            (zh[None, :] != xc[h - 1])
            & (zh[None, :] != comps[:, h - 1][:, None])
            & (zh[None, :] != prod_ig[:, None])
        )
        cond = (cls_x == 4)[:, None] & zi_eq & zh_ok
        checked += int(cond.sum())
        target_class = (cls_x == 4)[None, :] & (ctx.cls == 4)
        ok = (~cond) | (target_class & (W == 1 % ctx.p))
        if not ok.all():
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_9(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        checked += 1
        if t0.contains_vector(ctx.evaluate_array(_path(4, g, h, i, 4)).reshape(-1)):
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _l1_10_equations(ctx, g: int, h: int, i: int):
    comps, xc, table = _components(ctx)
    eq_g = comps[:, g - 1][None, :] == table[xc[h - 1], comps[:, i - 1]][:, None]
    eq_h = comps[:, h - 1][None, :] == comps[:, h - 1][:, None]
    eq_i = comps[:, i - 1][None, :] == table[xc[h - 1], comps[:, g - 1]][:, None]
    return eq_g & eq_h & eq_i


def _pred_l1_10(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        domain = _pair_domain(ctx, 4, 4) & (ctx.cls == h)
        nz = domain & (W != 0)
        checked += int(domain.sum())
        if not _l1_10_equations(ctx, g, h, i)[nz].all():
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_11(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        cond = _pair_domain(ctx, 4, 4) & _l1_10_equations(ctx, g, h, i)
        checked += int(cond.sum())
        if not np.all(W[cond] == 1 % ctx.p):
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_12(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        domain = _pair_domain(ctx, 4, 4) & np.isin(ctx.cls, (0, g, i))
        checked += int(domain.sum())
        if W[domain].any():
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_13(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W1 = ctx.evaluate_array(_path(4, g, h, i, 4))
        W2 = ctx.evaluate_array(_path(4, i, h, g, 4))
        domain = _pair_domain(ctx, 4, 4)
        both = domain & (W1 != 0) & (W2 != 0)
        eqs = domain & _l1_10_equations(ctx, g, h, i)
        checked += int(domain.sum())
        if not np.array_equal(both, eqs):
            failures.append(f"g={g},h={h},i={i}")
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_14(ctx: TerwilligerContext, t0) -> Dict:
    checked = 0
    failures = []
    for g, h, i in PERMS:
        W = ctx.evaluate_array(_path(4, g, h, i, 4))
        for label, other in (
            (f"({g}{h}{i})|({h}{g}{i})", _path(4, h, g, i, 4)),
            (f"({g}{h}{i})|({g}{i}{h})", _path(4, g, i, h, 4)),
        ):
            V = ctx.evaluate_array(other)
            checked += 1
            if ((W != 0) & (V != 0)).any():
                failures.append(label)
    return {"pass": not failures, "checked": checked, "failures": failures}


def _pred_l1_15(ctx: TerwilligerContext, t0) -> Dict:
    comps, xc, table = _components(ctx)
    checked = 0
    failures = []
    for g, h, i in PERMS:
        eq_g = comps[:, g - 1][None, :] == table[xc[i - 1], comps[:, h - 1]][:, None]
        eq_h = comps[:, h - 1][None, :] == table[xc[g - 1], comps[:, i - 1]][:, None]
        eq_i = comps[:, i - 1][None, :] == table[xc[h - 1], comps[:, g - 1]][:, None]
        eqs = _pair_domain(ctx, 4, 4) & eq_g & eq_h & eq_i
        W1 = ctx.evaluate_array(_path(4, g, h, i, 4))
        for label, other in (
            (f"({g}{h}{i})|({i}{g}{h})", _path(4, i, g, h, 4)),
            (f"({g}{h}{i})|({h}{i}{g})", _path(4, h, i, g, 4)),
        ):
            W2 = ctx.evaluate_array(other)
            both = _pair_domain(ctx, 4, 4) & (W1 != 0) & (W2 != 0)
            checked += int(_pair_domain(ctx, 4, 4).sum())
            if not np.array_equal(both, eqs):
                failures.append(label)
    return {"pass": not failures, "checked": checked, "failures": failures}


def _b6_kernel(ctx: TerwilligerContext, t0: SubspaceBasis) -> List[np.ndarray]:
    """Basis of the combinations of the six double products lying in T0."""
    words = set_B6()
    amb = ctx.N * ctx.N
    builder = RrefBuilder(amb + 6, ctx.modulus, capacity=8)
    for j, expr in enumerate(words):
        residue = t0.reduce(ctx.evaluate_array(expr).reshape(-1))
        aug = np.zeros(amb + 6, dtype=np.int64)
        aug[:amb] = residue
        aug[amb + j] = 1
        builder.insert(aug)
    basis = builder.finish()
    return [row[amb:] for row in basis.rows if not row[:amb].any()]


def _pred_l1_17(ctx: TerwilligerContext, t0) -> Dict:
    kernel = _b6_kernel(ctx, t0)
    if ctx.n > 8:
        ok = not kernel
    else:  # n = 8: any combination inside T0 must involve the (1,2,3) word
        ok = len(kernel) <= 1 and all(vec[0] != 0 for vec in kernel)
    return {
        "pass": bool(ok),
        "checked": 6,
        "failures": [] if ok else [f"kernel_dim={len(kernel)}"],
        "kernel_dim": len(kernel),
    }


def _pred_l1_18(ctx: TerwilligerContext, t0) -> Dict:
    kernel = _b6_kernel(ctx, t0)
    ok = not kernel
    return {
        "pass": bool(ok),
        "checked": 6,
        "failures": [] if ok else [f"kernel_dim={len(kernel)}"],
        "kernel_dim": len(kernel),
    }


def _predicate_entries() -> List[PredicateEntry]:
    gt4 = lambda p, n: n > 4
    return [
        PredicateEntry("L1.3", _EA2, _pred_l1_3),
        PredicateEntry("L1.4", _EA2 + ", n > 4", _pred_l1_4, applies=gt4, needs_t0=True),
        PredicateEntry("L1.6", _ANY, _pred_l1_6),
        PredicateEntry("L1.7", _EA2, _pred_l1_7),
        PredicateEntry("L1.8", _EA2, _pred_l1_8),
        PredicateEntry("L1.9", _EA2, _pred_l1_9, needs_t0=True),
        PredicateEntry("L1.10", _EA2, _pred_l1_10),
        PredicateEntry("L1.11", _EA2, _pred_l1_11),
        PredicateEntry("L1.12", _EA2, _pred_l1_12),
        PredicateEntry("L1.13", _EA2, _pred_l1_13),
        PredicateEntry("L1.14", _EA2, _pred_l1_14),
        PredicateEntry("L1.15", _EA2, _pred_l1_15),
        PredicateEntry("L1.17", _EA2 + ", n > 4", _pred_l1_17, applies=gt4, needs_t0=True),
        PredicateEntry(
            "L1.18", _EA2 + ", p odd, n > 4", _pred_l1_18,
            applies=lambda p, n: p != 2 and n > 4, needs_t0=True,
        ),
    ]


_PREDICATES: List[PredicateEntry] = _predicate_entries()


def predicate_registry() -> List[PredicateEntry]:
    return list(_PREDICATES)


def registry_manifest() -> List[Dict[str, str]]:
    """Stable listing of every registered check (id, kind, hypothesis)."""
    out = [
        {"id": e.id, "kind": "identity", "hypothesis": e.hypothesis}
        for e in _IDENTITIES
    ]
    out.extend(
        {"id": e.id, "kind": "predicate", "hypothesis": e.hypothesis}
        for e in _PREDICATES
    )
    return out


# ---------------------------------------------------------------------------
# transpose pairing
# ---------------------------------------------------------------------------

_TRANSPOSE_PAIRS: Tuple[Tuple[str, str], ...] = (
    ("L1.5.i", "L1.5.ii"),
    ("L2.3.i", "L2.3.ii"),
    ("L2.4.i", "L2.4.ii"),
    ("L2.6.i", "L2.6.ii"),
    ("L2.6.iii", "L2.6.iv"),
    ("L2.7.i", "L2.7.ii"),
    ("L2.7.iii", "L2.7.iv"),
    ("L2.7.v", "L2.7.vi"),
    ("L2.7.vii", "L2.7.viii"),
    ("L2.7.ix", "L2.7.x"),
    ("L2.7.xi", "L2.7.xii"),
    ("L2.8.i", "L2.8.ii"),
    ("L2.8.iii", "L2.8.iv"),
    ("L2.8.v", "L2.8.vi"),
    ("L2.10.i", "L2.10.ii"),
    ("L2.10.iii", "L2.10.iv"),
    ("L2.10.v", "L2.10.vi"),
    ("L2.11.i", "L2.11.ii"),
    ("L2.11.iii", "L2.11.iv"),
    ("L2.12.i", "L2.12.ii"),
    ("L2.12.iii", "L2.12.iv"),
    ("L2.12.v", "L2.12.vi"),
    ("L2.12.vii", "L2.12.viii"),
    ("L2.12.ix", "L2.12.x"),
    ("L2.12.xi", "L2.12.xii"),
    ("L2.14.i", "L2.14.ii"),
    ("L2.14.iii", "L2.14.iv"),
    ("L2.14.v", "L2.14.vi"),
)


def transpose_pairs() -> List[Tuple[str, str]]:
    """Identity ids that are exact transposes of one another, instance by
    instance: reversing every word of the first (with coefficients kept)
    yields the second."""
    return list(_TRANSPOSE_PAIRS)


def check_transpose_pairing(n: int = 8) -> List[str]:
    """Symbolically verify each listed pair; returns mismatching ids."""
    by_id = {e.id: e for e in _IDENTITIES}
    bad = []
    for left_id, right_id in _TRANSPOSE_PAIRS:
        left = by_id[left_id].build(n)
        right = by_id[right_id].build(n)
        if len(left) != len(right):
            bad.append(left_id)
            continue
        for (_, l_lhs, l_rhs, lm), (_, r_lhs, r_rhs, rm) in zip(left, right):
            if lm != "eq" or rm != "eq":
                bad.append(left_id)
                break
            if l_lhs.transpose().terms != r_lhs.terms or l_rhs.transpose().terms != r_rhs.terms:
                bad.append(left_id)
                break
    return bad


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def _matches(entry_id: str, ids: Optional[Sequence[str]]) -> bool:
    if ids is None:
        return True
    return any(token in entry_id for token in ids)


def run_identities(
    ctx: TerwilligerContext, *, ids: Optional[Sequence[str]] = None
) -> Dict:
    """Evaluate every applicable identity instance; zero tolerance."""
    t0: Optional[SubspaceBasis] = None
    selected = [e for e in _IDENTITIES if _matches(e.id, ids)]
    if any(e.needs_t0 and e.applies(ctx.p, ctx.n) for e in selected):
        t0 = t0_basis(ctx)
    results = []
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for entry in selected:
        if not entry.applies(ctx.p, ctx.n):
            results.append({"id": entry.id, "status": "skipped", "instances": 0,
                            "failures": []})
            counts["skipped"] += 1
            continue
        failures = []
        detail = None
        instances = entry.build(ctx.n)
        for label, lhs, rhs, mode in instances:
            if mode == "custom":
                ok, detail = lhs(ctx, t0)
                if not ok:
                    failures.append(label)
                continue
            left = ctx.evaluate_array(lhs)
            if mode == "symmetric":
                ok = np.array_equal(left, left.T)
            elif mode == "nonzero":
                ok = bool(left.any())
            else:
                ok = np.array_equal(left, ctx.evaluate_array(rhs))
            if not ok:
                failures.append(label)
        status = "fail" if failures else "pass"
        counts[status] += 1
        result = {"id": entry.id, "status": status,
                  "instances": len(instances), "failures": failures}
        if detail is not None:
            result["detail"] = detail
        results.append(result)
    return {"results": results, "counts": counts, "pass": counts["fail"] == 0}


def run_predicates(
    ctx: TerwilligerContext, *, ids: Optional[Sequence[str]] = None
) -> Dict:
    """Run every applicable entrywise predicate, exhaustively vectorized."""
    t0: Optional[SubspaceBasis] = None
    selected = [e for e in _PREDICATES if _matches(e.id, ids)]
    if any(e.needs_t0 and e.applies(ctx.p, ctx.n) for e in selected):
        t0 = t0_basis(ctx)
    results = []
    counts = {"pass": 0, "fail": 0, "skipped": 0}
    for entry in selected:
        if not entry.applies(ctx.p, ctx.n):
            results.append({"id": entry.id, "status": "skipped", "checked": 0,
                            "failures": []})
            counts["skipped"] += 1
            continue
        report = entry.run(ctx, t0)
        status = "pass" if report["pass"] else "fail"
        counts[status] += 1
        results.append({"id": entry.id, "status": status,
                        "checked": report.get("checked", 0),
                        "failures": report.get("failures", [])})
    return {"results": results, "counts": counts, "pass": counts["fail"] == 0}
