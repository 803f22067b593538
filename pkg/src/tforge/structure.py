"""Radicals and Wedderburn decompositions of the Terwilliger algebra.

Everything here is certified rather than trusted: a radical candidate is
spanned from its defining expressions, then pushed through four exact
stages -- two-sided ideal, nilpotency, matrix-unit relations modulo the
candidate, and span/dimension accounting.  The matrix-unit tables are data:
formal expressions keyed by case, transcribed once and evaluated per (p, n).

Case split (n a power of two, n >= 4):

* ``P2``  : p = 2 (all n), radical V2, blocks [5, 4, 1];
* ``I``   : n = 1 mod p, radical V1, blocks [4, 1, 1];
* ``II``  : n = 2 mod p (p odd), radical V2, blocks [6, 4, 1];
* ``III`` : n = 4 mod p (p >= 5), radical V3, blocks [5, 5, 1];
* ``IV``  : otherwise, radical {O}, blocks [6, 5, 1].
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gfp_linalg import (
    GFMatrix,
    PrimeModulus,
    RrefBuilder,
    SubspaceBasis,
    _matmul_arrays,
)
from .scheme import GroupSpec
from .talgebra import (
    AlgExpr,
    AlgebraHandle,
    Coeff,
    E,
    Imat,
    TerwilligerContext,
    UnsupportedCaseError,
    _MaskedGenerator,
    _jw,
    _tp,
    _w5,
    C1 as COEFF_C1,
    C2 as COEFF_C2,
    C3 as COEFF_C3,
    C4 as COEFF_C4,
    C5 as COEFF_C5,
    HALF,
    SIXTH,
    THIRD,
    closure_generate,
    corner_subalgebra,
    dual_idempotent,
    make_context,
    nonzero_triples,
    paper_basis,
    set_B3,
    set_B4,
    set_B6,
    set_C1,
    set_C2,
    set_C3,
    set_D1,
    set_D2,
    set_D3,
    set_H1,
    set_K1,
)

__all__ = [
    "CaseLabel",
    "classify_case",
    "radical_candidate",
    "corner_radical_candidate",
    "is_two_sided_ideal",
    "nilpotency_exponent",
    "quotient_structure",
    "UnitBlock",
    "UnitScheme",
    "matrix_unit_scheme",
    "certify_radical",
    "semisimple_closed_form",
    "expected_block_sizes",
    "caseI_lemma_basis",
    "decompose",
]


class CaseLabel(str, enum.Enum):
    I = "I"
    II = "II"
    P2 = "P2"
    III = "III"
    IV = "IV"


def _require_power_of_two(n: int) -> int:
    """Return log2(n) for n a power of two with n >= 4, else raise."""
    if n < 4 or n & (n - 1):
        raise UnsupportedCaseError(
            f"structure analysis needs n a power of two with n >= 4, got {n}"
        )
    return n.bit_length() - 1


def classify_case(p: int, n: int) -> CaseLabel:
    PrimeModulus(p)
    _require_power_of_two(n)
    if p == 2:
        return CaseLabel.P2
    r = n % p
    if r == 1:
        return CaseLabel.I
    if r == 2:
        return CaseLabel.II
    if r == 4:
        return CaseLabel.III
    return CaseLabel.IV


def radical_candidate(case: CaseLabel, p: int, n: int) -> List[AlgExpr]:
    """Formal spanning set of the radical for the case (possibly empty)."""
    if case is CaseLabel.I:
        return set_B4(p, n) + set_C1() + set_D1()
    if case is CaseLabel.II:
        return set_B4(p, n)
    if case is CaseLabel.P2:
        return set_B4(p, n) + set_C2(p) + set_D2()
    if case is CaseLabel.III:
        return set_C3() + set_D3()
    return []


def corner_radical_candidate(case: CaseLabel, p: int) -> List[AlgExpr]:
    """Spanning set of Rad(E_4* T E_4*) for the case."""
    if case is CaseLabel.I:
        return set_C1()
    if case in (CaseLabel.II, CaseLabel.P2):
        return set_C2(p)
    if case is CaseLabel.III:
        return set_C3()
    return []


def semisimple_closed_form(p: int, n: int) -> bool:
    """Closed-form semisimplicity: p not in {2, 3} and n = 4, or
    n incongruent to each of 1, 2, 4 mod p."""
    PrimeModulus(p)
    _require_power_of_two(n)
    if p not in (2, 3) and n == 4:
        return True
    return all(n % p != v % p for v in (1, 2, 4))


# ---------------------------------------------------------------------------
# ideal / nilpotency checks
# ---------------------------------------------------------------------------

def _masked_multipliers(ctx: TerwilligerContext) -> List[Tuple[Tuple[int, int, int], _MaskedGenerator]]:
    return [
        (t, _MaskedGenerator(ctx, *t)) for t in nonzero_triples(ctx.n)
    ]


def is_two_sided_ideal(
    alg: AlgebraHandle, sub: SubspaceBasis
) -> Tuple[bool, Optional[Dict]]:
    """Check sub*g and g*sub stay in sub for every algebra generator g.

    Generators suffice: a word in the generators acts as a composition of
    one-sided generator actions, so stability under each generator gives
    stability under all of the algebra.
    """
    ctx = alg.ctx
    p = ctx.p
    mults = _masked_multipliers(ctx)
    for ri in range(sub.dim):
        v = sub.rows[ri].reshape(ctx.N, ctx.N)
        for tag, gen in mults:
            right = gen.right_product(v, p)
            if not sub.contains_vector(right.reshape(-1)):
                return False, {"row": ri, "generator": tag, "side": "right"}
            left = gen.left_product(v, p)
            if not sub.contains_vector(left.reshape(-1)):
                return False, {"row": ri, "generator": tag, "side": "left"}
    return True, None


def nilpotency_exponent(
    sub: SubspaceBasis, modulus: PrimeModulus, side: int, *, bound: Optional[int] = None
) -> Optional[int]:
    """Smallest e with sub^e = {O} under matrix products, or None.

    ``side`` is the matrix size (rows of sub are flattened side x side
    matrices).  The bound defaults to dim + 1, which any nilpotent chain of
    strictly shrinking subspaces must respect.
    """
    if sub.dim == 0:
        return 1
    if bound is None:
        bound = sub.dim + 1
    p = modulus.p
    base = [r.reshape(side, side) for r in sub.rows]
    current = sub
    exponent = 1
    while current.dim > 0:
        exponent += 1
        if exponent > bound + 1:
            return None
        builder = RrefBuilder(side * side, modulus, capacity=max(4, current.dim))
        for row in current.rows:
            u = row.reshape(side, side)
            for w in base:
                builder.insert(_matmul_arrays(u, w, p).reshape(-1))
        current = builder.finish()
    return exponent


def quotient_structure(case: CaseLabel, *, corner: bool = False) -> Dict:
    """Block sizes and a display name for the semisimple quotient."""
    sizes = expected_block_sizes(case, corner=corner)
    return {
        "blocks": sizes,
        "algebra": " + ".join(f"M{s}" for s in sizes),
        "quotient_dim": sum(s * s for s in sizes),
    }


# ---------------------------------------------------------------------------
# matrix-unit tables
# ---------------------------------------------------------------------------

@dataclass
class UnitBlock:
    size: int
    units: Dict[Tuple[int, int], AlgExpr]


@dataclass
class UnitScheme:
    case: CaseLabel
    corner: bool
    blocks: List[UnitBlock]
    residual: Optional[AlgExpr]
    identity: AlgExpr
    structural_residual: bool  # residual defined as identity minus diagonal

    @property
    def block_sizes(self) -> List[int]:
        sizes = [b.size for b in self.blocks]
        if self.residual is not None:
            sizes.append(1)
        return sizes


def _third_index(g: int, i: int) -> int:
    return 6 - g - i


def _corner_units_I() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    top = UnitBlock(1, {(1, 1): 2 * _tp(4, 0, 4) + _tp(4, 1, 4)})
    bottom = UnitBlock(1, {(1, 1): -_w5(4, 1, 2, 3, 4)})
    return [top, bottom], None, False


def _corner_units_II() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    e4 = _tp(4, 0, 4)
    units = {
        (1, 1): HALF * (e4 + _tp(4, 1, 4) - _w5(4, 2, 3, 1, 4) - _w5(4, 3, 2, 1, 4)),
        (1, 2): HALF * (_w5(4, 1, 3, 2, 4) - _w5(4, 3, 1, 2, 4) - e4 - _tp(4, 2, 4)),
        (1, 3): HALF * (_w5(4, 1, 2, 3, 4) - _w5(4, 2, 1, 3, 4) - e4 - _tp(4, 3, 4)),
        (2, 1): HALF * (_w5(4, 2, 3, 1, 4) - _w5(4, 3, 2, 1, 4) - e4 - _tp(4, 1, 4)),
        (2, 2): HALF * (e4 + _tp(4, 2, 4) - _w5(4, 1, 3, 2, 4) - _w5(4, 3, 1, 2, 4)),
        (2, 3): HALF * (_w5(4, 2, 1, 3, 4) - _w5(4, 1, 2, 3, 4) - e4 - _tp(4, 3, 4)),
        (3, 1): HALF * (_w5(4, 3, 2, 1, 4) - _w5(4, 2, 3, 1, 4) - e4 - _tp(4, 1, 4)),
        (3, 2): HALF * (_w5(4, 3, 1, 2, 4) - _w5(4, 1, 3, 2, 4) - e4 - _tp(4, 2, 4)),
        (3, 3): HALF * (e4 + _tp(4, 3, 4) - _w5(4, 1, 2, 3, 4) - _w5(4, 2, 1, 3, 4)),
    }
    block = UnitBlock(3, units)
    residual = e4 - units[(1, 1)] - units[(2, 2)] - units[(3, 3)]
    return [block], residual, True


def _corner_units_P2() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    units = {
        (1, 1): _w5(4, 2, 1, 3, 4),
        (1, 2): _w5(4, 1, 3, 2, 4) + _w5(4, 3, 1, 2, 4),
        (2, 1): _w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4),
        (2, 2): _w5(4, 3, 1, 2, 4),
    }
    block = UnitBlock(2, units)
    residual = _tp(4, 0, 4) + units[(1, 1)] + units[(2, 2)]
    return [block], residual, False


def _corner_units_III() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    units = {
        (1, 1): THIRD * (_jw(4, 4) - 2 * _w5(4, 1, 2, 3, 4) - _w5(4, 1, 3, 2, 4)),
        (1, 2): THIRD * (_w5(4, 1, 2, 3, 4) - _w5(4, 1, 3, 2, 4)),
        (2, 1): THIRD * (_w5(4, 2, 1, 3, 4) - _w5(4, 2, 3, 1, 4)),
        (2, 2): THIRD * (_jw(4, 4) - 2 * _w5(4, 2, 1, 3, 4) - _w5(4, 2, 3, 1, 4)),
    }
    big = UnitBlock(2, units)
    single = UnitBlock(1, {(1, 1): SIXTH * _jw(4, 4)})
    residual = (
        _tp(4, 0, 4)
        - single.units[(1, 1)]
        - units[(1, 1)]
        - units[(2, 2)]
    )
    return [big, single], residual, True


def _corner_units_IV() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    c5i = COEFF_C5.reciprocal()
    c3 = COEFF_C3
    e4 = _tp(4, 0, 4)
    jw44 = _jw(4, 4)
    units = {
        (1, 1): c5i * (_w5(4, 2, 3, 1, 4) + _w5(4, 3, 2, 1, 4) + c3 * (e4 + _tp(4, 1, 4)) - jw44),
        (1, 2): c5i * (e4 + _tp(4, 2, 4) + _w5(4, 3, 1, 2, 4) + c3 * _w5(4, 1, 3, 2, 4) - jw44),
        (1, 3): c5i * (e4 + _tp(4, 3, 4) + _w5(4, 2, 1, 3, 4) + c3 * _w5(4, 1, 2, 3, 4) - jw44),
        (2, 1): c5i * (e4 + _tp(4, 1, 4) + _w5(4, 3, 2, 1, 4) + c3 * _w5(4, 2, 3, 1, 4) - jw44),
        (2, 2): c5i * (_w5(4, 1, 3, 2, 4) + _w5(4, 3, 1, 2, 4) + c3 * (e4 + _tp(4, 2, 4)) - jw44),
        (2, 3): c5i * (e4 + _tp(4, 3, 4) + _w5(4, 1, 2, 3, 4) + c3 * _w5(4, 2, 1, 3, 4) - jw44),
        (3, 1): c5i * (e4 + _tp(4, 1, 4) + _w5(4, 2, 3, 1, 4) + c3 * _w5(4, 3, 2, 1, 4) - jw44),
        (3, 2): c5i * (e4 + _tp(4, 2, 4) + _w5(4, 1, 3, 2, 4) + c3 * _w5(4, 3, 1, 2, 4) - jw44),
        (3, 3): c5i * (_w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4) + c3 * (e4 + _tp(4, 3, 4)) - jw44),
    }
    big = UnitBlock(3, units)
    single = UnitBlock(1, {(1, 1): COEFF_C4.reciprocal() * jw44})
    residual = e4 - single.units[(1, 1)] - units[(1, 1)] - units[(2, 2)] - units[(3, 3)]
    return [big, single], residual, True


def _full_units_I() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    m = {
        (1, 1): E(1), (1, 2): _tp(1, 3, 2), (1, 3): _tp(1, 2, 3), (1, 4): _tp(1, 2, 4),
        (2, 1): _tp(2, 3, 1), (2, 2): E(2), (2, 3): _tp(2, 1, 3), (2, 4): _tp(2, 1, 4),
        (3, 1): _tp(3, 2, 1), (3, 2): _tp(3, 1, 2), (3, 3): E(3), (3, 4): _tp(3, 1, 4),
        (4, 1): -_tp(4, 2, 1), (4, 2): -_tp(4, 1, 2), (4, 3): -_tp(4, 1, 3),
        (4, 4): -_w5(4, 1, 2, 3, 4),
    }
    blocks = [
        UnitBlock(4, m),
        UnitBlock(1, {(1, 1): E(0)}),
        UnitBlock(1, {(1, 1): _tp(4, 0, 4) + _w5(4, 1, 2, 3, 4)}),
    ]
    return blocks, None, False


def _jword_block(scales: Dict[int, Coeff], size: int) -> UnitBlock:
    """Block of J-word units N_gh = scale(g) * E_{g-1} J E_{h-1}."""
    units: Dict[Tuple[int, int], AlgExpr] = {}
    for g in range(1, size + 1):
        for h in range(1, size + 1):
            expr = _jw(g - 1, h - 1)
            coeff = scales.get(g)
            units[(g, h)] = expr if coeff is None else coeff * expr
    return UnitBlock(size, units)


def _full_units_II() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    m: Dict[Tuple[int, int], AlgExpr] = {}
    for j in range(1, 4):
        m[(j, j)] = E(j) - _jw(j, j)
    for g in range(1, 4):
        for i in range(1, 4):
            if g != i:
                m[(g, i)] = _tp(g, _third_index(g, i), i) - _jw(g, i)
    m[(1, 4)] = _w5(1, 2, 3, 1, 4)
    m[(1, 5)] = _tp(1, 2, 4)
    m[(1, 6)] = _tp(1, 3, 4)
    m[(2, 4)] = _tp(2, 1, 4)
    m[(2, 5)] = _w5(2, 1, 3, 2, 4)
    m[(2, 6)] = _tp(2, 3, 4)
    m[(3, 4)] = _tp(3, 1, 4)
    m[(3, 5)] = _tp(3, 2, 4)
    m[(3, 6)] = _w5(3, 1, 2, 3, 4)
    m[(4, 1)] = HALF * (_w5(4, 1, 3, 2, 1) - _tp(4, 2, 1) - _tp(4, 3, 1))
    m[(4, 2)] = HALF * (_tp(4, 1, 2) - _tp(4, 3, 2) - _w5(4, 2, 3, 1, 2))
    m[(4, 3)] = HALF * (_tp(4, 1, 3) - _tp(4, 2, 3) - _w5(4, 3, 2, 1, 3))
    m[(5, 1)] = HALF * (_tp(4, 2, 1) - _tp(4, 3, 1) - _w5(4, 1, 3, 2, 1))
    m[(5, 2)] = HALF * (_w5(4, 2, 3, 1, 2) - _tp(4, 1, 2) - _tp(4, 3, 2))
    m[(5, 3)] = HALF * (_tp(4, 2, 3) - _tp(4, 1, 3) - _w5(4, 3, 2, 1, 3))
    m[(6, 1)] = HALF * (_tp(4, 3, 1) - _tp(4, 2, 1) - _w5(4, 1, 3, 2, 1))
    m[(6, 2)] = HALF * (_tp(4, 3, 2) - _tp(4, 1, 2) - _w5(4, 2, 3, 1, 2))
    m[(6, 3)] = HALF * (_w5(4, 3, 2, 1, 3) - _tp(4, 1, 3) - _tp(4, 2, 3))
    corner_blocks, _, _ = _corner_units_II()
    corner = corner_blocks[0].units
    for g in range(1, 4):
        for h in range(1, 4):
            m[(g + 3, h + 3)] = corner[(g, h)]
    blocks = [UnitBlock(6, m), _jword_block({}, 4)]
    residual = Imat()
    for block in blocks:
        for j in range(1, block.size + 1):
            residual = residual - block.units[(j, j)]
    return blocks, residual, True


def _full_units_P2() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    m: Dict[Tuple[int, int], AlgExpr] = {}
    for j in range(1, 4):
        m[(j, j)] = E(j) + _jw(j, j)
    for g in range(1, 4):
        for i in range(1, 4):
            if g != i:
                m[(g, i)] = _tp(g, _third_index(g, i), i) + _jw(g, i)
    m[(1, 4)] = _tp(1, 3, 4)
    m[(1, 5)] = _tp(1, 2, 4)
    m[(2, 4)] = _tp(2, 3, 4)
    m[(2, 5)] = _w5(2, 1, 3, 2, 4)
    m[(3, 4)] = _w5(3, 1, 2, 3, 4)
    m[(3, 5)] = _tp(3, 2, 4)
    m[(4, 1)] = _tp(4, 2, 1)
    m[(4, 2)] = _w5(4, 2, 3, 1, 2)
    m[(4, 3)] = _tp(4, 2, 3)
    m[(5, 1)] = _tp(4, 3, 1)
    m[(5, 2)] = _tp(4, 3, 2)
    m[(5, 3)] = _w5(4, 3, 2, 1, 3)
    m[(4, 4)] = _w5(4, 2, 1, 3, 4)
    m[(4, 5)] = _w5(4, 1, 3, 2, 4) + _w5(4, 3, 1, 2, 4)
    m[(5, 4)] = _w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4)
    m[(5, 5)] = _w5(4, 3, 1, 2, 4)
    blocks = [UnitBlock(5, m), _jword_block({}, 4)]
    residual = _tp(4, 0, 4) + _w5(4, 2, 1, 3, 4) + _w5(4, 3, 1, 2, 4)
    return blocks, residual, False


def _full_units_III() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    m: Dict[Tuple[int, int], AlgExpr] = {}
    for j in range(1, 4):
        m[(j, j)] = E(j) - THIRD * _jw(j, j)
    for g in range(1, 4):
        for i in range(1, 4):
            if g != i:
                m[(g, i)] = _tp(g, _third_index(g, i), i) - THIRD * _jw(g, i)
    m[(1, 4)] = THIRD * (2 * _tp(1, 3, 4) + _tp(1, 2, 4) - _jw(1, 4))
    m[(1, 5)] = THIRD * (2 * _tp(1, 3, 4) + _w5(1, 2, 3, 1, 4) - _jw(1, 4))
    m[(2, 4)] = THIRD * (2 * _tp(2, 3, 4) + _w5(2, 1, 3, 2, 4) - _jw(2, 4))
    m[(2, 5)] = THIRD * (2 * _tp(2, 3, 4) + _tp(2, 1, 4) - _jw(2, 4))
    m[(3, 4)] = THIRD * (2 * _w5(3, 1, 2, 3, 4) + _tp(3, 2, 4) - _jw(3, 4))
    m[(3, 5)] = THIRD * (2 * _w5(3, 1, 2, 3, 4) + _tp(3, 1, 4) - _jw(3, 4))
    m[(4, 1)] = THIRD * _jw(4, 1) - _w5(4, 1, 3, 2, 1)
    m[(5, 1)] = THIRD * _jw(4, 1) - _tp(4, 2, 1)
    m[(4, 2)] = THIRD * _jw(4, 2) - _tp(4, 1, 2)
    m[(5, 2)] = THIRD * _jw(4, 2) - _w5(4, 2, 3, 1, 2)
    m[(4, 3)] = THIRD * _jw(4, 3) - _tp(4, 1, 3)
    m[(5, 3)] = THIRD * _jw(4, 3) - _tp(4, 2, 3)
    m[(4, 4)] = THIRD * (_jw(4, 4) - 2 * _w5(4, 1, 2, 3, 4) - _w5(4, 1, 3, 2, 4))
    m[(4, 5)] = THIRD * (_w5(4, 1, 3, 2, 4) - _w5(4, 1, 2, 3, 4))
    m[(5, 4)] = THIRD * (_w5(4, 2, 3, 1, 4) - _w5(4, 2, 1, 3, 4))
    m[(5, 5)] = THIRD * (_jw(4, 4) - 2 * _w5(4, 2, 1, 3, 4) - _w5(4, 2, 3, 1, 4))
    nblock = _jword_block({2: THIRD, 3: THIRD, 4: THIRD, 5: SIXTH}, 5)
    blocks = [UnitBlock(5, m), nblock]
    residual = Imat()
    for block in blocks:
        for j in range(1, block.size + 1):
            residual = residual - block.units[(j, j)]
    return blocks, residual, True


def _full_units_IV() -> Tuple[List[UnitBlock], Optional[AlgExpr], bool]:
    c1i = COEFF_C1.reciprocal()
    c5i = COEFF_C5.reciprocal()
    c3 = COEFF_C3
    e4 = _tp(4, 0, 4)
    jw44 = _jw(4, 4)
    m: Dict[Tuple[int, int], AlgExpr] = {}
    for j in range(1, 4):
        m[(j, j)] = E(j) - c1i * _jw(j, j)
    for g in range(1, 4):
        for i in range(1, 4):
            if g != i:
                m[(g, i)] = _tp(g, _third_index(g, i), i) - c1i * _jw(g, i)
    m[(1, 4)] = _w5(1, 2, 3, 1, 4) - c1i * _jw(1, 4)
    m[(1, 5)] = _tp(1, 2, 4) - c1i * _jw(1, 4)
    m[(1, 6)] = _tp(1, 3, 4) - c1i * _jw(1, 4)
    m[(2, 4)] = _tp(2, 1, 4) - c1i * _jw(2, 4)
    m[(2, 5)] = _w5(2, 1, 3, 2, 4) - c1i * _jw(2, 4)
    m[(2, 6)] = _tp(2, 3, 4) - c1i * _jw(2, 4)
    m[(3, 4)] = _tp(3, 1, 4) - c1i * _jw(3, 4)
    m[(3, 5)] = _tp(3, 2, 4) - c1i * _jw(3, 4)
    m[(3, 6)] = _w5(3, 1, 2, 3, 4) - c1i * _jw(3, 4)
    m[(4, 1)] = c5i * (_tp(4, 2, 1) + _tp(4, 3, 1) + c3 * _w5(4, 1, 3, 2, 1) - _jw(4, 1))
    m[(4, 2)] = c5i * (_tp(4, 3, 2) + _w5(4, 2, 3, 1, 2) + c3 * _tp(4, 1, 2) - _jw(4, 2))
    m[(4, 3)] = c5i * (_tp(4, 2, 3) + _w5(4, 3, 2, 1, 3) + c3 * _tp(4, 1, 3) - _jw(4, 3))
    m[(4, 4)] = c5i * (_w5(4, 2, 3, 1, 4) + _w5(4, 3, 2, 1, 4) + c3 * (e4 + _tp(4, 1, 4)) - jw44)
    m[(4, 5)] = c5i * (e4 + _tp(4, 2, 4) + _w5(4, 3, 1, 2, 4) + c3 * _w5(4, 1, 3, 2, 4) - jw44)
    m[(4, 6)] = c5i * (e4 + _tp(4, 3, 4) + _w5(4, 2, 1, 3, 4) + c3 * _w5(4, 1, 2, 3, 4) - jw44)
    m[(5, 1)] = c5i * (_tp(4, 3, 1) + _w5(4, 1, 3, 2, 1) + c3 * _tp(4, 2, 1) - _jw(4, 1))
    m[(5, 2)] = c5i * (_tp(4, 1, 2) + _tp(4, 3, 2) + c3 * _w5(4, 2, 3, 1, 2) - _jw(4, 2))
    m[(5, 3)] = c5i * (_tp(4, 1, 3) + _w5(4, 3, 2, 1, 3) + c3 * _tp(4, 2, 3) - _jw(4, 3))
    m[(5, 4)] = c5i * (e4 + _tp(4, 1, 4) + _w5(4, 3, 2, 1, 4) + c3 * _w5(4, 2, 3, 1, 4) - jw44)
    m[(5, 5)] = c5i * (_w5(4, 1, 3, 2, 4) + _w5(4, 3, 1, 2, 4) + c3 * (e4 + _tp(4, 2, 4)) - jw44)
    m[(5, 6)] = c5i * (e4 + _tp(4, 3, 4) + _w5(4, 1, 2, 3, 4) + c3 * _w5(4, 2, 1, 3, 4) - jw44)
    m[(6, 1)] = c5i * (_tp(4, 2, 1) + _w5(4, 1, 3, 2, 1) + c3 * _tp(4, 3, 1) - _jw(4, 1))
    m[(6, 2)] = c5i * (_tp(4, 1, 2) + _w5(4, 2, 3, 1, 2) + c3 * _tp(4, 3, 2) - _jw(4, 2))
    m[(6, 3)] = c5i * (_tp(4, 1, 3) + _tp(4, 2, 3) + c3 * _w5(4, 3, 2, 1, 3) - _jw(4, 3))
    m[(6, 4)] = c5i * (e4 + _tp(4, 1, 4) + _w5(4, 2, 3, 1, 4) + c3 * _w5(4, 3, 2, 1, 4) - jw44)
    m[(6, 5)] = c5i * (e4 + _tp(4, 2, 4) + _w5(4, 1, 3, 2, 4) + c3 * _w5(4, 3, 1, 2, 4) - jw44)
    m[(6, 6)] = c5i * (_w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4) + c3 * (e4 + _tp(4, 3, 4)) - jw44)
    # J-word block: plain on the top row, c1^-1 below; the last column
    # carries c2^-1 (top) or c4^-1 instead, matching the larger valency.
    c2i = COEFF_C2.reciprocal()
    c4i = COEFF_C4.reciprocal()
    nunits: Dict[Tuple[int, int], AlgExpr] = {}
    for g in range(1, 6):
        for h in range(1, 6):
            if g == 1:
                nunits[(g, h)] = _jw(0, h - 1) if h < 5 else c2i * _jw(0, 4)
            else:
                nunits[(g, h)] = (
                    c1i * _jw(g - 1, h - 1) if h < 5 else c4i * _jw(g - 1, 4)
                )
    blocks = [UnitBlock(6, m), UnitBlock(5, nunits)]
    residual = Imat()
    for block in blocks:
        for j in range(1, block.size + 1):
            residual = residual - block.units[(j, j)]
    return blocks, residual, True


def matrix_unit_scheme(case: CaseLabel, *, corner: bool = False) -> UnitScheme:
    """The case's matrix-unit expressions, for T or for E_4* T E_4*."""
    table = {
        (CaseLabel.I, True): _corner_units_I,
        (CaseLabel.II, True): _corner_units_II,
        (CaseLabel.P2, True): _corner_units_P2,
        (CaseLabel.III, True): _corner_units_III,
        (CaseLabel.IV, True): _corner_units_IV,
        (CaseLabel.I, False): _full_units_I,
        (CaseLabel.II, False): _full_units_II,
        (CaseLabel.P2, False): _full_units_P2,
        (CaseLabel.III, False): _full_units_III,
        (CaseLabel.IV, False): _full_units_IV,
    }
    blocks, residual, structural = table[(case, corner)]()
    return UnitScheme(
        case=case,
        corner=corner,
        blocks=blocks,
        residual=residual,
        identity=_tp(4, 0, 4) if corner else Imat(),
        structural_residual=structural,
    )


def expected_block_sizes(case: CaseLabel, *, corner: bool = False) -> List[int]:
    if corner:
        return {
            CaseLabel.I: [1, 1],
            CaseLabel.II: [3, 1],
            CaseLabel.P2: [2, 1],
            CaseLabel.III: [2, 1, 1],
            CaseLabel.IV: [3, 1, 1],
        }[case]
    return {
        CaseLabel.I: [4, 1, 1],
        CaseLabel.II: [6, 4, 1],
        CaseLabel.P2: [5, 4, 1],
        CaseLabel.III: [5, 5, 1],
        CaseLabel.IV: [6, 5, 1],
    }[case]


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def _span_exprs(ctx: TerwilligerContext, exprs: Sequence[AlgExpr], capacity: int = 8) -> SubspaceBasis:
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=capacity)
    for expr in exprs:
        builder.insert(ctx.evaluate_array(expr).reshape(-1))
    return builder.finish()


def _check_unit_relations(
    ctx: TerwilligerContext,
    scheme: UnitScheme,
    V: SubspaceBasis,
    *,
    max_failures: int = 5,
) -> Dict:
    """Verify all delta relations / orthogonality / idempotence mod V."""
    p = ctx.p
    entries: List[Tuple[object, int, int, np.ndarray]] = []
    lookup: Dict[Tuple[object, int, int], np.ndarray] = {}
    for bi, block in enumerate(scheme.blocks):
        for (g, h), expr in block.units.items():
            arr = ctx.evaluate_array(expr)
            entries.append((bi, g, h, arr))
            lookup[(bi, g, h)] = arr
    if scheme.residual is not None:
        arr = ctx.evaluate_array(scheme.residual)
        entries.append(("R", 1, 1, arr))
        lookup[("R", 1, 1)] = arr

    def _in_V(arr: np.ndarray) -> bool:
        if V.dim == 0:
            return not arr.any()
        return V.contains_vector(arr.reshape(-1))

    failures: List[Dict] = []
    checked = 0
    for (b1, g1, h1, a1) in entries:
        for (b2, g2, h2, a2) in entries:
            prod = _matmul_arrays(a1, a2, p)
            if b1 == b2 and h1 == g2:
                target = lookup[(b1, g1, h2)]
                residue = np.mod(prod - target, p)
            else:
                residue = prod
            checked += 1
            if not _in_V(residue):
                if len(failures) < max_failures:
                    failures.append({
                        "left": [str(b1), g1, h1],
                        "right": [str(b2), g2, h2],
                    })
    # decomposition of the identity across diagonal units
    diag_sum = np.zeros((ctx.N, ctx.N), dtype=np.int64)
    for bi, block in enumerate(scheme.blocks):
        for j in range(1, block.size + 1):
            diag_sum = np.mod(diag_sum + lookup[(bi, j, j)], p)
    if scheme.residual is not None:
        diag_sum = np.mod(diag_sum + lookup[("R", 1, 1)], p)
    identity_arr = ctx.evaluate_array(scheme.identity)
    diag_ok = _in_V(np.mod(diag_sum - identity_arr, p))
    return {
        "pass": not failures and diag_ok,
        "checked": checked,
        "failures": failures,
        "diag_identity": bool(diag_ok),
        "unit_arrays": lookup,
    }


def certify_radical(
    alg: AlgebraHandle,
    case: CaseLabel,
    candidate: Sequence[AlgExpr],
    *,
    partial: bool = False,
    dim_total: Optional[int] = None,
) -> Dict:
    """Four-stage radical certificate for the full algebra.

    (a) candidate spans a two-sided ideal; (b) the ideal is nilpotent;
    (c) the case's matrix units satisfy the delta relations modulo the
    candidate; (d) candidate plus units span T and the dimensions agree.
    In partial mode stage (d) trusts the closed-form dimension of T instead
    of a generated span.
    """
    ctx = alg.ctx
    V = _span_exprs(ctx, candidate, capacity=max(8, len(candidate)))
    scheme = matrix_unit_scheme(case, corner=False)

    ideal_ok, witness = is_two_sided_ideal(alg, V) if V.dim else (True, None)
    stage_a = {"pass": bool(ideal_ok), "witness": witness}

    expo = nilpotency_exponent(V, ctx.modulus, ctx.N)
    stage_b = {"pass": expo is not None, "exponent": expo}

    units_report = _check_unit_relations(ctx, scheme, V)
    unit_arrays = units_report.pop("unit_arrays")
    stage_c = units_report

    sizes = scheme.block_sizes
    if dim_total is None:
        dim_total = alg.span.dim if alg.span is not None else len(paper_basis(ctx))
    dim_identity = (dim_total - V.dim) == sum(s * s for s in sizes)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=dim_total + 4)
    for row in V.rows:
        builder.insert(row)
    membership_ok = True
    for key, arr in unit_arrays.items():
        builder.insert(arr.reshape(-1))
        if alg.span is not None and not alg.span.contains_vector(arr.reshape(-1)):
            membership_ok = False
    span_rank = builder.dim
    stage_d = {
        "pass": bool(dim_identity and span_rank == dim_total and membership_ok),
        "dim_total": int(dim_total),
        "dim_candidate": int(V.dim),
        "blocks": sizes,
        "span_rank": int(span_rank),
        "units_in_algebra": bool(membership_ok),
    }

    return {
        "candidate_dim": int(V.dim),
        "stages": {
            "ideal": stage_a,
            "nilpotent": stage_b,
            "units": stage_c,
            "dims": stage_d,
        },
        "pass": bool(
            stage_a["pass"] and stage_b["pass"] and stage_c["pass"] and stage_d["pass"]
        ),
        "partial": bool(partial),
    }


def _certify_corner(
    ctx: TerwilligerContext,
    case: CaseLabel,
    corner_span: SubspaceBasis,
    full_radical: SubspaceBasis,
) -> Dict:
    """Certify the E_4* corner: its radical, units, and the projection
    identity E_4* Rad(T) E_4* = Rad(E_4* T E_4*)."""
    p = ctx.p
    U = _span_exprs(ctx, corner_radical_candidate(case, p))
    scheme = matrix_unit_scheme(case, corner=True)

    # ideal stage, with the corner basis itself as the multiplier family
    ideal_ok, witness = True, None
    basis_mats = [row.reshape(ctx.N, ctx.N) for row in corner_span.rows]
    for ri in range(U.dim):
        v = U.rows[ri].reshape(ctx.N, ctx.N)
        for bi, b in enumerate(basis_mats):
            if not U.contains_vector(_matmul_arrays(v, b, p).reshape(-1)):
                ideal_ok, witness = False, {"row": ri, "basis": bi, "side": "right"}
                break
            if not U.contains_vector(_matmul_arrays(b, v, p).reshape(-1)):
                ideal_ok, witness = False, {"row": ri, "basis": bi, "side": "left"}
                break
        if not ideal_ok:
            break

    expo = nilpotency_exponent(U, ctx.modulus, ctx.N)
    units_report = _check_unit_relations(ctx, scheme, U)
    unit_arrays = units_report.pop("unit_arrays")

    sizes = scheme.block_sizes
    dim_identity = (corner_span.dim - U.dim) == sum(s * s for s in sizes)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=corner_span.dim + 4)
    for row in U.rows:
        builder.insert(row)
    membership_ok = True
    for arr in unit_arrays.values():
        builder.insert(arr.reshape(-1))
        if not corner_span.contains_vector(arr.reshape(-1)):
            membership_ok = False
    span_ok = builder.dim == corner_span.dim

    # projection of the full radical into the corner
    e4 = ctx.evaluate_array(_tp(4, 0, 4))
    proj = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=max(4, U.dim))
    for row in full_radical.rows:
        v = row.reshape(ctx.N, ctx.N)
        eve = _matmul_arrays(_matmul_arrays(e4, v, p), e4, p)
        proj.insert(eve.reshape(-1))
    projected = proj.finish()
    projection_ok = projected == U

    passed = bool(
        ideal_ok
        and expo is not None
        and units_report["pass"]
        and dim_identity
        and span_ok
        and membership_ok
        and projection_ok
    )
    return {
        "dim": int(corner_span.dim),
        "rad_dim": int(U.dim),
        "blocks": sizes,
        "ideal": {"pass": bool(ideal_ok), "witness": witness},
        "nilpotent": {"pass": expo is not None, "exponent": expo},
        "units": {k: units_report[k] for k in ("pass", "checked", "failures", "diag_identity")},
        "dims": {"pass": bool(dim_identity and span_ok and membership_ok)},
        "radical_projection": {
            "pass": bool(projection_ok),
            "projected_rank": int(projected.dim),
        },
        "pass": passed,
    }


def _small_corner_report(
    ctx: TerwilligerContext, a: int, case: CaseLabel, corner_span: SubspaceBasis
) -> Dict:
    """E_a* T E_a* for a in [0, 3]: dimension and explicit idempotents."""
    p = ctx.p
    if a == 0:
        ok = corner_span.dim == 1
        return {"dim": int(corner_span.dim), "rad_dim": 0, "blocks": [1], "pass": bool(ok)}
    kbar = (ctx.n - 1) % p
    e_arr = ctx.evaluate_array(E(a))
    j_arr = ctx.evaluate_array(_jw(a, a))
    ok = corner_span.dim == 2
    if kbar == 0:
        # the J-word squares to zero: one block with a 1-dim radical
        sq = _matmul_arrays(j_arr, j_arr, p)
        ok = ok and not sq.any() and case is CaseLabel.I
        return {
            "dim": int(corner_span.dim),
            "rad_dim": 1,
            "blocks": [1],
            "pass": bool(ok),
        }
    kinv = pow(int(kbar), -1, p)
    u1 = np.mod(kinv * j_arr, p)
    u2 = np.mod(e_arr - u1, p)
    ok = (
        ok
        and (_matmul_arrays(u1, u1, p) == u1).all()
        and (_matmul_arrays(u2, u2, p) == u2).all()
        and not _matmul_arrays(u1, u2, p).any()
        and not _matmul_arrays(u2, u1, p).any()
    )
    return {"dim": int(corner_span.dim), "rad_dim": 0, "blocks": [1, 1], "pass": bool(ok)}


def caseI_lemma_basis(p: int, n: int) -> List[AlgExpr]:
    """The alternative spanning list for T when n = 1 mod p, verbatim
    (duplicates included, so its length can exceed its rank)."""
    tail = [E(0), _tp(4, 0, 4) + _w5(4, 1, 2, 3, 4)]
    if p == 3 and n == 4:
        return set_K1(p, n) + set_H1(n) + tail
    return set_B4(p, n) + set_C1() + set_D1() + set_H1(n) + tail


def _basis_audit(ctx: TerwilligerContext, exprs_paper: List[AlgExpr]) -> Dict:
    lemma_list = caseI_lemma_basis(ctx.p, ctx.n)
    distinct = []
    seen = set()
    for expr in lemma_list:
        key = frozenset((w, (c.num, c.den)) for w, c in expr.terms.items())
        if key not in seen:
            seen.add(key)
            distinct.append(expr)
    paper_rank = _span_exprs(ctx, exprs_paper, capacity=len(exprs_paper)).dim
    lemma_rank = _span_exprs(ctx, lemma_list, capacity=len(lemma_list)).dim
    return {
        "paper_set_size": len(exprs_paper),
        "paper_set_rank": int(paper_rank),
        "lemma_list_size": len(lemma_list),
        "lemma_list_distinct": len(distinct),
        "lemma_list_rank": int(lemma_rank),
        "dependent_as_list": len(lemma_list) > int(lemma_rank),
    }


def decompose(
    p: int,
    n: int,
    *,
    basepoint: int = 0,
    partial: Optional[bool] = None,
    allow_large: bool = False,
    algebra: Optional[AlgebraHandle] = None,
) -> Dict:
    """Full certified decomposition report for (p, n).

    ``partial=None`` selects partial mode automatically once the scheme has
    1024 or more points; partial mode skips the generated closure and takes
    dim T from the closed-form basis count, flagging the certificate.
    ``algebra`` injects an already-generated closure for the same (p, n,
    basepoint) so repeated reports can share the expensive step.
    """
    case = classify_case(p, n)
    m = _require_power_of_two(n)
    if algebra is not None:
        ctx = algebra.ctx
        if (ctx.p, ctx.n, ctx.basepoint) != (p, n, basepoint) or algebra.span is None:
            raise ValueError("injected algebra does not match (p, n, basepoint)")
    else:
        group = GroupSpec.elementary_abelian_2(m)
        ctx = make_context(group, p, basepoint)
    if partial is None:
        partial = algebra is None and ctx.N >= 1024 and not allow_large

    basis_exprs = paper_basis(ctx)
    if partial:
        gens = [
            GFMatrix(ctx.factor_array(a, ("A", b), c), ctx.modulus, _reduced=True)
            for (a, b, c) in nonzero_triples(ctx.n)
        ]
        alg = AlgebraHandle(
            ctx=ctx,
            span=None,
            generators=gens,
            generator_words=[],
            identity=GFMatrix(ctx.identity_array(), ctx.modulus, _reduced=True),
            passes=0,
        )
        dim_T = len(basis_exprs)
    else:
        alg = algebra or closure_generate(ctx, allow_large=allow_large)
        dim_T = alg.span.dim

    candidate = radical_candidate(case, p, n)
    cert = certify_radical(alg, case, candidate, partial=partial, dim_total=dim_T)
    dim_rad = cert["candidate_dim"]
    V = _span_exprs(ctx, candidate, capacity=max(8, len(candidate)))

    corners: List[Dict] = []
    corner_blocks: List[List[int]] = []
    for a in range(5):
        if partial:
            if a == 4:
                span = _span_exprs(ctx, set_B3() + set_B6(), capacity=16)
            elif a == 0:
                span = _span_exprs(ctx, [E(0)])
            else:
                span = _span_exprs(ctx, [E(a), _jw(a, a)])
        else:
            span = corner_subalgebra(alg, dual_idempotent(ctx, a)).span
        if a == 4:
            report = _certify_corner(ctx, case, span, V)
        else:
            report = _small_corner_report(ctx, a, case, span)
        report["corner"] = a
        corners.append(report)
        corner_blocks.append(report["blocks"])

    semisimple_computed = dim_rad == 0
    semisimple_formula = semisimple_closed_form(p, n)
    blocks = expected_block_sizes(case)
    audit = _basis_audit(ctx, basis_exprs) if case is CaseLabel.I else None

    passed = bool(
        cert["pass"]
        and all(c["pass"] for c in corners)
        and semisimple_computed == semisimple_formula
        and cert["stages"]["dims"]["blocks"] == blocks
    )
    return {
        "p": p,
        "n": n,
        "basepoint": basepoint,
        "case": case.value,
        "dim_T": int(dim_T),
        "dim_rad": int(dim_rad),
        "blocks": blocks,
        "corner_blocks": corner_blocks,
        "semisimple": bool(semisimple_computed),
        "semisimple_closed_form": bool(semisimple_formula),
        "certificate": {
            "ideal": cert["stages"]["ideal"]["pass"],
            "nilpotent": cert["stages"]["nilpotent"]["pass"],
            "units": cert["stages"]["units"]["pass"],
            "dims": cert["stages"]["dims"]["pass"],
        },
        "certificate_detail": cert,
        "corners": corners,
        "basis_audit": audit,
        "partial_certificate": bool(partial),
        "pass": passed,
    }
