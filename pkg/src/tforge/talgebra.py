"""Terwilliger algebras of the triple scheme over GF(p).

The module has three layers:

* symbolic expressions (`AlgExpr`): formal GF(p)[n]-linear combinations of
  words in the atoms E_a* (dual idempotents), A_b (adjacency matrices) and J
  (all ones).  Scalar coefficients that depend on n -- like n-2 or
  1/((n-1)(n-4)) -- are kept as rational functions of n and reduced mod p
  only at evaluation time.

* a `TerwilligerContext` that pins (group, p, basepoint) and evaluates
  expressions exactly.  Words factor through cached E_a(op)E_c blocks, which
  are plain submatrix masks, so a word costs one dense matmul per interior
  junction and nothing else.

* the generated algebra: T_0 (span of triple products), the closure T, and
  the named generating sets used by the structure analysis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .gfp_linalg import (
    GFMatrix,
    PrimeModulus,
    RrefBuilder,
    SubspaceBasis,
    _matmul_arrays,
    rref_extend,
    span_of,
)
from .scheme import (
    GroupSpec,
    SchemeDescriptor,
    TripleSpace,
    build_descriptor,
    build_triple_space,
    class_matrix,
    intersection_closed,
    is_elementary_abelian_2,
    valencies_closed,
)

__all__ = [
    "UnsupportedCaseError",
    "CoefficientError",
    "Coeff",
    "AlgExpr",
    "E",
    "A",
    "Jmat",
    "Imat",
    "TerwilligerContext",
    "make_context",
    "adjacency_matrix",
    "dual_idempotent",
    "triple_product",
    "t0_basis",
    "AlgebraHandle",
    "closure_generate",
    "paper_basis",
    "corner_subalgebra",
    "named_sets",
]


class UnsupportedCaseError(Exception):
    """Raised when an operation requires a hypothesis the input lacks."""


class CoefficientError(Exception):
    """A scalar denominator vanished mod p (signals a transcription error)."""


# ---------------------------------------------------------------------------
# symbolic scalars: rational functions of n with integer coefficients
# ---------------------------------------------------------------------------

def _poly_trim(c: Tuple[int, ...]) -> Tuple[int, ...]:
    lst = list(c)
    while len(lst) > 1 and lst[-1] == 0:
        lst.pop()
    return tuple(lst)


def _poly_add(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    size = max(len(a), len(b))
    return _poly_trim(tuple(
        (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
        for i in range(size)
    ))


def _poly_mul(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _poly_trim(tuple(out))


def _poly_eval(c: Tuple[int, ...], n: int) -> int:
    acc = 0
    for coef in reversed(c):
        acc = acc * n + coef
    return acc


@dataclass(frozen=True)
class Coeff:
    """num(n)/den(n) with integer polynomials, evaluated in GF(p) on demand."""

    num: Tuple[int, ...] = (1,)
    den: Tuple[int, ...] = (1,)

    @classmethod
    def const(cls, c: int) -> "Coeff":
        return cls((int(c),), (1,))

    @classmethod
    def linear(cls, a0: int, a1: int) -> "Coeff":
        """a0 + a1*n."""
        return cls(_poly_trim((int(a0), int(a1))), (1,))

    def reciprocal(self) -> "Coeff":
        return Coeff(self.den, self.num)

    def __mul__(self, other: Union["Coeff", int]):
        if isinstance(other, int):
            other = Coeff.const(other)
        if not isinstance(other, Coeff):
            return NotImplemented
        return Coeff(_poly_mul(self.num, other.num), _poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __neg__(self) -> "Coeff":
        return Coeff(tuple(-c for c in self.num), self.den)

    def __add__(self, other: "Coeff"):
        if not isinstance(other, Coeff):
            return NotImplemented
        return Coeff(
            _poly_add(_poly_mul(self.num, other.den), _poly_mul(other.num, self.den)),
            _poly_mul(self.den, other.den),
        )

    def __sub__(self, other: "Coeff"):
        if not isinstance(other, Coeff):
            return NotImplemented
        return self + (-other)

    def is_zero_poly(self) -> bool:
        return all(c == 0 for c in self.num)

    def eval(self, n: int, p: int) -> int:
        dv = _poly_eval(self.den, n) % p
        if dv == 0:
            raise CoefficientError(
                f"denominator {self.den} vanishes at n={n} mod {p}"
            )
        nv = _poly_eval(self.num, n) % p
        return nv * pow(dv, -1, p) % p


ONE = Coeff.const(1)

# the scalars the notations use, under their usual names
NM2 = Coeff.linear(-2, 1)          # n - 2
NM3 = Coeff.linear(-3, 1)          # n - 3
NM4 = Coeff.linear(-4, 1)          # n - 4
HALF = Coeff((1,), (2,))           # inverse of 2
THIRD = Coeff((1,), (3,))          # inverse of 3
SIXTH = Coeff((1,), (6,))          # inverse of 6
C1 = Coeff.linear(-1, 1)           # n - 1
C2 = NM2
C3 = NM3
C4 = Coeff(_poly_mul((-1, 1), (-2, 1)), (1,))   # (n-1)(n-2)
C5 = Coeff(_poly_mul((-1, 1), (-4, 1)), (1,))   # (n-1)(n-4)


# ---------------------------------------------------------------------------
# formal expressions
# ---------------------------------------------------------------------------

Atom = Tuple
Word = Tuple[Atom, ...]


def _atom_str(atom: Atom) -> str:
    if atom[0] == "E":
        return f"E{atom[1]}*"
    if atom[0] == "A":
        return f"A{atom[1]}"
    return "J"


def format_word(word: Word) -> str:
    return "".join(_atom_str(a) for a in word) if word else "I"


class AlgExpr:
    """A formal sum of coefficient-weighted words; immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Coeff]] = None):
        self.terms: Dict[Word, Coeff] = dict(terms or {})

    # -- constructors --------------------------------------------------
    @staticmethod
    def zero() -> "AlgExpr":
        return AlgExpr({})

    @staticmethod
    def atom(atom: Atom) -> "AlgExpr":
        return AlgExpr({(atom,): ONE})

    # -- ring operations ------------------------------------------------
    def __add__(self, other: "AlgExpr") -> "AlgExpr":
        out = dict(self.terms)
        for w, c in other.terms.items():
            merged = out[w] + c if w in out else c
            if all(v == 0 for v in merged.num):
                out.pop(w, None)
            else:
                out[w] = merged
        return AlgExpr(out)

    def __sub__(self, other: "AlgExpr") -> "AlgExpr":
        return self + (-other)

    def __neg__(self) -> "AlgExpr":
        return AlgExpr({w: -c for w, c in self.terms.items()})

    def __mul__(self, scalar: Union[Coeff, int]) -> "AlgExpr":
        if isinstance(scalar, int):
            scalar = Coeff.const(scalar)
        return AlgExpr({w: c * scalar for w, c in self.terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "AlgExpr") -> "AlgExpr":
        out: Dict[Word, Coeff] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                c = c1 * c2
                out[w] = out[w] + c if w in out else c
        return AlgExpr(out)

    def transpose(self) -> "AlgExpr":
        """Formal transpose: every atom here is symmetric, so reverse words."""
        return AlgExpr({tuple(reversed(w)): c for w, c in self.terms.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "O"
        return " + ".join(
            (f"({c.num}/{c.den})·" if c != ONE else "") + format_word(w)
            for w, c in self.terms.items()
        )


def E(a: int) -> AlgExpr:
    return AlgExpr.atom(("E", a))


def A(b: int) -> AlgExpr:
    return AlgExpr.atom(("A", b))


def Jmat() -> AlgExpr:
    return AlgExpr.atom(("J",))


def Imat() -> AlgExpr:
    return AlgExpr({(): ONE})


def canonical_word(word: Word) -> Optional[Word]:
    """Drop A_0 atoms and collapse adjacent dual idempotents.

    Returns None when the word is identically zero (adjacent E_a*E_b* with
    a != b).  Both rewrites are exact identities, so evaluation commutes.
    """
    out: List[Atom] = []
    for atom in word:
        if atom[0] == "A" and atom[1] == 0:
            continue
        if out and atom[0] == "E" and out[-1][0] == "E":
            if out[-1][1] == atom[1]:
                continue
            return None
        out.append(atom)
    return tuple(out)


# ---------------------------------------------------------------------------
# evaluation context
# ---------------------------------------------------------------------------

_FACTOR_CACHE_MAX_N = 512  # cache E(op)E blocks only below this matrix size


class TerwilligerContext:
    """Everything needed to evaluate expressions for one (group, p, basepoint)."""

    def __init__(self, group: GroupSpec, modulus: PrimeModulus, basepoint: int = 0):
        self.group = group
        self.modulus = modulus
        self.basepoint = int(basepoint)
        self.ts: TripleSpace = build_triple_space(group)
        self.n = group.n
        self.N = self.ts.size
        if not 0 <= self.basepoint < self.N:
            raise ValueError(f"basepoint {basepoint} outside [0, {self.N})")
        self.cls = class_matrix(self.ts)
        self.descriptor: SchemeDescriptor = build_descriptor(self.ts, self.cls)
        p = modulus.p
        self._adj = []
        for i in range(5):
            arr = (self.cls == i).astype(np.int64)
            if p == 2:
                pass  # 0/1 entries are already reduced
            arr.setflags(write=False)
            self._adj.append(arr)
        self.support = []
        row = self.cls[self.basepoint]
        for a in range(5):
            idx = np.flatnonzero(row == a)
            idx.setflags(write=False)
            self.support.append(idx)
        self._identity = np.eye(self.N, dtype=np.int64)
        self._identity.setflags(write=False)
        self._factors: Dict[Tuple, np.ndarray] = {}

    # -- raw arrays ------------------------------------------------------
    @property
    def p(self) -> int:
        return self.modulus.p

    def adjacency_array(self, i: int) -> np.ndarray:
        return self._adj[i]

    def identity_array(self) -> np.ndarray:
        return self._identity

    def factor_array(self, a: int, op: Atom, c: int) -> np.ndarray:
        """Dense E_a (op) E_c, a plain submatrix mask (no multiplication)."""
        key = (a, op, c)
        cached = self._factors.get(key)
        if cached is not None:
            return cached
        idx_a, idx_c = self.support[a], self.support[c]
        out = np.zeros((self.N, self.N), dtype=np.int64)
        if op[0] == "A":
            block = self._adj[op[1]][np.ix_(idx_a, idx_c)]
            out[np.ix_(idx_a, idx_c)] = block
        else:  # J
            out[np.ix_(idx_a, idx_c)] = 1
        if self.N <= _FACTOR_CACHE_MAX_N:
            out.setflags(write=False)
            self._factors[key] = out
        return out

    # -- word / expression evaluation -------------------------------------
    def _apply_atom(self, M: Optional[np.ndarray], atom: Atom) -> np.ndarray:
        p, N = self.p, self.N
        kind = atom[0]
        if M is None:
            if kind == "E":
                out = np.zeros((N, N), dtype=np.int64)
                idx = self.support[atom[1]]
                out[idx, idx] = 1
                return out
            if kind == "A":
                return self._adj[atom[1]]
            return np.ones((N, N), dtype=np.int64) if p != 1 else np.zeros((N, N), np.int64)
        if kind == "E":
            idx = self.support[atom[1]]
            out = np.zeros((N, N), dtype=np.int64)
            out[:, idx] = M[:, idx]
            return out
        if kind == "A":
            return _matmul_arrays(M, self._adj[atom[1]], p)
        row_sums = np.mod(M.sum(axis=1), p)
        return np.ascontiguousarray(np.broadcast_to(row_sums[:, None], (N, N)))

    def evaluate_word(self, word: Word) -> np.ndarray:
        """Exact dense value of a word; zero-collapsing and A_0 handled."""
        cw = canonical_word(word)
        if cw is None:
            return np.zeros((self.N, self.N), dtype=np.int64)
        if not cw:
            return self._identity
        p = self.p
        M: Optional[np.ndarray] = None
        i, size = 0, len(cw)
        while i < size:
            atom = cw[i]
            if (
                atom[0] == "E"
                and i + 2 < size
                and cw[i + 1][0] in ("A", "J")
                and cw[i + 2][0] == "E"
            ):
                F = self.factor_array(atom[1], cw[i + 1], cw[i + 2][1])
                M = F if M is None else _matmul_arrays(M, F, p)
                # the closing E_c opens the next factor; when nothing follows
                # it has been fully consumed
                i += 2
                if i == size - 1:
                    i = size
            else:
                M = self._apply_atom(M, atom)
                i += 1
        assert M is not None
        return M

    def evaluate(self, expr: AlgExpr) -> GFMatrix:
        p = self.p
        acc = np.zeros((self.N, self.N), dtype=np.int64)
        for word, coeff in expr.terms.items():
            c = coeff.eval(self.n, p)
            if c == 0:
                continue
            acc = np.mod(acc + c * self.evaluate_word(word), p)
        return GFMatrix(acc, self.modulus, _reduced=True)

    def evaluate_array(self, expr: AlgExpr) -> np.ndarray:
        return self.evaluate(expr).array


def make_context(group: GroupSpec, p: int, basepoint: int = 0) -> TerwilligerContext:
    return TerwilligerContext(group, PrimeModulus(p), basepoint)


# ---------------------------------------------------------------------------
# module operations
# ---------------------------------------------------------------------------

def adjacency_matrix(ctx: TerwilligerContext, i: int) -> GFMatrix:
    if not 0 <= i <= 4:
        raise ValueError(f"relation index {i} outside [0, 4]")
    return GFMatrix(ctx.adjacency_array(i), ctx.modulus, _reduced=ctx.p > 1)


def dual_idempotent(ctx: TerwilligerContext, i: int) -> GFMatrix:
    if not 0 <= i <= 4:
        raise ValueError(f"relation index {i} outside [0, 4]")
    out = np.zeros((ctx.N, ctx.N), dtype=np.int64)
    idx = ctx.support[i]
    out[idx, idx] = 1
    return GFMatrix(out, ctx.modulus, _reduced=True)


def triple_product(ctx: TerwilligerContext, a: int, b: int, c: int) -> GFMatrix:
    """E_a* A_b E_c*; nonzero exactly when p_{cb}^a != 0 as an integer."""
    for v in (a, b, c):
        if not 0 <= v <= 4:
            raise ValueError(f"index {v} outside [0, 4]")
    return GFMatrix(ctx.factor_array(a, ("A", b), c), ctx.modulus, _reduced=True)


def nonzero_triples(n: int) -> List[Tuple[int, int, int]]:
    """(a, b, c) with p_{cb}^a != 0, in lexicographic order."""
    out = []
    for a in range(5):
        for b in range(5):
            for c in range(5):
                if intersection_closed(c, b, a, n) != 0:
                    out.append((a, b, c))
    return out


def t0_basis(ctx: TerwilligerContext) -> SubspaceBasis:
    """Canonical basis of T_0 = span of the triple products.

    The nonzero triple products are linearly independent (they live on
    disjoint supports), so the rank must equal the count of nonzero
    intersection numbers p_{cb}^a; any deficiency is reported.
    """
    expected = nonzero_triples(ctx.n)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=64)
    dependent = []
    for (a, b, c) in expected:
        grew = builder.insert(ctx.factor_array(a, ("A", b), c).reshape(-1))
        if not grew:
            dependent.append((a, b, c))
    if dependent:
        raise UnsupportedCaseError(
            f"triple products are not independent at n={ctx.n}, p={ctx.p}; "
            f"dependent witnesses: {dependent[:5]}"
        )
    return builder.finish()


@dataclass
class AlgebraHandle:
    """A multiplicatively closed span with its generator family."""

    ctx: TerwilligerContext
    span: Optional[SubspaceBasis]
    generators: List[GFMatrix]
    generator_words: List[Word]
    identity: GFMatrix
    passes: int = 0
    transpose_closed: Optional[bool] = None

    @property
    def dim(self) -> Optional[int]:
        return None if self.span is None else self.span.dim


_CLOSURE_LARGE_N = 1024  # N at and above which closure needs allow_large


class _MaskedGenerator:
    """A triple product kept as its support block for fast side products."""

    __slots__ = ("idx_a", "idx_c", "block")

    def __init__(self, ctx: TerwilligerContext, a: int, b: int, c: int):
        self.idx_a = ctx.support[a]
        self.idx_c = ctx.support[c]
        self.block = ctx.adjacency_array(b)[np.ix_(self.idx_a, self.idx_c)]

    def right_product(self, M: np.ndarray, p: int) -> np.ndarray:
        """M @ G, exploiting that G vanishes off its support block."""
        out = np.zeros_like(M)
        out[:, self.idx_c] = _matmul_arrays(M[:, self.idx_a], self.block, p)
        return out

    def left_product(self, M: np.ndarray, p: int) -> np.ndarray:
        out = np.zeros_like(M)
        out[self.idx_a, :] = _matmul_arrays(self.block, M[self.idx_c, :], p)
        return out


def closure_generate(ctx: TerwilligerContext, *, allow_large: bool = False) -> AlgebraHandle:
    """Generate T(x) as the closure of I and the nonzero triple products.

    Pass protocol: for each current basis row r (by row index) and each
    generator g (lex order), insert r*g then g*r; stop after a full pass with
    no rank growth.  The RREF keeps the final basis canonical regardless.
    """
    if ctx.N >= _CLOSURE_LARGE_N and not allow_large:
        raise UnsupportedCaseError(
            f"closure at N={ctx.N} is gated; pass allow_large=True to force it"
        )
    p = ctx.p
    triples = nonzero_triples(ctx.n)
    gens = [_MaskedGenerator(ctx, a, b, c) for (a, b, c) in triples]
    gen_words = [(("E", a), ("A", b), ("E", c)) for (a, b, c) in triples]
    gen_matrices = [triple_product(ctx, a, b, c) for (a, b, c) in triples]

    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=128)
    builder.insert(ctx.identity_array().reshape(-1))
    for g in gen_matrices:
        builder.insert(g.array.reshape(-1))

    passes = 0
    grew = True
    while grew:
        grew = False
        passes += 1
        ri = 0
        while ri < builder.dim:
            row_mat = builder.row(ri).reshape(ctx.N, ctx.N)
            for gen in gens:
                left = gen.right_product(row_mat, p)   # r * g
                if builder.insert(left.reshape(-1)):
                    grew = True
                    row_mat = builder.row(ri).reshape(ctx.N, ctx.N)
                right = gen.left_product(row_mat, p)   # g * r
                if builder.insert(right.reshape(-1)):
                    grew = True
                    row_mat = builder.row(ri).reshape(ctx.N, ctx.N)
            ri += 1

    span = builder.finish()
    transpose_closed = all(
        span.contains_vector(row.reshape(ctx.N, ctx.N).T.reshape(-1))
        for row in span.rows
    )
    return AlgebraHandle(
        ctx=ctx,
        span=span,
        generators=gen_matrices,
        generator_words=gen_words,
        identity=GFMatrix(ctx.identity_array(), ctx.modulus, _reduced=True),
        passes=passes,
        transpose_closed=transpose_closed,
    )


def corner_subalgebra(alg: AlgebraHandle, e: GFMatrix) -> AlgebraHandle:
    """The corner e*span(alg)*e with identity e.

    Requires e idempotent and inside the span; the corner of a closed span
    is closed, so no further passes are needed.
    """
    ctx = alg.ctx
    if alg.span is None:
        raise UnsupportedCaseError("corner of an ungenerated algebra")
    if (e @ e) != e:
        raise UnsupportedCaseError("corner element is not idempotent")
    if not alg.span.contains_vector(e.array.reshape(-1)):
        raise UnsupportedCaseError("corner element lies outside the algebra")
    p = ctx.p
    earr = e.array
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=32)
    corner_gens = []
    for row in alg.span.rows:
        m = row.reshape(ctx.N, ctx.N)
        eme = _matmul_arrays(_matmul_arrays(earr, m, p), earr, p)
        if builder.insert(eme.reshape(-1)):
            corner_gens.append(GFMatrix(eme, ctx.modulus, _reduced=True))
    return AlgebraHandle(
        ctx=ctx,
        span=builder.finish(),
        generators=corner_gens,
        generator_words=[],
        identity=e,
        passes=0,
        transpose_closed=None,
    )


# ---------------------------------------------------------------------------
# the named generating sets
# ---------------------------------------------------------------------------

def _tp(a: int, b: int, c: int) -> AlgExpr:
    return E(a) @ A(b) @ E(c)


def _jw(a: int, b: int) -> AlgExpr:
    return E(a) @ Jmat() @ E(b)


def _w5(a: int, b: int, c: int, d: int, e_: int) -> AlgExpr:
    """Five-atom word E_a A_b E_c A_d E_e."""
    return E(a) @ A(b) @ E(c) @ A(d) @ E(e_)


def set_B1(n: int) -> List[AlgExpr]:
    out = []
    for a in range(1, 5):
        for b in range(0, 4):
            for c in range(1, 5):
                if b == max(a, c):
                    continue
                if intersection_closed(c, b, a, n) != 0:
                    out.append(_tp(a, b, c))
    return out


def set_B2() -> List[AlgExpr]:
    return [_jw(a, b) for a in range(5) for b in range(5)]


def set_B3() -> List[AlgExpr]:
    return [_tp(4, a, 4) for a in range(0, 4)] + [_jw(4, 4)]


def set_B4(p: int, n: int) -> List[AlgExpr]:
    k = valencies_closed(n)
    return [
        _jw(a, b)
        for a in range(5)
        for b in range(5)
        if (k[a] * k[b]) % p == 0
    ]


def set_B5() -> List[AlgExpr]:
    return [
        _w5(1, 2, 3, 1, 4),
        _w5(2, 1, 3, 2, 4),
        _w5(3, 1, 2, 3, 4),
        _w5(4, 1, 3, 2, 1),
        _w5(4, 2, 3, 1, 2),
        _w5(4, 3, 2, 1, 3),
    ]


def set_B6() -> List[AlgExpr]:
    out = []
    for a in range(1, 4):
        for b in range(1, 4):
            for c in range(1, 4):
                if {a, b, c} == {1, 2, 3}:
                    out.append(_w5(4, a, b, c, 4))
    return out


def set_C1() -> List[AlgExpr]:
    w123 = _w5(4, 1, 2, 3, 4)
    others = [
        _w5(4, 1, 3, 2, 4),
        _w5(4, 2, 1, 3, 4),
        _w5(4, 2, 3, 1, 4),
        _w5(4, 3, 1, 2, 4),
        _w5(4, 3, 2, 1, 4),
    ]
    out = [
        _jw(4, 4),
        _tp(4, 1, 4) - _tp(4, 2, 4),
        _tp(4, 1, 4) - _tp(4, 3, 4),
        w123 - _tp(4, 0, 4) - _tp(4, 1, 4),
    ]
    out.extend(w123 - w for w in others)
    return out


def set_D1() -> List[AlgExpr]:
    half = [
        _tp(1, 2, 4) - _tp(1, 3, 4),
        _tp(2, 1, 4) - _tp(2, 3, 4),
        _tp(3, 1, 4) - _tp(3, 2, 4),
        _w5(1, 2, 3, 1, 4) - _tp(1, 3, 4),
        _w5(2, 1, 3, 2, 4) - _tp(2, 3, 4),
        _w5(3, 1, 2, 3, 4) - _tp(3, 2, 4),
    ]
    return half + [w.transpose() for w in half]


def set_H1(n: int) -> List[AlgExpr]:
    out = []
    for a in range(1, 4):
        for b in range(0, 4):
            for c in range(1, 4):
                if b == max(a, c):
                    continue
                if intersection_closed(c, b, a, n) != 0:
                    out.append(_tp(a, b, c))
    out.extend([
        _tp(1, 2, 4),
        _tp(2, 1, 4),
        _tp(3, 1, 4),
        -_tp(4, 1, 2),
        -_tp(4, 1, 3),
        -_tp(4, 2, 1),
        -_w5(4, 1, 2, 3, 4),
    ])
    return out


def set_K1(p: int, n: int) -> List[AlgExpr]:
    listed = [
        _w5(4, 1, 2, 3, 4) - _tp(4, 0, 4) - _tp(4, 1, 4),
        _tp(1, 2, 4) - _tp(1, 3, 4),
        _tp(2, 1, 4) - _tp(2, 3, 4),
        _tp(3, 1, 4) - _tp(3, 2, 4),
        _tp(4, 1, 2) - _tp(4, 3, 2),
        _tp(4, 1, 3) - _tp(4, 2, 3),
        _tp(4, 1, 4) - _tp(4, 2, 4),
        _tp(4, 1, 4) - _tp(4, 3, 4),
        _tp(4, 2, 1) - _tp(4, 3, 1),
    ]
    return listed + set_B4(p, n)


def set_C2(p: int) -> List[AlgExpr]:
    if p != 2:
        return [_jw(4, 4)]
    return [
        _jw(4, 4),
        _tp(4, 0, 4) + _tp(4, 1, 4) + _w5(4, 2, 3, 1, 4) + _w5(4, 3, 2, 1, 4),
        _tp(4, 0, 4) + _tp(4, 2, 4) + _w5(4, 1, 3, 2, 4) + _w5(4, 3, 1, 2, 4),
        _tp(4, 0, 4) + _tp(4, 3, 4) + _w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4),
        _w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4) + _w5(4, 3, 1, 2, 4) + _w5(4, 3, 2, 1, 4),
        _w5(4, 2, 3, 1, 4) + _w5(4, 3, 2, 1, 4) + _w5(4, 1, 2, 3, 4) + _w5(4, 1, 3, 2, 4),
    ]


def set_D2() -> List[AlgExpr]:
    half = [
        _tp(1, 2, 4) + _tp(1, 3, 4) + _w5(1, 2, 3, 1, 4),
        _tp(2, 1, 4) + _tp(2, 3, 4) + _w5(2, 1, 3, 2, 4),
        _tp(3, 1, 4) + _tp(3, 2, 4) + _w5(3, 1, 2, 3, 4),
    ]
    return half + [w.transpose() for w in half]


def set_C3() -> List[AlgExpr]:
    return [
        _jw(4, 4) - _tp(4, 0, 4) - _tp(4, 1, 4) - _w5(4, 2, 3, 1, 4) - _w5(4, 3, 2, 1, 4),
        _jw(4, 4) - _tp(4, 0, 4) - _tp(4, 2, 4) - _w5(4, 1, 3, 2, 4) - _w5(4, 3, 1, 2, 4),
        _jw(4, 4) - _tp(4, 0, 4) - _tp(4, 3, 4) - _w5(4, 1, 2, 3, 4) - _w5(4, 2, 1, 3, 4),
        _w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4) - _w5(4, 3, 1, 2, 4) - _w5(4, 3, 2, 1, 4),
        _w5(4, 2, 3, 1, 4) + _w5(4, 3, 2, 1, 4) - _w5(4, 1, 2, 3, 4) - _w5(4, 1, 3, 2, 4),
    ]


def set_D3() -> List[AlgExpr]:
    half = [
        _jw(1, 4) - _tp(1, 2, 4) - _tp(1, 3, 4) - _w5(1, 2, 3, 1, 4),
        _jw(2, 4) - _tp(2, 1, 4) - _tp(2, 3, 4) - _w5(2, 1, 3, 2, 4),
        _jw(3, 4) - _tp(3, 1, 4) - _tp(3, 2, 4) - _w5(3, 1, 2, 3, 4),
    ]
    return half + [w.transpose() for w in half]


def set_H2_1() -> List[AlgExpr]:
    return [_jw(a, b) for a in range(4) for b in range(4)]


def set_H2_2() -> List[AlgExpr]:
    return [
        _w5(2, 1, 3, 2, 4),
        _w5(3, 1, 2, 3, 4),
        _w5(4, 2, 1, 3, 4),
        _w5(4, 2, 3, 1, 2),
        _w5(4, 3, 1, 2, 4),
        _w5(4, 3, 2, 1, 3),
        _w5(4, 1, 2, 3, 4) + _w5(4, 2, 1, 3, 4),
        _w5(4, 1, 3, 2, 4) + _w5(4, 3, 1, 2, 4),
        _tp(1, 2, 4),
        _tp(1, 3, 4),
        _tp(2, 3, 4),
        _tp(3, 2, 4),
        _tp(4, 2, 1),
        _tp(4, 2, 3),
        _tp(4, 3, 1),
        _tp(4, 3, 2),
        _tp(1, 0, 1) + _jw(1, 1),
        _tp(1, 2, 3) + _jw(1, 3),
        _tp(1, 3, 2) + _jw(1, 2),
        _tp(2, 0, 2) + _jw(2, 2),
        _tp(2, 1, 3) + _jw(2, 3),
        _tp(2, 3, 1) + _jw(2, 1),
        _tp(3, 0, 3) + _jw(3, 3),
        _tp(3, 1, 2) + _jw(3, 2),
        _tp(3, 2, 1) + _jw(3, 1),
    ]


def set_K2(p: int, n: int) -> List[AlgExpr]:
    """(B4 ∪ C2 ∪ D2) minus E_4*JE_4*, kept in listing order."""
    jw44_word = next(iter(_jw(4, 4).terms))
    out = []
    for expr in set_B4(p, n) + set_C2(p) + set_D2():
        if set(expr.terms) == {jw44_word}:
            continue
        out.append(expr)
    return out


def set_H3_1() -> List[AlgExpr]:
    out: List[AlgExpr] = [_jw(0, a) for a in range(5)]
    out.extend(THIRD * _jw(a, b) for a in range(1, 4) for b in range(5))
    out.extend(SIXTH * _jw(4, a) for a in range(5))
    return out


def set_H3_2() -> List[AlgExpr]:
    out: List[AlgExpr] = []
    for a in range(1, 4):
        for b in range(1, 4):
            for c in range(1, 4):
                if {a, b, c} == {1, 2, 3}:
                    out.append(_tp(a, b, c) - THIRD * _jw(a, c))
    out.extend(_tp(a, 0, a) - THIRD * _jw(a, a) for a in range(1, 4))
    out.extend([
        THIRD * (2 * _tp(1, 3, 4) + _tp(1, 2, 4) - _jw(1, 4)),
        THIRD * (2 * _tp(2, 3, 4) + _tp(2, 1, 4) - _jw(2, 4)),
        THIRD * (2 * _tp(1, 3, 4) + _w5(1, 2, 3, 1, 4) - _jw(1, 4)),
        THIRD * (2 * _tp(2, 3, 4) + _w5(2, 1, 3, 2, 4) - _jw(2, 4)),
        THIRD * (2 * _w5(3, 1, 2, 3, 4) + _tp(3, 2, 4) - _jw(3, 4)),
        THIRD * (2 * _w5(3, 1, 2, 3, 4) + _tp(3, 1, 4) - _jw(3, 4)),
    ])
    out.extend([
        THIRD * _jw(4, 1) - _w5(4, 1, 3, 2, 1),
        THIRD * _jw(4, 2) - _w5(4, 2, 3, 1, 2),
        THIRD * _jw(4, 1) - _tp(4, 2, 1),
        THIRD * _jw(4, 2) - _tp(4, 1, 2),
        THIRD * _jw(4, 3) - _tp(4, 1, 3),
        THIRD * _jw(4, 3) - _tp(4, 2, 3),
        THIRD * (_jw(4, 4) - 2 * _w5(4, 1, 2, 3, 4) - _w5(4, 1, 3, 2, 4)),
        THIRD * (_w5(4, 1, 3, 2, 4) - _w5(4, 1, 2, 3, 4)),
        THIRD * (_jw(4, 4) - 2 * _w5(4, 2, 1, 3, 4) - _w5(4, 2, 3, 1, 4)),
        THIRD * (_w5(4, 2, 3, 1, 4) - _w5(4, 2, 1, 3, 4)),
    ])
    return out


def named_sets(p: int, n: int) -> Dict[str, List[AlgExpr]]:
    """The full registry of notation sets for a given (p, n)."""
    return {
        "B1": set_B1(n),
        "B2": set_B2(),
        "B3": set_B3(),
        "B4": set_B4(p, n),
        "B5": set_B5(),
        "B6": set_B6(),
        "C1": set_C1(),
        "D1": set_D1(),
        "H1": set_H1(n),
        "K1": set_K1(p, n),
        "C2": set_C2(p),
        "D2": set_D2(),
        "H2_1": set_H2_1(),
        "H2_2": set_H2_2(),
        "K2": set_K2(p, n),
        "C3": set_C3(),
        "D3": set_D3(),
        "H3_1": set_H3_1(),
        "H3_2": set_H3_2(),
    }


def paper_basis(ctx: TerwilligerContext) -> List[AlgExpr]:
    """The closed-form basis of T for the (p, n) case.

    n > 8, or n = 8 with p odd: B1 ∪ B2 ∪ B5 ∪ B6.
    n = 8, p = 2: the same union minus E_4*A_1E_2*A_3E_4*.
    n = 4: B1 ∪ B2 ∪ {E_4*A_1E_2*A_3E_4*}.
    """
    if not is_elementary_abelian_2(ctx.group):
        raise UnsupportedCaseError(
            "closed-form bases require an elementary abelian 2-group"
        )
    p, n = ctx.p, ctx.n
    excluded_word = next(iter(_w5(4, 1, 2, 3, 4).terms))
    if n > 8 or (p != 2 and n == 8):
        return set_B1(n) + set_B2() + set_B5() + set_B6()
    if p == 2 and n == 8:
        full = set_B1(n) + set_B2() + set_B5() + set_B6()
        return [
            expr for expr in full
            if set(expr.terms) != {excluded_word}
        ]
    if n == 4:
        return set_B1(n) + set_B2() + [_w5(4, 1, 2, 3, 4)]
    raise UnsupportedCaseError(f"no closed-form basis for n={n}")
