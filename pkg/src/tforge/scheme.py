"""The class-4 association scheme on the triple space of a finite group.

Points are the triples (x1, x2, x3) with x1*x2 = x3; two distinct points are
i-related (i in [1,3]) when they agree in exactly coordinate i, 4-related
when they agree nowhere, and 0-related when equal.  Intersection numbers
admit closed forms in n = |G| which this module both implements and
verifies against brute-force counting.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "SchemeError",
    "MalformedTableError",
    "EmptyRelationError",
    "NonConstantError",
    "GroupSpec",
    "load_cayley_table",
    "TripleSpace",
    "SchemeDescriptor",
    "build_triple_space",
    "classify_pair",
    "class_matrix",
    "is_elementary_abelian_2",
    "valencies_closed",
    "intersection_closed",
    "closed_tensor",
    "intersection_brute",
    "build_descriptor",
    "check_scheme_axioms",
    "valency",
]


class SchemeError(Exception):
    """Base class for scheme-construction and axiom-check failures."""


class MalformedTableError(SchemeError):
    pass


class EmptyRelationError(SchemeError):
    pass


class NonConstantError(SchemeError):
    """Intersection count disagrees between two witness pairs."""

    def __init__(self, g: int, h: int, i: int,
                 pair_a: Tuple[int, int], count_a: int,
                 pair_b: Tuple[int, int], count_b: int):
        self.g, self.h, self.i = g, h, i
        self.pair_a, self.count_a = pair_a, count_a
        self.pair_b, self.count_b = pair_b, count_b
        super().__init__(
            f"p_{{{g}{h}}}^{i} is not constant: pair {pair_a} gives {count_a}, "
            f"pair {pair_b} gives {count_b}"
        )


@dataclass(frozen=True)
class GroupSpec:
    """A finite group given by its Cayley table, identity at index 0.

    kind is "ea2" for elementary abelian 2-groups built from an exponent m
    (elements are bitvectors, the operation is XOR) or "table" for an
    explicit multiplication table.  Table input is relabeled on load so the
    identity sits at index 0.
    """

    n: int
    table: np.ndarray
    kind: str = "table"
    m: Optional[int] = None

    def __post_init__(self) -> None:
        tbl = np.ascontiguousarray(np.asarray(self.table, dtype=np.int64))
        tbl.setflags(write=False)
        object.__setattr__(self, "table", tbl)
        if self.n < 3:
            raise MalformedTableError(f"group order {self.n} < 3")
        if tbl.shape != (self.n, self.n):
            raise MalformedTableError(f"table shape {tbl.shape} != ({self.n}, {self.n})")

    @classmethod
    def elementary_abelian_2(cls, m: int) -> "GroupSpec":
        if m < 2:
            raise MalformedTableError(f"ea2 exponent {m} gives order {2**m} < 3")
        n = 2**m
        idx = np.arange(n, dtype=np.int64)
        return cls(n=n, table=np.bitwise_xor.outer(idx, idx), kind="ea2", m=m)

    @classmethod
    def from_table(cls, table: Sequence[Sequence[int]],
                   identity: Optional[int] = None) -> "GroupSpec":
        tbl = np.asarray(table, dtype=np.int64)
        n = tbl.shape[0]
        if tbl.ndim != 2 or tbl.shape[1] != n:
            raise MalformedTableError(f"table is not square: shape {tbl.shape}")
        if ((tbl < 0) | (tbl >= n)).any():
            raise MalformedTableError("table entries outside [0, n)")
        ident = np.arange(n, dtype=np.int64)
        for r in range(n):
            if not ((tbl[r] != ident).any() or (tbl[:, r] != ident).any()):
                found = r
                break
        else:
            raise MalformedTableError("no identity element in table")
        if identity is not None and identity != found:
            raise MalformedTableError(
                f"declared identity {identity} but table identity is {found}"
            )
        if found != 0:
            # Relabel by the transposition (0 <-> found); group structure is
            # preserved and the identity lands at index 0.
            perm = np.arange(n, dtype=np.int64)
            perm[0], perm[found] = found, 0
            tbl = perm[tbl[np.ix_(perm, perm)]]
        spec = cls(n=n, table=tbl, kind="table")
        spec.validate()
        return spec

    def validate(self, *, associativity: bool = True) -> None:
        """Check the group axioms; raises MalformedTableError on violation."""
        tbl, n = self.table, self.n
        ident = np.arange(n, dtype=np.int64)
        if (tbl[0] != ident).any() or (tbl[:, 0] != ident).any():
            raise MalformedTableError("index 0 does not act as the identity")
        for r in range(n):
            if np.bincount(tbl[r], minlength=n).max() != 1:
                raise MalformedTableError(f"row {r} is not a permutation")
            if np.bincount(tbl[:, r], minlength=n).max() != 1:
                raise MalformedTableError(f"column {r} is not a permutation")
        if associativity:
            # (a*b)*c vs a*(b*c), all n^3 triples at once
            left = tbl[tbl, :]
            right = tbl[:, tbl]
            if (left != right).any():
                a, b, c = np.argwhere(left != right)[0]
                raise MalformedTableError(
                    f"associativity fails at ({a},{b},{c})"
                )

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])


def load_cayley_table(source: Union[str, io.TextIOBase]) -> GroupSpec:
    """Parse the text format: line 1 `n`, then n rows of n 0-based indices."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_cayley_table(fh)
    first = source.readline().split()
    if len(first) != 1:
        raise MalformedTableError(f"expected a single order on line 1, got {first!r}")
    n = int(first[0])
    rows = []
    for r in range(n):
        parts = source.readline().split()
        if len(parts) != n:
            raise MalformedTableError(f"row {r}: expected {n} entries, got {len(parts)}")
        rows.append([int(tok) for tok in parts])
    return GroupSpec.from_table(rows)


@dataclass(frozen=True)
class TripleSpace:
    """X_G enumerated lexicographically by (x1, x2); point 0 is (e,e,e)."""

    group: GroupSpec
    n: int
    size: int
    x1: np.ndarray
    x2: np.ndarray
    x3: np.ndarray

    def triple(self, point: int) -> Tuple[int, int, int]:
        return int(self.x1[point]), int(self.x2[point]), int(self.x3[point])

    def index(self, x1: int, x2: int) -> int:
        return x1 * self.n + x2

    def triples(self) -> np.ndarray:
        return np.stack([self.x1, self.x2, self.x3], axis=1)


def build_triple_space(group: GroupSpec) -> TripleSpace:
    n = group.n
    x1 = np.repeat(np.arange(n, dtype=np.int64), n)
    x2 = np.tile(np.arange(n, dtype=np.int64), n)
    x3 = group.table[x1, x2]
    for arr in (x1, x2, x3):
        arr.setflags(write=False)
    return TripleSpace(group=group, n=n, size=n * n, x1=x1, x2=x2, x3=x3)


def classify_pair(ts: TripleSpace, y: int, z: int) -> int:
    """Relation index of the pair (y, z): 0, the shared coordinate, or 4."""
    if y == z:
        return 0
    if ts.x1[y] == ts.x1[z]:
        return 1
    if ts.x2[y] == ts.x2[z]:
        return 2
    if ts.x3[y] == ts.x3[z]:
        return 3
    return 4


def class_matrix(ts: TripleSpace) -> np.ndarray:
    """N x N int8 matrix of relation indices; validates well-definedness."""
    eq1 = ts.x1[:, None] == ts.x1[None, :]
    eq2 = ts.x2[:, None] == ts.x2[None, :]
    eq3 = ts.x3[:, None] == ts.x3[None, :]
    agree = eq1.astype(np.int8) + eq2.astype(np.int8) + eq3.astype(np.int8)
    off_diag = ~np.eye(ts.size, dtype=bool)
    if (agree[off_diag] > 1).any():
        raise SchemeError("two distinct triples agree in more than one coordinate")
    cls = np.full((ts.size, ts.size), 4, dtype=np.int8)
    cls[eq1] = 1
    cls[eq2] = 2
    cls[eq3] = 3
    np.fill_diagonal(cls, 0)
    cls.setflags(write=False)
    return cls


def is_elementary_abelian_2(group: GroupSpec) -> bool:
    """True iff every element squares to the identity and the group is abelian.

    Computes both the direct group-theoretic test and the triple-space
    criterion (any two coordinates of each point multiply, in either order,
    to the remaining one) and insists they agree.
    """
    tbl = group.table
    direct = bool((np.diag(tbl) == 0).all() and (tbl == tbl.T).all())
    ts = build_triple_space(group)
    a, b, c = ts.x1, ts.x2, ts.x3
    criterion = bool(
        (tbl[a, b] == c).all() and (tbl[b, a] == c).all()
        and (tbl[b, c] == a).all() and (tbl[c, b] == a).all()
        and (tbl[a, c] == b).all() and (tbl[c, a] == b).all()
    )
    if direct != criterion:
        raise SchemeError(
            "direct elementary-abelian-2 test disagrees with the triple-space criterion"
        )
    return direct


def valencies_closed(n: int) -> Tuple[int, int, int, int, int]:
    return (1, n - 1, n - 1, n - 1, (n - 1) * (n - 2))


def intersection_closed(g: int, h: int, i: int, n: int) -> int:
    """Closed-form intersection number p_{gh}^i of the class-4 scheme."""
    for v in (g, h, i):
        if not 0 <= v <= 4:
            raise ValueError(f"relation index {v} outside [0, 4]")
    if n < 3:
        raise ValueError(f"group order {n} < 3")
    if i == 0:
        if g != h:
            return 0
        return valencies_closed(n)[g]
    if i <= 3:
        if {g, h} == {0, i} or {g, h, i} == {1, 2, 3}:
            return 1
        if g == h == i:
            return n - 2
        if max(g, h) == 4 and min(g, h) in {1, 2, 3} - {i}:
            return n - 2
        if g == h == 4:
            return n * n - 5 * n + 6
        return 0
    # i == 4
    if {g, h} == {0, 4}:
        return 1
    if g != h and 1 <= g <= 3 and 1 <= h <= 3:
        return 1
    if max(g, h) == 4 and 1 <= min(g, h) <= 3:
        return n - 3
    if g == h == 4:
        return n * n - 6 * n + 10
    return 0


def closed_tensor(n: int) -> np.ndarray:
    tensor = np.zeros((5, 5, 5), dtype=np.int64)
    for g in range(5):
        for h in range(5):
            for i in range(5):
                tensor[g, h, i] = intersection_closed(g, h, i, n)
    tensor.setflags(write=False)
    return tensor


def _pair_count(cls: np.ndarray, y: int, z: int, g: int, h: int) -> int:
    return int(np.count_nonzero((cls[y] == g) & (cls[:, z] == h)))


def intersection_brute(ts: TripleSpace, g: int, h: int, i: int, *,
                       constancy: str = "none", sample_pairs: int = 20,
                       seed: int = 0,
                       cls: Optional[np.ndarray] = None) -> int:
    """Count |{u : (y,u) in R_g, (u,z) in R_h}| for a witness pair (y,z) in R_i.

    constancy:
      "none"    - count at the first witness pair only.
      "sampled" - additionally verify the count at `sample_pairs` fixed-seed
                  random pairs of R_i.
      "full"    - verify the count at every pair of R_i.

    Raises EmptyRelationError when R_i is empty and NonConstantError (with
    both witnesses) when two pairs disagree.
    """
    if constancy not in ("none", "sampled", "full"):
        raise ValueError(f"unknown constancy mode {constancy!r}")
    if cls is None:
        cls = class_matrix(ts)
    pairs = np.argwhere(cls == i)
    if pairs.shape[0] == 0:
        raise EmptyRelationError(f"relation R_{i} is empty")
    y0, z0 = (int(v) for v in pairs[0])
    count = _pair_count(cls, y0, z0, g, h)
    if constancy == "none":
        return count
    if constancy == "full":
        # One exact matmul gives every pairwise count at once.
        left = (cls == g).astype(np.int64)
        right = (cls == h).astype(np.int64)
        table = left @ right
        values = table[cls == i]
        bad = np.flatnonzero(values != count)
        if bad.size:
            yb, zb = (int(v) for v in pairs[bad[0]])
            raise NonConstantError(g, h, i, (y0, z0), count,
                                   (yb, zb), int(values[bad[0]]))
        return count
    rng = np.random.default_rng(seed)
    take = min(sample_pairs, pairs.shape[0])
    chosen = rng.choice(pairs.shape[0], size=take, replace=False)
    for idx in chosen:
        y, z = (int(v) for v in pairs[idx])
        c = _pair_count(cls, y, z, g, h)
        if c != count:
            raise NonConstantError(g, h, i, (y0, z0), count, (y, z), c)
    return count


@dataclass(frozen=True)
class SchemeDescriptor:
    """Numeric profile of the scheme: class count, valencies, intersection tensor."""

    n: int
    d: int
    valencies: Tuple[int, ...]
    tensor: np.ndarray
    converse: Tuple[int, ...] = (0, 1, 2, 3, 4)

    def __post_init__(self) -> None:
        tns = np.ascontiguousarray(np.asarray(self.tensor, dtype=np.int64))
        tns.setflags(write=False)
        object.__setattr__(self, "tensor", tns)
        if sum(self.valencies) != self.n * self.n:
            raise SchemeError("valencies do not sum to n^2")
        for gi in range(5):
            for ii in range(5):
                if self.tensor[gi, :, ii].sum() != self.valencies[gi]:
                    raise SchemeError(
                        f"row-sum failure: sum_h p_{{{gi}h}}^{ii} != k_{gi}"
                    )


def valency(sd: SchemeDescriptor, i: int) -> int:
    if not 0 <= i <= 4:
        raise ValueError(f"relation index {i} outside [0, 4]")
    return sd.valencies[i]


def build_descriptor(ts: TripleSpace,
                     cls: Optional[np.ndarray] = None) -> SchemeDescriptor:
    """Closed-form descriptor, with valencies verified against every point."""
    n = ts.n
    if cls is None:
        cls = class_matrix(ts)
    ks = valencies_closed(n)
    for i in range(5):
        row_counts = np.count_nonzero(cls == i, axis=1)
        if (row_counts != ks[i]).any():
            bad = int(np.flatnonzero(row_counts != ks[i])[0])
            raise SchemeError(
                f"|xR_{i}| = {int(row_counts[bad])} at point {bad}, expected {ks[i]}"
            )
    return SchemeDescriptor(n=n, d=4, valencies=ks, tensor=closed_tensor(n))


def check_scheme_axioms(ts: TripleSpace, mode: str = "sampled", *,
                        seed: int = 0, sample_pairs: int = 20) -> dict:
    """Run the full axiom battery; returns a report dict.

    mode "full" verifies intersection-number constancy over every pair of
    every relation (exhaustive); "sampled" uses >= sample_pairs fixed-seed
    pairs per relation.  Both modes check the partition/symmetry properties,
    valencies, and that brute counts match the closed forms for all 125
    (g, h, i).
    """
    if mode not in ("full", "sampled"):
        raise ValueError(f"unknown axiom-check mode {mode!r}")
    ts.group.validate()
    cls = class_matrix(ts)
    if (cls != cls.T).any():
        raise SchemeError("relation matrix is not symmetric")
    descriptor = build_descriptor(ts, cls)
    mismatches = []
    for g in range(5):
        for h in range(5):
            for i in range(5):
                brute = intersection_brute(ts, g, h, i, constancy=mode,
                                           sample_pairs=sample_pairs,
                                           seed=seed, cls=cls)
                closed = intersection_closed(g, h, i, ts.n)
                if brute != closed:
                    mismatches.append({"g": g, "h": h, "i": i,
                                       "brute": brute, "closed": closed})
    return {
        "n": ts.n,
        "mode": mode,
        "valencies": list(descriptor.valencies),
        "tensor_checked": 125,
        "mismatches": mismatches,
        "pass": not mismatches,
    }
