"""Exact dense linear algebra over prime fields GF(p).

Matrices are stored as immutable int64 numpy arrays of residues in [0, p).
Products are exact: a float64 BLAS path is used whenever every inner product
is guaranteed below 2**53, otherwise the contraction is chunked so int64
accumulation cannot overflow.  Subspaces of the flattened matrix space are
kept in reduced row-echelon form, which makes bases canonical (order of
insertion never changes the stored rows) and membership tests exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

__all__ = [
    "MAX_MODULUS",
    "is_prime",
    "PrimeModulus",
    "Scalar",
    "GFMatrix",
    "mat_mul",
    "transpose",
    "SubspaceBasis",
    "rref_extend",
    "contains",
    "span_of",
    "nilpotency_index",
    "dump_matrix",
    "load_matrix",
]

MAX_MODULUS = 2**31 - 1

_FLOAT_EXACT = 2**53
_INT64_MAX = 2**63 - 1

# Witness set certifying deterministic Miller-Rabin for all n < 3.3 * 10^24,
# comfortably past the 2^31-1 cap enforced by PrimeModulus.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with fixed witness set)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A validated prime p with 2 <= p <= 2**31 - 1."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int):
            raise TypeError(f"modulus must be an integer, got {type(self.p).__name__}")
        if not 2 <= self.p <= MAX_MODULUS:
            raise ValueError(f"modulus {self.p} outside [2, 2^31-1]")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def reduce(self, value: int) -> int:
        return value % self.p

    def inv(self, value: int) -> int:
        """Multiplicative inverse of a nonzero residue."""
        v = value % self.p
        if v == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(v, -1, self.p)

    def __repr__(self) -> str:
        return f"PrimeModulus({self.p})"


@dataclass(frozen=True)
class Scalar:
    """A residue in GF(p); the image of an integer under the reduction map."""

    value: int
    modulus: PrimeModulus

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.value % self.modulus.p)

    def _coerce(self, other: Union["Scalar", int]) -> int:
        if isinstance(other, Scalar):
            if other.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return other.value
        return int(other)

    def __add__(self, other):
        return Scalar(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return Scalar(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return Scalar(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.modulus)

    def inverse(self) -> "Scalar":
        return Scalar(self.modulus.inv(self.value), self.modulus)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value


def _matmul_arrays(a: np.ndarray, b: np.ndarray, p: int, method: str = "auto") -> np.ndarray:
    """Exact (a @ b) % p for int64 residue arrays.

    method:
      "auto"  - float64 BLAS when provably exact, else chunked int64.
      "float" - force the BLAS path (caller guarantees exactness).
      "int64" - force the chunked integer path.
    """
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    head = (p - 1) * (p - 1)
    if method == "float" or (method == "auto" and head * inner < _FLOAT_EXACT):
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.mod(np.rint(prod).astype(np.int64), p)
    # Chunk the contraction axis so each partial int64 sum stays in range.
    step = max(1, (_INT64_MAX - (p - 1)) // head)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for start in range(0, inner, step):
        stop = min(start + step, inner)
        acc = np.mod(acc + a[:, start:stop] @ b[start:stop, :], p)
    return acc


class GFMatrix:
    """Immutable dense matrix over GF(p)."""

    __slots__ = ("array", "modulus")

    def __init__(self, array, modulus: PrimeModulus, *, _reduced: bool = False):
        arr = np.asarray(array, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
        if not _reduced:
            arr = np.mod(arr, modulus.p)
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("GFMatrix is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, modulus: PrimeModulus) -> "GFMatrix":
        return cls(np.zeros((n_rows, n_cols), dtype=np.int64), modulus, _reduced=True)

    @classmethod
    def identity(cls, n: int, modulus: PrimeModulus) -> "GFMatrix":
        return cls(np.eye(n, dtype=np.int64), modulus, _reduced=True)

    @classmethod
    def ones(cls, n_rows: int, n_cols: int, modulus: PrimeModulus) -> "GFMatrix":
        arr = np.ones((n_rows, n_cols), dtype=np.int64)
        if modulus.p == 1:  # unreachable (p >= 2) but keeps the reduction honest
            arr[:] = 0
        return cls(arr, modulus, _reduced=True)

    # -- shape -------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return self.array.shape

    @property
    def n_rows(self) -> int:
        return self.array.shape[0]

    @property
    def n_cols(self) -> int:
        return self.array.shape[1]

    # -- arithmetic ---------------------------------------------------------
    def _check_peer(self, other: "GFMatrix") -> None:
        if self.modulus != other.modulus:
            raise ValueError("modulus mismatch")

    def __add__(self, other: "GFMatrix") -> "GFMatrix":
        self._check_peer(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return GFMatrix(
            np.mod(self.array + other.array, self.modulus.p), self.modulus, _reduced=True
        )

    def __sub__(self, other: "GFMatrix") -> "GFMatrix":
        self._check_peer(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return GFMatrix(
            np.mod(self.array - other.array, self.modulus.p), self.modulus, _reduced=True
        )

    def __neg__(self) -> "GFMatrix":
        return GFMatrix(np.mod(-self.array, self.modulus.p), self.modulus, _reduced=True)

    def __mul__(self, scalar) -> "GFMatrix":
        c = int(scalar) % self.modulus.p
        return GFMatrix(np.mod(self.array * c, self.modulus.p), self.modulus, _reduced=True)

    __rmul__ = __mul__

    def __matmul__(self, other: "GFMatrix") -> "GFMatrix":
        return mat_mul(self, other)

    @property
    def T(self) -> "GFMatrix":
        return transpose(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GFMatrix):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.shape == other.shape
            and bool(np.array_equal(self.array, other.array))
        )

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.array.any()

    def flatten(self) -> np.ndarray:
        """Row-major flattened copy (the SubspaceBasis ambient coordinates)."""
        return self.array.reshape(-1).copy()

    def trace(self) -> int:
        return int(np.trace(self.array) % self.modulus.p)

    def __repr__(self) -> str:
        return f"GFMatrix(shape={self.shape}, p={self.modulus.p})"


def mat_mul(a: GFMatrix, b: GFMatrix) -> GFMatrix:
    """Exact matrix product over GF(p)."""
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus.p} vs {b.modulus.p}")
    if a.n_cols != b.n_rows:
        raise ValueError(f"inner dimension mismatch: {a.shape} @ {b.shape}")
    return GFMatrix(
        _matmul_arrays(a.array, b.array, a.modulus.p), a.modulus, _reduced=True
    )


def transpose(a: GFMatrix) -> GFMatrix:
    return GFMatrix(a.array.T, a.modulus, _reduced=True)


def _as_vector(candidate, ambient_dim: int) -> np.ndarray:
    if isinstance(candidate, GFMatrix):
        vec = candidate.array.reshape(-1)
    else:
        vec = np.asarray(candidate, dtype=np.int64).reshape(-1)
    if vec.shape[0] != ambient_dim:
        raise ValueError(f"ambient mismatch: vector of size {vec.shape[0]}, ambient {ambient_dim}")
    return vec


class SubspaceBasis:
    """A subspace of GF(p)^ambient in canonical reduced row-echelon form.

    rows are nonzero, pivots are 1 and strictly increasing, and each pivot
    column vanishes in every other row.  RREF is unique per subspace, so two
    bases are equal iff their rows are identical arrays.
    """

    __slots__ = ("rows", "pivot_cols", "ambient_dim", "modulus")

    def __init__(self, rows: np.ndarray, pivot_cols: Tuple[int, ...],
                 ambient_dim: int, modulus: PrimeModulus):
        arr = np.ascontiguousarray(np.asarray(rows, dtype=np.int64))
        arr.setflags(write=False)
        object.__setattr__(self, "rows", arr)
        object.__setattr__(self, "pivot_cols", tuple(int(c) for c in pivot_cols))
        object.__setattr__(self, "ambient_dim", int(ambient_dim))
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("SubspaceBasis is immutable")

    @classmethod
    def empty(cls, ambient_dim: int, modulus: PrimeModulus) -> "SubspaceBasis":
        return cls(np.zeros((0, ambient_dim), dtype=np.int64), (), ambient_dim, modulus)

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Residue of vec modulo the row space (exact)."""
        p = self.modulus.p
        v = np.mod(np.asarray(vec, dtype=np.int64), p)
        if self.dim == 0:
            return v
        coeffs = v[list(self.pivot_cols)]
        if not coeffs.any():
            return v
        prod = _matmul_arrays(coeffs[None, :], self.rows, p)
        return np.mod(v - prod[0], p)

    def contains_vector(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.ambient_dim == other.ambient_dim
            and self.pivot_cols == other.pivot_cols
            and bool(np.array_equal(self.rows, other.rows))
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim}, p={self.modulus.p})"


def rref_extend(basis: SubspaceBasis, candidate) -> Tuple[SubspaceBasis, bool]:
    """Extend a canonical basis by one vector (GFMatrix or flat array).

    Returns (new_basis, was_new).  The output basis is the canonical RREF of
    span(basis ∪ {candidate}); repeating the call with the same candidate is
    a no-op, and the final rows never depend on insertion order.
    """
    p = basis.modulus.p
    vec = _as_vector(candidate, basis.ambient_dim)
    if isinstance(candidate, GFMatrix) and candidate.modulus != basis.modulus:
        raise ValueError("modulus mismatch")
    residue = basis.reduce(vec)
    nz = np.flatnonzero(residue)
    if nz.size == 0:
        return basis, False
    col = int(nz[0])
    inv = pow(int(residue[col]), -1, p)
    new_row = np.mod(residue * inv, p)
    rows = basis.rows
    if rows.shape[0]:
        weights = rows[:, col]
        if weights.any():
            rows = np.mod(rows - weights[:, None] * new_row[None, :], p)
    pos = int(np.searchsorted(np.asarray(basis.pivot_cols, dtype=np.int64), col))
    new_rows = np.insert(rows, pos, new_row, axis=0)
    new_pivots = basis.pivot_cols[:pos] + (col,) + basis.pivot_cols[pos:]
    return SubspaceBasis(new_rows, new_pivots, basis.ambient_dim, basis.modulus), True


def contains(basis: SubspaceBasis, m) -> bool:
    """Exact membership of a matrix (or flat vector) in the row space."""
    vec = _as_vector(m, basis.ambient_dim)
    if isinstance(m, GFMatrix) and m.modulus != basis.modulus:
        raise ValueError("modulus mismatch")
    return basis.contains_vector(vec)


def span_of(items: Iterable, ambient_dim: int, modulus: PrimeModulus) -> SubspaceBasis:
    """Canonical basis of the span of an iterable of matrices/vectors."""
    basis = SubspaceBasis.empty(ambient_dim, modulus)
    for item in items:
        basis, _ = rref_extend(basis, item)
    return basis


class RrefBuilder:
    """Mutable RREF accumulator for closure loops.

    Semantically identical to folding rref_extend, but keeps rows in a
    preallocated buffer in *insertion* order (pivot columns unsorted) so a
    new row never shifts existing ones.  finish() returns the canonical
    SubspaceBasis with rows sorted by pivot column.
    """

    def __init__(self, ambient_dim: int, modulus: PrimeModulus, capacity: int = 64):
        self.ambient_dim = ambient_dim
        self.modulus = modulus
        self._rows = np.zeros((max(capacity, 4), ambient_dim), dtype=np.int64)
        self._pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def row(self, i: int) -> np.ndarray:
        return self._rows[i]

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        p = self.modulus.p
        v = np.mod(np.asarray(vec, dtype=np.int64), p)
        k = self.dim
        if k == 0:
            return v
        coeffs = v[self._pivots]
        if not coeffs.any():
            return v
        prod = _matmul_arrays(coeffs[None, :], self._rows[:k], p)
        return np.mod(v - prod[0], p)

    def contains_vector(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def insert(self, vec: np.ndarray) -> bool:
        """Insert one vector; returns True iff the rank grew."""
        p = self.modulus.p
        residue = self.reduce(vec)
        nz = np.flatnonzero(residue)
        if nz.size == 0:
            return False
        col = int(nz[0])
        inv = pow(int(residue[col]), -1, p)
        new_row = np.mod(residue * inv, p)
        k = self.dim
        if k:
            weights = self._rows[:k, col]
            if weights.any():
                self._rows[:k] = np.mod(
                    self._rows[:k] - weights[:, None] * new_row[None, :], p
                )
        if k == self._rows.shape[0]:
            grown = np.zeros((2 * k, self.ambient_dim), dtype=np.int64)
            grown[:k] = self._rows[:k]
            self._rows = grown
        self._rows[k] = new_row
        self._pivots.append(col)
        return True

    def finish(self) -> SubspaceBasis:
        k = self.dim
        order = np.argsort(np.asarray(self._pivots, dtype=np.int64), kind="stable")
        rows = self._rows[:k][order]
        pivots = tuple(self._pivots[i] for i in order)
        return SubspaceBasis(rows, pivots, self.ambient_dim, self.modulus)


def nilpotency_index(m: GFMatrix, bound: int) -> Optional[int]:
    """Least k <= bound with m^k = O, or None.

    Repeated squaring brackets the first vanishing power of two, then one
    linear pass from the last nonzero bracket pins the exact index.
    """
    if m.n_rows != m.n_cols:
        raise ValueError("nilpotency_index requires a square matrix")
    if bound < 1:
        return None
    if m.is_zero():
        return 1
    exponent, power = 1, m
    trail: list[Tuple[int, GFMatrix]] = [(1, m)]
    while exponent < bound and not power.is_zero():
        power = power @ power
        exponent *= 2
        trail.append((exponent, power))
    if not power.is_zero():
        # m^exponent != O with exponent >= bound forces m^bound != O.
        return None
    lo_exp, lo_pow = trail[-2]
    k, q = lo_exp, lo_pow
    while not q.is_zero():
        q = q @ m
        k += 1
    return k if k <= bound else None


def dump_matrix(m: GFMatrix, stream: IO[str]) -> None:
    """Text dump: header `rows cols p`, then one line of residues per row."""
    rows, cols = m.shape
    stream.write(f"{rows} {cols} {m.modulus.p}\n")
    for row in m.array:
        stream.write(" ".join(map(str, row.tolist())))
        stream.write("\n")


def load_matrix(stream: IO[str]) -> GFMatrix:
    header = stream.readline().split()
    if len(header) != 3:
        raise ValueError(f"malformed matrix header: {header!r}")
    n_rows, n_cols, p = (int(tok) for tok in header)
    modulus = PrimeModulus(p)
    data = np.zeros((n_rows, n_cols), dtype=np.int64)
    for r in range(n_rows):
        parts = stream.readline().split()
        if len(parts) != n_cols:
            raise ValueError(f"row {r}: expected {n_cols} entries, got {len(parts)}")
        data[r] = [int(tok) for tok in parts]
    if ((data < 0) | (data >= p)).any():
        raise ValueError("matrix entries outside [0, p)")
    return GFMatrix(data, modulus, _reduced=True)
