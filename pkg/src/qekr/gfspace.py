"""Finite fields of order <= 16 and the subspace lattice of F_q^n.

Field elements are the integers ``0..q-1``.  For ``q = p^m`` with ``m > 1``
an element encodes the polynomial whose base-``p`` digits are its
coefficients (least significant digit = constant term), reduced modulo the
Conway polynomial listed in :data:`IRREDUCIBLE`.

A :class:`Subspace` stores the RREF of a spanning set, so equality, hashing
and ordering are all plain tuple comparisons.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .qcombinat import SUPPORTED_Q, gaussian_binomial

DEFAULT_ENUM_CAP = int(os.environ.get("QEKR_ENUM_CAP", 10**6))

# Conway polynomials, coefficients from the constant term upwards.
IRREDUCIBLE: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1 over F_2
    8: (1, 1, 0, 1),  # x^3 + x + 1 over F_2
    9: (2, 2, 1),  # x^2 + 2x + 2 over F_3
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1 over F_2
}


class EnumerationCapExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured size cap."""


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            return (p, m) if r == 1 else None
    return None


@dataclass(frozen=True, eq=False)
class FiniteField:
    q: int
    p: int
    m: int
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray

    @property
    def tables(self):
        return self.add, self.mul, self.neg, self.inv

    def __repr__(self) -> str:
        return f"FiniteField(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))


def _poly_mul_mod(a: int, b: int, p: int, modulus: tuple[int, ...]) -> int:
    m = len(modulus) - 1
    da = [(a // p**i) % p for i in range(m)]
    db = [(b // p**i) % p for i in range(m)]
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic; reduce from the top degree down
    for d in range(2 * m - 2, m - 1, -1):
        c = prod[d]
        if c:
            for i in range(m + 1):
                prod[d - m + i] = (prod[d - m + i] - c * modulus[i]) % p
    return sum(prod[i] * p**i for i in range(m))


@lru_cache(maxsize=None)
def make_field(q: int) -> FiniteField:
    """Build the lookup tables for ``GF(q)``."""
    pm = _prime_power(q)
    if pm is None:
        raise ValueError(f"{q} is not a prime power")
    if q not in SUPPORTED_Q:
        raise ValueError(f"unsupported field order {q}; supported: {SUPPORTED_Q}")
    p, m = pm
    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            if m == 1:
                add[a, b] = (a + b) % p
                mul[a, b] = (a * b) % p
            else:
                add[a, b] = sum(((a // p**i + b // p**i) % p) * p**i for i in range(m))
                mul[a, b] = _poly_mul_mod(a, b, p, IRREDUCIBLE[q])
    neg = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)], dtype=np.uint8)
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    for arr in (add, mul, neg, inv):
        arr.setflags(write=False)
    return FiniteField(q, p, m, add, mul, neg, inv)


def rref(matrix, field: FiniteField | int) -> tuple[int, np.ndarray]:
    """Gauss-Jordan canonical form over ``field``.

    Returns ``(rank, R)`` where ``R`` holds only the ``rank`` nonzero rows.
    """
    if isinstance(field, int):
        field = make_field(field)
    add, mul, neg, inv = field.tables
    M = np.array(matrix, dtype=np.uint8, ndmin=2).copy()
    if M.size and M.max() >= field.q:
        raise ValueError("matrix entry is not a field element")
    rows, cols = M.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = mul[inv[M[r, c]], M[r]]
        for i in range(rows):
            f = M[i, c]
            if i != r and f:
                M[i] = add[M[i], neg[mul[f, M[r]]]]
        r += 1
    return r, M[:r].copy()


@dataclass(frozen=True, order=True)
class Subspace:
    """A subspace of ``F_q^n`` held as its RREF basis rows.

    Ordering is by ``(dim, rows)``, i.e. dimension first and then
    lexicographic on the canonical rows.
    """

    dim: int
    rows: tuple[tuple[int, ...], ...]
    n: int
    q: int

    @classmethod
    def span(cls, vectors, n: int, q: int) -> "Subspace":
        vectors = np.array(vectors, dtype=np.uint8).reshape(-1, n)
        r, R = rref(vectors, q)
        return cls(r, tuple(tuple(int(v) for v in row) for row in R), n, q)

    @classmethod
    def zero(cls, n: int, q: int) -> "Subspace":
        return cls(0, (), n, q)

    @classmethod
    def full(cls, n: int, q: int) -> "Subspace":
        return cls(n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n, q)

    @classmethod
    def standard(cls, t: int, n: int, q: int) -> "Subspace":
        """Span of the first ``t`` standard basis vectors."""
        return cls(t, tuple(tuple(int(i == j) for j in range(n)) for i in range(t)), n, q)

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8).reshape(self.dim, self.n)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, v in enumerate(row) if v) for row in self.rows)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj) -> "Subspace":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.span(obj["rows"] or np.zeros((0, obj["n"])), obj["n"], obj["q"])

    def to_hex(self) -> str:
        """Compact encoding: one hex digit per entry, rows joined by ``.``."""
        if not self.rows:
            return "-"
        return ".".join("".join(f"{v:x}" for v in row) for row in self.rows)

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, q={self.q}, {self.to_hex()})"


def _check_same(x: Subspace, y: Subspace) -> None:
    if x.n != y.n or x.q != y.q:
        raise ValueError("subspaces live in different ambient spaces")


def intersection_dim(x: Subspace, y: Subspace) -> int:
    _check_same(x, y)
    if x.dim == 0 or y.dim == 0:
        return 0
    r, _ = rref(np.vstack([x.matrix, y.matrix]), x.q)
    return x.dim + y.dim - r


def contains(x: Subspace, y: Subspace) -> bool:
    """True iff ``y`` is a subspace of ``x``."""
    return intersection_dim(x, y) == y.dim


def sum_space(x: Subspace, y: Subspace) -> Subspace:
    _check_same(x, y)
    return Subspace.span(np.vstack([x.matrix, y.matrix]), x.n, x.q)


def _rref_rows(n: int, k: int, q: int, pivots: tuple[int, ...], free: Sequence[int]):
    rows = [[0] * n for _ in range(k)]
    it = iter(free)
    for i, p in enumerate(pivots):
        rows[i][p] = 1
        for j in range(p + 1, n):
            if j not in pivots:
                rows[i][j] = next(it)
    return tuple(tuple(r) for r in rows)


def _free_count(n: int, pivots: tuple[int, ...]) -> int:
    return sum(n - p - 1 - sum(1 for pp in pivots if pp > p) for p in pivots)


class Grassmannian:
    """Lazy stream of all ``k``-dim subspaces of ``F_q^n``.

    Order: pivot-column patterns lexicographically, then the free entries
    lexicographically (row by row, left to right).
    """

    def __init__(self, n: int, k: int, q: int, cap: int | None = None):
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        make_field(q)
        self.n, self.k, self.q = n, k, q
        self.size = gaussian_binomial(n, k, q)
        cap = DEFAULT_ENUM_CAP if cap is None else cap
        if self.size > cap:
            raise EnumerationCapExceeded(f"[{n} choose {k}]_{q} = {self.size} exceeds cap {cap}")

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[Subspace]:
        n, k, q = self.n, self.k, self.q
        for pivots in itertools.combinations(range(n), k):
            for free in itertools.product(range(q), repeat=_free_count(n, pivots)):
                yield Subspace(k, _rref_rows(n, k, q, pivots, free), n, q)


def enumerate_grassmannian(n: int, k: int, q: int, cap: int | None = None) -> Grassmannian:
    return Grassmannian(n, k, q, cap)


def count_all(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def enumerate_all(n: int, q: int, cap: int | None = None) -> Iterator[Subspace]:
    """All subspaces of ``F_q^n``, dimension ascending."""
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    total = count_all(n, q)
    if total > cap:
        raise EnumerationCapExceeded(f"|Omega_{n}| = {total} over F_{q} exceeds cap {cap}")
    for k in range(n + 1):
        yield from Grassmannian(n, k, q, cap)


def pack(subspaces: Sequence[Subspace], n: int) -> tuple[np.ndarray, np.ndarray]:
    """Zero-padded ``(N, n, n)`` basis stack and ``dims`` vector for the kernels."""
    N = len(subspaces)
    B = np.zeros((N, n, n), dtype=np.uint8)
    dims = np.zeros(N, dtype=np.int64)
    for i, s in enumerate(subspaces):
        if s.dim:
            B[i, : s.dim] = s.matrix
        dims[i] = s.dim
    return B, dims


def intersection_dims(xs: Sequence[Subspace], ys: Sequence[Subspace] | None = None,
                      backend: str | None = None) -> np.ndarray:
    """Matrix of ``dim(x ∩ y)`` for all ``x in xs``, ``y in ys`` (``ys`` defaults to ``xs``)."""
    if ys is None:
        ys = xs
    if not xs or not ys:
        return np.zeros((len(xs), len(ys)), dtype=np.int64)
    n, q = xs[0].n, xs[0].q
    for s in itertools.chain(xs, ys):
        if s.n != n or s.q != q:
            raise ValueError("subspaces live in different ambient spaces")
    A, da = pack(xs, n)
    B, db = (A, da) if ys is xs else pack(ys, n)
    return kernels.cross_intersection_dims(A, da, B, db, make_field(q).tables, backend)


def subspaces_containing(y: Subspace, candidates: Iterable[Subspace]) -> list[Subspace]:
    return [x for x in candidates if contains(x, y)]
