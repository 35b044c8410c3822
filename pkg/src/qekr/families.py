"""Families of subspaces: intersection predicates, canonical constructions,
uniform-layer bound oracles and the small counterexamples to relaxing
``n >= k + l + 2`` for cross-intersecting pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .gfspace import (
    DEFAULT_ENUM_CAP,
    Subspace,
    contains,
    enumerate_all,
    enumerate_grassmannian,
    intersection_dims,
)
from .measure import measure_star_product_form
from .qcombinat import DEFAULT_PRECISION, gaussian_binomial, real_context, to_real, parse_scalar


class InvariantViolation(AssertionError):
    """A proved inequality or structural invariant failed; indicates a bug."""


class OracleNotApplicable(ValueError):
    """The hypotheses of a bound oracle are not met by the given families."""


@dataclass(frozen=True)
class Family:
    n: int
    q: int
    members: tuple[Subspace, ...]

    @classmethod
    def of(cls, members: Iterable[Subspace], n: int | None = None, q: int | None = None) -> "Family":
        members = tuple(sorted(set(members)))
        if members:
            n = members[0].n if n is None else n
            q = members[0].q if q is None else q
        if n is None or q is None:
            raise ValueError("an empty family needs an explicit ambient (n, q)")
        for x in members:
            if x.n != n or x.q != q:
                raise ValueError("family members live in different ambient spaces")
        return cls(n, q, members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x) -> bool:
        return x in set(self.members)

    def layer(self, k: int) -> "Family":
        return Family(self.n, self.q, tuple(x for x in self.members if x.dim == k))

    def dims(self) -> tuple[int, ...]:
        return tuple(sorted({x.dim for x in self.members}))

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "members": [list(map(list, x.rows)) for x in self.members]}


def _check_ambient(U: Family, W: Family) -> None:
    if U.n != W.n or U.q != W.q:
        raise ValueError("families live in different ambient spaces")


def is_t_intersecting(F: Family, t: int) -> bool:
    """Every pair, including ``(x, x)``, meets in dimension at least ``t``."""
    if t < 1:
        raise ValueError("t must be positive")
    if not F.members:
        return True
    if any(x.dim < t for x in F.members):
        return False
    return bool((intersection_dims(list(F.members)) >= t).all())


def is_cross_t_intersecting(U: Family, W: Family, t: int) -> bool:
    _check_ambient(U, W)
    if not U.members or not W.members:
        return True
    return bool((intersection_dims(list(U.members), list(W.members)) >= t).all())


def star_family(n: int, q: int, t: int, upto: int | None = None, y: Subspace | None = None,
                cap: int | None = None) -> Family:
    """All subspaces containing ``y`` (default: span of ``e_1..e_t``), optionally with ``dim <= upto``."""
    if not 1 <= t <= n:
        raise ValueError("need 1 <= t <= n")
    y = Subspace.standard(t, n, q) if y is None else y
    if y.dim != t:
        raise ValueError("y must have dimension t")
    top = n if upto is None else min(n, upto)
    members = []
    for k in range(t, top + 1):
        members.extend(x for x in enumerate_grassmannian(n, k, q, cap) if contains(x, y))
    return Family.of(members, n, q)


def top_family(n: int, q: int, t: int, cap: int | None = None) -> Family:
    """All subspaces of dimension at least ``(n + t)/2``."""
    if t < 1:
        raise ValueError("t must be positive")
    lo = -(-(n + t) // 2)
    members = []
    for k in range(lo, n + 1):
        members.extend(enumerate_grassmannian(n, k, q, cap))
    return Family.of(members, n, q)


@dataclass(frozen=True)
class SubspacePair:
    U: Family
    W: Family
    product: int
    ekr_product: int
    cross_intersecting: bool

    @property
    def exceeds(self) -> bool:
        return self.product > self.ekr_product


def section52_subspace_pair(l: int, q: int, k: int = 1) -> SubspacePair:
    """Lines in a fixed plane ``z`` versus ``l``-spaces through ``z``, in ``F_q^(1+l)``."""
    if k != 1:
        raise ValueError("the construction is defined for k = 1")
    if l < 3:
        raise ValueError("need l >= 3")
    n = k + l
    z = Subspace.standard(2, n, q)
    U = Family.of([x for x in enumerate_grassmannian(n, 1, q) if contains(z, x)], n, q)
    W = Family.of([x for x in enumerate_grassmannian(n, l, q) if contains(x, z)], n, q)
    product = len(U) * len(W)
    formula = gaussian_binomial(2, 1, q) * gaussian_binomial(l - 1, 1, q)
    if product != formula:
        raise InvariantViolation(f"|U||W| = {product} but [2,1][l-1,1] = {formula}")
    ekr = gaussian_binomial(n - 1, k - 1, q) * gaussian_binomial(n - 1, l - 1, q)
    if ekr != gaussian_binomial(l, 1, q):
        raise InvariantViolation("[n-1,k-1][n-1,l-1] differs from [l,1]")
    return SubspacePair(U, W, product, ekr, is_cross_t_intersecting(U, W, 1))


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


@dataclass(frozen=True)
class SubsetCheck:
    k: int
    l: int
    n: int
    lhs: int
    rhs: int
    condition: bool
    size_U: int
    size_W: int
    product: int
    ekr_product: int

    @property
    def exceeds(self) -> bool:
        return self.product > self.ekr_product


def section52_subset_check(k: int, l: int, n: int) -> SubsetCheck:
    """Big-integer comparison for the subset pair meeting / containing ``{1, 2}``."""
    if n < k + l:
        raise ValueError("need n >= k + l")
    lhs = (2 * n - k - 1) * k * (l - 1)
    rhs = (n - 1) ** 2
    su = _comb(n, k) - _comb(n - 2, k)
    sw = _comb(n - 2, l - 2)
    return SubsetCheck(k, l, n, lhs, rhs, lhs > rhs, su, sw, su * sw,
                       _comb(n - 1, k - 1) * _comb(n - 1, l - 1))


def _single_layer(F: Family, k: int | None) -> int | None:
    dims = F.dims()
    if len(dims) > 1:
        raise OracleNotApplicable("family is not uniform")
    if dims:
        if k is not None and k != dims[0]:
            raise OracleNotApplicable("declared layer disagrees with the members")
        return dims[0]
    return k


@dataclass(frozen=True)
class OracleReport:
    kind: str
    lhs: int
    bound: int
    tight: bool


def uniform_bound_oracle(U: Family, W: Family | None = None, t: int = 1,
                         k: int | None = None, l: int | None = None) -> OracleReport:
    """Check a uniform family (or pair) against the known EKR-type bounds.

    Single family: ``|U| <= [n-t, k-t]`` when ``n >= 2k`` and ``U`` is
    t-intersecting.  Pair: ``|U||W| <= [n-t, k-t][n-t, l-t]`` when
    ``n >= k + l + t + 1`` and the pair is cross t-intersecting.  A violation
    raises :class:`InvariantViolation`; unmet hypotheses raise
    :class:`OracleNotApplicable`.
    """
    n, q = U.n, U.q
    k = _single_layer(U, k)
    if W is None:
        if not U.members:
            return OracleReport("uniform", 0, 0 if k is None else gaussian_binomial(n - t, k - t, q), False)
        if n < 2 * k:
            raise OracleNotApplicable(f"need n >= 2k, got n={n}, k={k}")
        if not is_t_intersecting(U, t):
            raise OracleNotApplicable("family is not t-intersecting")
        bound = gaussian_binomial(n - t, k - t, q)
        if len(U) > bound:
            raise InvariantViolation(f"|U| = {len(U)} > {bound}")
        return OracleReport("uniform", len(U), bound, len(U) == bound)
    _check_ambient(U, W)
    l = _single_layer(W, l)
    if not U.members or not W.members:
        bound = 0
        if k is not None and l is not None:
            bound = gaussian_binomial(n - t, k - t, q) * gaussian_binomial(n - t, l - t, q)
        return OracleReport("cross", 0, bound, False)
    if n < k + l + t + 1:
        raise OracleNotApplicable(f"need n >= k + l + t + 1, got n={n}, k={k}, l={l}, t={t}")
    if not is_cross_t_intersecting(U, W, t):
        raise OracleNotApplicable("pair is not cross t-intersecting")
    bound = gaussian_binomial(n - t, k - t, q) * gaussian_binomial(n - t, l - t, q)
    lhs = len(U) * len(W)
    if lhs > bound:
        raise InvariantViolation(f"|U||W| = {lhs} > {bound}")
    return OracleReport("cross", lhs, bound, lhs == bound)


def g_lower_bound(theta1, theta2, n: int, q: int, t: int, prec: int = DEFAULT_PRECISION):
    """``(mu_1(A_n^(t)) mu_2(A_n^(t)))^(1/n)`` for the two theta-scaled measures."""
    if t == 0:
        return real_context(prec).mpf(1)
    a = to_real(measure_star_product_form(theta1, n, q, t, prec), prec)
    b = to_real(measure_star_product_form(theta2, n, q, t, prec), prec)
    return real_context(prec).root(a * b, n)


def g_limit(theta1, theta2, q: int, t: int, prec: int = DEFAULT_PRECISION):
    ctx = real_context(prec)
    e = 2 - to_real(parse_scalar(theta1), prec) - to_real(parse_scalar(theta2), prec)
    return ctx.power(q, -e * t)


def all_point_stars(n: int, q: int, cap: int | None = None) -> list[Family]:
    """``A_n^(1)`` for every line ``y``, in canonical order of ``y``."""
    return [star_family(n, q, 1, y=y, cap=cap) for y in enumerate_grassmannian(n, 1, q, cap)]


def random_intersecting_family(n: int, q: int, rng: np.random.Generator, subspaces=None,
                               dims=None, maximal: bool = True) -> Family:
    """Greedy random intersecting family; ``dims`` is an intersection-dimension matrix."""
    if subspaces is None:
        subspaces = [x for x in enumerate_all(n, q) if x.dim >= 1]
    if dims is None:
        dims = intersection_dims(subspaces)
    order = rng.permutation(len(subspaces))
    chosen: list[int] = []
    for i in order:
        if subspaces[i].dim == 0:
            continue
        if all(dims[i, j] >= 1 for j in chosen):
            chosen.append(int(i))
    if not maximal and len(chosen) > 1:
        keep = rng.integers(1, len(chosen) + 1)
        chosen = [int(c) for c in rng.permutation(chosen)[:keep]]
    return Family.of([subspaces[i] for i in chosen], n, q)
