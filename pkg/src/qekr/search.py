"""Exact maximum-measure t-intersecting families by branch and bound.

The search runs on the conflict graph whose vertices are the subspaces of
dimension at least ``t`` and whose edges join pairs meeting in dimension
below ``t``; a t-intersecting family is an independent set.  Weights are
the layer weights ``phi(dim x)`` scaled to a common integer denominator, so
all comparisons are exact.

Vertices are ordered by weight (descending) and then canonically.  The root
is split into a fixed list of subproblems ("include v_i, exclude v_0..v_{i-1}")
that do not depend on the thread count; each subproblem keeps its own
incumbent, which makes node counts and reported optima reproducible.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .families import Family, InvariantViolation, is_t_intersecting
from .gfspace import count_all, enumerate_all, intersection_dims
from .measure import MeasureContext
from .qcombinat import gaussian_binomial, to_fraction

ROOT_SPLIT = 16


class SearchCapExceeded(RuntimeError):
    pass


class _Timeout(Exception):
    pass


@dataclass(frozen=True)
class SearchConfig:
    max_vertices: int = 400
    max_optima_reported: int = 64
    threads: int = 1
    time_budget: float | None = None

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_optima_reported <= 0 or self.threads <= 0:
            raise ValueError("search limits must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time budget must be positive")


@dataclass
class SearchResult:
    optimum: Fraction
    families: list[Family]
    optima_count: int
    explored: int
    complete: bool
    vertices: int
    mode: str = "exact"
    extra: dict = field(default_factory=dict)


class _Graph:
    def __init__(self, weights, adj):
        self.w = weights
        self.adj = adj
        self.n = len(weights)

    def cover_bound(self, P: int) -> int:
        """Greedy weighted clique cover of ``P``: sum of each clique's heaviest weight."""
        w, adj = self.w, self.adj
        cliques: list[int] = []
        total = 0
        while P:
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            nv = adj[v]
            for idx, c in enumerate(cliques):
                if c & nv == c:
                    cliques[idx] = c | low
                    break
            else:
                cliques.append(low)
                total += w[v]
        return total


class _Worker:
    def __init__(self, g: _Graph, floor: int, cap: int, deadline: float | None):
        self.g = g
        self.best = floor
        self.optima: list[tuple[int, ...]] = []
        self.count = 0
        self.cap = cap
        self.nodes = 0
        self.deadline = deadline

    def record(self, weight: int, chosen: tuple[int, ...]) -> None:
        if weight > self.best:
            self.best = weight
            self.optima = [chosen]
            self.count = 1
        elif weight == self.best:
            self.count += 1
            if len(self.optima) < self.cap:
                self.optima.append(chosen)

    def expand(self, P: int, weight: int, chosen: tuple[int, ...]) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 1 and time.monotonic() > self.deadline:
            raise _Timeout
        g = self.g
        while True:
            if P == 0:
                self.record(weight, chosen)
                return
            if weight + g.cover_bound(P) < self.best:
                return
            low = P & -P
            v = low.bit_length() - 1
            self.expand(P & ~g.adj[v] & ~low, weight + g.w[v], chosen + (v,))
            # exclude branch handled iteratively
            P ^= low
            self.nodes += 1


def _greedy_floor(g: _Graph) -> int:
    P = (1 << g.n) - 1
    total = 0
    while P:
        low = P & -P
        v = low.bit_length() - 1
        total += g.w[v]
        P &= ~g.adj[v] & ~low
    return total


def _subproblems(n: int) -> list[tuple[int, int]]:
    """(include vertex, excluded prefix mask) pairs covering the search tree."""
    split = min(ROOT_SPLIT, n)
    subs = [(i, (1 << i) - 1) for i in range(split)]
    if n > split:
        subs.append((-1, (1 << split) - 1))
    return subs


def max_measure_t_intersecting(ctx: MeasureContext, t: int, cfg: SearchConfig | None = None) -> SearchResult:
    """Maximum ``mu_sigma`` over t-intersecting families of subspaces of ``F_q^n``."""
    cfg = cfg or SearchConfig()
    if t < 1:
        raise ValueError("t must be positive")
    n, q = ctx.n, ctx.q
    nv = count_all(n, q) - sum(gaussian_binomial(n, k, q) for k in range(min(t, n + 1)))
    if nv > cfg.max_vertices:
        raise SearchCapExceeded(f"{nv} vertices exceed max_vertices={cfg.max_vertices}")
    phis = [to_fraction(p) for p in ctx.phi]
    scale = math.lcm(*(p.denominator for p in phis))
    layer_w = [int(p * scale) for p in phis]

    verts = [x for x in enumerate_all(n, q) if x.dim >= t]
    verts.sort(key=lambda x: (-layer_w[x.dim], x))
    D = intersection_dims(verts) if verts else None
    adj = []
    for i in range(len(verts)):
        row = D[i] < t
        row[i] = False
        adj.append(sum(1 << int(j) for j in row.nonzero()[0]))
    g = _Graph([layer_w[x.dim] for x in verts], adj)

    if not verts:
        empty = Family.of([], n, q)
        return SearchResult(Fraction(0), [empty], 1, 1, True, 0, ctx.mode)

    floor = _greedy_floor(g)
    deadline = None if cfg.time_budget is None else time.monotonic() + cfg.time_budget
    full = (1 << g.n) - 1

    def run(sub):
        v, excluded = sub
        wk = _Worker(g, floor, cfg.max_optima_reported, deadline)
        P = full & ~excluded
        try:
            if v >= 0:
                bit = 1 << v
                wk.expand(P & ~g.adj[v] & ~bit, g.w[v], (v,))
            else:
                wk.expand(P, 0, ())
            done = True
        except _Timeout:
            done = False
        return wk, done

    subs = _subproblems(g.n)
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as ex:
            results = list(ex.map(run, subs))
    else:
        results = [run(s) for s in subs]

    best = max(wk.best for wk, _ in results)
    complete = all(done for _, done in results)
    found = sorted(
        {tuple(sorted(verts[i] for i in opt)) for wk, _ in results if wk.best == best for opt in wk.optima}
    )
    count = sum(wk.count for wk, _ in results if wk.best == best and wk.optima)
    explored = sum(wk.nodes for wk, _ in results)
    families = [Family(n, q, members) for members in found[: cfg.max_optima_reported]]
    for fam in families:
        if not is_t_intersecting(fam, t):
            raise InvariantViolation("search returned a family that is not t-intersecting")
    return SearchResult(
        optimum=Fraction(best, scale),
        families=families,
        optima_count=count,
        explored=explored,
        complete=complete,
        vertices=g.n,
        mode=ctx.mode,
    )
