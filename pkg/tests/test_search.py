from __future__ import annotations

from fractions import Fraction

import pytest

from qekr.families import all_point_stars
from qekr.gfspace import enumerate_all, intersection_dim
from qekr.measure import make_context, measure_family
from qekr.search import SearchCapExceeded, SearchConfig, max_measure_t_intersecting


def _brute_force(ctx, t):
    verts = [x for x in enumerate_all(ctx.n, ctx.q) if x.dim >= t]
    bad = [0] * len(verts)
    for i, x in enumerate(verts):
        for j, y in enumerate(verts):
            if intersection_dim(x, y) < t:
                bad[i] |= 1 << j
    w = [ctx.phi[x.dim] for x in verts]
    best, count = Fraction(0), 0
    for S in range(1 << len(verts)):
        members = [i for i in range(len(verts)) if S >> i & 1]
        if any(bad[i] & S for i in members):
            continue
        m = sum((w[i] for i in members), Fraction(0))
        if m > best:
            best, count = m, 1
        elif m == best:
            count += 1
    return best, count


@pytest.mark.parametrize("sigma", [Fraction(1, 16), Fraction(1, 8), Fraction(1, 2), Fraction(3)])
@pytest.mark.parametrize("t", [1, 2])
def test_matches_brute_force(sigma, t):
    ctx = make_context(2, 3, sigma)
    best, count = _brute_force(ctx, t)
    res = max_measure_t_intersecting(ctx, t)
    assert res.complete and res.optimum == best and res.optima_count == count
    for fam in res.families:
        assert measure_family(ctx, fam) == best


def test_point_stars_optimal_below_threshold():
    ctx = make_context(2, 3, Fraction(1, 16))
    res = max_measure_t_intersecting(ctx, 1)
    assert res.optimum == Fraction(1, 17)
    assert {f.members for f in res.families} == {s.members for s in all_point_stars(3, 2)}


def test_cap_exceeded():
    with pytest.raises(SearchCapExceeded):
        max_measure_t_intersecting(make_context(2, 5, Fraction(1, 64)), 1, SearchConfig(max_vertices=100))


def test_time_budget_marks_incomplete():
    res = max_measure_t_intersecting(make_context(2, 5, Fraction(1, 64)), 1, SearchConfig(time_budget=1e-6))
    assert not res.complete
    assert res.optimum > 0


def test_threads_do_not_change_result():
    ctx = make_context(3, 3, Fraction(1, 27))
    a = max_measure_t_intersecting(ctx, 1, SearchConfig(threads=1))
    b = max_measure_t_intersecting(ctx, 1, SearchConfig(threads=4))
    assert (a.optimum, a.optima_count, a.explored) == (b.optimum, b.optima_count, b.explored)
    assert [f.members for f in a.families] == [f.members for f in b.families]


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(threads=0)
    with pytest.raises(ValueError):
        SearchConfig(time_budget=0)
    with pytest.raises(ValueError):
        max_measure_t_intersecting(make_context(2, 2, 1), 0)


def test_t_above_n_gives_empty_family():
    res = max_measure_t_intersecting(make_context(2, 2, 1), 3)
    assert res.optimum == 0 and res.vertices == 0 and len(res.families[0]) == 0
