from __future__ import annotations

from fractions import Fraction

import pytest

from qekr.families import star_family, top_family
from qekr.gfspace import Subspace, enumerate_all
from qekr.measure import (
    claim4_tail,
    claim6_tail,
    claim8_tail,
    default_delta,
    make_context,
    measure_family,
    measure_star_closed,
    measure_star_product_form,
    mode_tag,
    moments,
    monotone_profile,
    tail_above,
    tail_below,
    theta_context,
    top_family_measure,
)
from qekr.qcombinat import is_real, real_context, to_real


def test_layer_masses_example():
    ctx = make_context(2, 3, Fraction(1, 8))
    assert ctx.layer_mass == (Fraction(64, 135), Fraction(56, 135), Fraction(14, 135), Fraction(1, 135))
    assert ctx.mode == "exact"


def test_trivial_contexts():
    assert make_context(5, 0, Fraction(3, 7)).layer_mass == (1,)
    assert make_context(2, 1, 1).layer_mass == (Fraction(1, 2), Fraction(1, 2))


def test_context_validation():
    with pytest.raises(ValueError, match="sigma must be positive"):
        make_context(2, 3, Fraction(-1, 2))
    with pytest.raises(ValueError):
        make_context(2, -1, 1)


def test_real_context_is_tagged():
    ctx = make_context(2, 4, to_real(Fraction(1, 3), 128))
    assert ctx.mode == "real@128" and not ctx.exact
    assert abs(sum(ctx.layer_mass) - 1) < 2.0**-60


def test_measure_family_examples():
    ctx = make_context(2, 3, Fraction(1, 8))
    assert measure_family(ctx, []) == 0
    assert measure_family(ctx, list(enumerate_all(3, 2))) == 1
    assert measure_family(ctx, star_family(3, 2, 1)) == Fraction(1, 9)


def test_measure_family_rejects_other_ambient():
    ctx = make_context(2, 3, Fraction(1, 8))
    with pytest.raises(ValueError):
        measure_family(ctx, [Subspace.zero(4, 2)])


def test_star_closed_examples():
    ctx = make_context(2, 4, Fraction(1, 8))
    assert measure_star_closed(ctx, 0) == 1
    assert measure_star_closed(ctx, 1) == Fraction(1, 9)
    assert measure_star_closed(ctx, 2) == Fraction(1, 45) == measure_family(ctx, star_family(4, 2, 2))


def test_product_form():
    assert measure_star_product_form(Fraction(1, 2), 4, 2, 0) == 1
    assert measure_star_product_form(Fraction(1, 2), 4, 2, 1) == Fraction(1, 5)
    for n in (10, 11, 13):
        ctx = theta_context("0.3", n, 2)
        direct = measure_star_closed(ctx, 2)
        prod = measure_star_product_form("0.3", n, 2, 2)
        assert abs(to_real(direct) - to_real(prod)) <= 2.0**-128


def test_moment_example():
    rep = moments(Fraction(1, 2), 4, 2)
    assert rep.mean_X == 1
    assert all(v == 0 for v in rep.discrepancies().values())


def test_moments_real_mode_close():
    rep = moments("0.3", 17, 3)
    assert mode_tag(rep.mean_X).startswith("real@")
    assert all(v < 1e-40 for v in rep.discrepancies().values())
    assert rep.limits["var_Xinv"] == 3**3 - 3**2


def test_moment_inverse_square_limit():
    vals = [moments("0.3", n, 2).mean_Xinv2 for n in (20, 40, 60)]
    errs = [abs(to_real(v) - 8) for v in vals]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 1e-3


def test_tail_boundaries():
    ctx = make_context(2, 5, Fraction(1, 8))
    assert tail_above(ctx, 5) == 0
    assert tail_above(ctx, 0) == 1 - ctx.layer_mass[0]
    assert tail_above(ctx, 0, inclusive=True) == 1
    assert tail_below(ctx, Fraction(5, 2)) == sum(ctx.layer_mass[:3])
    assert tail_below(ctx, 2) == sum(ctx.layer_mass[:2])
    assert tail_below(ctx, 2, inclusive=True) == sum(ctx.layer_mass[:3])


def test_claim4_tail_example():
    a = claim4_tail("0.3", 20, 2, 1)
    b = claim4_tail("0.3", 40, 2, 1)
    assert b.normalized < a.normalized
    assert is_real(a.normalized) and a.normalized.context.prec == 512


def test_tails_validate_theta():
    with pytest.raises(ValueError):
        claim4_tail("0.7", 10, 2, 1)
    with pytest.raises(ValueError):
        claim6_tail("0.3", 10, 2, 1)
    with pytest.raises(ValueError):
        claim6_tail("0.7", 10, 2, 1, delta=1)
    with pytest.raises(ValueError):
        claim8_tail("0.5", 10, 2, 1)


def test_default_delta_is_admissible():
    th = Fraction(3, 4)
    assert 0 < default_delta(th) < (th - Fraction(1, 2)) ** 2 / 2


def test_tails_decay_eventually():
    # the finite-n grid can sit before the asymptotic regime; far out the decay is clear
    a = claim8_tail("0.3", 100, 2, 1).normalized
    b = claim8_tail("0.3", 160, 2, 1).normalized
    assert b < a * Fraction(1, 1000)
    a = claim4_tail("0.4", 200, 2, 2).normalized
    b = claim4_tail("0.4", 300, 2, 2).normalized
    assert b < a


def test_monotone_profile():
    up = monotone_profile(theta_context("0.3", 20, 2), "0.3")
    assert up.holds and up.checked[0] == 10
    down = monotone_profile(theta_context("0.75", 20, 2), "0.75", 1)
    assert down.holds
    assert monotone_profile(make_context(2, 0, 1), "0.3").regime == "vacuous"


def test_monotone_profile_matches_layer_masses():
    ctx = theta_context("0.3", 20, 2)
    prof = monotone_profile(ctx, "0.3")
    for k, r in zip(prof.checked, prof.ratios):
        assert abs(to_real(r) - ctx.layer_mass[k + 1] / ctx.layer_mass[k]) < 1e-60


def test_top_family_measure_example():
    ctx = make_context(2, 3, Fraction(1, 8))
    assert top_family_measure(ctx, 1) == measure_family(ctx, top_family(3, 2, 1))
    rc = real_context(512)
    th = Fraction(3, 4)
    ctx = theta_context(th, 20, 2, 512)
    delta = default_delta(th)
    assert to_real(top_family_measure(ctx, 1), 512) > 1 - rc.power(2, -to_real(delta * 400, 512))


def test_star_root_deviation_eventually_decreasing():
    # for t = 2 and theta well above 1/2 the deviation first grows; it decays after n ~ 20
    from qekr.measure import star_root_deviation

    devs = [star_root_deviation("0.8", n, 2, 2) for n in range(30, 81, 2)]
    assert all(b < a for a, b in zip(devs, devs[1:]))
