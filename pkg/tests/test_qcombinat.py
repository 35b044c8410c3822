from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qekr.qcombinat import (
    gaussian_binomial,
    is_real,
    parse_scalar,
    phi,
    q_binomial_sum,
    q_bracket_real,
    q_int,
    q_pochhammer,
    q_pochhammer_qq,
    real_context,
    sigma_conjecture,
    sigma_theta,
    star_measure_closed,
    technical_closed,
    technical_sum,
    to_fraction,
    to_real,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=50)


@pytest.mark.parametrize("m,q,expected", [(0, 2, 0), (3, 2, 7), (2, 3, 4)])
def test_q_int(m, q, expected):
    assert q_int(m, q) == expected


def test_q_int_matches_line_count():
    # lines of F_3^2: nonzero vectors up to scaling
    assert q_int(2, 3) == (3**2 - 1) // (3 - 1)


def test_q_bracket_real():
    assert q_bracket_real(3.0, 2) == 7
    assert q_bracket_real(0, 5) == 0
    assert abs(q_bracket_real(1.5, 4) - Fraction(7, 3)) < 1e-60


@pytest.mark.parametrize("n,k,q,expected", [(4, 0, 2, 1), (4, 2, 2, 35), (3, 1, 2, 7)])
def test_gaussian_examples(n, k, q, expected):
    assert gaussian_binomial(n, k, q) == expected


def test_gaussian_out_of_range_is_zero():
    assert gaussian_binomial(3, -1, 2) == 0
    assert gaussian_binomial(3, 4, 2) == 0


def test_gaussian_q_equals_one_is_binomial():
    assert all(gaussian_binomial(7, k, 1) == math.comb(7, k) for k in range(8))


@given(st.integers(0, 14), st.integers(0, 14), st.sampled_from([2, 3, 4, 5, 7]))
def test_gaussian_symmetry_and_pascal(n, k, q):
    assert gaussian_binomial(n, k, q) == gaussian_binomial(n, n - k, q)
    if n >= 1:
        rhs = gaussian_binomial(n - 1, k - 1, q) + q**k * gaussian_binomial(n - 1, k, q)
        assert gaussian_binomial(n, k, q) == rhs


@given(st.integers(0, 10), st.integers(0, 10), fractions)
def test_gaussian_rational_q(n, k, q):
    # the defining product formula, evaluated with rational q away from 1
    if q in (0, 1, -1):
        return
    num = math.prod((1 - q ** (n - i)) for i in range(k)) if k <= n else 0
    den = math.prod((1 - q ** (i + 1)) for i in range(k))
    assert gaussian_binomial(n, k, q) == (Fraction(num) / den if k <= n else 0)


def test_gaussian_q_to_one_limit():
    errs = []
    for d in range(1, 7):
        ctx = real_context(128)
        q = 1 + ctx.mpf(10) ** (-d)
        errs.append(abs(gaussian_binomial(8, 3, q) - math.comb(8, 3)) / math.comb(8, 3))
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 1e-3


def test_q_pochhammer_examples():
    assert q_pochhammer(0, 3, 5) == 1
    assert q_pochhammer(1, 2, 2) == 6
    assert q_pochhammer(-1, 2, 3) == 0
    assert q_binomial_sum(1, 2, 2) == 6
    assert q_binomial_sum(0, 7, 4) == 1
    assert q_binomial_sum(-1, 2, 4) == 0


@settings(max_examples=60)
@given(fractions, st.integers(0, 9), st.sampled_from([2, 3, 4]))
def test_q_binomial_theorem(sigma, m, q):
    assert q_pochhammer(sigma, q, m) == q_binomial_sum(sigma, q, m)


def test_q_pochhammer_qq():
    assert q_pochhammer_qq(0, 2) == 1
    assert q_pochhammer_qq(3, 2) == (1 - 2) * (1 - 4) * (1 - 8)


def test_phi_examples():
    s = Fraction(1, 8)
    assert phi(s, 2, 3, 0) == Fraction(64, 135)
    assert phi(s, 2, 3, 1) == Fraction(8, 135)
    assert phi(Fraction(2, 3), 3, 5, 0) == 1 / q_pochhammer(Fraction(2, 3), 3, 5)


@given(st.fractions(min_value=Fraction(1, 30), max_value=10, max_denominator=30),
       st.integers(0, 7), st.sampled_from([2, 3]))
def test_phi_normalization(sigma, n, q):
    assert sum(gaussian_binomial(n, k, q) * phi(sigma, q, n, k) for k in range(n + 1)) == 1


def test_phi_rejects_nonpositive_sigma():
    with pytest.raises(ValueError):
        phi(0, 2, 3, 1)


@pytest.mark.parametrize("a,b,c,q,expected", [(3, 1, 2, 2, 6), (5, 3, 1, 3, 0), (4, 0, 2, 2, 35)])
def test_technical_examples(a, b, c, q, expected):
    assert technical_sum(a, b, c, q) == expected
    assert technical_closed(a, b, c, q) == expected


def test_technical_rejects_bad_arguments():
    with pytest.raises(ValueError):
        technical_sum(2, 3, 1, 2)


@pytest.mark.parametrize("theta,n,q,expected", [
    (Fraction(1, 2), 4, 2, Fraction(1, 4)),
    (Fraction(1, 3), 3, 2, Fraction(1, 4)),
    ("0.3", 10, 2, Fraction(1, 128)),
])
def test_sigma_theta_exact(theta, n, q, expected):
    assert sigma_theta(theta, n, q) == expected


def test_sigma_theta_real_when_exponent_fractional():
    s = sigma_theta("0.3", 11, 2)
    assert is_real(s)
    assert abs(s - to_real(2, 256) ** to_real(Fraction(-77, 10), 256)) < 1e-70


def test_sigma_conjecture():
    assert sigma_conjecture(Fraction(1, 2), 4, 2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        sigma_conjecture(1, 4, 2)


def test_sigma_conjecture_ratio_converges():
    # sigma / q^{-(1-p)n} is about 1 - q^{-pn}, so the ratio at n=20 sits just below 0.99
    r20 = sigma_conjecture("0.3", 20, 2) * 2**14
    r40 = sigma_conjecture("0.3", 40, 2) * 2**28
    assert r20 == Fraction(63 * 16384, 1048512)
    assert 0.984 < r20 < 0.985
    assert abs(1 - r40) < abs(1 - r20)
    assert abs(1 - r40) < 1e-3


def test_star_measure_closed():
    s = Fraction(1, 8)
    assert star_measure_closed(s, 2, 0) == 1
    assert star_measure_closed(s, 2, 1) == s / (1 + s)
    assert star_measure_closed(s, 2, 2) == Fraction(1, 45)


def test_real_contamination():
    s = to_real(Fraction(1, 8), 128)
    v = star_measure_closed(s, 2, 2)
    assert is_real(v) and v.context.prec == 128
    assert abs(v - Fraction(1, 45)) < 2.0 ** -64


def test_parse_and_convert():
    assert parse_scalar("3/7") == Fraction(3, 7)
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert is_real(parse_scalar("0.25", prec=64))
    x = to_real(Fraction(1, 3), 80)
    assert abs(to_fraction(x) - Fraction(1, 3)) < Fraction(1, 2**78)
    assert to_fraction(to_real(Fraction(3, 8))) == Fraction(3, 8)
