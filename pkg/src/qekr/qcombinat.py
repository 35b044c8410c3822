"""Exact q-arithmetic.

Scalars are ``int``/``Fraction`` in exact mode and ``mpmath`` ``mpf`` values in
real mode.  Every function here is generic over the scalar type: if any input
is an ``mpf`` the result is an ``mpf`` of the same working precision,
otherwise the result is exact.  The base ``q`` is normally a prime power, but
any rational ``q != 1`` is accepted so that q -> 1 limits can be probed with
``q = 1 + 10**-d``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath

DEFAULT_PRECISION = 256
SUPPORTED_Q = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)


@lru_cache(maxsize=None)
def real_context(prec: int = DEFAULT_PRECISION) -> mpmath.ctx_mp.MPContext:
    """A private mpmath context with ``prec`` bits; never the global ``mp``."""
    if prec < 53:
        raise ValueError("precision must be at least 53 bits")
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def is_real(x) -> bool:
    return isinstance(x, mpmath.ctx_mp_python._mpf)


def precision_of(x) -> int | None:
    return x.context.prec if is_real(x) else None


def to_real(x, prec: int = DEFAULT_PRECISION):
    """Convert an exact or real scalar to an ``mpf`` at ``prec`` bits."""
    ctx = real_context(prec)
    if is_real(x):
        return x if x.context is ctx else ctx.mpf(x)
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return ctx.mpf(x)
    return ctx.mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational value of ``x``; an ``mpf`` is a dyadic rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if is_real(x):
        man, exp = x.man_exp
        man = int(man)
        return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)
    return Fraction(x)


def parse_scalar(s, prec: int | None = None):
    """Parse ``"a/b"``, an integer, or a decimal string.

    Rational-looking input is exact.  Decimal input is exact too (``"0.3"``
    is 3/10) unless ``prec`` is given, in which case it becomes real.
    """
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if is_real(s):
        return s
    if isinstance(s, float):
        s = repr(s)
    s = str(s).strip()
    if prec is not None and "/" not in s:
        return to_real(s, prec)
    return Fraction(s)


def common_real(*xs):
    """Return the real context shared by ``xs``, or ``None`` if all are exact."""
    ctx = None
    for x in xs:
        if is_real(x):
            if ctx is None or x.context.prec > ctx.prec:
                ctx = x.context
    return ctx


def _lift(x, ctx):
    if ctx is None:
        return x
    return to_real(x, ctx.prec)


def _as_exact(x):
    if isinstance(x, float):
        return Fraction(repr(x))
    return x


def q_int(m: int, q):
    """``[m] = (q^m - 1)/(q - 1)``, computed as ``1 + q + ... + q^(m-1)``."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return sum((q**j for j in range(m)), 0 * q)


def q_bracket_real(lam, q, prec: int = DEFAULT_PRECISION):
    """``(q^lam - 1)/(q - 1)`` for real ``lam >= 0``."""
    ctx = real_context(prec)
    lam = to_real(parse_scalar(lam), prec)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    qr = to_real(q, prec)
    return (ctx.power(qr, lam) - 1) / (qr - 1)


def q_factorial(m: int, q):
    out = 1
    for j in range(1, m + 1):
        out *= q_int(j, q)
    return out


@lru_cache(maxsize=65536)
def _gauss_int(n: int, k: int, q: int) -> int:
    num = 1
    den = 1
    for j in range(k):
        num *= q ** (n - j) - 1
        den *= q ** (j + 1) - 1
    return num // den


def gaussian_binomial(n: int, k: int, q):
    """Number of ``k``-dimensional subspaces of ``F_q^n``; 0 outside ``0 <= k <= n``."""
    if k < 0 or k > n or n < 0:
        return 0
    if isinstance(q, int):
        if q == 1:
            return math.comb(n, k)
        return _gauss_int(n, min(k, n - k), q)
    q = _as_exact(q)
    num = 1
    den = 1
    for j in range(k):
        num *= q ** (n - j) - 1
        den *= q ** (j + 1) - 1
    return num / den


def q_pochhammer(sigma, q, m: int):
    """``(-sigma; q)_m = prod_{j<m} (1 + sigma q^j)`` as an explicit product."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    ctx = common_real(sigma, q)
    sigma, q = _lift(sigma, ctx), _lift(q, ctx)
    out = _lift(1, ctx)
    for j in range(m):
        out *= 1 + sigma * q**j
    return out if ctx is not None else Fraction(out)


def q_pochhammer_qq(m: int, q):
    """``(q; q)_m = prod_{j=1}^{m} (1 - q^j)``."""
    out = 1
    for j in range(1, m + 1):
        out *= 1 - q**j
    return out


def q_binomial_sum(sigma, q, m: int):
    """Right-hand side of the q-binomial theorem, summed termwise."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    ctx = common_real(sigma, q)
    sigma, qq = _lift(sigma, ctx), _lift(q, ctx)
    total = _lift(0, ctx)
    for k in range(m + 1):
        g = gaussian_binomial(m, k, q)
        total += _lift(g, ctx) * sigma**k * qq ** (k * (k - 1) // 2)
    return total if ctx is not None else Fraction(total)


def phi(sigma, q, n: int, k: int):
    """Weight ``sigma^k q^C(k,2) / (-sigma; q)_n`` of one ``k``-dim subspace."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    ctx = common_real(sigma, q)
    s, qq = _lift(sigma, ctx), _lift(q, ctx)
    val = s**k * qq ** (k * (k - 1) // 2) / q_pochhammer(sigma, q, n)
    return val if ctx is not None else Fraction(val)


def _check_technical(a: int, b: int, c: int) -> None:
    if b < 0 or c < 0 or a < b:
        raise ValueError("need a >= b >= 0 and c >= 0")


def technical_sum(a: int, b: int, c: int, q):
    """``sum_j [b,j][a-j,c] (-1)^j q^C(j,2)`` over ``0 <= j <= b``."""
    _check_technical(a, b, c)
    total = 0
    for j in range(b + 1):
        term = gaussian_binomial(b, j, q) * gaussian_binomial(a - j, c, q) * q ** (j * (j - 1) // 2)
        total += -term if j % 2 else term
    return Fraction(total) if isinstance(total, Rational) else total


def technical_closed(a: int, b: int, c: int, q):
    """Closed form ``q^(b(a-c)) [a-b, c-b]``; zero when ``b > c``."""
    _check_technical(a, b, c)
    if b > c:
        return Fraction(0)
    val = Fraction(q) ** (b * (a - c)) * gaussian_binomial(a - b, c - b, q)
    return Fraction(val)


def _theta_fraction(theta) -> Fraction:
    theta = to_fraction(theta) if is_real(theta) else parse_scalar(theta)
    if not 0 < theta < 1:
        raise ValueError("theta must lie strictly between 0 and 1")
    return theta


def sigma_theta(theta, n: int, q, prec: int = DEFAULT_PRECISION):
    """``q^(-(1-theta) n)``; exact when ``(1-theta) n`` is an integer."""
    th = _theta_fraction(theta)
    e = (1 - th) * n
    if e.denominator == 1:
        return Fraction(1, q ** int(e))
    ctx = real_context(prec)
    return ctx.power(to_real(q, prec), -to_real(e, prec))


def sigma_conjecture(p, n: int, q, prec: int = DEFAULT_PRECISION):
    """``[pn] / ([n] - [pn])``; exact when ``pn`` is an integer."""
    pf = _theta_fraction(p)
    pn = pf * n
    if pn >= n:
        raise ValueError("need p*n < n")
    if pn.denominator == 1:
        a = q_int(int(pn), q)
        return Fraction(a, q_int(n, q) - a)
    a = q_bracket_real(to_real(pn, prec), q, prec)
    return a / (to_real(q_int(n, q), prec) - a)


def star_measure_closed(sigma, q, t: int):
    """``sigma^t q^C(t,2) / (-sigma; q)_t``: measure of all subspaces through a fixed t-space."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    ctx = common_real(sigma)
    s = _lift(sigma, ctx)
    val = s**t * _lift(q, ctx) ** (t * (t - 1) // 2) / q_pochhammer(sigma, q, t)
    return val if ctx is not None else Fraction(val)
