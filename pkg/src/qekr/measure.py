"""The sigma-biased measure on the subspace lattice and its layer distribution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .gfspace import Subspace
from .qcombinat import (
    DEFAULT_PRECISION,
    common_real,
    gaussian_binomial,
    is_real,
    parse_scalar,
    phi as phi_weight,
    precision_of,
    q_int,
    q_pochhammer,
    real_context,
    sigma_theta,
    star_measure_closed,
    to_real,
)

TAIL_PRECISION = 512


def mode_tag(x) -> str:
    return f"real@{precision_of(x)}" if is_real(x) else "exact"


def rel_tol(x) -> float:
    """Comparison tolerance ``2^-(prec/2)`` for real values, 0 for exact ones."""
    p = precision_of(x)
    return 0.0 if p is None else 2.0 ** (-(p // 2))


@dataclass(frozen=True)
class MeasureContext:
    q: int
    n: int
    sigma: object
    phi: tuple
    layer_mass: tuple

    @property
    def mode(self) -> str:
        return mode_tag(self.sigma)

    @property
    def exact(self) -> bool:
        return not is_real(self.sigma)


def make_context(q: int, n: int, sigma) -> MeasureContext:
    """Precompute ``phi(k)`` and ``Phi(k) = [n,k] phi(k)`` for ``k = 0..n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    sigma = parse_scalar(sigma) if not is_real(sigma) else sigma
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    phis = tuple(phi_weight(sigma, q, n, k) for k in range(n + 1))
    mass = tuple(gaussian_binomial(n, k, q) * p for k, p in enumerate(phis))
    total = sum(mass)
    if is_real(sigma):
        if abs(total - 1) > 2 ** (-(precision_of(sigma) // 2)):
            raise ArithmeticError(f"layer masses sum to {total}")
    elif total != 1:
        raise ArithmeticError(f"layer masses sum to {total}")
    return MeasureContext(q, n, sigma, phis, mass)


def theta_context(theta, n: int, q: int, prec: int = DEFAULT_PRECISION) -> MeasureContext:
    return make_context(q, n, sigma_theta(theta, n, q, prec))


def measure_family(ctx: MeasureContext, family) -> object:
    """Sum of ``phi(dim x)`` over the members of ``family``."""
    members = getattr(family, "members", family)
    fam_n = getattr(family, "n", None)
    if fam_n is not None and (fam_n != ctx.n or family.q != ctx.q):
        raise ValueError("family ambient does not match the measure context")
    total = 0 * ctx.phi[0]
    for x in members:
        if x.n != ctx.n or x.q != ctx.q:
            raise ValueError("family ambient does not match the measure context")
        total += ctx.phi[x.dim]
    return total


def measure_star_closed(ctx: MeasureContext, t: int):
    if not 0 <= t <= ctx.n:
        raise ValueError("need 0 <= t <= n")
    return star_measure_closed(ctx.sigma, ctx.q, t)


def measure_star_product_form(theta, n: int, q: int, t: int, prec: int = DEFAULT_PRECISION):
    """``prod_{j<t} (1 + q^((1-theta) n - j))^-1``."""
    th = parse_scalar(theta)
    if not 0 < th < 1:
        raise ValueError("theta must lie strictly between 0 and 1")
    e = (1 - th) * n
    if e.denominator == 1:
        out = Fraction(1)
        for j in range(t):
            out /= 1 + Fraction(q) ** (int(e) - j)
        return out
    ctx = real_context(prec)
    er = to_real(e, prec)
    out = ctx.mpf(1)
    for j in range(t):
        out /= 1 + ctx.power(q, er - j)
    return out


def _root(x, n: int, prec: int):
    ctx = real_context(prec)
    return ctx.root(to_real(x, prec), n)


def star_root_deviation(theta, n: int, q: int, t: int, prec: int = DEFAULT_PRECISION):
    """``|mu(A_n^(t))^(1/n) - q^(-(1-theta) t)|``."""
    ctx = real_context(prec)
    val = _root(measure_star_product_form(theta, n, q, t, prec), n, prec)
    lim = ctx.power(q, -(1 - to_real(parse_scalar(theta), prec)) * t)
    return abs(val - lim)


@dataclass(frozen=True)
class MomentReport:
    theta: object
    n: int
    q: int
    mean_X: object
    mean_X2: object
    var_X: object
    mean_Xinv: object
    mean_Xinv2: object
    var_Xinv: object
    direct: dict = field(default_factory=dict)
    limits: dict = field(default_factory=dict)

    def discrepancies(self) -> dict:
        """Relative gap between each closed form and its direct sum."""
        out = {}
        for name, direct in self.direct.items():
            closed = getattr(self, name)
            scale = abs(closed) if closed != 0 else 1
            out[name] = abs(closed - direct) / scale
        return out

    def deviations(self) -> dict:
        return {
            "mean_X": abs(self.mean_X - self.limits["mean_X"]),
            "var_X": abs(self.var_X - self.limits["var_X"]),
            "mean_Xinv": abs(self.mean_Xinv - self.limits["mean_Xinv"]),
            "mean_Xinv2": abs(self.mean_Xinv2 - self.limits["mean_Xinv2"]),
            "var_Xinv": abs(self.var_Xinv - self.limits["var_Xinv"]),
        }


def moments(theta, n: int, q: int, prec: int = DEFAULT_PRECISION) -> MomentReport:
    """Moments of ``X = q^(k - theta n)`` under ``Phi``, by closed form and by direct sum."""
    th = parse_scalar(theta)
    ctx = theta_context(th, n, q, prec)
    s = ctx.sigma
    tn = th * n
    if tn.denominator == 1 and ctx.exact:
        qtn = Fraction(q) ** int(tn)
        qq = Fraction(q)
    else:
        rc = real_context(prec)
        qtn = rc.power(q, to_real(tn, prec))
        qq = rc.mpf(q)
        s = to_real(s, prec)

    def x_pow(k: int, e: int):
        return (qq ** (k) / qtn) ** e

    d1 = sum(x_pow(k, 1) * m for k, m in enumerate(ctx.layer_mass))
    d2 = sum(x_pow(k, 2) * m for k, m in enumerate(ctx.layer_mass))
    dm1 = sum(x_pow(k, -1) * m for k, m in enumerate(ctx.layer_mass))
    dm2 = sum(x_pow(k, -2) * m for k, m in enumerate(ctx.layer_mass))

    e1 = (1 + s * qq**n) / (qtn * (1 + s))
    e2 = (1 + s * qq**n) * (1 + s * qq ** (n + 1)) / (qtn**2 * (1 + s) * (1 + s * qq))
    em1 = qtn * (1 + s / qq) / (1 + s * qq ** (n - 1))
    em2 = qtn**2 * (1 + s / qq**2) * (1 + s / qq) / ((1 + s * qq ** (n - 2)) * (1 + s * qq ** (n - 1)))
    return MomentReport(
        theta=th, n=n, q=q,
        mean_X=e1, mean_X2=e2, var_X=e2 - e1**2,
        mean_Xinv=em1, mean_Xinv2=em2, var_Xinv=em2 - em1**2,
        direct={
            "mean_X": d1, "mean_X2": d2, "var_X": d2 - d1**2,
            "mean_Xinv": dm1, "mean_Xinv2": dm2, "var_Xinv": dm2 - dm1**2,
        },
        limits={
            "mean_X": 1, "mean_X2": q, "var_X": q - 1,
            "mean_Xinv": q, "mean_Xinv2": q**3, "var_Xinv": q**3 - q**2,
        },
    )


def _cut(x):
    return x if is_real(x) else parse_scalar(x)


def tail_above(ctx: MeasureContext, cutoff, inclusive: bool = False):
    """Sum of ``Phi(k)`` over integers ``k > cutoff`` (``>=`` if ``inclusive``)."""
    c = _cut(cutoff)
    zero = 0 * ctx.layer_mass[0]
    return sum((m for k, m in enumerate(ctx.layer_mass) if (k >= c if inclusive else k > c)), zero)


def tail_below(ctx: MeasureContext, cutoff, inclusive: bool = False):
    """Sum of ``Phi(k)`` over integers ``0 <= k < cutoff`` (``<=`` if ``inclusive``)."""
    c = _cut(cutoff)
    zero = 0 * ctx.layer_mass[0]
    return sum((m for k, m in enumerate(ctx.layer_mass) if (k <= c if inclusive else k < c)), zero)


@dataclass(frozen=True)
class TailReport:
    claim: str
    theta: object
    n: int
    q: int
    t: int
    cutoff: str
    tail: object
    normalizer: object
    normalized: object

    def as_row(self) -> tuple:
        return (self.n, self.tail, self.normalizer, self.normalized)


def _tail_ctx(theta, n, q, prec):
    # tails are always evaluated in real mode; normalizers overflow doubles
    return make_context(q, n, to_real(sigma_theta(theta, n, q, prec), prec))


def claim4_tail(theta, n: int, q: int, t: int, prec: int = TAIL_PRECISION) -> TailReport:
    """Mass above ``n/2``, scaled by ``q^((1-theta) t n)``."""
    th = parse_scalar(theta)
    if not 0 < th < Fraction(1, 2):
        raise ValueError("this tail needs 0 < theta < 1/2")
    ctx = _tail_ctx(th, n, q, prec)
    raw = tail_above(ctx, Fraction(n, 2))
    rc = real_context(prec)
    norm = rc.power(q, to_real((1 - th) * t * n, prec))
    return TailReport("cl4", th, n, q, t, "n/2 < k <= n", raw, norm, raw * norm)


def default_delta(theta) -> Fraction:
    th = parse_scalar(theta)
    return (th - Fraction(1, 2)) ** 2 / 4


def claim6_tail(theta, n: int, q: int, t: int, delta=None, prec: int = TAIL_PRECISION) -> TailReport:
    """Mass below ``(n+t)/2``, scaled by ``q^(delta n^2)``."""
    th = parse_scalar(theta)
    if not Fraction(1, 2) < th < 1:
        raise ValueError("this tail needs 1/2 < theta < 1")
    delta = default_delta(th) if delta is None else parse_scalar(delta)
    if not 0 < delta < (th - Fraction(1, 2)) ** 2 / 2:
        raise ValueError("delta must satisfy 0 < delta < (theta - 1/2)^2 / 2")
    ctx = _tail_ctx(th, n, q, prec)
    raw = tail_below(ctx, Fraction(n + t, 2))
    rc = real_context(prec)
    norm = rc.power(q, to_real(delta * n * n, prec))
    return TailReport("cl6", th, n, q, t, "0 <= k < (n+t)/2", raw, norm, raw * norm)


def claim8_tail(theta, n: int, q: int, t: int, prec: int = TAIL_PRECISION) -> TailReport:
    """Mass above ``(n-t-1)/2``, scaled by ``q^(2 t n)``."""
    th = parse_scalar(theta)
    if not 0 < th < Fraction(1, 2):
        raise ValueError("this tail needs 0 < theta < 1/2")
    ctx = _tail_ctx(th, n, q, prec)
    raw = tail_above(ctx, Fraction(n - t - 1, 2))
    rc = real_context(prec)
    norm = rc.power(q, 2 * t * n)
    return TailReport("cl8", th, n, q, t, "(n-t-1)/2 < k <= n", raw, norm, raw * norm)


def top_family_measure(ctx: MeasureContext, t: int):
    """Measure of all subspaces with ``dim >= (n+t)/2``, from the layer masses."""
    return tail_above(ctx, Fraction(ctx.n + t, 2), inclusive=True)


def top_family_root(theta, n: int, q: int, t: int, prec: int = TAIL_PRECISION):
    ctx = _tail_ctx(theta, n, q, prec)
    return _root(top_family_measure(ctx, t), n, prec)


@dataclass(frozen=True)
class MonotoneProfile:
    regime: str
    checked: tuple
    holds: bool
    first_violation: int | None
    ratios: tuple


def _layer_ratio_up(n: int, q: int, sigma, k: int):
    """``Phi(k+1)/Phi(k) = ([n-k]/[k+1]) sigma q^k``, from the formula alone."""
    return q_int(n - k, q) * sigma * q**k / q_int(k + 1, q)


def monotone_profile(ctx: MeasureContext, theta, t: int = 1) -> MonotoneProfile:
    """Check the layer ratios on the side of the mode used by the tail bounds.

    For ``theta < 1/2``: ``Phi(k+1)/Phi(k) < 1`` for ``ceil(n/2) <= k < n``.
    For ``theta > 1/2``: ``Phi(k-1)/Phi(k) < 1`` for ``1 <= k <= ceil((n+t)/2)``.
    """
    th = parse_scalar(theta)
    n, q, s = ctx.n, ctx.q, ctx.sigma
    if n == 0 or th == Fraction(1, 2):
        return MonotoneProfile("vacuous", (), True, None, ())
    if th < Fraction(1, 2):
        ks = tuple(range(math.ceil(n / 2), n))
        ratios = tuple(_layer_ratio_up(n, q, s, k) for k in ks)
        regime = "decreasing above ceil(n/2)"
    else:
        m = min(n, -(-(n + t) // 2))
        ks = tuple(range(1, m + 1))
        ratios = tuple(1 / _layer_ratio_up(n, q, s, k - 1) for k in ks)
        regime = "increasing below ceil((n+t)/2)"
    bad = next((k for k, r in zip(ks, ratios) if not r < 1), None)
    return MonotoneProfile(regime, ks, bad is None, bad, ratios)
