"""Dual SDP certificate for the intersecting-family bound ``sigma/(1+sigma)``.

The exact layer works with ``(n+1) x (n+1)`` rational matrices (numpy object
arrays of ``Fraction``): ``C`` (Gaussian binomials ``[k, l]``), ``G`` and
``F = C G C^-1``.  The spectrum of the certificate matrix ``S'`` is read off
block by block from ``F`` and decides positive semidefiniteness exactly.

The float layer assembles ``S'`` on all of ``Omega_n`` for small ``n`` and
checks the block picture against a dense eigendecomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .families import Family, is_t_intersecting
from .gfspace import Subspace, count_all, enumerate_all, intersection_dims
from .qcombinat import (
    DEFAULT_PRECISION,
    gaussian_binomial,
    is_real,
    parse_scalar,
    phi as phi_weight,
    q_pochhammer_qq,
    real_context,
    to_real,
)

NULL_RTOL = 1e-9
PSD_RTOL = 1e-9
FULL_MAX_SIZE = 1500


def _exact_sigma(sigma) -> Fraction:
    if is_real(sigma):
        raise TypeError("the exact certificate layer needs a rational sigma")
    s = parse_scalar(sigma)
    return s


def _qpow(q, e: int):
    return Fraction(q) ** e


def _c2(k: int) -> int:
    return k * (k - 1) // 2


def _obj_zeros(m: int) -> np.ndarray:
    out = np.empty((m, m), dtype=object)
    out.fill(Fraction(0))
    return out


def _identity(m: int) -> np.ndarray:
    out = _obj_zeros(m)
    for i in range(m):
        out[i, i] = Fraction(1)
    return out


@dataclass(frozen=True, eq=False)
class TriangularPack:
    n: int
    q: int
    sigma: Fraction
    C: np.ndarray
    C_inv: np.ndarray
    G: np.ndarray


def build_triangular(n: int, sigma, q) -> TriangularPack:
    """The triangular matrices ``C``, ``C^-1`` (closed form) and ``G``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    s = _exact_sigma(sigma)
    m = n + 1
    C, Ci, G = _obj_zeros(m), _obj_zeros(m), _obj_zeros(m)
    for k in range(m):
        for l in range(k + 1):
            C[k, l] = Fraction(gaussian_binomial(k, l, q))
            sign = -1 if (k - l) % 2 else 1
            Ci[k, l] = Fraction(gaussian_binomial(k, l, q) * sign) * _qpow(q, _c2(k - l))
        for l in range(k, m):
            sign = -1 if k % 2 else 1
            G[k, l] = (gaussian_binomial(n - k, n - l, q) * sign * s**l * _qpow(q, _c2(k) + _c2(l)))
    if not (C.dot(Ci) == _identity(m)).all():
        raise ArithmeticError("C times its closed-form inverse is not the identity")
    return TriangularPack(n, q, s, C, Ci, G)


@dataclass(frozen=True, eq=False)
class FMatrix:
    n: int
    q: int
    sigma: Fraction
    F: np.ndarray

    def __eq__(self, other) -> bool:
        return (isinstance(other, FMatrix) and self.n == other.n
                and bool((self.F == other.F).all()))

    __hash__ = None

    def is_anti_triangular(self) -> bool:
        n = self.n
        return all(self.F[k, l] == 0 for k in range(n + 1) for l in range(n + 1) if k + l > n)

    def weighted_symmetry(self) -> bool:
        n, q, s = self.n, self.q, self.sigma
        w = [phi_weight(s, q, n, k) * gaussian_binomial(n, k, q) for k in range(n + 1)]
        return all(self.F[k, l] * w[k] == self.F[l, k] * w[l]
                   for k in range(n + 1) for l in range(n + 1))

    def row_sums(self) -> list:
        return [sum(self.F[k], Fraction(0)) for k in range(self.n + 1)]

    def expected_eigenvalues(self) -> list[Fraction]:
        return g_diagonal(self.n, self.sigma, self.q)

    def charpoly(self) -> list[Fraction]:
        return charpoly(self.F)

    def eigenvalues_match(self) -> bool:
        """Characteristic polynomial of ``F`` equals ``prod (x - G_kk)``."""
        return self.charpoly() == poly_from_roots(self.expected_eigenvalues())


def g_diagonal(n: int, sigma, q) -> list[Fraction]:
    s = _exact_sigma(sigma)
    return [(-1) ** k * s**k * _qpow(q, k * (k - 1)) for k in range(n + 1)]


def charpoly(M: np.ndarray) -> list[Fraction]:
    """Monic characteristic polynomial (highest degree first), Faddeev-LeVerrier."""
    m = M.shape[0]
    coeffs = [Fraction(1)]
    Mk = _obj_zeros(m)
    I = _identity(m)
    for k in range(1, m + 1):
        Mk = M.dot(Mk) + coeffs[-1] * I if k > 1 else I.copy()
        AM = M.dot(Mk)
        c = -sum((AM[i, i] for i in range(m)), Fraction(0)) / k
        coeffs.append(c)
    return coeffs


def poly_from_roots(roots: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(1)]
    for r in roots:
        nxt = out + [Fraction(0)]
        for i in range(1, len(nxt)):
            nxt[i] -= r * out[i - 1]
        out = nxt
    return out


def f_by_similarity(pack: TriangularPack) -> FMatrix:
    return FMatrix(pack.n, pack.q, pack.sigma, pack.C.dot(pack.G).dot(pack.C_inv))


def f_entry(n: int, s: Fraction, q, k: int, l: int) -> Fraction:
    """Closed-form entry of ``F``; zero above the anti-diagonal."""
    if k + l > n:
        return Fraction(0)
    inner = Fraction(0)
    for h in range(n - k - l + 1):
        term = gaussian_binomial(n - k - l, h, q) * s**h * _qpow(q, h * (h + k + l - 1))
        inner += -term if h % 2 else term
    return gaussian_binomial(n - k, l, q) * s**l * _qpow(q, k * l + _c2(l)) * inner


def f_by_formula(n: int, sigma, q) -> FMatrix:
    s = _exact_sigma(sigma)
    F = _obj_zeros(n + 1)
    for k in range(n + 1):
        for l in range(n + 1):
            F[k, l] = Fraction(f_entry(n, s, q, k, l))
    return FMatrix(n, q, s, F)


def f_q1_limit(n: int, sigma, k: int, l: int) -> Fraction:
    """``C(n-k, l) sigma^l (1 - sigma)^(n-k-l)``, the q -> 1 value of ``F[k, l]``."""
    if k < 0 or l < 0 or k + l > n:
        raise ValueError("need k, l >= 0 and k + l <= n")
    s = _exact_sigma(sigma)
    return math.comb(n - k, l) * s**l * (1 - s) ** (n - k - l)


def a_prime_squared(n: int, sigma, q, k: int, l: int) -> Fraction:
    """``(a'_{k,l})^2``, which is rational."""
    if not (0 <= k <= n and 0 <= l <= n - k):
        raise ValueError("need 0 <= k <= n and 0 <= l <= n - k")
    s = _exact_sigma(sigma)
    wk = phi_weight(s, q, n, k) * gaussian_binomial(n, k, q)
    wl = phi_weight(s, q, n, l) * gaussian_binomial(n, l, q)
    return (f_entry(n, s, q, k, l) / (1 + s)) ** 2 * wk / wl


def a_prime_entry(n: int, sigma, q, k: int, l: int, prec: int = DEFAULT_PRECISION):
    """``F[k,l]/(1+sigma) * sqrt(phi_k [n,k] / (phi_l [n,l]))`` in real arithmetic."""
    if not (0 <= k <= n and 0 <= l <= n - k):
        raise ValueError("need 0 <= k <= n and 0 <= l <= n - k")
    s = _exact_sigma(sigma)
    ctx = real_context(prec)
    wk = phi_weight(s, q, n, k) * gaussian_binomial(n, k, q)
    wl = phi_weight(s, q, n, l) * gaussian_binomial(n, l, q)
    return to_real(f_entry(n, s, q, k, l) / (1 + s), prec) * ctx.sqrt(to_real(wk / wl, prec))


@dataclass(frozen=True)
class BlockSpectrum:
    n: int
    q: int
    sigma: Fraction
    blocks: dict  # i -> tuple of (k, (sigma + G_kk) / (1 + sigma))
    shift_identity: bool

    def eigenvalues(self) -> list[Fraction]:
        return [ev for i in sorted(self.blocks) for _, ev in self.blocks[i]]

    def s_prime_eigenvalues(self) -> list[Fraction]:
        """As :meth:`eigenvalues`, with the ``Delta^{1/2} 1`` direction sent to 0 by the rank-one term."""
        vals = self.eigenvalues()
        vals[0] = Fraction(0)
        return vals

    def minimum(self) -> Fraction:
        return min(self.eigenvalues())

    def zeros(self) -> list[tuple[int, int]]:
        return [(i, k) for i in sorted(self.blocks) for k, ev in self.blocks[i] if ev == 0]

    def multiset(self) -> list[tuple[Fraction, int]]:
        """``(eigenvalue, multiplicity)`` pairs with block ``i`` repeated ``d_i`` times."""
        out = []
        for i, entries in sorted(self.blocks.items()):
            d = block_dim(self.n, i, self.q)
            out.extend((Fraction(0) if i == k == 0 else ev, d) for k, ev in entries)
        return out


def block_dim(n: int, i: int, q) -> int:
    """``d_i = [n, i] - [n, i-1]``."""
    return gaussian_binomial(n, i, q) - gaussian_binomial(n, i - 1, q)


def s_prime_eigenvalue(sigma, q, k: int) -> Fraction:
    s = _exact_sigma(sigma)
    return (s + (-1) ** k * s**k * _qpow(q, k * (k - 1))) / (1 + s)


def block_matrix(F: np.ndarray, n: int, q, i: int) -> np.ndarray:
    """``F_i`` on indices ``i..n-i`` by rescaling the entries of ``F``."""
    m = n - 2 * i + 1
    out = _obj_zeros(m)
    sign = -1 if i % 2 else 1
    for k in range(i, n - i + 1):
        for l in range(i, n - i + 1):
            factor = (sign * _qpow(q, _c2(i) - i * k)
                      * Fraction(q_pochhammer_qq(n - k - i, q) * q_pochhammer_qq(l, q))
                      / Fraction(q_pochhammer_qq(n - k, q) * q_pochhammer_qq(l - i, q)))
            out[k - i, l - i] = F[k, l] * factor
    return out


def shifted_block(n: int, sigma, q, i: int) -> np.ndarray:
    """``F_{n-2i; sigma q^{2i}}`` times ``(-1)^i sigma^i q^{i(i-1)}``."""
    s = _exact_sigma(sigma)
    base = f_by_formula(n - 2 * i, s * _qpow(q, 2 * i), q).F
    return base * ((-1) ** i * s**i * _qpow(q, i * (i - 1)))


def block_spectrum(n: int, sigma, q) -> BlockSpectrum:
    """Eigenvalues of ``S'`` on each block, with the shift identity checked entrywise.

    For block ``i`` the eigenvalues of ``A'`` are read from the diagonal of
    ``G`` at the shifted parameters ``(n - 2i, sigma q^{2i})`` and compared
    with the closed form; block 0 at ``k = 0`` carries the zero eigenvalue of
    the direction ``Delta^{1/2} 1``.
    """
    s = _exact_sigma(sigma)
    F = f_by_formula(n, s, q).F
    shift_ok = True
    blocks = {}
    for i in range(n // 2 + 1):
        Fi = block_matrix(F, n, q, i)
        Si = shifted_block(n, s, q, i)
        if not (Fi == Si).all():
            shift_ok = False
        scale = (-1) ** i * s**i * _qpow(q, i * (i - 1))
        diag = g_diagonal(n - 2 * i, s * _qpow(q, 2 * i), q)
        entries = []
        for h, g in enumerate(diag):
            k = h + i
            a_ev = g * scale / (1 + s)
            ev = s / (1 + s) + a_ev
            if ev != s_prime_eigenvalue(s, q, k):
                raise ArithmeticError(f"block {i}, k={k}: shifted eigenvalue disagrees with closed form")
            entries.append((k, ev))
        blocks[i] = tuple(entries)
    return BlockSpectrum(n, q, s, blocks, shift_ok)


def psd_threshold(n: int, q) -> Fraction:
    """``q^(-2 floor((n-1)/2) - 1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(1, q ** (2 * ((n - 1) // 2) + 1))


def psd_condition(n: int, sigma, q) -> bool:
    """``sigma^k q^(k(k-1)) <= sigma`` for every odd ``k <= n``."""
    if n < 1:
        raise ValueError("n must be positive")
    s = _exact_sigma(sigma)
    return all(s**k * _qpow(q, k * (k - 1)) <= s for k in range(1, n + 1, 2))


# ---------------------------------------------------------------- float layer


def theta_closed(n: int, q, i: int, k: int, l: int) -> float:
    """Eigenvalue of the disjointness matrix ``Wbar_{k,l}`` on the ``i``-th component."""
    if not (i <= k <= n - i and i <= l <= n - i):
        return 0.0
    sign = -1.0 if i % 2 else 1.0
    expo = _c2(i) + k * l - i * (k + l) / 2
    return (sign * float(q) ** expo * gaussian_binomial(n - k - i, l - i, q)
            * math.sqrt(gaussian_binomial(n - 2 * i, k - i, q) / gaussian_binomial(n - 2 * i, l - i, q)))


@dataclass(eq=False)
class FullCertificate:
    n: int
    q: int
    sigma: Fraction
    subspaces: list
    layers: list  # slice per dimension
    dims: np.ndarray  # pairwise intersection dimensions
    phi: np.ndarray
    basis: np.ndarray  # columns u_{i,r}^k
    labels: list  # (i, r, k) per column
    A: np.ndarray
    S: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kernel: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    @property
    def alpha(self) -> float:
        return float(self.sigma / (1 + self.sigma))

    @property
    def radius(self) -> float:
        return float(np.abs(self.eigenvalues).max())

    def W(self, k: int, l: int) -> np.ndarray:
        """Containment matrix between layers ``k`` and ``l``."""
        blk = self.dims[self.layers[k], self.layers[l]]
        return (blk == min(k, l)).astype(float)

    def Wbar(self, k: int, l: int) -> np.ndarray:
        """Trivial-intersection matrix between layers ``k`` and ``l``."""
        return (self.dims[self.layers[k], self.layers[l]] == 0).astype(float)

    def indicator(self, family: Family) -> np.ndarray:
        index = {x: j for j, x in enumerate(self.subspaces)}
        x = np.zeros(len(self.subspaces))
        for m in family.members:
            x[index[m]] = 1.0
        return x

    def block_vector(self, i: int, r: int, k: int) -> np.ndarray:
        return self.basis[:, self.labels.index((i, r, k))]


def _nullspace(M: np.ndarray) -> tuple[np.ndarray, float]:
    _, s, vh = np.linalg.svd(M)
    tol = NULL_RTOL * (s[0] if s.size else 1.0)
    rank = int((s > tol).sum())
    ns = vh[rank:].T
    resid = float(np.linalg.norm(M @ ns)) if ns.size else 0.0
    return ns, resid


def build_full_certificate(n: int, q: int, sigma, max_size: int = FULL_MAX_SIZE) -> FullCertificate:
    """Assemble ``S' = alpha I - Delta^{1/2} J Delta^{1/2} + A'`` on all of ``Omega_n``."""
    s = _exact_sigma(sigma)
    N = count_all(n, q)
    if N > max_size:
        raise ValueError(f"|Omega_{n}| = {N} exceeds the full-certificate limit {max_size}")
    subs = list(enumerate_all(n, q))
    starts = [0]
    for k in range(n + 1):
        starts.append(starts[-1] + gaussian_binomial(n, k, q))
    layers = [slice(starts[k], starts[k + 1]) for k in range(n + 1)]
    D = intersection_dims(subs)
    cert = FullCertificate(n, q, s, subs, layers, D, np.empty(0), np.empty(0), [],
                           np.empty(0), np.empty(0), np.empty(0), np.empty(0), np.empty(0))
    diag = cert.diagnostics
    phis = [phi_weight(s, q, n, k) for k in range(n + 1)]
    cert.phi = np.array([float(phis[x.dim]) for x in subs])

    # orthonormal block basis
    basis = np.zeros((N, N))
    labels = []
    col = 0
    null_resid = {}
    for i in range(n // 2 + 1):
        if i == 0:
            Ui = np.ones((1, 1))
        else:
            Ui, null_resid[i] = _nullspace(cert.W(i - 1, i))
        if Ui.shape[1] != block_dim(n, i, q):
            raise ArithmeticError(f"dim U_{i} = {Ui.shape[1]}, expected {block_dim(n, i, q)}")
        for r in range(Ui.shape[1]):
            for k in range(i, n - i + 1):
                c = q ** (-i * (k - i) / 2) / math.sqrt(gaussian_binomial(n - 2 * i, k - i, q))
                basis[layers[k], col] = c * (cert.W(k, i) @ Ui[:, r])
                labels.append((i, r, k))
                col += 1
    cert.basis, cert.labels = basis, labels
    diag["nullspace_residual"] = null_resid
    diag["orthonormality_error"] = float(np.abs(basis.T @ basis - np.eye(N)).max())

    # Wbar acts on each component by theta_i^{k,l}
    theta_err = 0.0
    for j, (i, r, l) in enumerate(labels):
        for k in range(i, n - i + 1):
            lhs = cert.Wbar(k, l) @ basis[layers[l], j]
            rhs = theta_closed(n, q, i, k, l) * basis[layers[k], labels.index((i, r, k))]
            theta_err = max(theta_err, float(np.abs(lhs - rhs).max()))
    diag["theta_error"] = theta_err
    diag["theta_symmetry_error"] = max(
        (abs(theta_closed(n, q, i, k, l) - theta_closed(n, q, i, l, k))
         for i in range(n // 2 + 1) for k in range(i, n - i + 1) for l in range(i, n - i + 1)),
        default=0.0)

    # A' from the coefficients a'_{k,l} / theta_0^{k,l}
    A = np.zeros((N, N))
    for k in range(n + 1):
        for l in range(n - k + 1):
            coef = float(a_prime_entry(n, s, q, k, l)) / theta_closed(n, q, 0, k, l)
            A[layers[k], layers[l]] = coef * cert.Wbar(k, l)
    cert.A = A
    diag["A_symmetry_error"] = float(np.abs(A - A.T).max())
    diag["A_offsupport_max"] = float(np.abs(A[D > 0]).max()) if (D > 0).any() else 0.0

    root = np.sqrt(cert.phi)
    S = cert.alpha * np.eye(N) - np.outer(root, root) + A
    S = (S + S.T) / 2
    cert.S = S
    w, V = np.linalg.eigh(S)
    cert.eigenvalues, cert.eigenvectors = w, V
    tol = PSD_RTOL * (1 + float(np.abs(w).max()))
    cert.kernel = V[:, np.abs(w) <= tol]
    diag["psd_tolerance"] = tol
    return cert


def expected_spectrum(n: int, sigma, q) -> np.ndarray:
    bs = block_spectrum(n, sigma, q)
    vals = []
    for ev, mult in bs.multiset():
        vals.extend([float(ev)] * mult)
    return np.sort(np.array(vals))


def spectrum_error(cert: FullCertificate) -> float:
    exp = expected_spectrum(cert.n, cert.sigma, cert.q)
    return float(np.abs(np.sort(cert.eigenvalues) - exp).max())


def is_psd(cert: FullCertificate) -> bool:
    return float(cert.eigenvalues.min()) >= -PSD_RTOL * (1 + cert.radius)


@dataclass
class KernelReport:
    dimension: int
    expected: int
    v0_residual: float
    v0_matches_block_form: float
    v0_prime_residual: float
    v_r_residual: float
    span_residual: float
    span_rank: int
    family_residuals: dict

    @property
    def ok(self) -> bool:
        tol = 1e-9
        return (self.dimension == self.expected == self.span_rank and self.v0_residual < tol
                and self.v0_prime_residual < tol and self.v_r_residual < tol
                and self.span_residual < 1e-7 and self.v0_matches_block_form < tol
                and all(v < tol for v in self.family_residuals.values()))


def kernel_analysis(cert: FullCertificate, families: Sequence[Family] = ()) -> KernelReport:
    """Compare the numerical kernel of ``S'`` with the explicit kernel vectors."""
    n, q, s = cert.n, cert.q, cert.sigma
    if n < 1 or not s < psd_threshold(n, q):
        raise ValueError("kernel analysis needs sigma strictly below the threshold")
    S = cert.S
    root = np.sqrt(cert.phi)
    dimsv = np.array([x.dim for x in cert.subspaces])
    gauss = np.array([gaussian_binomial(n, k, q) for k in range(n + 1)], dtype=float)
    phik = np.array([float(phi_weight(s, q, n, k)) for k in range(n + 1)])

    v0 = root.copy()
    v0_block = sum(math.sqrt(phik[k] * gauss[k]) * cert.block_vector(0, 0, k) for k in range(n + 1))
    nu = -float(gaussian_binomial(n, 1, q) * s) / float(1 + s)
    v0p = root * np.array([nu + gaussian_binomial(k, 1, q) for k in dimsv])
    vrs = []
    for r in range(block_dim(n, 1, q)):
        v = np.zeros(len(cert.subspaces))
        for k in range(1, n):
            eta = math.sqrt(phik[k] * gauss[k] * q**k * (q ** (n - k) - 1) * (q**k - 1))
            v += eta * cert.block_vector(1, r, k)
        vrs.append(v)

    def res(v):
        return float(np.linalg.norm(S @ v) / max(np.linalg.norm(v), 1e-300))

    span = np.column_stack([v0, v0p] + vrs)
    K = cert.kernel
    proj = span - K @ (K.T @ span) if K.size else span
    span_res = float(np.linalg.norm(proj, axis=0).max() / np.linalg.norm(span, axis=0).min())
    fam = {}
    for j, F in enumerate(families):
        y = root * cert.indicator(F)
        fam[j] = float(np.linalg.norm(S @ y))
    return KernelReport(
        dimension=K.shape[1],
        expected=gaussian_binomial(n, 1, q) + 1,
        v0_residual=res(v0),
        v0_matches_block_form=float(np.abs(v0 - v0_block).max()),
        v0_prime_residual=res(v0p),
        v_r_residual=max((res(v) for v in vrs), default=0.0),
        span_residual=span_res,
        span_rank=int(np.linalg.matrix_rank(span, tol=1e-8)),
        family_residuals=fam,
    )


@dataclass(frozen=True)
class DualityGap:
    measure: float
    gap: float
    trace_SX: float


def weak_duality_check(cert: FullCertificate, family: Family) -> DualityGap:
    """``alpha - tr(Delta J Delta X)`` for ``X`` built from ``family``, and ``tr(S X)``."""
    if not family.members:
        raise ValueError("family must be non-empty")
    if not is_t_intersecting(family, 1):
        raise ValueError("family is not intersecting")
    x = cert.indicator(family)
    mu = float(cert.phi @ x)
    y = np.sqrt(cert.phi) * x
    return DualityGap(mu, cert.alpha - mu, float(y @ cert.S @ y) / mu)


def hoffman_bound(lam1, lam_min):
    """``-lam_min / (lam1 - lam_min)``."""
    if not lam1 > lam_min:
        raise ValueError("need lambda_1 > lambda_min")
    return -lam_min / (lam1 - lam_min)


@dataclass(frozen=True)
class HoffmanReport:
    reflects_adjacency: bool
    eigvec_residual: float
    lambda1: float
    lambda_min: float
    bound: float
    exact_lambda1: Fraction
    exact_lambda_min: Fraction
    exact_bound: Fraction


def hoffman_pipeline(n: int, q: int, sigma, cert: FullCertificate | None = None) -> HoffmanReport:
    """Ratio bound from the weight matrix ``A'`` and its eigenvector ``Delta^{1/2} 1``."""
    s = _exact_sigma(sigma)
    cert = cert or build_full_certificate(n, q, s)
    A = cert.A
    w = np.sqrt(cert.phi)
    lam1 = float(w @ A @ w / (w @ w))
    resid = float(np.linalg.norm(A @ w - lam1 * w))
    # eigenvalues of A' on the orthogonal complement of w
    u = w / np.linalg.norm(w)
    Q, _ = np.linalg.qr(np.column_stack([u, np.eye(len(u))]))
    Q = Q[:, 1:]
    rest = np.linalg.eigvalsh(Q.T @ A @ Q)
    lam_min = float(rest.min())
    offsupport = cert.diagnostics["A_offsupport_max"]
    ex1 = 1 / (1 + s)
    bs = block_spectrum(n, s, q)
    a_eigs = [ev - s / (1 + s) for i in bs.blocks for k, ev in bs.blocks[i] if not i == k == 0]
    exmin = min(a_eigs)
    return HoffmanReport(
        reflects_adjacency=offsupport == 0.0 and resid < 1e-9,
        eigvec_residual=resid,
        lambda1=lam1,
        lambda_min=lam_min,
        bound=hoffman_bound(lam1, lam_min),
        exact_lambda1=ex1,
        exact_lambda_min=exmin,
        exact_bound=hoffman_bound(ex1, exmin),
    )
