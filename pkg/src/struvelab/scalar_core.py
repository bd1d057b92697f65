"""Scalar special functions: Gamma family, zeta family, polylogarithm,
generalized hypergeometric series and the confluent Fox-Wright function.

Conventions
-----------
Functions returning a bare ``float`` are accurate to a few ulps and carry no
error estimate.  Functions returning :class:`EvalResult` follow the stopping and
error-estimation rules of a :class:`NumericConfig`.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .ddouble import DD, dd_add_d, dd_from_decimal
from .errors import DivergenceError, DomainError, RangeError
from .routes import route

EPS = np.finfo(float).eps
EULER_GAMMA = 0.57721566490153286060651209008240243
LN_SQRT_2PI = 0.91893853320467274178032973640561764
SQRT_PI = 1.7724538509055160272981674833411452

PRECISION_TIERS = ("standard", "compensated")


# --------------------------------------------------------------------------
# configuration and results
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NumericConfig:
    """Tolerances and budgets shared by every evaluation routine."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_terms: int = 100_000
    precision_tier: str = "compensated"
    quad_budget: int = 4000

    def __post_init__(self):
        if not (self.rel_tol > 0):
            raise DomainError("rel_tol must be positive")
        if not (self.abs_tol >= 0):
            raise DomainError("abs_tol must be non-negative")
        if self.max_terms < 8:
            raise DomainError("max_terms must be at least 8")
        if self.quad_budget < 16:
            raise DomainError("quad_budget must be at least 16")
        if self.precision_tier not in PRECISION_TIERS:
            raise DomainError(f"precision_tier must be one of {PRECISION_TIERS}")

    @property
    def compensated(self) -> bool:
        return self.precision_tier == "compensated"

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_(self, **changes) -> "NumericConfig":
        return replace(self, **changes)


DEFAULT_CONFIG = NumericConfig()


def _cfg(cfg: NumericConfig | None) -> NumericConfig:
    return DEFAULT_CONFIG if cfg is None else cfg


@dataclass(frozen=True)
class EvalResult:
    """A value with an absolute error estimate, a work counter and a convergence flag."""

    value: float
    err_est: float
    work: int
    converged: bool

    @staticmethod
    def make(value, err_est, work, cfg: NumericConfig | None, ok: bool = True) -> "EvalResult":
        cfg = _cfg(cfg)
        value = float(value)
        err_est = float(abs(err_est))
        good = bool(ok) and math.isfinite(value) and err_est <= cfg.target(value)
        return EvalResult(value, err_est, int(work), good)

    def __float__(self):
        return self.value


# --------------------------------------------------------------------------
# Bernoulli numbers and high-precision log-Gamma
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m with B_1 = -1/2."""
    table = [Fraction(1)]
    for k in range(1, m + 1):
        acc = Fraction(0)
        for j in range(k):
            acc += math.comb(k + 1, j) * table[j]
        table.append(-acc / (k + 1))
    return table[m]


# B_{2k} as floats, k = 0..40
_B2 = [float(bernoulli(2 * k)) for k in range(41)]
# B_{2k}/(2k)!
_B2_OVER_FACT = [float(bernoulli(2 * k) / math.factorial(2 * k)) for k in range(41)]

_PI_STR = "3.14159265358979323846264338327950288419716939937510582097494459230781640628"
_DEC_PREC = 60


def _dec_ln_sqrt_2pi() -> decimal.Decimal:
    with decimal.localcontext() as ctx:
        ctx.prec = _DEC_PREC
        return (2 * decimal.Decimal(_PI_STR)).ln() / 2


def lgamma_decimal(x: decimal.Decimal) -> decimal.Decimal:
    """ln Gamma(x) for x > 0 to roughly 45 significant digits."""
    if x <= 0:
        raise DomainError("lgamma_decimal requires x > 0")
    with decimal.localcontext() as ctx:
        ctx.prec = _DEC_PREC
        acc = decimal.Decimal(1)
        while x < 40:
            acc *= x
            x += 1
        s = (x - decimal.Decimal("0.5")) * x.ln() - x + _dec_ln_sqrt_2pi()
        x2 = x * x
        xp = x
        for k in range(1, 22):
            b = bernoulli(2 * k)
            s += decimal.Decimal(b.numerator) / decimal.Decimal(b.denominator) / (2 * k * (2 * k - 1) * xp)
            xp *= x2
        return s - acc.ln()


@lru_cache(maxsize=4096)
def gamma_quotient_dd(nu: float) -> tuple[float, float]:
    """Gamma(nu+1) / (Gamma(3/2) Gamma(nu+3/2)) as a double-double pair.

    This is the ratio of the leading odd and even power-series coefficients of
    the modified Struve and Bessel functions, needed beyond double precision by
    the cancellation-free difference evaluation.
    """
    d = decimal.Decimal(nu)
    half = decimal.Decimal("0.5")
    with decimal.localcontext() as ctx:
        ctx.prec = _DEC_PREC
        lg = lgamma_decimal(d + 1) - lgamma_decimal(d + 1 + half) - lgamma_decimal(1 + half)
        return dd_from_decimal(lg.exp())


# --------------------------------------------------------------------------
# real Gamma
# --------------------------------------------------------------------------


def _hurwitz_em(s: float, a: float, n_direct: int = 12, k_terms: int = 14) -> tuple[float, float]:
    """Euler-Maclaurin Hurwitz zeta for real s != 1; returns (value, tail_term)."""
    n = np.arange(n_direct, dtype=float) + a
    head = math.fsum((n ** (-s)).tolist())
    big = n_direct + a
    tail = big ** (1.0 - s) / (s - 1.0) + 0.5 * big ** (-s)
    poch = s  # (s)_{2k-1}
    power = big ** (-s - 1.0)
    last = 0.0
    for k in range(1, k_terms + 1):
        term = _B2_OVER_FACT[k] * poch * power
        tail += term
        last = term
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        power /= big * big
    return head + tail, abs(last)


# zeta(k) - 1 for k = 2..60, used by the log-Gamma Taylor kernel
_ZETA_M1 = [0.0, 0.0] + [_hurwitz_em(float(k), 2.0)[0] for k in range(2, 61)]


def _lgamma1p(z: float) -> float:
    """ln Gamma(1+z) for |z| <= 1/2, relative accuracy preserved near z = 0."""
    acc = 0.0
    zk = z * z
    terms = []
    for k in range(2, 61):
        t = _ZETA_M1[k] * zk / k
        terms.append(t if k % 2 == 0 else -t)
        if abs(t) < 1e-18 * abs(z):
            break
        zk *= z
    acc = math.fsum(reversed(terms))
    return acc - math.log1p(z) + z * (1.0 - EULER_GAMMA)


def _lgamma_stirling(x: float) -> float:
    s = (x - 0.5) * math.log(x) - x + LN_SQRT_2PI
    x2 = x * x
    xp = x
    corr = 0.0
    for k in range(1, 10):
        corr += _B2[k] / (2 * k * (2 * k - 1) * xp)
        xp *= x2
    return s + corr


def gamma_ln(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise DomainError(f"gamma_ln requires finite x > 0, got {x}")
    if x < 0.5:
        return _lgamma1p(x) - math.log(x)
    if x <= 1.5:
        return _lgamma1p(x - 1.0)
    if x < 2.5:
        z = x - 2.0
        return _lgamma1p(z) + math.log1p(z)
    if x < 10.0:
        k = int(math.floor(x - 1.5))
        y = x - k
        prod = 1.0
        for j in range(k):
            prod *= y + j
        return gamma_ln(y) + math.log(prod)
    return _lgamma_stirling(x)


def sinpi(x: float) -> float:
    """sin(pi x) with exact zeros at the integers."""
    r = math.fmod(x, 2.0)
    if r < 0:
        r += 2.0
    sign = 1.0
    if r >= 1.0:
        r -= 1.0
        sign = -1.0
    if r > 0.5:
        r = 1.0 - r
    return sign * math.sin(math.pi * r)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def gamma_ln_abs(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign Gamma(x)) for real x off the poles."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise DomainError(f"Gamma has a pole at {x}")
    if x > 0:
        return gamma_ln(x), 1.0
    s = sinpi(x)
    return math.log(math.pi) - math.log(abs(s)) - gamma_ln(1.0 - x), math.copysign(1.0, s)


def gamma(x: float) -> float:
    """Gamma(x) for real x that is not a non-positive integer."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("gamma requires finite input")
    if _is_nonpositive_integer(x):
        raise DomainError(f"Gamma has a pole at {x}")
    if x < 0:
        return math.pi / (sinpi(x) * gamma(1.0 - x))
    if x > 171.6:
        raise RangeError("Gamma overflows")
    if 2.5 <= x <= 30.0:
        k = int(math.floor(x - 1.5))
        y = x - k
        prod = 1.0
        for j in range(k):
            prod *= y + j
        return math.exp(gamma_ln(y)) * prod
    return math.exp(gamma_ln(x))


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpositive_integer(x):
        return 0.0
    lg, sg = gamma_ln_abs(x)
    return sg * math.exp(-lg)


def pochhammer(lam: float, n: int) -> float:
    """Rising factorial (lam)_n for integer n >= 0."""
    if n < 0 or int(n) != n:
        raise DomainError("pochhammer requires a non-negative integer n")
    n = int(n)
    lam = float(lam)
    if n == 0:
        return 1.0
    if _is_nonpositive_integer(lam):
        if n > -lam:
            return 0.0
        return math.prod(lam + j for j in range(n))
    if n <= 64:
        return math.prod(lam + j for j in range(n))
    if _is_nonpositive_integer(lam + n):
        raise DomainError("pochhammer ratio undefined")
    la, sa = gamma_ln_abs(lam + n)
    lb, sb = gamma_ln_abs(lam)
    return sa * sb * math.exp(la - lb)


def pochhammer_real(lam: float, shift: float) -> float:
    """Gamma(lam+shift)/Gamma(lam) for real shift; used with non-integer strides."""
    if float(shift).is_integer() and shift >= 0:
        return pochhammer(lam, int(shift))
    if _is_nonpositive_integer(lam + shift):
        raise DomainError("pochhammer_real numerator at a pole")
    if _is_nonpositive_integer(lam):
        return 0.0
    la, sa = gamma_ln_abs(lam + shift)
    lb, sb = gamma_ln_abs(lam)
    return sa * sb * math.exp(la - lb)


# --------------------------------------------------------------------------
# complex Gamma (Lanczos g = 7, n = 9)
# --------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])


def lgamma_complex(z):
    """A branch of ln Gamma(z) for complex z (vectorized); exp() of it is Gamma(z)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z.real < -60):
        raise DomainError("lgamma_complex supports Re z >= -60")
    shift = np.where(z.real < 0.5, np.ceil(0.5 - z.real), 0.0)
    kmax = int(shift.max()) if shift.size else 0
    corr = np.zeros_like(z)
    w = z.copy()
    for j in range(kmax):
        m = shift > j
        corr = corr + np.where(m, np.log(np.where(m, w, 1.0)), 0.0)
        w = np.where(m, w + 1.0, w)
    zz = w - 1.0
    acc = np.full_like(zz, _LANCZOS[0])
    for i in range(1, 9):
        acc = acc + _LANCZOS[i] / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    out = LN_SQRT_2PI + (zz + 0.5) * np.log(t) - t + np.log(acc)
    return out - corr


def gamma_complex(z):
    return np.exp(lgamma_complex(z))


# --------------------------------------------------------------------------
# zeta family
# --------------------------------------------------------------------------


@route("hurwitz_zeta")
def hurwitz_zeta(s: float, a: float) -> float:
    """zeta(s, a) = sum_{n>=0} (n+a)^{-s} for real s > 1, a > 0."""
    if not s > 1:
        raise DomainError("hurwitz_zeta requires s > 1")
    if not a > 0:
        raise DomainError("hurwitz_zeta requires a > 0")
    n_direct = 12 + int(abs(s) // 2)
    val, _ = _hurwitz_em(float(s), float(a), n_direct=n_direct)
    return val


@route("zeta")
def zeta(s: float) -> float:
    """Riemann zeta for real s > 1."""
    s = float(s)
    if not s > 1:
        raise DomainError(f"zeta requires s > 1, got {s}")
    if s > 60:
        return 1.0 + 2.0 ** -s + 3.0 ** -s
    return hurwitz_zeta(s, 1.0)


def _boole_coefficient(k: int) -> float:
    # (2^{2k} - 1) B_{2k} / (2k)!
    return float((2 ** (2 * k) - 1) * bernoulli(2 * k) / math.factorial(2 * k))


_BOOLE = [0.0] + [_boole_coefficient(k) for k in range(1, 25)]


def alt_hurwitz(s: float, a: float, n_direct: int = 24, k_terms: int = 16) -> tuple[float, float]:
    """sum_{n>=0} (-1)^n (n+a)^{-s} for real s > 0, a > 0.

    Direct head followed by the Boole (Euler) alternating tail expansion.
    Returns (value, error estimate).
    """
    if not s > 0:
        raise DomainError("alternating Hurwitz series requires s > 0")
    if not a > 0:
        raise DomainError("alternating Hurwitz series requires a > 0")
    n = np.arange(n_direct, dtype=float)
    signs = np.where(n % 2 == 0, 1.0, -1.0)
    head = math.fsum((signs * (n + a) ** (-s)).tolist())
    big = a + n_direct
    tail = 0.5 * big ** (-s)
    poch = s
    power = big ** (-s - 1.0)
    last = 0.0
    for k in range(1, k_terms + 1):
        term = _BOOLE[k] * poch * power
        tail += term
        last = term
        poch *= (s + 2 * k - 1) * (s + 2 * k)
        power /= big * big
    sign_tail = 1.0 if n_direct % 2 == 0 else -1.0
    val = head + sign_tail * tail
    return val, abs(last) + 4 * EPS * abs(val)


@route("eta")
def eta(s: float) -> float:
    """Dirichlet eta for real s > 0."""
    s = float(s)
    if not s > 0:
        raise DomainError(f"eta requires s > 0, got {s}")
    if s == 1.0:
        return math.log(2.0)
    if s > 1:
        # 1 - 2^{1-s} without cancellation near s = 1
        return -math.expm1((1.0 - s) * math.log(2.0)) * zeta(s)
    return alt_hurwitz(s, 1.0)[0]


def zeta_result(s: float, cfg: NumericConfig | None = None) -> EvalResult:
    v = zeta(s)
    return EvalResult.make(v, 8 * EPS * abs(v), 26, cfg)


def eta_result(s: float, cfg: NumericConfig | None = None) -> EvalResult:
    v = eta(s)
    return EvalResult.make(v, 8 * EPS * abs(v), 40, cfg)


@route("zeta_complex")
def zeta_complex(s):
    """Riemann zeta for complex s != 1 with Re s > -10 (vectorized Euler-Maclaurin)."""
    s = np.asarray(s, dtype=complex)
    if np.any(s.real <= -10):
        raise DomainError("zeta_complex supports Re s > -10")
    if np.any(np.abs(s - 1.0) == 0):
        raise DomainError("zeta has a pole at s = 1")
    big = 20 + int(0.5 * float(np.max(np.abs(s)))) if s.size else 20
    n = np.arange(1, big, dtype=float)
    head = np.sum(np.exp(-np.multiply.outer(s, np.log(n))), axis=-1)
    nb = float(big)
    lnb = math.log(nb)
    tail = np.exp((1.0 - s) * lnb) / (s - 1.0) + 0.5 * np.exp(-s * lnb)
    poch = s.copy()
    power = np.exp((-s - 1.0) * lnb)
    for k in range(1, 19):
        tail = tail + _B2_OVER_FACT[k] * poch * power
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
        power = power / (nb * nb)
    return head + tail


# --------------------------------------------------------------------------
# polylogarithm
# --------------------------------------------------------------------------


def _polylog_series(alpha: float, z: float, cfg: NumericConfig) -> EvalResult:
    az = abs(z)
    thr = min(1e-3 * cfg.rel_tol, EPS)
    s_hi, s_lo = 0.0, 0.0
    zn = 1.0
    n = 0
    bound = math.inf
    while n < cfg.max_terms:
        n += 1
        zn *= z
        t = zn * n ** (-alpha)
        s_hi, s_lo = dd_add_d(s_hi, s_lo, t)
        nxt = az ** (n + 1) * (n + 1) ** (-alpha)
        bound = nxt / (1.0 - az) if az < 1 else math.inf
        if bound <= max(cfg.abs_tol * 1e-3, thr * abs(s_hi)) or t == 0.0:
            break
    val = s_hi + s_lo
    return EvalResult.make(val, bound + 4 * EPS * abs(val), n, cfg, ok=math.isfinite(bound))


def _polylog_integral(alpha: float, z: float, cfg: NumericConfig) -> EvalResult:
    from .quadrature import EndpointNote, QuadratureProblem, SemiInfiniteDecay, integrate_semi_infinite_decay

    if z == 1.0:
        def f(t):
            return t ** (alpha - 1.0) * np.exp(-t) / (-np.expm1(-t))
        origin = alpha - 2.0
    else:
        def f(t):
            e = np.exp(-t)
            return t ** (alpha - 1.0) * e / (1.0 - z * e)
        origin = alpha - 1.0
    prob = QuadratureProblem(
        f,
        SemiInfiniteDecay(0.0, kind="exponential", rate=1.0),
        (EndpointNote("a", "algebraic", exponent=origin),),
    )
    sub = cfg.with_(rel_tol=cfg.rel_tol * 0.1, abs_tol=cfg.abs_tol * 0.1)
    r = integrate_semi_infinite_decay(prob, sub)
    g = gamma(alpha)
    val = z * r.value / g
    err = abs(z) * r.err_est / g + 4 * EPS * abs(val)
    return EvalResult.make(val, err, r.work, cfg, ok=r.converged)


@route("polylog")
def polylog(alpha: float, z: float, cfg: NumericConfig | None = None, route: str | None = None) -> EvalResult:
    """Li_alpha(z) for alpha > 0 and real |z| <= 1.

    ``route`` selects ``"series"`` or ``"integral"``; by default the power
    series is used for |z| <= 3/4 and the Bose-type integral otherwise.
    """
    cfg = _cfg(cfg)
    alpha = float(alpha)
    z = float(z)
    if not alpha > 0:
        raise DomainError("polylog requires alpha > 0")
    if abs(z) > 1:
        raise DomainError("polylog requires |z| <= 1")
    if z == 1.0 and alpha <= 1:
        raise DivergenceError("Li_alpha(1) diverges for alpha <= 1")
    if z == 0.0:
        return EvalResult.make(0.0, 0.0, 0, cfg)
    if route is None:
        if z == 1.0:
            v = zeta(alpha)
            return EvalResult.make(v, 8 * EPS * v, 26, cfg)
        if z == -1.0:
            v = -eta(alpha)
            return EvalResult.make(v, 8 * EPS * abs(v), 40, cfg)
        route = "series" if abs(z) <= 0.75 else "integral"
    if route == "series":
        return _polylog_series(alpha, z, cfg)
    if route == "integral":
        return _polylog_integral(alpha, z, cfg)
    raise DomainError(f"unknown polylog route {route!r}")


# --------------------------------------------------------------------------
# hypergeometric series
# --------------------------------------------------------------------------


def _series_sum(next_ratio, cfg: NumericConfig, first: float = 1.0) -> EvalResult:
    """Sum terms t_0 = first, t_{n+1} = t_n * next_ratio(n) with the three-small-terms rule."""
    thr = 1e-2 * cfg.rel_tol
    term = first
    s_hi, s_lo = first, 0.0
    plain = first
    biggest = abs(first)
    small = 0
    n = 0
    terminated = False
    while n < cfg.max_terms:
        term *= next_ratio(n)
        n += 1
        if term == 0.0:
            terminated = True
            break
        if not math.isfinite(term):
            raise RangeError("series term overflow")
        s_hi, s_lo = dd_add_d(s_hi, s_lo, term)
        plain += term
        biggest = max(biggest, abs(term))
        total = s_hi + s_lo
        if abs(term) <= max(thr * abs(total), 1e-3 * cfg.abs_tol):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    total = (s_hi + s_lo) if cfg.compensated else plain
    rounding = (4 * EPS * biggest) if cfg.compensated else (EPS * n * biggest)
    trunc = 0.0 if terminated else 10 * abs(term)
    ok = terminated or small >= 3
    return EvalResult.make(total, trunc + rounding + EPS * abs(total), n, cfg, ok=ok)


@route("hyp_pFq")
def hyp_pFq(upper: Sequence[float], lower: Sequence[float], z: float, cfg: NumericConfig | None = None) -> EvalResult:
    """Generalized hypergeometric series pFq(upper; lower; z) by forward recurrence."""
    cfg = _cfg(cfg)
    a = [float(v) for v in upper]
    b = [float(v) for v in lower]
    z = float(z)
    for bj in b:
        if _is_nonpositive_integer(bj):
            # a terminating numerator before the pole keeps the series finite
            cut = [-ai for ai in a if _is_nonpositive_integer(ai)]
            if not cut or min(cut) >= -bj:
                raise DomainError(f"lower parameter {bj} is a pole")
    p, q = len(a), len(b)
    terminating = any(_is_nonpositive_integer(ai) for ai in a)
    if p > q + 1 and not terminating:
        raise DivergenceError("pFq with p > q+1 diverges")
    if p == q + 1 and abs(z) >= 1 and not terminating:
        raise DivergenceError("pFq with p = q+1 needs |z| < 1")
    if z == 0.0:
        return EvalResult.make(1.0, 0.0, 0, cfg)

    def ratio(n):
        num = 1.0
        for ai in a:
            num *= ai + n
        den = float(n + 1)
        for bj in b:
            den *= bj + n
        return num / den * z

    return _series_sum(ratio, cfg)


@route("hyp_pFq")
def hyp_pFq_array(upper: Sequence[float], lower: Sequence[float], z, cfg: NumericConfig | None = None):
    """Vectorized pFq over an array of arguments (entire case p <= q).

    Returns (values, error estimates); same term recurrence and stopping rule
    as :func:`hyp_pFq`, applied to the whole array.
    """
    cfg = _cfg(cfg)
    a = [float(v) for v in upper]
    b = [float(v) for v in lower]
    if len(a) > len(b):
        raise DomainError("hyp_pFq_array handles the entire case p <= q only")
    for bj in b:
        if _is_nonpositive_integer(bj):
            raise DomainError(f"lower parameter {bj} is a pole")
    z = np.asarray(z, dtype=float)
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    biggest = np.ones_like(z)
    small = np.zeros(z.shape, dtype=int)
    thr = 1e-2 * cfg.rel_tol
    n = 0
    while n < cfg.max_terms:
        num = 1.0
        for ai in a:
            num *= ai + n
        den = float(n + 1)
        for bj in b:
            den *= bj + n
        term = term * (num / den) * z
        n += 1
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        biggest = np.maximum(biggest, np.abs(term))
        tiny = np.abs(term) <= np.maximum(thr * np.abs(total), 1e-3 * cfg.abs_tol)
        small = np.where(tiny, small + 1, 0)
        if np.all(small >= 3) or np.all(term == 0):
            break
    err = 10 * np.abs(term) + 4 * EPS * biggest + EPS * np.abs(total)
    return total, err


@route("hyp2f1")
def hyp2f1(a: float, b: float, c: float, z: float, cfg: NumericConfig | None = None) -> EvalResult:
    """Gauss 2F1 on -1 <= z <= 1 using the 1-z connection formula near z = 1."""
    cfg = _cfg(cfg)
    if not -1.0 <= z <= 1.0:
        raise DomainError("hyp2f1 is implemented for -1 <= z <= 1")
    terminating = _is_nonpositive_integer(a) or _is_nonpositive_integer(b)
    if terminating or abs(z) <= 0.5:
        return hyp_pFq([a, b], [c], z, cfg)
    if z < 0:
        # Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1))
        w = z / (z - 1.0)
        r = hyp2f1(a, c - b, c, w, cfg)
        f = (1.0 - z) ** (-a)
        return EvalResult.make(f * r.value, f * r.err_est, r.work, cfg, ok=r.converged)
    d = c - a - b
    if float(d).is_integer():
        raise DomainError("hyp2f1 near z = 1 needs non-integer c - a - b")
    if z == 1.0:
        if d <= 0:
            raise DivergenceError("2F1 at z = 1 diverges for c - a - b <= 0")
        v = gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b)
        return EvalResult.make(v, 8 * EPS * abs(v), 4, cfg)
    w = 1.0 - z
    sub = cfg.with_(rel_tol=cfg.rel_tol * 0.1)
    c1 = gamma(c) * gamma(d) * rgamma(c - a) * rgamma(c - b)
    c2 = gamma(c) * gamma(-d) * rgamma(a) * rgamma(b)
    f1 = hyp_pFq([a, b], [1.0 - d], w, sub) if c1 != 0.0 else EvalResult(0.0, 0.0, 0, True)
    f2 = hyp_pFq([c - a, c - b], [1.0 + d], w, sub) if c2 != 0.0 else EvalResult(0.0, 0.0, 0, True)
    wd = w ** d
    val = c1 * f1.value + c2 * wd * f2.value
    err = abs(c1) * f1.err_est + abs(c2 * wd) * f2.err_est + 8 * EPS * (abs(c1 * f1.value) + abs(c2 * wd * f2.value))
    return EvalResult.make(val, err, f1.work + f2.work, cfg, ok=f1.converged and f2.converged)


@route("fox_wright")
def fox_wright_1psi1(a: float, rho: float, b: float, sigma: float, z: float,
                     cfg: NumericConfig | None = None) -> EvalResult:
    """Normalized confluent Fox-Wright function sum_n (a)_{rho n} / (b)_{sigma n} z^n / n!."""
    cfg = _cfg(cfg)
    if not (rho > 0 and sigma > 0):
        raise DomainError("rho and sigma must be positive")
    delta = sigma - rho + 1.0
    if delta < 0:
        raise DivergenceError("Fox-Wright series diverges for sigma - rho + 1 < 0")
    if delta == 0:
        nabla = rho ** (-rho) * sigma ** sigma
        if abs(z) >= nabla:
            raise DivergenceError("Fox-Wright series needs |z| < rho^-rho sigma^sigma when the excess vanishes")
    if z == 0.0:
        return EvalResult.make(1.0, 0.0, 0, cfg)
    la0, sa0 = gamma_ln_abs(a) if not _is_nonpositive_integer(a) else (0.0, 1.0)
    lb0, sb0 = gamma_ln_abs(b) if not _is_nonpositive_integer(b) else (0.0, 1.0)
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        raise DomainError("Fox-Wright parameters a, b must avoid Gamma poles")
    lz = math.log(abs(z))
    sz = math.copysign(1.0, z)

    def term(n):
        xa = a + rho * n
        xb = b + sigma * n
        if _is_nonpositive_integer(xb):
            return 0.0
        if _is_nonpositive_integer(xa):
            raise DomainError("Fox-Wright numerator hits a Gamma pole")
        la, sa = gamma_ln_abs(xa)
        lb, sb = gamma_ln_abs(xb)
        lg = la - la0 - (lb - lb0) + n * lz - gamma_ln(n + 1.0)
        return sa * sa0 * sb * sb0 * (sz ** n) * math.exp(lg)

    thr = 1e-2 * cfg.rel_tol
    s_hi, s_lo = 1.0, 0.0
    biggest = 1.0
    small = 0
    n = 0
    t = 1.0
    while n < cfg.max_terms:
        n += 1
        t = term(n)
        s_hi, s_lo = dd_add_d(s_hi, s_lo, t)
        biggest = max(biggest, abs(t))
        if abs(t) <= max(thr * abs(s_hi), 1e-3 * cfg.abs_tol):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    total = s_hi + s_lo
    err = 10 * abs(t) + 16 * EPS * biggest
    return EvalResult.make(total, err, n, cfg, ok=small >= 3)


__all__ = [
    "DD",
    "DEFAULT_CONFIG",
    "EvalResult",
    "NumericConfig",
    "alt_hurwitz",
    "bernoulli",
    "eta",
    "fox_wright_1psi1",
    "gamma",
    "gamma_complex",
    "gamma_ln",
    "gamma_ln_abs",
    "gamma_quotient_dd",
    "hurwitz_zeta",
    "hyp2f1",
    "hyp_pFq",
    "hyp_pFq_array",
    "lgamma_complex",
    "pochhammer",
    "pochhammer_real",
    "polylog",
    "rgamma",
    "sinpi",
    "zeta",
    "zeta_complex",
]
