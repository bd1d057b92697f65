"""Series engines built on D_nu = I_nu - L_nu and the scalar kernels.

* Dirichlet series: direct summation and the Cahen-Laplace route through the
  counting sum of the operator d_x a = a(x) + {x} a'(x);
* Neumann expansions of L_nu in terms of I_nu of shifted order;
* Schloemilch series T_{nu,mu}(x) = sum (+-1)^{n-1} n^-mu D_nu(n x) and the
  Upsilon series sum (+-1)^{n-1} (n^beta - 1) n^-mu D_nu(n x);
* Kapteyn series sum alpha_n n^-mu D_{nu n}(n x) and its Gegenbauer integral;
* Mathieu series S, S~ and the complete Omega function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .acceleration import levin_u, richardson
from .bessel_struve import CylinderKind, Z_DD, _asym_coeffs, cylinder_eval, d_nu_arrays
from .errors import DivergenceError, DomainError, RangeError, UsageError
from .quadrature import (
    EndpointNote,
    Finite,
    QuadratureProblem,
    SemiInfiniteDecay,
    _adaptive,
    _gk15,
    integrate_finite,
    integrate_semi_infinite_decay,
)
from .routes import route
from .scalar_core import (
    EPS,
    SQRT_PI,
    EvalResult,
    NumericConfig,
    _BOOLE,
    _cfg,
    alt_hurwitz,
    bernoulli,
    gamma_ln,
    hurwitz_zeta,
)

# --------------------------------------------------------------------------
# coefficient sequences and the fractional-part operator
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CoefficientSequence:
    """alpha_n with an optional smooth extension alpha(s) and derivative alpha'(s).

    ``eval_at_integer`` accepts an integer array and returns a float array.
    ``growth_tag`` bounds limsup |alpha_n|^(1/n).
    """

    eval_at_integer: Callable
    smooth_extension: Callable | None = None
    derivative: Callable | None = None
    growth_tag: float = 1.0

    def at(self, n) -> np.ndarray:
        n = np.asarray(n)
        return np.asarray(self.eval_at_integer(n), dtype=float) * np.ones(n.shape)

    def smooth(self, s) -> np.ndarray:
        if self.smooth_extension is None:
            raise UsageError("coefficient sequence has no smooth extension")
        s = np.asarray(s, dtype=float)
        return np.asarray(self.smooth_extension(s), dtype=float) * np.ones(s.shape)

    def smooth_derivative(self, s) -> np.ndarray:
        if self.derivative is None:
            raise UsageError("coefficient sequence has no derivative of its extension")
        s = np.asarray(s, dtype=float)
        return np.asarray(self.derivative(s), dtype=float) * np.ones(s.shape)

    def consistent(self, n_max: int = 20, rtol: float = 1e-12) -> bool:
        """True when the smooth extension reproduces the integer values."""
        if self.smooth_extension is None:
            return True
        n = np.arange(1, n_max + 1)
        a = self.at(n)
        b = self.smooth(n.astype(float))
        return bool(np.all(np.abs(a - b) <= rtol * np.maximum(1.0, np.abs(a))))


def constant_sequence(c: float = 1.0) -> CoefficientSequence:
    return CoefficientSequence(
        lambda n: np.full(np.shape(n), float(c)),
        lambda s: np.full(np.shape(s), float(c)),
        lambda s: np.zeros(np.shape(s)),
        growth_tag=1.0,
    )


def alternating_sequence() -> CoefficientSequence:
    """(-1)^(n-1), extended smoothly as cos(pi (s-1))."""
    return CoefficientSequence(
        lambda n: np.where(np.asarray(n) % 2 == 1, 1.0, -1.0),
        lambda s: np.cos(np.pi * (s - 1.0)),
        lambda s: -np.pi * np.sin(np.pi * (s - 1.0)),
        growth_tag=1.0,
    )


def power_sequence(q: float) -> CoefficientSequence:
    """n^q."""
    return CoefficientSequence(
        lambda n: np.asarray(n, dtype=float) ** q,
        lambda s: s ** q,
        lambda s: q * s ** (q - 1.0),
        growth_tag=1.0,
    )


def log_sequence() -> CoefficientSequence:
    """lambda_n = ln n with inverse exp."""
    return CoefficientSequence(
        lambda n: np.log(np.asarray(n, dtype=float)),
        np.log,
        lambda s: 1.0 / s,
        growth_tag=1.0,
    )


def frac_operator(a: Callable, da: Callable, x):
    """d_x a = a(x) + {x} a'(x)."""
    x = np.asarray(x, dtype=float)
    return a(x) + (x - np.floor(x)) * da(x)


# --------------------------------------------------------------------------
# Dirichlet series
# --------------------------------------------------------------------------


def _alternates(t: np.ndarray) -> bool:
    return bool(t.size > 2 and np.all(t[:-1] * t[1:] < 0))


def _averaged_tail(partial: np.ndarray, depth: int = 10):
    """Repeated averaging of the last partial sums of an alternating series."""
    cur = np.asarray(partial[-(depth + 2):], dtype=float)
    prev_est = cur[-1]
    err = abs(cur[-1] - cur[-2])
    while cur.size > 2:
        cur = 0.5 * (cur[1:] + cur[:-1])
        err = abs(cur[-1] - prev_est)
        prev_est = cur[-1]
    return float(cur[-1]), err


@route("dirichlet_direct")
def dirichlet_direct(a: CoefficientSequence, lam: CoefficientSequence, r: float,
                     cfg: NumericConfig | None = None, n_terms: int | None = None) -> EvalResult:
    """sum_{n>=1} a_n exp(-r lambda_n) by direct summation.

    Alternating tails are finished by repeated averaging, eventually monotone
    tails by a fitted power-law remainder; the error estimate covers the tail model.
    """
    cfg = _cfg(cfg)
    if not r > 0:
        raise DomainError("Dirichlet series needs r > 0")
    if a.growth_tag > 1.0:
        # coefficients growing geometrically against exp(-r lambda_n) with lambda_n = ln n diverge
        probe = np.array([1e3, 2e3])
        if np.any(~np.isfinite(np.exp(-r * lam.at(probe.astype(int))))):
            raise DivergenceError("Dirichlet series terms overflow")
    N = int(n_terms or min(cfg.max_terms, 100_000))
    n = np.arange(1, N + 1)
    t = a.at(n) * np.exp(-r * lam.at(n))
    if not np.all(np.isfinite(t)):
        raise DivergenceError("Dirichlet series terms are not finite")
    tail = t[-200:]
    if np.max(np.abs(tail[-20:])) > np.max(np.abs(tail[:20])) * 1.0000001 and np.max(np.abs(tail)) > 0:
        raise DivergenceError("Dirichlet series terms do not decay")
    head = math.fsum(t.tolist())
    if _alternates(tail):
        partial = head - np.cumsum(t[::-1][:14])[::-1] + t[-14:]
        v, e = _averaged_tail(partial, 12)
        err = e + 16 * EPS * float(np.sum(np.abs(t[-1000:]))) + 8 * EPS * abs(v)
        return EvalResult.make(v, err, N, cfg, ok=True)
    if np.all(tail == 0):
        return EvalResult.make(head, 4 * EPS * abs(head), N, cfg)
    # power-law remainder t_n ~ C n^{-p}
    t1, t2 = abs(t[N // 2 - 1]), abs(t[N - 1])
    if t1 == 0 or t2 == 0:
        return EvalResult.make(head, abs(t[-1]) * N, N, cfg, ok=False)
    p = math.log(t1 / t2) / math.log(N / (N // 2))
    if not p > 1:
        raise DivergenceError("Dirichlet series tail decays too slowly to converge")
    sign = math.copysign(1.0, t[-1])
    # Euler-Maclaurin for C n^{-p}: sum_{n>N} = C [N^{1-p}/(p-1) - N^{-p}/2 + p N^{-p-1}/12]
    C = t2 * N ** p
    rem = sign * C * (N ** (1 - p) / (p - 1) - 0.5 * N ** -p + p * N ** (-p - 1) / 12.0)
    # model error from the drift of the fitted exponent across the last decade
    t0 = abs(t[N // 10 - 1])
    p0 = math.log(t0 / t1) / math.log((N // 2) / (N // 10))
    err = abs(rem) * min(1.0, abs(p - p0) * (1.0 + math.log(N))) + 16 * EPS * abs(head)
    v = head + rem
    return EvalResult.make(v, err, N, cfg, ok=True)


@route("cahen_laplace")
def cahen_laplace(a: CoefficientSequence, lam_inverse: Callable, r: float,
                  cfg: NumericConfig | None = None, lam: Callable | None = None,
                  cells: int = 80) -> EvalResult:
    """r int_0^inf exp(-r t) A(t) dt with the counting sum
    A(t) = int_0^{[lambda^-1(t)]} d_u a(u) du.

    The unit-cell integrals of d_u a are computed by Gauss-Kronrod from the
    smooth extension and its derivative, refined adaptively where the cell
    estimate is poor.  A is a step function, so the Laplace integral up to
    lambda_{M+1} is an exact finite sum; the remainder beyond it is modelled
    with the local mean of A, and the sequence of truncated values is
    accelerated by the Levin u-transform.  When that misses the target the
    cell count is doubled (up to 8x) and a Richardson extrapolation over a
    geometric subsequence of truncation points serves as an independent
    second estimate.
    """
    cfg = _cfg(cfg)
    if a.smooth_extension is None or a.derivative is None:
        raise UsageError("the Cahen route needs a smooth extension and its derivative")
    if not r > 0:
        raise DomainError("Cahen-Laplace representation needs r > 0")
    lam = lam or np.log
    M = int(cells)
    work = 0
    while True:
        value, err, n = _cahen_fixed(a, lam_inverse, lam, r, cfg, M)
        work += n
        if err <= cfg.target(value) or M >= 8 * cells:
            return EvalResult.make(value, err, work, cfg, ok=True)
        M *= 2


def _cahen_fixed(a, lam_inverse, lam, r: float, cfg: NumericConfig, M: int) -> tuple[float, float, int]:
    k = np.arange(M + 1, dtype=float)

    def cell(u, k0):
        return a.smooth(u) + (u - k0) * a.smooth_derivative(u)

    vals, errs = _gk15(lambda u: cell(u, np.repeat(k, 15)), k, k + 1.0)
    vals = np.array(vals)
    errs = np.array(errs)
    work = 15 * (M + 1)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    # cells need a small fraction of the target; below the rounding floor bisection only burns budget
    cell_tol = max(0.05 * cfg.rel_tol, 64 * EPS) * scale
    cell_cfg = cfg.with_(rel_tol=max(0.05 * cfg.rel_tol, 64 * EPS), abs_tol=cell_tol)
    for i in np.flatnonzero(errs > cell_tol):
        v, e, n, _ = _adaptive(lambda u, k0=k[i]: cell(u, k0), k[i], k[i] + 1.0, cell_cfg)
        vals[i], errs[i] = v, e
        work += n
    A = np.cumsum(vals)                        # A_m, m = 1..M+1
    acc_err = np.cumsum(errs)
    m = np.arange(1, M + 2, dtype=float)
    lam_m = np.asarray(lam(m), dtype=float)
    if np.any(np.diff(lam_m) <= 0):
        raise DomainError("lambda must be strictly increasing")
    if np.any(np.abs(lam_inverse(lam_m) - m) > 1e-9 * m):
        raise DomainError("lam_inverse does not invert lambda")
    # A(t) = A_m on [lambda_m, lambda_{m+1})
    e_m = np.exp(-r * lam_m)
    w = e_m - np.exp(-r * np.asarray(lam(m + 1.0), dtype=float))
    # remainder r int_{lambda_{M+1}}^inf exp(-r t) A(t) dt with A replaced by its local mean
    mean = 0.5 * (A[:-1] + A[1:])
    tail = mean * e_m[1:]
    seq = np.cumsum(A * w)[:-1] + tail
    # increments formed directly: differencing seq would lose the digits Levin needs
    inc = A[:-1] * w[:-1]
    inc[0] += tail[0]
    inc[1:] += np.diff(tail)
    ext = _levin_select(seq, inc)
    value, ext_err = ext.value, ext.err_est
    if ext_err > cfg.target(value) and M >= 160:
        idx = M // 2 ** np.arange(5, -1, -1)
        alt = richardson(seq[idx - 1], 1.0 / (idx + 1.0))
        spread = abs(alt.value - ext.value)
        if spread < ext_err:
            # two independent extrapolations agree more closely than either bound claims
            value, ext_err = 0.5 * (alt.value + ext.value), spread
    err = ext_err + float(np.sum(acc_err * np.abs(w)))
    err += 32 * EPS * float(np.sum(np.abs(A * w)))
    return value, err, work


def _levin_select(seq: np.ndarray, terms: np.ndarray | None = None):
    """Levin u-transform from a few anchor points; keeps the steadiest estimate."""
    best = None
    for start in (1, 5, 12):
        if seq.size - start < 8:
            continue
        ext = levin_u(seq, start=start, kmax=16, terms=terms)
        if best is None or ext.err_est < best.err_est:
            best = ext
    return best


# --------------------------------------------------------------------------
# Neumann expansions of L_nu
# --------------------------------------------------------------------------


@route("neumann_L")
def neumann_L(form: int, nu: float, x: float, cfg: NumericConfig | None = None) -> EvalResult:
    """L_nu(x) as a Neumann series in I functions.

    form 1: 4/(sqrt(pi) Gamma(nu+1/2)) sum (-1)^n (2n+nu+1) Gamma(n+nu+1)
            / (n! (2n+1) (2n+2nu+1)) I_{2n+nu+1}(x)
    form 2: sqrt(x/(2 pi)) sum (-x/2)^n / (n! (n+1/2)) I_{n+nu+1/2}(x)
    form 3: (x/2)^(nu+1/2)/Gamma(nu+1/2) sum (-x/2)^n / (n! (n+nu+1/2)) I_{n+1/2}(x)
    """
    cfg = _cfg(cfg)
    nu = float(nu)
    x = float(x)
    if form not in (1, 2, 3):
        raise DomainError("Neumann form must be 1, 2 or 3")
    if not x >= 0:
        raise DomainError("Neumann expansion needs x >= 0")
    if not nu + 0.5 > 0:
        raise DomainError("Neumann expansion needs nu > -1/2")
    if form == 1 and (-nu) == math.floor(-nu) and -nu >= 0:
        raise DomainError("form 1 has a coefficient pole for -nu a non-negative integer")
    if x == 0:
        return EvalResult.make(0.0, 0.0, 0, cfg)
    lg_half = gamma_ln(nu + 0.5)
    total = 0.0
    comp = 0.0
    err = 0.0
    small = 0
    absum = 0.0
    n = 0
    while n < cfg.max_terms:
        if form == 1:
            order = 2 * n + nu + 1.0
            lc = gamma_ln(n + nu + 1.0) - math.lgamma(n + 1.0) - lg_half
            coef = 4.0 / SQRT_PI * (-1) ** n * (2 * n + nu + 1.0) / ((2 * n + 1.0) * (2 * n + 2 * nu + 1.0)) * math.exp(lc)
        elif form == 2:
            order = n + nu + 0.5
            coef = math.sqrt(x / (2 * math.pi)) * (-1) ** n * math.exp(n * math.log(x / 2) - math.lgamma(n + 1.0)) / (n + 0.5)
        else:
            order = n + 0.5
            lc = (nu + 0.5) * math.log(x / 2) - lg_half + n * math.log(x / 2) - math.lgamma(n + 1.0)
            coef = (-1) ** n * math.exp(lc) / (n + nu + 0.5)
        iv = cylinder_eval(CylinderKind.BESSEL_I, order, x, cfg)
        term = coef * iv.value
        err += abs(coef) * iv.err_est
        absum += abs(term)
        # compensated accumulation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) <= 1e-3 * cfg.rel_tol * abs(total):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    ok = small >= 3
    err += 10 * abs(term) + 8 * EPS * absum
    return EvalResult.make(total, err, n + 1, cfg, ok=ok)


# --------------------------------------------------------------------------
# Schloemilch-type series sum s_n w(n) D_nu^{(d)}(n x)
# --------------------------------------------------------------------------


def _falling(p: float, d: int) -> float:
    out = 1.0
    for j in range(d):
        out *= p - j
    return out


def _tail_sum(s: float, N: int, alternating: bool) -> tuple[float, float]:
    """sum_{n>=N} (+-1)^{n-1} n^{-s} with its error."""
    if alternating:
        v, e = alt_hurwitz(s, float(N))
        sign = 1.0 if (N - 1) % 2 == 0 else -1.0
        return sign * v, e
    if not s > 1:
        raise DivergenceError("non-alternating tail diverges")
    v = hurwitz_zeta(s, float(N))
    return v, 8 * EPS * abs(v)


def _schloemilch_core(nu: float, weights: list, x: float, alternating: bool, deriv: int,
                      cfg: NumericConfig, n_start: int = 1) -> EvalResult:
    """sum_{n>=n_start} (+-1)^{n-1} sum_j c_j n^{-sigma_j} D_nu^{(deriv)}(n x).

    ``weights`` is a list of (c_j, sigma_j).  Head summed directly up to the
    asymptotic switchover, tail from the large-argument expansion of D_nu.
    """
    z_switch = max(Z_DD, 4.0 * nu * nu)
    N = max(n_start + 1, int(math.ceil(z_switch / x)))
    n = np.arange(n_start, N, dtype=float)
    vals, errs, _ = d_nu_arrays(nu, n * x)
    dv, de = vals[deriv], errs[deriv]
    w = np.zeros_like(n)
    for c, sig in weights:
        w += c * n ** (-sig)
    sgn = np.where(n % 2 == 1, 1.0, -1.0) if alternating else np.ones_like(n)
    terms = sgn * w * dv
    head = math.fsum(terms.tolist())
    head_err = float(np.sum(np.abs(w) * de)) + 8 * EPS * float(np.sum(np.abs(terms)))
    # tail model: D^{(d)}(z) ~ C sum_k b_k (nu-1-2k)_d z^{nu-1-2k-d}
    lc = (1.0 - nu) * math.log(2.0) - 0.5 * math.log(math.pi) - gamma_ln(nu + 0.5)
    C = math.exp(lc)
    b = _asym_coeffs(nu)
    zN = N * x
    ks = []
    prev = math.inf
    for k in range(len(b)):
        mag = abs(b[k]) * zN ** (-2.0 * k)
        if mag >= prev or b[k] == 0.0:
            if b[k] == 0.0:
                ks.append(k)
            break
        ks.append(k)
        prev = mag
        if mag < 1e-18:
            break
    tail = 0.0
    tail_err = 0.0
    for k in ks:
        q = nu - 1.0 - 2.0 * k - deriv
        coef = C * b[k] * _falling(nu - 1.0 - 2.0 * k, deriv) * x ** q
        if coef == 0.0:
            continue
        for c, sig in weights:
            v, e = _tail_sum(sig - q, N, alternating)
            tail += c * coef * v
            tail_err += abs(c * coef) * e
    # validate the model against d_nu at n = N-1 and N
    chk_n = np.array([max(N - 1, 1), N], dtype=float)
    cv, ce, _ = d_nu_arrays(nu, chk_n * x)
    model = np.zeros(2)
    for k in ks:
        q = nu - 1.0 - 2.0 * k - deriv
        model += C * b[k] * _falling(nu - 1.0 - 2.0 * k, deriv) * (chk_n * x) ** q
    ref = cv[deriv]
    mismatch = np.abs(model - ref) - ce[deriv]
    rel = float(np.max(np.maximum(mismatch, 0.0) / np.maximum(np.abs(ref), 1e-300)))
    tail_err += rel * abs(tail) + 16 * EPS * abs(tail)
    # exponentially small K-type part neglected in the tail
    tail_err += 2.0 * math.exp(-zN) * abs(tail) * zN
    val = head + tail
    err = head_err + tail_err + 8 * EPS * abs(val)
    return EvalResult.make(val, err, int(n.size + 2), cfg, ok=math.isfinite(err))


@route("schloemilch")
def schloemilch_T(nu: float, mu: float, x: float, alternating: bool = False,
                  cfg: NumericConfig | None = None, deriv: int = 0) -> EvalResult:
    """T_{nu,mu}(x) = sum (+-1)^{n-1} n^-mu D_nu(n x).

    ``deriv`` = 1 or 2 replaces D_nu by its argument derivative D_nu^{(deriv)}
    evaluated at n x (no chain-rule factor n^deriv).
    """
    cfg = _cfg(cfg)
    nu, mu, x = float(nu), float(mu), float(x)
    if not nu > 0:
        raise DomainError("Schloemilch series needs nu > 0")
    if alternating:
        if not mu + 1 > nu:
            raise DivergenceError("alternating Schloemilch series needs mu + 1 > nu")
    elif not mu > nu:
        raise DivergenceError("Schloemilch series needs mu > nu")
    if deriv not in (0, 1, 2):
        raise DomainError("deriv must be 0, 1 or 2")
    if x < 0:
        raise DomainError("Schloemilch series needs x >= 0")
    if x == 0:
        if deriv:
            raise DomainError("derivative series need x > 0")
        return EvalResult.make(0.0, 0.0, 0, cfg)
    return _schloemilch_core(nu, [(1.0, mu)], x, alternating, deriv, cfg)


@route("upsilon")
def upsilon(nu: float, mu: float, beta: int, x: float, alternating: bool = False,
            cfg: NumericConfig | None = None, deriv: int = 0) -> EvalResult:
    """sum_{n>=2} (+-1)^{n-1} (n^beta - 1) n^-mu D_nu^{(deriv)}(n x)."""
    cfg = _cfg(cfg)
    nu, mu, x = float(nu), float(mu), float(x)
    if beta not in (1, 2):
        raise DomainError("beta must be 1 or 2")
    if not nu > 0:
        raise DomainError("Upsilon series needs nu > 0")
    if alternating:
        if not mu - beta > nu - 1 - deriv:
            raise DivergenceError("alternating Upsilon series needs mu - beta > nu - 1 - deriv")
    elif not mu - beta > nu - deriv:
        raise DivergenceError("Upsilon series needs mu - beta > nu - deriv")
    if deriv not in (0, 1, 2):
        raise DomainError("deriv must be 0, 1 or 2")
    if x < 0:
        raise DomainError("Upsilon series needs x >= 0")
    if x == 0:
        if deriv:
            raise DomainError("derivative series need x > 0")
        return EvalResult.make(0.0, 0.0, 0, cfg)
    return _schloemilch_core(nu, [(1.0, mu - beta), (-1.0, mu)], x, alternating, deriv, cfg, n_start=2)


# --------------------------------------------------------------------------
# Kapteyn series
# --------------------------------------------------------------------------


def kapteyn_bound(alpha: CoefficientSequence, nu: float) -> float:
    """Right end of the convergence interval 2 min(1, nu / (e L)), L = growth_tag^(1/nu)."""
    L = alpha.growth_tag ** (1.0 / nu)
    return 2.0 * min(1.0, nu / (math.e * L))


def _kapteyn_guard(alpha: CoefficientSequence, nu: float, mu: float, x: float) -> None:
    if not nu > 0:
        raise DomainError("Kapteyn series needs nu > 0")
    if not mu > nu:
        raise DivergenceError("Kapteyn series needs mu > nu")
    if x < 0:
        raise DomainError("Kapteyn series needs x >= 0")
    bound = kapteyn_bound(alpha, nu)
    if not x < bound:
        raise DivergenceError(f"x = {x} lies outside the Kapteyn convergence interval (0, {bound:.6g})")


@route("kapteyn")
def kapteyn_K(alpha: CoefficientSequence, nu: float, mu: float, x: float,
              cfg: NumericConfig | None = None, deriv: int = 0, weight_shift: float = 0.0) -> EvalResult:
    """K_{nu,mu}(x) = sum alpha_n n^-mu D_{nu n}(n x).

    ``deriv`` selects D^{(deriv)}_{nu n}(n x) (argument derivative);
    ``weight_shift`` s uses the weights (n^s - 1) n^-mu instead of n^-mu.
    """
    cfg = _cfg(cfg)
    nu, mu, x = float(nu), float(mu), float(x)
    _kapteyn_guard(alpha, nu, mu, x)
    if x == 0:
        return EvalResult.make(0.0, 0.0, 0, cfg)
    total = 0.0
    comp = 0.0
    err = 0.0
    small = 0
    n = 1
    ratios = []
    prev = None
    absum = 0.0
    while n <= cfg.max_terms:
        a_n = float(alpha.at(np.array([n]))[0])
        w = n ** -mu if weight_shift == 0 else (n ** weight_shift - 1.0) * n ** -mu
        if a_n == 0.0 or w == 0.0:
            term, terr = 0.0, 0.0
        else:
            vals, errs, _ = d_nu_arrays(nu * n, np.array([n * x]))
            term = a_n * w * float(vals[deriv][0])
            terr = abs(a_n * w) * float(errs[deriv][0])
        if not math.isfinite(terr):
            raise DivergenceError(f"term n = {n} of the Kapteyn series cannot be evaluated")
        err += terr
        absum += abs(term)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if prev is not None and prev != 0.0 and term != 0.0:
            ratios.append(abs(term / prev))
        if term != 0.0:
            prev = term
        if abs(term) <= 1e-3 * cfg.rel_tol * abs(total) and n > 2:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    # geometric decay check over the later terms
    if len(ratios) > 6 and np.median(ratios[-5:]) >= 1.0:
        raise DivergenceError("Kapteyn series terms do not decay geometrically")
    ok = small >= 3
    err += 10 * abs(term) + 8 * EPS * absum
    return EvalResult.make(total, err, n, cfg, ok=ok)


@route("kapteyn_gegenbauer")
def kapteyn_gegenbauer(alpha: CoefficientSequence, nu: float, mu: float, x: float,
                       cfg: NumericConfig | None = None) -> EvalResult:
    """(2/sqrt(pi)) int_0^1 (1-t^2)^(-1/2) sum_n alpha_n ((x/2)(1-t^2))^(nu n) exp(-x t n)
    / (n^(mu - nu n + 1) Gamma(nu n + 1/2)) dt, which equals K_{nu,mu+1}(x)."""
    cfg = _cfg(cfg)
    nu, mu, x = float(nu), float(mu), float(x)
    _kapteyn_guard(alpha, nu, mu + 1.0, x)
    if x == 0:
        return EvalResult.make(0.0, 0.0, 0, cfg)
    inner_tol = 1e-3 * cfg.rel_tol

    def inner(t):
        t = np.asarray(t, dtype=float)
        omt = (1.0 - t) * (1.0 + t)
        lw = np.log(np.maximum(omt, 1e-300) * (x / 2.0))
        out = np.zeros_like(t)
        small = 0
        n = 1
        while n <= cfg.max_terms:
            a_n = float(alpha.at(np.array([n]))[0])
            if a_n != 0.0:
                lg = nu * n * lw - x * t * n - (mu - nu * n + 1.0) * math.log(n) - gamma_ln(nu * n + 0.5)
                term = a_n * np.exp(lg)
                out += term
                if np.all(np.abs(term) <= inner_tol * np.abs(out)):
                    small += 1
                    if small >= 3:
                        break
                else:
                    small = 0
            n += 1
        return out / np.sqrt(np.maximum(omt, 1e-300))

    note = EndpointNote("b", "algebraic", exponent=nu - 0.5)
    sub = cfg.with_(rel_tol=0.5 * cfg.rel_tol)
    r = integrate_finite(QuadratureProblem(inner, Finite(0.0, 1.0), (note,)), sub)
    c = 2.0 / SQRT_PI
    val = c * r.value
    err = c * r.err_est + c * inner_tol * abs(r.value) * 10
    return EvalResult.make(val, err, r.work, cfg, ok=r.converged)


# --------------------------------------------------------------------------
# Mathieu series and the Omega function
# --------------------------------------------------------------------------


_N_EM = 20
_BERN_EVEN = [float(bernoulli(2 * k)) for k in range(0, 16)]


def _mathieu_em(x: float) -> tuple[float, float]:
    """S(x) = sum 2n/(x^2+n^2)^2 by a direct head plus an Euler-Maclaurin tail."""
    N = _N_EM
    n = np.arange(1, N, dtype=float)
    head = math.fsum((2 * n / (x * x + n * n) ** 2).tolist())
    fN = 2 * N / (x * x + N * N) ** 2
    tail = 1.0 / (N * N + x * x) + 0.5 * fN
    zc = complex(N, x)
    last = 0.0
    for k in range(1, 12):
        if x == 0:
            # limit of -(1/x) Im[(N+ix)^{-2k-1}] as x -> 0
            term = _BERN_EVEN[k] * (2 * k + 1) * float(N) ** (-2 * k - 2)
        else:
            term = -_BERN_EVEN[k] * (zc ** (-2 * k - 1)).imag / x
        tail += term
        last = term
    v = head + tail
    return v, abs(last) + 8 * EPS * abs(v)


@route("mathieu_series")
def _mathieu_series(x: float, alternating: bool, cfg: NumericConfig) -> EvalResult:
    v, e = _mathieu_em(x)
    if alternating:
        h, he = _mathieu_em(x / 2.0)
        v = v - 0.25 * h
        e = e + 0.25 * he + 8 * EPS * abs(v)
    return EvalResult.make(v, e, 2 * _N_EM, cfg)


@route("mathieu_integral")
def _mathieu_integral(x: float, alternating: bool, cfg: NumericConfig) -> EvalResult:
    if alternating:
        def f(t):
            return t * np.sin(x * t) * np.exp(-t) / (1.0 + np.exp(-t))
        notes = ()
    else:
        def f(t):
            return t * np.sin(x * t) / np.expm1(t)
        notes = (EndpointNote("a", "removable", limit=0.0),)
    sub = cfg.with_(rel_tol=0.1 * cfg.rel_tol, abs_tol=0.1 * cfg.abs_tol)
    r = integrate_semi_infinite_decay(QuadratureProblem(f, SemiInfiniteDecay(0.0, "exponential", 1.0), notes), sub)
    # judged against the caller's tolerance: the tighter inner target can sit below the cancellation floor
    return EvalResult.make(r.value / x, r.err_est / x, r.work, cfg, ok=math.isfinite(r.err_est))


def mathieu_S(x: float, alternating: bool = False, route: str = "series",
              cfg: NumericConfig | None = None) -> EvalResult:
    """Mathieu series S(x) = sum 2n/(x^2+n^2)^2 or its alternating companion."""
    cfg = _cfg(cfg)
    x = float(x)
    if x < 0:
        raise DomainError("Mathieu series needs x >= 0")
    if route == "series":
        return _mathieu_series(x, alternating, cfg)
    if route == "integral":
        if x == 0:
            raise DomainError("integral route needs x > 0")
        return _mathieu_integral(x, alternating, cfg)
    raise DomainError(f"unknown Mathieu route {route!r}")


@route("mathieu_series")
def mathieu_S_array(x) -> np.ndarray:
    """Vectorized S(x) for x >= 0 (series route, values only)."""
    x = np.asarray(x, dtype=float)
    N = _N_EM
    n = np.arange(1, N, dtype=float)
    xx = x[..., None] ** 2
    head = np.sum(2 * n / (xx + n * n) ** 2, axis=-1)
    tail = 1.0 / (N * N + x * x) + N / (x * x + N * N) ** 2
    zc = N + 1j * x
    safe = np.where(x == 0, 1.0, x)
    for k in range(1, 12):
        lim0 = _BERN_EVEN[k] * (2 * k + 1) * float(N) ** (-2 * k - 2)
        term = np.where(x == 0, lim0, -_BERN_EVEN[k] * (zc ** (-2 * k - 1)).imag / safe)
        tail = tail + term
    return head + tail


def _omega_integrand(w: float):
    def f(u):
        u = np.asarray(u, dtype=float)
        out = np.sinh(w * u) / np.tan(np.pi * u)
        return out
    return f


@route("omega_integral")
def _omega_integral(w: float, cfg: NumericConfig) -> EvalResult:
    if abs(w) > 1400:
        raise RangeError("Omega integral overflows for |w| > 1400")
    f = _omega_integrand(w)
    note = EndpointNote("a", "removable", limit=w / math.pi)
    sub = cfg.with_(rel_tol=0.5 * cfg.rel_tol, abs_tol=0.5 * cfg.abs_tol)
    r = integrate_finite(QuadratureProblem(f, Finite(0.0, 0.5), (note,)), sub)
    return EvalResult.make(2 * r.value, 2 * r.err_est, r.work, cfg, ok=r.converged)


def _alt_partial_fraction(wt: float, N: int = 30, kmax: int = 12) -> tuple[float, float]:
    """sum_{n>=1} 2(-1)^{n-1} n/(n^2+wt^2) by a direct head and a Boole tail."""
    n = np.arange(1, N, dtype=float)
    sg = np.where(n % 2 == 1, 1.0, -1.0)
    head = math.fsum((sg * 2 * n / (n * n + wt * wt)).tolist())
    # f(s) = 2 Re 1/(s + i wt); f^{(j)}(s) = 2 Re (-1)^j j! (s + i wt)^{-j-1}
    zc = complex(N, wt)
    tail = 0.5 * 2 * (1.0 / zc).real
    last = 0.0
    for k in range(1, kmax + 1):
        j = 2 * k - 1
        dj = 2 * ((-1) ** j * math.factorial(j) * zc ** (-j - 1)).real
        term = -_BOOLE[k] * dj
        tail += term
        last = term
    sign = 1.0 if (N - 1) % 2 == 0 else -1.0
    v = head + sign * tail
    return v, abs(last) + 8 * EPS * (abs(head) + abs(tail))


@route("omega_partial_fraction")
def _omega_partial_fraction(w: float, cfg: NumericConfig) -> EvalResult:
    wt = w / (2 * math.pi)
    s, e = _alt_partial_fraction(wt)
    sh = math.sinh(math.pi * wt) / math.pi
    if not math.isfinite(sh):
        raise RangeError("sinh overflow in the partial-fraction route")
    return EvalResult.make(sh * s, abs(sh) * e + 4 * EPS * abs(sh * s), 42, cfg)


def omega(w: float, route: str = "integral", cfg: NumericConfig | None = None) -> EvalResult:
    """Complete Omega function 2 int_0^{1/2} sinh(w u) cot(pi u) du."""
    cfg = _cfg(cfg)
    w = float(w)
    if w == 0:
        return EvalResult.make(0.0, 0.0, 0, cfg)
    if route == "integral":
        return _omega_integral(w, cfg)
    if route == "partial_fraction":
        return _omega_partial_fraction(w, cfg)
    raise DomainError(f"unknown Omega route {route!r}")


def _gl_panels(order: int):
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.concatenate([[0.0], 0.5 * 2.0 ** -np.arange(48, -1, -1.0)])
    lo, hi = edges[:-1], edges[1:]
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    nodes = (c[:, None] + h[:, None] * xg[None, :]).ravel()
    weights = (h[:, None] * wg[None, :]).ravel()
    return nodes, weights


_PANELS = {k: _gl_panels(k) for k in (16, 24)}


def _omega_ratio_panel(x: np.ndarray, order: int) -> np.ndarray:
    v, wts = _PANELS[order]
    tanv = np.tan(np.pi * v)
    out = np.empty_like(x)
    chunk = 256
    for i in range(0, x.size, chunk):
        xs = x[i:i + chunk, None]
        a = 2 * np.pi * xs
        num = -np.expm1(-a * (1.0 - 2.0 * v[None, :]))
        den = -np.expm1(-a)
        f = np.exp(-a * v[None, :]) * tanv[None, :] * num / den
        out[i:i + chunk] = 2.0 * (f @ wts)
    return out


@route("omega_ratio")
def omega_ratio(x) -> tuple[np.ndarray, np.ndarray]:
    """R(x) = Omega(2 pi x) / sinh(pi x) for x >= 0 from the exponent-shifted integral

    R(x) = 2 int_0^{1/2} exp(-2 pi x v) tan(pi v) (1 - exp(-2 pi x (1-2v))) / (1 - exp(-2 pi x)) dv.

    Returns values and error estimates (difference of two panel orders).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    shape = x.shape
    x = x.ravel()
    if np.any(x < 0):
        raise DomainError("omega_ratio needs x >= 0")
    pos = np.where(x > 0, x, 1.0)
    hi = _omega_ratio_panel(pos, 24)
    lo = _omega_ratio_panel(pos, 16)
    # R(0) = lim 2 Omega'(0) x 2pi / (pi x) = 8 int_0^{1/2} u cot(pi u) du = 4 ln 2 / pi
    r0 = 4.0 * math.log(2.0) / math.pi
    val = np.where(x > 0, hi, r0)
    err = np.where(x > 0, np.abs(hi - lo) + 64 * EPS * np.abs(hi), 4 * EPS * r0)
    return val.reshape(shape), err.reshape(shape)


def hamburger_sum(a: float, cfg: NumericConfig | None = None) -> EvalResult:
    """sum_{n>=1} 1/(a^2+n^2) by the generic accelerated summation."""
    return accelerated_sum(lambda n: 1.0 / (a * a + n * n), cfg)


@route("accelerated_sum")
def accelerated_sum(term: Callable, cfg: NumericConfig | None = None, n0: int = 16, levels: int = 9) -> EvalResult:
    """sum_{n>=1} term(n) for smooth terms whose remainder expands in powers of 1/N.

    Partial sums at N = n0 2^j are extrapolated to N = inf (Richardson).
    """
    cfg = _cfg(cfg)
    nmax = n0 * 2 ** (levels - 1)
    n = np.arange(1, nmax + 1, dtype=float)
    t = np.asarray(term(n), dtype=float)
    partial = np.cumsum(t)
    Ns = n0 * 2 ** np.arange(levels)
    ext = richardson(partial[Ns - 1], 1.0 / Ns)
    return EvalResult.make(ext.value, ext.err_est, nmax, cfg)
