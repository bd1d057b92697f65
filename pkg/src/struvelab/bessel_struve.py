"""Point evaluation of J, I, H, L and of the difference D = I - L.

All four cylinder functions share one power-series engine.  With argument
``h = x/2`` every series has the shape

    P * sum_m t_m,   t_{m+1} = t_m * s h^2 / ((m+1+c)(m+nu+1+c))

where ``c`` is 0 for the Bessel pair and 1/2 for the Struve pair and ``s`` is
the sign pattern.  The engine advances whole argument arrays in lock-step in
double-double arithmetic and also accumulates the termwise first and second
derivative weights, so D', D'' and the Struve operator residual come from the
same pass with no differencing.

D is the even (Bessel) chain minus the odd (Struve) chain, both carried
relative to the common prefactor ``(x/2)^nu / Gamma(nu+1)``; the cancellation
between the two exponentially large sums happens inside the double-double
accumulator.  Large arguments switch to the algebraic asymptotic expansion of
D plus its exponentially small K-type correction, with an overlap window in
which both regimes are computed and cross-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .ddouble import DD_EPS, dd_add, dd_mul, dd_mul_d, dd_div, two_prod, two_sum
from .errors import DomainError, InternalConsistencyError, RangeError
from .routes import route
from .scalar_core import (
    EPS,
    SQRT_PI,
    EvalResult,
    NumericConfig,
    _cfg,
    gamma,
    gamma_ln,
    gamma_quotient_dd,
)

# overlap window for the difference D
Z_ASYM = 25.0
Z_DD = 35.0
# beyond this the double-double series has lost all useful digits
Z_SERIES_MAX = 62.0


class CylinderKind(str, Enum):
    BESSEL_J = "bessel_j"
    BESSEL_I = "bessel_i"
    STRUVE_H = "struve_h"
    STRUVE_L = "struve_l"


# --------------------------------------------------------------------------
# power-series engine
# --------------------------------------------------------------------------


@dataclass
class _Sums:
    """Double-double sums of t_m, e_m t_m and e_m(e_m-1) t_m (relative to a prefactor)."""

    s0: tuple
    s1: tuple
    s2: tuple
    abs0: np.ndarray
    abs1: np.ndarray
    abs2: np.ndarray
    tail0: np.ndarray
    tail1: np.ndarray
    tail2: np.ndarray
    terms: int
    compensated: bool

    def value(self, which: int) -> np.ndarray:
        hi, lo = (self.s0, self.s1, self.s2)[which]
        return hi + lo

    def err(self, which: int) -> np.ndarray:
        a = (self.abs0, self.abs1, self.abs2)[which]
        t = (self.tail0, self.tail1, self.tail2)[which]
        unit = DD_EPS if self.compensated else EPS
        return unit * (16.0 + self.terms) * a + t


def _power_sums(h: np.ndarray, nu: float, c: float, sign: float, lead, compensated: bool,
                max_terms: int) -> _Sums:
    """Run one chain of the power-series engine.

    ``h`` is x/2 (array), ``lead`` the dd pair of t_0 (broadcastable), the term
    t_m carries the power (x/2)^(2m + nu + 2c) up to the common prefactor.
    """
    h = np.asarray(h, dtype=float)
    q_hi, q_lo = two_prod(h, h)
    if sign < 0:
        q_hi, q_lo = -q_hi, -q_lo
    t_hi = np.broadcast_to(np.asarray(lead[0], dtype=float), h.shape).copy()
    t_lo = np.broadcast_to(np.asarray(lead[1], dtype=float), h.shape).copy()
    zeros = np.zeros_like(h)
    s0 = [zeros.copy(), zeros.copy()]
    s1 = [zeros.copy(), zeros.copy()]
    s2 = [zeros.copy(), zeros.copy()]
    a0 = zeros.copy()
    a1 = zeros.copy()
    a2 = zeros.copy()
    tail0 = zeros.copy()
    tail1 = zeros.copy()
    tail2 = zeros.copy()
    m = 0
    while True:
        # exponent e_m = 2m + nu + 2c and e_m - 1, exact as pairs
        e_hi, e_lo = two_sum(2.0 * m + 2.0 * c, nu)
        f_hi, f_lo = two_sum(2.0 * m + 2.0 * c - 1.0, nu)
        g_hi, g_lo = dd_mul(e_hi, e_lo, f_hi, f_lo)
        u1_hi, u1_lo = dd_mul(t_hi, t_lo, e_hi, e_lo)
        u2_hi, u2_lo = dd_mul(t_hi, t_lo, g_hi, g_lo)
        if compensated:
            s0 = list(dd_add(s0[0], s0[1], t_hi, t_lo))
            s1 = list(dd_add(s1[0], s1[1], u1_hi, u1_lo))
            s2 = list(dd_add(s2[0], s2[1], u2_hi, u2_lo))
        else:
            s0[0] = s0[0] + t_hi
            s1[0] = s1[0] + u1_hi
            s2[0] = s2[0] + u2_hi
        at = np.abs(t_hi)
        a0 += at
        a1 += np.abs(u1_hi)
        a2 += np.abs(u2_hi)
        # next ratio  q / ((m+1+c)(m+1+c+nu))
        k1 = m + 1.0 + c
        d_hi, d_lo = two_sum(k1, nu)
        d_hi, d_lo = dd_mul_d(d_hi, d_lo, k1)
        if compensated:
            r_hi, r_lo = dd_div(q_hi, q_lo, d_hi, d_lo)
            t_hi, t_lo = dd_mul(t_hi, t_lo, r_hi, r_lo)
        else:
            t_hi = t_hi * (q_hi / d_hi)
            t_lo = zeros
        m += 1
        ratio = np.abs(q_hi) / d_hi
        nt = np.abs(t_hi)
        ew = (2.0 * m + nu + 2.0 * c + 1.0) ** 2
        unit = DD_EPS if compensated else EPS
        small = (nt * ew <= unit * 1e-2 * (a0 + a1 + a2)) | (nt == 0.0)
        if (np.all(small & (ratio <= 0.5))) or m >= max_terms:
            # geometric tail bound with ratio <= 1/2
            e_next = abs(2.0 * m + nu + 2.0 * c)
            tail0 = 2.0 * nt
            tail1 = 2.0 * nt * (e_next + 2.0)
            tail2 = 2.0 * nt * (e_next + 2.0) ** 2
            if m >= max_terms and not np.all(small & (ratio <= 0.5)):
                tail0 = np.where(small & (ratio <= 0.5), tail0, np.inf)
                tail1 = np.where(small & (ratio <= 0.5), tail1, np.inf)
                tail2 = np.where(small & (ratio <= 0.5), tail2, np.inf)
            break
    return _Sums(tuple(s0), tuple(s1), tuple(s2), a0, a1, a2, tail0, tail1, tail2, m, compensated)


def _log_prefactor(h: np.ndarray, power: float, log_gamma: float):
    """(h^power / exp(log_gamma), relative error) elementwise, h > 0."""
    with np.errstate(divide="ignore"):
        lh = np.log(h)
    lg = power * lh - log_gamma
    if np.any(lg > 709.0):
        raise RangeError("prefactor overflows")
    val = np.exp(lg)
    rel = EPS * (4.0 + np.abs(power * lh) + abs(log_gamma))
    return val, rel


def _prefactor(h: np.ndarray, power: float, gamma_arg: float):
    """h^power / Gamma(gamma_arg) with a relative-error estimate."""
    h = np.asarray(h, dtype=float)
    if gamma_arg < 160.0 and gamma_arg > 0:
        g = gamma(gamma_arg)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = h ** power / g
        if np.all(np.isfinite(val)):
            return val, np.full(h.shape, 6.0 * EPS)
    return _log_prefactor(h, power, gamma_ln(gamma_arg))


def _overflow_guard(nu: float, x: np.ndarray) -> None:
    with np.errstate(divide="ignore"):
        lx = np.where(x > 0, nu * np.log(np.maximum(x, 1e-300) / 2.0) + x, -np.inf)
    if np.any(lx > 700.0):
        raise RangeError("argument too large: (x/2)^nu e^x overflows")


def _check_order(kind: CylinderKind, nu: float) -> None:
    if kind in (CylinderKind.BESSEL_J, CylinderKind.BESSEL_I):
        if not nu > -1:
            raise DomainError("J and I require nu > -1")
    elif not nu > -1.5:
        raise DomainError("H and L require nu > -3/2")


@route("power_series")
def _cylinder_arrays(kind: CylinderKind, nu: float, x: np.ndarray, compensated: bool, max_terms: int):
    """Values, first and second derivatives and their error estimates (arrays)."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("negative arguments are not supported")
    _overflow_guard(nu, x)
    struve = kind in (CylinderKind.STRUVE_H, CylinderKind.STRUVE_L)
    sign = -1.0 if kind in (CylinderKind.BESSEL_J, CylinderKind.STRUVE_H) else 1.0
    c = 0.5 if struve else 0.0
    lead_power = nu + 1.0 if struve else nu
    h = x / 2.0
    xs = np.where(x > 0, x, 1.0)
    hs = xs / 2.0
    if struve:
        # 1/(Gamma(3/2) Gamma(nu+3/2)) folded into the prefactor
        pref, prel = _prefactor(hs, lead_power, nu + 1.5)
        pref = pref / (0.5 * SQRT_PI)
    else:
        pref, prel = _prefactor(hs, lead_power, nu + 1.0)
    sums = _power_sums(hs, nu, c, sign, (1.0, 0.0), compensated, max_terms)
    vals = []
    errs = []
    for d in range(3):
        sv = sums.value(d)
        se = sums.err(d)
        scale = pref / xs ** d
        v = scale * sv
        e = np.abs(scale) * se + np.abs(v) * prel
        vals.append(v)
        errs.append(e)
    # x = 0: only the leading power can survive
    zero = x == 0
    if np.any(zero):
        for d in range(3):
            p = lead_power - d
            if p > 0:
                lim = 0.0
            elif p == 0:
                lim = math.prod(lead_power - j for j in range(d)) / (
                    gamma(nu + 1.5) * 0.5 * SQRT_PI if struve else gamma(nu + 1.0)) / 2.0 ** lead_power
            else:
                lim = math.inf
            vals[d] = np.where(zero, lim, vals[d])
            errs[d] = np.where(zero, 0.0, errs[d])
    return vals, errs, sums.terms


def cylinder_eval(kind, nu: float, x: float, cfg: NumericConfig | None = None) -> EvalResult:
    """J, I, H or L of order nu at x >= 0 by power-series summation.

    J switches to the Hankel large-argument expansion where the series would
    lose accuracy to cancellation.
    """
    cfg = _cfg(cfg)
    kind = CylinderKind(kind)
    nu = float(nu)
    x = float(x)
    _check_order(kind, nu)
    if kind is CylinderKind.BESSEL_J and x > _j_switch(nu):
        v, e = _j_hankel(nu, np.array([x]))
        return EvalResult.make(v[0], e[0], 30, cfg)
    if x == 0 and (nu + (1.0 if kind in (CylinderKind.STRUVE_H, CylinderKind.STRUVE_L) else 0.0)) < 0:
        raise DomainError("function is unbounded at x = 0 for this order")
    vals, errs, n = _cylinder_arrays(kind, nu, np.array([x]), cfg.compensated, cfg.max_terms)
    return EvalResult.make(vals[0][0], errs[0][0], n, cfg, ok=bool(np.isfinite(errs[0][0])))


def cylinder_derivatives(kind, nu: float, x, cfg: NumericConfig | None = None):
    """Arrays (value, first, second derivative) and matching error arrays."""
    cfg = _cfg(cfg)
    kind = CylinderKind(kind)
    _check_order(kind, float(nu))
    vals, errs, _ = _cylinder_arrays(kind, float(nu), np.atleast_1d(np.asarray(x, float)),
                                     cfg.compensated, cfg.max_terms)
    return vals, errs


def bessel_i(nu: float, x, cfg: NumericConfig | None = None) -> np.ndarray:
    vals, _ = cylinder_derivatives(CylinderKind.BESSEL_I, nu, x, cfg)
    return vals[0]


def struve_l(nu: float, x, cfg: NumericConfig | None = None) -> np.ndarray:
    vals, _ = cylinder_derivatives(CylinderKind.STRUVE_L, nu, x, cfg)
    return vals[0]


# --------------------------------------------------------------------------
# J for oscillatory quadrature
# --------------------------------------------------------------------------


def _j_switch(nu: float) -> float:
    return max(25.0, 1.5 * nu * nu)


def _hankel_coeffs(nu: float, kmax: int = 60) -> np.ndarray:
    mu = 4.0 * nu * nu
    a = np.empty(kmax + 1)
    a[0] = 1.0
    for k in range(1, kmax + 1):
        a[k] = a[k - 1] * (mu - (2 * k - 1) ** 2) / (k * 8.0)
    return a


def _j_hankel(nu: float, x: np.ndarray):
    """Hankel expansion of J_nu for large x: values and error estimates."""
    x = np.asarray(x, dtype=float)
    a = _hankel_coeffs(nu)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    active = np.ones(x.shape, dtype=bool)
    prev = np.full(x.shape, np.inf)
    last = np.zeros_like(x)
    xp = np.ones_like(x)
    for k in range(len(a)):
        term = a[k] / xp
        mag = np.abs(term)
        grow = mag > prev
        active = active & ~grow
        sgn = (-1.0) ** (k // 2)
        if k % 2 == 0:
            p = np.where(active, p + sgn * term, p)
        else:
            q = np.where(active, q + sgn * term, q)
        last = np.where(active, mag, last)
        prev = np.where(active, mag, prev)
        if a[k] == 0.0:
            last = np.where(active, 0.0, last)
            break
        xp = xp * x
        if not np.any(active & (mag > 1e-18)):
            break
    omega = x - (0.5 * nu + 0.25) * math.pi
    amp = np.sqrt(2.0 / (math.pi * x))
    val = amp * (p * np.cos(omega) - q * np.sin(omega))
    err = amp * (last + EPS * (np.abs(p) + np.abs(q)) * (4.0 + x))
    return val, err


@route("bessel_j")
def bessel_j_array(nu: float, x) -> tuple[np.ndarray, np.ndarray]:
    """J_nu(x) for an array of x >= 0 with error estimates (nu > -1)."""
    nu = float(nu)
    if not nu > -1:
        raise DomainError("J requires nu > -1")
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.ravel()
    out = np.empty_like(x)
    err = np.empty_like(x)
    big = x > _j_switch(nu)
    if np.any(big):
        if nu > 6.0:
            raise RangeError("large-argument J is limited to nu <= 6")
        out[big], err[big] = _j_hankel(nu, x[big])
    small = ~big
    if np.any(small):
        vals, errs, _ = _cylinder_arrays(CylinderKind.BESSEL_J, nu, x[small], True, 100_000)
        out[small] = vals[0]
        err[small] = errs[0]
    return out.reshape(shape), err.reshape(shape)


# --------------------------------------------------------------------------
# difference D = I - L
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DifferencePoint:
    """D_nu(z) = I_nu(z) - L_nu(z) with argument derivatives and error estimates."""

    nu: float
    z: float
    value: float
    derivative: float
    second_derivative: float
    err_est: float
    derivative_err: float
    second_err: float
    regime: str
    work: int

    def result(self, cfg: NumericConfig | None = None) -> EvalResult:
        return EvalResult.make(self.value, self.err_est, self.work, cfg, ok=math.isfinite(self.err_est))


def _d_series(nu: float, z: np.ndarray, compensated: bool = True, max_terms: int = 100_000):
    """Series regime: even chain minus odd chain in double-double."""
    h = z / 2.0
    r_hi, r_lo = gamma_quotient_dd(nu)
    lead_odd = dd_mul_d(r_hi, r_lo, h)
    ev = _power_sums(h, nu, 0.0, 1.0, (1.0, 0.0), compensated, max_terms)
    od = _power_sums(h, nu, 0.5, 1.0, lead_odd, compensated, max_terms)
    pref, prel = _prefactor(h, nu, nu + 1.0)
    vals, errs = [], []
    zs = np.where(z > 0, z, 1.0)
    for d in range(3):
        s_ev = (ev.s0, ev.s1, ev.s2)[d]
        s_od = (od.s0, od.s1, od.s2)[d]
        hi, lo = dd_add(s_ev[0], s_ev[1], -s_od[0], -s_od[1])
        sv = hi + lo
        se = ev.err(d) + od.err(d) + DD_EPS * 64 * np.abs(od.value(d))
        scale = pref / zs ** d
        v = scale * sv
        e = np.abs(scale) * se + np.abs(v) * prel
        vals.append(v)
        errs.append(e)
    zero = z == 0
    if np.any(zero):
        # D(0) = 0 for nu > 0; derivatives follow the leading power (z/2)^nu / Gamma(nu+1)
        g = gamma(nu + 1.0)
        lim1 = 0.0 if nu > 1 else (0.5 / g if nu == 1 else math.inf)
        lim2 = 0.0 if nu > 2 else (0.5 / g if nu == 2 else (math.inf if nu != 1 else -1.0 / (0.5 * SQRT_PI * gamma(2.5)) / 2.0))
        for d, lim in enumerate((0.0, lim1, lim2)):
            vals[d] = np.where(zero, lim, vals[d])
            errs[d] = np.where(zero, 0.0, errs[d])
    return vals, errs, ev.terms + od.terms


def _asym_coeffs(nu: float, kmax: int = 60) -> np.ndarray:
    """b_k with b_0 = 1, b_k = b_{k-1} (1-2k)(2nu+1-2k)."""
    b = np.empty(kmax + 1)
    b[0] = 1.0
    for k in range(1, kmax + 1):
        b[k] = b[k - 1] * (1 - 2 * k) * (2 * nu + 1 - 2 * k)
    return b


def _d_asymptotic(nu: float, z: np.ndarray):
    """Asymptotic regime: algebraic series plus the K-type exponentially small part."""
    z = np.asarray(z, dtype=float)
    # algebraic part  sum_k C b_k z^{nu-1-2k}
    lc = (1.0 - nu) * math.log(2.0) - math.log(SQRT_PI) - gamma_ln(nu + 0.5)
    b = _asym_coeffs(nu)
    z2 = z * z
    acc = [np.zeros_like(z) for _ in range(3)]
    last = np.zeros_like(z)
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    zp = np.ones_like(z)  # z^{-2k}
    for k in range(len(b)):
        term = b[k] * zp
        mag = np.abs(term)
        grow = mag >= prev
        active = active & ~grow
        if not np.any(active):
            break
        p = nu - 1.0 - 2.0 * k
        acc[0] = np.where(active, acc[0] + term, acc[0])
        acc[1] = np.where(active, acc[1] + term * p, acc[1])
        acc[2] = np.where(active, acc[2] + term * p * (p - 1.0), acc[2])
        prev = np.where(active, mag, prev)
        if b[k] == 0.0:
            last = np.where(active, 0.0, last)
            active[:] = False
            break
        nxt = np.abs(b[k + 1] * zp / z2) if k + 1 < len(b) else mag
        last = np.where(active, nxt, last)
        zp = zp / z2
    if np.any(active):
        last = np.where(active, np.maximum(last, prev), last)
    base = np.exp(lc + (nu - 1.0) * np.log(z))
    alg = [base * acc[0], base * acc[1] / z, base * acc[2] / z2]
    trunc = 2.0 * base * last
    alg_err = [trunc, trunc * (abs(nu) + 2.0 * len(b)) / z, trunc * (abs(nu) + 2.0 * len(b)) ** 2 / z2]
    # -(2/pi) sin(nu pi) K_nu(z), K from its Hankel-type expansion
    s = math.sin(math.pi * nu)
    kvals = [np.zeros_like(z) for _ in range(3)]
    kerr = np.zeros_like(z)
    if s != 0.0:
        a = _hankel_coeffs(nu)
        pref = -(2.0 / math.pi) * s * math.sqrt(math.pi / 2.0) * np.exp(-z)
        prev_k = np.full(z.shape, np.inf)
        act = np.ones(z.shape, dtype=bool)
        lastk = np.zeros_like(z)
        for k in range(len(a)):
            p = -0.5 - k
            term = a[k] * z ** p
            mag = np.abs(term)
            act = act & ~(mag >= prev_k)
            if not np.any(act):
                break
            kvals[0] = np.where(act, kvals[0] + term, kvals[0])
            kvals[1] = np.where(act, kvals[1] + term * (p / z - 1.0), kvals[1])
            kvals[2] = np.where(act, kvals[2] + term * (p * (p - 1.0) / z2 - 2.0 * p / z + 1.0), kvals[2])
            prev_k = np.where(act, mag, prev_k)
            lastk = np.where(act, np.abs(a[k + 1] if k + 1 < len(a) else a[k]) * z ** (p - 1.0), lastk)
            if a[k] == 0.0:
                lastk = np.where(act, 0.0, lastk)
                break
        kvals = [pref * v for v in kvals]
        kerr = 2.0 * np.abs(pref) * lastk
    vals = [alg[d] + kvals[d] for d in range(3)]
    rel = EPS * (8.0 + abs(lc) + np.abs((nu - 1.0) * np.log(z)))
    errs = [alg_err[d] + kerr * 4.0 ** d + rel * (np.abs(alg[d]) + np.abs(kvals[d])) for d in range(3)]
    # the expansion is meaningless while the order is large against the argument
    bad = 2.0 * nu * nu >= z
    if np.any(bad):
        errs = [np.where(bad, np.inf, e) for e in errs]
    return vals, errs


@route("d_nu")
def d_nu_arrays(nu: float, z, max_terms: int = 100_000):
    """Vectorized D_nu, D_nu', D_nu'' with error estimates.

    Returns ``(values, errors, regimes)`` where values and errors are lists of
    three arrays and ``regimes`` an array of strings.
    """
    nu = float(nu)
    if not nu > 0:
        raise DomainError("D_nu requires nu > 0")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(z < 0) or not np.all(np.isfinite(z)):
        raise DomainError("D_nu requires finite z >= 0")
    shape = z.shape
    z = z.ravel()
    vals = [np.full(z.shape, np.nan) for _ in range(3)]
    errs = [np.full(z.shape, np.inf) for _ in range(3)]
    regime = np.full(z.shape, "series", dtype=object)

    asym_mask = z > Z_ASYM
    av = ae = None
    if np.any(asym_mask):
        av, ae = _d_asymptotic(nu, z[asym_mask])
    need_series = z <= Z_DD
    if av is not None:
        inadequate = ~(ae[0] <= 64 * EPS * np.abs(av[0]))
        idx = np.flatnonzero(asym_mask)
        need_series[idx[inadequate & (z[asym_mask] <= Z_SERIES_MAX)]] = True
    sv = se = None
    if np.any(need_series):
        sv, se, _ = _d_series(nu, z[need_series], True, max_terms)
        for d in range(3):
            vals[d][need_series] = sv[d]
            errs[d][need_series] = se[d]
    if av is not None:
        ia = np.flatnonzero(asym_mask)
        both = need_series[ia]
        only_a = ~both
        for d in range(3):
            vals[d][ia[only_a]] = av[d][only_a]
            errs[d][ia[only_a]] = ae[d][only_a]
        regime[ia[only_a]] = "asymptotic"
        if np.any(both):
            pos_s = np.cumsum(need_series) - 1
            js = pos_s[ia[both]]
            for d in range(3):
                a_v, a_e = av[d][both], ae[d][both]
                s_v, s_e = sv[d][js], se[d][js]
                finite = np.isfinite(a_e) & np.isfinite(s_e)
                slack = 8 * EPS * np.abs(s_v)
                if np.any(finite & (np.abs(a_v - s_v) > a_e + s_e + slack)):
                    raise InternalConsistencyError(
                        f"series and asymptotic regimes of D_{nu} disagree near z = {z[ia[both]][0]:.6g}")
                take_a = a_e < s_e
                vals[d][ia[both]] = np.where(take_a, a_v, s_v)
                errs[d][ia[both]] = np.where(take_a, a_e, s_e)
                if d == 0:
                    regime[ia[both]] = np.where(take_a, "overlap:asymptotic", "overlap:series")
    return [v.reshape(shape) for v in vals], [e.reshape(shape) for e in errs], regime.reshape(shape)


def d_nu(nu: float, z: float, cfg: NumericConfig | None = None) -> DifferencePoint:
    """D_nu(z) = I_nu(z) - L_nu(z) with first and second argument derivatives."""
    cfg = _cfg(cfg)
    vals, errs, regime = d_nu_arrays(nu, np.array([float(z)]), cfg.max_terms)
    return DifferencePoint(
        nu=float(nu), z=float(z),
        value=float(vals[0][0]), derivative=float(vals[1][0]), second_derivative=float(vals[2][0]),
        err_est=float(errs[0][0]), derivative_err=float(errs[1][0]), second_err=float(errs[2][0]),
        regime=str(regime[0]), work=1,
    )


def d_nu_values(nu: float, z) -> np.ndarray:
    """Convenience: D_nu values only."""
    return d_nu_arrays(nu, z)[0][0]


def struve_source(nu: float, x):
    """(x/2)^(nu-1) / (sqrt(pi) Gamma(nu+1/2)), the inhomogeneity of the modified Struve equation."""
    x = np.asarray(x, dtype=float)
    return np.exp((nu - 1.0) * np.log(x / 2.0) - gamma_ln(nu + 0.5)) / SQRT_PI


# --------------------------------------------------------------------------
# the modified Struve operator
# --------------------------------------------------------------------------


@route("mse_operator")
def _operator_dd(kind: CylinderKind, nu: float, x: float, compensated: bool, max_terms: int):
    """M[f] = f'' + f'/x - (1 + nu^2/x^2) f combined termwise before rounding."""
    struve = kind is CylinderKind.STRUVE_L
    c = 0.5 if struve else 0.0
    h = np.array([x / 2.0])
    sums = _power_sums(h, nu, c, 1.0, (1.0, 0.0), compensated, max_terms)
    # (S2 + S1 - nu^2 S0) / x^2 - S0
    nsq_hi, nsq_lo = two_prod(nu, nu)
    a_hi, a_lo = dd_add(sums.s2[0], sums.s2[1], sums.s1[0], sums.s1[1])
    b_hi, b_lo = dd_mul(sums.s0[0], sums.s0[1], nsq_hi, nsq_lo)
    a_hi, a_lo = dd_add(a_hi, a_lo, -b_hi, -b_lo)
    x2_hi, x2_lo = two_prod(x, x)
    a_hi, a_lo = dd_div(a_hi, a_lo, x2_hi, x2_lo)
    a_hi, a_lo = dd_add(a_hi, a_lo, -sums.s0[0], -sums.s0[1])
    if struve:
        pref, prel = _prefactor(h, nu + 1.0, nu + 1.5)
        pref = pref / (0.5 * SQRT_PI)
    else:
        pref, prel = _prefactor(h, nu, nu + 1.0)
    val = float(pref[0] * (a_hi[0] + a_lo[0]))
    scale = abs(float(pref[0]))
    err = scale * (float(sums.err(2)[0] + sums.err(1)[0]) / x ** 2
                   + float(sums.err(0)[0]) * (1.0 + nu * nu / x ** 2)) + abs(val) * float(prel[0])
    mag = scale * float(sums.abs2[0] + sums.abs1[0] + nu * nu * sums.abs0[0]) / x ** 2
    return val, err, mag


def mse_residual(coeff_i: float, coeff_l: float, nu: float, x: float,
                 cfg: NumericConfig | None = None) -> EvalResult:
    """Residual M[y] - coeff_l * source for y = coeff_i I_nu + coeff_l L_nu.

    Exact solutions of the modified Struve equation give a residual that is
    zero up to the reported error estimate.
    """
    cfg = _cfg(cfg)
    if not nu > -0.5:
        raise DomainError("mse_residual requires nu > -1/2")
    if not x > 0:
        raise DomainError("mse_residual requires x > 0")
    _overflow_guard(nu, np.array([x]))
    total = 0.0
    err = 0.0
    work = 0
    for coeff, kind in ((coeff_i, CylinderKind.BESSEL_I), (coeff_l, CylinderKind.STRUVE_L)):
        if coeff == 0:
            continue
        v, e, _ = _operator_dd(kind, nu, x, cfg.compensated, cfg.max_terms)
        total += coeff * v
        err += abs(coeff) * e
        work += 1
    src = float(struve_source(nu, x))
    total -= coeff_l * src
    err += abs(coeff_l * src) * 8 * EPS + 4 * EPS * abs(total)
    res = EvalResult(float(total), float(err), work, bool(math.isfinite(total)))
    return res


def i_upper_bound_check(nu: float, x: float, cfg: NumericConfig | None = None) -> bool:
    """True when I_nu(x) < (x/2)^nu / Gamma(nu+1) * exp(x^2 / (4(nu+1)))."""
    if not nu + 1 > 0:
        raise DomainError("i_upper_bound_check requires nu > -1")
    if not x > 0:
        raise DomainError("i_upper_bound_check requires x > 0")
    val = cylinder_eval(CylinderKind.BESSEL_I, nu, x, cfg).value
    lb = nu * math.log(x / 2.0) - gamma_ln(nu + 1.0) + x * x / (4.0 * (nu + 1.0))
    # compare on the log scale to stay finite
    return math.log(val) < lb


__all__ = [
    "CylinderKind",
    "DifferencePoint",
    "bessel_i",
    "bessel_j_array",
    "cylinder_derivatives",
    "cylinder_eval",
    "d_nu",
    "d_nu_arrays",
    "d_nu_values",
    "i_upper_bound_check",
    "mse_residual",
    "struve_l",
    "struve_source",
]
