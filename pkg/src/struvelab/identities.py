"""Two-route verification of series/integral identities.

Each ``check_*`` function evaluates the two sides of one identity through
independent code paths, records which evaluation routines each side touched,
and returns :class:`IdentityReport` objects.  ``REGISTRY`` maps identity ids to
their checkers and parameter grids.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .bessel_struve import CylinderKind, bessel_j_array, cylinder_eval, d_nu, d_nu_arrays, struve_source
from .errors import DomainError, StruvelabError
from .quadrature import (
    EndpointNote,
    Finite,
    QuadratureProblem,
    integrate_bessel_oscillatory,
    integrate_finite,
    integrate_mellin,
    integrate_vertical_line,
)
from .routes import recording
from .scalar_core import (
    EPS,
    SQRT_PI,
    EvalResult,
    NumericConfig,
    _cfg,
    eta,
    gamma,
    gamma_ln,
    hyp2f1,
    hyp_pFq_array,
    lgamma_complex,
    polylog,
    zeta,
    zeta_complex,
)
from .series_engines import (
    CoefficientSequence,
    alternating_sequence,
    cahen_laplace,
    constant_sequence,
    dirichlet_direct,
    kapteyn_bound,
    kapteyn_gegenbauer,
    kapteyn_K,
    log_sequence,
    mathieu_S,
    mathieu_S_array,
    neumann_L,
    omega_ratio,
    schloemilch_T,
    upsilon,
)

TINY = 1e-300

# relative tolerance per identity class
TOL_SERIES = 1e-9
TOL_QUADRATURE = 1e-6
TOL_VERTICAL = 1e-5

# Mellin-strip margin
STRIP_MARGIN = 0.05


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of one identity instance and the verdict."""

    identity_id: str
    params: dict
    lhs: EvalResult
    rhs: EvalResult
    tol: float
    lhs_routes: frozenset = field(default_factory=frozenset)
    rhs_routes: frozenset = field(default_factory=frozenset)
    note: str = ""

    @property
    def abs_residual(self) -> float:
        return abs(self.lhs.value - self.rhs.value)

    @property
    def rel_residual(self) -> float:
        return self.abs_residual / max(abs(self.lhs.value), abs(self.rhs.value), TINY)

    @property
    def converged(self) -> bool:
        return self.lhs.converged and self.rhs.converged

    @property
    def passed(self) -> bool:
        return self.converged and self.abs_residual <= self.lhs.err_est + self.rhs.err_est + self.tol


def _failed_result(exc: Exception) -> EvalResult:
    return EvalResult(math.nan, math.inf, 0, False)


def _two_sides(identity_id: str, params: dict, lhs_fn: Callable[[], EvalResult],
               rhs_fn: Callable[[], EvalResult], rel_tol: float, note: str = "") -> IdentityReport:
    """Evaluate both sides under separate route recorders."""
    notes = [note] if note else []
    with recording() as lr:
        try:
            lhs = lhs_fn()
        except StruvelabError as exc:
            lhs = _failed_result(exc)
            notes.append(f"lhs failed: {exc}")
    with recording() as rr:
        try:
            rhs = rhs_fn()
        except StruvelabError as exc:
            rhs = _failed_result(exc)
            notes.append(f"rhs failed: {exc}")
    scale = max(abs(lhs.value), abs(rhs.value)) if math.isfinite(lhs.value) and math.isfinite(rhs.value) else 0.0
    tol = rel_tol * scale
    return IdentityReport(identity_id, dict(params), lhs, rhs, tol, frozenset(lr), frozenset(rr), "; ".join(notes))


def _combine(value: float, err: float, work: int, cfg: NumericConfig, parts) -> EvalResult:
    return EvalResult.make(value, err, work, cfg, ok=all(p.converged for p in parts))


# 2^(2k) B_(2k) / (2k)!, k = 1..10: coth(y) - 1/y = sum c_k y^(2k-1)
_COTH_COEFFS = (0.3333333333333333, -0.022222222222222223, 0.0021164021164021165, -0.00021164021164021165,
                2.1377799155576935e-05, -2.1644042808063972e-06, 2.1925947851873778e-07,
                -2.2214608789979678e-08, 2.2507846516808994e-09, -2.2805151204592183e-10)


def coth_minus_inv(y) -> np.ndarray:
    """coth(y) - 1/y without cancellation near 0."""
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = np.abs(y) < 0.3
    ys = y[small]
    y2 = ys * ys
    acc = np.zeros_like(ys)
    for c in reversed(_COTH_COEFFS):
        acc = acc * y2 + c
    out[small] = ys * acc
    yb = y[~small]
    out[~small] = 1.0 / np.tanh(yb) - 1.0 / yb
    return out


# --------------------------------------------------------------------------
# Sonin-Gubler
# --------------------------------------------------------------------------


def check_sonin_gubler(nu: float, a: float, n: float, cfg: NumericConfig | None = None) -> IdentityReport:
    """int_0^inf J_nu(a x) / ((x^2+n^2) x^nu) dx = pi / (2 n^(nu+1)) D_nu(a n)."""
    cfg = _cfg(cfg)
    if not (nu > 0 and a > 0 and n > 0):
        raise DomainError("Sonin-Gubler check needs nu, a, n > 0")

    def lhs():
        return integrate_bessel_oscillatory(lambda x: x ** -nu / (x * x + n * n), nu, a, nu + 2.0, cfg)

    def rhs():
        p = d_nu(nu, a * n, cfg)
        c = math.pi / (2.0 * n ** (nu + 1.0))
        return EvalResult.make(c * p.value, c * p.err_est + 4 * EPS * abs(c * p.value), p.work, cfg,
                               ok=math.isfinite(p.err_est))

    return _two_sides("sonin_gubler", {"nu": nu, "a": a, "n": n}, lhs, rhs, TOL_QUADRATURE)


# --------------------------------------------------------------------------
# Neumann expansions
# --------------------------------------------------------------------------


def check_neumann_forms(nu: float, x: float, cfg: NumericConfig | None = None) -> list[IdentityReport]:
    """Each Neumann expansion of L_nu against the direct power series."""
    cfg = _cfg(cfg)
    out = []
    for form in (1, 2, 3):
        out.append(_two_sides(
            "neumann_forms", {"nu": nu, "x": x, "form": form},
            lambda form=form: neumann_L(form, nu, x, cfg),
            lambda: cylinder_eval(CylinderKind.STRUVE_L, nu, x, cfg),
            TOL_SERIES))
    return out


# --------------------------------------------------------------------------
# integral representations of L_nu and I_nu
# --------------------------------------------------------------------------

REPRESENTATIONS = ("thm5", "thm6a", "thm6b", "v6")


def _rep_rhs(nu: float, x: float, which: str, cfg: NumericConfig) -> EvalResult:
    sub = cfg.with_(rel_tol=0.1 * cfg.rel_tol, abs_tol=0.0)
    if which == "v6":
        pref = math.exp((1.0 - nu) * math.log(2.0) + nu * math.log(x) - gamma_ln(nu + 0.5)) / SQRT_PI

        # t = cos(theta) keeps the endpoint singularity free of cancellation
        def f(th):
            return np.sin(th) ** (2.0 * nu) * np.cosh(x * np.cos(th))

        r = integrate_finite(QuadratureProblem(f, Finite(0.0, math.pi / 2),
                                               (EndpointNote("a", "algebraic", exponent=2.0 * nu),)), sub)
        v = pref * r.value
        return EvalResult.make(v, pref * r.err_est + 8 * EPS * abs(v), r.work, cfg, ok=r.converged)
    elif which == "thm6a":
        pref = math.exp((nu + 1.0) * math.log(x) - (nu - 1.0) * math.log(2.0) - gamma_ln(nu + 1.0)) / math.pi

        def f(t):
            omt = (1.0 - t) * (1.0 + t)
            h, _ = hyp_pFq_array([0.5], [1.5, nu + 1.0], -x * x * omt / 4.0, sub)
            return omt ** nu * np.cosh(x * t) * h

        notes = (EndpointNote("b", "algebraic", exponent=nu),)
    elif which == "thm6b":
        pref = math.exp((nu + 1.0) * math.log(x) - nu * math.log(2.0) - gamma_ln(nu + 1.5)) / SQRT_PI

        def f(t):
            omt = (1.0 - t) * (1.0 + t)
            h, _ = hyp_pFq_array([nu + 0.5], [1.0, nu + 1.5], -x * x * omt / 4.0, sub)
            return np.cosh(x * t) * h

        notes = ()
    elif which == "thm5":
        pref = 4.0 * math.exp((nu + 1.0) * math.log(x / 2.0) + gamma_ln(nu + 2.0) - 2.0 * gamma_ln(nu + 1.5)) / math.pi
        up = [0.5, (nu + 3.0) / 2.0, nu + 0.5, nu + 1.0]
        lo = [1.5, (nu + 1.0) / 2.0, nu / 2.0 + 0.75, nu / 2.0 + 1.25, nu + 1.5]

        def f(t):
            omt = (1.0 - t) * (1.0 + t)
            h, _ = hyp_pFq_array(up, lo, -x * x * omt * omt / 16.0, sub)
            return omt ** (nu + 0.5) * np.cosh(x * t) * h

        notes = (EndpointNote("b", "algebraic", exponent=nu + 0.5),)
    else:
        raise DomainError(f"unknown representation {which!r}")
    r = integrate_finite(QuadratureProblem(f, Finite(0.0, 1.0), notes), sub)
    v = pref * r.value
    return EvalResult.make(v, pref * r.err_est + 8 * EPS * abs(v), r.work, cfg, ok=r.converged)


def check_struve_integral_reps(nu: float, x: float, which: str, cfg: NumericConfig | None = None) -> IdentityReport:
    """L_nu (or I_nu for ``v6``) by its power series against a finite-interval integral."""
    cfg = _cfg(cfg)
    if not (nu > -0.5 and x > 0):
        raise DomainError("integral representations need nu > -1/2 and x > 0")
    kind = CylinderKind.BESSEL_I if which == "v6" else CylinderKind.STRUVE_L
    return _two_sides(
        "struve_integral_reps", {"nu": nu, "x": x, "which": which},
        lambda: cylinder_eval(kind, nu, x, cfg),
        lambda: _rep_rhs(nu, x, which, cfg),
        TOL_QUADRATURE)


# --------------------------------------------------------------------------
# Omega-kernel integral and its Cahen cross-check
# --------------------------------------------------------------------------


def _omega_kernel(nu: float):
    def g(x):
        r, _ = omega_ratio(x)
        return r * np.asarray(x, dtype=float) ** -nu
    return g


def check_theorem7(nu: float, a: float, cfg: NumericConfig | None = None) -> IdentityReport:
    """int_0^inf J_nu(a x) Omega(2 pi x) / sinh(pi x) x^-nu dx = sum (-1)^(n-1) n^-nu D_nu(a n)."""
    cfg = _cfg(cfg)
    if not (nu > 0 and a > 0):
        raise DomainError("Omega-kernel check needs nu, a > 0")

    def lhs():
        r = integrate_bessel_oscillatory(_omega_kernel(nu), nu, a, nu + 2.0, cfg)
        # the kernel carries a relative panel error of a few ulps
        return EvalResult.make(r.value, r.err_est + 64 * EPS * abs(r.value), r.work, cfg, ok=r.converged)

    return _two_sides("theorem7", {"nu": nu, "a": a},
                      lhs, lambda: schloemilch_T(nu, nu, a, True, cfg), TOL_QUADRATURE,
                      note=("right side is the alternating Schloemilch series the integral reduces to; "
                            "its Cahen-Laplace evaluation is checked by identity 'cahen' (case=bessel)"))


def bessel_dirichlet_sequence(nu: float, a: float) -> CoefficientSequence:
    """(-1)^(n-1) D_nu(a n) with the extension cos(pi (s-1)) D_nu(a s)."""

    def at(n):
        n = np.asarray(n, dtype=float)
        return np.where(n % 2 == 1, 1.0, -1.0) * d_nu_arrays(nu, a * n)[0][0]

    def smooth(s):
        return np.cos(np.pi * (s - 1.0)) * d_nu_arrays(nu, a * s)[0][0]

    def deriv(s):
        vals = d_nu_arrays(nu, a * s)[0]
        return -np.pi * np.sin(np.pi * (s - 1.0)) * vals[0] + a * np.cos(np.pi * (s - 1.0)) * vals[1]

    return CoefficientSequence(at, smooth, deriv, growth_tag=1.0)


CAHEN_CASES = {
    "zeta3": (lambda: constant_sequence(), 3.0),
    "eta2": (lambda: alternating_sequence(), 2.0),
}


def check_cahen(case: str, cfg: NumericConfig | None = None, nu: float = 0.5, a: float = 1.0) -> IdentityReport:
    """Cahen-Laplace engine against direct Dirichlet summation.

    ``case`` is ``"zeta3"``, ``"eta2"`` or ``"bessel"`` (coefficients
    (-1)^(n-1) D_nu(a n) with r = nu, the Dirichlet series behind the Omega-kernel identity).
    """
    cfg = _cfg(cfg)
    if case == "bessel":
        seq = bessel_dirichlet_sequence(nu, a)
        r = nu
        params = {"case": case, "nu": nu, "a": a}
    elif case in CAHEN_CASES:
        make, r = CAHEN_CASES[case]
        seq = make()
        params = {"case": case}
    else:
        raise DomainError(f"unknown Cahen case {case!r}")
    lam = log_sequence()
    return _two_sides("cahen", params,
                      lambda: cahen_laplace(seq, np.exp, r, cfg),
                      lambda: dirichlet_direct(seq, lam, r, cfg),
                      TOL_QUADRATURE)


# --------------------------------------------------------------------------
# Mathieu-kernel integral
# --------------------------------------------------------------------------


def _theorem8_rhs(nu: float, a: float, cfg: NumericConfig) -> EvalResult:
    sub = cfg.with_(rel_tol=0.1 * cfg.rel_tol, abs_tol=0.0)

    def f(t):
        t = np.asarray(t, dtype=float)
        h = np.array([hyp2f1(0.5, 0.5 - nu, 1.5, float(tt * tt), sub).value for tt in t.ravel()]).reshape(t.shape)
        return t * t / np.expm1(a * t) * h

    r = integrate_finite(QuadratureProblem(f, Finite(0.0, 1.0), (EndpointNote("a", "removable", limit=0.0),)), sub)
    c1 = math.exp(0.5 * math.log(math.pi) + (nu + 2.0) * math.log(a) - nu * math.log(2.0) - gamma_ln(nu + 0.5))
    q = math.exp(-a)
    li2 = polylog(2.0, q, sub)
    li1 = -math.log1p(-q)
    c2 = math.pi * math.exp(nu * math.log(a) - (nu + 1.0) * math.log(2.0) - gamma_ln(nu + 1.0))
    v = c1 * r.value + c2 * (li2.value + a * li1)
    err = c1 * r.err_est + c2 * li2.err_est + 8 * EPS * (abs(c1 * r.value) + abs(c2) * (li2.value + a * li1))
    return _combine(v, err, r.work + li2.work, cfg, [r, li2])


def check_theorem8(nu: float, a: float, cfg: NumericConfig | None = None) -> IdentityReport:
    """int_0^inf J_nu(a x) S(x) x^-nu dx against its hypergeometric/dilogarithm closed form."""
    cfg = _cfg(cfg)
    if not (nu > 0 and a > 0):
        raise DomainError("Mathieu-kernel check needs nu, a > 0")

    def lhs():
        return integrate_bessel_oscillatory(lambda x: mathieu_S_array(x) * x ** -nu, nu, a, nu + 2.0, cfg)

    return _two_sides("theorem8", {"nu": nu, "a": a}, lhs, lambda: _theorem8_rhs(nu, a, cfg), TOL_QUADRATURE)


# --------------------------------------------------------------------------
# coth-kernel integral
# --------------------------------------------------------------------------


def check_theorem12(nu: float, x: float, cfg: NumericConfig | None = None) -> IdentityReport:
    """T_{nu,nu+1}(x) = int_0^inf J_nu(x t) (coth(pi t) - 1/(pi t)) t^(-nu-1) dt."""
    cfg = _cfg(cfg)
    if not (nu > 0 and x > 0):
        raise DomainError("coth-kernel check needs nu, x > 0")

    def rhs():
        def g(t):
            return coth_minus_inv(np.pi * t) * t ** (-nu - 1.0)
        return integrate_bessel_oscillatory(g, nu, x, nu + 1.0, cfg)

    return _two_sides("theorem12", {"nu": nu, "x": x},
                      lambda: schloemilch_T(nu, nu + 1.0, x, False, cfg), rhs, TOL_QUADRATURE)


# --------------------------------------------------------------------------
# Mellin kernel and the Mellin-Barnes line integral
# --------------------------------------------------------------------------


def _strip_guard(nu: float, p: float) -> None:
    if not (nu + STRIP_MARGIN <= p <= nu + 1.0 - STRIP_MARGIN):
        raise DomainError(f"p = {p} is outside the strip ({nu}+{STRIP_MARGIN}, {nu}+1-{STRIP_MARGIN})")


def check_mellin_kernel(nu: float, p: float, cfg: NumericConfig | None = None) -> IdentityReport:
    """int_0^inf x^(p-nu-2) (coth(pi x) - 1/(pi x)) dx = B((p-nu)/2, (nu-p)/2+1) zeta(nu-p+2) / pi."""
    cfg = _cfg(cfg)
    if not nu > 0:
        raise DomainError("Mellin-kernel check needs nu > 0")
    _strip_guard(nu, p)
    e = p - nu

    def lhs():
        def f(x):
            return x ** (e - 2.0) * coth_minus_inv(np.pi * x)
        return integrate_mellin(f, cfg.with_(rel_tol=0.1 * cfg.rel_tol), origin_exponent=e - 1.0,
                                decay_exponent=e - 2.0)

    def rhs():
        u, w = e / 2.0, 1.0 - e / 2.0
        beta = gamma(u) * gamma(w) / gamma(u + w)
        z = zeta(2.0 - e)
        v = beta * z / math.pi
        return EvalResult.make(v, 16 * EPS * abs(v), 4, cfg)

    return _two_sides("mellin_kernel", {"nu": nu, "p": p}, lhs, rhs, TOL_QUADRATURE)


def theorem15_integrand(nu: float, x: float, c: float | None = None):
    """t -> integrand of the line integral at p = c + i t (default c = nu + 1/2)."""
    c = nu + 0.5 if c is None else c
    lx = math.log(x)
    ln2 = math.log(2.0)

    def f(t):
        p = c + 1j * np.asarray(t, dtype=float)
        lg = lgamma_complex((nu - p) / 2.0 + 0.5) - lgamma_complex((nu + p) / 2.0 + 0.5)
        z = zeta_complex(nu - p + 2.0)
        s = np.sin(np.pi * (p - nu) / 2.0)
        return np.exp(lg - p * ln2 + (p - 1.0) * lx) * z / s

    return f


def check_theorem15(nu: float, x: float, cfg: NumericConfig | None = None) -> IdentityReport:
    """T_{nu,nu+1}(x) against the Mellin-Barnes line integral on Re p = nu + 1/2."""
    cfg = _cfg(cfg)
    if not (nu > 0 and x > 0):
        raise DomainError("line-integral check needs nu, x > 0")

    def rhs():
        r = integrate_vertical_line(theorem15_integrand(nu, x), nu + 0.5, cfg.with_(rel_tol=0.1 * cfg.rel_tol),
                                    decay=math.pi / 2)
        c = 1.0 / (2.0 * math.pi)
        return EvalResult.make(c * r.value, c * r.err_est, r.work, cfg, ok=r.converged)

    return _two_sides("theorem15", {"nu": nu, "x": x},
                      lambda: schloemilch_T(nu, nu + 1.0, x, False, cfg), rhs, TOL_VERTICAL)


# --------------------------------------------------------------------------
# differential-equation suite
# --------------------------------------------------------------------------

ODE_VARIANTS = ("mse", "schloemilch", "schloemilch_alt", "kapteyn")


def _operator_from(parts, x: float, nu: float, cfg: NumericConfig) -> EvalResult:
    """y'' + y'/x - (1 + nu^2/x^2) y from (y, y', y'') results."""
    y0, y1, y2 = parts
    c0 = 1.0 + nu * nu / (x * x)
    v = y2.value + y1.value / x - c0 * y0.value
    err = y2.err_est + y1.err_est / x + c0 * y0.err_est
    err += 4 * EPS * (abs(y2.value) + abs(y1.value / x) + c0 * abs(y0.value))
    return _combine(v, err, sum(p.work for p in parts), cfg, parts)


def _kapteyn_source(alpha: CoefficientSequence, nu: float, mu: float, x: float, cfg: NumericConfig) -> EvalResult:
    """(2/(x sqrt(pi))) sum alpha_n (x n/2)^(nu n) / (Gamma(nu n + 1/2) n^(mu+1))."""
    total = 0.0
    small = 0
    n = 1
    term = 0.0
    while n <= cfg.max_terms:
        a_n = float(alpha.at(np.array([n]))[0])
        lg = nu * n * math.log(x * n / 2.0) - gamma_ln(nu * n + 0.5) - (mu + 1.0) * math.log(n)
        term = a_n * math.exp(lg)
        total += term
        if abs(term) <= 1e-3 * cfg.rel_tol * abs(total):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        n += 1
    c = 2.0 / (x * SQRT_PI)
    v = c * total
    return EvalResult.make(v, c * (10 * abs(term) + 4 * EPS * n * abs(total)), n, cfg, ok=small >= 3)


def check_ode_suite(nu: float, mu: float, x: float, variant: str, cfg: NumericConfig | None = None,
                    alpha: CoefficientSequence | None = None) -> IdentityReport:
    """Modified Struve operator M[y] = y'' + y'/x - (1 + nu^2/x^2) y applied termwise.

    mse:             M[D_nu](x) = -(x/2)^(nu-1) / (sqrt(pi) Gamma(nu+1/2))
    schloemilch:     sum n^-mu M[D_nu](n x)-argument form, i.e.
                     sum n^-mu [D''(n x) + D'(n x)/x - (1 + nu^2/x^2) D(n x)]
                     = (1/x) sum (n-1) n^-(mu+1) D'(n x) - (nu^2/x^2) Upsilon^2_{mu+2}
                       - zeta(mu-nu+1) (x/2)^(nu-1) / (sqrt(pi) Gamma(nu+1/2))
    schloemilch_alt: the same with alternating signs and eta in place of zeta
    kapteyn:         sum alpha_n n^-mu [D''_{nu n}(n x) + D'_{nu n}(n x)/x - (1 + nu^2/x^2) D_{nu n}(n x)]
                     = (1/x) sum alpha_n (n-1) n^-(mu+1) D'_{nu n}(n x)
                       - (2/(x sqrt(pi))) sum alpha_n (x n/2)^(nu n) / (Gamma(nu n + 1/2) n^(mu+1))
    """
    cfg = _cfg(cfg)
    if variant not in ODE_VARIANTS:
        raise DomainError(f"unknown ODE variant {variant!r}")
    if not x > 0:
        raise DomainError("ODE checks need x > 0")
    params = {"nu": nu, "mu": mu, "x": x, "variant": variant}
    src = float(struve_source(nu, x))

    if variant == "mse":
        def lhs():
            p = d_nu(nu, x, cfg)
            parts = [EvalResult.make(v, e, 1, cfg, ok=math.isfinite(e)) for v, e in
                     ((p.value, p.err_est), (p.derivative, p.derivative_err), (p.second_derivative, p.second_err))]
            return _operator_from(parts, x, nu, cfg)

        def rhs():
            return EvalResult.make(-src, 8 * EPS * src, 1, cfg)

        return _two_sides("ode_suite", params, lhs, rhs, TOL_SERIES)

    if variant in ("schloemilch", "schloemilch_alt"):
        alt = variant == "schloemilch_alt"
        if alt:
            if not (mu > nu > 0):
                raise DomainError("alternating ODE check needs mu > nu > 0")
        elif not (mu - 1.0 > nu > 0):
            raise DomainError("ODE check needs mu - 1 > nu > 0")

        def lhs():
            parts = [schloemilch_T(nu, mu, x, alt, cfg, deriv=d) for d in (0, 1, 2)]
            return _operator_from(parts, x, nu, cfg)

        def rhs():
            u1 = upsilon(nu, mu + 1.0, 1, x, alt, cfg, deriv=1)
            u2 = upsilon(nu, mu + 2.0, 2, x, alt, cfg, deriv=0)
            s = mu - nu + 1.0
            zv = eta(s) if alt else zeta(s)
            v = u1.value / x - nu * nu / (x * x) * u2.value - zv * src
            err = u1.err_est / x + nu * nu / (x * x) * u2.err_est + 16 * EPS * abs(zv * src)
            err += 4 * EPS * (abs(u1.value / x) + abs(nu * nu / (x * x) * u2.value))
            return _combine(v, err, u1.work + u2.work, cfg, [u1, u2])

        return _two_sides("ode_suite", params, lhs, rhs, TOL_QUADRATURE)

    alpha = alpha or constant_sequence()

    def lhs():
        parts = [kapteyn_K(alpha, nu, mu, x, cfg, deriv=d) for d in (0, 1, 2)]
        return _operator_from(parts, x, nu, cfg)

    def rhs():
        k1 = kapteyn_K(alpha, nu, mu + 1.0, x, cfg, deriv=1, weight_shift=1.0)
        s = _kapteyn_source(alpha, nu, mu, x, cfg)
        v = k1.value / x - s.value
        err = k1.err_est / x + s.err_est + 4 * EPS * (abs(k1.value / x) + abs(s.value))
        return _combine(v, err, k1.work + s.work, cfg, [k1, s])

    return _two_sides("ode_suite", params, lhs, rhs, TOL_QUADRATURE)


# --------------------------------------------------------------------------
# Mathieu series routes and Kapteyn routes
# --------------------------------------------------------------------------


def check_mathieu(x: float, alternating: bool, cfg: NumericConfig | None = None) -> IdentityReport:
    """Mathieu series S (or S~) against its exponential-kernel integral."""
    cfg = _cfg(cfg)
    return _two_sides("mathieu", {"x": x, "alternating": alternating},
                      lambda: mathieu_S(x, alternating, "series", cfg),
                      lambda: mathieu_S(x, alternating, "integral", cfg), TOL_QUADRATURE)


def check_kapteyn_routes(nu: float, mu: float, x: float, cfg: NumericConfig | None = None,
                         alpha: CoefficientSequence | None = None) -> IdentityReport:
    """K_{nu,mu+1}(x) by direct summation against the Gegenbauer integral."""
    cfg = _cfg(cfg)
    alpha = alpha or constant_sequence()
    return _two_sides("kapteyn_routes", {"nu": nu, "mu": mu, "x": x},
                      lambda: kapteyn_K(alpha, nu, mu + 1.0, x, cfg),
                      lambda: kapteyn_gegenbauer(alpha, nu, mu, x, cfg), TOL_QUADRATURE)


# --------------------------------------------------------------------------
# registry, grids and route manifests
# --------------------------------------------------------------------------


def _product(**axes):
    keys = list(axes)
    return [dict(zip(keys, vals)) for vals in itertools.product(*(axes[k] for k in keys))]


def _kapteyn_grid(fracs):
    pts = []
    for nu in (0.5, 0.8):
        bound = kapteyn_bound(constant_sequence(), nu)
        for f in fracs:
            pts.append({"nu": nu, "mu": 1.2, "x": round(f * bound, 12)})
    return pts


def _ode_grid(fine: bool):
    xs = (0.5, 1.0, 3.0) if not fine else (0.25, 0.5, 1.0, 2.0, 3.0, 6.0)
    pts = [{"nu": nu, "mu": 0.0, "x": x, "variant": "mse"} for nu in (0.3, 1.0, 2.7) for x in xs]
    sx = (0.5, 1.0, 2.0) if not fine else (0.25, 0.5, 1.0, 2.0, 4.0)
    for nu, mu in ((0.5, 2.0), (1.0, 2.5), (1.5, 3.0)):
        pts += [{"nu": nu, "mu": mu, "x": x, "variant": "schloemilch"} for x in sx]
    for nu, mu in ((0.5, 1.5), (1.0, 2.0), (1.5, 2.0)):
        pts += [{"nu": nu, "mu": mu, "x": x, "variant": "schloemilch_alt"} for x in sx]
    for nu in (0.5, 0.8):
        bound = kapteyn_bound(constant_sequence(), nu)
        fr = (0.3, 0.6) if not fine else (0.15, 0.3, 0.45, 0.6, 0.75)
        pts += [{"nu": nu, "mu": 2.0, "x": round(f * bound, 12), "variant": "kapteyn"} for f in fr]
    return pts


@dataclass(frozen=True)
class IdentitySpec:
    checker: Callable
    default_grid: list
    fine_grid: list
    lhs_routes: frozenset
    rhs_routes: frozenset
    lhs_exclusive: frozenset
    rhs_exclusive: frozenset


def _fs(*names):
    return frozenset(names)


_QUAD = _fs("quad_finite", "quad_semi_infinite", "quad_oscillatory", "quad_vertical_line")

REGISTRY: dict[str, IdentitySpec] = {
    "sonin_gubler": IdentitySpec(
        check_sonin_gubler,
        _product(nu=(0.6, 1.0, 1.5, 2.5), a=(0.5, 1.0, 2.0), n=(1.0, 2.0, 5.0)),
        _product(nu=(0.3, 0.6, 1.0, 1.5, 2.5, 3.5), a=(0.25, 0.5, 1.0, 2.0, 4.0), n=(1.0, 2.0, 5.0)),
        _fs("quad_oscillatory", "bessel_j", "power_series"), _fs("d_nu"),
        _fs("quad_oscillatory", "bessel_j", "power_series"), _fs("d_nu")),
    "neumann_forms": IdentitySpec(
        check_neumann_forms,
        _product(nu=(0.25, 1.0, 2.0), x=(0.1, 0.5, 1.0, 1.9)),
        _product(nu=(0.1, 0.25, 0.5, 1.0, 2.0, 3.5), x=(0.05, 0.1, 0.5, 1.0, 1.9, 4.0)),
        _fs("neumann_L", "power_series"), _fs("power_series"),
        _fs("neumann_L"), _fs()),
    "struve_integral_reps": IdentitySpec(
        check_struve_integral_reps,
        _product(nu=(0.6, 1.0, 1.5), x=(0.5, 1.0, 2.0), which=REPRESENTATIONS),
        _product(nu=(0.1, 0.6, 1.0, 1.5, 2.5), x=(0.25, 0.5, 1.0, 2.0, 4.0), which=REPRESENTATIONS),
        _fs("power_series"), _fs("quad_finite", "hyp_pFq"),
        _fs("power_series"), _fs("quad_finite", "hyp_pFq")),
    "theorem7": IdentitySpec(
        check_theorem7,
        _product(nu=(0.5, 1.0), a=(0.5, 1.0)),
        _product(nu=(0.5, 0.75, 1.0, 1.5), a=(0.25, 0.5, 1.0, 2.0)),
        _fs("quad_oscillatory", "bessel_j", "power_series", "omega_ratio"), _fs("schloemilch", "d_nu", "hurwitz_zeta"),
        _fs("quad_oscillatory", "bessel_j", "omega_ratio"), _fs("schloemilch", "d_nu")),
    "cahen": IdentitySpec(
        check_cahen,
        [{"case": "zeta3"}, {"case": "eta2"}, {"case": "bessel", "nu": 0.5, "a": 1.0},
         {"case": "bessel", "nu": 1.0, "a": 1.0}],
        [{"case": "zeta3"}, {"case": "eta2"}]
        + [{"case": "bessel", "nu": nu, "a": a} for nu in (0.5, 1.0, 1.5) for a in (0.5, 1.0, 2.0)],
        _fs("cahen_laplace", "d_nu"), _fs("dirichlet_direct", "d_nu"),
        _fs("cahen_laplace"), _fs("dirichlet_direct")),
    "theorem8": IdentitySpec(
        check_theorem8,
        _product(nu=(1.0, 1.5), a=(1.0, 2.0)),
        _product(nu=(1.0, 1.5, 2.0), a=(0.5, 1.0, 2.0, 4.0)),
        _fs("quad_oscillatory", "bessel_j", "power_series", "mathieu_series"), _fs("quad_finite", "hyp2f1", "hyp_pFq", "polylog"),
        _fs("quad_oscillatory", "mathieu_series"), _fs("quad_finite", "hyp2f1", "polylog")),
    "theorem12": IdentitySpec(
        check_theorem12,
        _product(nu=(0.5, 1.0, 1.5), x=(0.5, 1.0, 2.0)),
        _product(nu=(0.3, 0.5, 1.0, 1.5, 2.5), x=(0.25, 0.5, 1.0, 2.0, 4.0)),
        _fs("schloemilch", "d_nu", "hurwitz_zeta"), _fs("quad_oscillatory", "bessel_j", "power_series"),
        _fs("schloemilch", "d_nu"), _fs("quad_oscillatory", "bessel_j", "power_series")),
    "mellin_kernel": IdentitySpec(
        check_mellin_kernel,
        [{"nu": nu, "p": nu + d} for nu in (0.5, 1.0) for d in (0.25, 0.5, 0.75)],
        [{"nu": nu, "p": nu + d} for nu in (0.25, 0.5, 1.0, 2.0) for d in (0.1, 0.25, 0.5, 0.75, 0.9)],
        _fs("quad_semi_infinite"), _fs("zeta", "hurwitz_zeta"),
        _fs("quad_semi_infinite"), _fs("zeta")),
    "theorem15": IdentitySpec(
        check_theorem15,
        _product(nu=(0.5, 1.0), x=(0.5, 1.0, 2.0)),
        _product(nu=(0.3, 0.5, 1.0, 1.5), x=(0.25, 0.5, 1.0, 2.0, 4.0)),
        _fs("schloemilch", "d_nu", "hurwitz_zeta"), _fs("quad_vertical_line", "zeta_complex"),
        _fs("schloemilch", "d_nu"), _fs("quad_vertical_line", "zeta_complex")),
    "ode_suite": IdentitySpec(
        check_ode_suite,
        _ode_grid(False),
        _ode_grid(True),
        _fs("d_nu", "schloemilch", "hurwitz_zeta", "kapteyn"),
        _fs("upsilon", "d_nu", "hurwitz_zeta", "zeta", "eta", "kapteyn"),
        _fs(), _fs("upsilon", "zeta", "eta")),
    "mathieu": IdentitySpec(
        check_mathieu,
        _product(x=(0.5, 1.0, 2.0, 5.0), alternating=(False, True)),
        _product(x=(0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 10.0), alternating=(False, True)),
        _fs("mathieu_series"), _fs("mathieu_integral", "quad_semi_infinite"),
        _fs("mathieu_series"), _fs("mathieu_integral", "quad_semi_infinite")),
    "kapteyn_routes": IdentitySpec(
        check_kapteyn_routes,
        _kapteyn_grid((0.3, 0.6)),
        _kapteyn_grid((0.1, 0.3, 0.5, 0.6, 0.8)),
        _fs("kapteyn", "d_nu"), _fs("kapteyn_gegenbauer", "quad_finite"),
        _fs("kapteyn", "d_nu"), _fs("kapteyn_gegenbauer", "quad_finite")),
}


def grid_for(identity_id: str, grid: str = "default") -> list[dict]:
    spec = REGISTRY[identity_id]
    if grid == "default":
        return list(spec.default_grid)
    if grid == "fine":
        return list(spec.fine_grid)
    raise DomainError(f"unknown grid preset {grid!r}")


def run_identity(identity_id: str, params: dict, cfg: NumericConfig | None = None) -> list[IdentityReport]:
    """Run one identity at one parameter point; always returns a list."""
    if identity_id not in REGISTRY:
        raise KeyError(identity_id)
    out = REGISTRY[identity_id].checker(**params, cfg=cfg)
    return out if isinstance(out, list) else [out]


def verify(identity_ids, grid="default", cfg: NumericConfig | None = None) -> list[IdentityReport]:
    """Run identities over a named grid or an explicit list of parameter dicts."""
    reports = []
    for iid in identity_ids:
        points = grid_for(iid, grid) if isinstance(grid, str) else grid
        for params in points:
            reports.extend(run_identity(iid, params, cfg))
    return reports


__all__ = [
    "IdentityReport",
    "IdentitySpec",
    "ODE_VARIANTS",
    "REGISTRY",
    "REPRESENTATIONS",
    "check_cahen",
    "check_kapteyn_routes",
    "check_mathieu",
    "check_mellin_kernel",
    "check_neumann_forms",
    "check_ode_suite",
    "check_sonin_gubler",
    "check_struve_integral_reps",
    "check_theorem7",
    "check_theorem8",
    "check_theorem12",
    "check_theorem15",
    "coth_minus_inv",
    "grid_for",
    "run_identity",
    "verify",
]
