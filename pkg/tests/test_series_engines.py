import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from struvelab.bessel_struve import CylinderKind, cylinder_eval, d_nu, d_nu_arrays
from struvelab.errors import DivergenceError, DomainError, UsageError
from struvelab.identities import bessel_dirichlet_sequence
from struvelab.scalar_core import NumericConfig, eta, polylog, zeta
from struvelab.series_engines import (
    CoefficientSequence,
    alternating_sequence,
    cahen_laplace,
    constant_sequence,
    dirichlet_direct,
    frac_operator,
    hamburger_sum,
    kapteyn_bound,
    kapteyn_gegenbauer,
    kapteyn_K,
    log_sequence,
    mathieu_S,
    neumann_L,
    omega,
    omega_ratio,
    power_sequence,
    schloemilch_T,
    upsilon,
)

mp.mp.dps = 30
C = math.sqrt(2 / math.pi)


def t_half_closed(x):
    """T_{1/2,3/2}(x) from D_{1/2}(z) = sqrt(2/(pi z)) (1 - e^-z)."""
    return C / math.sqrt(x) * (math.pi ** 2 / 6 - polylog(2.0, math.exp(-x)).value)


def _identity_sequence():
    return CoefficientSequence(lambda n: np.asarray(n, dtype=float), lambda s: s, lambda s: np.ones_like(s))


# --- sequences -------------------------------------------------------------------


@pytest.mark.parametrize("seq", [constant_sequence(), alternating_sequence(), power_sequence(-1.5), log_sequence(),
                                 bessel_dirichlet_sequence(0.5, 1.0)])
def test_smooth_extension_consistent(seq):
    assert seq.consistent()


@given(st.floats(1.0, 50.0))
def test_frac_operator(x):
    a = lambda s: s * s  # noqa: E731
    da = lambda s: 2 * s  # noqa: E731
    v = frac_operator(a, da, x)
    assert v == pytest.approx(x * x + (x - math.floor(x)) * 2 * x)
    n = float(math.floor(x))
    assert frac_operator(a, da, n) == n * n


# --- Dirichlet series ----------------------------------------------------------------


def test_direct_geometric():
    r = dirichlet_direct(constant_sequence(), _identity_sequence(), 1.0)
    assert r.value == pytest.approx(1 / (math.e - 1), rel=1e-14)


@pytest.mark.parametrize("seq, r, exact", [
    (alternating_sequence(), 2.0, math.pi ** 2 / 12),
    (constant_sequence(), 3.0, 1.2020569031595942854),
])
def test_direct_and_cahen(seq, r, exact):
    d = dirichlet_direct(seq, log_sequence(), r)
    c = cahen_laplace(seq, np.exp, r)
    assert abs(d.value - exact) <= d.err_est + 1e-15
    assert abs(c.value - exact) <= c.err_est + 1e-15
    assert abs(c.value - d.value) <= c.err_est + d.err_est


def test_cahen_bessel_coefficients():
    # oracle: mpmath nsum of (-1)^(n-1) n^(-1/2) (I_1/2(n) - L_1/2(n)) at 40 digits
    exact = 0.30310476977097470047
    seq = bessel_dirichlet_sequence(0.5, 1.0)
    c = cahen_laplace(seq, np.exp, 0.5)
    d = dirichlet_direct(seq, log_sequence(), 0.5)
    assert abs(c.value - d.value) <= c.err_est + d.err_est
    assert abs(c.value - exact) <= c.err_est
    assert abs(d.value - exact) <= d.err_est


@pytest.mark.parametrize("rel_tol", [1e-10, 1e-11, 1e-12])
def test_cahen_refines_with_tolerance(rel_tol):
    c = cahen_laplace(constant_sequence(), np.exp, 3.0, NumericConfig(rel_tol=rel_tol))
    assert c.converged
    assert abs(c.value - 1.2020569031595942854) <= c.err_est


def test_cahen_flags_unreachable_tolerance():
    c = cahen_laplace(constant_sequence(), np.exp, 3.0, NumericConfig(rel_tol=1e-14))
    assert not c.converged
    assert abs(c.value - 1.2020569031595942854) <= c.err_est


def test_cahen_needs_extension():
    seq = CoefficientSequence(lambda n: np.ones(np.shape(n)))
    with pytest.raises(UsageError):
        cahen_laplace(seq, np.exp, 2.0)


# --- Neumann expansions ---------------------------------------------------------------


@pytest.mark.parametrize("form", [1, 2, 3])
@pytest.mark.parametrize("nu, x", [(0.5, 1.0), (1.0, 1.5), (2.3, 0.7), (0.25, 1.9)])
def test_neumann_forms(form, nu, x):
    r = neumann_L(form, nu, x)
    ref = cylinder_eval(CylinderKind.STRUVE_L, nu, x)
    assert r.converged
    assert abs(r.value - ref.value) <= 1e-12 * ref.value + r.err_est + ref.err_est


def test_neumann_half_closed_form():
    assert neumann_L(2, 0.5, 1.0).value == pytest.approx(C * (math.cosh(1) - 1), rel=1e-13)


def test_neumann_small_x():
    assert abs(neumann_L(1, 1.0, 1e-8).value) <= 1e-16


def test_neumann_form1_pole():
    with pytest.raises(DomainError):
        neumann_L(1, -2.0, 1.0)


# --- Schloemilch and Upsilon ------------------------------------------------------------


@pytest.mark.parametrize("x", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_schloemilch_half_closed_form(x):
    r = schloemilch_T(0.5, 1.5, x)
    assert r.converged
    assert r.value == pytest.approx(t_half_closed(x), rel=1e-10)


def test_schloemilch_at_zero():
    assert schloemilch_T(1.0, 2.5, 0.0).value == 0.0


def test_schloemilch_alternating_brute_force():
    # oracle: mpmath nsum of (-1)^(n-1) n^(-5/2) (I_1 - L_1)(0.7 n) at 40 digits
    r = schloemilch_T(1.0, 2.5, 0.7, alternating=True)
    assert abs(r.value - 0.21261535791988796016) <= max(r.err_est, 1e-15)


@pytest.mark.parametrize("nu, mu, alt", [(1.0, 0.9, False), (1.0, 1.0, False), (2.5, 1.4, True)])
def test_schloemilch_guard(nu, mu, alt):
    with pytest.raises(DomainError):
        schloemilch_T(nu, mu, 1.0, alternating=alt)


@pytest.mark.parametrize("nu, mu, x, alt", [(0.5, 2.7, 1.0, False), (1.0, 3.5, 0.4, False), (1.2, 2.6, 2.0, True)])
def test_upsilon_telescoping(nu, mu, x, alt):
    # per term: (n - 1) n^-mu = n^-(mu-1) - n^-mu, the n = 1 term vanishes
    n = np.arange(1, 200, dtype=float)
    d = d_nu_arrays(nu, n * x)[0][0]
    sign = np.where(n % 2 == 1, 1.0, -1.0) if alt else 1.0
    lhs_terms = sign * (n - 1) * n ** -mu * d
    rhs_terms = sign * (n ** -(mu - 1) - n ** -mu) * d
    assert np.allclose(lhs_terms, rhs_terms, rtol=1e-14, atol=0)
    u = upsilon(nu, mu, 1, x, alt)
    t = schloemilch_T(nu, mu - 1, x, alt).value - schloemilch_T(nu, mu, x, alt).value
    assert u.value == pytest.approx(t, rel=1e-12)


def test_upsilon_closed_form():
    # sum_{n>=2} (n^2-1) n^-3 D_1/2(n) collapses to zeta and polylog values
    q = math.exp(-1)
    exact = C * ((zeta(1.5) - 1) - (polylog(1.5, q).value - q) - (zeta(3.5) - 1) + (polylog(3.5, q).value - q))
    r = upsilon(0.5, 3.0, 2, 1.0)
    assert r.value == pytest.approx(exact, rel=1e-11)
    qm = mp.exp(-1)
    ref = mp.sqrt(2 / mp.pi) * (mp.zeta(1.5) - mp.polylog(1.5, qm) - mp.zeta(3.5) + mp.polylog(3.5, qm))
    assert r.value == pytest.approx(float(ref), rel=1e-12)


def test_upsilon_zero_and_guard():
    assert upsilon(1.0, 3.5, 2, 0.0).value == 0.0
    with pytest.raises(DomainError):
        upsilon(1.0, 2.5, 2, 1.0)


# --- Kapteyn --------------------------------------------------------------------------


def test_kapteyn_brute_force():
    # oracle: mpmath nsum of n^-2 (I_{0.8 n} - L_{0.8 n})(0.3 n) at 40 digits
    r = kapteyn_K(constant_sequence(), 0.8, 2.0, 0.3)
    assert abs(r.value - 0.23289426550579611006) <= max(r.err_est, 1e-15)


def test_kapteyn_small_x():
    # the n = 1 term dominates: K ~ (x/2)^nu / Gamma(nu+1) -> 0
    x = 1e-6
    lead = (x / 2) ** 0.8 / math.gamma(1.8)
    assert kapteyn_K(constant_sequence(), 0.8, 2.0, x).value == pytest.approx(lead, rel=1e-4)


def test_kapteyn_guard():
    assert kapteyn_bound(constant_sequence(), 0.8) == pytest.approx(2 * 0.8 / math.e)
    with pytest.raises(DivergenceError):
        kapteyn_K(constant_sequence(), 0.8, 2.0, 0.7)
    with pytest.raises(DivergenceError):
        kapteyn_gegenbauer(constant_sequence(), 0.8, 1.2, 0.7)


def test_gegenbauer_matches_kapteyn():
    g = kapteyn_gegenbauer(constant_sequence(), 0.8, 1.2, 0.3)
    k = kapteyn_K(constant_sequence(), 0.8, 2.2, 0.3)
    assert abs(g.value - k.value) <= g.err_est + k.err_est
    assert k.value == pytest.approx(0.22894417831554335280, rel=1e-12)


def test_gegenbauer_weighted_brute_force():
    # oracle: mpmath nsum of n^-3 (I_{n/2} - L_{n/2})(0.2 n) at 40 digits
    g = kapteyn_gegenbauer(power_sequence(-1.0), 0.5, 1.0, 0.2)
    assert abs(g.value - 0.34981809883470044775) <= g.err_est + 1e-15


@pytest.mark.parametrize("nu", [0.5, 0.8, 1.2])
@pytest.mark.parametrize("frac", [0.2, 0.4, 0.6])
def test_kapteyn_routes_grid(nu, frac):
    x = frac * kapteyn_bound(constant_sequence(), nu)
    g = kapteyn_gegenbauer(constant_sequence(), nu, 1.2 + nu, x)
    k = kapteyn_K(constant_sequence(), nu, 2.2 + nu, x)
    assert abs(g.value - k.value) <= g.err_est + k.err_est


# --- Mathieu, Omega, Hamburger ---------------------------------------------------------


def test_mathieu_at_zero():
    assert mathieu_S(0.0).value == pytest.approx(2 * zeta(3.0), rel=1e-14)
    assert mathieu_S(0.0, alternating=True).value == pytest.approx(1.5 * zeta(3.0), rel=1e-14)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("alt", [False, True])
def test_mathieu_routes(x, alt):
    s = mathieu_S(x, alt, "series")
    i = mathieu_S(x, alt, "integral")
    assert s.converged and i.converged
    assert abs(s.value - i.value) <= s.err_est + i.err_est


def test_mathieu_integral_needs_positive_x():
    with pytest.raises(DomainError):
        mathieu_S(0.0, route="integral")


def test_omega_basics():
    assert omega(0.0).value == 0.0
    assert omega(-2.0).value == pytest.approx(-omega(2.0).value, rel=1e-15)


def test_omega_routes():
    w = 2 * math.pi * 1.3
    a = omega(w, "integral")
    b = omega(w, "partial_fraction")
    assert abs(a.value - b.value) <= a.err_est + b.err_est


@pytest.mark.parametrize("x", [0.0, 0.1, 1.0, 3.0])
def test_omega_ratio(x):
    val, err = omega_ratio(np.array([x]))
    if x == 0:
        assert val[0] == pytest.approx(4 * math.log(2) / math.pi, rel=1e-15)
    else:
        direct = omega(2 * math.pi * x).value / math.sinh(math.pi * x)
        assert val[0] == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 3.0])
def test_hamburger(a):
    exact = math.pi / math.tanh(math.pi * a) / (2 * a) - 1 / (2 * a * a)
    assert hamburger_sum(a).value == pytest.approx(exact, rel=1e-10)


def test_eta_tail_consistency():
    # alternating Schloemilch at nu = 1/2 collapses to eta and Li_1-type sums
    x = 1.0
    exact = C * (eta(1.0) - math.log1p(math.exp(-x)))
    assert schloemilch_T(0.5, 0.5, x, alternating=True).value == pytest.approx(exact, rel=1e-10)
    assert d_nu(0.5, x).value == pytest.approx(C * (1 - math.exp(-x)), rel=1e-14)
