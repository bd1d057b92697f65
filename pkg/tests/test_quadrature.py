import math

import numpy as np
import pytest

from struvelab.acceleration import AccelerationState, aitken_iterated, levin_u, richardson
from struvelab.bessel_struve import CylinderKind, cylinder_eval, d_nu
from struvelab.errors import DivergenceError, DomainError, SymmetryViolationError
from struvelab.quadrature import (
    EndpointNote,
    Finite,
    QuadratureProblem,
    SemiInfiniteDecay,
    integrate,
    integrate_bessel_oscillatory,
    integrate_finite,
    integrate_semi_infinite_decay,
    integrate_vertical_line,
    mcmahon_points,
)
from struvelab.scalar_core import NumericConfig, gamma, lgamma_complex
from struvelab.series_engines import mathieu_S


def _ones(t):
    return np.ones_like(np.asarray(t, dtype=float))


# --- finite --------------------------------------------------------------------


def test_finite_constant():
    r = integrate_finite(QuadratureProblem(_ones, Finite(0.0, 1.0)))
    assert r.converged and r.value == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("nu, z", [(1.0, 1.0), (0.3, 2.0), (2.2, 0.5)])
def test_finite_algebraic_endpoint(nu, z):
    # int_0^1 (1-t^2)^(nu-1/2) cosh(z t) dt = I_nu(z) sqrt(pi) Gamma(nu+1/2) / (2 (z/2)^nu)
    prob = QuadratureProblem(lambda t: ((1 - t) * (1 + t)) ** (nu - 0.5) * np.cosh(z * t), Finite(0.0, 1.0),
                             (EndpointNote("b", "algebraic", exponent=nu - 0.5),))
    r = integrate_finite(prob)
    ref = cylinder_eval(CylinderKind.BESSEL_I, nu, z).value * math.sqrt(math.pi) * gamma(nu + 0.5) / (2 * (z / 2) ** nu)
    assert r.converged
    assert abs(r.value - ref) <= r.err_est + 1e-14 * ref


def test_finite_zero_integrand_with_removable_limit():
    w = 0.0
    prob = QuadratureProblem(lambda u: np.sinh(w * u) / np.tan(np.pi * u), Finite(0.0, 0.5),
                             (EndpointNote("a", "removable", limit=w / math.pi),))
    assert integrate_finite(prob).value == 0.0


def test_finite_budget_exhaustion_flags():
    r = integrate(lambda t: np.sin(1.0 / np.maximum(t, 1e-300)), 0.0, 1.0, NumericConfig(quad_budget=16))
    assert not r.converged


@pytest.mark.parametrize("bad", [lambda: Finite(1.0, 0.0), lambda: EndpointNote("c", "removable"),
                                 lambda: EndpointNote("a", "algebraic", exponent=-1.0)])
def test_descriptor_validation(bad):
    with pytest.raises(DomainError):
        bad()


FINITE_FAMILY = [
    (lambda t: np.exp(t), 0.0, 1.0, (), math.e - 1),
    (lambda t: np.sqrt(t), 0.0, 1.0, (EndpointNote("a", "algebraic", exponent=0.5),), 2.0 / 3.0),
    (lambda t: t ** -0.5, 0.0, 1.0, (EndpointNote("a", "algebraic", exponent=-0.5),), 2.0),
]


@pytest.mark.parametrize("f, a, b, notes, exact", FINITE_FAMILY)
def test_budget_doubling_and_error_bounds(f, a, b, notes, exact):
    prev = None
    for budget in (40, 80, 160, 4000):
        cfg = NumericConfig(quad_budget=budget)
        r = integrate(f, a, b, cfg, notes)
        if r.converged:
            assert abs(r.value - exact) <= r.err_est + 4e-16 * abs(exact)
        if prev is not None:
            assert r.err_est <= prev
        prev = r.err_est


# --- semi-infinite ---------------------------------------------------------------


@pytest.mark.parametrize("f, notes, exact", [
    (lambda t: t * np.exp(-t), (), 1.0),
    (lambda t: t / np.expm1(t), (EndpointNote("a", "removable", limit=1.0),), math.pi ** 2 / 6),
])
def test_semi_infinite_examples(f, notes, exact):
    r = integrate_semi_infinite_decay(QuadratureProblem(f, SemiInfiniteDecay(0.0, "exponential", 1.0), notes))
    assert r.converged
    assert abs(r.value - exact) <= r.err_est + 1e-15 * exact


def test_semi_infinite_mathieu_cross_check():
    x = 1.0
    prob = QuadratureProblem(lambda t: t * np.sin(x * t) / np.expm1(t), SemiInfiniteDecay(0.0, "exponential", 1.0),
                             (EndpointNote("a", "removable", limit=0.0),))
    r = integrate_semi_infinite_decay(prob)
    s = mathieu_S(x, False, "series")
    assert abs(r.value - x * s.value) <= r.err_est + x * s.err_est


def test_semi_infinite_algebraic():
    r = integrate_semi_infinite_decay(QuadratureProblem(lambda t: 1.0 / (1.0 + t * t),
                                                        SemiInfiniteDecay(0.0, "algebraic", -2.0)))
    assert r.value == pytest.approx(math.pi / 2, rel=1e-12)


def test_semi_infinite_rejects_undeclared_decay():
    with pytest.raises(DivergenceError):
        integrate_semi_infinite_decay(QuadratureProblem(_ones, Finite(0.0, 1.0)))
    with pytest.raises(DomainError):
        SemiInfiniteDecay(0.0, "algebraic", -0.5)


# --- Bessel-oscillatory ------------------------------------------------------------


def test_mcmahon_points_bracket_zeros():
    pts = mcmahon_points(0.0, 1.0, 5)
    assert pts[0] == 0.0
    assert np.all(np.diff(pts) > 0)
    assert pts[1] == pytest.approx(2.4048, abs=0.05)


def test_integral_of_j0():
    state = AccelerationState()
    r = integrate_bessel_oscillatory(_ones, 0.0, 1.0, 0.0, state=state)
    assert r.converged
    assert abs(r.value - 1.0) <= r.err_est
    assert len(state.partial_sums) >= 30


@pytest.mark.parametrize("nu", [0.6, 1.0, 1.5, 2.5])
def test_weber_schafheitlin(nu):
    r = integrate_bessel_oscillatory(lambda t: t ** -nu, nu, 1.0, nu)
    exact = math.sqrt(math.pi) * 2 ** -nu / gamma(nu + 0.5)
    assert r.converged
    assert abs(r.value - exact) <= 1e-9 * exact
    assert abs(r.value - exact) <= r.err_est


def test_sonin_half_order():
    r = integrate_bessel_oscillatory(lambda x: x ** -0.5 / (x * x + 1.0), 0.5, 1.0, 2.5)
    exact = math.pi / 2 * math.sqrt(2 / math.pi) * (1 - math.exp(-1))
    assert abs(r.value - exact) <= r.err_est
    assert math.pi / 2 * d_nu(0.5, 1.0).value == pytest.approx(exact, rel=1e-14)


def test_oscillatory_rejects_divergent():
    with pytest.raises(DivergenceError):
        integrate_bessel_oscillatory(_ones, 0.0, 1.0, -1.0)


# --- vertical line ---------------------------------------------------------------


def test_inverse_mellin_of_gamma():
    # (1/2pi) int Gamma(1 + i t) x^(-1 - i t) dt = exp(-x), x = 1
    r = integrate_vertical_line(lambda t: np.exp(lgamma_complex(1.0 + 1j * np.asarray(t))), 1.0)
    assert r.converged
    assert r.value / (2 * math.pi) == pytest.approx(math.exp(-1.0), rel=1e-12)


def test_vertical_line_symmetric_integrand_real():
    r = integrate_vertical_line(lambda t: np.exp(-np.asarray(t) ** 2) * (1 + 1j * np.asarray(t)), 0.0, decay=1.0)
    assert r.value == pytest.approx(math.sqrt(math.pi), rel=1e-13)


def test_vertical_line_symmetry_violation():
    with pytest.raises(SymmetryViolationError):
        integrate_vertical_line(lambda t: (1 + 1j) * np.exp(-np.abs(np.asarray(t))), 0.0, decay=1.0)


# --- acceleration -------------------------------------------------------------------


def test_aitken_alternating_log2():
    n = np.arange(1, 30)
    s = np.cumsum((-1.0) ** (n - 1) / n)
    ext = aitken_iterated(s)
    assert abs(ext.value - math.log(2)) <= max(ext.err_est, 1e-14)
    assert ext.depth <= 12


def test_levin_zeta2():
    n = np.arange(1, 40)
    ext = levin_u(np.cumsum(1.0 / n ** 2), kmax=16)
    assert ext.value == pytest.approx(math.pi ** 2 / 6, rel=1e-10)


def test_levin_with_supplied_terms():
    # differencing partial sums near zeta(3) loses digits; exact increments keep them
    n = np.arange(1, 40)
    terms = 1.0 / n ** 3
    plain = levin_u(np.cumsum(terms), kmax=16)
    exact = levin_u(np.cumsum(terms), kmax=16, terms=terms)
    assert abs(exact.value - 1.2020569031595942854) <= exact.err_est
    assert exact.err_est <= plain.err_est


def test_richardson_polynomial():
    h = np.array([1.0, 0.5, 0.25, 0.125])
    ext = richardson(3.0 + 2 * h - h ** 2, h)
    assert ext.value == pytest.approx(3.0, abs=1e-13)
