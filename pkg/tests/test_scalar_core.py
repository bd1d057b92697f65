import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from struvelab.errors import DivergenceError, DomainError
from struvelab.scalar_core import (
    EPS,
    EvalResult,
    NumericConfig,
    eta,
    fox_wright_1psi1,
    gamma,
    gamma_ln,
    hurwitz_zeta,
    hyp2f1,
    hyp_pFq,
    hyp_pFq_array,
    lgamma_complex,
    pochhammer,
    polylog,
    zeta,
    zeta_complex,
)

mp.mp.dps = 30


# --- configuration ---------------------------------------------------------


@pytest.mark.parametrize("kwargs", [
    {"rel_tol": 0.0}, {"abs_tol": -1.0}, {"max_terms": 7}, {"quad_budget": 15}, {"precision_tier": "quad"},
])
def test_config_invariants(kwargs):
    with pytest.raises(DomainError):
        NumericConfig(**kwargs)


@given(st.floats(-1e3, 1e3), st.floats(0, 1e-3))
def test_converged_implies_within_target(value, err):
    cfg = NumericConfig(rel_tol=1e-8, abs_tol=1e-12)
    r = EvalResult.make(value, err, 1, cfg)
    assert r.converged == (err <= max(cfg.abs_tol, cfg.rel_tol * abs(value)))


# --- Gamma -----------------------------------------------------------------


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)), (0.5, 0.5 * math.log(math.pi))])
def test_gamma_ln_examples(x, expected):
    assert gamma_ln(x) == pytest.approx(expected, abs=4 * EPS)


@pytest.mark.parametrize("x", [0.5, 0.75, 1.5, 2.5, 7.3, 13.0, 49.9, 123.4, 1e3, 5.5e4, 1e6])
def test_gamma_ln_accuracy(x):
    ref = float(mp.loggamma(mp.mpf(x)))
    assert abs(gamma_ln(x) - ref) <= 10 * EPS * max(abs(ref), 1.0)


def test_gamma_ln_rejects_nonfinite():
    with pytest.raises(DomainError):
        gamma_ln(math.inf)


@given(st.floats(0.3, 20.0))
def test_duplication_formula(z):
    lhs = gamma(2 * z)
    rhs = 2 ** (2 * z - 1) / math.sqrt(math.pi) * gamma(z) * gamma(z + 0.5)
    assert lhs == pytest.approx(rhs, rel=1e-12)


@pytest.mark.parametrize("lam, n, expected", [(3.7, 0, 1.0), (1.0, 4, 24.0), (2.0, 3, 24.0), (0.0, 3, 0.0)])
def test_pochhammer_examples(lam, n, expected):
    assert pochhammer(lam, n) == expected


@given(st.floats(0.1, 10.0), st.integers(0, 30))
def test_pochhammer_identity(lam, n):
    lhs = pochhammer(lam, n) * (lam + n)
    rhs = lam * pochhammer(lam + 1, n)
    assert lhs == pytest.approx(rhs, rel=1e-13)


def test_pochhammer_large_n_matches_gamma_ratio():
    ref = float(mp.rf(mp.mpf("0.3"), 100))
    assert pochhammer(0.3, 100) == pytest.approx(ref, rel=1e-12)


def test_lgamma_complex():
    z = np.array([0.75 + 3.0j, 1.25 - 10.0j, 2.0 + 0.5j])
    ref = np.array([complex(mp.loggamma(complex(v))) for v in z])
    got = lgamma_complex(z)
    # compare exp to avoid branch ambiguity of the imaginary part
    assert np.allclose(np.exp(got), np.exp(ref), rtol=1e-13, atol=0)


# --- zeta and eta ------------------------------------------------------------


@pytest.mark.parametrize("fn, s, expected", [
    (zeta, 2.0, math.pi ** 2 / 6),
    (zeta, 4.0, math.pi ** 4 / 90),
    (eta, 1.0, math.log(2.0)),
    (eta, 2.0, math.pi ** 2 / 12),
])
def test_zeta_eta_examples(fn, s, expected):
    assert fn(s) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.9, 1.5, 3.3])
def test_eta_small_s(s):
    assert eta(s) == pytest.approx(float(mp.altzeta(s)), rel=1e-13)


@given(st.floats(1.0001, 8.0))
def test_eta_zeta_relation(s):
    assert eta(s) == pytest.approx((1 - 2 ** (1 - s)) * zeta(s), rel=1e-12)


def test_zeta_domain():
    with pytest.raises(DomainError):
        zeta(1.0)
    with pytest.raises(DomainError):
        eta(0.0)


@pytest.mark.parametrize("s, a", [(1.5, 0.5), (2.0, 3.0), (3.5, 10.0)])
def test_hurwitz(s, a):
    assert hurwitz_zeta(s, a) == pytest.approx(float(mp.zeta(s, a)), rel=1e-13)


@pytest.mark.parametrize("s", [1.5 + 0.0j, 1.5 + 7.0j, 1.2 - 25.0j, 1.8 + 60.0j])
def test_zeta_complex_on_line(s):
    got = complex(zeta_complex(np.array([s]))[0])
    ref = complex(mp.zeta(s))
    assert abs(got - ref) <= 1e-12 * abs(ref)


# --- polylogarithm -----------------------------------------------------------


@pytest.mark.parametrize("alpha, z, expected", [
    (1.0, 0.5, math.log(2.0)),
    (2.0, 1.0, math.pi ** 2 / 6),
    (2.5, 0.0, 0.0),
])
def test_polylog_examples(alpha, z, expected):
    assert polylog(alpha, z).value == pytest.approx(expected, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("z", [-0.9, 0.3, 0.9])
def test_polylog_routes_agree(alpha, z):
    a = polylog(alpha, z, route="series")
    b = polylog(alpha, z, route="integral")
    assert a.converged and b.converged
    assert abs(a.value - b.value) <= a.err_est + b.err_est
    assert a.value == pytest.approx(float(mp.re(mp.polylog(alpha, z))), rel=1e-12)


def test_polylog_divergence():
    with pytest.raises(DivergenceError):
        polylog(1.0, 1.0)


# --- hypergeometric ----------------------------------------------------------


def test_pFq_at_zero():
    assert hyp_pFq([0.3, 1.7], [2.2], 0.0).value == 1.0


def test_2f1_log():
    assert hyp2f1(1, 1, 2, 0.5).value == pytest.approx(2 * math.log(2.0), rel=1e-14)


def test_1f2_oracle():
    # oracle: mpmath hyper([1/2], [3/2, 3/2], 0.7) at 40 digits
    r = hyp_pFq([0.5], [1.5, 1.5], 0.7)
    assert r.converged
    assert r.value == pytest.approx(1.1692636627284938692, rel=1e-14)


def test_pFq_pole():
    with pytest.raises(DomainError):
        hyp_pFq([1.0], [-2.0], 0.5)


def test_pFq_nonconvergence_flagged():
    r = hyp_pFq([1.0], [1.0], -50.0, NumericConfig(max_terms=20))
    assert not r.converged


@given(st.floats(-30.0, 30.0))
def test_pFq_array_matches_scalar(z):
    up, lo = [0.5, 1.3], [1.5, 2.1, 0.7]
    vals, _ = hyp_pFq_array(up, lo, np.array([z]))
    ref = hyp_pFq(up, lo, z)
    assert abs(vals[0] - ref.value) <= 1e-13 * max(1.0, abs(ref.value)) + 2 * ref.err_est


# --- Fox-Wright --------------------------------------------------------------


def test_fox_wright_reduces_to_1f1():
    assert fox_wright_1psi1(1, 1, 2, 1, 1).value == pytest.approx(math.e - 1, rel=1e-14)


def test_fox_wright_zero():
    assert fox_wright_1psi1(0.3, 0.5, 1.2, 2.0, 0.0).value == 1.0


def test_fox_wright_oracle():
    # oracle: mpmath nsum of (1/2)_{n/2} / (2)_n (-1)^n / n! at 40 digits
    r = fox_wright_1psi1(0.5, 0.5, 2, 1, -1)
    assert r.converged
    assert r.value == pytest.approx(0.75590174887639516590, rel=1e-13)


@pytest.mark.parametrize("args", [(1, 3, 1, 1, 0.5), (1, 2, 1, 1, 1.0), (1, 2, 1, 1, -1.2)])
def test_fox_wright_guard(args):
    with pytest.raises(DivergenceError):
        fox_wright_1psi1(*args)
