"""Integration back-ends.

* finite intervals: globally adaptive Gauss-Kronrod 7/15 bisection, with
  power substitutions at annotated algebraic endpoints;
* semi-infinite, decaying integrands: truncation (exponential decay) or a
  logarithmic change of variable (algebraic decay), with tail bounds;
* semi-infinite Bessel-oscillatory integrands g(x) J_nu(a x): integration
  between approximate zeros and extrapolation of the cell partial sums;
* vertical lines c + it: trapezoidal rule with step halving.

Integrands are called with numpy arrays and must return arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .acceleration import AccelerationState, aitken_iterated
from .errors import DivergenceError, DomainError, SymmetryViolationError, UsageError
from .routes import route
from .scalar_core import EPS, EvalResult, NumericConfig, _cfg

# Kronrod 15-point nodes (non-negative half) and weights; Gauss 7-point weights
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point layout: -x0..-x6, 0, x6..x0
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes x1, x3, x5 and the centre
for i, g in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[i] = g
    GAUSS_WEIGHTS[14 - i] = g
GAUSS_WEIGHTS[7] = _WG[3]


# --------------------------------------------------------------------------
# problem descriptors
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EndpointNote:
    """Endpoint annotation: ``kind`` is ``"removable"`` (with ``limit``) or
    ``"algebraic"`` (integrand behaves like distance**exponent)."""

    where: str
    kind: str
    exponent: float | None = None
    limit: float | None = None

    def __post_init__(self):
        if self.where not in ("a", "b"):
            raise DomainError("endpoint note must refer to 'a' or 'b'")
        if self.kind not in ("removable", "algebraic"):
            raise DomainError("endpoint note kind must be 'removable' or 'algebraic'")
        if self.kind == "algebraic" and (self.exponent is None or not self.exponent > -1):
            raise DomainError("algebraic endpoint needs an integrable exponent > -1")


@dataclass(frozen=True)
class Finite:
    a: float
    b: float

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError("finite domain needs a < b")


@dataclass(frozen=True)
class SemiInfiniteDecay:
    """[a, inf) with declared decay: ``kind="exponential"`` and ``rate`` q for
    |f| <~ C exp(-q x), or ``kind="algebraic"`` and ``rate`` p < -1 for |f| ~ C x^p."""

    a: float
    kind: str
    rate: float

    def __post_init__(self):
        if self.kind == "exponential":
            if not self.rate > 0:
                raise DomainError("exponential decay needs a positive rate")
        elif self.kind == "algebraic":
            if not self.rate < -1:
                raise DomainError("algebraic decay exponent must be below -1")
        else:
            raise DomainError("decay kind must be 'exponential' or 'algebraic'")


@dataclass(frozen=True)
class BesselOscillatory:
    nu: float
    scale: float

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError("oscillation scale must be positive")


@dataclass(frozen=True)
class VerticalLine:
    c: float
    T: float | None = None
    h: float | None = None
    decay: float = math.pi / 2


Domain = Union[Finite, SemiInfiniteDecay, BesselOscillatory, VerticalLine]


@dataclass(frozen=True)
class QuadratureProblem:
    integrand: Callable
    domain: Domain
    endpoint_notes: tuple = field(default_factory=tuple)

    def note(self, where: str) -> EndpointNote | None:
        for n in self.endpoint_notes:
            if n.where == where:
                return n
        return None


# --------------------------------------------------------------------------
# adaptive Gauss-Kronrod
# --------------------------------------------------------------------------


def _gk15(f, a: np.ndarray, b: np.ndarray):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError("integrand returned non-finite values inside the interval")
    k = h * (fx @ KRONROD_WEIGHTS)
    g = h * (fx @ GAUSS_WEIGHTS)
    mean = (fx @ KRONROD_WEIGHTS) * 0.5
    resasc = np.abs(h) * (np.abs(fx - mean[:, None]) @ KRONROD_WEIGHTS)
    resabs = np.abs(h) * (np.abs(fx) @ KRONROD_WEIGHTS)
    err = np.abs(k - g)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50 * EPS * resabs)
    return k, err


def _adaptive(f, a: float, b: float, cfg: NumericConfig, pieces: int = 1):
    """Globally adaptive bisection; returns (value, err, evaluations, ok)."""
    edges = np.linspace(a, b, pieces + 1)
    lo, hi = edges[:-1].copy(), edges[1:].copy()
    val, err = _gk15(f, lo, hi)
    nevals = 15 * lo.size
    budget = cfg.quad_budget
    while True:
        total = math.fsum(val.tolist())
        toterr = float(np.sum(err))
        target = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if toterr <= target:
            return total, toterr, nevals, True
        if lo.size >= budget:
            return total, toterr, nevals, False
        width = hi - lo
        splittable = width > 64 * EPS * np.maximum(np.abs(lo), np.abs(hi))
        local = target / lo.size
        pick = (err > local) & splittable
        if not np.any(pick):
            if not np.any(splittable):
                return total, toterr, nevals, False
            pick = np.zeros_like(pick)
            pick[int(np.argmax(np.where(splittable, err, -1.0)))] = True
        idx = np.flatnonzero(pick)
        room = budget - lo.size
        if idx.size > room:
            idx = idx[np.argsort(err[idx])[::-1][:max(room, 1)]]
        mid = 0.5 * (lo[idx] + hi[idx])
        new_lo = np.concatenate([lo[idx], mid])
        new_hi = np.concatenate([mid, hi[idx]])
        nv, ne = _gk15(f, new_lo, new_hi)
        nevals += 15 * new_lo.size
        keep = np.ones(lo.size, dtype=bool)
        keep[idx] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        val = np.concatenate([val[keep], nv])
        err = np.concatenate([err[keep], ne])


def _power_for(exponent: float) -> int:
    if float(exponent).is_integer() and exponent >= 0:
        return 1
    return max(1, math.ceil(3.0 / (exponent + 1.0)))


def _with_limits(f, a: float, b: float, notes: tuple):
    """Wrap f so exact endpoint hits return annotated removable limits."""
    lims = {n.where: n.limit for n in notes if n.kind == "removable" and n.limit is not None}
    if not lims:
        return f

    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.empty_like(x)
        mask = np.ones(x.shape, dtype=bool)
        if "a" in lims:
            ma = x == a
            out[ma] = lims["a"]
            mask &= ~ma
        if "b" in lims:
            mb = x == b
            out[mb] = lims["b"]
            mask &= ~mb
        if np.any(mask):
            out[mask] = f(x[mask])
        return out

    return g


def _substituted(f, base: float, length: float, m: int, direction: float):
    """s in (0, 1] -> t = base + direction * length * s^m, including the Jacobian."""

    def g(s):
        s = np.asarray(s, dtype=float)
        t = base + direction * length * s ** m
        jac = m * length * s ** (m - 1)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            v = np.asarray(f(t), dtype=float) * jac
        return np.where(np.isfinite(v), v, 0.0) if m > 1 else v

    return g


def _finite_core(f, a: float, b: float, notes: tuple, cfg: NumericConfig, pieces: int = 1):
    f = _with_limits(f, a, b, notes)
    na = next((n for n in notes if n.where == "a" and n.kind == "algebraic"), None)
    nb = next((n for n in notes if n.where == "b" and n.kind == "algebraic"), None)
    ma = _power_for(na.exponent) if na else 1
    mb = _power_for(nb.exponent) if nb else 1
    if ma == 1 and mb == 1:
        return _adaptive(f, a, b, cfg, pieces)
    if mb == 1:
        return _adaptive(_substituted(f, a, b - a, ma, 1.0), 0.0, 1.0, cfg, pieces)
    if ma == 1:
        return _adaptive(_substituted(f, b, b - a, mb, -1.0), 0.0, 1.0, cfg, pieces)
    mid = 0.5 * (a + b)
    half = cfg.with_(abs_tol=cfg.abs_tol * 0.5)
    v1, e1, n1, ok1 = _adaptive(_substituted(f, a, mid - a, ma, 1.0), 0.0, 1.0, half, pieces)
    v2, e2, n2, ok2 = _adaptive(_substituted(f, b, b - mid, mb, -1.0), 0.0, 1.0, half, pieces)
    return v1 + v2, e1 + e2, n1 + n2, ok1 and ok2


@route("quad_finite")
def integrate_finite(p: QuadratureProblem, cfg: NumericConfig | None = None, pieces: int = 1) -> EvalResult:
    """Adaptive Gauss-Kronrod integral over a finite interval."""
    cfg = _cfg(cfg)
    if not isinstance(p.domain, Finite):
        raise UsageError("integrate_finite needs a Finite domain")
    a, b = float(p.domain.a), float(p.domain.b)
    v, e, n, ok = _finite_core(p.integrand, a, b, tuple(p.endpoint_notes), cfg, pieces)
    return EvalResult.make(v, e, n, cfg, ok=ok)


def integrate(f, a: float, b: float, cfg: NumericConfig | None = None, notes=(), pieces: int = 1) -> EvalResult:
    """Shorthand for a finite problem."""
    return integrate_finite(QuadratureProblem(f, Finite(a, b), tuple(notes)), cfg, pieces)


@route("quad_semi_infinite")
def integrate_semi_infinite_decay(p: QuadratureProblem, cfg: NumericConfig | None = None) -> EvalResult:
    """Integral over [a, inf) of an integrand with declared decay."""
    cfg = _cfg(cfg)
    dom = p.domain
    if not isinstance(dom, SemiInfiniteDecay):
        raise DivergenceError("semi-infinite integration needs a declared decay class")
    f = p.integrand
    a = float(dom.a)
    notes = tuple(p.endpoint_notes)
    if dom.kind == "exponential":
        q = dom.rate
        # scale from the leading unit interval
        width = 1.0 / q
        head = _finite_core(f, a, a + width, notes, cfg.with_(rel_tol=cfg.rel_tol * 0.1))
        scale = max(abs(head[0]), cfg.abs_tol, 1e-300)
        target = max(cfg.abs_tol, cfg.rel_tol * scale)
        t = a + width
        while True:
            probe = np.array([t, t + 0.5 * width, t + width])
            mag = float(np.max(np.abs(f(probe))))
            if 2.0 * mag / q <= 0.05 * target or t > a + 800.0 * width:
                break
            t += max(width, 0.25 * (t - a))
        tail = 2.0 * mag / q
        sub = cfg.with_(abs_tol=max(cfg.abs_tol, 0.5 * target) * 0.5, rel_tol=cfg.rel_tol * 0.5)
        pieces = int(min(64, max(1, math.ceil((t - a - width) / (4.0 * width)))))
        body = _adaptive(_with_limits(f, a, t, ()), a + width, t, sub, pieces)
        v = head[0] + body[0]
        e = head[1] + body[1] + tail
        return EvalResult.make(v, e, head[2] + body[2] + 3, cfg, ok=head[3] and body[3])
    # algebraic decay: x = a1 e^u on [a1, inf), finite rule on [a, a1]
    pexp = dom.rate
    a1 = a + 1.0 if a >= 0 else 1.0
    head = _finite_core(f, a, a1, notes, cfg.with_(rel_tol=cfg.rel_tol * 0.1))

    def g(u):
        x = a1 * np.exp(u)
        return f(x) * x

    rate = -(pexp + 1.0)
    scale = max(abs(head[0]), cfg.abs_tol, 1e-300)
    target = max(cfg.abs_tol, cfg.rel_tol * scale)
    u = 1.0
    while True:
        mag = float(np.max(np.abs(g(np.array([u, u + 0.5, u + 1.0])))))
        if 2.0 * mag / rate <= 0.05 * target or u > 700.0:
            break
        u *= 1.5
    tail = 2.0 * mag / rate
    sub = cfg.with_(abs_tol=max(cfg.abs_tol, 0.5 * target) * 0.5, rel_tol=cfg.rel_tol * 0.5)
    pieces = int(min(64, max(1, math.ceil(u / 4.0))))
    body = _adaptive(g, 0.0, u, sub, pieces)
    v = head[0] + body[0]
    e = head[1] + body[1] + tail
    return EvalResult.make(v, e, head[2] + body[2] + 3, cfg, ok=head[3] and body[3])


def integrate_mellin(f, cfg: NumericConfig | None = None, origin_exponent: float = 0.0,
                     decay_exponent: float = -2.0) -> EvalResult:
    """Integral over (0, inf) of f with |f| ~ x^origin_exponent at 0 and ~ x^decay_exponent at inf."""
    prob = QuadratureProblem(
        f, SemiInfiniteDecay(0.0, "algebraic", decay_exponent),
        (EndpointNote("a", "algebraic", exponent=origin_exponent),))
    return integrate_semi_infinite_decay(prob, cfg)


# --------------------------------------------------------------------------
# Bessel-oscillatory integrals
# --------------------------------------------------------------------------


def mcmahon_points(nu: float, a: float, count: int) -> np.ndarray:
    """0 followed by the approximate zeros (k + nu/2 - 1/4) pi / a, k = 1..count."""
    k = np.arange(1, count + 1, dtype=float)
    return np.concatenate([[0.0], (k + 0.5 * nu - 0.25) * math.pi / a])


@route("quad_oscillatory")
def integrate_bessel_oscillatory(g, nu: float, a: float, p: float, cfg: NumericConfig | None = None,
                                 direct_cells: int = 6, first_batch: int = 40, max_cells: int = 400,
                                 state: AccelerationState | None = None) -> EvalResult:
    """Integral over [0, inf) of g(x) J_nu(a x).

    ``p`` is the algebraic decay exponent of g (|g| = O(x^-p)); the integral
    converges when p > -1/2.
    """
    from .bessel_struve import bessel_j_array

    cfg = _cfg(cfg)
    if not a > 0:
        raise DomainError("oscillation scale a must be positive")
    if not p > -0.5:
        raise DivergenceError("g J_nu(a x) is not integrable for decay exponent p <= -1/2")

    def integrand(x):
        j, _ = bessel_j_array(nu, a * x)
        return g(x) * j

    cells: list[float] = []
    cell_err = 0.0
    work = 0
    count = first_batch
    est = None
    cell_cfg = cfg.with_(rel_tol=min(cfg.rel_tol * 1e-2, 1e-12), abs_tol=0.0)
    pts = mcmahon_points(nu, a, max_cells)
    while True:
        while len(cells) < count:
            k = len(cells)
            lo, hi = pts[k], pts[k + 1]
            ref = max(abs(cells[0]) if cells else 0.0, 1e-300)
            ccfg = cell_cfg.with_(abs_tol=max(cfg.abs_tol * 1e-3, 1e-3 * cfg.rel_tol * ref))
            v, e, n, ok = _adaptive(integrand, lo, hi, ccfg)
            cells.append(v)
            cell_err += e
            work += n
        partial = np.cumsum(cells)
        tail_sums = partial[direct_cells:]
        ext = aitken_iterated(tail_sums, state=state)
        target = cfg.target(ext.value)
        est = ext
        if ext.err_est + cell_err <= target or count >= max_cells:
            break
        count = min(max_cells, count + 40)
    tail = np.asarray(cells[direct_cells:])
    alternating = bool(np.all(tail[:-1] * tail[1:] < 0)) if tail.size > 2 else False
    ok = alternating
    return EvalResult.make(est.value, est.err_est + cell_err, work, cfg, ok=ok)


# --------------------------------------------------------------------------
# vertical line
# --------------------------------------------------------------------------


@route("quad_vertical_line")
def integrate_vertical_line(f, c: float, cfg: NumericConfig | None = None, decay: float = math.pi / 2,
                            T: float | None = None, h: float | None = None) -> EvalResult:
    """Integral of f(t) over t in (-inf, inf), where f is complex-valued on the
    line p = c + i t and decays like exp(-decay |t|).  Returns the real part."""
    cfg = _cfg(cfg)
    if not decay > 0:
        raise DomainError("vertical-line integrand needs a positive decay rate")
    f0 = abs(complex(np.asarray(f(np.array([0.0])))[0]))
    scale = max(f0, 1e-300)
    target = max(cfg.abs_tol, cfg.rel_tol * scale)
    if T is None:
        T = max(4.0, math.log(10.0 * scale / target) / decay)
        # confirm the declared decay numerically
        for _ in range(20):
            edge = np.abs(np.asarray(f(np.array([-T, T]))))
            if float(np.max(edge)) / decay <= 0.05 * target:
                break
            T *= 1.25
    step = 0.5 if h is None else float(h)
    n = int(math.ceil(T / step))
    t = np.arange(-n, n + 1) * step
    vals = np.asarray(f(t), dtype=complex)
    est = step * vals.sum()
    work = t.size
    ok = False
    diff = math.inf
    for _ in range(14):
        step *= 0.5
        n *= 2
        tn = np.arange(-n + 1, n, 2) * step
        vn = np.asarray(f(tn), dtype=complex)
        work += tn.size
        new = 0.5 * est + step * vn.sum()
        diff = abs(new - est)
        est = new
        if diff <= 0.5 * target:
            ok = True
            break
    tail_bound = 2.0 * float(np.max(np.abs(np.asarray(f(np.array([-T, T])))))) / decay
    err = diff + tail_bound + 32 * EPS * step * float(np.sum(np.abs(vn)))
    if abs(est.imag) > max(err, 1e3 * EPS * abs(est)):
        raise SymmetryViolationError(f"imaginary part {est.imag:.3e} exceeds error estimate {err:.3e}")
    return EvalResult.make(est.real, err, work, cfg, ok=ok)


__all__ = [
    "BesselOscillatory",
    "EndpointNote",
    "Finite",
    "QuadratureProblem",
    "SemiInfiniteDecay",
    "VerticalLine",
    "integrate",
    "integrate_bessel_oscillatory",
    "integrate_finite",
    "integrate_mellin",
    "integrate_semi_infinite_decay",
    "integrate_vertical_line",
    "mcmahon_points",
]
