"""Independent closed-form oracles for nu = 1/2, evaluated with mpmath."""

import mpmath as mp


def t_half(mu, x):
    """sum n^-mu D_{1/2}(n x) = sqrt(2/(pi x)) (zeta(mu+1/2) - Li_{mu+1/2}(e^-x))."""
    with mp.workdps(40):
        x = mp.mpf(x)
        s = mp.mpf(mu) + mp.mpf(1) / 2
        return float(mp.re(mp.sqrt(2 / (mp.pi * x)) * (mp.zeta(s) - mp.polylog(s, mp.exp(-x)))))


def t_tilde_half(a):
    """sum (-1)^(n-1) n^-1/2 D_{1/2}(n a) = sqrt(2/(pi a)) (ln 2 - ln(1 + e^-a))."""
    with mp.workdps(40):
        a = mp.mpf(a)
        return float(mp.sqrt(2 / (mp.pi * a)) * (mp.log(2) - mp.log1p(mp.exp(-a))))


def operator_series_half(mu, x):
    """sum n^-mu [D'' + D'/x - (1 + 1/(4x^2)) D](n x) for nu = 1/2, summed in closed form via polylogs."""
    with mp.workdps(40):
        x = mp.mpf(x)
        q = mp.exp(-x)
        c = mp.sqrt(2 / mp.pi)
        h = mp.mpf(1) / 2

        def tail(k):  # sum n^-(mu + k) (1 - q^n)
            return mp.zeta(mu + k) - mp.polylog(mu + k, q)

        def li(k):
            return mp.polylog(mu + k, q)

        y0 = c * x ** -h * tail(h)
        y1 = c * (-h * x ** (-3 * h) * tail(3 * h) + x ** -h * li(h))
        y2 = c * (3 * h / 2 * x ** (-5 * h) * tail(5 * h) - x ** (-3 * h) * li(3 * h) - x ** -h * li(h))
        return float(mp.re(y2 + y1 / x - (1 + 1 / (4 * x ** 2)) * y0))
