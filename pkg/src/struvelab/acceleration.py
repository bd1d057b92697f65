"""Sequence acceleration: iterated Aitken and the Levin u-transform."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

EPS = np.finfo(float).eps


@dataclass
class AccelerationState:
    """Partial sums and the triangular extrapolation table built from them."""

    partial_sums: list[float] = field(default_factory=list)
    table: list[list[float]] = field(default_factory=list)


@dataclass(frozen=True)
class Extrapolation:
    value: float
    err_est: float
    depth: int


def aitken_iterated(partial_sums, max_depth: int = 12, state: AccelerationState | None = None) -> Extrapolation:
    """Repeated Aitken delta-squared on a sequence of partial sums.

    Columns are built until ``max_depth`` or until the second differences sink
    into rounding noise.  The error estimate is the larger of the last
    in-column change and the change against the previous column.
    """
    s = np.asarray(partial_sums, dtype=float)
    if s.size == 0:
        raise ValueError("empty sequence")
    cols = [s]
    scale = float(np.max(np.abs(s))) or 1.0
    noise = 64 * EPS * scale
    while len(cols) <= max_depth:
        c = cols[-1]
        if c.size < 3:
            break
        d1 = np.diff(c)
        d2 = np.diff(d1)
        if np.any(np.abs(d2) <= noise):
            break
        nxt = c[2:] - d1[1:] ** 2 / d2
        if not np.all(np.isfinite(nxt)):
            break
        cols.append(nxt)
    if state is not None:
        state.partial_sums = list(map(float, s))
        state.table = [list(map(float, c)) for c in cols]
    best = cols[-1]
    est = float(best[-1])
    err_in = abs(float(best[-1] - best[-2])) if best.size >= 2 else math.inf
    err_prev = abs(est - float(cols[-2][-1])) if len(cols) >= 2 else math.inf
    if len(cols) == 1:
        err = abs(float(s[-1] - s[-2])) if s.size >= 2 else math.inf
    else:
        err = max(err_in, err_prev) if best.size >= 2 else err_prev
    return Extrapolation(est, err + noise, len(cols) - 1)


def levin_u(partial_sums, start: int = 1, beta: float = 1.0, kmax: int = 30, terms=None) -> Extrapolation:
    """Levin u-transform anchored at ``start``; chooses the order with the
    smallest change between consecutive orders.

    ``terms`` supplies the increments directly when differencing the partial
    sums would lose digits.
    """
    s = np.asarray(partial_sums, dtype=float)
    n_avail = s.size - start
    if n_avail < 3:
        raise ValueError("need more partial sums for Levin acceleration")
    a = np.diff(s, prepend=0.0) if terms is None else np.asarray(terms, dtype=float)
    idx = np.arange(s.size, dtype=float)
    omega = (idx + beta) * a
    if np.any(omega[start:] == 0.0):
        # exactly vanishing terms: fall back to the raw tail
        return Extrapolation(float(s[-1]), abs(float(s[-1] - s[-2])), 0)
    ests = []
    for k in range(1, min(kmax, n_avail - 1) + 1):
        j = np.arange(k + 1)
        n = start
        binom = np.array([math.comb(k, int(i)) for i in j], dtype=float)
        sign = (-1.0) ** j
        ratio = ((n + j + beta) / (n + k + beta)) ** (k - 1)
        w = sign * binom * ratio / omega[n + j]
        num = np.sum(w * s[n + j])
        den = np.sum(w)
        ests.append(num / den)
    ests = np.array(ests)
    if ests.size == 1:
        return Extrapolation(float(ests[0]), abs(float(ests[0] - s[-1])), 1)
    diffs = np.abs(np.diff(ests))
    # smallest change among the higher orders
    lo = max(0, diffs.size // 3)
    i = lo + int(np.argmin(diffs[lo:]))
    est = float(ests[i + 1])
    err = float(max(diffs[i], diffs[i - 1] if i >= 1 else diffs[i]))
    noise = 64 * EPS * float(np.max(np.abs(s)))
    return Extrapolation(est, err + noise, i + 2)


def richardson(values, h, power: int = 1) -> Extrapolation:
    """Polynomial extrapolation of values(h) to h = 0 (Neville table).

    Assumes values(h) = L + c_1 h^power + c_2 h^(2 power) + ...; the error
    estimate is the change along the diagonal at the selected depth.
    """
    v = np.asarray(values, dtype=float)
    x = np.asarray(h, dtype=float) ** power
    if v.size < 2:
        raise ValueError("need at least two values for Richardson extrapolation")
    table = [v.copy()]
    diag = [float(v[-1])]
    for j in range(1, v.size):
        prev = table[-1]
        nxt = (x[j:] * prev[:-1] - x[:-j] * prev[1:]) / (x[j:] - x[:-j])
        table.append(nxt)
        diag.append(float(nxt[-1]))
    diag = np.array(diag)
    changes = np.abs(np.diff(diag))
    i = int(np.argmin(changes))
    est = float(diag[i + 1])
    err = float(changes[i]) if i == 0 else float(max(changes[i], changes[i - 1]))
    noise = 64 * EPS * float(np.max(np.abs(v)))
    return Extrapolation(est, err + noise, i + 1)
