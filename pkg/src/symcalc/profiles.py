"""Smooth transition, radial cutoff and x-window profiles.

``psi`` is the standard smooth step built from ``f(t) = exp(-1/t)``::

    psi(t) = f(t) / (f(t) + f(1 - t))

It vanishes for ``t <= 0`` and equals one for ``t >= 1``.  The radial cutoff
is ``chi(r) = psi(2r - 1)`` and the one-dimensional window is
``g(t) = psi(1 - t**2)``; the x-window on the unit box is the product of
``g`` over the axes.

Derivatives are exact up to rounding: with ``h(u) = 1/u - 1/(1 - u)`` one has
``psi = 1/(1 + exp(h))`` and ``psi' = -psi (1 - psi) h'``, which gives a
recurrence for the Taylor coefficients of ``t -> psi(u(t))`` once the series
of ``h(u(t))`` is known.
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import expit


def _series_reciprocal(a, order):
    # 1/a for a truncated power series a[0] + a[1] e + ...
    out = [1.0 / a[0]]
    for k in range(1, order + 1):
        acc = 0.0
        for j in range(1, min(k, len(a) - 1) + 1):
            acc = acc + a[j] * out[k - j]
        out.append(-acc / a[0])
    return out


class _Profile:
    """psi composed with a polynomial inner map u(t); values and derivatives."""

    def __init__(self, inner, support):
        # inner(t0) -> list of Taylor coefficients of u at t0 (exact polynomial)
        self._inner = inner
        self.support = support

    def _jet(self, t, order):
        u = self._inner(t)
        inside = (u[0] > 0.0) & (u[0] < 1.0)
        ti_u = [np.asarray(c, dtype=float)[inside] if np.ndim(c) else np.full(inside.sum(), c)
                for c in u]
        u0 = ti_u[0]
        pad = ti_u + [np.zeros_like(u0)] * (order + 1 - len(ti_u))
        one_minus = [1.0 - pad[0]] + [-c for c in pad[1:]]
        with np.errstate(all="ignore"):
            r1 = _series_reciprocal(pad, order)
            r2 = _series_reciprocal(one_minus, order)
            h = [a - b for a, b in zip(r1, r2)]
            dh = [(k + 1) * h[k + 1] for k in range(order)]
            p = [expit(-h[0])]
            q0 = expit(h[0])
            for k in range(order):
                # (k+1) p_{k+1} = -[p (1-p) h']_k
                pq = []
                for j in range(k + 1):
                    qj = q0 if j == 0 else -p[j]
                    pq.append(sum(p[i] * (q0 if j - i == 0 else -p[j - i]) for i in range(j + 1)))
                acc = sum(pq[j] * dh[k - j] for j in range(k + 1))
                p.append(-acc / (k + 1))
        dead = (p[0] * q0) == 0.0
        for k in range(1, order + 1):
            p[k] = np.where(dead | ~np.isfinite(p[k]), 0.0, p[k])
        return inside, u[0], p

    def __call__(self, t, k=0):
        t = np.asarray(t, dtype=float)
        shape = t.shape
        tf = t.reshape(-1)
        inside, u0, p = self._jet(tf, k)
        out = np.zeros_like(tf)
        if k == 0:
            out[np.asarray(u0 * np.ones_like(tf)) >= 1.0] = 1.0
        out[inside] = p[k] * factorial(k)
        return out.reshape(shape)


psi = _Profile(lambda t: [t, 1.0], (0.0, 1.0))
chi = _Profile(lambda t: [2.0 * t - 1.0, 2.0], (0.5, 1.0))
window1d = _Profile(lambda t: [1.0 - t * t, -2.0 * t, -1.0], (-1.0, 1.0))


def radial_profile(r, prof):
    """Evaluate prod_j chi^(j)(r) for a sorted tuple of derivative orders."""
    r = np.asarray(r, dtype=float)
    out = np.ones_like(r)
    for k in prof:
        out = out * chi(r, k)
    return out


def window_profile(t, prof):
    """Evaluate prod_j g^(j)(t) for a sorted tuple of derivative orders."""
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    for k in prof:
        out = out * window1d(t, k)
    return out


def window(x):
    """The x-window w(x) = prod_i g(x_i); x has shape (..., n)."""
    x = np.asarray(x, dtype=float)
    return np.prod(window1d(x), axis=-1)


@lru_cache(maxsize=None)
def profile_is_compact(prof):
    """True when a radial profile carries a derivative factor (support in [1/2, 1])."""
    return any(k > 0 for k in prof)
