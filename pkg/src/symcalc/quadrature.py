"""Exact sphere moments and adaptive quadrature for the compact channels.

Sphere moments of monomials are exact: for an exponent tuple ``alpha`` with
every entry even,

    int_{|xi|=1} xi^alpha dS = 2 prod_i Gamma((alpha_i + 1)/2) / Gamma((|alpha| + n)/2)

which is a rational multiple of ``pi**(n // 2)``.  For ``n = 1`` the sphere is
``{-1, +1}`` with counting measure.

Everything that is not exact (the chi transition band, the x-window) reduces
to one-dimensional integrals done by adaptive Gauss-Legendre panels.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import fsum, pi

import numpy as np
from numpy.polynomial.legendre import leggauss

from .profiles import radial_profile, window_profile


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    tol: float = 1e-13
    max_subdiv: int = 4000
    nodes: int = 20

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.nodes < 2 or self.max_subdiv < 1:
            raise ValueError("need at least 2 nodes and 1 subdivision")


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class SphereMoment:
    """Exact value ``coeff * pi**pi_power`` of a monomial sphere integral."""

    alpha: tuple
    coeff: Fraction
    pi_power: int

    @property
    def dim(self):
        return len(self.alpha)

    def __float__(self):
        return float(self.coeff) * pi**self.pi_power


def _half_gamma(k2):
    """Gamma(k2/2) as (rational, sqrt(pi) power in {0, 1})."""
    if k2 % 2 == 0:
        m = k2 // 2
        val = Fraction(1)
        for j in range(1, m):
            val *= j
        return val, 0
    # Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
    m = (k2 - 1) // 2
    val = Fraction(1)
    for j in range(m):
        val *= Fraction(2 * j + 1, 2)
    return val, 1


@lru_cache(maxsize=None)
def _moment_coeff(alpha):
    if any(a % 2 for a in alpha):
        return Fraction(0)
    n = len(alpha)
    num = Fraction(2)
    sqrt_pi = 0
    for a in alpha:
        v, e = _half_gamma(a + 1)
        num *= v
        sqrt_pi += e
    den, e = _half_gamma(sum(alpha) + n)
    sqrt_pi -= e
    assert sqrt_pi == 2 * (n // 2)
    return num / den


def monomial_moment(alpha, n=None):
    """Exact integral of xi^alpha over the unit sphere in R^n."""
    alpha = tuple(int(a) for a in alpha)
    if n is None:
        n = len(alpha)
    if len(alpha) != n or n < 1:
        raise ValueError(f"exponent {alpha} does not match dimension {n}")
    return SphereMoment(alpha, _moment_coeff(alpha), n // 2)


def moment_rational(alpha):
    """Rational part of the sphere moment (the pi power is ``len(alpha) // 2``)."""
    return _moment_coeff(tuple(alpha))


def sphere_pi_power(n):
    return n // 2


# ---------------------------------------------------------------------------
# adaptive Gauss-Legendre panels

@lru_cache(maxsize=None)
def _gauss(nodes):
    return leggauss(nodes)


def _panel(f, a, b, nodes):
    x, w = _gauss(nodes)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * np.dot(w, f(mid + half * x))


def radial_quad(f, a, b, spec=DEFAULT_SPEC, breakpoints=()):
    """Integrate a smooth vectorised ``f`` over [a, b].

    Panels are bisected until each one agrees with the sum of its halves to
    within its share of ``tol * (1 + |result|)``.  Returns ``(value, error)``.
    """
    if not a < b:
        if a == b:
            return 0.0, 0.0
        raise ValueError("need a < b")
    edges = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    stack = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        stack.append((lo, hi, _panel(f, lo, hi, spec.nodes)))
    err = 0.0
    done = []
    subdivisions = 0
    scale = abs(sum(v for _, _, v in stack))
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid, spec.nodes)
        right = _panel(f, mid, hi, spec.nodes)
        diff = abs(left + right - whole)
        share = spec.tol * (1.0 + scale) * (hi - lo) / (b - a)
        if diff <= share or hi - lo < 1e-12 * (b - a):
            done.append(left + right)
            err += diff
            continue
        subdivisions += 1
        if subdivisions > spec.max_subdiv:
            raise QuadratureError(f"no convergence on [{a}, {b}] after {spec.max_subdiv} subdivisions")
        stack.append((lo, mid, left))
        stack.append((mid, hi, right))
    vals = np.asarray(done)
    if np.iscomplexobj(vals):
        total = complex(fsum(vals.real), fsum(vals.imag))
    else:
        total = fsum(vals)
    return total, err


# ---------------------------------------------------------------------------
# one-dimensional building blocks with caching

@lru_cache(maxsize=None)
def window_moment(power, prof, spec=DEFAULT_SPEC):
    """int_{-1}^{1} t^power prod_j g^(j)(t) dt; prof = () means no window."""
    if not prof:
        return (1.0 - (-1.0) ** (power + 1)) / (power + 1)
    if (power + sum(prof)) % 2:
        return 0.0
    val, _ = radial_quad(lambda t: t**power * window_profile(t, prof), 0.0, 1.0, spec)
    return 2.0 * val


@lru_cache(maxsize=None)
def band_moment(exponent, prof, log_power=0, spec=DEFAULT_SPEC):
    """int_0^1 r^exponent (log r)^log_power prod_j chi^(j)(r) dr.

    ``exponent`` is a float; the integrand vanishes for r < 1/2 whenever the
    profile is non-empty.
    """
    if not prof:
        raise ValueError("band moment needs a cutoff factor")

    def f(r):
        out = r**exponent * radial_profile(r, prof)
        if log_power:
            out = out * np.log(r) ** log_power
        return out

    val, _ = radial_quad(f, 0.5, 1.0, spec)
    return val


def window_integrate(g, n, spec=QuadratureSpec(tol=1e-11), windowed=True):
    """Integrate a vectorised ``g(x)`` (x of shape (N, n)) over the unit box.

    Composite tensor Gauss-Legendre; the panel count is doubled until two
    successive values agree to ``tol``.  Returns ``(value, error)``.
    """
    x1, w1 = _gauss(spec.nodes)
    prev = None
    panels = 2
    while True:
        edges = np.linspace(-1.0, 1.0, panels + 1)
        half = 0.5 * np.diff(edges)
        mids = 0.5 * (edges[1:] + edges[:-1])
        pts = (mids[:, None] + half[:, None] * x1[None, :]).ravel()
        wts = (half[:, None] * w1[None, :]).ravel()
        grids = np.meshgrid(*([pts] * n), indexing="ij")
        X = np.stack([gr.ravel() for gr in grids], axis=-1)
        W = np.ones(len(X))
        for gr in np.meshgrid(*([wts] * n), indexing="ij"):
            W = W * gr.ravel()
        vals = np.asarray(g(X))
        cur = np.dot(W, vals)
        if prev is not None and abs(cur - prev) <= spec.tol * (1.0 + abs(cur)):
            return cur, abs(cur - prev)
        if len(X) * 2**n > 4e7:
            raise QuadratureError("window integration did not converge")
        prev = cur
        panels *= 2
