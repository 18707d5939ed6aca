"""Residue densities, the Wodzicki residue and cut-off integrals.

Every term ``c x^a W(x) xi^b |xi|^s rho(|xi|)`` factorises into an x-part and a
xi-part, and the xi-part integrates in polar coordinates into a sphere moment
times a one-dimensional radial integral ``int r^(d+n-1) rho(r) dr`` with
``d = s + |b|`` the homogeneity degree.  The radial cut-off integral is

* ``band - 1/(d+n)`` for a cutoff chi^p, where ``band = int_{1/2}^1 r^(d+n-1) chi^p``
  (the ``R^(d+n)`` growth is the discarded divergent part),
* ``band + log(lambda)`` when ``d + n = 0`` (this is the log channel),
* ``band`` alone for terms supported in the transition band, and
* ``0`` for polynomials without cutoff (pure power of R).

``lambda`` is the reference radius: the finite part is the constant term of the
expansion in ``R`` of the integral over the ball of radius ``lambda * R``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import log, pi

import numpy as np

from .coeffs import ZERO, gauss, to_complex
from .profiles import window_profile
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    band_moment,
    moment_rational,
    radial_quad,
    window_moment,
)
from .symbols import ClassicalSymbol, SupportError, TranslatedSymbol, degree, is_asymptotic, translate

# relative rounding allowance per accumulated contribution
_ROUND = 4e-15


def require_windowed(sigma):
    if not sigma.windowed:
        raise SupportError("symbol is not compactly supported in x (missing window)")


# ---------------------------------------------------------------------------
# exact x-densities


@dataclass(frozen=True)
class ExactDensity:
    """A function of x written as ``pi**pi_power * sum c x^a prod g-profiles``."""

    dim: int
    pi_power: int
    coeffs: dict = field(default_factory=dict)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        total = 0j
        for (a, wp), c in self.coeffs.items():
            val = to_complex(c)
            for i in range(self.dim):
                if a[i]:
                    val *= x[i] ** a[i]
                if wp[i]:
                    val *= float(window_profile(x[i], wp[i]))
            total += val
        return total * pi**self.pi_power

    def integrate(self, spec=DEFAULT_SPEC):
        """Integral over the unit box; returns (value, scale)."""
        total = 0j
        scale = 0.0
        for (a, wp), c in self.coeffs.items():
            val = to_complex(c)
            for i in range(self.dim):
                val *= window_moment(a[i], wp[i], spec)
            total += val
            scale += abs(val)
        f = pi**self.pi_power
        return total * f, scale * f

    def __eq__(self, other):
        if not isinstance(other, ExactDensity):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return (self.dim, self.pi_power, self.coeffs) == (other.dim, other.pi_power, other.coeffs)

    def is_zero(self):
        return not self.coeffs


def _add(d, key, c):
    v = d.get(key, ZERO) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def sphere_density(component, weight=None):
    """Exact x-density of the sphere integral of a homogeneous piece.

    ``weight`` optionally multiplies the integrand by xi^weight on the sphere.
    Radial powers and cutoff factors equal one on |xi| = 1 (only asymptotic
    terms are passed in).
    """
    n = component.dim
    out = {}
    for (s, a, b, rp, wp), c in component.terms.items():
        bb = b if weight is None else tuple(i + j for i, j in zip(b, weight))
        mom = moment_rational(bb)
        if mom:
            _add(out, (a, wp), c * gauss(mom))
    return ExactDensity(n, n // 2, out)


def sphere_integrate(sigma, x):
    """Integral over |xi| = 1 of the asymptotic terms of sigma, at the point x."""
    comp = sigma.asymptotic_part()
    return sphere_density(comp)(np.atleast_1d(np.asarray(x, dtype=float)))


def residue_density_exact(sigma):
    """Exact residue density: sphere integral of the degree -n component."""
    n = sigma.dim
    comp = sigma.component_of_degree(-n)
    return sphere_density(comp)


def residue_density(sigma, x):
    return residue_density_exact(sigma)(x)


def wodzicki_residue(sigma, spec=DEFAULT_SPEC, with_scale=False):
    require_windowed(sigma)
    val, scale = residue_density_exact(sigma).integrate(spec)
    return (val, scale) if with_scale else val


# ---------------------------------------------------------------------------
# cut-off integrals


@dataclass(frozen=True)
class FinitePartResult:
    """Channels of a cut-off integral (at a point x or integrated over x).

    ``per_degree_boundary[j]`` is ``-1/(m - j + n)`` times the sphere integral of
    the degree ``m - j`` component; degrees with ``m - j + n = 0`` feed the log
    channel instead.  ``compact_part`` is the integral over the unit ball (the transition band).
    """

    finite_part: complex
    log_coefficient: complex
    per_degree_boundary: dict
    compact_part: complex
    error: float
    reference_radius: float = 1.0
    exact_log: ExactDensity | None = None

    def to_dict(self):
        def z(v):
            return [float(np.real(v)), float(np.imag(v))]
        return {
            "finite_part": z(self.finite_part),
            "log_coefficient": z(self.log_coefficient),
            "per_degree_boundary": {str(k): z(v) for k, v in sorted(self.per_degree_boundary.items())},
            "compact_part": z(self.compact_part),
            "error": self.error,
            "reference_radius": self.reference_radius,
        }


def _radial_channels(key, n, lam, spec):
    """(band integral, closed-form tail, is_log) for the radial factor of a term."""
    s, a, b, rp, wp = key
    c = degree(key) + n
    if not rp:
        return 0.0, 0.0, False
    band = band_moment(float(c - 1), rp, 0, spec)
    if not is_asymptotic(key):
        return band, 0.0, False
    if c == 0:
        return band, log(lam), True
    return band, -1.0 / float(c), False


def _term_x_value(key, x):
    s, a, b, rp, wp = key
    val = 1.0
    for i in range(len(a)):
        if a[i]:
            val *= x[i] ** a[i]
        if wp[i]:
            val *= float(window_profile(x[i], wp[i]))
    return val


def _term_x_integral(key, spec):
    s, a, b, rp, wp = key
    val = 1.0
    for i in range(len(a)):
        val *= window_moment(a[i], wp[i], spec)
    return val


def _finite_part(sigma, xfactor, lam, spec):
    n = sigma.dim
    sphere_pi = pi ** (n // 2)
    fp = 0j
    compact = 0j
    logc = 0j
    scale = 0.0
    exact_log = {}
    for key, c in sigma.terms.items():
        mom = moment_rational(key[2])
        if not mom:
            continue
        if is_asymptotic(key) and degree(key) + n == 0:
            _add(exact_log, (key[1], key[4]), c * gauss(mom))
        xf = xfactor(key)
        if xf == 0.0:
            continue
        band, tail, is_log = _radial_channels(key, n, lam, spec)
        base = to_complex(c) * float(mom) * sphere_pi * xf
        if is_log:
            logc += base
        contribution = base * (band + tail)
        compact += base * band
        fp += contribution
        scale += abs(base) * (abs(band) + abs(tail))
    boundary = {}
    m = sigma.order
    for j in range(sigma.depth + 1):
        d = m - j
        if d + n == 0:
            continue
        comp = sigma.component_of_degree(d)
        if comp.is_zero():
            continue
        val = 0j
        for key, c in comp.terms.items():
            mom = moment_rational(key[2])
            if mom:
                val += to_complex(c) * float(mom) * sphere_pi * xfactor(key)
        boundary[j] = -val / float(d + n)
    err = _ROUND * scale * max(1, len(sigma.terms)) ** 0.5 + spec.tol * scale
    return FinitePartResult(fp, logc, boundary, compact, err, float(lam),
                            ExactDensity(n, n // 2, exact_log))


def finite_part_density(sigma, x, lam=1.0, spec=DEFAULT_SPEC):
    """Cut-off integral over xi at the point x, with all channels."""
    x = np.asarray(x, dtype=float)
    return _finite_part(sigma, lambda key: _term_x_value(key, x), lam, spec)


def finite_part_integral(sigma, lam=1.0, spec=DEFAULT_SPEC):
    """Cut-off integral over T*U with all channels (x-integrated)."""
    require_windowed(sigma)
    return _finite_part(sigma, lambda key: _term_x_integral(key, spec), lam, spec)


def cutoff_integral(sigma, lam=1.0, spec=DEFAULT_SPEC):
    if isinstance(sigma, TranslatedSymbol):
        return translated_cutoff_integral(sigma, spec)[0]
    return finite_part_integral(sigma, lam, spec).finite_part


# ---------------------------------------------------------------------------
# defects


def sphere_flux(sigma, i, spec=DEFAULT_SPEC):
    """int_U int_{|xi|=1} sigma_{-n+1}(x, xi) xi_i dS dx (the IBP boundary term)."""
    require_windowed(sigma)
    n = sigma.dim
    comp = sigma.component_of_degree(1 - n)
    weight = tuple(1 if j == i else 0 for j in range(n))
    return sphere_density(comp, weight).integrate(spec)[0]


def ibp_defect(sigma, i, spec=DEFAULT_SPEC):
    """(cut-off integral of d sigma / d xi_i, independent sphere-flux boundary term)."""
    require_windowed(sigma)
    return cutoff_integral(sigma.partial_xi(i), spec=spec), sphere_flux(sigma, i, spec)


def _direction_rule(n, level):
    """Quadrature on the unit sphere S^{n-1}: points (N, n) and weights."""
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 2:
        m = 16 * 2**level
        t = 2 * pi * (np.arange(m) + 0.5) / m
        return np.stack([np.cos(t), np.sin(t)], axis=-1), np.full(m, 2 * pi / m)
    if n == 3:
        m = 8 * 2**level
        u, wu = np.polynomial.legendre.leggauss(m)
        k = 2 * m
        p = 2 * pi * (np.arange(k) + 0.5) / k
        U, P = np.meshgrid(u, p, indexing="ij")
        s = np.sqrt(1 - U**2)
        pts = np.stack([s * np.cos(P), s * np.sin(P), U], axis=-1).reshape(-1, 3)
        w = (wu[:, None] * np.full(k, 2 * pi / k)[None, :]).ravel()
        return pts, w
    raise ValueError("ball quadrature supports n <= 3")


def _ball_integral(func, n, eta, radius, spec):
    """int_{|xi| <= radius} func(xi + eta) dxi, directions times adaptive radial."""
    eta = np.asarray(eta, dtype=float)
    prev = None
    err = 0.0
    for level in range(8):
        dirs, wts = _direction_rule(n, level)
        total = 0j
        for omega, w in zip(dirs, wts):
            # radii where |rho omega + eta| crosses the band edges
            bps = []
            pe = float(omega @ eta)
            ee = float(eta @ eta)
            for edge in (0.5, 1.0):
                disc = pe * pe - (ee - edge * edge)
                if disc >= 0:
                    for rho in (-pe - disc**0.5, -pe + disc**0.5):
                        if 0 < rho < radius:
                            bps.append(rho)
            bps.append(max(0.0, -pe))

            def f(rho, omega=omega):
                pts = rho[:, None] * omega[None, :] + eta[None, :]
                return func(pts) * rho ** (n - 1)

            val, e = radial_quad(f, 0.0, radius, spec, breakpoints=bps)
            total += w * val
            err += w * e
        if n == 1:
            return total, err
        if prev is not None and abs(total - prev) <= 10 * spec.tol * (1 + abs(total)):
            return total, abs(total - prev) + err
        prev = total
    return total, abs(total - prev) + err


def translated_cutoff_integral(ts, spec=QuadratureSpec(tol=1e-12)):
    """Cut-off integral of sigma(x, xi + eta): ball part plus exact tail.

    Returns (value, error estimate).  The error includes the size of the
    first neglected order of the expansion at the matching radius.
    """
    sigma = ts.source
    require_windowed(sigma)
    n = sigma.dim
    if all(e == 0 for e in ts.shift):
        res = finite_part_integral(sigma, spec=spec)
        return res.finite_part, res.error
    eta = [float(e) for e in ts.shift]
    R0 = float(ts.radius)
    # group terms by their x-factor; each group is integrated as a xi-function
    nox = (0,) * n
    now = tuple(() for _ in range(n))
    groups = {}
    for (s, a, b, rp, wp), c in sigma.terms.items():
        groups.setdefault((a, wp), {})[(s, nox, b, rp, now)] = c
    total = 0j
    err = 0.0
    sphere_pi = pi ** (n // 2)
    for (a, wp), terms in sorted(groups.items()):
        xint = _term_x_integral((None, a, None, None, wp), spec)
        if xint == 0.0:
            continue
        part = ClassicalSymbol(n, terms, sigma.order, normalize=False, check=False)

        def func(pts, part=part):
            return part.evaluate(np.zeros_like(pts), pts)

        ball, e = _ball_integral(func, n, eta, R0, spec)
        total += xint * ball
        err += abs(xint) * e
    # closed-form tail of the expansion outside the ball
    for key, c in ts.expansion.terms.items():
        mom = moment_rational(key[2])
        if not mom:
            continue
        xint = _term_x_integral(key, spec)
        cexp = degree(key) + n
        tail = -log(R0) if cexp == 0 else -(R0 ** float(cexp)) / float(cexp)
        total += to_complex(c) * float(mom) * sphere_pi * xint * tail
    # size of the first dropped order at the matching radius
    nxt = sigma.order - ts.depth - 1 + n
    scale = sum(abs(to_complex(c)) for c in ts.expansion.terms.values())
    err += scale * (R0 ** float(nxt) if nxt < 0 else float("inf"))
    return total, err


def translation_defect(sigma, eta, depth, spec=QuadratureSpec(tol=1e-12), radius=None):
    """cut-off integral of sigma(x, xi + eta) minus that of sigma."""
    require_windowed(sigma)
    if all(e == 0 for e in eta):
        return 0j
    ts = translate(sigma, eta, depth, radius)
    val, _ = translated_cutoff_integral(ts, spec)
    return val - cutoff_integral(sigma, spec=spec)
