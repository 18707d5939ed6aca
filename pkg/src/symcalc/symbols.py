"""Exact classical symbols built from homogeneous terms.

A symbol on T*U (U the open unit box in R^n) is a finite sum of terms

    c * x^a * prod_i g^(k_i)(x_i) * xi^b * |xi|^s * prod_j chi^(j)(|xi|)

with ``c`` a Gaussian rational and ``s`` a rational.  A term is stored under
the key ``(s, a, b, rprof, wprof)`` where ``rprof`` is the sorted tuple of chi
derivative orders and ``wprof`` holds, per axis, the sorted tuple of window
derivative orders.

* ``rprof == ()`` means no cutoff; such terms must be polynomial in xi to be
  smooth at the origin.
* ``rprof`` made only of zeros (chi, chi**2, ...) equals one for |xi| >= 1,
  so the term is a homogeneous component of degree ``s + |b|``.
* any positive entry makes the term compactly supported in 1/2 <= |xi| <= 1;
  such terms belong to the smoothing remainder and have no homogeneous part.

Representations are canonical: powers ``xi_n**2`` are rewritten as
``|xi|**2 - sum_{i<n} xi_i**2``, so equal functions have equal term data.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .coeffs import (
    ONE,
    ZERO,
    dump_coeff,
    frac,
    fstr,
    gauss,
    load_coeff,
    rational_binom,
    to_complex,
)
from .profiles import radial_profile, window_profile


class SymbolDomainError(ValueError):
    """Evaluation or integration outside the domain where a symbol is smooth."""


class SupportError(ValueError):
    """An operation needs compact x-support (a window factor on every axis)."""


def _add_exp(a, b):
    return tuple(i + j for i, j in zip(a, b))


def _bump(a, i, by=1):
    return a[:i] + (a[i] + by,) + a[i + 1:]


@lru_cache(maxsize=None)
def _reduce(xiexp, s):
    """Normal form of xi^b |xi|^s: last exponent reduced below 2."""
    e = xiexp[-1]
    if e < 2:
        return ((xiexp, s, 1),)
    base = xiexp[:-1] + (e - 2,)
    acc = defaultdict(int)
    for b, ss, c in _reduce(base, s + 2):
        acc[(b, ss)] += c
    for i in range(len(xiexp) - 1):
        for b, ss, c in _reduce(_bump(base, i, 2), s):
            acc[(b, ss)] -= c
    return tuple((b, ss, c) for (b, ss), c in acc.items() if c)


def _merge_prof(p, q):
    return tuple(sorted(p + q))


def is_polynomial_power(s):
    return s.denominator == 1 and s >= 0 and s % 2 == 0


def _accumulate(target, key, c):
    s, a, b, rp, wp = key
    if b and b[-1] >= 2:
        for b2, s2, k in _reduce(b, s):
            k2 = (s2, a, b2, rp, wp)
            target[k2] = target.get(k2, ZERO) + c * k
    else:
        target[key] = target.get(key, ZERO) + c


class ClassicalSymbol:
    """An exact classical symbol of rational order on the unit box in R^dim."""

    __slots__ = ("dim", "order", "terms")

    def __init__(self, dim, terms, order, normalize=True, check=True):
        self.dim = int(dim)
        self.order = frac(order)
        if normalize:
            acc = {}
            for key, c in terms.items():
                _accumulate(acc, key, gauss(c))
            terms = acc
        self.terms = {k: c for k, c in terms.items() if c}
        if check:
            self._check()

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, dim, order=0):
        return cls(dim, {}, order)

    @classmethod
    def constant(cls, dim, value=1, windowed=False):
        """The constant symbol (no cutoff needed); unwindowed it is the unit."""
        wp = tuple((0,) for _ in range(dim)) if windowed else tuple(() for _ in range(dim))
        key = (Fraction(0), (0,) * dim, (0,) * dim, (), wp)
        return cls(dim, {key: gauss(value)}, 0)

    @classmethod
    def from_monomials(cls, dim, monomials, cutoff=True, windowed=False, order=None):
        """Build from ``(coeff, xexp, xiexp, radial_power)`` tuples.

        ``cutoff`` multiplies every term by chi(|xi|); ``windowed`` by w(x).
        The order defaults to the largest homogeneity degree.
        """
        rp = (0,) if cutoff else ()
        wp = tuple((0,) if windowed else () for _ in range(dim))
        terms = {}
        degrees = []
        for coeff, xexp, xiexp, s in monomials:
            s = frac(s)
            xexp, xiexp = tuple(xexp), tuple(xiexp)
            if len(xexp) != dim or len(xiexp) != dim:
                raise ValueError("exponent length does not match dimension")
            key = (s, xexp, xiexp, rp, wp)
            terms[key] = terms.get(key, ZERO) + gauss(coeff)
            degrees.append(s + sum(xiexp))
        if order is None:
            order = max(degrees) if degrees else 0
        return cls(dim, terms, order)

    # -- validation and properties -----------------------------------------
    def _check(self):
        n = self.dim
        for (s, a, b, rp, wp) in self.terms:
            if len(a) != n or len(b) != n or len(wp) != n:
                raise ValueError("term shape does not match dimension")
            if any(k > 0 for k in rp):
                continue
            d = s + sum(b)
            gap = self.order - d
            if gap.denominator != 1 or gap < 0:
                raise ValueError(
                    f"term of degree {d} is not an order-{self.order} component"
                )
            if not rp and not is_polynomial_power(s):
                # singular at the origin without a cutoff: allowed as term
                # data (homogeneous components) but not as an integrand
                pass

    @property
    def depth(self):
        gaps = [int(self.order - degree(k)) for k in self.terms if is_asymptotic(k)]
        return max(gaps, default=0)

    @property
    def windowed(self):
        return all(all(p for p in k[4]) for k in self.terms)

    @property
    def cutoff_applied(self):
        return all(k[3] or is_polynomial_power(k[0]) for k in self.terms)

    @property
    def is_integer_order(self):
        return self.order.denominator == 1

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({degree(k) for k in self.terms if is_asymptotic(k)}, reverse=True)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ClassicalSymbol):
            if other.dim != self.dim:
                raise ValueError("dimension mismatch")
            return other
        return ClassicalSymbol.constant(self.dim, other)

    def _sum_order(self, other):
        gap = self.order - other.order
        if gap.denominator == 1:
            return max(self.order, other.order)
        if not other.terms:
            return self.order
        if not self.terms:
            return other.order
        raise ValueError(
            f"orders {self.order} and {other.order} do not differ by an integer"
        )

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, ZERO) + c
        return ClassicalSymbol(self.dim, terms, self._sum_order(other), normalize=False)

    __radd__ = __add__

    def __neg__(self):
        return ClassicalSymbol(self.dim, {k: -c for k, c in self.terms.items()},
                               self.order, normalize=False, check=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = gauss(c)
        return ClassicalSymbol(self.dim, {k: v * c for k, v in self.terms.items()},
                               self.order, normalize=False, check=False)

    def __mul__(self, other):
        if not isinstance(other, ClassicalSymbol):
            return self.scale(other)
        return multiply_pointwise(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, ClassicalSymbol):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        return f"ClassicalSymbol(dim={self.dim}, order={fstr(self.order)}, terms={len(self.terms)})"

    # -- structure -----------------------------------------------------------
    def filter(self, keep, order=None):
        return ClassicalSymbol(self.dim, {k: c for k, c in self.terms.items() if keep(k)},
                               self.order if order is None else order,
                               normalize=False, check=False)

    def asymptotic_part(self):
        return self.filter(is_asymptotic)

    def compact_part(self):
        return self.filter(lambda k: not is_asymptotic(k))

    def prune(self, min_degree=None, drop_compact=False):
        """Drop asymptotic terms below ``min_degree`` (and compact terms if asked)."""
        def keep(k):
            if not is_asymptotic(k):
                return not drop_compact
            return min_degree is None or degree(k) >= min_degree
        return self.filter(keep)

    def component_of_degree(self, d):
        """Homogeneous component of degree d (terms without cutoff factors)."""
        d = frac(d)
        out = {}
        for k, c in self.terms.items():
            if is_asymptotic(k) and degree(k) == d:
                k2 = (k[0], k[1], k[2], (), k[4])
                out[k2] = out.get(k2, ZERO) + c
        return ClassicalSymbol(self.dim, out, d, normalize=False, check=False)

    def homogeneous_component(self, j):
        """sigma_{m-j}: the positively homogeneous part of degree order - j."""
        if j < 0 or j != int(j):
            raise ValueError("component index must be a non-negative integer")
        if j > self.depth:
            raise IndexError(f"component {j} beyond truncation depth {self.depth}")
        return self.component_of_degree(self.order - j)

    def leading(self):
        return self.component_of_degree(self.order)

    # -- derivatives ---------------------------------------------------------
    def partial_xi(self, i):
        n = self.dim
        if not 0 <= i < n:
            raise IndexError("axis out of range")
        out = {}
        for (s, a, b, rp, wp), c in self.terms.items():
            if b[i]:
                _accumulate(out, (s, a, _bump(b, i, -1), rp, wp), c * b[i])
            if s:
                f = frac(s)
                _accumulate(out, (s - 2, a, _bump(b, i), rp, wp), c * gauss(f))
            for j in range(len(rp)):
                if j and rp[j] == rp[j - 1]:
                    continue
                mult = rp.count(rp[j])
                rp2 = tuple(sorted(rp[:j] + (rp[j] + 1,) + rp[j + 1:]))
                _accumulate(out, (s - 1, a, _bump(b, i), rp2, wp), c * mult)
        return ClassicalSymbol(n, out, self.order - 1, normalize=False, check=False)

    def partial_x(self, i):
        n = self.dim
        if not 0 <= i < n:
            raise IndexError("axis out of range")
        out = {}
        for (s, a, b, rp, wp), c in self.terms.items():
            if a[i]:
                k = (s, _bump(a, i, -1), b, rp, wp)
                out[k] = out.get(k, ZERO) + c * a[i]
            prof = wp[i]
            for j in range(len(prof)):
                if j and prof[j] == prof[j - 1]:
                    continue
                mult = prof.count(prof[j])
                p2 = tuple(sorted(prof[:j] + (prof[j] + 1,) + prof[j + 1:]))
                k = (s, a, b, rp, wp[:i] + (p2,) + wp[i + 1:])
                out[k] = out.get(k, ZERO) + c * mult
        return ClassicalSymbol(n, out, self.order, normalize=False, check=False)

    def d_xi(self, alpha):
        out = self
        for i, k in enumerate(alpha):
            for _ in range(k):
                out = out.partial_xi(i)
        return out

    def d_x(self, alpha):
        out = self
        for i, k in enumerate(alpha):
            for _ in range(k):
                out = out.partial_x(i)
        return out

    # -- evaluation ----------------------------------------------------------
    def evaluate(self, x, xi):
        """Numeric value at points x, xi (arrays of shape (..., n) or (n,))."""
        n = self.dim
        x = np.asarray(x, dtype=float)
        xi = np.asarray(xi, dtype=float)
        if x.shape[-1:] != (n,) or xi.shape[-1:] != (n,):
            raise ValueError("points must have trailing dimension n")
        x, xi = np.broadcast_arrays(x, xi)
        r = np.sqrt(np.sum(xi * xi, axis=-1))
        out = np.zeros(r.shape, dtype=complex)
        rcache, wcache = {}, {}
        for (s, a, b, rp, wp), c in self.terms.items():
            val = np.full(r.shape, to_complex(c))
            for i in range(n):
                if a[i]:
                    val = val * x[..., i] ** a[i]
                if b[i]:
                    val = val * xi[..., i] ** b[i]
                if wp[i]:
                    key = (i, wp[i])
                    if key not in wcache:
                        wcache[key] = window_profile(x[..., i], wp[i])
                    val = val * wcache[key]
            if s:
                if rp:
                    if rp not in rcache:
                        rcache[rp] = radial_profile(r, rp)
                    prof = rcache[rp]
                    with np.errstate(divide="ignore", invalid="ignore"):
                        rs = np.where(r > 0, r ** float(s), 0.0)
                    val = val * rs * prof
                else:
                    if s < 0 and np.any(r == 0):
                        raise SymbolDomainError("xi = 0 with a negative radial power")
                    val = val * r ** float(s)
            elif rp:
                if rp not in rcache:
                    rcache[rp] = radial_profile(r, rp)
                val = val * rcache[rp]
            out = out + val
        return out

    # -- serialisation ---------------------------------------------------------
    def to_dict(self):
        terms = []
        for (s, a, b, rp, wp), c in sorted(self.terms.items(), key=_sort_key):
            entry = {
                "xcoeff": {_mono(a): dump_coeff(c)},
                "angular": {_mono(b): "1"},
                "radial_power": fstr(s),
            }
            if rp != (0,):
                entry["chi_profile"] = list(rp)
            if any(p != (0,) for p in wp):
                entry["window_profile"] = [list(p) for p in wp]
            terms.append(entry)
        return {
            "dim": self.dim,
            "order": fstr(self.order),
            "depth": self.depth,
            "windowed": self.windowed and bool(self.terms),
            "terms": terms,
        }

    @classmethod
    def from_dict(cls, data):
        dim = int(data["dim"])
        order = frac(data["order"])
        windowed = bool(data.get("windowed", False))
        terms = {}
        for t in data["terms"]:
            s = frac(t.get("radial_power", "0"))
            rp = tuple(sorted(t["chi_profile"])) if "chi_profile" in t else (
                (0,) if t.get("cutoff", True) else ())
            if "window_profile" in t:
                wp = tuple(tuple(sorted(p)) for p in t["window_profile"])
            else:
                wp = tuple((0,) if windowed else () for _ in range(dim))
            for am, ac in t["xcoeff"].items():
                for bm, bc in t["angular"].items():
                    a, b = _parse_mono(am, dim), _parse_mono(bm, dim)
                    key = (s, a, b, rp, wp)
                    terms[key] = terms.get(key, ZERO) + load_coeff(ac) * load_coeff(bc)
        sym = cls(dim, terms, order)
        if "depth" in data and sym.terms and int(data["depth"]) < sym.depth:
            raise ValueError("terms exceed the declared depth")
        return sym


def _sort_key(item):
    (s, a, b, rp, wp), _ = item
    return (-(s + sum(b)), a, b, s, rp, wp)


def _mono(e):
    return ",".join(str(i) for i in e)


def _parse_mono(key, dim):
    if isinstance(key, str):
        key = key.strip("()[] ")
        parts = [p for p in key.split(",") if p.strip() != ""]
        e = tuple(int(p) for p in parts)
    else:
        e = tuple(int(p) for p in key)
    if len(e) != dim:
        raise ValueError(f"monomial {key!r} does not have {dim} exponents")
    return e


def degree(key):
    return key[0] + sum(key[2])


def is_asymptotic(key):
    return not any(k > 0 for k in key[3])


def multiply_pointwise(f, g, min_degree=None, drop_compact=False):
    """Pointwise product; orders add.

    ``min_degree`` and ``drop_compact`` skip term pairs whose product would be
    pruned anyway (asymptotic degrees below ``min_degree``, compact terms).
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    out = {}
    gitems = [(k, c, degree(k), is_asymptotic(k)) for k, c in g.terms.items()]
    for k1, c1 in f.terms.items():
        s1, a1, b1, r1, w1 = k1
        d1, asym1 = degree(k1), is_asymptotic(k1)
        if drop_compact and not asym1:
            continue
        for (s2, a2, b2, r2, w2), c2, d2, asym2 in gitems:
            if drop_compact and not asym2:
                continue
            if min_degree is not None and d1 + d2 < min_degree:
                continue
            key = (s1 + s2, _add_exp(a1, a2), _add_exp(b1, b2), _merge_prof(r1, r2),
                   tuple(_merge_prof(p, q) for p, q in zip(w1, w2)))
            _accumulate(out, key, c1 * c2)
    return ClassicalSymbol(f.dim, out, f.order + g.order, normalize=False, check=False)


def homogeneous_component(sigma, j):
    return sigma.homogeneous_component(j)


def partial_xi(sigma, i):
    return sigma.partial_xi(i)


def partial_x(sigma, i):
    return sigma.partial_x(i)


def evaluate(sigma, x, xi):
    return sigma.evaluate(x, xi)


# ---------------------------------------------------------------------------
# translation xi -> xi + eta


def _poly_mul(p, q):
    out = defaultdict(Fraction)
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[_add_exp(e1, e2)] += c1 * c2
    return {e: c for e, c in out.items() if c}


def _poly_pow(p, k, n):
    out = {(0,) * n: Fraction(1)}
    for _ in range(k):
        out = _poly_mul(out, p)
    return out


def _shift_monomial(b, eta):
    """Expand prod_i (xi_i + eta_i)^b_i."""
    n = len(b)
    out = {(0,) * n: Fraction(1)}
    for i, e in enumerate(b):
        factor = {}
        for j in range(e + 1):
            c = Fraction(factorial(e), factorial(j) * factorial(e - j)) * eta[i] ** (e - j)
            if c:
                factor[_bump((0,) * n, i, j)] = c
        out = _poly_mul(out, factor)
    return out


@dataclass(frozen=True)
class TranslatedSymbol:
    """sigma(x, xi + eta) as an expansion valid for |xi| >= radius plus the source.

    ``expansion`` carries the homogeneous components of the translated symbol
    down to degree ``order - depth``.  Inside the ball of the given radius the
    translated function is evaluated directly from ``source``.
    """

    source: ClassicalSymbol
    shift: tuple
    depth: int
    radius: float
    expansion: ClassicalSymbol

    @property
    def dim(self):
        return self.source.dim

    @property
    def order(self):
        return self.source.order

    def evaluate(self, x, xi):
        xi = np.asarray(xi, dtype=float)
        eta = np.array([float(e) for e in self.shift])
        return self.source.evaluate(x, xi + eta)


def default_translation_radius(eta):
    size = float(np.sqrt(sum(float(e) ** 2 for e in eta)))
    return max(2.0 * (1.0 + size), 64.0 * size, 4.0)


def translate(sigma, eta, depth, radius=None):
    """Asymptotic re-expansion of sigma(x, xi + eta) for a constant covector eta.

    Each homogeneous term P(xi)|xi|^s is expanded with
    |xi + eta|^s = |xi|^s sum_k C(s/2, k) u^k,  u = (2 xi.eta + |eta|^2)/|xi|^2,
    keeping components of degree >= order - depth.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    n = sigma.dim
    eta = tuple(frac(e) for e in eta)
    if len(eta) != n:
        raise ValueError("shift has the wrong dimension")
    if radius is None:
        radius = default_translation_radius(eta)
    if all(e == 0 for e in eta):
        return TranslatedSymbol(sigma, eta, depth, radius, sigma)
    floor = sigma.order - depth
    eta_sq = sum(e * e for e in eta)
    u_poly = {(0,) * n: eta_sq}
    for i in range(n):
        if eta[i]:
            u_poly[_bump((0,) * n, i)] = 2 * eta[i]
    u_pows = [_poly_pow(u_poly, k, n) for k in range(depth + 1)]
    out = {}
    for key, c in sigma.terms.items():
        if not is_asymptotic(key):
            continue
        s, a, b, rp, wp = key
        shifted = _shift_monomial(b, eta)
        for k in range(depth + 1):
            bk = rational_binom(s / 2, k)
            if not bk:
                continue
            for e1, c1 in shifted.items():
                for e2, c2 in u_pows[k].items():
                    e = _add_exp(e1, e2)
                    s2 = s - 2 * k
                    if s2 + sum(e) < floor:
                        continue
                    _accumulate(out, (s2, a, e, rp, wp), c * gauss(bk * c1 * c2))
    expansion = ClassicalSymbol(n, out, sigma.order, normalize=False, check=False)
    return TranslatedSymbol(sigma, eta, depth, radius, expansion)
