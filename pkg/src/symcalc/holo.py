"""Riesz-type holomorphic families and Laurent germs of their cut-off integrals.

The Riesz family of a symbol sigma of order m is

    sigma(z) = H(z) |xi|^(slope z) A + R,    alpha(z) = m + slope z,

where A collects the terms of sigma that carry a plain cutoff chi^p (polynomial
terms are split as chi P + (1 - chi) P) and R is the compactly supported rest.
For rational z the family is again an exact ClassicalSymbol.

Cut-off integrals of a family are meromorphic in z.  A term of homogeneity
degree d contributes

    int_{1/2}^1 r^(d+n-1+slope z) chi^p dr  -  1/(d + n + slope z)

times its sphere moment and x-integral.  The band integral is entire; its
Taylor coefficients are band moments weighted by (slope log r)^k / k!.  The
second piece is a simple pole at z = -(d+n)/slope or an exact geometric series.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, pi

import numpy as np

from .coeffs import ZERO, frac, gauss, to_complex
from .forms import SymbolForm, exterior_derivative, sort_sign
from .quadrature import DEFAULT_SPEC, band_moment, moment_rational
from .regint import cutoff_integral, require_windowed, wodzicki_residue, _term_x_integral
from .symbols import ClassicalSymbol, SupportError, degree, is_asymptotic


class LaurentGerm:
    """Truncated Laurent expansion sum_k c_k (z - z0)^k for k < jet_len."""

    __slots__ = ("z0", "coeffs", "jet_len")

    def __init__(self, z0, coeffs, jet_len):
        self.z0 = frac(z0)
        self.jet_len = int(jet_len)
        self.coeffs = {int(k): complex(v) for k, v in coeffs.items()
                       if k < self.jet_len and v != 0}

    @property
    def pole_order(self):
        neg = [k for k in self.coeffs if k < 0]
        return -min(neg) if neg else 0

    def __getitem__(self, k):
        return self.coeffs.get(k, 0j)

    def residue(self):
        return self[-1]

    def finite_part(self):
        return self[0]

    def principal(self):
        return {k: v for k, v in self.coeffs.items() if k < 0}

    def jet(self):
        return [self[k] for k in range(self.jet_len)]

    def _same_point(self, other):
        if self.z0 != other.z0:
            raise ValueError("germs at different points")

    def __add__(self, other):
        if not isinstance(other, LaurentGerm):
            other = LaurentGerm(self.z0, {0: complex(other)}, self.jet_len)
        self._same_point(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0j) + v
        return LaurentGerm(self.z0, out, min(self.jet_len, other.jet_len))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LaurentGerm(self.z0, {k: v * c for k, v in self.coeffs.items()}, self.jet_len)

    def __mul__(self, other):
        if not isinstance(other, LaurentGerm):
            return self.scale(complex(other))
        self._same_point(other)
        # truncation valid for the product: jet limited by the other's pole order
        jl = min(self.jet_len - other.pole_order, other.jet_len - self.pole_order)
        out = {}
        for k1, v1 in self.coeffs.items():
            for k2, v2 in other.coeffs.items():
                if k1 + k2 < jl:
                    out[k1 + k2] = out.get(k1 + k2, 0j) + v1 * v2
        return LaurentGerm(self.z0, out, jl)

    __rmul__ = __mul__

    def max_abs(self):
        return max((abs(v) for v in self.coeffs.values()), default=0.0)

    def to_dict(self):
        def z(v):
            return [v.real, v.imag]
        return {
            "z0": str(self.z0),
            "principal": {str(k): z(v) for k, v in sorted(self.principal().items())},
            "jet": {str(k): z(self[k]) for k in range(self.jet_len)},
        }

    def __repr__(self):
        return f"LaurentGerm(z0={self.z0}, coeffs={dict(sorted(self.coeffs.items()))})"


def _poly_at(poly, z0, jet_len):
    """Germ at z0 of the polynomial sum poly[k] z^k."""
    z0 = frac(z0)
    out = {}
    for j in range(len(poly)):
        # coefficient of (z - z0)^j: sum_k poly[k] C(k, j) z0^(k - j)
        acc = ZERO
        for k in range(j, len(poly)):
            acc += poly[k] * gauss(Fraction(factorial(k), factorial(j) * factorial(k - j)) * z0 ** (k - j))
        out[j] = to_complex(acc)
    return LaurentGerm(z0, out, jet_len)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class Part:
    """zpoly(z) * |xi|^(slope z if riesz) * item; item a symbol or a form."""

    item: object
    zpoly: tuple
    riesz: bool


@dataclass(frozen=True)
class HoloFamily:
    """A finite sum of parts; ``base`` is the member at z = 0."""

    base: object
    parts: tuple
    slope: Fraction = Fraction(-1)
    H: tuple = field(default=(gauss(1),))

    @property
    def dim(self):
        return self.base.dim

    @property
    def order(self):
        return self.base.order

    def order_at(self, z):
        return self.base.order + self.slope * frac(z)

    def alpha_prime(self):
        return self.slope

    def at(self, z):
        """The member at a rational z, as an exact symbol or form."""
        z = frac(z)
        shift = self.slope * z
        total = None
        for p in self.parts:
            val = ZERO
            for k, c in enumerate(p.zpoly):
                val += c * gauss(z**k)
            item = _shift_item(p.item, shift) if p.riesz else p.item
            item = _scale_item(item, val)
            total = item if total is None else _add_items(total, item, self.order_at(z))
        return total

    def d(self):
        """Exterior derivative of a form family (parts stay Riesz-shaped)."""
        if not isinstance(self.base, SymbolForm):
            raise TypeError("d applies to form families")
        parts = []
        s = self.slope
        for p in self.parts:
            parts.append(Part(exterior_derivative(p.item), p.zpoly, p.riesz))
            if p.riesz:
                # d |xi|^(s z) = s z |xi|^(s z) sum xi_l |xi|^-2 dxi_l
                zp = (ZERO,) + tuple(c * gauss(s) for c in p.zpoly)
                parts.append(Part(kappa_wedge(p.item), zp, True))
        return HoloFamily(exterior_derivative(self.base), tuple(parts), self.slope, self.H)


def _shift_item(item, shift):
    if isinstance(item, SymbolForm):
        return SymbolForm(item.dim, item.degree, item.order + shift,
                          {b: _shift_symbol(s, shift) for b, s in item.coeffs.items()}, check=False)
    return _shift_symbol(item, shift)


def _shift_symbol(sigma, shift):
    terms = {(k[0] + shift,) + k[1:]: c for k, c in sigma.terms.items()}
    return ClassicalSymbol(sigma.dim, terms, sigma.order + shift, normalize=False, check=False)


def _scale_item(item, c):
    return item.scale(c)


def _add_items(a, b, order):
    if isinstance(a, SymbolForm):
        coeffs = dict(a.coeffs)
        for k, s in b.coeffs.items():
            target = order - sum(1 for g in k if g >= a.dim)
            coeffs[k] = _merge(coeffs[k], s, target) if k in coeffs else s
        return SymbolForm(a.dim, a.degree, order, coeffs, check=False)
    return _merge(a, b, order)


def _merge(a, b, order):
    terms = dict(a.terms)
    for k, c in b.terms.items():
        terms[k] = terms.get(k, ZERO) + c
    return ClassicalSymbol(a.dim, terms, order, normalize=False, check=False)


def _split_symbol(sigma):
    """(A, R): A carries a plain cutoff, R is compactly supported."""
    n = sigma.dim
    a_terms, r_terms = {}, {}
    for key, c in sigma.terms.items():
        s, a, b, rp, wp = key
        if not rp:
            chi_key = (s, a, b, (0,), wp)
            a_terms[chi_key] = a_terms.get(chi_key, ZERO) + c
            # (1 - chi) P: the polynomial minus its cutoff version
            r_terms[key] = r_terms.get(key, ZERO) + c
            r_terms[chi_key] = r_terms.get(chi_key, ZERO) - c
        elif is_asymptotic(key):
            a_terms[key] = a_terms.get(key, ZERO) + c
        else:
            r_terms[key] = r_terms.get(key, ZERO) + c
    A = ClassicalSymbol(n, a_terms, sigma.order, normalize=False, check=False)
    R = ClassicalSymbol(n, r_terms, sigma.order, normalize=False, check=False)
    return A, R


def _check_H(H_jet):
    H = tuple(gauss(c) for c in H_jet) if H_jet else (gauss(1),)
    if H[0] != gauss(1):
        raise ValueError("the prefactor must satisfy H(0) = 1")
    return H


def riesz_family(item, H_jet=(1,), slope=-1):
    """Riesz family of a symbol or form: H(z) |xi|^(slope z) on the cutoff part."""
    H = _check_H(H_jet)
    slope = frac(slope)
    if slope == 0:
        raise ValueError("the order map needs a non-zero slope")
    if isinstance(item, SymbolForm):
        a_coeffs, r_coeffs = {}, {}
        for b, s in item.coeffs.items():
            A, R = _split_symbol(s)
            a_coeffs[b], r_coeffs[b] = A, R
        A = SymbolForm(item.dim, item.degree, item.order, a_coeffs, check=False)
        R = SymbolForm(item.dim, item.degree, item.order, r_coeffs, check=False)
    else:
        A, R = _split_symbol(item)
    parts = [Part(A, H, True)]
    if not R.is_zero():
        parts.append(Part(R, (gauss(1),), False))
    return HoloFamily(item, tuple(parts), slope, H)


def kappa_wedge(form):
    """sum_l xi_l |xi|^-2 dxi_l ^ form (pointwise)."""
    n = form.dim
    out = {}
    for basis, sigma in form.coeffs.items():
        for l in range(n):
            g = n + l
            sign, key = sort_sign((g,) + basis)
            if sign == 0:
                continue
            k_l = ClassicalSymbol.from_monomials(
                n, [(1, (0,) * n, tuple(1 if i == l else 0 for i in range(n)), -2)], cutoff=False)
            coef = sigma * k_l
            if sign < 0:
                coef = -coef
            out[key] = _merge(out[key], coef, coef.order) if key in out else coef
    return SymbolForm(n, form.degree + 1, form.order, out, check=False)


# ---------------------------------------------------------------------------
# germs


def _symbol_germ(sigma, riesz, slope, z0, jet_len, spec):
    """Germ at z0 of the cut-off integral of |xi|^(slope z) sigma (or sigma alone)."""
    if not riesz:
        return LaurentGerm(z0, {0: cutoff_integral(sigma, spec=spec)}, jet_len)
    require_windowed(sigma)
    n = sigma.dim
    sphere_pi = pi ** (n // 2)
    out = {}
    for key, c in sigma.terms.items():
        mom = moment_rational(key[2])
        if not mom:
            continue
        rp = key[3]
        if not rp:
            raise SupportError("a Riesz factor needs a cutoff on every term")
        xint = _term_x_integral(key, spec)
        if xint == 0.0:
            continue
        base = to_complex(c) * float(mom) * sphere_pi * xint
        cc = degree(key) + n
        shifted = cc + slope * z0
        # entire band part: Taylor coefficients from log-weighted moments
        for k in range(jet_len):
            bm = band_moment(float(shifted - 1), rp, k, spec)
            out[k] = out.get(k, 0j) + base * bm * float(slope) ** k / factorial(k)
        if not is_asymptotic(key):
            continue
        if shifted == 0:
            out[-1] = out.get(-1, 0j) - base / float(slope)
        else:
            ratio = -float(slope) / float(shifted)
            for k in range(jet_len):
                out[k] = out.get(k, 0j) - base / float(shifted) * ratio**k
    return LaurentGerm(z0, out, jet_len)


def _top(item):
    if isinstance(item, SymbolForm):
        if item.degree != 2 * item.dim:
            return None
        return item.top_coefficient()
    return item


def laurent_cutoff_integral(family, z0=0, jet_len=3, spec=DEFAULT_SPEC):
    """Germ at z0 of z -> cut-off integral of family(z) (top part for forms)."""
    z0 = frac(z0)
    total = LaurentGerm(z0, {}, jet_len)
    for p in family.parts:
        sigma = _top(p.item)
        if sigma is None or sigma.is_zero():
            continue
        g = _symbol_germ(sigma, p.riesz, family.slope, z0, jet_len + 1, spec)
        total = total + _poly_at(p.zpoly, z0, jet_len + 1) * g
    return LaurentGerm(z0, total.coeffs, jet_len)


def pole_set(family):
    """Poles z = -(d + n)/slope of the Riesz parts whose residue density is non-zero."""
    from .regint import sphere_density
    poles = set()
    n = family.dim
    for p in family.parts:
        if not p.riesz:
            continue
        sigma = _top(p.item)
        if sigma is None:
            continue
        for d in {degree(k) for k in sigma.terms if is_asymptotic(k)}:
            if not sphere_density(sigma.component_of_degree(d)).is_zero():
                poles.add(-(d + n) / family.slope)
    return sorted(poles)


def complex_residue_identity_defect(item, H_jet=(1,), spec=DEFAULT_SPEC):
    """(residue of the germ at 0, -res(item)/alpha'(0), |difference|)."""
    fam = riesz_family(item, H_jet)
    germ = laurent_cutoff_integral(fam, 0, 1, spec)
    if isinstance(item, SymbolForm):
        from .forms import residue_form
        if not item.windowed:
            raise SupportError("form is not compactly supported in x")
        res = residue_form(item, spec)
    else:
        res = wodzicki_residue(item, spec)
    rhs = -res / float(fam.alpha_prime())
    return germ.residue(), rhs, abs(germ.residue() - rhs)


def regularized_integral(item, H_jet=(1,), spec=DEFAULT_SPEC):
    """Finite part at z = 0 of the Riesz-regularised cut-off integral."""
    if isinstance(item, ClassicalSymbol):
        require_windowed(item)
    return laurent_cutoff_integral(riesz_family(item, H_jet), 0, 1, spec).finite_part()


def meromorphic_stokes_defect(beta, jet_len=3, H_jet=(1,), spec=DEFAULT_SPEC):
    """Germ at 0 of z -> cut-off integral of d(beta(z)); identically zero."""
    if beta.degree != 2 * beta.dim - 1:
        raise ValueError("need a form of degree 2n - 1")
    if not beta.windowed:
        raise SupportError("form is not compactly supported in x")
    fam = riesz_family(beta, H_jet).d()
    return laurent_cutoff_integral(fam, 0, jet_len, spec)
