"""Symbol-valued differential forms on T*U.

Generators are numbered ``0..n-1`` for dx_1..dx_n and ``n..2n-1`` for
dxi_1..dxi_n.  A basis element is a sorted tuple of generators; the top form
``(0, ..., 2n-1)`` is dx_1 ^ ... ^ dx_n ^ dxi_1 ^ ... ^ dxi_n, the orientation
used by every integral.  A form of order m has, at a basis element with
``|J|`` dxi-factors, a coefficient of order ``m - |J|``.
"""
from __future__ import annotations

from fractions import Fraction

from .coeffs import ZERO, frac, fstr
from .quadrature import DEFAULT_SPEC
from .regint import cutoff_integral, require_windowed, sphere_density, wodzicki_residue
from .star import star
from .symbols import ClassicalSymbol, SupportError, degree, is_asymptotic


def sort_sign(seq):
    """(sign, sorted tuple) of a sequence of distinct generators; sign 0 on repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign, tuple(sorted(seq))


def xi_count(basis, n):
    return sum(1 for g in basis if g >= n)


def _fit_order(sigma, target):
    """Re-declare a coefficient at the order its slot requires."""
    if sigma.order == target:
        return sigma
    gap = target - sigma.order
    if gap.denominator != 1:
        raise ValueError(f"coefficient of order {sigma.order} cannot sit in an order-{target} slot")
    return ClassicalSymbol(sigma.dim, sigma.terms, target, normalize=False)


class SymbolForm:
    """A k-form with classical-symbol coefficients and declared order."""

    __slots__ = ("dim", "degree", "order", "coeffs")

    def __init__(self, dim, degree, order, coeffs, check=True):
        self.dim = int(dim)
        self.degree = int(degree)
        self.order = frac(order)
        out = {}
        for basis, sigma in coeffs.items():
            if len(basis) != self.degree:
                raise ValueError(f"basis element {basis} does not have degree {self.degree}")
            if any(not 0 <= g < 2 * self.dim for g in basis):
                raise ValueError(f"generator out of range in {basis}")
            sign, key = sort_sign(basis)
            if sign == 0 or sigma.is_zero():
                continue
            if sigma.dim != self.dim:
                raise ValueError("coefficient dimension mismatch")
            target = self.order - xi_count(key, self.dim)
            sigma = _fit_order(sigma, target) if check else sigma
            if sign < 0:
                sigma = -sigma
            if key in out:
                sigma = out[key] + sigma
            if sigma.is_zero():
                out.pop(key, None)
            else:
                out[key] = sigma
        self.coeffs = out

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, dim, degree, order=0):
        return cls(dim, degree, order, {})

    @classmethod
    def from_symbol(cls, sigma):
        return cls(sigma.dim, 0, sigma.order, {(): sigma})

    @classmethod
    def top(cls, sigma):
        """sigma dx_1 ... dx_n dxi_1 ... dxi_n."""
        n = sigma.dim
        return cls(n, 2 * n, sigma.order + n, {tuple(range(2 * n)): sigma})

    @classmethod
    def monomial(cls, sigma, dx=(), dxi=()):
        n = sigma.dim
        basis = tuple(dx) + tuple(n + j for j in dxi)
        return cls(n, len(basis), sigma.order + len(tuple(dxi)), {basis: sigma})

    # -- structure -----------------------------------------------------------
    def is_zero(self):
        return not self.coeffs

    @property
    def windowed(self):
        return all(s.windowed for s in self.coeffs.values())

    def coefficient(self, dx=(), dxi=()):
        n = self.dim
        sign, key = sort_sign(tuple(dx) + tuple(n + j for j in dxi))
        sigma = self.coeffs.get(key)
        if sigma is None or sign == 0:
            return ClassicalSymbol.zero(n, self.order - len(tuple(dxi)))
        return sigma if sign > 0 else -sigma

    def top_coefficient(self):
        n = self.dim
        return self.coeffs.get(tuple(range(2 * n)), ClassicalSymbol.zero(n, self.order - n))

    def component(self, j):
        """The piece of total order m - j: coefficient degrees m - |J| - j."""
        out = {}
        for basis, sigma in self.coeffs.items():
            d = self.order - xi_count(basis, self.dim) - j
            out[basis] = sigma.component_of_degree(d)
        return SymbolForm(self.dim, self.degree, self.order - j, out)

    def map(self, fn, order=None):
        return SymbolForm(self.dim, self.degree, self.order if order is None else order,
                          {b: fn(s) for b, s in self.coeffs.items()})

    def _check_compatible(self, other):
        if not isinstance(other, SymbolForm):
            raise TypeError("expected a SymbolForm")
        if other.dim != self.dim or other.degree != self.degree:
            raise ValueError("forms differ in dimension or degree")

    def __add__(self, other):
        self._check_compatible(other)
        gap = self.order - other.order
        if gap.denominator != 1:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ValueError("orders do not differ by an integer")
        order = max(self.order, other.order)
        coeffs = dict(self.coeffs)
        for b, s in other.coeffs.items():
            coeffs[b] = coeffs[b] + s if b in coeffs else s
        return SymbolForm(self.dim, self.degree, order,
                          {b: _fit_order(s, order - xi_count(b, self.dim)) for b, s in coeffs.items()})

    def __neg__(self):
        return self.map(lambda s: -s)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self.map(lambda s: s.scale(c))

    def __eq__(self, other):
        if not isinstance(other, SymbolForm):
            return NotImplemented
        return (self.dim, self.degree) == (other.dim, other.degree) and self.coeffs == other.coeffs

    def __repr__(self):
        return (f"SymbolForm(dim={self.dim}, degree={self.degree}, "
                f"order={fstr(self.order)}, terms={len(self.coeffs)})")

    # -- calculus --------------------------------------------------------------
    def d(self):
        return exterior_derivative(self)

    def to_dict(self):
        n = self.dim
        coeffs = []
        for basis in sorted(self.coeffs):
            coeffs.append({
                "dx": [g for g in basis if g < n],
                "dxi": [g - n for g in basis if g >= n],
                "symbol": self.coeffs[basis].to_dict(),
            })
        return {"dim": n, "degree": self.degree, "order": fstr(self.order), "coeffs": coeffs}

    @classmethod
    def from_dict(cls, data):
        n = int(data["dim"])
        k = int(data["degree"])
        order = frac(data["order"])
        coeffs = {}
        for idx, entry in enumerate(data["coeffs"]):
            dx = [int(i) for i in entry.get("dx", [])]
            dxi = [int(j) for j in entry.get("dxi", [])]
            if len(dx) + len(dxi) != k:
                raise ValueError(f"coeffs[{idx}]: |dx| + |dxi| = {len(dx) + len(dxi)} but degree is {k}")
            if any(not 0 <= i < n for i in dx + dxi):
                raise ValueError(f"coeffs[{idx}]: axis index out of range 0..{n - 1}")
            sigma = ClassicalSymbol.from_dict(entry["symbol"])
            target = order - len(dxi)
            if sigma.order != target:
                raise ValueError(
                    f"coeffs[{idx}]: coefficient order {fstr(sigma.order)} but a form of order "
                    f"{fstr(order)} needs {fstr(target)} at |dxi| = {len(dxi)}")
            sign, key = sort_sign(dx + [n + j for j in dxi])
            if sign == 0:
                raise ValueError(f"coeffs[{idx}]: repeated generator")
            sigma = sigma if sign > 0 else -sigma
            coeffs[key] = coeffs[key] + sigma if key in coeffs else sigma
        return cls(n, k, order, coeffs)


def exterior_derivative(form):
    n = form.dim
    out = {}
    for basis, sigma in form.coeffs.items():
        for l in range(2 * n):
            if l in basis:
                continue
            der = sigma.partial_x(l) if l < n else sigma.partial_xi(l - n)
            if der.is_zero():
                continue
            sign = (-1) ** sum(1 for g in basis if g < l)
            key = tuple(sorted(basis + (l,)))
            if sign < 0:
                der = -der
            out[key] = out[key] + der if key in out else der
    return SymbolForm(n, form.degree + 1, form.order, out)


def wedge_star(alpha, beta, K, min_order=None, drop_compact=False):
    """Coefficientwise star product with the graded wedge of basis elements."""
    if alpha.dim != beta.dim:
        raise ValueError("dimension mismatch")
    n = alpha.dim
    out = {}
    for b1, s1 in alpha.coeffs.items():
        for b2, s2 in beta.coeffs.items():
            sign, key = sort_sign(b1 + b2)
            if sign == 0:
                continue
            # min_order bounds the total form order (coefficient degree + |J|)
            floor = None
            if min_order is not None:
                floor = min_order - xi_count(key, n)
            prod = star(s1, s2, K, min_degree=floor, drop_compact=drop_compact)
            if sign < 0:
                prod = -prod
            out[key] = out[key] + prod if key in out else prod
    return SymbolForm(n, alpha.degree + beta.degree, alpha.order + beta.order, out)


# ---------------------------------------------------------------------------
# integrals of forms


def residue_form(form, spec=DEFAULT_SPEC):
    """Wodzicki residue of the top coefficient (zero for non-top forms)."""
    if form.degree != 2 * form.dim:
        return 0j
    return wodzicki_residue(form.top_coefficient(), spec)


def residue_form_density(form, x):
    from .regint import residue_density
    if form.degree != 2 * form.dim:
        return 0j
    return residue_density(form.top_coefficient(), x)


def cutoff_integral_form(form, lam=1.0, spec=DEFAULT_SPEC):
    if form.degree != 2 * form.dim:
        return 0j
    return cutoff_integral(form.top_coefficient(), lam, spec)


def cosphere_integral(form, spec=DEFAULT_SPEC):
    """Integral over S*U of a (2n-1)-form, keeping its homogeneous order-0 part.

    The cosphere bundle is oriented as the boundary of the ball bundle.  A
    coefficient at dx ^ dxi with dxi_l omitted contributes
    ``(-1)^(n+l) int_U int_{|xi|=1} sigma_{-n+1} xi_l dS dx``.
    """
    n = form.dim
    if form.degree != 2 * n - 1:
        return 0j
    total = 0j
    for l in range(n):
        basis = tuple(g for g in range(2 * n) if g != n + l)
        sigma = form.coeffs.get(basis)
        if sigma is None:
            continue
        require_windowed(sigma)
        comp = sigma.component_of_degree(1 - n)
        weight = tuple(1 if j == l else 0 for j in range(n))
        val, _ = sphere_density(comp, weight).integrate(spec)
        total += (-1) ** (n + l) * val
    return total


def stokes_boundary(beta, lam=1.0, spec=DEFAULT_SPEC):
    """(cut-off integral of d beta, cosphere boundary term) for a (2n-1)-form."""
    n = beta.dim
    if beta.degree != 2 * n - 1:
        raise ValueError("Stokes check needs a form of degree 2n - 1")
    if not beta.windowed:
        raise SupportError("form is not compactly supported in x")
    return cutoff_integral_form(exterior_derivative(beta), lam, spec), cosphere_integral(beta, spec)


def interior_X(form):
    """Contraction with the Liouville field X = sum xi_l d/dxi_l."""
    n = form.dim
    out = {}
    for basis, sigma in form.coeffs.items():
        for p, g in enumerate(basis):
            if g < n:
                continue
            l = g - n
            xi_l = ClassicalSymbol.from_monomials(
                n, [(1, (0,) * n, tuple(1 if i == l else 0 for i in range(n)), 0)], cutoff=False)
            coef = sigma * xi_l
            if p % 2:
                coef = -coef
            key = basis[:p] + basis[p + 1:]
            out[key] = out[key] + coef if key in out else coef
    return SymbolForm(n, form.degree - 1, form.order, out)


def intrinsic_residue_check(form, spec=DEFAULT_SPEC):
    """(residue of the form, cosphere integral of i_X applied to its order-0 part)."""
    n = form.dim
    if form.degree != 2 * n:
        return 0j, 0j
    if not form.windowed:
        raise SupportError("form is not compactly supported in x")
    direct = residue_form(form, spec)
    if (form.order).denominator != 1 or form.order < 0:
        return direct, 0j
    part = form.component(int(form.order))
    return direct, cosphere_integral(interior_X(part), spec)
