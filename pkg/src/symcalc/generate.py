"""Seeded random symbols and forms for identity suites."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .coeffs import frac, gauss
from .forms import SymbolForm
from .symbols import ClassicalSymbol

_DENOMS = (1, 2, 3, 4)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _small_rational(rng):
    p = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
    return Fraction(p, int(rng.choice(_DENOMS)))


def _monomials(n, max_degree):
    return [e for e in product(range(max_degree + 1), repeat=n) if sum(e) <= max_degree]


def random_symbol(dim, order=0, depth=1, max_poly_degree=2, seed=0, terms_per_degree=2,
                  max_x_degree=2, x_terms=2, windowed=True, complex_coeffs=False):
    """A windowed classical symbol with components of degree order, ..., order - depth.

    The leading component has an even and an odd angular part; lower
    components are present with probability 3/4 each.  Coefficients are small
    rationals times x-polynomials of degree <= max_x_degree.
    """
    if dim < 1 or depth < 0 or max_poly_degree < 0 or terms_per_degree < 1:
        raise ValueError("bounds must be positive")
    rng = _rng(seed)
    order = frac(order)
    xi_monos = _monomials(dim, max_poly_degree)
    x_monos = _monomials(dim, max_x_degree)
    monomials = []
    for j in range(depth + 1):
        if j and rng.random() < 0.25:
            continue
        d = order - j
        angular = [xi_monos[int(rng.integers(len(xi_monos)))]
                   for _ in range(int(rng.integers(1, terms_per_degree + 1)))]
        if j == 0:
            # an even and an odd angular part keep leading parts generic
            angular = [(0,) * dim, (1,) + (0,) * (dim - 1)] + angular[1:]
        for b in angular:
            # an x-polynomial with up to x_terms monomials
            for _ in range(int(rng.integers(1, x_terms + 1))):
                a = x_monos[int(rng.integers(len(x_monos)))]
                c = _small_rational(rng)
                if complex_coeffs and rng.random() < 0.5:
                    c = (c, _small_rational(rng))
                monomials.append((c, a, b, d - sum(b)))
    sigma = ClassicalSymbol.from_monomials(dim, monomials, cutoff=True, windowed=windowed, order=order)
    if sigma.leading().is_zero():
        # the leading component cancelled in normal form; add a radial term
        extra = ClassicalSymbol.from_monomials(dim, [(1, (0,) * dim, (0,) * dim, order)],
                                               cutoff=True, windowed=windowed)
        sigma = sigma + extra
    return sigma


def random_form(dim, degree, order=0, depth=1, seed=0, density=0.75, **kw):
    """A windowed form; each basis element carries a coefficient with probability ``density``."""
    rng = _rng(seed)
    order = frac(order)
    coeffs = {}
    bases = list(combinations(range(2 * dim), degree))
    for basis in bases:
        if rng.random() < density or (basis is bases[-1] and not coeffs):
            J = sum(1 for g in basis if g >= dim)
            coeffs[basis] = random_symbol(dim, order - J, depth, seed=rng, **kw)
    return SymbolForm(dim, degree, order, coeffs)


def random_order(rng, integer, low=-2, high=1):
    """A rational order in [low, high]; integer or with denominator 2, 3 or 4."""
    rng = _rng(rng)
    base = int(rng.integers(low, high + 1))
    if integer:
        return Fraction(base)
    den = int(rng.choice((2, 3, 4)))
    num = int(rng.integers(1, den))
    return Fraction(base) - Fraction(num, den)
