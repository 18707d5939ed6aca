"""Exact scalars: orders are Fractions, coefficients are Gaussian rationals."""
from __future__ import annotations

from fractions import Fraction

from sympy import QQ, QQ_I

ZERO = QQ_I(0, 0)
ONE = QQ_I(1, 0)
I_UNIT = QQ_I(0, 1)


def frac(value):
    """Parse an exact rational from int, Fraction or a 'p/q' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a 'p/q' string")
    # gmpy / sympy rationals
    return Fraction(int(value.numerator), int(value.denominator))


def _qq(value):
    f = frac(value)
    return QQ(f.numerator, f.denominator)


def gauss(value):
    """Convert to a Gaussian rational.

    Accepts ints, Fractions, 'p/q' strings, Gaussian rationals, a pair
    ``(re, im)`` of any of those, or a Python complex with integral parts.
    """
    if type(value) is type(ONE):
        return value
    if isinstance(value, (tuple, list)):
        re, im = value
        return QQ_I(_qq(re), _qq(im))
    if isinstance(value, complex):
        if value.real != int(value.real) or value.imag != int(value.imag):
            raise TypeError("complex floats are not exact")
        return QQ_I(int(value.real), int(value.imag))
    return QQ_I(_qq(value), 0)


def real_part(c):
    return Fraction(int(c.x.numerator), int(c.x.denominator))


def imag_part(c):
    return Fraction(int(c.y.numerator), int(c.y.denominator))


def to_complex(c):
    return complex(float(real_part(c)), float(imag_part(c)))


def fstr(f):
    f = frac(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def dump_coeff(c):
    """JSON form: a 'p/q' string when real, else a [re, im] pair of strings."""
    re, im = real_part(c), imag_part(c)
    if im == 0:
        return fstr(re)
    return [fstr(re), fstr(im)]


def load_coeff(obj):
    if isinstance(obj, (list, tuple)):
        return gauss((frac(obj[0]), frac(obj[1])))
    if isinstance(obj, (int, str)):
        return gauss(obj)
    raise TypeError(f"cannot read coefficient {obj!r}")


def rational_binom(a, k):
    """Generalised binomial coefficient C(a, k) for rational a."""
    out = Fraction(1)
    for j in range(k):
        out = out * (a - j) / (j + 1)
    return out
