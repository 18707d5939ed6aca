"""Truncated star (left) product of symbols.

    sigma * tau  ~  sum_{|alpha| <= K} (-i)^|alpha| / alpha!  d_xi^alpha sigma . d_x^alpha tau

The truncation ``K`` is always explicit.  Dropped terms have order at most
``m + m' - K - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import factorial, floor

from .coeffs import ZERO, gauss
from .symbols import ClassicalSymbol, _accumulate, degree, is_asymptotic, multiply_pointwise


@dataclass(frozen=True)
class StarTruncation:
    K: int
    certified_remainder_order: Fraction

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be non-negative")


def truncation(m, m2, K):
    return StarTruncation(K, Fraction(m) + Fraction(m2) - K - 1)


def residue_truncation_depth(m, m2, n):
    """Smallest K >= 0 with m + m' - K - 1 < -n."""
    total = Fraction(m) + Fraction(m2) + n - 1
    return max(0, floor(total) + 1)


def multi_indices(n, K):
    """Multi-indices of length n and weight <= K in graded lexicographic order."""
    out = []
    for k in range(K + 1):
        for alpha in iproduct(range(k + 1), repeat=n):
            if sum(alpha) == k:
                out.append(alpha)
    return sorted(out, key=lambda a: (sum(a), tuple(-i for i in a)))


def _minus_i_power(k):
    return [gauss(1), gauss((0, -1)), gauss(-1), gauss((0, 1))][k % 4]


def _alpha_factorial(alpha):
    out = 1
    for a in alpha:
        out *= factorial(a)
    return out


def star(sigma, tau, K, min_degree=None, drop_compact=False):
    """Left product truncated at |alpha| <= K.

    ``min_degree`` and ``drop_compact`` discard output terms that cannot
    matter downstream (used by residue chains, where only degrees >= -n of
    the asymptotic part contribute).
    """
    if sigma.dim != tau.dim:
        raise ValueError("dimension mismatch")
    if K < 0:
        raise ValueError("K must be non-negative")
    n = sigma.dim
    order = sigma.order + tau.order
    dxi = {(0,) * n: sigma}
    dx = {(0,) * n: tau}
    out = {}
    for alpha in multi_indices(n, K):
        k = sum(alpha)
        if min_degree is not None and order - k < min_degree:
            break
        if k:
            i = max(j for j in range(n) if alpha[j])
            prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
            if prev not in dxi:
                continue
            a = dxi[prev].partial_xi(i)
            b = dx[prev].partial_x(i)
            if drop_compact:
                a = a.asymptotic_part()
            if a.is_zero() or b.is_zero():
                continue
            dxi[alpha], dx[alpha] = a, b
        else:
            a, b = sigma, tau
            if drop_compact:
                a, b = a.asymptotic_part(), b.asymptotic_part()
                dxi[alpha], dx[alpha] = a, b
        coef = _minus_i_power(k) * gauss(Fraction(1, _alpha_factorial(alpha)))
        for key1, c1 in a.terms.items():
            if drop_compact and not is_asymptotic(key1):
                continue
            d1 = degree(key1)
            for key2, c2 in b.terms.items():
                if drop_compact and not is_asymptotic(key2):
                    continue
                if min_degree is not None and d1 + degree(key2) < min_degree:
                    continue
                s1, a1, b1, r1, w1 = key1
                s2, a2, b2, r2, w2 = key2
                key = (s1 + s2, tuple(i + j for i, j in zip(a1, a2)),
                       tuple(i + j for i, j in zip(b1, b2)), tuple(sorted(r1 + r2)),
                       tuple(tuple(sorted(p + q)) for p, q in zip(w1, w2)))
                _accumulate(out, key, coef * c1 * c2)
    return ClassicalSymbol(n, out, order, normalize=False, check=False)


def commutator_star(sigma, tau, K, **kw):
    return star(sigma, tau, K, **kw) - star(tau, sigma, K, **kw)


def theta(sigma, tau, K, **kw):
    """star(sigma, tau) minus the pointwise product; the alpha = 0 term cancels."""
    full = star(sigma, tau, K, **kw)
    base = multiply_pointwise(sigma, tau)
    if kw:
        base = base.prune(kw.get("min_degree"), kw.get("drop_compact", False))
    return full - base
