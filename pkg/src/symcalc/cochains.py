"""Multilinear cochains on symbols and the cyclic operators acting on them.

A cochain is a callable on a tuple of symbols returning a ``CochainEval``
(value plus error budget).  Flavours:

* ``res``: res(s_0 * ds_1 ^* ... ^* ds_k)
* ``cosphere``: integral over S*U of the same chain (a (2n-1)-form)
* ``cutoff``: cut-off integral of the same chain (a 2n-form)
* ``phi``: res(s_0 * theta(s_1, s_2) * ... * theta(s_{2k-1}, s_{2k}))

Operators: ``B0``, the cyclic antisymmetriser ``A``, ``B = A B0``, the
Hochschild coboundary ``b`` for the star product and its mixed variant
``b_bar`` (star at both ends, pointwise product in the middle).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .forms import SymbolForm, cosphere_integral, exterior_derivative, wedge_star
from .quadrature import DEFAULT_SPEC
from .regint import cutoff_integral, finite_part_integral, residue_density_exact
from .star import residue_truncation_depth, star, theta
from .symbols import ClassicalSymbol, multiply_pointwise

# relative allowance for rounding in the x-quadrature of exact densities
_REL = 1e-12


@dataclass(frozen=True)
class CochainEval:
    arity: int
    arguments: tuple
    flavor: str
    K: int
    value: complex
    error_budget: float

    def to_dict(self):
        return {
            "arity": self.arity,
            "flavor": self.flavor,
            "K": self.K,
            "value": [self.value.real, self.value.imag],
            "error_budget": self.error_budget,
        }


def _unit(n):
    return ClassicalSymbol.constant(n, 1)


def _residue_with_budget(sigma, spec):
    val, scale = residue_density_exact(sigma).integrate(spec)
    return complex(val), _REL * (1.0 + scale)


def chain_form(sigmas, K, min_order=None):
    """s_0 * ds_1 ^* ... ^* ds_k, left-associated, each star truncated at K.

    ``min_order`` keeps only form orders that can reach ``min_order`` once the
    remaining factors are multiplied in (used for residues, where only the
    order-0 part matters and compact terms never contribute).
    """
    n = sigmas[0].dim
    orders = [s.order for s in sigmas]
    acc = SymbolForm.from_symbol(sigmas[0])
    drop = min_order is not None
    if drop:
        acc = acc.map(lambda s: s.asymptotic_part())
    for i in range(1, len(sigmas)):
        dsi = exterior_derivative(SymbolForm.from_symbol(sigmas[i]))
        floor = None
        if drop:
            floor = min_order - sum(orders[i + 1:])
        acc = wedge_star(acc, dsi, K, min_order=floor, drop_compact=drop)
    return acc


def _total_order(sigmas):
    return sum((s.order for s in sigmas), Fraction(0))


def default_K(sigmas):
    """Truncation that leaves only terms of negative total form order behind."""
    n = sigmas[0].dim
    return residue_truncation_depth(_total_order(sigmas) - n, 0, n)


def residue_cochain(sigmas, K=None, spec=DEFAULT_SPEC):
    sigmas = tuple(sigmas)
    n = sigmas[0].dim
    k = len(sigmas) - 1
    K = default_K(sigmas) if K is None else K
    if k < 2 * n:
        return CochainEval(k + 1, sigmas, "res", K, 0j, 0.0)
    form = chain_form(sigmas, K, min_order=0)
    val, budget = _residue_with_budget(form.top_coefficient(), spec)
    return CochainEval(k + 1, sigmas, "res", K, val, budget)


def cosphere_cochain(sigmas, K=None, spec=DEFAULT_SPEC):
    sigmas = tuple(sigmas)
    n = sigmas[0].dim
    k = len(sigmas) - 1
    K = default_K(sigmas) if K is None else K
    if k != 2 * n - 1:
        return CochainEval(k + 1, sigmas, "cosphere", K, 0j, 0.0)
    form = chain_form(sigmas, K)
    val = complex(cosphere_integral(form, spec))
    return CochainEval(k + 1, sigmas, "cosphere", K, val, _REL * (1.0 + abs(val)))


def cutoff_cochain(sigmas, K=None, spec=DEFAULT_SPEC):
    sigmas = tuple(sigmas)
    n = sigmas[0].dim
    k = len(sigmas) - 1
    K = default_K(sigmas) if K is None else K
    if k != 2 * n:
        return CochainEval(k + 1, sigmas, "cutoff", K, 0j, 0.0)
    form = chain_form(sigmas, K)
    top = form.top_coefficient()
    if top.is_zero():
        return CochainEval(k + 1, sigmas, "cutoff", K, 0j, 0.0)
    res = finite_part_integral(top, spec=spec)
    return CochainEval(k + 1, sigmas, "cutoff", K, complex(res.finite_part), res.error + 1e-12)


def theta_chain(sigmas, K, min_degree=None):
    """s_0 * theta(s_1, s_2) * ... with star products truncated at K."""
    n = sigmas[0].dim
    orders = [s.order for s in sigmas]
    acc = sigmas[0]
    kw = {}
    if min_degree is not None:
        kw = {"drop_compact": True}
        acc = acc.asymptotic_part()
    for i in range(1, len(sigmas), 2):
        rest = sum(orders[i + 2:], Fraction(0))
        floor = None if min_degree is None else min_degree - rest
        pair_floor = None if floor is None else floor - acc.order
        th = theta(sigmas[i], sigmas[i + 1], K, min_degree=pair_floor, **kw)
        acc = star(acc, th, K, min_degree=floor, **kw)
    return acc


def phi_cochain(sigmas, K=None, spec=DEFAULT_SPEC):
    sigmas = tuple(sigmas)
    n = sigmas[0].dim
    if len(sigmas) % 2 != 1:
        raise ValueError("phi cochains take an odd number of arguments")
    K = residue_truncation_depth(_total_order(sigmas), 0, n) if K is None else K
    chain = theta_chain(sigmas, K, min_degree=-n)
    val, budget = _residue_with_budget(chain, spec)
    return CochainEval(len(sigmas), sigmas, "phi", K, val, budget)


# ---------------------------------------------------------------------------
# cochain objects and operators


class Cochain:
    """A multilinear functional with fixed arity, evaluated on symbol tuples."""

    def __init__(self, fn, arity, name):
        self.fn = fn
        self.arity = arity
        self.name = name

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        return self.fn(tuple(args))

    def __repr__(self):
        return f"Cochain({self.name}, arity={self.arity})"


def _combine(terms, args, name, K):
    """Linear combination of CochainEvals with signed weights."""
    val = 0j
    budget = 0.0
    for w, ev in terms:
        val += w * ev.value
        budget += abs(w) * ev.error_budget
    return CochainEval(len(args), tuple(args), name, K, val, budget)


FLAVORS = {
    "res": residue_cochain,
    "cosphere": cosphere_cochain,
    "cutoff": cutoff_cochain,
    "phi": phi_cochain,
}


def make_cochain(flavor, arity, K=None, spec=DEFAULT_SPEC):
    fn = FLAVORS[flavor]
    return Cochain(lambda args: fn(args, K, spec), arity, f"{flavor}{arity - 1}")


def operator_B0(chi, unit=None):
    """B0 chi(a_0..a_{N-1}) = chi(1, a_0, ...) - (-1)^N chi(a_0, ..., 1)."""
    N = chi.arity - 1
    if N < 1:
        raise ValueError("B0 needs a cochain of arity >= 2")

    def fn(args):
        one = unit if unit is not None else _unit(args[0].dim)
        first = chi(one, *args)
        last = chi(*args, one)
        return _combine([(1, first), (-((-1) ** N), last)], args, f"B0({chi.name})", first.K)

    return Cochain(fn, N, f"B0({chi.name})")


def operator_A(chi):
    """Cyclic antisymmetrisation: sum_i sign(lambda^i) chi(lambda^i args).

    lambda(a_0, ..., a_{N-1}) = (a_{N-1}, a_0, ..., a_{N-2}) has sign (-1)^(N-1).
    """
    N = chi.arity

    def fn(args):
        terms = []
        for i in range(N):
            rotated = args[i:] + args[:i]
            terms.append(((-1) ** ((N - 1) * i), chi(*rotated)))
        return _combine(terms, args, f"A({chi.name})", terms[0][1].K)

    return Cochain(fn, N, f"A({chi.name})")


def operator_B(chi, unit=None):
    return operator_A(operator_B0(chi, unit))


def hochschild_b(chi, K, product="star"):
    """Hochschild coboundary for the star product, or the mixed variant b_bar.

    b chi(a_0..a_{N+1}) = sum_j (-1)^j chi(.., a_j a_{j+1}, ..) + (-1)^(N+1) chi(a_{N+1} a_0, ..)
    ``product="mixed"`` uses the star product in the first and the wrap-around
    slot and the pointwise product in between.
    """
    N = chi.arity - 1
    if product not in ("star", "mixed"):
        raise ValueError("product must be 'star' or 'mixed'")

    def fn(args):
        terms = []
        for j in range(N + 1):
            if product == "star" or j == 0:
                merged = star(args[j], args[j + 1], K)
            else:
                merged = multiply_pointwise(args[j], args[j + 1])
            new = args[:j] + (merged,) + args[j + 2:]
            terms.append(((-1) ** j, chi(*new)))
        wrap = star(args[N + 1], args[0], K)
        terms.append(((-1) ** (N + 1), chi(wrap, *args[1:N + 1])))
        return _combine(terms, args, f"b({chi.name})", K)

    return Cochain(fn, N + 2, f"b_{product}({chi.name})")


def antisymmetrise_tail(fn, args):
    """sum over permutations p of args[1:] of sign(p) fn(args[0], p(args[1:]))."""
    head, tail = args[0], args[1:]
    total = []
    for perm in permutations(range(len(tail))):
        sign = _perm_sign(perm)
        total.append((sign, fn((head,) + tuple(tail[i] for i in perm))))
    return total


def _perm_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def pointwise_theta_residue(sigmas, K, spec=DEFAULT_SPEC, cache=None):
    """res(s_0 theta(s_1, s_2) ... theta(s_{2n-1}, s_{2n})) with pointwise outer products.

    ``cache`` (a dict) reuses theta factors across calls on permuted tuples.
    """
    n = sigmas[0].dim
    cache = {} if cache is None else cache
    factors = [sigmas[0].asymptotic_part()]
    for i in range(1, len(sigmas), 2):
        pair = (id(sigmas[i]), id(sigmas[i + 1]))
        if pair not in cache:
            cache[pair] = theta(sigmas[i], sigmas[i + 1], K, drop_compact=True)
        factors.append(cache[pair])
    orders = [f.order for f in factors]
    acc = factors[0]
    for i in range(1, len(factors)):
        rest = sum(orders[i + 1:], Fraction(0))
        # degrees below -n - rest cannot reach degree -n
        f = factors[i].prune(-n - rest - acc.order, drop_compact=True)
        acc = multiply_pointwise(acc, f, min_degree=-n - rest, drop_compact=True)
    return _residue_with_budget(acc, spec)


# ---------------------------------------------------------------------------
# identity drivers (each returns a list of (name, residual, budget))


def theta_ratio(sigmas, K=None, spec=DEFAULT_SPEC):
    """(chi^res_2n, antisymmetrised theta residue) for one tuple."""
    n = sigmas[0].dim
    K = default_K(sigmas) if K is None else K
    num = residue_cochain(sigmas, K, spec)
    # theta factors need derivative orders up to total order + n in all
    Kt = residue_truncation_depth(_total_order(sigmas), 0, n)
    cache = {}
    parts = antisymmetrise_tail(lambda a: pointwise_theta_residue(a, Kt, spec, cache), tuple(sigmas))
    den = sum(s * v for s, (v, _) in parts)
    den_budget = sum(b for _, (_, b) in parts)
    return num, den, den_budget


CANDIDATE_CONSTANTS = {
    "(-i)^n/n!": lambda n: (-1j) ** n / _fact(n),
    "(-1)^n/n!": lambda n: (-1) ** n / _fact(n),
    "i^n n!": lambda n: (1j) ** n * _fact(n),
}


def _fact(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


_THETA_ORDERS = {1: (0, Fraction(1, 2), Fraction(-1, 2)),
                 2: (0, 1, -1, Fraction(1, 2), Fraction(-1, 2))}


def theta_ratio_experiment(n, trials, seed, spec=DEFAULT_SPEC):
    """Ratios chi^res_2n / A[res(s_0 theta ... theta)] over seeded tuples.

    All orders 0 makes both sides vanish identically (the xi-differentials
    of degree-0 functions wedge to zero on the (n-1)-sphere), so the tuples
    mix orders: (0, 1/2, -1/2) for n = 1 and (0, 1, -1, 1/2, -1/2) for n = 2.
    """
    from .generate import random_symbol
    if n not in (1, 2):
        raise ValueError("theta-ratio experiment supports n = 1, 2")
    rng = np.random.default_rng(seed)
    rows = []
    for t in range(trials):
        sigmas = tuple(random_symbol(n, m, 1, max_poly_degree=2, seed=rng,
                                     terms_per_degree=2) for m in _THETA_ORDERS[n])
        num, den, den_budget = theta_ratio(sigmas, spec=spec)
        admissible = abs(den) > 1e3 * max(den_budget, 1e-300)
        ratio = num.value / den if admissible else None
        rows.append({"trial": t, "numerator": num.value, "denominator": den,
                     "admissible": admissible, "ratio": ratio})
    ratios = [r["ratio"] for r in rows if r["admissible"]]
    if ratios:
        mean = sum(ratios) / len(ratios)
        spread = max(abs(r - mean) for r in ratios) / max(abs(mean), 1e-300)
    else:
        mean, spread = None, None
    comparison = {}
    if mean is not None:
        for name, f in CANDIDATE_CONSTANTS.items():
            comparison[name] = abs(mean - f(n))
    return {"n": n, "trials": trials, "seed": seed, "rows": rows,
            "constant": mean, "relative_spread": spread, "candidates": comparison}
