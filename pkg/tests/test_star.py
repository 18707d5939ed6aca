from fractions import Fraction

import numpy as np
import pytest

from symcalc.generate import random_symbol
from symcalc.regint import wodzicki_residue
from symcalc.star import (
    commutator_star,
    multi_indices,
    residue_truncation_depth,
    star,
    theta,
    truncation,
)
from symcalc.symbols import ClassicalSymbol, multiply_pointwise


def xi_sym(xcoeff=False):
    return ClassicalSymbol.from_monomials(1, [(1, (1 if xcoeff else 0,), (1,), 0)])


def on_far_region(sigma, xs=(-0.4, 0.2, 0.7), xis=(1.0, 1.5, -3.0)):
    x = np.array([[v] for v in xs for _ in xis])
    xi = np.array([[v] for _ in xs for v in xis])
    return x, xi, sigma.evaluate(x, xi)


def test_unit_laws():
    s = random_symbol(2, Fraction(1, 2), 2, seed=1)
    one = ClassicalSymbol.constant(2, 1)
    for K in (0, 1, 3):
        assert star(one, s, K) == s
        assert star(s, one, K) == s


def test_two_term_example():
    # chi xi * x chi xi = x xi^2 - i xi on |xi| >= 1
    prod = star(xi_sym(), xi_sym(True), 3)
    x, xi, v = on_far_region(prod)
    np.testing.assert_allclose(v, x[:, 0] * xi[:, 0] ** 2 - 1j * xi[:, 0], atol=1e-13)


def test_zeroth_order_is_pointwise():
    a = random_symbol(2, 0, 1, seed=2)
    b = random_symbol(2, -1, 1, seed=3)
    assert star(a, b, 0) == multiply_pointwise(a, b)


def test_commutator_examples():
    s = random_symbol(1, Fraction(1, 3), 2, seed=9)
    assert commutator_star(s, s, 3).is_zero()
    assert commutator_star(ClassicalSymbol.constant(1, 1), s, 3).is_zero()
    c = commutator_star(xi_sym(), xi_sym(True), 2)
    x, xi, v = on_far_region(c)
    np.testing.assert_allclose(v, -1j * xi[:, 0], atol=1e-13)


def test_theta_examples():
    s = random_symbol(2, Fraction(2, 3), 2, seed=4)
    assert theta(ClassicalSymbol.constant(2, 1), s, 3).is_zero()
    const_in_x = ClassicalSymbol.from_monomials(2, [(3, (0, 0), (1, 0), -1), (1, (0, 0), (0, 0), -2)])
    assert theta(s, const_in_x, 3).is_zero()
    th = theta(xi_sym(), xi_sym(True), 2)
    x, xi, v = on_far_region(th)
    np.testing.assert_allclose(v, -1j * xi[:, 0], atol=1e-13)


@pytest.mark.parametrize("m,m2,n,K", [(0, 0, 1, 1), (1, 1, 2, 4), (-2, -1, 1, 0),
                                      (Fraction(1, 2), Fraction(-1, 3), 1, 1), (0, 0, 2, 2)])
def test_residue_truncation_depth(m, m2, n, K):
    assert residue_truncation_depth(m, m2, n) == K
    assert m + m2 - K - 1 < -n
    if K > 0:
        assert not m + m2 - (K - 1) - 1 < -n


def test_truncation_record():
    t = truncation(Fraction(1, 2), 0, 3)
    assert t.certified_remainder_order == Fraction(-7, 2)
    with pytest.raises(ValueError):
        truncation(0, 0, -1)


def test_multi_indices_graded_lexicographic():
    idx = multi_indices(2, 2)
    assert idx == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_star_orders_and_degrees():
    a = random_symbol(2, Fraction(1, 2), 2, seed=5)
    b = random_symbol(2, Fraction(-1, 4), 2, seed=6)
    p = star(a, b, 3)
    assert p.order == Fraction(1, 4)
    assert all(d <= p.order and (p.order - d).denominator == 1 for d in p.degrees())


def test_associativity_up_to_truncation():
    s1, s2, s3 = (random_symbol(1, m, 2, seed=10 + i) for i, m in enumerate((0, Fraction(1, 2), Fraction(-1, 2))))
    K = 3
    lhs = star(star(s1, s2, K), s3, K)
    rhs = star(s1, star(s2, s3, K), K)
    diff = (lhs - rhs).asymptotic_part()
    bound = s1.order + s2.order + s3.order - K - 1
    assert all(d <= bound for d in diff.degrees())
    # residues agree once K clears the residue threshold
    assert abs(wodzicki_residue(lhs) - wodzicki_residue(rhs)) <= 1e-12


def test_pruned_star_keeps_needed_degrees():
    a = random_symbol(2, 1, 2, seed=7)
    b = random_symbol(2, -1, 2, seed=8)
    full = star(a, b, 3)
    cut = star(a, b, 3, min_degree=-2, drop_compact=True)
    assert full.component_of_degree(-2) == cut.component_of_degree(-2)
    assert full.component_of_degree(-1) == cut.component_of_degree(-1)
