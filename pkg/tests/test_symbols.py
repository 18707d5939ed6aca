from fractions import Fraction

import numpy as np
import pytest
import sympy

from symcalc.coeffs import gauss
from symcalc.profiles import chi, psi, window, window1d
from symcalc.symbols import (
    ClassicalSymbol,
    SymbolDomainError,
    multiply_pointwise,
    translate,
)
from symcalc.generate import random_symbol


def sym(dim, monos, **kw):
    return ClassicalSymbol.from_monomials(dim, monos, **kw)


def test_profiles_are_smooth_steps():
    t = np.linspace(-1, 2, 301)
    v = psi(t)
    assert np.all((v >= 0) & (v <= 1))
    assert np.all(v[t <= 0] == 0) and np.all(v[t >= 1] == 1)
    r = np.array([0.1, 0.5, 0.75, 1.0, 3.0])
    np.testing.assert_allclose(chi(r), [0, 0, 0.5, 1, 1])
    for k in (1, 2, 3):
        assert np.all(chi(np.array([0.3, 0.5, 1.0, 1.7]), k) == 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_profile_derivatives_match_finite_differences(k):
    t = np.array([0.58, 0.66, 0.81, 0.93])
    h = 1e-4
    fd = (chi(t + h, k - 1) - chi(t - h, k - 1)) / (2 * h)
    np.testing.assert_allclose(chi(t, k), fd, rtol=1e-5, atol=1e-6)
    x = np.array([-0.7, -0.2, 0.4, 0.9])
    fd = (window1d(x + h, k - 1) - window1d(x - h, k - 1)) / (2 * h)
    np.testing.assert_allclose(window1d(x, k), fd, rtol=1e-5, atol=1e-6)


def test_homogeneous_component_examples():
    # components are the bare homogeneous pieces (no cutoff factor)
    s = sym(1, [(1, (0,), (0,), -1)])
    assert s.homogeneous_component(0) == sym(1, [(1, (0,), (0,), -1)], cutoff=False)
    s2 = sym(2, [(1, (0, 0), (2, 0), -3), (1, (0, 0), (0, 0), -2)])
    assert s2.order == -1
    assert s2.homogeneous_component(1) == sym(2, [(1, (0, 0), (0, 0), -2)], cutoff=False)
    assert s2.homogeneous_component(0) == sym(2, [(1, (0, 0), (2, 0), -3)], cutoff=False)
    with pytest.raises(IndexError):
        s2.homogeneous_component(2)


def test_missing_degree_gives_zero():
    s = sym(1, [(1, (0,), (0,), -1), (1, (0,), (0,), -3)])
    assert s.homogeneous_component(1).is_zero()


def test_partial_xi_examples():
    # d/dxi_1 |xi|^s = s xi_1 |xi|^(s-2), away from the cutoff band
    s = Fraction(-1, 3)
    sigma = sym(2, [(1, (0, 0), (0, 0), s)])
    d = sigma.partial_xi(0)
    expected = sym(2, [(s, (0, 0), (1, 0), s - 2)])
    assert d.asymptotic_part() == expected
    # d/dxi_1 (xi_1 |xi|^-2) = |xi|^-2 - 2 xi_1^2 |xi|^-4
    d = sym(2, [(1, (0, 0), (1, 0), -2)]).partial_xi(0).asymptotic_part()
    assert d == sym(2, [(1, (0, 0), (0, 0), -2), (-2, (0, 0), (2, 0), -4)])
    # d/dxi chi = 0 for |xi| >= 1; the derivative lives in the band
    one = sym(1, [(1, (0,), (0,), 0)])
    dchi = one.partial_xi(0)
    assert dchi.asymptotic_part().is_zero()
    vals = dchi.evaluate(np.zeros((3, 1)), np.array([[1.0], [2.0], [0.3]]))
    assert np.all(vals == 0)
    assert abs(dchi.evaluate([0.0], [0.75])) > 0


def test_partial_x_examples():
    s = sym(1, [(1, (1,), (0,), -1)])
    assert s.partial_x(0) == sym(1, [(1, (0,), (0,), -1)])
    assert sym(1, [(3, (0,), (2,), -1)]).partial_x(0).is_zero()
    w = sym(1, [(1, (0,), (0,), -1)], windowed=True)
    x = np.array([[-0.6], [0.1], [0.55]])
    xi = np.full_like(x, 1.7)
    h = 1e-5
    fd = (w.evaluate(x + h, xi) - w.evaluate(x - h, xi)) / (2 * h)
    np.testing.assert_allclose(w.partial_x(0).evaluate(x, xi), fd, rtol=1e-6, atol=1e-9)


def test_multiply_examples():
    s = random_symbol(2, Fraction(1, 2), 2, seed=3)
    one = ClassicalSymbol.constant(2, 1)
    assert multiply_pointwise(one, s) == s
    a = sym(1, [(1, (0,), (0,), -1)])
    prod = multiply_pointwise(a, a)
    xi = np.array([[1.0], [2.5], [-4.0]])
    np.testing.assert_allclose(prod.evaluate(np.zeros_like(xi), xi), 1 / xi[:, 0] ** 2)
    t = random_symbol(2, -1, 2, seed=4)
    assert multiply_pointwise(s, t) - multiply_pointwise(t, s) == ClassicalSymbol.zero(2)


def test_chi_squared_differs_from_chi_only_in_band():
    a = sym(1, [(1, (0,), (0,), -1)])
    diff = multiply_pointwise(a, a) - sym(1, [(1, (0,), (0,), -2)])
    r = np.array([[0.2], [0.7], [0.9], [1.0], [3.0]])
    vals = diff.evaluate(np.zeros_like(r), r)
    assert vals[0] == 0 and vals[3] == 0 and vals[4] == 0
    assert abs(vals[1]) > 0


def test_evaluate_examples():
    s = sym(1, [(1, (0,), (0,), -1)])
    assert s.evaluate([0.0], [2.0]) == pytest.approx(0.5)
    r = random_symbol(2, 1, 2, seed=5)
    assert r.evaluate([0.2, 0.1], [0.25, 0.0]) == 0
    with pytest.raises(SymbolDomainError):
        sym(1, [(1, (0,), (0,), -1)], cutoff=False).evaluate([0.0], [0.0])


def test_homogeneity_of_components():
    s = random_symbol(2, Fraction(-2, 3), 2, seed=11)
    rng = np.random.default_rng(0)
    for j in range(3):
        comp = s.homogeneous_component(j)
        xi = rng.normal(size=(5, 2))
        xi = xi / np.linalg.norm(xi, axis=1)[:, None] * 1.5
        x = rng.uniform(-0.9, 0.9, size=(5, 2))
        lhs = comp.evaluate(x, 2 * xi)
        rhs = 2.0 ** float(s.order - j) * comp.evaluate(x, xi)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-14)


def test_window_is_product_of_axis_windows():
    x = np.array([[0.3, -0.5], [0.99, 0.0]])
    np.testing.assert_allclose(window(x), window1d(x[:, 0]) * window1d(x[:, 1]))
    w = ClassicalSymbol.constant(2, 1, windowed=True)
    np.testing.assert_allclose(w.evaluate(x, np.ones_like(x)), window(x))


def test_normal_form_is_canonical():
    # xi_1^2 + xi_2^2 = |xi|^2, so xi_1^2|xi|^-2 + xi_2^2|xi|^-2 is the constant 1 (times chi)
    a = sym(2, [(1, (0, 0), (2, 0), -2), (1, (0, 0), (0, 2), -2)])
    assert a == sym(2, [(1, (0, 0), (0, 0), 0)])


def test_json_round_trip_is_exact():
    s = sym(2, [(Fraction(1, 3), (1, 0), (0, 1), Fraction(-5, 2)),
                ((1, Fraction(-2, 7)), (0, 0), (0, 0), Fraction(-5, 2))], windowed=True)
    back = ClassicalSymbol.from_dict(s.to_dict())
    assert back == s
    assert s.to_dict()["terms"][0]["xcoeff"]
    d = s.to_dict()
    assert any(v == "1/3" for t in d["terms"] for v in t["xcoeff"].values())


def test_declared_depth_is_enforced():
    d = sym(1, [(1, (0,), (0,), -1), (1, (0,), (0,), -4)]).to_dict()
    d["depth"] = 1
    with pytest.raises(ValueError):
        ClassicalSymbol.from_dict(d)


def test_translate_zero_shift_and_leading_part():
    s = random_symbol(1, Fraction(-3, 2), 2, seed=2)
    ts = translate(s, (0,), 4)
    assert ts.expansion == s.asymptotic_part() or ts.expansion == s
    ts = translate(s, (Fraction(1, 2),), 4)
    assert ts.expansion.homogeneous_component(0) == s.asymptotic_part().homogeneous_component(0)
    with pytest.raises(ValueError):
        translate(s, (1,), -1)


def test_translate_matches_binomial_series():
    # |xi + 1|^-2 expanded in 1/xi through sympy's series, compared term by term for xi > 0
    s = sym(1, [(1, (0,), (0,), -2)])
    depth = 5
    ts = translate(s, (1,), depth)
    u = sympy.symbols("u", positive=True)  # u = 1/xi
    series = sympy.series((1 + u) ** -2 * u ** 2, u, 0, depth + 3).removeO()
    oracle = {int(sympy.degree(term, u)): sympy.Rational(term.as_coeff_exponent(u)[0])
              for term in sympy.Add.make_args(sympy.expand(series))}
    got = {}
    for (sp, a, b, rp, wp), c in ts.expansion.terms.items():
        deg = sp + sum(b)  # homogeneity degree; on xi > 0, xi^b |xi|^s = xi^deg
        got[-deg] = got.get(-deg, 0) + c
    for k, v in oracle.items():
        if k - 2 <= depth:
            assert got.get(k, 0) == gauss(Fraction(int(v.p), int(v.q))), k


def test_translate_evaluates_close_to_shift():
    s = random_symbol(1, Fraction(-1, 2), 1, seed=8)
    eta = (Fraction(1, 2),)
    ts = translate(s, eta, 8)
    xi = np.array([[6.0], [-9.0], [20.0]])
    x = np.array([[0.1], [-0.3], [0.5]])
    np.testing.assert_allclose(ts.expansion.evaluate(x, xi), s.evaluate(x, xi + 0.5), rtol=1e-6)
    np.testing.assert_allclose(ts.evaluate(x, xi), s.evaluate(x, xi + 0.5), rtol=1e-12)


def test_generator_is_deterministic_and_structural():
    a = random_symbol(2, Fraction(1, 3), 2, seed=7)
    b = random_symbol(2, Fraction(1, 3), 2, seed=7)
    assert a.to_dict() == b.to_dict()
    assert a.order == Fraction(1, 3)
    assert a.windowed
    seen = np.zeros(3)
    for seed in range(1000):
        s = random_symbol(1, 0, 2, seed=seed)
        ClassicalSymbol.from_dict(s.to_dict())  # structural validation
        for j in range(3):
            seen[j] += not s.component_of_degree(s.order - j).is_zero()
    assert seen[0] == 1000
    assert np.all(seen[1:] > 500)
