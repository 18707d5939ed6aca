from fractions import Fraction
from math import log, pi

import numpy as np
import pytest
from scipy import integrate

from symcalc.generate import random_symbol
from symcalc.profiles import chi, window, window1d
from symcalc.regint import (
    cutoff_integral,
    finite_part_density,
    finite_part_integral,
    ibp_defect,
    residue_density,
    residue_density_exact,
    sphere_flux,
    translation_defect,
    wodzicki_residue,
)
from symcalc.star import star
from symcalc.symbols import ClassicalSymbol, SupportError, multiply_pointwise


def sym(dim, monos, **kw):
    return ClassicalSymbol.from_monomials(dim, monos, **kw)


WINDOW_MASS = integrate.quad(lambda t: float(window1d(t)), -1, 1, epsabs=1e-15)[0]


def test_residue_density_examples():
    assert residue_density(sym(1, [(1, (0,), (0,), -1)]), [0.2]) == pytest.approx(2.0)
    low = sym(1, [(1, (0,), (0,), -2), (1, (0,), (1,), -5)])
    assert residue_density(low, [0.0]) == 0
    q = sym(2, [(1, (0, 0), (2, 0), -4)])
    assert residue_density(q, [0.1, 0.4]) == pytest.approx(pi, rel=1e-15)


def test_wodzicki_residue_examples():
    s = sym(1, [(1, (0,), (0,), -1)], windowed=True)
    assert wodzicki_residue(s) == pytest.approx(2 * WINDOW_MASS, rel=1e-12)
    assert wodzicki_residue(sym(1, [(1, (0,), (0,), -3)], windowed=True)) == 0
    with pytest.raises(SupportError):
        wodzicki_residue(sym(1, [(1, (0,), (0,), -1)]))


@pytest.mark.parametrize("seed", range(5))
def test_residue_of_derivatives_vanishes(seed):
    s = random_symbol(2, -1, 2, seed=seed)
    t = random_symbol(2, 0, 2, seed=seed + 100)
    for i in range(2):
        assert abs(wodzicki_residue(s.partial_xi(i))) <= 1e-12
        prod = multiply_pointwise(s, t)
        assert abs(wodzicki_residue(prod.partial_xi(i))) <= 1e-12
        assert abs(wodzicki_residue(prod.partial_x(i))) <= 1e-12


def test_convergent_finite_part_is_ordinary_integral():
    s = sym(1, [(1, (0,), (0,), -2)])
    fp = finite_part_density(s, [0.0])
    ref = 2 * integrate.quad(lambda r: float(chi(r)) / r**2, 0.5, 1, epsabs=1e-15)[0] + 2.0
    assert fp.finite_part == pytest.approx(ref, abs=1e-9)
    assert fp.per_degree_boundary[0] == pytest.approx(2.0)
    assert fp.log_coefficient == 0


def test_log_coefficient_is_residue_density():
    s = sym(1, [(1, (0,), (0,), -1)])
    fp = finite_part_density(s, [0.0])
    assert fp.log_coefficient == pytest.approx(2.0)
    assert fp.exact_log == residue_density_exact(s)
    rng = np.random.default_rng(3)
    for seed in range(4):
        sigma = random_symbol(2, 0, 2, seed=seed)
        exact = residue_density_exact(sigma)
        for x in rng.uniform(-1, 1, size=(5, 2)):
            fp = finite_part_density(sigma, x)
            assert fp.exact_log == exact
            assert fp.log_coefficient == pytest.approx(residue_density(sigma, x), abs=1e-13)


def test_divergent_log_case_against_truncated_integrals():
    # int_{|xi| <= R} chi |xi|^-1 = 2 log R + c: check c by quadrature at two radii
    s = sym(1, [(1, (0,), (0,), -1)])
    fp = finite_part_density(s, [0.0])
    for R in (5.0, 40.0):
        val = 2 * (integrate.quad(lambda r: float(chi(r)) / r, 0.5, 1, epsabs=1e-15)[0] + log(R))
        assert val - 2 * log(R) == pytest.approx(fp.finite_part, abs=1e-12)


def test_divergent_power_case_against_truncated_integrals():
    # order 1/2 in n = 1: int_{|xi|<=R} chi |xi|^(1/2) = c + 2 R^(3/2)/(3/2)
    s = sym(1, [(1, (0,), (0,), Fraction(1, 2))])
    fp = finite_part_density(s, [0.0])
    R = 7.0
    val = 2 * integrate.quad(lambda r: float(chi(r)) * np.sqrt(r), 0.5, R, epsabs=1e-14, limit=200,
                            points=[1.0])[0]
    assert val - 2 * R**1.5 / 1.5 == pytest.approx(fp.finite_part, abs=1e-10)


def test_rescaling():
    s = sym(1, [(1, (0,), (0,), -1), (2, (1,), (1,), -3)], windowed=True)
    base = finite_part_integral(s, 1.0).finite_part
    res = wodzicki_residue(s)
    for lam in (0.5, 2.0):
        shift = finite_part_integral(s, lam).finite_part - base
        assert shift == pytest.approx(res * log(lam), abs=1e-12)
    t = random_symbol(1, Fraction(-1, 3), 2, seed=1)
    for lam in (0.5, 2.0):
        assert finite_part_integral(t, lam).finite_part == pytest.approx(
            finite_part_integral(t, 1.0).finite_part, abs=1e-12)


def _tensor_gauss(f, x_edges, u_edges, nodes=30):
    g, w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for xa, xb in zip(x_edges[:-1], x_edges[1:]):
        x = 0.5 * (xb - xa) * g + 0.5 * (xa + xb)
        wx = 0.5 * (xb - xa) * w
        for ua, ub in zip(u_edges[:-1], u_edges[1:]):
            u = 0.5 * (ub - ua) * g + 0.5 * (ua + ub)
            wu = 0.5 * (ub - ua) * w
            X, U = np.meshgrid(x, u, indexing="ij")
            total += np.sum(np.outer(wx, wu) * f(X, U))
    return total


def test_cutoff_integral_matches_direct_double_integral():
    # order -2 < -n: the cut-off integral is the ordinary integral over (x, xi)
    s = sym(1, [(1, (0,), (0,), -2), (Fraction(1, 2), (1,), (1,), -4), (1, (2,), (0,), -3)],
            windowed=True)

    def ev(X, XI):
        pts = np.stack([X.ravel(), XI.ravel()], axis=-1)
        return np.real(s.evaluate(pts[:, :1], pts[:, 1:])).reshape(X.shape)

    x_edges = np.linspace(-1, 1, 9)
    band = _tensor_gauss(lambda X, XI: ev(X, XI) + ev(X, -XI), x_edges, np.linspace(0.5, 1, 9))
    # |xi| >= 1 through xi = 1/u
    tail = _tensor_gauss(lambda X, U: (ev(X, 1 / U) + ev(X, -1 / U)) / U**2, x_edges,
                         np.linspace(0, 1, 5))
    assert cutoff_integral(s) == pytest.approx(band + tail, abs=1e-8)


def test_cutoff_integral_linear():
    a = random_symbol(2, Fraction(1, 2), 2, seed=2)
    b = random_symbol(2, Fraction(-1, 2), 2, seed=3)
    lhs = cutoff_integral(a.scale(3) - b.scale(Fraction(1, 2)))
    rhs = 3 * cutoff_integral(a) - 0.5 * cutoff_integral(b)
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_log_channel_of_windowed_symbol():
    s = sym(1, [(1, (0,), (0,), -1)], windowed=True)
    assert finite_part_integral(s).log_coefficient == pytest.approx(wodzicki_residue(s), rel=1e-13)


def test_ibp_examples():
    s = random_symbol(1, Fraction(-1, 2), 2, seed=4)
    value, flux = ibp_defect(s, 0)
    assert abs(value) <= 1e-9 and abs(flux) <= 1e-9
    assert sphere_flux(sym(1, [(1, (0,), (0,), -3)], windowed=True), 0) == 0
    one = ClassicalSymbol.from_monomials(1, [(1, (0,), (0,), 0)], windowed=True)
    value, flux = ibp_defect(one, 0)
    # S^0 evaluation: sigma_0(+1) * (+1) + sigma_0(-1) * (-1) = 0 for an even symbol
    assert value == pytest.approx(flux, abs=1e-9)
    odd = ClassicalSymbol.from_monomials(1, [(1, (0,), (1,), -1)], windowed=True)
    value, flux = ibp_defect(odd, 0)
    assert flux == pytest.approx(2 * WINDOW_MASS, rel=1e-12)
    assert value == pytest.approx(flux, abs=1e-9)


@pytest.mark.parametrize("seed", range(3))
def test_ibp_two_dimensions(seed):
    s = random_symbol(2, -1, 2, seed=seed)
    for i in range(2):
        value, flux = ibp_defect(s, i)
        assert value == pytest.approx(flux, abs=1e-9)


def test_translation_examples():
    s = sym(1, [(1, (0,), (0,), Fraction(-3, 2)), (1, (1,), (1,), Fraction(-7, 2))], windowed=True)
    assert translation_defect(s, (0,), 6) == 0
    assert abs(translation_defect(s, (Fraction(1, 2),), 6)) <= 1e-7
    conv = sym(1, [(1, (0,), (0,), -3), (1, (0,), (1,), -3)], windowed=True)
    assert abs(translation_defect(conv, (Fraction(1, 2),), 6)) <= 1e-7


def test_translation_defect_for_integer_order():
    # sigma = w chi xi/|xi| (order 0, n = 1): Taylor expansion and the IBP
    # boundary term give defect = eta * (sigma_0(1) - sigma_0(-1)) * mass
    s = sym(1, [(1, (0,), (1,), -1)], windowed=True)
    d = translation_defect(s, (Fraction(1, 2),), 6)
    assert d == pytest.approx(WINDOW_MASS, abs=1e-7)


def test_trace_of_star_commutator():
    a = random_symbol(1, Fraction(1, 3), 2, seed=6)
    b = random_symbol(1, Fraction(-1, 3), 2, seed=7)
    K = 1
    ab = wodzicki_residue(star(a, b, K))
    ba = wodzicki_residue(star(b, a, K))
    assert abs(ab) > 1e-3
    assert ab == pytest.approx(ba, abs=1e-12)
