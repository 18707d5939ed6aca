from fractions import Fraction

import pytest
from scipy import integrate

from symcalc.forms import SymbolForm, stokes_boundary
from symcalc.generate import random_form, random_symbol
from symcalc.holo import (
    LaurentGerm,
    complex_residue_identity_defect,
    laurent_cutoff_integral,
    meromorphic_stokes_defect,
    pole_set,
    regularized_integral,
    riesz_family,
)
from symcalc.profiles import chi, window1d
from symcalc.regint import cutoff_integral, wodzicki_residue
from symcalc.symbols import ClassicalSymbol

WINDOW_MASS = integrate.quad(lambda t: float(window1d(t)), -1, 1, epsabs=1e-15)[0]


def sym(dim, monos, **kw):
    return ClassicalSymbol.from_monomials(dim, monos, **kw)


def test_simple_pole_of_inverse_modulus():
    s = sym(1, [(1, (0,), (0,), -1)], windowed=True)
    germ = laurent_cutoff_integral(riesz_family(s), 0, 3)
    assert germ.pole_order == 1
    assert germ.residue() == pytest.approx(2 * WINDOW_MASS, rel=1e-12)


def test_germ_against_direct_integral_at_real_points():
    # for z > 0 the integral converges: 2 * mass * (int_{1/2}^1 chi r^(-1-z) dr + 1/z)
    s = sym(1, [(1, (0,), (0,), -1)], windowed=True)
    germ = laurent_cutoff_integral(riesz_family(s), 0, 4)
    for z in (0.05, 0.1):
        band = integrate.quad(lambda r: float(chi(r)) * r ** (-1 - z), 0.5, 1, epsabs=1e-15)[0]
        exact = 2 * WINDOW_MASS * (band + 1 / z)
        approx = sum(germ[k] * z**k for k in range(-1, 4))
        assert approx.real == pytest.approx(exact, abs=1e-5)


def test_no_pole_for_orders_below_minus_n():
    s = sym(1, [(1, (0,), (0,), -3), (1, (1,), (1,), -4)], windowed=True)
    germ = laurent_cutoff_integral(riesz_family(s), 0, 2)
    assert germ.pole_order == 0
    assert germ.finite_part() == pytest.approx(cutoff_integral(s), abs=1e-12)


def test_pole_set_examples():
    s = sym(1, [(1, (0,), (0,), 1), (1, (0,), (0,), -1), (1, (0,), (1,), -3)], windowed=True)
    # degrees 1 and -1 have non-zero sphere moments; xi|xi|^-3 is odd
    assert pole_set(riesz_family(s)) == [Fraction(0), Fraction(2)]
    assert pole_set(riesz_family(sym(1, [(1, (0,), (1,), -2)], windowed=True))) == []


def test_pole_at_shifted_point():
    s = sym(1, [(1, (0,), (0,), 1)], windowed=True)
    germ = laurent_cutoff_integral(riesz_family(s), 2, 2)
    assert germ.residue() == pytest.approx(2 * WINDOW_MASS, rel=1e-12)
    assert laurent_cutoff_integral(riesz_family(s), 0, 2).pole_order == 0


def test_prefactor_moves_finite_part_only():
    s = sym(1, [(1, (0,), (0,), -1)], windowed=True)
    g1 = laurent_cutoff_integral(riesz_family(s), 0, 2)
    g2 = laurent_cutoff_integral(riesz_family(s, (1, 3)), 0, 2)
    assert g2.residue() == pytest.approx(g1.residue(), rel=1e-13)
    assert g2.finite_part() == pytest.approx(g1.finite_part() + 3 * g1.residue(), rel=1e-12)
    with pytest.raises(ValueError):
        riesz_family(s, (2,))


@pytest.mark.parametrize("seed", range(4))
def test_regularized_equals_cutoff_for_non_integer_order(seed):
    s = random_symbol(1 + seed % 2, Fraction(1, 3) - seed % 2, 2, seed=seed)
    reg = regularized_integral(s, (1, Fraction(5, 2)))
    assert reg == pytest.approx(cutoff_integral(s), abs=1e-10)


def test_complex_residue_identity_for_symbols():
    for seed in range(3):
        s = random_symbol(2, -2, 2, seed=seed) + sym(2, [(1, (0, 0), (0, 0), -2)], windowed=True)
        lhs, rhs, defect = complex_residue_identity_defect(s, (1, Fraction(1, 2)))
        assert abs(rhs) > 1e-3
        assert defect <= 1e-9
        assert rhs == pytest.approx(wodzicki_residue(s), rel=1e-12)


def test_complex_residue_identity_for_forms():
    omega = random_form(1, 2, 0, 2, seed=3)
    lhs, rhs, defect = complex_residue_identity_defect(omega, (1, 1))
    assert defect <= 1e-9


def test_meromorphic_stokes_examples():
    sigma = sym(1, [(1, (0,), (1,), -1)], windowed=True)
    beta = SymbolForm.monomial(sigma, dx=[0])
    germ = meromorphic_stokes_defect(beta, 3)
    assert germ.max_abs() <= 1e-8
    defect, boundary = stokes_boundary(beta)
    assert abs(defect) > 1
    assert defect - germ[0] == pytest.approx(boundary, abs=1e-8)
    for seed in range(3):
        b = random_form(2, 3, seed % 2, seed % 2 + 1, seed=seed)
        assert meromorphic_stokes_defect(b, 2).max_abs() <= 1e-8
    with pytest.raises(ValueError):
        meromorphic_stokes_defect(random_form(1, 2, 0, 1, seed=1))


def test_germ_arithmetic():
    a = LaurentGerm(0, {-1: 2, 0: 1, 1: 3}, 2)
    b = LaurentGerm(0, {0: 1, 1: -1}, 3)
    p = a * b
    # (2/z + 1 + 3z)(1 - z) = 2/z - 1 + 2z - ...: jet limited to degree < 2
    assert p[-1] == 2 and p[0] == -1
    assert p.jet_len == 2
    s = a + b
    assert s[1] == 2 and s.jet_len == 2
    assert (a - a).max_abs() == 0
    with pytest.raises(ValueError):
        a + LaurentGerm(1, {0: 1}, 2)
    assert a.to_dict()["principal"] == {"-1": [2.0, 0.0]}

