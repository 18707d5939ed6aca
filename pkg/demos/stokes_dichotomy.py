"""Plain versus regularised Stokes for beta = w chi xi/|xi| dx in one dimension.

The cut-off integral of d(beta) equals the cosphere boundary term, which is
non-zero at integer order; the Riesz-regularised version has a vanishing germ.
"""
from fractions import Fraction

from symcalc.forms import SymbolForm, stokes_boundary
from symcalc.generate import random_form
from symcalc.holo import meromorphic_stokes_defect
from symcalc.symbols import ClassicalSymbol

sigma = ClassicalSymbol.from_monomials(1, [(1, (0,), (1,), -1)], windowed=True)
beta = SymbolForm.monomial(sigma, dx=[0])
defect, boundary = stokes_boundary(beta)
print("integer order 0: cutoff(d beta) =", defect, " cosphere boundary =", boundary)
germ = meromorphic_stokes_defect(beta, 3)
print("  germ of cutoff(d beta(z)) at z = 0:", germ.jet(), "principal", germ.principal())

beta = random_form(1, 1, Fraction(-1, 2), 2, seed=1)
defect, boundary = stokes_boundary(beta)
print("order -1/2: cutoff(d beta) =", defect, " boundary =", boundary)
