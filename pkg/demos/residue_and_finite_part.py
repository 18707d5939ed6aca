"""Residue, cut-off integral and rescaling for a windowed symbol in one dimension."""
from math import log

from symcalc.generate import random_symbol
from symcalc.regint import finite_part_integral, residue_density_exact, wodzicki_residue

sigma = random_symbol(1, -1, 2, seed=3)
res = wodzicki_residue(sigma)
print("order", sigma.order, "terms", len(sigma.terms))
print("exact residue density (x-polynomial times window):", residue_density_exact(sigma))
print("Wodzicki residue:", res)
base = finite_part_integral(sigma, 1.0)
print("finite part at R = 1:", base.finite_part, " log coefficient:", base.log_coefficient)
for lam in (0.5, 2.0, 10.0):
    shifted = finite_part_integral(sigma, lam).finite_part
    print(f"lambda = {lam:5}: shift {shifted - base.finite_part:+.15f}, res * log(lambda) {res * log(lam):+.15f}")
