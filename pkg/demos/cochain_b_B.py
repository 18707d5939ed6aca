"""The mixed coboundary of phi_2 vanishes while b phi_2 + B phi_4 / 2 does not.

Prints both quantities on seeded symbol 4-tuples with total order 2 (n = 1).
"""
import numpy as np

from symcalc.cochains import hochschild_b, make_cochain, operator_B
from symcalc.suites import symbol_tuple

rng = np.random.default_rng(42)
K = 4
phi2, phi4 = make_cochain("phi", 3, K), make_cochain("phi", 5, K)
for t in range(5):
    args = symbol_tuple(rng, 1, 4, 2)
    bbar = hochschild_b(phi2, K, product="mixed")(*args).value
    b = hochschild_b(phi2, K)(*args).value
    B = operator_B(phi4)(*args).value
    print(f"tuple {t}: orders {[str(a.order) for a in args]}  b_bar phi2 = {abs(bbar):.2e}"
          f"  |b phi2 + B phi4 / 2| = {abs(b + 0.5 * B):.3e}")
