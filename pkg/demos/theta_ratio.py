"""Ratio of the residue character to the antisymmetrised theta residue.

Usage: python3 demos/theta_ratio.py [n] [trials]   (n = 2 takes about 10 s per trial)
"""
import sys

from symcalc.cochains import theta_ratio_experiment

n = int(sys.argv[1]) if len(sys.argv) > 1 else 1
trials = int(sys.argv[2]) if len(sys.argv) > 2 else 12
out = theta_ratio_experiment(n, trials, seed=42)
for row in out["rows"]:
    print(f"trial {row['trial']:2d}: numerator {row['numerator']:.6g}  denominator {row['denominator']:.6g}"
          f"  ratio {row['ratio']}")
print("constant:", out["constant"], " relative spread:", out["relative_spread"])
for name, dist in out["candidates"].items():
    print(f"  distance to {name}: {dist:.3e}")
