"""Tree codes 101: the full-prefix code, divergent distance, and exhaustive
distance certification.

A tree code is a prefix-respecting encoder: the j-th output symbol depends
only on the first j input symbols, so the encoder is an edge labeling of the
complete input tree.  Its distance is the worst relative Hamming disagreement
between two codewords after the point where their messages diverge.
"""

from fractions import Fraction

from treecodes import check_tree_distance, divergent_distance, trivial_code
from treecodes.verify import exact_distance

n = 6
code = trivial_code(n)
print(f"full-prefix code at depth {n}")
print(f"  output alphabet: 2^{n} symbols -> rate {code.rate}")

x = (1, 0, 1, 1, 0, 0)
y = (1, 0, 1, 0, 0, 0)
print(f"\nencode {x} -> {code.encode(x)}")
print(f"encode {y} -> {code.encode(y)}")
dd = divergent_distance(code, x, y)
print(f"first disagreement at position {dd.s}; "
      f"relative distance on the suffix: {dd.relative_distance}")

print("\nexhaustive certification over all same-depth vertex pairs:")
verdict = check_tree_distance(code, 1)
print(f"  distance >= 1 holds: {verdict.passed} "
      f"({verdict.evaluations} evaluations)")

over = check_tree_distance(code, Fraction(1001, 1000))
print(f"  distance >= 1.001 fails, witness: {over.witness}")

print(f"\nexact minimum distance: {exact_distance(code)}")
print("every divergent suffix disagrees everywhere: the price is a rate of "
      f"{code.rate}, one fresh prefix copy per step.")
