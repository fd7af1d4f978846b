"""Exact rate bounds: what window-based decodability costs.

A code that decodes every tagged block's left part from its right part over
an (alpha, ell)-laminar tower must pay lg|sigma| >= alpha * ell * lg|sigma_in|;
with decoding allowed to fail on blocks of total size D, the bound relaxes by
alpha * (D/n) * lg|sigma_in|.  All evaluations are exact rationals; lg of a
non-power-of-two is replaced by a certified bound in the sound direction.
"""

from fractions import Fraction

from treecodes import ghk_distance_bound, imm_rate_upper, rate_bound_deficient, rate_bound_plain
from treecodes.bounds import eq13_report, eq33_report
from treecodes.partitions import chs_scales

print("plain bound: alpha * ell * lg|sigma_in|")
print(f"  halving splits, ell = 5:      lg|sigma| >= {rate_bound_plain(Fraction(1, 2), 5, 1)}")
print(f"  eighth splits, ell = 2:       lg|sigma| >= {rate_bound_plain(Fraction(1, 8), 2, 1)}")

print("\ndeficient bound: alpha * (ell - D/n) * lg|sigma_in|")
print(f"  D = n, alpha = 1/4, ell = m:  lg|sigma| >= {eq33_report(6, 1 << 12).bound_value}")
print(f"  fully deficient (D = ell*n):  {rate_bound_deficient(Fraction(1, 4), 3, 30, 10, 1)} (vacuous)")

print("\nrate ceilings from window growth (depth 128, delta = 1/2):")
reports = imm_rate_upper("exp", Fraction(1, 2), 128)
for fid in ("eq26", "eq27", "eq25"):
    r = reports[fid]
    tag = " [vacuous at this small depth]" if r.vacuous else ""
    print(f"  {r.quantity} {r.bound_value}{tag}")

print("\ndoubly-exponential windows (depth 32, delta = 1/2):")
r = imm_rate_upper("double_exp", Fraction(1, 2), 32)["eq22"]
print(f"  {r.quantity} {r.bound_value}" + (" [vacuous]" if r.vacuous else ""))

print("\nconstant-rate family: alphabet-ratio floor at its own parameters")
n, k0, eps = 1 << 16, 16, Fraction(1, 2)
delta = eps / (32 * k0 * 16)
m = int(k0 / eps * 16)
ratio = Fraction(33, 32)  # (1 + lg n / eps) / (lg n / eps)
rep = ghk_distance_bound(n, m, delta, ratio)
print(f"  delta = {delta}, ratio = {ratio}: needs >= {rep.bound_value} "
      f"(estimate {rep.inputs['estimate']}) -> satisfied = {rep.satisfied}")
print(f"  distance-side quantity delta/lg(1/delta) = {eq13_report(delta).bound_value}")

print("\nquarter-split length scales stay evaluable far beyond materialization:")
ells = chs_scales(3, 1 << 20, 10)
print(f"  ell_1..ell_4 = {[f'2^{e.bit_length() - 1}' for e in ells[1:]]}")
