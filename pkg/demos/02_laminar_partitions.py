"""Laminar partitions: the set systems behind window-based decodability.

A tower P_0..P_ell of partitions of [n] is laminar when each tagged block's
left part lf(B) and right part rg(B) are exact unions of previous-level
blocks, and |lf(B)| >= alpha |B|.  Window-length functions induce such towers:
level j uses consecutive blocks of twice the j-th window length.
"""

from fractions import Fraction

from treecodes import (
    ImmediacySpec,
    LaminarPartition,
    TaggedBlock,
    build_from_imm,
    chs_partition,
    eks_partition,
    ghk_partition,
    validate_laminar,
)

spec = ImmediacySpec.exponential(Fraction(1, 2))
print(f"doubling windows at delta = {spec.delta}: kappa = {spec.kappa}, step t = {spec.t}")
p = build_from_imm(spec, ell=2)
print(f"induced tower: n = {p.n}, alpha = {p.alpha}")
for i in range(p.ell + 1):
    blocks = p.level_blocks(i)
    lf = "" if i == 0 else f", |lf| = {len(p.tagged[i - 1][0].lf)}"
    print(f"  P_{i}: {len(blocks)} consecutive blocks of length {len(blocks[0])}{lf}")
print(f"validates: {validate_laminar(p).passed}")

print("\ndyadic tower (halving splits):")
q = eks_partition(3)
print(f"  n = {q.n}, alpha = {q.alpha}, "
      f"P_2 = {[tb.block for tb in q.tagged[1]]}")

print("\nquarter-split tower with a deficiency ledger:")
c, ledger = chs_partition(m=1, l1=4, growth_shift=0)
print(f"  n = {c.n}; tagged blocks: {[(tb.lf, tb.rg) for tb in c.tagged[0]]}")
print(f"  exempt blocks: {ledger.sets}, budget used: {ledger.budget_used} <= n")

print("\nsingleton-based tower with kappa-fold jumps:")
g = ghk_partition(1024, 8, Fraction(1, 2))
print(f"  ell = {g.ell}, level block lengths: "
      f"{[g.tagged[i][0].size for i in range(g.ell)]}")

print("\nthe validator rejects towers whose parts straddle previous blocks:")
bad = LaminarPartition(
    n=4,
    alpha=Fraction(1, 4),
    p0=((1, 2), (3, 4)),
    tagged=((TaggedBlock(lf=(1, 2, 3), rg=(4,)),),),
)
report = validate_laminar(bad)
print(f"  laminar_ok = {report.laminar_ok}, "
      f"first violation at (level, block) = {report.first_laminar_violation}")
