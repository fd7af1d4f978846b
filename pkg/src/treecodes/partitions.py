"""Tagged and laminar partitions of [n], deficiency ledgers, and the four
explicit partition families (immediacy-function, CHS-scaled, EKS dyadic, GHK).

Indices are 1-based throughout, matching the file formats.  Block containers
are deliberately permissive (general index sets, no invariants enforced at
construction) so that ``validate_laminar`` can classify adversarial inputs;
every builder in this module validates its own output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Sequence, Tuple

from .dyadic import as_fraction, floor_lg

Block = Tuple[int, ...]


@dataclass(frozen=True)
class TaggedBlock:
    """A block split into a non-empty left part lf and right part rg."""

    lf: Block
    rg: Block

    @property
    def block(self) -> Block:
        return tuple(sorted(self.lf + self.rg))

    @property
    def size(self) -> int:
        return len(self.lf) + len(self.rg)


@dataclass(frozen=True)
class LaminarPartition:
    """Levels P_0..P_ell: P_0 a plain partition of [n], P_1..P_ell tagged.

    alpha and the size/laminar properties are claims, checked by
    ``validate_laminar`` rather than enforced here.
    """

    n: int
    alpha: Fraction
    p0: Tuple[Block, ...]
    tagged: Tuple[Tuple[TaggedBlock, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.tagged)

    def level_blocks(self, i: int) -> List[Block]:
        """Plain index sets of level i (0 = P_0)."""
        if i == 0:
            return list(self.p0)
        return [tb.block for tb in self.tagged[i - 1]]


@dataclass(frozen=True)
class DeficiencyLedger:
    """Per tagged level, the indices (0-based, left-to-right) of blocks exempt
    from neighborhood decoding; budget_used is the total size of those blocks."""

    sets: Tuple[Tuple[int, Tuple[int, ...]], ...]  # (level, block indices) pairs
    budget_used: int

    def blocks_at(self, level: int) -> Tuple[int, ...]:
        for lv, idxs in self.sets:
            if lv == level:
                return idxs
        return ()

    @staticmethod
    def for_partition(
        p: LaminarPartition, sets: Dict[int, Sequence[int]]
    ) -> "DeficiencyLedger":
        total = 0
        norm: List[Tuple[int, Tuple[int, ...]]] = []
        for level in sorted(sets):
            idxs = tuple(sorted(set(sets[level])))
            if not 1 <= level <= p.ell:
                raise ValueError(f"ledger level {level} outside 1..{p.ell}")
            blocks = p.tagged[level - 1]
            for i in idxs:
                if not 0 <= i < len(blocks):
                    raise ValueError(f"ledger block {i} not in level {level}")
                total += blocks[i].size
            norm.append((level, idxs))
        return DeficiencyLedger(sets=tuple(norm), budget_used=total)


EMPTY_LEDGER = DeficiencyLedger(sets=(), budget_used=0)


@dataclass(frozen=True)
class ImmediacySpec:
    """A monotone window-length function with its distance parameter and the
    window-exponent step t used by the partition construction."""

    kind: str  # "exp" | "double_exp" | "custom"
    imm: Callable[[int], int]
    delta: Fraction
    kappa: int
    t: int

    @staticmethod
    def _kappa(delta: Fraction) -> int:
        if not 0 < delta < 1:
            raise ValueError(f"delta must be in (0,1), got {delta}")
        kappa = floor_lg(Fraction(2) / delta)
        # 2^-kappa < delta <= 2^(-kappa+1) holds by definition of the floor
        assert Fraction(1, 2**kappa) < delta <= Fraction(2, 2**kappa)
        return kappa

    @staticmethod
    def exponential(delta) -> "ImmediacySpec":
        delta = as_fraction(delta)
        kappa = ImmediacySpec._kappa(delta)
        return ImmediacySpec("exp", lambda k: 2**k, delta, kappa, 1 + kappa)

    @staticmethod
    def double_exponential(delta) -> "ImmediacySpec":
        delta = as_fraction(delta)
        kappa = ImmediacySpec._kappa(delta)
        t = floor_lg(kappa + 2)
        if 2**t != kappa + 2:
            t += 1  # ceil(lg(kappa + 2))
        return ImmediacySpec("double_exp", lambda k: 2 ** (2**k), delta, kappa, t)

    @staticmethod
    def custom(imm: Callable[[int], int], delta, t: int) -> "ImmediacySpec":
        delta = as_fraction(delta)
        kappa = ImmediacySpec._kappa(delta)
        return ImmediacySpec("custom", imm, delta, kappa, t)


@dataclass(frozen=True)
class LaminarReport:
    """Outcome of validate_laminar: structural errors are distinct from
    property failures, and the first offending block is identified."""

    structural_errors: Tuple[str, ...]
    size_ok: bool
    laminar_ok: bool
    first_size_violation: Tuple[int, int] | None  # (level, block index)
    first_laminar_violation: Tuple[int, int] | None

    @property
    def structural_ok(self) -> bool:
        return not self.structural_errors

    @property
    def passed(self) -> bool:
        return self.structural_ok and self.size_ok and self.laminar_ok


def _check_level_partition(n: int, blocks: Sequence[Block], label: str) -> List[str]:
    errors: List[str] = []
    seen: set[int] = set()
    for bi, b in enumerate(blocks):
        if not b:
            errors.append(f"{label}: block {bi} is empty")
            continue
        for v in b:
            if not 1 <= v <= n:
                errors.append(f"{label}: index {v} outside [1..{n}] in block {bi}")
            elif v in seen:
                errors.append(f"{label}: index {v} appears in two blocks")
            seen.add(v)
    if len(seen) != n and not errors:
        errors.append(f"{label}: blocks cover {len(seen)} of {n} indices")
    return errors


def validate_laminar(p: LaminarPartition) -> LaminarReport:
    """Check structure (each level partitions [n], lf/rg well-formed), the
    size property |lf(B)| >= alpha|B|, and the laminar property (lf and rg are
    exact disjoint unions of previous-level blocks)."""
    errors: List[str] = []
    errors += _check_level_partition(p.n, p.p0, "P_0")
    for i, level in enumerate(p.tagged, start=1):
        for bi, tb in enumerate(level):
            if not tb.lf or not tb.rg:
                errors.append(f"P_{i}: block {bi} has an empty lf or rg part")
            if set(tb.lf) & set(tb.rg):
                errors.append(f"P_{i}: block {bi} has overlapping lf and rg")
        errors += _check_level_partition(p.n, [tb.block for tb in level], f"P_{i}")
    if errors:
        return LaminarReport(tuple(errors), False, False, None, None)

    size_bad: Tuple[int, int] | None = None
    laminar_bad: Tuple[int, int] | None = None
    prev_blocks = list(p.p0)
    for i, level in enumerate(p.tagged, start=1):
        owner = {}
        for pi, pb in enumerate(prev_blocks):
            for v in pb:
                owner[v] = pi
        for bi, tb in enumerate(level):
            if size_bad is None and len(tb.lf) < p.alpha * tb.size:
                size_bad = (i, bi)
            if laminar_bad is None:
                for part in (tb.lf, tb.rg):
                    touched: Dict[int, int] = {}
                    for v in part:
                        touched[owner[v]] = touched.get(owner[v], 0) + 1
                    if any(touched[pi] != len(prev_blocks[pi]) for pi in touched):
                        laminar_bad = (i, bi)
                        break
        prev_blocks = [tb.block for tb in level]
    return LaminarReport((), size_bad is None, laminar_bad is None, size_bad, laminar_bad)


def _interval_blocks(n: int, length: int) -> List[Block]:
    if n % length:
        raise ValueError(f"block length {length} does not divide n = {n}")
    return [tuple(range(lo, lo + length)) for lo in range(1, n + 1, length)]


def _tag_prefix(blocks: Sequence[Block], lf_len: int) -> Tuple[TaggedBlock, ...]:
    return tuple(TaggedBlock(lf=b[:lf_len], rg=b[lf_len:]) for b in blocks)


def build_from_imm(spec: ImmediacySpec, ell: int) -> LaminarPartition:
    """The consecutive-block laminar partition induced by an immediacy
    function: level j has blocks of length 2*Imm(j*t), with lf(B) the leftmost
    Imm(j*t)/2^kappa indices.  Rejects parameter choices that violate the
    required divisibility chain (failing level reported; nothing is rounded).
    """
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    imm, t, kappa = spec.imm, spec.t, spec.kappa
    for j in range(1, ell + 1):
        v = imm(j * t)
        if v % (2**kappa):
            raise ValueError(
                f"divisibility fails at level j={j}: Imm({j * t}) = {v} "
                f"is not a multiple of 2^kappa = {2 ** kappa}"
            )
        lf_len = v // (2**kappa)
        prev = 2 * imm((j - 1) * t)
        if lf_len % prev:
            raise ValueError(
                f"divisibility fails at level j={j}: 2*Imm({(j - 1) * t}) = {prev} "
                f"does not divide Imm({j * t})/2^kappa = {lf_len}"
            )
    n = 2 * imm(ell * t)
    p0 = tuple(_interval_blocks(n, 2 * imm(0)))
    tagged = tuple(
        _tag_prefix(_interval_blocks(n, 2 * imm(j * t)), imm(j * t) // (2**kappa))
        for j in range(1, ell + 1)
    )
    p = LaminarPartition(n=n, alpha=Fraction(1, 2 ** (kappa + 1)), p0=p0, tagged=tagged)
    report = validate_laminar(p)
    assert report.passed, report
    return p


def chs_scales(m: int, l1: int, growth_shift: int) -> List[int]:
    """Length scales ell_1..ell_{m+1} under ell_{i+1} = ell_i^2 / 2^shift.

    Returned list is 1-indexed (slot 0 unused).  Exact integer arithmetic;
    usable symbolically at scales far too large to materialize.
    """
    if m < 0 or l1 < 2 or growth_shift < 0:
        raise ValueError("need m >= 0, l1 >= 2, growth_shift >= 0")
    ells = [0, l1]
    for _ in range(m):
        sq = ells[-1] * ells[-1]
        if sq % (2**growth_shift):
            raise ValueError(f"ell_{len(ells)} = {sq}/2^{growth_shift} is not an integer")
        ells.append(sq >> growth_shift)
    return ells


def chs_tagged_structure(
    m: int, l1: int, growth_shift: int
) -> Tuple[LaminarPartition, DeficiencyLedger]:
    """CHS-style block structure without validity enforcement.

    Level P_{i-1} has consecutive blocks of length ell_i/2; tagged blocks split
    as first quarter lf / last three quarters rg; the ledger exempts the
    rightmost block of each tagged level.  Used directly by the CHS condition
    checker, which needs the intervals even at scales where the quarter-split
    is not laminar over the previous level.
    """
    ells = chs_scales(m, l1, growth_shift)
    n = ells[m + 1]
    for i in range(1, m + 2):
        if ells[i] % 2:
            raise ValueError(f"ell_{i} = {ells[i]} must be even")
        if n % ells[i]:
            raise ValueError(f"ell_{i} = {ells[i]} does not divide n = {n}")
    p0 = tuple(_interval_blocks(n, ells[1] // 2))
    tagged = []
    for i in range(1, m + 1):
        blen = ells[i + 1] // 2
        if blen % 4:
            raise ValueError(f"level {i} block length {blen} is not a multiple of 4")
        tagged.append(_tag_prefix(_interval_blocks(n, blen), blen // 4))
    p = LaminarPartition(n=n, alpha=Fraction(1, 4), p0=p0, tagged=tuple(tagged))
    sets = {i: [len(p.tagged[i - 1]) - 1] for i in range(1, m + 1)}
    return p, DeficiencyLedger.for_partition(p, sets)


def chs_partition(
    m: int, l1: int, growth_shift: int, max_n: int = 1 << 16
) -> Tuple[LaminarPartition, DeficiencyLedger]:
    """Validated (1/4, m)-laminar partition of the CHS length scales, plus the
    rightmost-block deficiency ledger (budget <= n).

    Rejects scalings whose quarter-splits are not aligned with the previous
    level (a divisibility failure, exactly like a non-integer ell_i: the
    scaling is invalid, not repairable).  Scales with n beyond max_n are
    refused here; use chs_scales for symbolic bound evaluation.
    """
    ells = chs_scales(m, l1, growth_shift)
    n = ells[m + 1]
    if n > max_n:
        raise ValueError(
            f"n = {n} too large to materialize (max_n = {max_n}); "
            "use chs_scales for symbolic bound evaluation"
        )
    p, ledger = chs_tagged_structure(m, l1, growth_shift)
    report = validate_laminar(p)
    if not report.passed:
        raise ValueError(
            f"CHS scaling (m={m}, l1={l1}, shift={growth_shift}) does not yield "
            f"a laminar partition: {report.structural_errors or report.first_laminar_violation}"
        )
    return p, ledger


def eks_partition(k: int) -> LaminarPartition:
    """The dyadic (1/2, k)-laminar partition of [2^k]: level i has consecutive
    blocks of length 2^i, halved into lf and rg."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = 2**k
    p0 = tuple(_interval_blocks(n, 1))
    tagged = tuple(
        _tag_prefix(_interval_blocks(n, 2**i), 2 ** (i - 1)) for i in range(1, k + 1)
    )
    p = LaminarPartition(n=n, alpha=Fraction(1, 2), p0=p0, tagged=tagged)
    assert validate_laminar(p).passed
    return p


def ghk_partition(n: int, m: int, delta) -> LaminarPartition:
    """The (2^-kappa, ell)-laminar partition behind the constant-rate
    construction: singletons at level 0, then consecutive blocks of length
    n / 2^(kappa*(ell-i)), with lf(B) the smallest |B|/2^kappa elements."""
    delta = as_fraction(delta)
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two >= 2, got {n}")
    if m < 1 or m & (m - 1):
        raise ValueError(f"m must be a power of two >= 1, got {m}")
    if n < 2 * m:
        raise ValueError(f"need n >= 2m, got n = {n}, m = {m}")
    kappa = ImmediacySpec._kappa(delta)
    lg_n, lg_2m = floor_lg(n), floor_lg(2 * m)
    ell = 1 + (lg_n - lg_2m) // kappa
    p0 = tuple(_interval_blocks(n, 1))
    tagged = []
    for i in range(1, ell + 1):
        shift = kappa * (ell - i)
        if shift >= lg_n:
            raise ValueError(f"level {i} block length n/2^{shift} is not a positive integer")
        blen = n >> shift
        if blen % (2**kappa):
            raise ValueError(f"level {i} lf size {blen}/2^{kappa} is not an integer")
        tagged.append(_tag_prefix(_interval_blocks(n, blen), blen >> kappa))
    p = LaminarPartition(n=n, alpha=Fraction(1, 2**kappa), p0=p0, tagged=tuple(tagged))
    report = validate_laminar(p)
    if not report.passed:
        raise ValueError(f"GHK parameters (n={n}, m={m}, delta={delta}) invalid: {report}")
    return p
