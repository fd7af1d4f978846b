"""Brute-force certifiers: tree distance, immediacy windows, neighborhood
decoding, and the three construction-specific immediacy conditions.

Every checker is exhaustive within an evaluation budget (default 2^24 counted
position evaluations; CapExceeded aborts mid-run so constructed violations can
still be found early on large instances).  Thresholds are exact rationals and
every failure carries a witness that re-verifies in isolation.

Each condition keeps its own window convention: the generic immediacy window
is half-open [s, s+w); the dyadic-layered condition uses (s, s+2^l]; the
quarter-split condition uses closed [s, s+d]; the constant-rate condition
uses (i0, i0+2^(t+1)].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .core import TreeCode, all_codewords
from .dyadic import as_fraction, floor_lg
from .partitions import (
    DeficiencyLedger,
    LaminarPartition,
    chs_scales,
    chs_tagged_structure,
    validate_laminar,
)

DEFAULT_EVAL_CAP = 1 << 24


class CapExceeded(RuntimeError):
    """The evaluation budget ran out before the check finished."""

    def __init__(self, used: int, cap: int) -> None:
        super().__init__(f"evaluation cap exceeded: {used} > {cap}")
        self.used = used
        self.cap = cap


class _Budget:
    __slots__ = ("cap", "used")

    def __init__(self, cap: int) -> None:
        self.cap = cap
        self.used = 0

    def spend(self, k: int) -> None:
        self.used += k
        if self.used > self.cap:
            raise CapExceeded(self.used, self.cap)


@dataclass(frozen=True)
class Verdict:
    """pass/fail with a re-checkable witness on failure.

    witness payloads use 1-based positions and plain lists, so they serialize
    directly; a failing witness always contains enough raw data (messages,
    window or block, measured vs required) to re-evaluate the violated
    inequality without re-running the sweep.
    """

    passed: bool
    witness: Optional[dict]
    details: dict = field(default_factory=dict)
    evaluations: int = 0


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _table(code: TreeCode, budget: _Budget):
    cap_bits = math.log2(budget.cap)
    table = all_codewords(code, cap_bits=cap_bits)
    budget.spend(len(table) * code.n)
    return table


def check_online_property(code: TreeCode, cap: int = DEFAULT_EVAL_CAP) -> Verdict:
    """Codewords of any two messages agree strictly before the divergence
    point; this is the defining constraint of tree-structured encoding."""
    budget = _Budget(cap)
    table = _table(code, budget)
    n = code.n
    for i in range(len(table)):
        xi, ci = table[i]
        for j in range(i + 1, len(table)):
            yj, cj = table[j]
            s = 0
            while xi[s] == yj[s]:
                s += 1
            budget.spend(s + 1)
            for p in range(s):
                if ci[p] != cj[p]:
                    return Verdict(
                        passed=False,
                        witness={
                            "x": list(xi),
                            "y": list(yj),
                            "s": s + 1,
                            "disagree_at": p + 1,
                        },
                        evaluations=budget.used,
                    )
    return Verdict(passed=True, witness=None, evaluations=budget.used)


def _depth_pairs_violation(
    row: Sequence[Tuple[Tuple[int, ...], Tuple[int, ...]]],
    d: int,
    delta: Fraction,
    budget: _Budget,
) -> Tuple[Optional[dict], Fraction]:
    """First violating same-depth vertex pair at depth d, plus the minimum
    divergent distance seen (exact when no early exit happens)."""
    min_seen = Fraction(1)
    for i in range(len(row)):
        xi, ci = row[i]
        for j in range(i + 1, len(row)):
            yj, cj = row[j]
            s = 0
            while xi[s] == yj[s]:
                s += 1
            cnt = 0
            for p in range(s, d):
                if ci[p] != cj[p]:
                    cnt += 1
            budget.spend(d - s)
            h = Fraction(cnt, d - s)
            if h < min_seen:
                min_seen = h
            if h < delta:
                return (
                    {
                        "depth": d,
                        "x": list(xi),
                        "y": list(yj),
                        "s": s + 1,
                        "measured": _frac(h),
                        "required": _frac(delta),
                    },
                    min_seen,
                )
    return None, min_seen


def check_tree_distance(code: TreeCode, delta, cap: int = DEFAULT_EVAL_CAP) -> Verdict:
    """Distance certification against the definition: every pair of same-depth
    vertices (prefix pairs, all depths 1..n) has divergent distance >= delta.

    The full-message formulation (depth n only) is evaluated as well and
    reported in details; the definition-level sweep decides the verdict.
    """
    delta = as_fraction(delta)
    budget = _Budget(cap)
    table = _table(code, budget)
    n = code.n
    sigma = code.input_alphabet.size

    witness: Optional[dict] = None
    for d in range(1, n):
        stride = sigma ** (n - d)
        row = [
            (table[v * stride][0][:d], table[v * stride][1][:d]) for v in range(sigma**d)
        ]
        witness, _ = _depth_pairs_violation(row, d, delta, budget)
        if witness is not None:
            break
    full_row = [(m, c) for m, c in table]
    full_witness, full_min = _depth_pairs_violation(full_row, n, delta, budget)
    if witness is None:
        witness = full_witness
    return Verdict(
        passed=witness is None,
        witness=witness,
        details={
            "full_messages_pass": full_witness is None,
            "min_full_depth": _frac(full_min) if full_witness is None else None,
        },
        evaluations=budget.used,
    )


def exact_distance(code: TreeCode, cap: int = DEFAULT_EVAL_CAP) -> Fraction:
    """Exact minimum divergent distance over all same-depth vertex pairs."""
    budget = _Budget(cap)
    table = _table(code, budget)
    n = code.n
    sigma = code.input_alphabet.size
    best = Fraction(1)
    for d in range(1, n + 1):
        stride = sigma ** (n - d)
        row = [
            (table[v * stride][0][:d], table[v * stride][1][:d]) for v in range(sigma**d)
        ]
        _, seen = _depth_pairs_violation(row, d, Fraction(-1), budget)
        if seen < best:
            best = seen
    return best


def _diff_positions(x: Tuple[int, ...], y: Tuple[int, ...]) -> List[int]:
    return [p + 1 for p in range(len(x)) if x[p] != y[p]]


def _char_diff_prefix_sums(cx: Tuple[int, ...], cy: Tuple[int, ...]) -> List[int]:
    """psum[p] = number of disagreeing codeword positions among 1..p."""
    psum = [0] * (len(cx) + 1)
    acc = 0
    for p in range(len(cx)):
        if cx[p] != cy[p]:
            acc += 1
        psum[p + 1] = acc
    return psum


def check_immediacy_function(
    code: TreeCode, imm: Callable[[int], int], delta, cap: int = DEFAULT_EVAL_CAP
) -> Verdict:
    """Window-based immediacy: for every pair, every disagreement position s,
    and every window length Imm(k) fitting inside [s, n], the relative Hamming
    distance on [s, s+Imm(k)) is >= delta."""
    delta = as_fraction(delta)
    budget = _Budget(cap)
    n = code.n

    # probe the window function until it outgrows n; a monotone plateau is
    # cut off after 4n+64 steps (no new window lengths can appear afterwards
    # for strictly growing functions, and plateaus repeat what we have)
    widths: List[int] = []
    prev = 0
    for k in range(1, 4 * n + 65):
        w = imm(k)
        if not isinstance(w, int) or w < 1 or w < prev:
            raise ValueError(f"imm must be a monotone positive-integer function; imm({k}) = {w}")
        if w > n:
            break
        if w != prev:
            widths.append(w)
        prev = w

    table = _table(code, budget)
    for i in range(len(table)):
        xi, ci = table[i]
        for j in range(i + 1, len(table)):
            yj, cj = table[j]
            psum = _char_diff_prefix_sums(ci, cj)
            budget.spend(n)
            for s in _diff_positions(xi, yj):
                for w in widths:
                    if s + w > n + 1:
                        break
                    cnt = psum[s + w - 1] - psum[s - 1]
                    budget.spend(1)
                    if cnt < delta * w:
                        return Verdict(
                            passed=False,
                            witness={
                                "x": list(xi),
                                "y": list(yj),
                                "s": s,
                                "window": [s, s + w],  # [s, s+w) half-open
                                "measured": _frac(Fraction(cnt, w)),
                                "required": _frac(delta),
                            },
                            evaluations=budget.used,
                        )
    return Verdict(
        passed=True, witness=None, details={"widths": widths}, evaluations=budget.used
    )


def _validate_ledger(p: LaminarPartition, ledger: Optional[DeficiencyLedger]) -> Dict[int, set]:
    exempt: Dict[int, set] = {}
    if ledger is None:
        return exempt
    for level, idxs in ledger.sets:
        if not 1 <= level <= p.ell:
            raise ValueError(f"ledger level {level} not in partition (ell = {p.ell})")
        blocks = p.tagged[level - 1]
        for i in idxs:
            if not 0 <= i < len(blocks):
                raise ValueError(f"ledger block {i} not in level {level}")
        exempt[level] = set(idxs)
    return exempt


def check_neighborhood_decoding(
    code: TreeCode,
    p: LaminarPartition,
    ledger: Optional[DeficiencyLedger] = None,
    cap: int = DEFAULT_EVAL_CAP,
    materialize_tables: bool = False,
) -> Verdict:
    """Per tagged block B (minus ledger exemptions): no two messages may
    disagree on lf(B) while their codewords agree on rg(B); equivalently the
    map c(x)_rg(B) -> x_lf(B) is well defined, and can be materialized.

    This is a functional-dependence property, so each block is checked with a
    single grouping sweep over all messages (ascending); a failure reports the
    earliest message whose rg-restriction collides with an earlier one.  The
    size and laminar properties are NOT required here (decoding is meaningful
    for any structurally valid tagged partition); structural defects are
    rejected as errors.
    """
    report = validate_laminar(p)
    if not report.structural_ok:
        raise ValueError(f"malformed partition: {report.structural_errors[:3]}")
    if code.n != p.n:
        raise ValueError(f"code length {code.n} != partition n = {p.n}")
    exempt = _validate_ledger(p, ledger)
    budget = _Budget(cap)
    table = _table(code, budget)

    blocks_out: List[dict] = []
    tables_out: Dict[str, list] = {}
    first_witness: Optional[dict] = None
    all_pass = True
    for level in range(1, p.ell + 1):
        for bi, tb in enumerate(p.tagged[level - 1]):
            entry = {"level": level, "index": bi, "exempt": bi in exempt.get(level, ())}
            if entry["exempt"]:
                entry["passed"] = None
                blocks_out.append(entry)
                continue
            lf_cols = [v - 1 for v in tb.lf]
            rg_cols = [v - 1 for v in tb.rg]
            budget.spend(len(table) * (len(lf_cols) + len(rg_cols)))
            seen: dict = {}
            block_witness = None
            for m, cw in table:
                key = tuple(cw[c] for c in rg_cols)
                val = tuple(m[c] for c in lf_cols)
                prior = seen.get(key)
                if prior is None:
                    seen[key] = (val, m)
                elif prior[0] != val:
                    block_witness = {
                        "level": level,
                        "block": bi,
                        "lf": list(tb.lf),
                        "rg": list(tb.rg),
                        "x": list(prior[1]),
                        "y": list(m),
                    }
                    break
            entry["passed"] = block_witness is None
            if block_witness is not None:
                entry["witness"] = block_witness
                all_pass = False
                if first_witness is None:
                    first_witness = block_witness
            elif materialize_tables:
                tables_out[f"{level}:{bi}"] = [
                    [list(k), list(v[0])] for k, v in sorted(seen.items())
                ]
            blocks_out.append(entry)
    details = {"blocks": blocks_out}
    if materialize_tables:
        details["tables"] = tables_out
    return Verdict(
        passed=all_pass, witness=first_witness, details=details, evaluations=budget.used
    )


def check_eks_condition(
    code: TreeCode, delta, k: int, cap: int = DEFAULT_EVAL_CAP
) -> Verdict:
    """Dyadic-window immediacy: for every pair, every disagreement s', and
    every scale l < k with s' <= n - 2^l, the codewords differ in at least
    delta * 2^l positions of (s, s + 2^l], where s is s' rounded up to a
    multiple of 2^l."""
    delta = as_fraction(delta)
    if code.n != 1 << k:
        raise ValueError(f"code length {code.n} != 2^k = {1 << k}")
    n = code.n
    budget = _Budget(cap)
    table = _table(code, budget)
    for i in range(len(table)):
        xi, ci = table[i]
        for j in range(i + 1, len(table)):
            yj, cj = table[j]
            psum = _char_diff_prefix_sums(ci, cj)
            budget.spend(n)
            for sp in _diff_positions(xi, yj):
                for ell in range(k):
                    length = 1 << ell
                    if sp > n - length:
                        break
                    s = ((sp + length - 1) >> ell) << ell
                    cnt = psum[s + length] - psum[s]
                    budget.spend(1)
                    if cnt < delta * length:
                        return Verdict(
                            passed=False,
                            witness={
                                "x": list(xi),
                                "y": list(yj),
                                "s_prime": sp,
                                "ell": ell,
                                "window": [s + 1, s + length],  # (s, s+2^l] as 1-based closed
                                "measured": cnt,
                                "required": _frac(delta * length),
                            },
                            evaluations=budget.used,
                        )
    return Verdict(passed=True, witness=None, evaluations=budget.used)


def check_ghk_condition(
    code: TreeCode, k0: int, epsilon, delta, cap: int = DEFAULT_EVAL_CAP
) -> Verdict:
    """Aligned-window immediacy of the constant-rate construction: for every
    pair differing at i <= n - 2^t and every t with lg m <= t <= lg n - 1
    (m = (k0/eps) lg n), the codewords differ in >= delta * 2^(t+1) positions
    of (i0, i0 + 2^(t+1)], i0 the largest multiple of 2^t below i."""
    delta = as_fraction(delta)
    epsilon = as_fraction(epsilon)
    n = code.n
    if n < 2 or n & (n - 1):
        raise ValueError(f"n must be a power of two, got {n}")
    lg_n = floor_lg(n)
    if lg_n & (lg_n - 1):
        raise ValueError(f"lg n = {lg_n} must be a power of two")
    if k0 < 1 or k0 & (k0 - 1):
        raise ValueError(f"k0 = {k0} must be a power of two")
    inv_eps = 1 / epsilon
    if inv_eps.denominator != 1 or inv_eps.numerator & (inv_eps.numerator - 1):
        raise ValueError(f"1/epsilon = {inv_eps} must be a power-of-two integer")
    m_frac = Fraction(k0) / epsilon * lg_n
    assert m_frac.denominator == 1
    m = m_frac.numerator
    ts = [t for t in range(floor_lg(m), lg_n)] if m <= n else []

    budget = _Budget(cap)
    table = _table(code, budget)
    for i in range(len(table)):
        xi, ci = table[i]
        for j in range(i + 1, len(table)):
            yj, cj = table[j]
            psum = _char_diff_prefix_sums(ci, cj)
            budget.spend(n)
            for pos in _diff_positions(xi, yj):
                for t in ts:
                    if pos > n - (1 << t):
                        break
                    i0 = ((pos - 1) >> t) << t
                    w = 1 << (t + 1)
                    cnt = psum[i0 + w] - psum[i0]
                    budget.spend(1)
                    if cnt < delta * w:
                        return Verdict(
                            passed=False,
                            witness={
                                "x": list(xi),
                                "y": list(yj),
                                "i": pos,
                                "t": t,
                                "window": [i0 + 1, i0 + w],
                                "measured": cnt,
                                "required": _frac(delta * w),
                            },
                            evaluations=budget.used,
                        )
    return Verdict(
        passed=True,
        witness=None,
        details={"m": m, "t_values": ts, "vacuous": not ts},
        evaluations=budget.used,
    )


def check_chs_condition(
    code: TreeCode,
    m: int,
    l1: int,
    growth_shift: int,
    cap: int = DEFAULT_EVAL_CAP,
) -> Verdict:
    """Quarter-split immediacy at scaled length scales ell_i: for every pair,
    every level i in 2..m+1, and every non-rightmost block B of the blocks of
    length ell_i/2 containing a disagreement, with s the leftmost disagreement
    in B: for every d in [ell_{i-1}/2, ell_i/2], the codewords differ in >=
    d/3 positions of the closed interval [s, s+d].

    On pass, the derived per-block decodability is re-checked by running
    neighborhood decoding against the same quarter-split structure with its
    rightmost-block ledger; the agreement outcome is reported in details.
    The derivation's arithmetic needs ell_i >= 16 at every level (the scales
    this condition is meant for are far larger); derivation_scale_ok records
    whether that holds, since at smaller scales the condition can pass while
    a block fails to decode.
    """
    ells = chs_scales(m, l1, growth_shift)
    n = ells[m + 1]
    if code.n != n:
        raise ValueError(f"code length {code.n} != ell_(m+1) = {n}")
    for i in range(1, m + 2):
        if ells[i] % 2 or n % ells[i]:
            raise ValueError(f"ell_{i} = {ells[i]} invalid: must be even and divide n")
        if i >= 2 and ells[i - 1] > ells[i]:
            raise ValueError("length scales must be non-decreasing")
    derivation_scale_ok = all(ells[i] >= 16 for i in range(2, m + 2))

    budget = _Budget(cap)
    table = _table(code, budget)
    witness: Optional[dict] = None
    for ii in range(len(table)):
        xi, ci = table[ii]
        for jj in range(ii + 1, len(table)):
            yj, cj = table[jj]
            diffs = _diff_positions(xi, yj)
            psum = _char_diff_prefix_sums(ci, cj)
            budget.spend(n)
            for i in range(2, m + 2):
                blen = ells[i] // 2
                d_lo, d_hi = ells[i - 1] // 2, ells[i] // 2
                seen_blocks: set = set()
                for sp in diffs:
                    if sp > n - blen:
                        break  # rightmost block of this level: exempt
                    bidx = (sp - 1) // blen
                    if bidx in seen_blocks:
                        continue
                    seen_blocks.add(bidx)
                    s = sp  # first disagreement in the block, diffs ascending
                    for d in range(d_lo, d_hi + 1):
                        cnt = psum[s + d] - psum[s - 1]
                        budget.spend(1)
                        if 3 * cnt < d:
                            witness = {
                                "x": list(xi),
                                "y": list(yj),
                                "level_i": i,
                                "block": bidx,
                                "s": s,
                                "d": d,
                                "interval": [s, s + d],
                                "measured": cnt,
                                "required": _frac(Fraction(d, 3)),
                            }
                            return Verdict(
                                passed=False,
                                witness=witness,
                                details={"derivation_scale_ok": derivation_scale_ok},
                                evaluations=budget.used,
                            )
    details: dict = {"derivation_scale_ok": derivation_scale_ok}
    p, led = chs_tagged_structure(m, l1, growth_shift)
    nd = check_neighborhood_decoding(code, p, led, cap=cap)
    details["nd_passed"] = nd.passed
    details["nd_agrees"] = nd.passed  # condition passed; agreement means nd does too
    if not nd.passed:
        details["nd_witness"] = nd.witness
    return Verdict(passed=True, witness=None, details=details, evaluations=budget.used)
