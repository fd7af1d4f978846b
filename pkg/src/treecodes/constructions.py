"""Block-ECC factory, the layered shifted-table tree code built from it, and a
seeded random tree-code searcher.

The layered code fills a (k+1) x n table of b-bit cells: row 1 holds per-symbol
repetition cells, row i >= 2 holds block-code encodings of dyadic message
blocks of length 2^(i-2), right-shifted by one block so that column j depends
only on x_1..x_j.  Output symbol j packs column j into one integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import Alphabet, Codeword, Message, TreeCode
from .dyadic import as_fraction
from .rng import DetStream

DEFAULT_B_SCHEDULE = (2, 3, 4, 6, 8)
_EXHAUSTIVE_POOL_BITS = 16  # full candidate enumeration below this many bits


@dataclass(frozen=True)
class BlockCode:
    """A length-ell block code into b-bit cells with certified cell distance.

    codewords[m] is the encoding of the message whose bits (MSB first) spell
    the integer m; certified is the exact minimum relative distance over all
    message pairs, established by exhaustive comparison at build time.
    """

    ell: int
    b: int
    codewords: Tuple[Tuple[int, ...], ...]
    certified: Fraction

    def encode(self, bits: Sequence[int]) -> Tuple[int, ...]:
        if len(bits) != self.ell:
            raise ValueError(f"message length {len(bits)} != ell = {self.ell}")
        m = 0
        for v in bits:
            m = (m << 1) | v
        return self.codewords[m]


def _pairwise_min_distance(words: Sequence[Tuple[int, ...]], ell: int) -> Fraction:
    best = ell
    for i in range(len(words)):
        wi = words[i]
        for j in range(i + 1, len(words)):
            wj = words[j]
            d = sum(1 for a, b in zip(wi, wj) if a != b)
            if d < best:
                best = d
    return Fraction(best, ell)


def _cell_distance(a: Tuple[int, ...], b: Tuple[int, ...]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def _int_to_cells(v: int, ell: int, b: int) -> Tuple[int, ...]:
    mask = (1 << b) - 1
    return tuple((v >> (b * (ell - 1 - i))) & mask for i in range(ell))


def _search_block_code(
    ell: int, b: int, delta: Fraction, stream: DetStream, restarts: int, pool_cap: int
) -> Optional[BlockCode]:
    """One greedy construction attempt per restart; None if all get stuck.

    Small candidate spaces get true farthest-point selection over the full
    (shuffled) universe; larger ones fall back to threshold greedy over a
    seeded sample, which is the usual random-greedy existence argument.
    """
    want = 1 << ell
    need = math.ceil(delta * ell)  # absolute cell distance needed
    space_bits = ell * b
    exhaustive = space_bits <= _EXHAUSTIVE_POOL_BITS and (1 << space_bits) * want <= 1 << 20
    for r in range(restarts):
        rs = DetStream(stream.u64(), "restart", r)
        if exhaustive:
            pool = [_int_to_cells(v, ell, b) for v in rs.shuffled(range(1 << space_bits))]
            chosen = _greedy_farthest_point(pool, want, need, ell)
        else:
            size = min(pool_cap, 1 << space_bits)
            pool = [_int_to_cells(rs.randbelow(1 << space_bits), ell, b) for _ in range(size)]
            chosen = _greedy_threshold(pool, want, need)
        if chosen is not None:
            words = tuple(chosen)
            cert = _pairwise_min_distance(words, ell)
            if cert >= delta:
                return BlockCode(ell=ell, b=b, codewords=words, certified=cert)
    return None


def _greedy_farthest_point(
    pool: List[Tuple[int, ...]], want: int, need: int, ell: int
) -> Optional[List[Tuple[int, ...]]]:
    """Repeatedly take the candidate farthest (in min cell distance) from the
    chosen set; succeed when `want` words at pairwise distance >= need exist."""
    chosen = [pool[0]]
    mind = [_cell_distance(w, pool[0]) for w in pool]
    while len(chosen) < want:
        best_i = max(range(len(pool)), key=lambda i: mind[i])
        if mind[best_i] < need:
            return None
        w = pool[best_i]
        chosen.append(w)
        for i, cand in enumerate(pool):
            d = _cell_distance(cand, w)
            if d < mind[i]:
                mind[i] = d
    return chosen


def _greedy_threshold(
    pool: List[Tuple[int, ...]], want: int, need: int
) -> Optional[List[Tuple[int, ...]]]:
    chosen: List[Tuple[int, ...]] = []
    for cand in pool:
        if all(_cell_distance(cand, w) >= need for w in chosen):
            chosen.append(cand)
            if len(chosen) == want:
                return chosen
    return None


def ecc_family(
    delta,
    max_ell: int,
    b_schedule: Sequence[int] = DEFAULT_B_SCHEDULE,
    seed: int = 0,
    restarts: int = 8,
    pool_cap: int = 4096,
) -> List[BlockCode]:
    """Block codes for every length 1..max_ell over one shared cell width b.

    The width is not derived from delta (only existence of a suitable b is
    known); instead each b in the schedule is tried in order and the first
    width for which every length succeeds wins.  Length 1 is the repetition
    code (bit replicated across the cell), distance exactly 1.  Every returned
    code carries its exhaustively certified distance.
    """
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0,1), got {delta}")
    if max_ell < 1:
        raise ValueError(f"max_ell must be >= 1, got {max_ell}")
    last_fail: Tuple[int, int] | None = None
    for b in b_schedule:
        family: List[BlockCode] = [
            BlockCode(ell=1, b=b, codewords=((0,), ((1 << b) - 1,)), certified=Fraction(1))
        ]
        ok = True
        for ell in range(2, max_ell + 1):
            stream = DetStream(seed, "ecc", b, ell)
            code = _search_block_code(ell, b, delta, stream, restarts, pool_cap)
            if code is None:
                ok = False
                last_fail = (b, ell)
                break
            family.append(code)
        if ok:
            return family
    raise ValueError(
        f"no block code of length {last_fail[1]} with distance {delta} found at "
        f"cell width b={last_fail[0]}; extend b_schedule with a larger width"
    )


@dataclass(frozen=True)
class EKSParams:
    """Parameters of the layered construction: depth 2^k, shared cell width b,
    and one block code per dyadic length 2^i, 0 <= i <= k-1."""

    k: int
    b: int
    family: Tuple[BlockCode, ...]  # family[i] has ell = 2^i
    delta: Fraction

    def __post_init__(self) -> None:
        if len(self.family) != self.k:
            raise ValueError(f"need {self.k} family members, got {len(self.family)}")
        for i, bc in enumerate(self.family):
            if bc.ell != 1 << i:
                raise ValueError(f"family[{i}] has ell = {bc.ell}, want {1 << i}")
            if bc.b != self.b:
                raise ValueError("family members must share the cell width b")
            if bc.certified < self.delta:
                raise ValueError(f"family[{i}] certified {bc.certified} < delta {self.delta}")

    @property
    def n(self) -> int:
        return 1 << self.k


def eks_params(k: int, delta, seed: int = 0, **kwargs) -> EKSParams:
    """Build a certified ECC family and wrap it as layered-code parameters."""
    delta = as_fraction(delta)
    family = ecc_family(delta, 1 << (k - 1), seed=seed, **kwargs)
    by_len = {c.ell: c for c in family}
    return EKSParams(
        k=k, b=family[0].b, family=tuple(by_len[1 << i] for i in range(k)), delta=delta
    )


def eks_code(params: EKSParams, zero_rows: Sequence[int] = ()) -> TreeCode:
    """The layered tree code as a TreeCode (column j packed low-row-first).

    zero_rows lists 1-based table rows forced to all-zero cells; used by
    ablation tests to break exactly one dyadic scale.
    """
    k, b = params.k, params.b
    n = params.n
    zeroed = frozenset(zero_rows)
    fam = params.family

    def cell(row: int, prefix: Message) -> int:
        j = len(prefix)
        if row in zeroed:
            return 0
        if row == 1:
            return fam[0].encode((prefix[j - 1],))[0]
        length = 1 << (row - 2)
        if j <= length:
            return 0
        pos = j - length
        block_idx = (pos - 1) // length
        within = (pos - 1) % length
        bits = prefix[block_idx * length : (block_idx + 1) * length]
        return fam[row - 2].encode(bits)[within]

    def char(prefix: Message) -> int:
        v = 0
        for row in range(1, k + 2):
            v |= cell(row, prefix) << (b * (row - 1))
        return v

    tag = f"eks[k={k},b={b}]" + (f"-zero{sorted(zeroed)}" if zeroed else "")
    return TreeCode(n, Alphabet(2), Alphabet(1 << (b * (k + 1))), char, name=tag)


def eks_encode(params: EKSParams, x: Sequence[int]) -> Codeword:
    """Whole-string encoding under the layered construction."""
    return eks_code(params).encode(x)


def check_eks_is_immediacy_code(params: EKSParams, cap: int | None = None):
    """Certify the dyadic neighborhood-decoding property of the layered code:
    brute-force check of every tagged block of the dyadic partition."""
    from . import verify
    from .partitions import eks_partition

    kwargs = {} if cap is None else {"cap": cap}
    return verify.check_neighborhood_decoding(
        eks_code(params), eks_partition(params.k), **kwargs
    )


def table_code(n: int, sigma_in: int, sigma_out: int, table: Sequence[int]) -> TreeCode:
    """A tree code tabulated in level order: for each depth j = 1..n, the edge
    labels below each depth-(j-1) node in lexicographic order."""
    expected = sum(sigma_in**j for j in range(1, n + 1))
    if len(table) != expected:
        raise ValueError(f"table has {len(table)} labels, want {expected}")
    offsets = [0] * (n + 1)
    for j in range(2, n + 1):
        offsets[j] = offsets[j - 1] + sigma_in ** (j - 1)
    tbl = tuple(table)

    def char(prefix: Message) -> int:
        j = len(prefix)
        idx = 0
        for v in prefix:
            idx = idx * sigma_in + v
        return tbl[offsets[j] + idx]

    return TreeCode(n, Alphabet(sigma_in), Alphabet(sigma_out), char, name=f"table[{n}]")


def _sample_table(n: int, sigma_out: int, stream: DetStream) -> List[int]:
    """Random level-order label table with distinct sibling labels.

    Any two equal sibling labels certify distance 0 outright (the two
    depth-one-divergence paths agree on their whole window), so the sampler
    draws each node's pair of child labels without replacement whenever the
    alphabet allows it.
    """
    table: List[int] = []
    for j in range(1, n + 1):
        for _ in range(2 ** (j - 1)):
            if sigma_out >= 2:
                a, b = stream.distinct_pair(sigma_out)
            else:
                a = b = 0
            table.extend((a, b))
    return table


def _table_rows(n: int, table: Sequence[int]) -> List[List[Tuple[int, ...]]]:
    """rows[d][v] = codeword prefix (length d) of the depth-d vertex v."""
    offsets = [0] * (n + 1)
    for j in range(2, n + 1):
        offsets[j] = offsets[j - 1] + 2 ** (j - 1)
    rows: List[List[Tuple[int, ...]]] = [[()]]
    for d in range(1, n + 1):
        prev = rows[d - 1]
        cur = []
        base = offsets[d]
        for v in range(2**d):
            cur.append(prev[v >> 1] + (table[base + v],))
        rows.append(cur)
    return rows


def _min_distance_of_table(
    n: int, table: Sequence[int], abort_below: Fraction
) -> Fraction:
    """Exact minimum divergent distance over all same-depth vertex pairs,
    aborting (returning the running minimum) once it cannot beat abort_below."""
    rows = _table_rows(n, table)
    bn, bd = 1, 1  # running minimum bn/bd, compared by cross-multiplication
    an, ad = abort_below.numerator, abort_below.denominator
    for d in range(n, 0, -1):
        row = rows[d]
        size = 1 << d
        for u in range(size):
            cu = row[u]
            for v in range(u + 1, size):
                s = d - (u ^ v).bit_length() + 1  # 1-based divergence depth
                cv = row[v]
                cnt = 0
                for p in range(s - 1, d):
                    if cu[p] != cv[p]:
                        cnt += 1
                w = d - s + 1
                if cnt * bd < bn * w:
                    bn, bd = cnt, w
                    if bn * ad <= an * bd:
                        return Fraction(bn, bd)
    return Fraction(bn, bd)


def table_min_distance(n: int, table: Sequence[int]) -> Fraction:
    """Exact minimum divergent distance of a level-order labeling."""
    return _min_distance_of_table(n, table, abort_below=Fraction(-1))


@dataclass(frozen=True)
class SearchResult:
    code: TreeCode
    table: Tuple[int, ...]
    distance: Fraction
    trial: int
    trials: int


def random_code_search(
    n: int,
    sigma_out_size: int,
    target_delta=None,
    trials: int = 1000,
    seed: int = 0,
    threads: int = 1,
) -> SearchResult:
    """Sample random labelings, certify each exactly, keep the best.

    Deterministic given the seed: trial t draws from its own counter-based
    stream, and results merge by (distance, -trial) so any evaluation order,
    including threaded runs, yields the same winner.
    """
    target = None if target_delta is None else as_fraction(target_delta)
    best: Tuple[Fraction, int, List[int]] | None = None

    def run_trial(t: int, floor: Fraction) -> Tuple[Fraction, int, List[int]]:
        stream = DetStream(seed, "trial", t)
        table = _sample_table(n, sigma_out_size, stream)
        # a scan that never hits the floor completes and is exact; an aborted
        # scan reports a value <= floor, which can never displace the best
        return _min_distance_of_table(n, table, abort_below=floor), t, table

    def merge(cand: Tuple[Fraction, int, List[int]]) -> None:
        nonlocal best
        if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
            best = cand

    if threads > 1:
        # every trial is evaluated with floor 0 (exact values), so merging by
        # (distance, -trial) is order-independent and matches the serial run
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as ex:
            for cand in ex.map(lambda t: run_trial(t, Fraction(0)), range(trials)):
                merge(cand)
    else:
        for t in range(trials):
            merge(run_trial(t, Fraction(0) if best is None else best[0]))
            if target is not None and best is not None and best[0] >= target:
                break

    assert best is not None
    dist = _min_distance_of_table(n, best[2], abort_below=Fraction(-1))
    code = table_code(n, 2, sigma_out_size, best[2])
    return SearchResult(
        code=code, table=tuple(best[2]), distance=dist, trial=best[1], trials=trials
    )
