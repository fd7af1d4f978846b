"""JSON interchange for codes, partitions, ledgers, verdicts and bound
reports.  One canonical byte encoding (sorted keys, fixed separators, trailing
newline) so identical objects serialize to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import List

from .bounds import BoundReport
from .core import TreeCode
from .dyadic import as_fraction
from .partitions import DeficiencyLedger, LaminarPartition, TaggedBlock
from .verify import Verdict


def frac_str(x: Fraction) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return as_fraction(s)


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# -------------------- codes --------------------

def tabulate_code(code: TreeCode, max_entries: int = 1 << 20) -> dict:
    """Explicit level-order table form of a code (depth-major, prefixes in
    lexicographic order; entry = label of the edge into that prefix)."""
    sigma = code.input_alphabet.size
    total = sum(sigma**j for j in range(1, code.n + 1))
    if total > max_entries:
        raise ValueError(f"code too deep to tabulate: {total} entries")
    from itertools import product

    table: List[int] = []
    for j in range(1, code.n + 1):
        for prefix in product(range(sigma), repeat=j):
            table.append(code.char_fn(prefix))
    return {
        "kind": "table",
        "n": code.n,
        "sigma_in": sigma,
        "sigma_out": code.output_alphabet.size,
        "table": table,
    }


def code_to_json(code_or_recipe) -> dict:
    if isinstance(code_or_recipe, dict):
        return dict(code_or_recipe)
    return tabulate_code(code_or_recipe)


def code_from_json(obj: dict) -> TreeCode:
    from . import constructions
    from .core import identity_code, trivial_code

    kind = obj.get("kind")
    if kind is None and "table" in obj:
        kind = "table"  # bare tabulated form
    if kind == "trivial":
        return trivial_code(int(obj["n"]))
    if kind == "identity":
        return identity_code(int(obj["n"]), int(obj.get("sigma_in", 2)))
    if kind == "table":
        return constructions.table_code(
            int(obj["n"]), int(obj["sigma_in"]), int(obj["sigma_out"]), list(obj["table"])
        )
    if kind == "eks":
        delta = parse_frac(obj["delta"])
        params = constructions.eks_params(
            int(obj["k"]),
            delta,
            seed=int(obj.get("seed", 0)),
            b_schedule=(int(obj["b"]),) if "b" in obj else constructions.DEFAULT_B_SCHEDULE,
        )
        return constructions.eks_code(params)
    raise ValueError(f"unknown code kind {kind!r}")


def blockcode_to_json(bc) -> dict:
    """Raw codeword-list form of a block code (message index = bits as int)."""
    return {
        "ell": bc.ell,
        "b": bc.b,
        "delta": frac_str(bc.certified),
        "codewords": [list(w) for w in bc.codewords],
    }


def blockcode_from_json(obj: dict):
    from .constructions import BlockCode

    return BlockCode(
        ell=int(obj["ell"]),
        b=int(obj["b"]),
        codewords=tuple(tuple(w) for w in obj["codewords"]),
        certified=parse_frac(obj["delta"]),
    )


# -------------------- partitions --------------------

def _interval_of(block) -> tuple[int, int]:
    lo, hi = block[0], block[-1]
    if list(block) != list(range(lo, hi + 1)):
        raise ValueError("only interval blocks serialize; got a non-contiguous block")
    return lo, hi


def partition_to_json(p: LaminarPartition) -> dict:
    levels: List[List[dict]] = []
    levels.append([{"lo": lo, "hi": hi} for lo, hi in map(_interval_of, p.p0)])
    for level in p.tagged:
        out = []
        for tb in level:
            lo, hi = _interval_of(tb.block)
            lf_lo, lf_hi = _interval_of(tb.lf)
            if lf_lo != lo:
                raise ValueError("only prefix lf parts serialize")
            out.append({"lo": lo, "hi": hi, "lf_hi": lf_hi})
        levels.append(out)
    return {"n": p.n, "alpha": frac_str(p.alpha), "levels": levels}


def partition_from_json(obj: dict) -> LaminarPartition:
    n = int(obj["n"])
    alpha = parse_frac(obj["alpha"])
    levels = obj["levels"]
    p0 = tuple(tuple(range(b["lo"], b["hi"] + 1)) for b in levels[0])
    tagged = []
    for level in levels[1:]:
        tagged.append(
            tuple(
                TaggedBlock(
                    lf=tuple(range(b["lo"], b["lf_hi"] + 1)),
                    rg=tuple(range(b["lf_hi"] + 1, b["hi"] + 1)),
                )
                for b in level
            )
        )
    return LaminarPartition(n=n, alpha=alpha, p0=p0, tagged=tuple(tagged))


def ledger_to_json(ledger: DeficiencyLedger) -> list:
    return [{"level": lv, "blocks": list(idxs)} for lv, idxs in ledger.sets]


def ledger_from_json(obj: list, p: LaminarPartition) -> DeficiencyLedger:
    return DeficiencyLedger.for_partition(
        p, {int(e["level"]): [int(i) for i in e["blocks"]] for e in obj}
    )


# -------------------- reports --------------------

def verdict_to_json(v: Verdict) -> dict:
    return {
        "passed": v.passed,
        "witness": v.witness,
        "details": v.details,
        "evaluations": v.evaluations,
    }


def bound_report_to_json(r: BoundReport) -> dict:
    return {
        "formula": r.formula_id,
        "quantity": r.quantity,
        "inputs": dict(r.inputs),
        "bound_value": frac_str(r.bound_value),
        "exactness": r.exactness,
        "measured": None if r.measured is None else frac_str(r.measured),
        "satisfied": r.satisfied,
        "vacuous": r.vacuous,
    }
