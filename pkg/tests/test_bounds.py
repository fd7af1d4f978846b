import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from treecodes.bounds import (
    audit_code,
    eq5_report,
    eq13_report,
    eq33_report,
    ghk_distance_bound,
    imm_rate_upper,
    rate_bound_deficient,
    rate_bound_plain,
)
from treecodes.constructions import eks_code
from treecodes.core import identity_code, trivial_code
from treecodes.partitions import chs_partition, eks_partition, ghk_partition

alphas = st.fractions(min_value=Fraction(1, 64), max_value=1)
lgs = st.fractions(min_value=0, max_value=Fraction(20))


def test_plain_bound_examples():
    assert rate_bound_plain(Fraction(1, 2), 5, 1) == Fraction(5, 2)
    assert rate_bound_plain(Fraction(1, 2), 0, 1) == 0
    assert rate_bound_plain(Fraction(1, 8), 2, 1) == Fraction(1, 4)
    with pytest.raises(ValueError):
        rate_bound_plain(Fraction(3, 2), 1, 1)


def test_deficient_bound_examples():
    assert rate_bound_deficient(Fraction(1, 4), 6, 64, 64, 1) == Fraction(5, 4)
    assert rate_bound_deficient(Fraction(1, 4), 3, 3 * 10, 10, 1) == 0  # fully deficient


@given(alphas, st.integers(0, 12), st.integers(1, 500), lgs)
def test_deficient_reduces_to_plain_at_zero(alpha, ell, n, lg_in):
    assert rate_bound_deficient(alpha, ell, 0, n, lg_in) == rate_bound_plain(alpha, ell, lg_in)


def test_exp_kind_reference_values():
    r = imm_rate_upper("exp", Fraction(1, 2), 128)
    assert r["eq27"].bound_value == 4 and r["eq27"].exactness == "exact"
    assert r["eq27"].vacuous  # 4 > 1: correctly flagged, not suppressed
    assert r["eq26"].bound_value == 4
    assert r["eq25"].bound_value == Fraction(1, 4)
    assert r["eq25"].quantity.startswith("lg_sigma")


def test_exp_kind_rejects_inconsistent_depth():
    with pytest.raises(ValueError):
        imm_rate_upper("exp", Fraction(1, 2), 2 * 2**8)  # 8 not a multiple of t=3


def test_double_exp_kind_reference_values():
    # t = 2, n = 2*2^(2^(ell*t)) with ell=1
    r = imm_rate_upper("double_exp", Fraction(1, 2), 2 * 2 ** (2**2))
    assert r["eq22"].bound_value == Fraction(4 * 2, Fraction(1, 2) * 2)  # = 8
    assert r["eq22"].vacuous


def test_general_kind_requires_t_and_ell():
    with pytest.raises(ValueError):
        imm_rate_upper("general", Fraction(1, 2), 128)
    r = imm_rate_upper("general", Fraction(1, 2), 128, t=3, ell=2)
    assert r["eq26"].bound_value == 4


def test_irrational_lg_rounds_in_certified_direction():
    r = imm_rate_upper("exp", Fraction(1, 3), 128)  # kappa=2, t=3, ell=2
    true = 4 * math.log2(12) / ((1 / 3) * math.log2(64))
    assert r["eq27"].exactness == "rounded_up"
    assert float(r["eq27"].bound_value) >= true - 1e-15


def test_ghk_bound_with_construction_parameters():
    delta = Fraction(1, 2) / (32 * 16 * 16)
    rep = ghk_distance_bound(1 << 16, 512, delta, Fraction(33, 32))
    assert rep.satisfied and rep.bound_value == Fraction(1, 32768)
    assert rep.inputs["estimate"] == "1/81920"
    # sanity: the chained estimate never exceeds the binding quantity
    assert Fraction(1, 81920) <= rep.bound_value


def test_ghk_bound_violation_and_edge():
    delta = Fraction(1, 2) / (32 * 16 * 16)
    assert not ghk_distance_bound(1 << 16, 512, delta, Fraction(1, 10**5)).satisfied
    edge = ghk_distance_bound(16, 8, Fraction(1, 2), Fraction(1))
    assert edge.inputs["estimate"] == "0"  # lg(n/2m) = 0


def test_eq33_and_eq5_and_eq13():
    assert eq33_report(5, 1 << 5).bound_value == 1
    assert eq33_report(1, 2).vacuous  # (m-1)/4 = 0
    r = eq5_report(3, measured_lg_sigma=9)
    assert r.bound_value == Fraction(3, 2) and r.satisfied
    r13 = eq13_report(Fraction(1, 4))
    assert r13.bound_value == Fraction(1, 8) and r13.satisfied is None


def test_audit_trivial_code_over_dyadic_partition():
    rep = audit_code(trivial_code(8), eks_partition(3))
    assert rep.formula_id == "thm41"
    assert rep.bound_value == Fraction(3, 2)
    assert rep.measured == 9  # 8 prefix bits + 1 systematic bit
    assert rep.satisfied and not rep.vacuous


def test_audit_eks_code_eq5_direction(eks3):
    rep = audit_code(eks_code(eks3), eks_partition(3))
    assert rep.bound_value == Fraction(3, 2)
    assert rep.measured == eks3.b * 4 + 1
    assert rep.satisfied


def test_audit_deficient_partition_uses_thm42():
    p, ledger = chs_partition(1, 4, 0)
    rep = audit_code(trivial_code(16), p, ledger)
    assert rep.formula_id == "thm42"
    assert rep.bound_value == Fraction(1, 8)
    assert rep.satisfied


def test_audit_refuses_unverified_code():
    with pytest.raises(ValueError, match="refusing to audit"):
        audit_code(identity_code(4), eks_partition(2))


def test_audit_accepts_recipe_mapping():
    rep = audit_code({"kind": "trivial", "n": 4}, eks_partition(2))
    assert rep.satisfied and rep.bound_value == 1
    assert rep.inputs["verified"] == "False"


def test_audit_recipe_skips_verification_at_symbolic_scale():
    # a depth-128 full-prefix recipe cannot be enumerated, but its declared
    # alphabet can still be compared against the bound of its partition
    from treecodes.partitions import ImmediacySpec, build_from_imm

    p = build_from_imm(ImmediacySpec.exponential(Fraction(1, 2)), 2)
    rep = audit_code({"kind": "trivial", "n": 128}, p)
    assert rep.measured == 129 and rep.bound_value == Fraction(1, 4)
    assert rep.satisfied


def test_imm_partition_bound_consistency():
    # the reference partition's alpha*ell equals eq25's value
    r = imm_rate_upper("exp", Fraction(1, 2), 128)
    from treecodes.partitions import ImmediacySpec, build_from_imm

    p = build_from_imm(ImmediacySpec.exponential(Fraction(1, 2)), 2)
    assert rate_bound_plain(p.alpha, p.ell, 1) == r["eq25"].bound_value


def test_audit_ghk_partition_soundness():
    rep = audit_code(trivial_code(4), ghk_partition(4, 2, Fraction(3, 4)))
    assert rep.satisfied
