from fractions import Fraction
from itertools import product

import pytest

from treecodes.core import (
    Alphabet,
    EnumerationCapExceeded,
    all_codewords,
    divergent_distance,
    identity_code,
    make_systematic,
    trivial_code,
)
from treecodes.constructions import eks_code, table_code
from treecodes.partitions import eks_partition
from treecodes.rng import DetStream
from treecodes.verify import check_neighborhood_decoding, check_online_property


def test_alphabet_bits():
    assert Alphabet(8).bits == 3
    assert Alphabet(1).bits == 0
    assert abs(Alphabet(3).bits - 1.5849625) < 1e-6
    with pytest.raises(ValueError):
        Alphabet(0)


def test_trivial_code_packs_full_prefix():
    code = trivial_code(3)
    # prefix in the high bits, zero padding: 1.. , 10., 101
    assert code.encode((1, 0, 1)) == (0b100, 0b100, 0b101)
    assert code.rate == Fraction(1, 3)
    one = trivial_code(1)
    assert one.encode((0,)) == (0,) and one.encode((1,)) == (1,)
    assert one.rate == Fraction(1, 1)


def test_trivial_code_distance_is_one_exhaustive():
    # any divergent pair disagrees on every position from the split on
    for n in (3, 5, 8):
        code = trivial_code(n)
        for x in product((0, 1), repeat=n):
            for y in product((0, 1), repeat=n):
                if x < y:
                    dd = divergent_distance(code, x, y)
                    assert dd.relative_distance == 1


def test_divergent_distance_examples():
    code = trivial_code(3)
    dd = divergent_distance(code, (0, 0, 0), (0, 0, 1))
    assert dd.s == 3 and dd.relative_distance == Fraction(1, 1)
    with pytest.raises(ValueError):
        divergent_distance(code, (0, 1, 0), (0, 1, 0))


def test_divergent_distance_against_raw_recount():
    # random depth-4 code over a 4-symbol alphabet: recount disagreements
    # directly from the emitted codewords
    stream = DetStream(99, "core")
    n = 4
    table = [stream.randbelow(4) for _ in range(2 + 4 + 8 + 16)]
    code = table_code(n, 2, 4, table)
    for x in product((0, 1), repeat=n):
        for y in product((0, 1), repeat=n):
            if x >= y:
                continue
            cx, cy = code.encode(x), code.encode(y)
            s = min(j for j in range(n) if x[j] != y[j])
            manual = sum(1 for j in range(s, n) if cx[j] != cy[j])
            dd = divergent_distance(code, x, y)
            assert dd.s == s + 1
            assert dd.relative_distance == Fraction(manual, n - s)


def test_online_property_by_enumeration():
    for code in (trivial_code(5), identity_code(5)):
        assert check_online_property(code).passed


def test_online_property_at_depth_ten():
    from treecodes.synthetic import scrambled_prefix_code

    assert check_online_property(scrambled_prefix_code(10, 1), cap=1 << 25).passed


def test_encode_matches_incremental_chars():
    code = trivial_code(4)
    x = (1, 1, 0, 1)
    assert code.encode(x) == tuple(code.char(x[: j + 1]) for j in range(4))


def test_systematic_alphabet_and_symbols():
    code = identity_code(3)
    sys_code = make_systematic(code)
    assert sys_code.output_alphabet.size == 4
    # pairs (x_k, x_k) packed as base*2 + bit
    assert sys_code.encode((1, 0, 1)) == (3, 0, 3)


def test_systematic_never_decreases_divergent_distance():
    stream = DetStream(7, "systematic")
    n = 4
    codes = [identity_code(n), table_code(n, 2, 4, [stream.randbelow(4) for _ in range(30)])]
    for code in codes:
        sys_code = make_systematic(code)
        for x in product((0, 1), repeat=n):
            for y in product((0, 1), repeat=n):
                if x < y:
                    assert (
                        divergent_distance(sys_code, x, y).relative_distance
                        >= divergent_distance(code, x, y).relative_distance
                    )


def test_systematic_preserves_neighborhood_decoding(eks2):
    code = eks_code(eks2)
    p = eks_partition(2)
    assert check_neighborhood_decoding(code, p).passed
    assert check_neighborhood_decoding(make_systematic(code), p).passed


def test_systematic_alphabet_size_example(eks3):
    # |Sigma'| = |Sigma| x |Sigma_in|
    code = eks_code(eks3)
    assert make_systematic(code).output_alphabet.size == code.output_alphabet.size * 2


def test_enumeration_cap_fails_fast():
    with pytest.raises(EnumerationCapExceeded):
        all_codewords(trivial_code(13))  # default cap is 12 bits of message space
    assert len(all_codewords(trivial_code(13), cap_bits=13)) == 8192


def test_depth_one_edge_cases():
    from treecodes.verify import check_tree_distance

    one = trivial_code(1)
    assert check_tree_distance(one, 1).passed
    dd = divergent_distance(one, (0,), (1,))
    assert dd.s == 1 and dd.relative_distance == 1


def test_level_order_table_code_roundtrip():
    code = trivial_code(3)
    labels = []
    for j in range(1, 4):
        for prefix in product((0, 1), repeat=j):
            labels.append(code.char(prefix))
    rebuilt = table_code(3, 2, 8, labels)
    for x in product((0, 1), repeat=3):
        assert rebuilt.encode(x) == code.encode(x)
