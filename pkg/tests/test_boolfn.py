import numpy as np
import pytest

from pbflab.boolfn import (
    ONE,
    UNDEF,
    ZERO,
    PartialAssignment,
    PartialFunction,
    flip,
    make_slice,
    make_symmetric,
    point_from_bits,
    point_to_bits,
    to_pm,
    weight,
)


def or3() -> PartialFunction:
    return PartialFunction.total_from_ones(3, range(1, 8))


def test_evaluate_total():
    f = or3()
    assert f.evaluate(0b000) == ZERO
    assert f.evaluate(0b101) == ONE


def test_evaluate_partial_undefined():
    f = PartialFunction(3, bytes([UNDEF] + [ZERO] * 7))
    assert f.evaluate(0) == UNDEF
    assert f.evaluate(1) == ZERO


def test_evaluate_range_check():
    with pytest.raises(ValueError):
        or3().evaluate(8)


def test_flip_examples():
    assert flip(0b000, 0b001) == 0b001  # flipping x_1 of 000 gives 100
    assert flip(0b101, 0b101) == 0b000
    assert flip(0b011, 0) == 0b011


def test_flip_involution_exhaustive_n12():
    xs = np.arange(1 << 12, dtype=np.uint32)
    for block in range(1 << 12):
        assert np.array_equal((xs ^ block) ^ block, xs)


def test_pm_convention():
    # bit value 0 maps to +1, bit value 1 to -1
    assert to_pm(0b0, 2) == (1, 1)
    assert to_pm(0b1, 2) == (-1, 1)
    assert to_pm(0b10, 2) == (1, -1)


def test_point_bits_roundtrip():
    assert point_from_bits("100") == 0b001
    assert point_to_bits(0b001, 3) == "100"
    for x in range(16):
        assert point_from_bits(point_to_bits(x, 4)) == x


def test_make_symmetric_domain_sizes():
    f = make_symmetric(4, {0: 0, 4: 1})
    assert f.domain_size == 2
    dj = make_symmetric(4, {0: 0, 4: 0, 2: 1})
    assert dj.domain_size == 2 + 6
    const = make_symmetric(3, {w: 1 for w in range(4)})
    assert const.is_total and set(const.table) == {ONE}


def test_make_symmetric_transposition_invariance():
    rng = np.random.default_rng(0)
    f = make_symmetric(6, {0: 0, 3: 1, 6: 0})
    for _ in range(100):
        i, j = rng.choice(6, size=2, replace=False)
        x = int(rng.integers(0, 1 << 6))
        bi, bj = (x >> i) & 1, (x >> j) & 1
        y = x & ~((1 << int(i)) | (1 << int(j))) | (bj << int(i)) | (bi << int(j))
        assert f.evaluate(x) == f.evaluate(int(y))


def test_make_slice_examples():
    dictator = make_slice(3, 1, {1: 1, 2: 0, 4: 0})
    assert dictator.evaluate(0b001) == ONE
    assert dictator.evaluate(0b010) == ZERO
    for x in range(8):
        if weight(x) != 1:
            assert dictator.evaluate(x) == UNDEF
    single = make_slice(2, 0, {0: 1})
    assert single.domain_size == 1

    with pytest.raises(ValueError):
        make_slice(3, 1, {1: 1, 2: 0})  # missing e_3
    with pytest.raises(ValueError):
        make_slice(3, 1, {1: 1, 2: 0, 4: 0, 3: 1})  # off-slice point


def test_arity_cap():
    with pytest.raises(ValueError):
        PartialFunction(25, bytes(1 << 25 if False else 2))
    with pytest.raises(ValueError):
        PartialFunction(0, b"\x00")


def test_partial_assignment():
    a = PartialAssignment(0b011, 0b001)
    assert a.size == 2
    assert a.consistent_with_point(0b101)
    assert not a.consistent_with_point(0b010)
    assert not a.conflicts(PartialAssignment(0b110, 0b100))
    assert a.conflicts(PartialAssignment(0b001, 0b000))
    with pytest.raises(ValueError):
        PartialAssignment(0b001, 0b010)


def test_immutability_and_hash():
    f = or3()
    with pytest.raises(AttributeError):
        f.n = 5
    assert hash(f) == hash(PartialFunction(3, f.table))
    g = f.with_value(0, ONE)
    assert g != f and f.evaluate(0) == ZERO
