import pytest
from hypothesis import given
from hypothesis import strategies as st

from rtlab import binary

nat = st.integers(0, 1 << 40)


def test_examples():
    assert binary.double_by_append0("101") == "1010"
    assert binary.sum_proper_prefixes("100") == "11"
    assert binary.binary_subtract("1000", "11") == "101"
    assert binary.double_by_append0("0") == "0"


def test_negative_result_kills():
    with pytest.raises(binary.NegativeResult):
        binary.binary_subtract("11", "100")
    with pytest.raises(binary.NegativeResult):
        binary.binary_subtract("100", "101")


@given(nat, nat)
def test_add_and_subtract_match_integers(a, b):
    sa, sb = format(a, "b"), format(b, "b")
    assert int(binary.binary_add(sa, sb), 2) == a + b
    if a >= b:
        assert int(binary.binary_subtract(sa, sb), 2) == a - b


@given(st.integers(1, 1 << 30))
def test_prefix_sum(v):
    s = format(v, "b")
    want = sum(int(s[:i], 2) for i in range(1, len(s)))
    assert binary.value(binary.sum_proper_prefixes(s)) == want
    assert binary.sum_proper_prefixes_cost(s) >= len(s) - 1
