"""The bulk evaluator must agree with the per-branch reference, record by record."""

import pytest

from rtlab.counter import run_counter
from rtlab.engine import Bounds
from rtlab.enumerate import enumerate_counter, reference_signatures


@pytest.mark.parametrize("n", range(1, 11))
def test_bulk_matches_reference(n):
    ref = run_counter(n, "exhaustive-reference")
    bulk = enumerate_counter(n, detail=True)
    assert reference_signatures(ref.records) == bulk.signatures
    want = ref.summary.to_dict()
    got = bulk.summary.to_dict()
    want.pop("strategy"), got.pop("strategy")
    assert got == want


@pytest.mark.parametrize("speedup", [3, 4])
def test_bulk_matches_reference_at_other_speedups(speedup):
    ref = run_counter(6, "exhaustive-reference", speedup=speedup)
    bulk = enumerate_counter(6, speedup=speedup, detail=True)
    assert reference_signatures(ref.records) == bulk.signatures


def test_bound_truncates():
    res = enumerate_counter(30, bounds=Bounds(max_branches=1000))
    assert res.summary.truncated
