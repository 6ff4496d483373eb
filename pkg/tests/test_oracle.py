"""Reference implementations and the baseline sorters."""

import random

import pytest

from cayley_imc.oracle import (
    BASELINE_SORTS,
    compare,
    oracle_extremum,
    oracle_search,
    oracle_sort_desc,
    run_baseline,
)


def test_search_membership():
    assert oracle_search([14, 9, 6], 9) == 1
    assert oracle_search([], 0) == 0
    assert oracle_search([1, 2], 3) == 0


def test_extremum():
    assert oracle_extremum([14, 9, 5], "max", 0) == 14
    assert oracle_extremum([], "min", 15) == 15
    assert oracle_extremum([3], "min", 15) == 3


def test_sort_desc():
    assert oracle_sort_desc([3, 1, 2]) == [3, 2, 1]
    assert oracle_sort_desc([7, 7]) == [7, 7]
    assert oracle_sort_desc([]) == []


def test_compare_reports():
    assert compare(3, 3).agreed == 1
    report = compare([1], [2])
    assert report.agreed == 0
    assert "oracle" in report.detail


def test_unknown_baseline_rejected():
    with pytest.raises(ValueError):
        run_baseline("bogo", [1])


@pytest.mark.parametrize("name", sorted(BASELINE_SORTS))
def test_baseline_agrees_with_oracle(name):
    rng = random.Random(hash(name) & 0xFFFF)
    for _ in range(50):
        els = [rng.randrange(256) for _ in range(rng.randrange(0, 40))]
        out, comps = run_baseline(name, els)
        assert out == oracle_sort_desc(els)
        assert comps >= 0


def test_all_baselines_agree_pairwise():
    rng = random.Random(99)
    names = sorted(BASELINE_SORTS)
    for _ in range(1000):
        els = [rng.randrange(256) for _ in range(rng.randrange(0, 24))]
        outputs = {name: run_baseline(name, els)[0] for name in names}
        baseline = outputs[names[0]]
        assert all(out == baseline for out in outputs.values())


def test_comparison_counts_scale():
    els = list(range(64))
    _, quad = run_baseline("selection", els)
    _, loglin = run_baseline("merge", els)
    assert quad == 64 * 63 // 2
    assert loglin < quad
    _, none = run_baseline("radix", els)
    assert none == 0
