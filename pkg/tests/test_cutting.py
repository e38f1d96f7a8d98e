from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from efx_multigraph import build_instance, cut, is_efx_feasible, preferred_bundle


def _pair_instance(values):
    return build_instance(2, [(0, 1, w, w) for w in values])


def test_cut_two_items():
    inst = _pair_instance([Fraction(10), Fraction(9)])
    cfg = cut(inst, 1, 0)
    assert cfg.c1 == {0} and cfg.c2 == {1}


def test_cut_empty_pair():
    inst = build_instance(3, [(0, 1, 1, 1)])
    cfg = cut(inst, 2, 0)
    assert cfg.c1 == frozenset() and cfg.c2 == frozenset()


def test_cut_balances_6543():
    inst = _pair_instance([Fraction(6), Fraction(5), Fraction(4), Fraction(3)])
    cfg = cut(inst, 0, 1)
    assert cfg.c1 == {0, 3}  # 6 then 3
    assert cfg.c2 == {1, 2}  # 5 then 4


def test_cut_tie_breaking_by_edge_id():
    inst = _pair_instance([Fraction(2), Fraction(2), Fraction(2)])
    cfg = cut(inst, 0, 1)
    assert cfg.c1 == {0, 2}
    assert cfg.c2 == {1}


def test_cut_determinism():
    inst = _pair_instance([Fraction(7, 3), Fraction(7, 3), Fraction(1, 2), Fraction(5)])
    assert cut(inst, 1, 0) == cut(inst, 1, 0)


def test_cut_rejects_same_agent():
    inst = _pair_instance([Fraction(1)])
    with pytest.raises(ValueError):
        cut(inst, 0, 0)


def test_preferred_bundle_tie_goes_to_c1():
    inst = _pair_instance([Fraction(4), Fraction(4)])
    cfg = cut(inst, 1, 0)
    assert preferred_bundle(inst, 0, cfg) == cfg.c1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(min_value=1, max_value=60),
                          st.integers(min_value=1, max_value=9)),
                min_size=0, max_size=12))
def test_cut_halves_are_feasible_and_balanced(raw):
    values = [Fraction(a, b) for a, b in raw]
    if not values:
        inst = build_instance(2, [])
    else:
        inst = _pair_instance(values)
    cfg = cut(inst, 0, 1)
    assert cfg.c1 | cfg.c2 == frozenset(range(len(values)))
    assert not cfg.c1 & cfg.c2
    assert is_efx_feasible(inst, 0, [cfg.c1, cfg.c2], 0)
    assert is_efx_feasible(inst, 0, [cfg.c1, cfg.c2], 1)
    if values:
        v1 = sum((inst.edges[e].wu for e in cfg.c1), Fraction(0))
        v2 = sum((inst.edges[e].wu for e in cfg.c2), Fraction(0))
        assert abs(v1 - v2) <= max(values)
