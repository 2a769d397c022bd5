import pytest
from hypothesis import given, settings, strategies as st

from pvconv import betanet
from pvconv.algebraic import parse_field
from pvconv.iset import (CapExceeded, DigitParams, all_relations, build_iset, export_automaton,
                         in_window, min_gap)


def _build(desc, d):
    f = parse_field(desc)
    return f, build_iset(f, DigitParams.make(f, d))


def test_quadratic_example():
    f, (I, edges) = _build("x^2-5x-3@5.5", 6)
    assert [str(e) for e in I] == ["0", "1", "b-5"]
    # every (h, i, k, j) with j = i + beta*i_h - i_k in D; 19 in total
    assert len(edges) == 19


def test_cubic_example_order():
    _, (I, _) = _build("x^3-3x^2+1@2.9", 3)
    assert [str(e) for e in I] == ["0", "1", "b-2", "b^2-2b-2", "b^2-2b-3", "b^2-3b", "b^2-3b+1", "b-3"]


@pytest.mark.parametrize("m", range(2, 7))
def test_multinacci_size(m):
    f = betanet.multinacci_field(m)
    I, _ = build_iset(f, DigitParams.make(f, 2))
    assert len(I) == m + 1


def test_integer_beta():
    f, (I, edges) = _build("x-3", 5)
    assert [str(e) for e in I] == ["0", "1"]


def test_params_validation():
    f = parse_field("x^2-5x-3@5.5")
    with pytest.raises(ValueError):
        DigitParams.make(f, 5)
    with pytest.raises(ValueError):
        DigitParams.make(f, 6, b=4)


@pytest.mark.parametrize("desc,d", [("x^2-5x-3@5.5", 6), ("x^3-3x^2+1@2.9", 3),
                                    ("x^2-x-1@1.6", 2), ("x^2-x-1@1.6", 3), ("x^3-x^2-x-1@1.8", 2)])
def test_edges_equal_independent_enumeration(desc, d):
    _, (I, edges) = _build(desc, d)
    assert set(edges) == set(all_relations(I))
    # closure: every element lies in the open window
    assert all(in_window(x, I.params) for x in I)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6))
def test_golden_more_digits_contains_smaller(d):
    f = parse_field("x^2-x-1@1.6")
    small, _ = build_iset(f, DigitParams.make(f, 2))
    big, _ = build_iset(f, DigitParams.make(f, d))
    assert {x.coeffs for x in small} <= {x.coeffs for x in big}


def test_cap():
    f = parse_field("x^3-3x^2+1@2.9")
    with pytest.raises(CapExceeded):
        build_iset(f, DigitParams.make(f, 3), max_size=4)


def test_dot_export_round_trip():
    _, (I, edges) = _build("x^2-5x-3@5.5", 6)
    dot = export_automaton(I, edges)
    assert dot.startswith("digraph") and dot.endswith("}\n")
    nodes = [ln for ln in dot.splitlines() if "[label=" in ln and "->" not in ln]
    arrows = [ln for ln in dot.splitlines() if "->" in ln]
    assert len(nodes) == 3 and len(arrows) == len(edges)


def test_min_gap_quadratic():
    _, (I, _) = _build("x^2-5x-3@5.5", 6)
    assert str(min_gap(I)) == "-b+6"
