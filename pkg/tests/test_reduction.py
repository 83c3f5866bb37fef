"""Tests for the palette-reduction module.

The expected special-case tables below were transcribed by hand from the
reference tabulation and are frozen here as oracles; the module must
regenerate them from the closed-form exclusion formulas alone.
"""

import pytest

from foxknot import codec, coloring, reduction
from foxknot.reduction import (
    SCHEDULE,
    TARGET,
    Occurrence,
    ReductionState,
    alt_exclusion_pairs,
    case2_colors,
    case3_alt_colors,
    case3_diff_colors,
    case3_equal_colors,
    classify_occurrences,
    eliminate_color,
    exclusions_for_a,
    exclusions_for_b,
    local_search,
    reduce_to_six,
    special_case_tables,
)

P = 17


# -- schedule shape -----------------------------------------------------------


def test_schedule_partitions_z17():
    assert set(SCHEDULE) | set(TARGET) == set(range(17))
    assert set(SCHEDULE) & set(TARGET) == set()
    assert len(SCHEDULE) == 11 and len(TARGET) == 6


# -- closed-form color formulas ----------------------------------------------


@pytest.mark.parametrize("a,c,expect", [
    (0, 16, (1, 2)),
    (3, 16, (7, 11)),
    (5, 7, (3, 1)),
])
def test_case2_colors(a, c, expect):
    assert case2_colors(a, c) == expect


def test_case2_rejects_degenerate():
    with pytest.raises(ValueError):
        case2_colors(7, 7)


@pytest.mark.parametrize("a,c,expect", [
    (4, 15, (16, 5)),
    (1, 0, (3, 4)),
    (13, 6, (10, 0)),
])
def test_case3_equal_colors(a, c, expect):
    assert case3_equal_colors(a, c) == expect


@pytest.mark.parametrize("a,b,c,expect", [
    (4, 10, 15, (15, 3)),
    (8, 0, 15, (16, 14)),
])
def test_case3_diff_colors(a, b, c, expect):
    assert case3_diff_colors(a, b, c) == expect


@pytest.mark.parametrize("a,b,c,expect", [
    (4, 10, 15, (16, 10)),
    (0, 8, 15, (16, 14)),
])
def test_case3_alt_colors(a, b, c, expect):
    assert case3_alt_colors(a, b, c) == expect


def test_case3_alt_is_diff_with_roles_swapped():
    for a in range(17):
        for b in range(17):
            if a == b:
                continue
            assert case3_alt_colors(a, b, 5) == case3_diff_colors(b, a, 5)


# -- exclusion sets -----------------------------------------------------------


def test_exclusions_for_a_examples():
    ex = exclusions_for_a(15, {16})
    assert {7, 4, 11} <= ex
    assert exclusions_for_a(9, frozenset()) == frozenset({9})
    ex9 = exclusions_for_a(9, {16, 15})
    assert 0 in ex9 and 11 in ex9


def test_exclusions_for_b_examples():
    assert exclusions_for_b(4, 15, frozenset()) == frozenset({10})
    assert exclusions_for_b(4, 15, {16}) == frozenset({10, 9, 12})
    assert exclusions_for_b(0, 16, frozenset()) == frozenset({1})


def test_alt_exclusion_pairs_examples():
    pairs = alt_exclusion_pairs(15, {16})
    assert (4, 10) in pairs and (8, 0) in pairs
    assert (12, 14) in alt_exclusion_pairs(7, {10, 16})
    assert (2, 5) in alt_exclusion_pairs(9, {16, 15})


def test_exclusion_completeness_exhaustive():
    """No admissible neighbor choice may produce c or a forbidden color."""
    for i, c in enumerate(SCHEDULE):
        forbidden = frozenset(SCHEDULE[:i])
        bad = forbidden | {c}
        ex_a = exclusions_for_a(c, forbidden)
        for a in range(17):
            if a in ex_a or a in bad:
                continue
            assert not set(case2_colors(a, c)) & bad, (c, a)
            assert not set(case3_equal_colors(a, c)) & bad, (c, a)
            for b in range(17):
                if b in bad or b == a or b in exclusions_for_b(a, c, forbidden):
                    continue
                assert not set(case3_diff_colors(a, b, c)) & bad, (c, a, b)


# -- special-case table regeneration ------------------------------------------

# Frozen reference tabulation.  Keys: (step, c, ck) or (step, c, ck, cl).
SINGLE_A_6 = {
    (2, 15, 16): 4,
    (3, 9, 16): 0, (3, 9, 15): 11,
    (4, 10, 16): 12, (4, 10, 15): 6,
    (5, 6, 10): 13,
    (6, 7, 15): 4, (6, 7, 9): 2, (6, 7, 6): 1,
    (7, 5, 16): 3, (7, 5, 10): 1, (7, 5, 6): 11, (7, 5, 7): 0,
    (9, 11, 7): 4,
    (11, 13, 14): 2,
}
SINGLE_A_13 = {
    (2, 15, 16): 11,
    (3, 9, 15): 2,
    (4, 10, 16): 3, (4, 10, 15): 7, (4, 10, 9): 14,
    (5, 6, 16): 0, (5, 6, 15): 4, (5, 6, 10): 7,
    (6, 7, 16): 5, (6, 7, 10): 12,
    (7, 5, 16): 12,
    (8, 1, 15): 13, (8, 1, 7): 11, (8, 1, 5): 2,
    (9, 11, 15): 12, (9, 11, 6): 14,
    (10, 14, 9): 0, (10, 14, 10): 13, (10, 14, 7): 8,
    (11, 13, 10): 8, (11, 13, 11): 4,
}
PAIR_6_12 = {
    (2, 15, 16): (4, 10),
    (3, 9, 16): (0, 8), (3, 9, 15): (11, 13),
    (4, 10, 16): (12, 14), (4, 10, 15): (6, 2),
    (5, 6, 10): (13, 3),
    (6, 7, 15): (4, 1), (6, 7, 9): (2, 14), (6, 7, 6): (1, 12),
    (7, 5, 16): (3, 1), (7, 5, 6): (11, 0), (7, 5, 7): (0, 12),
    (9, 11, 7): (4, 14),
    (11, 13, 14): (2, 8),
}
PAIR_10_2 = {
    (2, 15, 16): (8, 0),
    (3, 9, 16): (11, 6),
    (4, 10, 16): (2, 5), (4, 10, 9): (0, 8),
    (5, 6, 10): (12, 14),
    (6, 7, 6): (14, 5),
    (7, 5, 15): (3, 8), (7, 5, 9): (11, 13),
}
TRIPLE_9_1_8 = {
    (3, 9, 16, 15): (2, 5), (3, 9, 15, 16): (10, 5),
    (4, 10, 9, 15): (3, 14), (4, 10, 15, 9): (6, 14),
    (5, 6, 16, 10): (1, 3), (5, 6, 9, 15): (5, 1),
    (6, 7, 9, 16): (5, 1), (6, 7, 10, 15): (14, 1), (6, 7, 9, 10): (2, 12),
    (7, 5, 16, 7): (0, 1), (7, 5, 7, 16): (4, 1), (7, 5, 16, 6): (8, 0),
    (7, 5, 6, 16): (3, 0), (7, 5, 7, 10): (1, 12), (7, 5, 10, 7): (11, 12),
    (8, 1, 9, 5): (11, 13),
    (9, 11, 5, 9): (4, 3), (9, 11, 9, 16): (3, 14), (9, 11, 10, 15): (12, 14),
    (10, 14, 16, 15): (8, 0), (10, 14, 9, 5): (13, 0),
    (11, 13, 16, 14): (8, 0), (11, 13, 6, 9): (4, 2),
}
TRIPLE_6_12 = {
    (6, 7, 10, 16): (12, 14), (6, 7, 16, 10): (14, 12),
    (7, 5, 10, 6): (3, 13), (7, 5, 6, 10): (13, 3),
}


def test_pair_and_triple_tables_regenerate_exactly():
    gen = special_case_tables()
    assert gen["pair_6_12"] == PAIR_6_12
    assert gen["pair_10_2"] == PAIR_10_2
    assert gen["triple_9_1_8"] == TRIPLE_9_1_8
    assert gen["triple_6_12"] == TRIPLE_6_12


def test_single_a_tables_contain_every_reference_cell():
    gen = special_case_tables()
    for key, val in SINGLE_A_6.items():
        assert gen["single_a_6"].get(key) == val
    for key, val in SINGLE_A_13.items():
        assert gen["single_a_13"].get(key) == val


def test_single_a_extras_duplicate_a_reference_value_at_their_step():
    """The generator keeps every colliding (c, ck) pair; the reference
    tabulation prints each problematic value once per step.  Any generated
    row that is absent from the reference must then repeat a value the
    reference already lists at the same step under the other formula."""
    gen = special_case_tables()
    reference = {**SINGLE_A_6, **SINGLE_A_13}
    extras = [(k, v) for k, v in {**gen["single_a_6"], **gen["single_a_13"]}.items()
              if SINGLE_A_6.get(k) != v and SINGLE_A_13.get(k) != v]
    for (step, c, ck), val in extras:
        printed_at_step = {v for (s, _, _), v in reference.items() if s == step}
        assert val in printed_at_step, ((step, c, ck), val)


def test_single_a_values_match_their_formulas():
    gen = special_case_tables()
    for (step, c, ck), a in gen["single_a_6"].items():
        assert a == 6 * (ck + 2 * c) % 17
    for (step, c, ck), a in gen["single_a_13"].items():
        assert a == 13 * (ck + 3 * c) % 17


# -- occurrence classification -------------------------------------------------


def test_classify_monochrome_kink():
    d = codec.parse_pd("X(1,2,2,1)")
    col = coloring.FoxColoring(17, (16,))
    occs = classify_occurrences(d, col, 16)
    assert [o.kind for o in occs] == ["monochrome_crossing"]


def test_classify_over_arc():
    # T(2,17) colored 0..16 has over-arc occurrences for every color
    d = codec.builtin_corpus()["T(2,17)"].diagram()
    col = next(c for c in coloring.solve_colorings(d, 17).colorings()
               if not c.is_trivial())
    occs = classify_occurrences(d, col, 16)
    assert any(o.kind == "over_arc" for o in occs)
    for o in occs:
        assert 16 not in o.neighbors


def test_classify_absent_color_is_empty():
    d = codec.builtin_corpus()["trefoil"].diagram()
    col = coloring.FoxColoring(3, (0, 1, 2))
    assert classify_occurrences(d, col, 1) != []
    d17 = codec.builtin_corpus()["T(2,17)"].diagram()
    col17 = coloring.FoxColoring(17, tuple([0] * 17))
    assert classify_occurrences(d17, col17, 5) == []


def test_classification_sites_ascend():
    d = codec.builtin_corpus()["T(2,17)"].diagram()
    col = next(c for c in coloring.solve_colorings(d, 17).colorings()
               if not c.is_trivial())
    for c in range(17):
        occs = classify_occurrences(d, col, c)
        kinds = [o.kind for o in occs]
        crossing_sites = [o.site for o in occs if o.kind != "under_arc"]
        arc_sites = [o.site for o in occs if o.kind == "under_arc"]
        assert crossing_sites == sorted(crossing_sites)
        assert arc_sites == sorted(arc_sites)
        assert kinds == sorted(kinds, key=["monochrome_crossing", "over_arc",
                                           "under_arc"].index)


# -- elimination --------------------------------------------------------------


@pytest.fixture(scope="module")
def t2_17_colored():
    d = codec.builtin_corpus()["T(2,17)"].diagram()
    col = next(c for c in coloring.solve_colorings(d, 17).colorings()
               if not c.is_trivial())
    return d, col


def test_eliminate_first_color(t2_17_colored):
    d, col = t2_17_colored
    state = ReductionState(d, col)
    eliminate_color(state)
    assert 16 not in set(state.coloring.colors)
    assert coloring.count_colorings(state.diagram, 17) == 289
    assert coloring.validate_coloring(state.diagram, state.coloring)


def test_eliminate_rejects_trivial():
    d = codec.builtin_corpus()["T(2,17)"].diagram()
    col = coloring.FoxColoring(17, tuple([3] * 17))
    with pytest.raises(reduction.ReductionError, match="trivial"):
        eliminate_color(ReductionState(d, col))


def test_reduce_rejects_wrong_modulus():
    d = codec.builtin_corpus()["trefoil"].diagram()
    col = coloring.FoxColoring(3, (0, 1, 2))
    with pytest.raises(reduction.ReductionError, match="modulus"):
        reduce_to_six(d, col)


def test_reduce_is_identity_on_target_palette():
    # a trefoil-shaped diagram 17-colored inside the target palette:
    # constant colorings are trivial, so build a small valid example from
    # an already reduced state is overkill; use the unknot with one kink.
    d = codec.parse_pd("X(1,2,2,1)")
    col = coloring.FoxColoring(17, (4,))
    with pytest.raises(reduction.ReductionError, match="trivial"):
        reduce_to_six(d, col)


def test_local_search_impossible_goal(t2_17_colored):
    d, col = t2_17_colored
    with pytest.raises(reduction.ReductionError, match="exhausted") as ei:
        local_search(d, col, 16, forbidden=frozenset(range(17)),
                     depth_cap=2, node_cap=200)
    assert "nodes" in ei.value.stats
