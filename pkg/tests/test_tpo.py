import itertools

import pytest

from beliefchange.exceptions import EmptyModelSetError, PartitionError
from beliefchange.lang import Conditional, models, parse_formula, parse_world
from beliefchange.operators import Revision, revise
from beliefchange.tpo import (
    Absurd,
    InputRel,
    agrees_on,
    beliefs,
    conditional_holds,
    conditional_set,
    count_tpos,
    enumerate_a_preserving_isos,
    enumerate_tpos,
    flatter_eq,
    format_tpo,
    input_cmp,
    min_worlds,
    parse_tpo,
    propositions,
    tpo_at_index,
    tpo_from_partition,
)

ATOMS = ("p", "q")


def mod(text):
    return models(parse_formula(text, ATOMS), ATOMS)


def w(name):
    return parse_world(name, 2)


M0 = parse_tpo("00 | 11 | 01 10", 2)
FLAT = parse_tpo("00 01 10 11", 2)
CHAIN = parse_tpo("00 | 01 | 10 | 11", 2)


# ---------------------------------------------------------------------------
# Construction and text form


def test_partition_ranks():
    t = tpo_from_partition([{w("00")}, {w("11")}, {w("01"), w("10")}], 2)
    assert t.rank[w("00")] == 1
    assert t.rank[w("11")] == 2
    assert t.rank[w("01")] == 3 and t.rank[w("10")] == 3


def test_overlapping_cells_rejected():
    with pytest.raises(PartitionError):
        tpo_from_partition([{w("00")}, {w("00"), w("11")}], 2)


def test_missing_worlds_rejected():
    with pytest.raises(PartitionError):
        tpo_from_partition([{w("00")}, {w("11")}], 2)


def test_empty_cell_and_unknown_world_rejected():
    with pytest.raises(PartitionError):
        tpo_from_partition([frozenset(), {0, 1, 2, 3}], 2)
    with pytest.raises(PartitionError):
        tpo_from_partition([{0, 1, 2, 3, 4}], 2)


def test_text_form_round_trips_every_tpo():
    for t in enumerate_tpos(2):
        assert parse_tpo(format_tpo(t), 2) == t


def test_text_form_sorts_worlds_ascending():
    assert format_tpo(parse_tpo("11 | 10 01 | 00", 2)) == "11 | 01 10 | 00"


def test_rank_is_surjective_onto_cell_indices():
    for t in enumerate_tpos(2):
        assert set(t.rank) == set(range(1, len(t.cells) + 1))


# ---------------------------------------------------------------------------
# Minimisation, agreement, input order


def test_min_worlds_picks_best_input_world():
    assert min_worlds(M0, mod("p")) == {w("11")}


def test_min_worlds_of_everything_is_first_cell():
    for t in itertools.islice(enumerate_tpos(2), 20):
        assert min_worlds(t, t.world_set) == t.cells[0]


def test_min_worlds_rejects_empty_selection():
    with pytest.raises(EmptyModelSetError):
        min_worlds(M0, frozenset())


def test_agrees_on_is_reflexive():
    assert agrees_on(M0, M0, w("01"), w("10"))


def test_lexicographic_revision_breaks_agreement_on_tied_pair():
    revised = revise(M0, mod("p"), Revision.LEXICOGRAPHIC)
    assert format_tpo(revised) == "11 | 10 | 00 | 01"
    assert not agrees_on(M0, revised, w("01"), w("10"))


def test_swapping_other_cells_keeps_agreement_on_tie():
    swapped = parse_tpo("11 | 00 | 01 10", 2)
    assert agrees_on(M0, swapped, w("01"), w("10"))


def test_input_cmp_classifies_all_three_situations():
    p = mod("p")
    assert input_cmp(p, w("10"), w("01")) is InputRel.STRICTLY_BELOW
    assert input_cmp(p, w("11"), w("10")) is InputRel.TIED
    assert input_cmp(p, w("00"), w("01")) is InputRel.TIED
    assert input_cmp(p, w("01"), w("10")) is InputRel.STRICTLY_ABOVE


# ---------------------------------------------------------------------------
# Flatness order


def test_flatter_eq_reflexive_on_examples():
    assert flatter_eq(M0, M0)


def test_single_cell_is_flattest():
    assert flatter_eq(FLAT, M0)
    assert not flatter_eq(M0, FLAT)


def test_flatter_eq_is_a_partial_order():
    pool = list(enumerate_tpos(2))
    for t in pool:
        assert flatter_eq(t, t)
    for t1 in pool:
        for t2 in pool:
            if flatter_eq(t1, t2) and flatter_eq(t2, t1):
                assert t1 == t2
    sample = pool[::3]
    for t1 in sample:
        for t2 in sample:
            if not flatter_eq(t1, t2):
                continue
            for t3 in sample:
                if flatter_eq(t2, t3):
                    assert flatter_eq(t1, t3)


# ---------------------------------------------------------------------------
# Enumeration


def _brute_force_ordered_partition_count(n_elements):
    # Independent oracle: canonical cell-index assignments, i.e. maps onto
    # a prefix 0..k-1 of cell indices, counted directly.
    count = 0
    for assignment in itertools.product(range(n_elements), repeat=n_elements):
        used = set(assignment)
        if used == set(range(len(used))):
            count += 1
    return count if n_elements else 1


def test_enumeration_counts_match_brute_force():
    assert count_tpos(1) == _brute_force_ordered_partition_count(2) == 3
    assert count_tpos(2) == _brute_force_ordered_partition_count(4) == 75
    assert sum(1 for _ in enumerate_tpos(1)) == 3
    assert sum(1 for _ in enumerate_tpos(2)) == 75


def test_enumeration_has_no_duplicates():
    seen = set()
    for t in enumerate_tpos(2):
        assert t not in seen
        seen.add(t)
    assert len(seen) == 75


def test_three_atom_count():
    assert count_tpos(3) == 545835
    assert sum(1 for _ in enumerate_tpos(3)) == 545835


def test_unranking_matches_enumeration():
    for index, t in enumerate(enumerate_tpos(2)):
        assert tpo_at_index(index, 2) == t
    with pytest.raises(IndexError):
        tpo_at_index(75, 2)
    for index in (0, 1, 75, 12345, 545834):
        tpo_at_index(index, 3)  # does not raise
    with pytest.raises(IndexError):
        tpo_at_index(545835, 3)


def test_propositions_are_all_nonempty_world_sets():
    props = propositions(2)
    assert len(props) == 15
    assert frozenset() not in props
    assert len(set(props)) == 15


# ---------------------------------------------------------------------------
# Input-preserving isomorphisms


def _brute_force_isos(t1, t2, sentence):
    out = []
    worlds = sorted(t1.world_set)
    for perm in itertools.permutations(worlds):
        if all(
            (t1.rank[x] <= t1.rank[y]) == (t2.rank[perm[x]] <= t2.rank[perm[y]])
            for x in worlds
            for y in worlds
        ) and all(
            ((x in sentence) or (y not in sentence))
            == ((perm[x] in sentence) or (perm[y] not in sentence))
            for x in worlds
            for y in worlds
        ):
            out.append(perm)
    return out


def test_identity_is_always_an_isomorphism_for_tautology():
    for t in itertools.islice(enumerate_tpos(2), 10):
        assert (0, 1, 2, 3) in enumerate_a_preserving_isos(t, t, mod("true"))


def test_mixed_cell_pins_the_isomorphism():
    assert enumerate_a_preserving_isos(M0, M0, mod("p")) == [(0, 1, 2, 3)]


def test_different_cell_profiles_admit_no_isomorphism():
    assert enumerate_a_preserving_isos(CHAIN, FLAT, mod("p")) == []


def test_isomorphisms_match_brute_force_oracle():
    pool = list(enumerate_tpos(2))
    inputs = (mod("p"), mod("p & q"), mod("p | q"), mod("true"))
    for t1 in pool[::11]:
        for t2 in pool[::13]:
            for sentence in inputs:
                fast = set(enumerate_a_preserving_isos(t1, t2, sentence))
                assert fast == set(_brute_force_isos(t1, t2, sentence))


# ---------------------------------------------------------------------------
# Beliefs and conditional beliefs


def test_beliefs_of_examples():
    assert beliefs(M0) == {w("00")}
    assert beliefs(FLAT) == M0.world_set
    assert beliefs(Absurd(2)) == frozenset()


def cond(a, b):
    return Conditional(parse_formula(a, ATOMS), parse_formula(b, ATOMS))


def test_conditional_holds_examples():
    assert conditional_holds(M0, cond("p", "q"), ATOMS)
    assert conditional_holds(M0, cond("true", "~p & ~q"), ATOMS)
    assert not conditional_holds(M0, cond("p", "~q"), ATOMS)
    assert conditional_holds(M0, cond("false", "q"), ATOMS)  # vacuous


def test_conditional_set_determines_the_preorder():
    pool = list(enumerate_tpos(2))
    table = {}
    for t in pool:
        cs = conditional_set(t)
        key = (cs.plain_models, cs.cond_pairs)
        assert key not in table
        table[key] = t
    assert len(table) == 75


def test_flat_conditional_set_maps_every_antecedent_to_itself():
    cs = conditional_set(FLAT)
    assert all(p == q for p, q in cs.cond_pairs)


def test_m0_conditional_set_contains_expected_members():
    from beliefchange.lang import cn_extended_member

    cs = conditional_set(M0)
    assert cn_extended_member(cs, cond("true", "~p"), ATOMS)
    assert cn_extended_member(cs, cond("p", "q"), ATOMS)
    assert not cn_extended_member(cs, cond("p", "~q"), ATOMS)


def test_minimal_input_worlds_survive_natural_revision():
    for t in itertools.islice(enumerate_tpos(2), 25):
        for p in propositions(2):
            assert min_worlds(t, p) <= revise(t, p, Revision.NATURAL).cells[0]


def test_enumeration_is_capped_at_three_atoms():
    with pytest.raises(ValueError):
        next(enumerate_tpos(4))
    with pytest.raises(ValueError):
        tpo_at_index(0, 4)
