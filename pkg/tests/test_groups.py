from collections import Counter

import pytest

from flasque.groups import (SMALL_GROUPS, FiniteGroup, GroupError, Subgroup, brute_force_subgroups, catalog_group,
                            coset_permutation_action, cyclic_subgroup_reps, parse_permutation, subgroup_reps)

# number of groups of each order up to 16
GROUP_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5, 13: 1, 14: 2,
                15: 1, 16: 14}


def test_catalog_covers_every_small_order():
    orders = Counter(catalog_group(n).order for n in SMALL_GROUPS)
    assert dict(orders) == GROUP_COUNTS


def _fingerprint(G):
    elem_orders = Counter(G.element_order(g) for g in range(G.order))
    return (G.order, G.is_abelian(), tuple(sorted(elem_orders.items())), len(G.all_subgroups),
            len(subgroup_reps(G)))


def test_catalog_groups_are_pairwise_non_isomorphic():
    prints = [_fingerprint(catalog_group(n)) for n in SMALL_GROUPS]
    assert len(set(prints)) == len(prints)


@pytest.mark.parametrize("name,count", [("V4", 5), ("S3", 6), ("D4", 10), ("Q8", 6), ("A4", 10), ("C2^3", 16),
                                        ("D6", 16), ("Dic3", 8), ("C2^4", 67)])
def test_subgroup_counts(name, count):
    assert len(catalog_group(name).all_subgroups) == count


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "C2xC4", "D5", "Dic3"])
def test_subgroup_enumeration_matches_brute_force(name):
    G = catalog_group(name)
    assert set(G.all_subgroups) == brute_force_subgroups(G)


def test_group_axioms_and_tables():
    for name in ("S3", "Q8", "SD16", "Pauli"):
        G = catalog_group(name)
        t = G.table
        for a in range(G.order):
            assert t[a][G.inverses[a]] == 0
            assert t[0][a] == a
        for a, b, c in [(1, 2, 3), (2, 3, 1), (G.order - 1, 1, 2)]:
            assert t[t[a][b]][c] == t[a][t[b][c]]


def test_permutation_parsing():
    assert parse_permutation("(1 2)(3 4)") == (1, 0, 3, 2)
    assert parse_permutation([2, 3, 1]) == (1, 2, 0)
    assert parse_permutation("()", degree=2) == (0, 1)
    with pytest.raises(GroupError):
        parse_permutation([1, 1, 2])
    with pytest.raises(GroupError):
        parse_permutation("1 2")


def test_group_from_permutations_and_order_cap():
    G = FiniteGroup({"a": "(1 2 3 4)", "b": "(1 3)"}, name="D4")
    assert G.order == 8
    with pytest.raises(GroupError):
        FiniteGroup({"a": "(1 2 3 4 5 6)", "b": "(1 2)"}, order_cap=100)


def test_group_from_matrices():
    G = FiniteGroup({"r": [[0, -1], [1, 0]]})
    assert G.order == 4 and G.kind == "mat"
    with pytest.raises(GroupError):
        FiniteGroup({"r": [[2, 0], [0, 1]]})


def test_catalog_aliases():
    assert catalog_group("Z2").order == 2
    assert catalog_group("Z/4").order == 4
    assert catalog_group("C2xC2").name == "V4"
    with pytest.raises(GroupError):
        catalog_group("nope")


def test_subgroup_reps_and_cosets():
    G = catalog_group("S3")
    reps = subgroup_reps(G)
    assert [h.order for h in reps] == [1, 2, 3, 6]
    assert [h.order for h in cyclic_subgroup_reps(G)] == [1, 2, 3]
    h = reps[1]
    cosets, perms = coset_permutation_action(G, h)
    assert len(cosets) == 3 and cosets[0] == h.elements
    assert all(sorted(p) == [0, 1, 2] for p in perms)


def test_spanning_tree_reaches_every_element():
    G = catalog_group("C2xQ8")
    for hs in G.all_subgroups:
        h = Subgroup(G, hs)
        order, parent = h.tree()
        assert sorted(order) == sorted(h.elements) and order[0] == 0
        for g in order[1:]:
            k, p = parent[g]
            assert G.table[h.generators[k]][p] == g
