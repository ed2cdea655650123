import random

import pytest
from hypothesis import given, settings, strategies as st

from flasque.cohom import (CohomologyError, CohomologyResult, LevelAudit, h0, h1, h2, is_coflasque, is_flasque,
                           is_permutation, sha1_omega_qz_dual, sha_omega)
from flasque.gmod import (GModule, direct_sum, dual, permutation_module, random_module, regular_lattice,
                          sign_lattice, trivial_lattice)
from flasque.groups import Subgroup, catalog_group, cyclic, subgroup_reps
from flasque.reductive import norm_one_characters
from flasque.zlinalg import FiniteAbelianGroup as FAG, IntMatrix

from oracles import bar_cohomology

SMALL = ["C1", "C2", "C3", "C4", "V4", "S3", "C6"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_generator_cohomology_matches_bar_resolution(seed):
    rng = random.Random(seed)
    G = catalog_group(rng.choice(SMALL))
    M = random_module(rng, G, 4)
    for h in subgroup_reps(G):
        for deg in (0, 1):
            assert CohomologyResult(h, M, deg).group == bar_cohomology(h, M, deg)
        if h.order <= 4 and M.rank <= 3:
            assert h2(h, M).group == bar_cohomology(h, M, 2)


def test_unit_values():
    C2 = cyclic(2)
    assert h1(C2.whole, sign_lattice(C2, C2.trivial)).group == FAG((2,))
    assert h0(C2.whole, sign_lattice(C2, C2.trivial)).group.is_trivial
    for n in range(1, 9):
        G = cyclic(n)
        assert h2(G.whole, trivial_lattice(G)).group == FAG.from_orders([n])
        assert h1(G.whole, trivial_lattice(G)).group.is_trivial
        assert h0(G.whole, trivial_lattice(G)).group == FAG((), 1)


@pytest.mark.parametrize("name", ["C4", "V4", "S3", "D4", "Q8", "C2xC4", "A4"])
def test_permutation_modules_have_no_h1(name):
    G = catalog_group(name)
    for k in subgroup_reps(G):
        P = permutation_module(G, [k])
        for hs in G.all_subgroups:
            assert h1(Subgroup(G, hs), P).group.is_trivial


def test_shapiro_in_degree_two():
    G = catalog_group("S3")
    for k in subgroup_reps(G):
        # H^2(G, Z[G/k]) = H^2(k, Z) = k^ab
        v = h2(G.whole, permutation_module(G, [k])).group
        assert v == {1: FAG(), 2: FAG((2,)), 3: FAG((3,)), 6: FAG((2,))}[k.order]


def test_cocycle_coordinates_round_trip():
    G = catalog_group("V4")
    M = dual(norm_one_characters(G))
    C = h1(G.whole, M)
    assert C.group == FAG((4,))
    reps = C.representatives()
    assert len(reps) == 1
    assert C.is_cocycle(reps[0])
    assert C.classify(reps[0]) == [1]
    doubled = [2 * x for x in reps[0]]
    assert C.classify(doubled) == [2]
    # restriction of the generator to a cyclic subgroup of order 2
    k = subgroup_reps(G)[1]
    r = C.restrict(reps[0], k)
    Ck = CohomologyResult(k, M, 1)
    assert Ck.is_cocycle(r)


def test_cohomology_rejects_bad_input():
    G, H = cyclic(2), cyclic(3)
    with pytest.raises(CohomologyError):
        CohomologyResult(G.whole, trivial_lattice(G), 3)
    with pytest.raises(CohomologyError):
        CohomologyResult(H.whole, trivial_lattice(G), 1)


# Sha^2_omega(G, J_G) is H^3(G, Z), the Schur multiplier, since cyclic groups have none
SCHUR = {"V4": FAG((2,)), "C2xC4": FAG((2,)), "D4": FAG((2,)), "Q8": FAG(), "S3": FAG(), "C3xC3": FAG((3,)),
         "C2^3": FAG((2, 2, 2)), "C4": FAG()}


@pytest.mark.parametrize("name", sorted(SCHUR))
def test_sha_of_norm_one_lattices_is_the_schur_multiplier(name):
    G = catalog_group(name)
    J = norm_one_characters(G)
    assert sha_omega(2, G, J) == SCHUR[name]
    assert sha1_omega_qz_dual(G, dual(J)) == SCHUR[name]


def test_sha_level_audit():
    G = catalog_group("V4")
    audit = []
    sha1_omega_qz_dual(G, dual(norm_one_characters(G)), audit)
    assert len(audit) == 1 and isinstance(audit[0], LevelAudit)
    assert audit[0].levels[0] == 4


def test_flasque_and_coflasque_verdicts():
    G = catalog_group("V4")
    J = norm_one_characters(G)
    assert is_coflasque(regular_lattice(G)).holds and is_flasque(regular_lattice(G)).holds
    v = is_coflasque(dual(J))
    assert not v.holds and v.witness is not None
    assert not is_flasque(J).holds
    C2 = cyclic(2)
    assert not is_coflasque(sign_lattice(C2, C2.trivial)).holds


def test_permutation_verdicts():
    G = cyclic(2)
    swap = GModule(G, gen_mats=[IntMatrix([[0, 1], [1, 0]])])
    # same lattice with a hidden basis
    hidden = GModule(G, gen_mats=[IntMatrix([[1, 0], [1, -1]])])
    assert is_permutation(regular_lattice(G)).status == "yes"
    assert is_permutation(swap).status == "yes"
    assert is_permutation(hidden).status == "yes"
    assert is_permutation(sign_lattice(G, G.trivial)).status == "no"
    V = catalog_group("V4")
    assert is_permutation(norm_one_characters(V)).status == "no"
    both = direct_sum(trivial_lattice(V), regular_lattice(V))
    assert is_permutation(both).status == "yes"
