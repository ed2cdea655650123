import random

import pytest
from hypothesis import given, settings, strategies as st

from flasque.cohom import h1, is_coflasque, is_flasque
from flasque.gmod import GModule, dual, random_module, sign_lattice, trivial_lattice
from flasque.groups import catalog_group, cyclic, subgroup_reps
from flasque.reductive import norm_one_characters, preset
from flasque.resolve import (ResolutionError, coflasque_resolution, compare_resolutions, dualize_resolution,
                             flasque_resolution)
from flasque.zlinalg import FiniteAbelianGroup as FAG, IntMatrix

GROUPS = ["C1", "C2", "C3", "C4", "V4", "S3", "C6", "D4", "Q8", "C2xC4"]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_resolutions_pass_their_audits(seed):
    rng = random.Random(seed)
    M = random_module(rng, catalog_group(rng.choice(GROUPS)), 5)
    r = coflasque_resolution(M)
    assert all(r.audit().values())
    assert r.right is M
    f = flasque_resolution(M)
    assert all(f.audit().values())


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_constructions_agree_on_flasque_invariants(seed):
    rng = random.Random(seed)
    M = random_module(rng, catalog_group(rng.choice(GROUPS)), 4)
    r1 = coflasque_resolution(M)
    for r2 in (coflasque_resolution(M, minimal=False), coflasque_resolution(M, seed=seed)):
        assert r2.audit()["exact"]
        assert compare_resolutions(r1, r2).consistent
    if M.group.order < 8:
        f1, f2 = flasque_resolution(M), flasque_resolution(M, seed=seed)
        assert compare_resolutions(f1, f2).consistent


def test_resolution_of_torsion_and_sign_modules():
    C2 = cyclic(2)
    for M in (GModule(C2, gen_mats=[IntMatrix([[1]])], relations=IntMatrix([[2]])),
              sign_lattice(C2, C2.trivial), trivial_lattice(C2)):
        r = coflasque_resolution(M)
        r.audit()
        assert is_coflasque(r.left).holds
        f = flasque_resolution(M)
        f.audit()
        assert is_flasque(f.middle).holds


def test_biquadratic_dual_sequence():
    G = catalog_group("V4")
    pi1 = dual(norm_one_characters(G))
    r = coflasque_resolution(pi1)
    four = dualize_resolution(r)
    assert all(four.audit().values())
    assert four.mu.abelian.is_trivial
    assert h1(G.whole, four.S).group == FAG((2,))


def test_dual_sequence_with_finite_kernel():
    four = dualize_resolution(coflasque_resolution(preset("PGL", n=3).pi1()))
    four.audit()
    assert four.mu.abelian == FAG((3,))
    assert four.m_star().abelian == FAG((), 0) or four.m_star().rank >= 0


def test_mismatched_comparisons_are_rejected():
    C2 = cyclic(2)
    a = coflasque_resolution(trivial_lattice(C2))
    b = coflasque_resolution(trivial_lattice(C2))
    with pytest.raises(ResolutionError):
        compare_resolutions(a, b)
    with pytest.raises(ResolutionError):
        dualize_resolution(flasque_resolution(trivial_lattice(C2)))


def test_json_of_a_resolution():
    js = coflasque_resolution(sign_lattice(cyclic(2), cyclic(2).trivial)).to_json()
    assert js["kind"] == "coflasque"
    assert {"left", "middle", "right", "inclusion", "projection"} <= set(js)
