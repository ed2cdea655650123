"""Seeded verification suites shared by the command line and the test-suite.

Every suite returns a dict of named checks.  A check is a dict with at least
``holds`` (bool) and ``cases`` (int); failures carry short descriptions.
Nothing here records wall-clock time, so output depends only on the seed.
"""

from __future__ import annotations

import random

from .cohom import CohomologyResult, h1, sha1_omega_qz_dual
from .complexes import borovoi_vs_resolution, random_nine_diagram, splice, torus_nine_diagram
from .gmod import (ModuleError, direct_sum, dual, permutation_module, quotient, random_module, sign_lattice,
                   trivial_lattice)
from .groups import SMALL_GROUPS, Subgroup, catalog_group, cyclic, subgroup_reps
from .reductive import (ReductiveDatum, brauer_nr, catalog, exact_sequences, local_h1, mu_minus_one, pi1_routes,
                        pic_group, preset, root_orthogonal_rank)
from .resolve import ResolutionError, coflasque_resolution, compare_resolutions, flasque_resolution
from .zlinalg import FiniteAbelianGroup, IntMatrix

SUITES = ("resolutions", "brauer", "appendixA", "pic")

# noncyclic groups get extra weight so that nonzero Sha groups actually occur
_NONCYCLIC_SMALL = ("V4", "S3", "D4", "Q8", "C2xC4", "C2^3", "A4", "D6", "C2xC6")


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{tag}:{seed}")


def _groups_up_to(order: int) -> list[str]:
    return [n for n in SMALL_GROUPS if catalog_group(n).order <= order]


def _check(cases: int, failures: list, **extra) -> dict:
    return {"holds": not failures, "cases": cases, "failures": failures[:10], **extra}


def _random_cases(seed: int, tag: str, count: int, max_order: int, noncyclic_bias: bool = False,
                  max_rank: int = 6):
    rng = _rng(seed, tag)
    names = _groups_up_to(max_order)
    for i in range(count):
        if noncyclic_bias and rng.random() < 0.5:
            name = rng.choice([n for n in _NONCYCLIC_SMALL if catalog_group(n).order <= max_order])
        else:
            name = rng.choice(names)
        G = catalog_group(name)
        M = random_module(rng, G, max_rank)
        if noncyclic_bias and rng.random() < 0.35:
            # dual of a norm-one lattice J_{G/h}, plus the random summand when it fits
            h = rng.choice([k for k in subgroup_reps(G) if 1 < k.index <= max_rank])
            E = permutation_module(G, [h])
            J = quotient(E, IntMatrix.from_columns([[1] * E.rank], E.rank))[0].normalize()
            M = dual(J) if M.rank + J.rank > max_rank else direct_sum(dual(J), M)
        yield i, name, M


# ---------------------------------------------------------------------------
# Cohomology oracles
# ---------------------------------------------------------------------------

def check_cohomology_oracles(max_order: int = 16) -> dict:
    out = {}
    C2 = cyclic(2)
    v = h1(C2.whole, sign_lattice(C2, C2.trivial)).group
    out["h1_sign_lattice"] = _check(1, [] if v == FiniteAbelianGroup([2]) else [str(v)], value=str(v))
    fails = []
    for n in range(1, 9):
        G = cyclic(n)
        v = CohomologyResult(G.whole, trivial_lattice(G, 1), 2).group
        if v != FiniteAbelianGroup.from_orders([n]):
            fails.append(f"n={n}: {v}")
    out["h2_cyclic_trivial"] = _check(8, fails)
    fails, cases = [], 0
    for name in _groups_up_to(max_order):
        G = catalog_group(name)
        reps = subgroup_reps(G)
        for k in reps:
            P = permutation_module(G, [k])
            for hs in G.all_subgroups:
                h = Subgroup(G, hs)
                cases += 1
                v = h1(h, P).group
                if not v.is_trivial:
                    fails.append(f"{name}: |h|={h.order}, |k|={k.order}: {v}")
    out["h1_permutation_vanishes"] = _check(cases, fails)
    return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_resolutions(seed: int, count: int = 100, compare_count: int = 20) -> dict:
    out = {}
    fails = []
    for i, name, M in _random_cases(seed, "audit", count, 16):
        for kind, make in (("coflasque", coflasque_resolution), ("flasque", flasque_resolution)):
            try:
                make(M).audit()
            except (ResolutionError, ModuleError) as exc:
                fails.append(f"case {i} over {name}, {kind}: {exc}")
    out["resolution_audits"] = _check(count, fails)

    fails, distinct = [], 0
    for i, name, M in _random_cases(seed, "compare", compare_count, 12, noncyclic_bias=True):
        r1 = coflasque_resolution(M)
        r2 = coflasque_resolution(M, minimal=False)
        distinct += r1.middle.rank != r2.middle.rank or r1.projection.matrix != r2.projection.matrix
        if not compare_resolutions(r1, r2).consistent:
            fails.append(f"case {i} over {name}")
    out["resolution_independence"] = _check(compare_count, fails, distinct_constructions=distinct)
    out.update(check_cohomology_oracles())
    return out


def suite_brauer(seed: int, count: int = 50) -> dict:
    out = {}
    fails, cases, nonzero = [], 0, 0
    inputs = [(d.label, d.group, d.pi1()) for d in catalog()]
    inputs += [(f"random {i} over {name}", M.group, M)
               for i, name, M in _random_cases(seed, "brauer", count, 12, noncyclic_bias=True, max_rank=12)]
    for label, G, M in inputs:
        cases += 1
        S = coflasque_resolution(M).left
        a = h1(G.whole, dual(S)).group
        b = sha1_omega_qz_dual(G, M)
        nonzero += not a.is_trivial
        if a != b:
            fails.append(f"{label}: {a} vs {b}")
    out["flasque_h1_vs_sha1"] = _check(cases, fails, nonzero_cases=nonzero)

    fails, values = [], {}
    for d in catalog():
        if not d.label.startswith("torus"):
            continue
        br = brauer_nr(d)
        values[d.label] = str(br["route_h1_flasque"])
        if not br["agree"]:
            fails.append(d.label)
    expect = {"torus_norm_one[C2]": "0", "torus_norm_one[C4]": "0", "torus_norm_one[V4]": "Z/2"}
    for k, v in expect.items():
        if values.get(k) != v:
            fails.append(f"{k}: expected {v}, got {values.get(k)}")
    out["torus_brauer_oracle"] = _check(len(values), fails, values=values)
    return out


def suite_appendix_a(seed: int, count: int = 50) -> dict:
    out = {}
    rng = _rng(seed, "diagrams")
    fails = []
    for i in range(count):
        r = splice(random_nine_diagram(rng))
        if not r.holds:
            fails.append(f"diagram {i}: {r.to_json()}")
    out["random_splices"] = _check(count, fails)
    d = preset("torus_norm_one", group="V4")
    r = splice(torus_nine_diagram(coflasque_resolution(d.pi1())))
    out["torus_diagram_splice"] = _check(1, [] if r.holds else [str(r.to_json())], verdict=r.to_json())
    fails, cases = [], 0
    for d in catalog():
        cases += 1
        v = borovoi_vs_resolution(d.root_datum)
        if not v["quasi_isomorphism"]:
            fails.append(d.label)
    out["coroot_complex_vs_resolution"] = _check(cases, fails)
    return out


def suite_pic(seed: int, count: int = 30) -> dict:
    out = {}
    fails = []
    cat = catalog()
    for d in cat:
        if not pi1_routes(d)["agree"]:
            fails.append(d.label)
    out["pi1_two_routes"] = _check(len(cat), fails)

    inputs = list(cat) + [ReductiveDatum(f"random {i} over {name}", M.group, direct_pi1=M)
                          for i, name, M in _random_cases(seed, "pic", count, 16)]
    fails = []
    for d in inputs:
        p = pic_group(d)
        loc = local_h1(d)
        if not (p["agree"] and loc == p["route_coinvariants"]):
            fails.append(f"{d.label}: {p['route_invariants']} / {p['route_coinvariants']} / {loc}")
    values = {}
    for n in (2, 3, 4, 6):
        v = pic_group(preset("PGL", n=n))["route_invariants"]
        values[f"PGL{n}"] = str(v)
        if v != FiniteAbelianGroup.from_orders([n]):
            fails.append(f"PGL{n}: {v}")
    out["pic_triangle"] = _check(len(inputs) + 4, fails, values=values)

    fails = []
    for d in cat:
        rd = d.root_datum
        A = d.pi1().abelian
        if mu_minus_one(rd).abelian != A.torsion() or root_orthogonal_rank(rd) != A.free_rank:
            fails.append(d.label)
    out["torsion_and_rank"] = _check(len(cat), fails)

    fails = []
    for n in (2, 3, 4):
        res = exact_sequences(n)
        fails += [f"n={n}: {k}" for k, v in res.items() if not v]
    out["gl_sequences_exact"] = _check(3, fails)
    return out


_RUNNERS = {"resolutions": suite_resolutions, "brauer": suite_brauer, "appendixA": suite_appendix_a,
            "pic": suite_pic}


def run_suite(name: str, seed: int = 0) -> dict:
    """Run one named suite (or ``"all"``); returns {suite: {check: result}}."""
    names = SUITES if name == "all" else (name,)
    unknown = [n for n in names if n not in _RUNNERS]
    if unknown:
        raise KeyError(f"unknown suite {unknown[0]!r}")
    return {n: _RUNNERS[n](seed) for n in names}


def all_hold(results: dict) -> bool:
    return all(c["holds"] for checks in results.values() for c in checks.values())
