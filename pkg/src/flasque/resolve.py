"""Coflasque and flasque resolutions of finitely generated G-modules.

A coflasque resolution 0 -> S -> P -> M -> 0 has P a permutation lattice
and S coflasque; it is built by evaluation: for each subgroup h, coset
lattices Z[G/h] are mapped onto generators of the invariants M^h.  Dualizing
gives the four-term sequence 0 -> T* -> P* -> S* -> mu* -> 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cohom import CohomologyResult, is_coflasque, is_flasque
from .gmod import (
    GModule,
    GModuleMap,
    ModuleError,
    as_lattice,
    direct_sum,
    dual,
    finite_dual,
    is_exact_at,
    is_short_exact,
    permutation_module,
    submodule,
    torsion_free_split,
)
from .groups import Subgroup, coset_permutation_action, subgroup_reps
from .zlinalg import (
    FiniteAbelianGroup,
    IntMatrix,
    Subquotient,
    hstack,
    image_basis,
    kernel_basis,
    vstack,
)


class ResolutionError(ValueError):
    pass


@dataclass
class Resolution:
    """0 -> left -> middle -> right -> 0."""

    kind: str
    left: GModule
    middle: GModule
    right: GModule
    inclusion: GModuleMap
    projection: GModuleMap

    def audit(self) -> dict:
        """Exactness and the class conditions on the ends; raises on failure."""
        out = {"exact": is_short_exact(self.inclusion, self.projection)}
        if self.kind == "coflasque":
            v = is_coflasque(self.left)
            out["left_coflasque"] = v.holds
            out["middle_permutation_certificate"] = self.middle.certificate is not None
        else:
            v = is_flasque(self.middle)
            out["middle_flasque"] = v.holds
            out["left_permutation_certificate"] = self.left.certificate is not None
        bad = [k for k, x in out.items() if not x]
        if bad:
            raise ResolutionError(f"{self.kind} resolution failed audit: {', '.join(bad)}")
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "left": self.left.to_json(),
            "middle": self.middle.to_json(),
            "right": self.right.to_json(),
            "middle_blocks": [h.order for h in self.middle.certificate] if self.middle.certificate else None,
            "left_blocks": [h.order for h in self.left.certificate] if self.left.certificate else None,
            "inclusion": self.inclusion.matrix.tolist(),
            "projection": self.projection.matrix.tolist(),
        }


# ---------------------------------------------------------------------------
# Coflasque resolutions
# ---------------------------------------------------------------------------

def _orbit_sums(G, block_h: Subgroup, h: Subgroup) -> list[list[int]]:
    """h-orbit sums of the cosets G/block_h, as 0/1 vectors on that block."""
    cosets, perms = coset_permutation_action(G, block_h)
    seen = set()
    out = []
    for c in range(len(cosets)):
        if c in seen:
            continue
        orb = {perms[g][c] for g in h.elements}
        seen |= orb
        out.append([int(i in orb) for i in range(len(cosets))])
    return out


def _evaluation_columns(G, N: GModule, block_h: Subgroup, v: list[int]) -> list[list[int]]:
    cosets, _ = coset_permutation_action(G, block_h)
    cols = []
    for c in cosets:
        g = min(c)
        cols.append(N.mats[g].apply(v))
    return cols


def coflasque_resolution(M: GModule, minimal: bool = True, seed: int | None = None) -> Resolution:
    """0 -> S -> P -> M -> 0 with P a permutation lattice and S coflasque.

    With ``minimal`` (the default) a coset block is added only for invariants
    not already reached; otherwise every canonical generator of every M^h
    gets a block.  A ``seed`` shuffles the subgroup order and twists the
    choice of generators, giving a genuinely different resolution.
    """
    G = M.group
    norm = M.normal_form
    N = norm.module
    n = N.rank
    d = N.moduli
    rng = random.Random(seed) if seed is not None else None
    reps = list(reversed(subgroup_reps(G)))
    if rng:
        rng.shuffle(reps)
    blocks: list[tuple[Subgroup, list[int]]] = []
    for h in reps:
        H0 = CohomologyResult(h, N, 0)
        sq = H0._sq
        k = sq.ngens
        if k == 0:
            continue
        if not minimal:
            gens = sq.generators()
            if rng:
                gens = _twist(gens, sq.moduli, rng)
            for v in gens:
                blocks.append((h, v))
            continue
        # image of P^h in M^h, in canonical coordinates of M^h
        img = []
        for bh, v in blocks:
            evals = _evaluation_columns(G, N, bh, v)
            for s in _orbit_sums(G, bh, h):
                w = [sum(x * c[i] for x, c in zip(s, evals)) for i in range(n)]
                img.append(sq.coords(w))
        rel = [[m if i == j else 0 for i in range(k)] for j, m in enumerate(sq.moduli) if m]
        cols = img + rel
        quot = Subquotient(IntMatrix.identity(k), IntMatrix.from_columns(cols, k) if cols else IntMatrix.zeros(k, 0))
        qgens = quot.generators()
        if rng:
            qgens = _twist(qgens, [], rng) if qgens else qgens
            shifted = []
            for c in qgens:
                coef = [rng.randint(-1, 1) for _ in img]
                shifted.append([a + sum(q * col[i] for q, col in zip(coef, img)) for i, a in enumerate(c)])
            qgens = shifted
        base = sq.generators()
        for c in qgens:
            v = [sum(a * g[i] for a, g in zip(c, base)) for i in range(n)]
            blocks.append((h, [x % m if m else x for x, m in zip(v, d)]))
    if not blocks:
        P = permutation_module(G, [])
        E = IntMatrix.zeros(n, 0)
    else:
        P = permutation_module(G, [bh for bh, _ in blocks])
        cols = []
        for bh, v in blocks:
            cols.extend(_evaluation_columns(G, N, bh, v))
        E = IntMatrix.from_columns(cols, n)
    p = P.rank
    aug = hstack(E, N.relations)
    Z = kernel_basis(aug).select_rows(range(p)) if aug.ncols else IntMatrix.zeros(0, 0)
    Sgens = image_basis(Z) if Z.ncols else IntMatrix.zeros(p, 0)
    S, inc = submodule(P, Sgens, closed=True)
    proj = GModuleMap(P, M, norm.from_normal @ E if p else IntMatrix.zeros(M.rank, 0), check=False)
    return Resolution("coflasque", S, P, M, inc, proj)


def _twist(gens: list[list[int]], moduli: list[int], rng: random.Random) -> list[list[int]]:
    """Replace a generating list by another one via a random unimodular change."""
    k = len(gens)
    g = [list(v) for v in gens]
    for _ in range(2 * k):
        i, j = rng.randrange(k), rng.randrange(k)
        if i != j:
            q = rng.choice((-1, 1))
            g[i] = [a + q * b for a, b in zip(g[i], g[j])]
    return g


# ---------------------------------------------------------------------------
# Flasque resolutions
# ---------------------------------------------------------------------------

def flasque_resolution(M: GModule, seed: int | None = None) -> Resolution:
    """0 -> P -> F -> M -> 0 with P a permutation lattice and F flasque.

    Built as a pushout: a coflasque resolution 0 -> N -> P0 -> M -> 0,
    an embedding N -> P1 with flasque cokernel (the dual of a coflasque
    resolution of Hom(N, Z)), and F = (P1 + P0) / {(i(x), -x)}.
    """
    G = M.group
    r0 = coflasque_resolution(M, seed=seed)
    N, P0 = r0.left, r0.middle
    r1 = coflasque_resolution(dual(N), seed=seed)
    P1 = dual(r1.middle)
    iota = r1.projection.matrix.T  # N -> P1
    j = r0.inclusion.matrix       # N -> P0
    a, b = P1.rank, P0.rank
    W = direct_sum(P1, P0)
    anti = vstack(iota, -j) if N.rank else IntMatrix.zeros(a + b, 0)
    W_rel = GModule(G, mats=W.mats, relations=anti, check=False)
    norm = W_rel.normal_form
    F = norm.module
    if not F.is_lattice:
        raise ResolutionError("pushout is not torsion-free")
    emb = IntMatrix([list(r) for r in IntMatrix.identity(a).rows] + [[0] * a for _ in range(b)], a) \
        if a else IntMatrix.zeros(a + b, 0)
    inc = GModuleMap(P1, F, norm.to_normal @ emb, check=False)
    back = hstack(IntMatrix.zeros(M.rank, a), r0.projection.matrix)
    proj = GModuleMap(F, M, back @ norm.from_normal, check=False)
    return Resolution("flasque", P1, F, M, inc, proj)


# ---------------------------------------------------------------------------
# Dualization
# ---------------------------------------------------------------------------

@dataclass
class FourTermSequence:
    """0 -> T* -> P* -> S* -> mu* -> 0."""

    T: GModule
    P: GModule
    S: GModule
    mu: GModule
    t_to_p: GModuleMap
    p_to_s: GModuleMap
    s_to_mu: GModuleMap

    def audit(self) -> dict:
        out = {
            "injective_T": self.t_to_p.is_injective(),
            "exact_at_P": is_exact_at(self.t_to_p, self.p_to_s),
            "exact_at_S": is_exact_at(self.p_to_s, self.s_to_mu),
            "surjective_mu": self.s_to_mu.is_surjective(),
            "mu_finite": self.mu.abelian.is_finite,
        }
        bad = [k for k, x in out.items() if not x]
        if bad:
            raise ResolutionError(f"four-term sequence failed audit: {', '.join(bad)}")
        return out

    def m_star(self) -> GModule:
        """Cokernel of T* -> P*."""
        return self.t_to_p.cokernel()[0]


def dualize_resolution(res: Resolution) -> FourTermSequence:
    if res.kind != "coflasque":
        raise ResolutionError("dualization expects a coflasque resolution")
    G = res.right.group
    M = res.right
    split = torsion_free_split(M)
    norm = M.normal_form
    d = split.normalized.moduli
    tors_idx = [i for i, x in enumerate(d) if x]
    free_idx = [i for i, x in enumerate(d) if not x]
    Tstar = dual(split.free)
    Pstar = dual(res.middle)
    Sstar = dual(res.left)
    mu = finite_dual(split.torsion)
    # eval in normalized coordinates of M
    E = norm.to_normal @ res.projection.matrix
    Ef = E.select_rows(free_idx) if free_idx else IntMatrix.zeros(0, res.middle.rank)
    t_to_p = GModuleMap(Tstar, Pstar, Ef.T, check=True)
    p_to_s = GModuleMap(Pstar, Sstar, res.inclusion.matrix.T, check=True)
    # connecting map: lift torsion generators t_i to p_i, write d_i p_i in S-coordinates
    rows = []
    if tors_idx:
        from .zlinalg import LatticeSolver, solve_integer

        aug = hstack(E, split.normalized.relations)
        inc = res.inclusion.matrix
        Ssolve = LatticeSolver(inc)
        for i in tors_idx:
            target = [int(r == i) for r in range(E.nrows)]
            sol = solve_integer(aug, target)
            if not sol.solvable:
                raise ResolutionError("evaluation map is not surjective")
            p = sol.particular[:res.middle.rank]
            x = Ssolve.solve([d[i] * c for c in p])
            if x is None:
                raise ResolutionError("lifted torsion generator does not land in the kernel")
            rows.append([c % d[i] for c in x])
    s_to_mu = GModuleMap(Sstar, mu, IntMatrix(rows, Sstar.rank) if rows else IntMatrix.zeros(0, Sstar.rank),
                         check=True)
    return FourTermSequence(Tstar, Pstar, Sstar, mu, t_to_p, p_to_s, s_to_mu)


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    consistent: bool
    rows: list[dict] = field(default_factory=list)

    def to_json(self):
        return {"consistent": self.consistent, "subgroups": self.rows}


def compare_resolutions(r1: Resolution, r2: Resolution) -> ComparisonReport:
    """H^1 of the resolution's flasque end, subgroup by subgroup, for two resolutions of one module."""
    if r1.right is not r2.right:
        raise ResolutionError("resolutions of different modules")
    if r1.kind != r2.kind:
        raise ResolutionError("resolutions of different kinds")
    G = r1.right.group
    pick = (lambda r: dual(r.left)) if r1.kind == "coflasque" else (lambda r: r.middle)
    A, B = pick(r1), pick(r2)
    rows = []
    ok = True
    for h in subgroup_reps(G):
        a = CohomologyResult(h, A, 1).group
        b = CohomologyResult(h, B, 1).group
        rows.append({"subgroup_order": h.order, "first": str(a), "second": str(b)})
        ok &= a == b
    return ComparisonReport(ok, rows)
