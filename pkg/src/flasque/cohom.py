"""Low-degree group cohomology of G-modules, and the lattice predicates built on it.

Cochains are solved as integer (congruence) systems on a normalized
presentation of the module, so torsion coordinates are handled modulo
their orders.

* degree 0: invariant vectors modulo relations;
* degree 1: a crossed homomorphism is determined by its values on the
  generators of the subgroup; the remaining values are propagated along a
  spanning tree of the Cayley graph and the non-tree edges give the
  equations;
* degree 2: normalized cochains on (h - 1) x (h - 1); the cocycle identity
  is imposed for s running over the generators of h, which suffices for
  normalized cochains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Sequence

from .gmod import GModule, as_lattice, dual, hom_to_zmod, hom_to_zmod_inclusion
from .groups import FiniteGroup, Subgroup, cyclic_subgroup_reps, subgroup_reps
from .zlinalg import (
    FiniteAbelianGroup,
    IntMatrix,
    Subquotient,
    congruence_kernel,
    hstack,
    image_of_generators,
    kernel_basis,
    smith_normal_form,
)


class CohomologyError(ValueError):
    pass


def _stack_equations(rows: list[list[int]], moduli: list[int], nvars: int) -> IntMatrix:
    return IntMatrix(rows, nvars) if rows else IntMatrix.zeros(0, nvars)


class CohomologyResult:
    """H^i(h, M) as a subquotient of cochain space, with canonical coordinates.

    Cochains are integer vectors in the normalized coordinates of M:
    degree 0 uses one block of ``rank`` entries, degree 1 one block per
    generator of h, degree 2 one block per pair of non-identity elements.
    """

    def __init__(self, h: Subgroup, M: GModule, degree: int):
        if degree not in (0, 1, 2):
            raise CohomologyError(f"degree must be 0, 1 or 2, got {degree}")
        if h.parent is not M.group:
            raise CohomologyError("subgroup does not belong to the module's group")
        self.subgroup = h
        self.degree = degree
        self.module = N = M.normalize()
        self.moduli = N.moduli
        self.rank = N.rank
        G = N.group
        self._G = G
        if degree == 0:
            L, B = self._degree0()
        elif degree == 1:
            L, B = self._degree1()
        else:
            L, B = self._degree2()
        self._sq = Subquotient(L, B)
        self.group: FiniteAbelianGroup = self._sq.group

    # -- construction ------------------------------------------------
    def _rel_block(self, nblocks: int) -> IntMatrix:
        n, d = self.rank, self.moduli
        cols = []
        for b in range(nblocks):
            for i, x in enumerate(d):
                if x:
                    c = [0] * (n * nblocks)
                    c[b * n + i] = x
                    cols.append(c)
        return IntMatrix.from_columns(cols, n * nblocks) if cols else IntMatrix.zeros(n * nblocks, 0)

    def _degree0(self):
        n, d, mats = self.rank, self.moduli, self.module.mats
        rows, mods = [], []
        for s in self.subgroup.generators:
            m = mats[s]
            for i in range(n):
                rows.append([m[i, j] - (i == j) for j in range(n)])
                mods.append(d[i])
        A = _stack_equations(rows, mods, n)
        L = congruence_kernel(A, mods) if rows else IntMatrix.identity(n)
        self.nvars = n
        return L, self._rel_block(1)

    def _degree1(self):
        n, d, mats = self.rank, self.moduli, self.module.mats
        h = self.subgroup
        gens = h.generators
        k = len(gens)
        nv = n * k
        self.nvars = nv
        t = self._G.table
        order, parent = h.tree()
        # A[g] expresses f(g) as a matrix acting on the generator values
        zero = [[0] * nv for _ in range(n)]
        A = {0: zero}

        def reduce_rows(rows):
            return [[x % d[i] for x in r] if d[i] else r for i, r in enumerate(rows)]

        for g in order[1:]:
            kk, p = parent[g]
            rho = mats[gens[kk]]
            Ap = A[p]
            rows = []
            for i in range(n):
                ri = rho.rows[i]
                acc = [0] * nv
                acc[kk * n + i] = 1
                for j, c in enumerate(ri):
                    if c:
                        aj = Ap[j]
                        acc = [x + c * y for x, y in zip(acc, aj)]
                rows.append(acc)
            A[g] = reduce_rows(rows)
        self._values = A
        eq_rows, mods, seen = [], [], set()
        for g in order:
            for kk, s in enumerate(gens):
                u = t[s][g]
                if parent.get(u) == (kk, g):
                    continue
                rho = mats[s]
                for i in range(n):
                    acc = list(A[u][i])
                    acc[kk * n + i] -= 1
                    for j, c in enumerate(rho.rows[i]):
                        if c:
                            acc = [x - c * y for x, y in zip(acc, A[g][j])]
                    if d[i]:
                        acc = [x % d[i] for x in acc]
                    key = (tuple(acc), d[i])
                    if any(acc) and key not in seen:
                        seen.add(key)
                        eq_rows.append(acc)
                        mods.append(d[i])
        if eq_rows:
            L = congruence_kernel(IntMatrix(eq_rows, nv), mods)
        else:
            L = IntMatrix.identity(nv)
        cob = []
        for i in range(n):
            c = []
            for s in gens:
                m = mats[s]
                c.extend(m[r, i] - (r == i) for r in range(n))
            cob.append(c)
        B = IntMatrix.from_columns(cob, nv) if cob and nv else IntMatrix.zeros(nv, 0)
        return L, hstack(B, self._rel_block(k))

    def _degree2(self):
        n, d, mats = self.rank, self.moduli, self.module.mats
        h = self.subgroup
        t = self._G.table
        elems = [g for g in h.sorted_elements if g]
        e = len(elems)
        pos = {(a, b): (i * e + j) * n for i, a in enumerate(elems) for j, b in enumerate(elems)}
        self._pos2 = pos
        nv = e * e * n
        self.nvars = nv
        eq_rows, mods = [], []
        for s in h.generators:
            rho = mats[s]
            for a in elems:
                for b in elems:
                    sa, ab = t[s][a], t[a][b]
                    for i in range(n):
                        row = [0] * nv
                        for j, c in enumerate(rho.rows[i]):
                            if c:
                                row[pos[(a, b)] + j] += c
                        if sa:
                            row[pos[(sa, b)] + i] -= 1
                        if ab:
                            row[pos[(s, ab)] + i] += 1
                        row[pos[(s, a)] + i] -= 1
                        if d[i]:
                            row = [x % d[i] for x in row]
                        if any(row):
                            eq_rows.append(row)
                            mods.append(d[i])
        if eq_rows:
            L = congruence_kernel(IntMatrix(eq_rows, nv), mods)
        else:
            L = IntMatrix.identity(nv)
        # coboundaries of normalized 1-cochains: (a, b) -> a.phi(b) - phi(ab) + phi(a)
        cob = []
        for c in elems:
            for i in range(n):
                col = [0] * nv
                for a in elems:
                    for b in elems:
                        p = pos[(a, b)]
                        if b == c:
                            for r in range(n):
                                col[p + r] += mats[a][r, i]
                        if t[a][b] == c:
                            col[p + i] -= 1
                        if a == c:
                            col[p + i] += 1
                cob.append(col)
        B = IntMatrix.from_columns(cob, nv) if cob and nv else IntMatrix.zeros(nv, 0)
        return L, hstack(B, self._rel_block(e * e))

    # -- queries -----------------------------------------------------
    def representatives(self) -> list[list[int]]:
        """Cocycles lifting the canonical generators of the group."""
        return self._sq.generators()

    def classify(self, cochain: Sequence[int]) -> list[int]:
        """Canonical coordinates of a cocycle (torsion entries reduced)."""
        return self._sq.coords(cochain)

    def is_cocycle(self, cochain: Sequence[int]) -> bool:
        return self._sq.contains(cochain)

    def restrict(self, cochain: Sequence[int], k: Subgroup) -> list[int]:
        """Restriction of a cocycle of h to a subgroup k, in k's cochain layout."""
        n = self.rank
        if not k.elements <= self.subgroup.elements:
            raise CohomologyError("restriction target is not a subgroup of h")
        if self.degree == 0:
            return list(cochain)
        if self.degree == 1:
            vals = self.values(cochain)
            out = []
            for s in k.generators:
                out.extend(vals[s])
            return out
        out = []
        ks = [g for g in k.sorted_elements if g]
        for a in ks:
            for b in ks:
                p = self._pos2[(a, b)]
                out.extend(cochain[p:p + n])
        return out

    def values(self, cochain: Sequence[int]) -> dict[int, list[int]]:
        """All values g -> f(g) of a degree-1 cochain."""
        if self.degree != 1:
            raise CohomologyError("values() is defined for degree 1")
        out = {}
        for g, A in self._values.items():
            v = [sum(a * x for a, x in zip(row, cochain)) for row in A]
            out[g] = [x % m if m else x for x, m in zip(v, self.moduli)]
        return out

    def to_json(self) -> dict:
        return {"degree": self.degree, "subgroup_order": self.subgroup.order, "group": self.group.to_json()}


def h_i(h: Subgroup, M: GModule, i: int) -> CohomologyResult:
    return CohomologyResult(h, M, i)


def h0(h, M):
    return CohomologyResult(h, M, 0)


def h1(h, M):
    return CohomologyResult(h, M, 1)


def h2(h, M):
    return CohomologyResult(h, M, 2)


# ---------------------------------------------------------------------------
# Flasque / coflasque
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    holds: bool
    witness: Subgroup | None = None
    group: FiniteAbelianGroup | None = None

    def __bool__(self):
        return self.holds


def _h1_vanishes_everywhere(M: GModule) -> Verdict:
    for h in subgroup_reps(M.group):
        if h.order == 1:
            continue
        H = CohomologyResult(h, M, 1)
        if not H.group.is_trivial:
            return Verdict(False, h, H.group)
    return Verdict(True)


def is_coflasque(M: GModule) -> Verdict:
    """H^1(h, M) = 0 for every subgroup h."""
    return _h1_vanishes_everywhere(as_lattice(M))


def is_flasque(M: GModule) -> Verdict:
    """H^1(h, Hom(M, Z)) = 0 for every subgroup h."""
    return _h1_vanishes_everywhere(dual(M))


# ---------------------------------------------------------------------------
# Permutation lattices
# ---------------------------------------------------------------------------

@dataclass
class PermutationVerdict:
    status: str  # "yes", "no" or "unknown"
    subgroups: tuple[Subgroup, ...] | None = None
    basis: IntMatrix | None = None
    reason: str = ""

    def to_json(self):
        out = {"status": self.status, "reason": self.reason}
        if self.subgroups is not None:
            out["orbit_stabilizer_orders"] = [h.order for h in self.subgroups]
        return out


def _perm_character(G: FiniteGroup, h: Subgroup) -> list[int]:
    t = G.table
    cosets = []
    seen = set()
    for g in range(G.order):
        if g not in seen:
            c = frozenset(t[g][x] for x in h.elements)
            seen |= c
            cosets.append(min(c))
    return [sum(1 for c in cosets if t[G.inv(c)][t[g][c]] in h) for g in range(G.order)]


def _character_decompositions(G: FiniteGroup, chi: list[int], limit: int = 64) -> list[list[int]]:
    reps = subgroup_reps(G)
    chars = [_perm_character(G, h) for h in reps]
    sols: list[list[int]] = []
    coeff = [0] * len(reps)

    def rec(j, rest):
        if len(sols) >= limit:
            return
        if j == len(reps):
            if not any(rest):
                sols.append(list(coeff))
            return
        idx = reps[j].index
        k = 0
        r = rest
        while True:
            if all(x >= 0 for x in r):
                coeff[j] = k
                rec(j + 1, r)
            k += 1
            r = [a - b for a, b in zip(r, chars[j])]
            if r[0] < 0:
                break
        coeff[j] = 0

    rec(0, list(chi))
    return sols


def is_permutation(M: GModule, search_bound: int = 2, node_budget: int = 20000) -> PermutationVerdict:
    """Three-valued test for a G-stable Z-basis permuted by G."""
    if M.certificate is not None:
        return PermutationVerdict("yes", tuple(M.certificate), IntMatrix.identity(M.rank), "construction certificate")
    L = as_lattice(M)
    G = L.group
    for h in subgroup_reps(G):
        if h.order == 1:
            continue
        for name, N in (("H1(h, M)", L), ("H1(h, dual M)", dual(L))):
            H = CohomologyResult(h, N, 1)
            if not H.group.is_trivial:
                return PermutationVerdict("no", reason=f"{name} = {H.group} for a subgroup of order {h.order}")
    chi = [sum(L.mats[g][i, i] for i in range(L.rank)) for g in range(G.order)]
    decs = _character_decompositions(G, chi)
    if not decs:
        return PermutationVerdict("no", reason="rational character is not a permutation character")
    reps = subgroup_reps(G)
    budget = [node_budget]
    for dec in decs:
        slots = [reps[j] for j, a in enumerate(dec) for _ in range(a)]
        found = _orbit_basis_search(L, slots, search_bound, budget)
        if found is not None:
            return PermutationVerdict("yes", tuple(slots), found, "orbit basis found")
        if budget[0] <= 0:
            break
    return PermutationVerdict("unknown", reason="bounded orbit-basis search exhausted")


def _orbit_basis_search(L: GModule, slots: list[Subgroup], bound: int, budget: list[int]) -> IntMatrix | None:
    from .gmod import invariants_sublattice

    G = L.group
    n = L.rank
    cands = []
    for h in slots:
        B = invariants_sublattice(L, h)
        vecs = []
        rng = range(-bound, bound + 1)
        for c in product(rng, repeat=B.ncols):
            if not any(c):
                continue
            v = B.apply(c)
            if max(abs(x) for x in v) > bound:
                continue
            orbit = []
            for g in range(G.order):
                w = tuple(L.mats[g].apply(v))
                if w not in orbit:
                    orbit.append(w)
            if len(orbit) == h.index:
                vecs.append(orbit)
            if len(vecs) > 400:
                break
        cands.append(vecs)
    chosen: list[tuple[int, ...]] = []

    def primitive(cols):
        A = IntMatrix.from_columns(cols, n)
        snf = smith_normal_form(A)
        return all(x == 1 for x in snf.diagonal) and len(snf.diagonal) == len(cols)

    def rec(i):
        if budget[0] <= 0:
            return None
        if i == len(slots):
            return IntMatrix.from_columns(chosen, n)
        for orbit in cands[i]:
            budget[0] -= 1
            trial = chosen + list(orbit)
            if primitive(trial):
                chosen.extend(orbit)
                r = rec(i + 1)
                if r is not None:
                    return r
                del chosen[len(chosen) - len(orbit):]
        return None

    return rec(0)


# ---------------------------------------------------------------------------
# Sha-omega
# ---------------------------------------------------------------------------

def _sha_kernel(C: CohomologyResult, M: GModule) -> Subquotient:
    """Kernel of restriction to all cyclic subgroup representatives, in C's canonical coordinates."""
    G = M.group
    k = C._sq.ngens
    d = C._sq.moduli
    reps = C.representatives()
    rows, mods = [], []
    for c in cyclic_subgroup_reps(G):
        if c.order == 1:
            continue
        Cc = CohomologyResult(c, M, C.degree)
        if Cc.group.is_trivial:
            continue
        imgs = [Cc.classify(C.restrict(x, c)) for x in reps]
        for r, m in enumerate(Cc._sq.moduli):
            rows.append([imgs[j][r] for j in range(k)])
            mods.append(m)
    if rows and k:
        K = congruence_kernel(IntMatrix(rows, k), mods)
    else:
        K = IntMatrix.identity(k)
    D = IntMatrix.from_columns([[x if i == j else 0 for i in range(k)] for j, x in enumerate(d) if x], k) \
        if any(d) else IntMatrix.zeros(k, 0)
    return Subquotient(K, D)


def sha_omega(i: int, G: FiniteGroup, M: GModule) -> FiniteAbelianGroup:
    """Kernel of H^i(G, M) -> product of H^i(c, M) over cyclic subgroups c."""
    if i not in (1, 2):
        raise CohomologyError("sha_omega is defined for degrees 1 and 2")
    if M.group is not G:
        raise CohomologyError("module is over a different group")
    C = CohomologyResult(G.whole, M, i)
    if C.group.is_trivial:
        return C.group
    return _sha_kernel(C, M).group


@dataclass
class LevelAudit:
    levels: list[int]
    image_groups: list[FiniteAbelianGroup]
    accepted: int


class StabilizationError(CohomologyError):
    pass


def _sha1_image(G: FiniteGroup, M: GModule, m1: int, m2: int) -> FiniteAbelianGroup:
    A1 = hom_to_zmod(M, m1)
    A2 = hom_to_zmod(M, m2)
    inc = hom_to_zmod_inclusion(M, m1, m2).matrix
    C1 = CohomologyResult(G.whole, A1, 1)
    C2 = CohomologyResult(G.whole, A2, 1)
    if C1.group.is_trivial:
        return C1.group
    K = _sha_kernel(C1, A1)
    reps = C1.representatives()
    k = len(G.whole.generators)
    images = []
    for coords in K.generators():
        x = [sum(c * r[j] for c, r in zip(coords, reps)) for j in range(len(reps[0]))]
        n1 = A1.rank
        y = []
        for b in range(k):
            y.extend(inc.apply(x[b * n1:(b + 1) * n1]))
        images.append(C2.classify(y))
    return image_of_generators(images, C2._sq.moduli)


def sha1_omega_qz_dual(G: FiniteGroup, M: GModule, audit: list | None = None) -> FiniteAbelianGroup:
    """Sha^1_omega(G, Hom(M, Q/Z)) through the finite levels Hom(M, Z/m)."""
    if M.group is not G:
        raise CohomologyError("module is over a different group")
    if G.order == 1:
        return FiniteAbelianGroup()
    e = M.abelian.exponent
    levels = [G.order * e]
    for _ in range(3):
        levels.append(levels[-1] * G.order)
    imgs = [_sha1_image(G, M, levels[0], levels[1]), _sha1_image(G, M, levels[1], levels[2])]
    if imgs[0] == imgs[1]:
        if audit is not None:
            audit.append(LevelAudit(levels[:3], imgs, 0))
        return imgs[0]
    imgs.append(_sha1_image(G, M, levels[2], levels[3]))
    if audit is not None:
        audit.append(LevelAudit(levels, imgs, 1))
    if imgs[1] == imgs[2]:
        return imgs[1]
    raise StabilizationError(f"level-wise images did not stabilize: {[str(x) for x in imgs]}")
