"""G-lattices and finitely generated G-modules.

A module is presented as Z^n / im(R) together with one integer matrix per
group element lifting the action to Z^n.  Lifts only need to respect the
group law modulo im(R).  A lattice is a module with no relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Sequence

from .groups import FiniteGroup, Subgroup, coset_permutation_action
from .zlinalg import (
    FiniteAbelianGroup,
    IntMatrix,
    LatticeSolver,
    block_diag,
    congruence_kernel,
    hstack,
    image_basis,
    inverse_unimodular,
    kernel_basis,
    smith_normal_form,
    vstack,
)


class ModuleError(ValueError):
    pass


class GModule:
    """Z^n / im(relations) with a G-action given by lifted matrices.

    Pass either ``gen_mats`` (one matrix per group generator) or ``mats``
    (one per group element, in the group's element order).
    """

    def __init__(self, group: FiniteGroup, *, gen_mats: Sequence[IntMatrix] | None = None,
                 mats: Sequence[IntMatrix] | None = None, relations: IntMatrix | None = None,
                 rank: int | None = None, certificate: tuple[Subgroup, ...] | None = None,
                 check: bool = True):
        self.group = group
        if mats is not None:
            mats = list(mats)
            if len(mats) != group.order:
                raise ModuleError("one action matrix per group element required")
            self.__dict__["mats"] = mats
            gen_mats = [mats[g] for g in group.gen_indices]
            n = mats[0].nrows
        elif gen_mats is not None:
            gen_mats = list(gen_mats)
            if len(gen_mats) != len(group.gen_indices):
                raise ModuleError("one action matrix per group generator required")
            if gen_mats:
                n = gen_mats[0].nrows
            elif rank is not None:
                n = rank
            else:
                raise ModuleError("rank required when the group has no generators")
        else:
            raise ModuleError("gen_mats or mats required")
        self.gen_mats = gen_mats
        self.rank = n
        self.relations = relations if relations is not None else IntMatrix.zeros(n, 0)
        if self.relations.nrows != n:
            raise ModuleError("relation matrix has the wrong number of rows")
        for m in gen_mats:
            if m.shape != (n, n):
                raise ModuleError("action matrices must be square of the module rank")
        self.certificate = certificate
        if check:
            self.validate()

    # -- structure ----------------------------------------------------
    @cached_property
    def mats(self) -> list[IntMatrix]:
        return self.group.representation(self.gen_mats) if self.gen_mats else [IntMatrix.identity(self.rank)]

    def action(self, g: int) -> IntMatrix:
        return self.mats[g]

    @property
    def is_lattice(self) -> bool:
        return self.relations.ncols == 0 or self.relations.is_zero()

    @cached_property
    def _rel_solver(self) -> LatticeSolver:
        return LatticeSolver(self.relations)

    def in_relations(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        return self.relations.ncols > 0 and self._rel_solver.contains(v)

    def validate(self) -> None:
        """Audit that the lifted action is a G-action on Z^n / im R."""
        n = self.rank
        R = self.relations
        G = self.group
        for k, m in enumerate(self.gen_mats):
            for c in (m @ R).columns():
                if not self.in_relations(c):
                    raise ModuleError(f"generator {G.gen_names[k]} does not preserve the relations")
        if not self.is_lattice:
            for m in self.gen_mats:
                if not _unimodular_mod(m, self):
                    raise ModuleError("action matrix is not invertible on the module")
        else:
            for k, m in enumerate(self.gen_mats):
                if abs(m.det()) != 1:
                    raise ModuleError(f"action of generator {G.gen_names[k]} is not unimodular")
        mats = self.mats
        for k, s in enumerate(G.gen_indices):
            for h in range(G.order):
                diff = mats[s] @ mats[h] - mats[G.table[s][h]]
                if not all(self.in_relations(c) for c in diff.columns()):
                    raise ModuleError(
                        f"action violates the group law at generator {G.gen_names[k]} times element {h}")
        if G.order and not all(self.in_relations(c) for c in (mats[0] - IntMatrix.identity(n)).columns()):
            raise ModuleError("identity does not act trivially")

    def structure(self) -> FiniteAbelianGroup:
        """Underlying abelian group in canonical form."""
        return self.abelian

    @cached_property
    def abelian(self) -> FiniteAbelianGroup:
        if self.is_lattice:
            return FiniteAbelianGroup((), self.rank)
        if self.is_normalized():
            return FiniteAbelianGroup.from_orders(self.moduli)
        return self.normal_form.module.abelian

    @cached_property
    def normal_form(self) -> Normalization:
        return _normalize(self)

    def normalize(self) -> GModule:
        return self.normal_form.module

    @property
    def moduli(self) -> list[int]:
        """Per-coordinate modulus of a normalized presentation (0 on free coordinates)."""
        if self.is_lattice:
            return [0] * self.rank
        d = [0] * self.rank
        for j, c in enumerate(self.relations.columns()):
            nz = [i for i, x in enumerate(c) if x]
            if len(nz) != 1:
                raise ModuleError("presentation is not normalized")
            d[nz[0]] = abs(c[nz[0]])
        return d

    def is_normalized(self) -> bool:
        try:
            self.moduli
        except ModuleError:
            return False
        return True

    def identity_map(self) -> GModuleMap:
        return GModuleMap(self, self, IntMatrix.identity(self.rank), check=False)

    def __repr__(self):
        kind = "lattice" if self.is_lattice else "module"
        return f"GModule({kind}, rank={self.rank}, group={self.group!r})"

    def to_json(self) -> dict:
        G = self.group
        out = {
            "rank": self.rank,
            "action": {nm: m.tolist() for nm, m in zip(G.gen_names, self.gen_mats)},
        }
        if not self.is_lattice:
            out["relations"] = self.relations.T.tolist()
        return out


GLattice = GModule
FgGModule = GModule


def _unimodular_mod(m: IntMatrix, M: GModule) -> bool:
    # invertible on Z^n / R iff [m | R] spans Z^n
    B = image_basis(hstack(m, M.relations))
    return B.ncols == M.rank and abs(B.det()) == 1 if B.ncols == M.rank else False


@dataclass(frozen=True)
class Normalization:
    """``module`` is an equivariant presentation with diagonal relations.

    ``to_normal`` maps the old ambient coordinates onto the new ones and
    ``from_normal`` lifts new coordinates back; both induce mutually inverse
    isomorphisms of the quotient modules.
    """

    module: GModule
    to_normal: IntMatrix
    from_normal: IntMatrix


def _normalize(M: GModule) -> Normalization:
    n = M.rank
    if M.is_lattice:
        I = IntMatrix.identity(n)
        return Normalization(M, I, I)
    if M.is_normalized() and all(x != 1 for x in M.moduli) and M.relations.ncols == sum(1 for x in M.moduli if x):
        I = IntMatrix.identity(n)
        return Normalization(M, I, I)
    R = image_basis(M.relations)
    snf = smith_normal_form(R)
    diag = snf.diagonal + [0] * (n - min(R.shape))
    U = snf.U
    Uinv = inverse_unimodular(U)
    keep = [i for i, d in enumerate(diag) if d != 1]
    # torsion coordinates first, then free ones
    keep = [i for i in keep if diag[i]] + [i for i in keep if not diag[i]]
    P = U.select_rows(keep)
    L = Uinv.select_columns(keep)
    mats = [P @ m @ L for m in M.mats]
    k = len(keep)
    rel_cols = [[diag[i] if a == j else 0 for a in range(k)] for j, i in enumerate(keep) if diag[i]]
    rel = IntMatrix.from_columns(rel_cols, k) if rel_cols else IntMatrix.zeros(k, 0)
    mats = [_reduce_mod(m, rel) for m in mats]
    N = GModule(M.group, mats=mats, relations=rel, check=False)
    N.abelian = FiniteAbelianGroup.from_orders([diag[i] for i in keep])
    return Normalization(N, P, L)


def _reduce_mod(m: IntMatrix, rel: IntMatrix) -> IntMatrix:
    """Reduce rows of torsion coordinates of a lifted matrix into [0, d)."""
    d = {}
    for c in rel.columns():
        for i, x in enumerate(c):
            if x:
                d[i] = x
    if not d:
        return m
    return IntMatrix([[x % d[i] for x in r] if i in d else r for i, r in enumerate(m.rows)], m.ncols)


class GModuleMap:
    """A G-equivariant homomorphism, given by a matrix between ambient coordinates."""

    def __init__(self, source: GModule, target: GModule, matrix: IntMatrix, check: bool = True):
        if matrix.shape != (target.rank, source.rank):
            raise ModuleError(f"map matrix has shape {matrix.shape}, expected {(target.rank, source.rank)}")
        if source.group is not target.group:
            raise ModuleError("source and target are modules over different groups")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            self.validate()

    def validate(self) -> None:
        F, S, T = self.matrix, self.source, self.target
        for c in (F @ S.relations).columns():
            if not T.in_relations(c):
                raise ModuleError("map does not send relations to relations")
        for k, (a, b) in enumerate(zip(S.gen_mats, T.gen_mats)):
            diff = F @ a - b @ F
            if not all(T.in_relations(c) for c in diff.columns()):
                raise ModuleError(f"map is not equivariant for generator {S.group.gen_names[k]}")

    def __matmul__(self, other: GModuleMap) -> GModuleMap:
        return GModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def kernel(self) -> tuple[GModule, GModuleMap]:
        """The kernel as a module, with its inclusion into the source."""
        T = self.target
        aug = hstack(self.matrix, T.relations)
        Z = kernel_basis(aug).select_rows(range(self.source.rank))
        gens = hstack(Z, self.source.relations)
        return submodule(self.source, gens, closed=True)

    def image(self) -> tuple[GModule, GModuleMap]:
        return submodule(self.target, self.matrix, closed=True)

    def cokernel(self) -> tuple[GModule, GModuleMap]:
        T = self.target
        Q = GModule(T.group, mats=T.mats, relations=hstack(T.relations, self.matrix), check=False)
        return Q, GModuleMap(T, Q, IntMatrix.identity(T.rank), check=False)

    def is_injective(self) -> bool:
        K, _ = self.kernel()
        return K.abelian.is_trivial

    def is_surjective(self) -> bool:
        T = self.target
        B = image_basis(hstack(self.matrix, T.relations))
        return B.ncols == T.rank and abs(B.det()) == 1

    def is_isomorphism(self) -> bool:
        return self.is_surjective() and self.is_injective()

    def is_zero(self) -> bool:
        return all(self.target.in_relations(c) for c in self.matrix.columns())


def submodule(M: GModule, gens: IntMatrix, closed: bool = False) -> tuple[GModule, GModuleMap]:
    """Submodule generated by the columns of ``gens`` (G-closure taken unless ``closed``)."""
    cols = [gens]
    if not closed:
        cols += [m @ gens for m in M.mats[1:]]
    allg = hstack(*cols, M.relations)
    B = image_basis(allg) if allg.ncols else IntMatrix.zeros(M.rank, 0)
    solver = LatticeSolver(B)

    def coords(m: IntMatrix) -> IntMatrix:
        out = []
        for c in m.columns():
            y = solver.solve(c)
            if y is None:
                raise ModuleError("generators do not span a G-stable submodule")
            out.append(y)
        return IntMatrix.from_columns(out, B.ncols) if out else IntMatrix.zeros(B.ncols, 0)

    gm = [coords(m @ B) for m in M.gen_mats]
    rel = coords(M.relations)
    S = GModule(M.group, gen_mats=gm, relations=rel, rank=B.ncols, check=False)
    return S, GModuleMap(S, M, B, check=False)


def quotient(M: GModule, gens: IntMatrix) -> tuple[GModule, GModuleMap]:
    """M modulo the submodule generated (as G-module) by the columns of ``gens``."""
    cols = [gens] + [m @ gens for m in M.mats[1:]]
    Q = GModule(M.group, mats=M.mats, relations=hstack(M.relations, *cols), check=False,
                certificate=None)
    return Q, GModuleMap(M, Q, IntMatrix.identity(M.rank), check=False)


def direct_sum(*mods: GModule) -> GModule:
    G = mods[0].group
    mats = [block_diag(*(M.mats[g] for M in mods)) for g in range(G.order)]
    rel = block_diag(*(M.relations for M in mods))
    cert = None
    if all(M.certificate is not None for M in mods):
        cert = tuple(h for M in mods for h in M.certificate)
    return GModule(G, mats=mats, relations=rel, certificate=cert, check=False)


def trivial_lattice(G: FiniteGroup, rank: int = 1) -> GModule:
    I = IntMatrix.identity(rank)
    return GModule(G, gen_mats=[I] * len(G.gen_indices), rank=rank,
                   certificate=(G.whole,) * rank, check=False)


def sign_lattice(G: FiniteGroup, kernel: Subgroup) -> GModule:
    """Z with G acting through G/kernel = {+-1} (kernel must have index 2)."""
    if kernel.index != 2:
        raise ModuleError("sign character needs an index-2 kernel")
    gm = [IntMatrix([[1 if g in kernel else -1]]) for g in G.gen_indices]
    return GModule(G, gen_mats=gm, rank=1)


def permutation_module(G: FiniteGroup, subgroups: Sequence[Subgroup]) -> GModule:
    """Direct sum of the coset lattices Z[G/h], carrying the list of h as certificate."""
    blocks = []
    for h in subgroups:
        if h.parent is not G:
            raise ModuleError("subgroup belongs to another group")
        _, perms = coset_permutation_action(G, h)
        blocks.append(perms)
    n = sum(len(b[0]) for b in blocks)
    mats = []
    for g in range(G.order):
        rows = [[0] * n for _ in range(n)]
        off = 0
        for perms in blocks:
            p = perms[g]
            for c, img in enumerate(p):
                rows[off + img][off + c] = 1
            off += len(p)
        mats.append(IntMatrix(rows, n))
    return GModule(G, mats=mats, relations=IntMatrix.zeros(n, 0), certificate=tuple(subgroups), check=False)


def regular_lattice(G: FiniteGroup) -> GModule:
    return permutation_module(G, [G.trivial])


def as_lattice(M: GModule) -> GModule:
    """A relation-free presentation of a torsion-free module."""
    if M.is_lattice:
        return M
    N = M.normalize()
    if not N.is_lattice:
        raise ModuleError("module has torsion; it is not a lattice")
    return N


def dual(M: GModule) -> GModule:
    """Contragredient lattice Hom(M, Z): g acts by the inverse transpose."""
    M = as_lattice(M)
    G = M.group
    mats = [M.mats[G.inv(g)].T for g in range(G.order)]
    return GModule(G, mats=mats, relations=IntMatrix.zeros(M.rank, 0), certificate=M.certificate, check=False)


def invariants_sublattice(M: GModule, h: Subgroup) -> IntMatrix:
    """Basis (columns) of the saturated sublattice M^h of a lattice."""
    M = as_lattice(M)
    n = M.rank
    if not h.generators:
        return IntMatrix.identity(n)
    I = IntMatrix.identity(n)
    A = vstack(*(M.mats[s] - I for s in h.generators))
    return kernel_basis(A)


def coinvariants(M: GModule, h: Subgroup) -> GModule:
    """M_h = M / <m - s m>.  Keeps the G-action when h is normal; otherwise a module over h."""
    I = IntMatrix.identity(M.rank)
    extra = [M.mats[s] - I for s in h.sorted_elements if s]
    rel = hstack(M.relations, *extra) if extra else M.relations
    if h.is_normal():
        return GModule(M.group, mats=M.mats, relations=rel, check=False)
    H = subgroup_as_group(h)
    mats = [IntMatrix.identity(M.rank)] * H.order
    return GModule(H, mats=mats, relations=rel, check=False)


def subgroup_as_group(h: Subgroup) -> FiniteGroup:
    """h as a group in its own right (elements keep their concrete form)."""
    G = h.parent
    gens = {f"h{i + 1}": G.elements[g] for i, g in enumerate(h.generators)}
    H = FiniteGroup(gens, order_cap=G.order_cap, name=f"sub{h.order}")
    # the trivial subgroup enumerates to a bare identity, which maps to element 0
    H.parent_indices = [G.index_of(e) if gens else 0 for e in H.elements]
    return H


def restrict(M: GModule, h: Subgroup) -> GModule:
    H = subgroup_as_group(h)
    mats = [M.mats[g] for g in H.parent_indices]
    return GModule(H, mats=mats, relations=M.relations, check=False)


@dataclass(frozen=True)
class TorsionSplit:
    """0 -> torsion -> M -> free -> 0, all in the normalized presentation of M."""

    torsion: GModule
    free: GModule
    normalized: GModule
    inclusion: GModuleMap
    projection: GModuleMap


def torsion_free_split(M: GModule) -> TorsionSplit:
    N = M.normalize()
    d = N.moduli
    t = [i for i, x in enumerate(d) if x]
    f = [i for i, x in enumerate(d) if not x]
    G = M.group
    tm = [m.select_rows(t).select_columns(t) for m in N.mats]
    fm = [m.select_rows(f).select_columns(f) for m in N.mats]
    T = GModule(G, mats=tm, relations=IntMatrix.diag([d[i] for i in t]) if t else IntMatrix.zeros(0, 0),
                check=False)
    F = GModule(G, mats=fm, relations=IntMatrix.zeros(len(f), 0), check=False)
    inc = IntMatrix.identity(N.rank).select_columns(t) if t else IntMatrix.zeros(N.rank, 0)
    proj = IntMatrix.identity(N.rank).select_rows(f) if f else IntMatrix.zeros(0, N.rank)
    return TorsionSplit(T, F, N, GModuleMap(T, N, inc, check=False), GModuleMap(N, F, proj, check=False))


def hom_to_zmod(M: GModule, n: int) -> GModule:
    """Hom(M, Z/n) with (g f)(m) = f(g^-1 m), on the basis dual to M's normalized generators.

    The result records in ``levels`` the order gcd(d_i, n) of each basis
    homomorphism and in ``source_coords`` the normalized coordinate it reads.
    """
    if n < 1:
        raise ModuleError("n must be positive")
    N = M.normalize()
    d = N.moduli
    g = [gcd(x, n) for x in d]
    keep = [i for i, x in enumerate(g) if x > 1]
    G = M.group
    mats = []
    for s in range(G.order):
        r = N.mats[G.inv(s)]
        rows = []
        for i in keep:
            row = []
            for j in keep:
                v = (r[j, i] * (n // g[j])) % n
                step = n // g[i]
                if v % step:
                    raise ModuleError("inconsistent lifted action")
                row.append(v // step)
            rows.append(row)
        mats.append(IntMatrix(rows, len(keep)))
    rel = IntMatrix.diag([g[i] for i in keep]) if keep else IntMatrix.zeros(0, 0)
    H = GModule(G, mats=mats, relations=rel, check=False)
    H.__dict__["mats"] = [_reduce_mod(m, rel) for m in mats]
    H.levels = [g[i] for i in keep]
    H.source_coords = keep
    H.modulus = n
    return H


def hom_to_zmod_inclusion(M: GModule, n1: int, n2: int) -> GModuleMap:
    """The injection Hom(M, Z/n1) -> Hom(M, Z/n2) induced by Z/n1 -> Z/n2 (multiplication by n2/n1)."""
    if n2 % n1:
        raise ModuleError("n1 must divide n2")
    A, B = hom_to_zmod(M, n1), hom_to_zmod(M, n2)
    pos = {c: j for j, c in enumerate(B.source_coords)}
    F = [[0] * A.rank for _ in range(B.rank)]
    for k, c in enumerate(A.source_coords):
        F[pos[c]][k] = B.levels[pos[c]] // A.levels[k]
    return GModuleMap(A, B, IntMatrix(F, A.rank), check=False)


def finite_dual(A: GModule) -> GModule:
    """Hom(A, Q/Z) for a finite module A."""
    N = A.normalize()
    if any(x == 0 for x in N.moduli):
        raise ModuleError("finite_dual needs a finite module")
    e = N.abelian.exponent
    return hom_to_zmod(N, e)


def is_finite(M: GModule) -> bool:
    return M.abelian.is_finite


def is_exact_at(f: GModuleMap, g: GModuleMap) -> bool:
    """im f = ker g inside the common module."""
    if f.target is not g.source and f.target.rank != g.source.rank:
        raise ModuleError("maps are not composable")
    M = g.source
    if not (g @ f).is_zero():
        return False
    aug = hstack(g.matrix, g.target.relations)
    Z = kernel_basis(aug).select_rows(range(M.rank))
    span = LatticeSolver(hstack(f.matrix, M.relations))
    return all(span.contains(c) for c in Z.columns())


def is_short_exact(f: GModuleMap, g: GModuleMap) -> bool:
    """0 -> A -f-> B -g-> C -> 0."""
    return f.is_injective() and g.is_surjective() and is_exact_at(f, g)


def random_module(rng, G: FiniteGroup, max_rank: int = 6, allow_torsion: bool = True) -> GModule:
    """A random finitely generated module built from a permutation lattice.

    The lattice is a sum of coset lattices of total rank at most
    ``max_rank``; the result is a quotient by the G-span of a random vector,
    the G-span itself, or the dual of a torsion-free quotient.
    """
    from .groups import subgroup_reps

    reps = subgroup_reps(G)
    fitting = [h for h in reps if h.index <= max_rank]
    blocks, total = [], 0
    for _ in range(rng.randint(1, 3)):
        h = rng.choice(fitting)
        if total + h.index <= max_rank:
            blocks.append(h)
            total += h.index
    if not blocks:
        blocks = [G.whole]
    E = permutation_module(G, blocks)
    n = E.rank
    if rng.random() < 0.4:
        # norm vectors of the blocks give the norm-one lattices J_{G/h}
        v, off = [0] * n, 0
        for h in blocks:
            if rng.random() < 0.7:
                for j in range(off, off + h.index):
                    v[j] = 1
            off += h.index
        if any(v):
            Q, _ = quotient(E, IntMatrix.from_columns([v], n))
            Q = Q.normalize()
            return dual(Q) if Q.is_lattice and Q.rank and rng.random() < 0.5 else Q
    v = [rng.randint(-2, 2) for _ in range(n)]
    if not any(v):
        v[rng.randrange(n)] = 1
    span = IntMatrix.from_columns([E.mats[g].apply(v) for g in range(G.order)], n)
    kind = rng.choice(("quotient", "quotient", "sub", "dual") if allow_torsion else ("sub", "dual"))
    if kind == "sub":
        return submodule(E, span, closed=True)[0]
    Q, _ = quotient(E, span)
    Q = Q.normalize()
    if kind == "dual" or not allow_torsion:
        if Q.is_lattice and Q.rank:
            return dual(Q)
        return submodule(E, span, closed=True)[0]
    return Q
