"""Two-term complexes of G-modules, quasi-isomorphisms and the nine-diagram splice.

A complex [L -> R] has L in degree -1 and R in degree 0, so its homology is
(kernel, cokernel) of the differential.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .gmod import (
    GModule,
    GModuleMap,
    ModuleError,
    direct_sum,
    is_exact_at,
    is_short_exact,
    permutation_module,
    submodule,
)
from .groups import FiniteGroup, catalog_group, subgroup_reps
from .zlinalg import IntMatrix, LatticeSolver, hstack, image_basis, kernel_basis, vstack


class ComplexError(ValueError):
    pass


@dataclass
class TwoTermComplex:
    left: GModule
    right: GModule
    differential: GModuleMap

    def __post_init__(self):
        d = self.differential
        if d.source is not self.left or d.target is not self.right:
            raise ComplexError("differential does not go from left to right")

    def homology(self):
        """(H^-1 with its inclusion into left, H^0 with the projection from right)."""
        K, inc = self.differential.kernel()
        Q, proj = self.differential.cokernel()
        return (K, inc), (Q, proj)


def homology(cx: TwoTermComplex) -> tuple[GModule, GModule]:
    (K, _), (Q, _) = cx.homology()
    return K, Q


@dataclass
class ChainMap:
    source: TwoTermComplex
    target: TwoTermComplex
    f_minus1: GModuleMap
    f0: GModuleMap

    def commutes(self) -> bool:
        a = self.f0.matrix @ self.source.differential.matrix
        b = self.target.differential.matrix @ self.f_minus1.matrix
        return all(self.target.right.in_relations(c) for c in (a - b).columns())


@dataclass
class QuasiIsoVerdict:
    holds: bool
    h_minus1_iso: bool
    h0_iso: bool
    h_minus1: tuple[str, str]
    h0: tuple[str, str]

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"quasi_isomorphism": self.holds, "H-1": list(self.h_minus1), "H0": list(self.h0),
                "H-1_iso": self.h_minus1_iso, "H0_iso": self.h0_iso}


def is_quasi_iso(f: ChainMap) -> QuasiIsoVerdict:
    """Do the induced maps on H^-1 and H^0 both have trivial kernel and cokernel?"""
    if not f.commutes():
        raise ComplexError("chain map square does not commute")
    (Ks, incs), (Qs, _) = f.source.homology()
    (Kt, inct), (Qt, _) = f.target.homology()
    imgs = f.f_minus1.matrix @ incs.matrix
    sol = LatticeSolver(inct.matrix)
    cols = []
    for c in imgs.columns():
        y = sol.solve(c)
        if y is None:
            raise ComplexError("induced map on H^-1 is not defined")
        cols.append(y)
    m1 = IntMatrix.from_columns(cols, Kt.rank) if cols else IntMatrix.zeros(Kt.rank, Ks.rank)
    ind1 = GModuleMap(Ks, Kt, m1, check=True)
    ind0 = GModuleMap(Qs, Qt, f.f0.matrix, check=True)
    a, b = ind1.is_isomorphism(), ind0.is_isomorphism()
    return QuasiIsoVerdict(a and b, a, b, (str(Ks.abelian), str(Kt.abelian)), (str(Qs.abelian), str(Qt.abelian)))


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    return ChainMap(f.source, g.target, g.f_minus1 @ f.f_minus1, g.f0 @ f.f0)


def identity_chain_map(cx: TwoTermComplex) -> ChainMap:
    return ChainMap(cx, cx, cx.left.identity_map(), cx.right.identity_map())


# ---------------------------------------------------------------------------
# Nine-diagrams
# ---------------------------------------------------------------------------

@dataclass
class NineDiagram:
    """Three short exact rows A, B, C and three short exact columns C_j -> B_j -> A_j.

    ``rows[r]`` is the pair of maps (X1 -> X2, X2 -> X3) of row r in "ABC";
    ``cols[j]`` is the pair (C_j -> B_j, B_j -> A_j).
    """

    modules: dict[str, GModule]
    rows: dict[str, tuple[GModuleMap, GModuleMap]]
    cols: list[tuple[GModuleMap, GModuleMap]]

    def audit(self) -> dict:
        out = {}
        for r, (f, g) in self.rows.items():
            out[f"row {r}"] = is_short_exact(f, g)
        for j, (f, g) in enumerate(self.cols):
            out[f"column {j + 1}"] = is_short_exact(f, g)
        # squares: C -> B and B -> A rows commute with the columns
        for lo, hi in (("C", "B"), ("B", "A")):
            for j in range(2):
                up_lo = self.cols[j][0 if lo == "C" else 1]
                up_hi = self.cols[j + 1][0 if lo == "C" else 1]
                a = self.rows[hi][j].matrix @ up_lo.matrix
                b = up_hi.matrix @ self.rows[lo][j].matrix
                tgt = self.modules[f"{hi}{j + 2}"]
                out[f"square {lo}{hi}{j + 1}"] = all(tgt.in_relations(c) for c in (a - b).columns())
        return out


@dataclass
class SpliceResult:
    middle: TwoTermComplex
    top: TwoTermComplex
    bottom: TwoTermComplex
    from_top: ChainMap
    from_bottom: ChainMap
    top_verdict: QuasiIsoVerdict
    bottom_verdict: QuasiIsoVerdict
    middle_row_exact: bool

    @property
    def holds(self) -> bool:
        return self.top_verdict.holds and self.bottom_verdict.holds and self.middle_row_exact

    def to_json(self):
        return {"top": self.top_verdict.to_json(), "bottom": self.bottom_verdict.to_json(),
                "middle_row_exact": self.middle_row_exact, "holds": self.holds}


def splice(d: NineDiagram) -> SpliceResult:
    """Connect [B1 -> A2] and [C2 -> B3] through [B2 -> A2 + B3]."""
    bad = [k for k, v in d.audit().items() if not v]
    if bad:
        raise ComplexError("diagram is not exact: " + ", ".join(bad))
    M = d.modules
    G = M["B2"].group
    b1, b2 = d.rows["B"]
    a1, a2 = d.rows["A"]
    c1, c2 = d.rows["C"]
    (cb1, ba1), (cb2, ba2), (cb3, ba3) = d.cols
    S = direct_sum(M["A2"], M["B3"])
    na, nb = M["A2"].rank, M["B3"].rank
    mid_d = GModuleMap(M["B2"], S, vstack(ba2.matrix, b2.matrix), check=True)
    middle = TwoTermComplex(M["B2"], S, mid_d)
    top = TwoTermComplex(M["B1"], M["A2"], GModuleMap(M["B1"], M["A2"], ba2.matrix @ b1.matrix, check=True))
    bottom = TwoTermComplex(M["C2"], M["B3"], GModuleMap(M["C2"], M["B3"], b2.matrix @ cb2.matrix, check=True))
    emb_a = vstack(IntMatrix.identity(na), IntMatrix.zeros(nb, na))
    emb_b = vstack(IntMatrix.zeros(na, nb), IntMatrix.identity(nb))
    f_top = ChainMap(top, middle, b1, GModuleMap(M["A2"], S, emb_a, check=True))
    f_bot = ChainMap(bottom, middle, cb2, GModuleMap(M["B3"], S, emb_b, check=True))
    # the four-term middle row 0 -> C1 -> B2 -> A2 + B3 -> A3 -> 0
    diff = GModuleMap(S, M["A3"], hstack(a2.matrix, -ba3.matrix), check=True)
    c_to_b2 = cb2 @ c1
    row_ok = (c_to_b2.is_injective() and is_exact_at(c_to_b2, mid_d) and is_exact_at(mid_d, diff)
              and diff.is_surjective())
    return SpliceResult(middle, top, bottom, f_top, f_bot, is_quasi_iso(f_top), is_quasi_iso(f_bot), row_ok)


def _saturate(B: IntMatrix) -> IntMatrix:
    n = B.nrows
    A = kernel_basis(B.T)
    if A.ncols == 0:
        return IntMatrix.identity(n)
    return kernel_basis(A.T)


def _coords(basis: IntMatrix, vecs: IntMatrix) -> IntMatrix:
    sol = LatticeSolver(basis)
    cols = []
    for c in vecs.columns():
        y = sol.solve(c)
        if y is None:
            raise ComplexError("vector outside the sublattice")
        cols.append(y)
    return IntMatrix.from_columns(cols, basis.ncols) if cols else IntMatrix.zeros(basis.ncols, 0)


def _zero_module(G: FiniteGroup) -> GModule:
    return GModule(G, gen_mats=[IntMatrix.zeros(0, 0)] * len(G.gen_indices), rank=0, check=False)


def _sub(E: GModule, B: IntMatrix) -> tuple[GModule, IntMatrix]:
    """Submodule spanned by B together with the basis its coordinates refer to."""
    if not B.ncols:
        return _zero_module(E.group), B
    S, inc = submodule(E, B, closed=True)
    return S, inc.matrix


def _intersection(X: IntMatrix, Y: IntMatrix) -> IntMatrix:
    K = kernel_basis(hstack(X, -Y))
    return X @ K.select_rows(range(X.ncols)) if K.ncols else IntMatrix.zeros(X.nrows, 0)


def diagram_from_sublattices(E: GModule, X: IntMatrix, Y: IntMatrix) -> NineDiagram:
    """The nine-diagram of the filtration quotients of a lattice E by G-stable saturated X and Y.

    Rows: (X^Y, X, X/X^Y), (Y, E, E/Y), (Y/X^Y, E/X, E/(X+Y)).
    """
    G = E.group
    W = _intersection(X, Y)
    W = image_basis(W) if W.ncols else W
    Xm, X = _sub(E, X)
    Ym, Y = _sub(E, Y)
    Wm, W = _sub(E, W)
    WinX = _coords(X, W)
    WinY = _coords(Y, W)

    def quot(base: GModule, rel: IntMatrix) -> GModule:
        return GModule(G, mats=base.mats, relations=hstack(base.relations, rel), check=False)

    XW = quot(Xm, WinX)
    YW = quot(Ym, WinY)
    EY = quot(E, Y)
    EX = quot(E, X)
    EXY = quot(E, hstack(X, Y))
    mods = {"C1": Wm, "C2": Xm, "C3": XW, "B1": Ym, "B2": E, "B3": EY, "A1": YW, "A2": EX, "A3": EXY}

    def mp(s, t, m):
        return GModuleMap(mods[s], mods[t], m, check=True)

    I = IntMatrix.identity
    rows = {
        "C": (mp("C1", "C2", WinX), mp("C2", "C3", I(X.ncols))),
        "B": (mp("B1", "B2", Y), mp("B2", "B3", I(E.rank))),
        "A": (mp("A1", "A2", Y), mp("A2", "A3", I(E.rank))),
    }
    cols = [
        (mp("C1", "B1", WinY), mp("B1", "A1", I(Y.ncols))),
        (mp("C2", "B2", X), mp("B2", "A2", I(E.rank))),
        (mp("C3", "B3", X), mp("B3", "A3", I(E.rank))),
    ]
    return NineDiagram(mods, rows, cols)


RANDOM_DIAGRAM_GROUPS = ("C1", "C2", "C3", "C4", "V4", "C6", "S3", "C8", "D4", "Q8", "C2xC4", "C2^3")


def random_nine_diagram(rng: random.Random, max_rank: int = 6) -> NineDiagram:
    """A nine-diagram from two random G-stable saturated sublattices of a permutation lattice."""
    G = catalog_group(rng.choice(RANDOM_DIAGRAM_GROUPS))
    reps = subgroup_reps(G)
    while True:
        blocks = []
        total = 0
        for _ in range(rng.randint(1, 3)):
            h = rng.choice(reps)
            if total + h.index <= max_rank:
                blocks.append(h)
                total += h.index
        if blocks:
            break
    E = permutation_module(G, blocks)
    n = E.rank

    def stable_sat():
        v = [rng.randint(-2, 2) for _ in range(n)]
        cols = [E.mats[g].apply(v) for g in range(G.order)]
        if rng.random() < 0.5:
            w = [rng.randint(-2, 2) for _ in range(n)]
            cols += [E.mats[g].apply(w) for g in range(G.order)]
        B = IntMatrix.from_columns(cols, n)
        if B.is_zero():
            return IntMatrix.zeros(n, 0)
        return _saturate(B)

    X, Y = stable_sat(), stable_sat()
    return diagram_from_sublattices(E, X, Y)


def torus_nine_diagram(res) -> NineDiagram:
    """Diagram with zero bottom row and both upper rows equal to the resolution 0 -> S -> P -> T -> 0."""
    G = res.middle.group
    zero = _zero_module(G)
    S, P, T = res.left, res.middle, res.right
    mods = {"C1": zero, "C2": zero, "C3": zero, "B1": S, "B2": P, "B3": T, "A1": S, "A2": P, "A3": T}
    z = lambda a, b: GModuleMap(mods[a], mods[b], IntMatrix.zeros(mods[b].rank, 0), check=False)
    rows = {"C": (GModuleMap(zero, zero, IntMatrix.zeros(0, 0), check=False),) * 2,
            "B": (res.inclusion, res.projection), "A": (res.inclusion, res.projection)}
    cols = [(z("C1", "B1"), S.identity_map()), (z("C2", "B2"), P.identity_map()), (z("C3", "B3"), T.identity_map())]
    return NineDiagram(mods, rows, cols)


# ---------------------------------------------------------------------------
# Coroot complex against the resolution complex
# ---------------------------------------------------------------------------

def _equivariant_lift(res, Y: GModule, coroots: IntMatrix) -> IntMatrix:
    """Lift the evaluation P -> Y / coroots to an equivariant map P -> Y.

    Each coset block is sent by its base vector v; v is moved by coroots
    into Y^h, which is possible because the coroot lattice is a
    permutation module (so H^1(h, coroots) = 0).
    """
    from .groups import coset_permutation_action
    from .zlinalg import solve_integer

    G = Y.group
    n = Y.rank
    E = res.projection.matrix
    cols = []
    off = 0
    for h in res.middle.certificate:
        cosets, _ = coset_permutation_action(G, h)
        v = E.col(off)
        if h.generators and coroots.ncols:
            I = IntMatrix.identity(n)
            A = IntMatrix([r for s in h.generators for r in ((Y.mats[s] - I) @ coroots).rows], coroots.ncols)
            b = [-x for s in h.generators for x in (Y.mats[s] - I).apply(v)]
            sol = solve_integer(A, b)
            if not sol.solvable:
                raise ComplexError("invariant does not lift through the coroot lattice")
            v = [a + b for a, b in zip(v, coroots.apply(sol.particular))]
        for c in cosets:
            cols.append(Y.mats[min(c)].apply(v))
        off += len(cosets)
    return IntMatrix.from_columns(cols, n) if cols else IntMatrix.zeros(n, 0)


def borovoi_vs_resolution(rd) -> dict:
    """Compare [coroots -> cocharacters] with [S -> P] via the chain map induced by evaluation."""
    from .reductive import pi1_borovoi
    from .resolve import coflasque_resolution

    G = rd.group
    Y = rd.cocharacters()
    r = rd.semisimple_rank
    M = pi1_borovoi(rd)
    res = coflasque_resolution(M)
    Yfree = GModule(G, mats=Y.mats, relations=IntMatrix.zeros(Y.rank, 0), check=False)
    if r:
        basis = image_basis(rd.coroots)
        Ysc, inc = submodule(Yfree, basis, closed=True)
        coroot_cx = TwoTermComplex(Ysc, Yfree, inc)
    else:
        Ysc = _zero_module(G)
        basis = IntMatrix.zeros(Y.rank, 0)
        coroot_cx = TwoTermComplex(Ysc, Yfree, GModuleMap(Ysc, Yfree, IntMatrix.zeros(Y.rank, 0), check=False))
    res_cx = TwoTermComplex(res.left, res.middle, res.inclusion)
    lift = _equivariant_lift(res, Yfree, rd.coroots)
    f0 = GModuleMap(res.middle, Yfree, lift, check=True)
    img = lift @ res.inclusion.matrix
    fm1 = GModuleMap(res.left, Ysc, _coords(basis, img), check=True) if r else \
        GModuleMap(res.left, Ysc, IntMatrix.zeros(0, res.left.rank), check=False)
    verdict = is_quasi_iso(ChainMap(res_cx, coroot_cx, fm1, f0))
    hc = homology(coroot_cx)
    hr = homology(res_cx)
    return {
        "coroot_complex": [str(hc[0].abelian), str(hc[1].abelian)],
        "resolution_complex": [str(hr[0].abelian), str(hr[1].abelian)],
        "quasi_isomorphism": verdict.holds,
        "injective_differentials": hc[0].abelian.is_trivial and hr[0].abelian.is_trivial,
    }
