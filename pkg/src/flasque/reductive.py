"""Root data with a Galois action, a preset catalog, and the invariants of reductive groups.

A root datum lives on a character lattice X = Z^n: simple roots are
columns in X, simple coroots are columns in the cocharacter lattice
Y = Hom(X, Z) = Z^n, and the Galois group acts on X by unimodular matrices
(on Y by the inverse transpose).  The fundamental group is Y modulo the
coroot lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .cohom import (
    CohomologyResult,
    is_coflasque,
    is_permutation,
    sha1_omega_qz_dual,
    sha_omega,
)
from .gmod import (
    GModule,
    GModuleMap,
    ModuleError,
    coinvariants,
    dual,
    invariants_sublattice,
    is_short_exact,
    quotient,
    regular_lattice,
    submodule,
    torsion_free_split,
    trivial_lattice,
)
from .groups import FiniteGroup, catalog_group, cyclic, subgroup_reps
from .resolve import coflasque_resolution, dualize_resolution
from .zlinalg import (
    FiniteAbelianGroup,
    IntMatrix,
    LatticeSolver,
    cokernel_structure,
    hstack,
    image_basis,
    inverse_unimodular,
    kernel_basis,
    solve_integer,
)


class InvariantViolation(RuntimeError):
    """Two independent computations of the same invariant disagree."""


class DatumError(ValueError):
    pass


TRIVIAL_GROUP = cyclic(1)


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------

@dataclass
class RootDatum:
    group: FiniteGroup
    roots: IntMatrix          # n x r, columns in X
    coroots: IntMatrix        # n x r, columns in Y
    action: list[IntMatrix]   # one matrix on X per generator of the group

    @property
    def rank(self) -> int:
        return self.roots.nrows

    @property
    def semisimple_rank(self) -> int:
        return self.roots.ncols

    def pairing(self) -> IntMatrix:
        """Entry (i, j) is <alpha_i, alpha_j^vee>."""
        return self.roots.T @ self.coroots

    def characters(self) -> GModule:
        return GModule(self.group, gen_mats=self.action, rank=self.rank, check=False)

    def cocharacters(self) -> GModule:
        return dual(self.characters())

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "roots": self.roots.T.tolist(),
            "coroots": self.coroots.T.tolist(),
            "action": {nm: m.tolist() for nm, m in zip(self.group.gen_names, self.action)},
        }


@dataclass
class ReductiveDatum:
    """Either a root datum or, directly, the fundamental group as a module."""

    label: str
    group: FiniteGroup
    root_datum: RootDatum | None = None
    direct_pi1: GModule | None = None
    params: dict = field(default_factory=dict)

    def pi1(self) -> GModule:
        if self.root_datum is not None:
            return pi1_borovoi(self.root_datum)
        return self.direct_pi1

    @property
    def is_root_datum(self) -> bool:
        return self.root_datum is not None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class Diagnostics:
    valid: bool
    problems: list[str]


def _principal_minors_positive(C: IntMatrix) -> bool:
    r = C.nrows
    for k in range(1, r + 1):
        for idx in combinations(range(r), k):
            if C.select_rows(idx).select_columns(idx).det() <= 0:
                return False
    return True


def validate_root_datum(rd: RootDatum) -> Diagnostics:
    probs = []
    n, r = rd.rank, rd.semisimple_rank
    if rd.coroots.shape != (n, r):
        probs.append(f"coroot matrix has shape {rd.coroots.shape}, expected {(n, r)}")
        return Diagnostics(False, probs)
    C = rd.pairing()
    for i in range(r):
        if C[i, i] != 2:
            probs.append(f"<alpha_{i + 1}, alpha_{i + 1}^vee> = {C[i, i]}, expected 2")
        for j in range(r):
            if i != j:
                if C[i, j] > 0:
                    probs.append(f"<alpha_{i + 1}, alpha_{j + 1}^vee> = {C[i, j]} is positive")
                if (C[i, j] == 0) != (C[j, i] == 0):
                    probs.append(f"pair ({i + 1}, {j + 1}) pairs to zero in one direction only")
    if not probs and r and not _principal_minors_positive(C):
        probs.append("Cartan matrix is not of finite type")
    if len(rd.action) != len(rd.group.gen_indices):
        probs.append("one action matrix per Galois generator required")
        return Diagnostics(False, probs)
    for nm, A in zip(rd.group.gen_names, rd.action):
        if A.shape != (n, n) or abs(A.det()) != 1:
            probs.append(f"action of {nm} is not unimodular of size {n}")
            continue
        Ad = inverse_unimodular(A).T
        img_r = [tuple(c) for c in (A @ rd.roots).columns()]
        img_c = [tuple(c) for c in (Ad @ rd.coroots).columns()]
        rs = [tuple(c) for c in rd.roots.columns()]
        cs = [tuple(c) for c in rd.coroots.columns()]
        if sorted(img_r) != sorted(rs):
            probs.append(f"action of {nm} does not permute the simple roots")
        elif sorted(img_c) != sorted(cs):
            probs.append(f"action of {nm} does not permute the simple coroots")
        elif [rs.index(v) for v in img_r] != [cs.index(v) for v in img_c]:
            probs.append(f"action of {nm} permutes roots and coroots differently")
        if A.T @ Ad != IntMatrix.identity(n):
            probs.append(f"action of {nm} does not preserve the pairing")
    if not probs:
        try:
            rd.characters().validate()
        except ModuleError as e:
            probs.append(f"Galois action: {e}")
    return Diagnostics(not probs, probs)


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

def cartan_A(r: int) -> IntMatrix:
    return IntMatrix([[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(r)] for i in range(r)], r)


def cartan_C(r: int) -> IntMatrix:
    rows = [list(x) for x in cartan_A(r).rows]
    if r >= 2:
        rows[r - 1][r - 2] = -2
    return IntMatrix(rows, r)


def _rational_solve(B: IntMatrix, C: IntMatrix) -> IntMatrix:
    cols = []
    for c in C.columns():
        sol = solve_integer(B, c)
        if not sol.solvable:
            raise DatumError("lattice does not contain the coroots")
        cols.append(sol.particular)
    return IntMatrix.from_columns(cols, B.ncols)


def semisimple_datum(cartan: IntMatrix, lattice: IntMatrix, group: FiniteGroup = TRIVIAL_GROUP,
                     diagram_perms: list[list[int]] | None = None) -> RootDatum:
    """Semisimple datum whose cocharacter lattice has basis ``lattice`` in fundamental-coweight coordinates."""
    r = cartan.nrows
    B = lattice
    coroots = _rational_solve(B, cartan)
    roots = B.T
    action = []
    for perm in diagram_perms or []:
        Pi = IntMatrix([[int(perm[j] == i) for j in range(r)] for i in range(r)], r)
        Ay = _rational_solve(B, Pi @ B)
        action.append(inverse_unimodular(Ay).T)
    return RootDatum(group, roots, coroots, action)


def _flip(r: int) -> list[int]:
    return [r - 1 - i for i in range(r)]


def _torus_datum(X: GModule) -> RootDatum:
    n = X.rank
    return RootDatum(X.group, IntMatrix.zeros(n, 0), IntMatrix.zeros(n, 0), list(X.gen_mats))


def norm_one_characters(G: FiniteGroup) -> GModule:
    """Z[G] modulo the norm element, as a lattice."""
    R = regular_lattice(G)
    Q, _ = quotient(R, IntMatrix.from_columns([[1] * G.order], G.order))
    return Q.normalize()


PRESET_NAMES = ("GL", "SL", "PGL", "SL_mod_mu", "Sp", "torus_split", "torus_norm", "torus_norm_one",
                "SU_quasi_split", "PGU_quasi_split", "custom")

_Z2 = cyclic(2)
_GROUP_CACHE: dict[str, FiniteGroup] = {}


def _group(name) -> FiniteGroup:
    if isinstance(name, FiniteGroup):
        return name
    if name not in _GROUP_CACHE:
        _GROUP_CACHE[name] = catalog_group(name)
    return _GROUP_CACHE[name]


def preset(name: str, **params) -> ReductiveDatum:
    """Build and validate a catalog datum."""
    n = params.get("n")

    def need_n(lo=1):
        if not isinstance(n, int) or n < lo:
            raise DatumError(f"{name} needs an integer n >= {lo}")

    if name == "GL":
        need_n()
        E = IntMatrix.from_columns([[int(i == j) - int(i == j + 1) for i in range(n)] for j in range(n - 1)], n) \
            if n > 1 else IntMatrix.zeros(n, 0)
        rd = RootDatum(TRIVIAL_GROUP, E, E, [])
        label = f"GL{n}"
    elif name in ("SL", "PGL", "SL_mod_mu"):
        need_n(2)
        C = cartan_A(n - 1)
        if name == "SL":
            B, label = C, f"SL{n}"
        elif name == "PGL":
            B, label = IntMatrix.identity(n - 1), f"PGL{n}"
        else:
            d = params.get("d")
            if not isinstance(d, int) or d < 1 or n % d:
                raise DatumError("SL_mod_mu needs d dividing n")
            w = [n // d] + [0] * (n - 2)
            B = image_basis(hstack(C, IntMatrix.from_columns([w], n - 1)))
            label = f"SL{n}/mu{d}"
        rd = semisimple_datum(C, B)
    elif name == "Sp":
        need_n(2)
        if n % 2:
            raise DatumError("Sp needs even n")
        C = cartan_C(n // 2)
        rd = semisimple_datum(C, C)
        label = f"Sp{n}"
    elif name in ("SU_quasi_split", "PGU_quasi_split"):
        need_n(2)
        C = cartan_A(n - 1)
        B = C if name.startswith("SU") else IntMatrix.identity(n - 1)
        rd = semisimple_datum(C, B, _Z2, [_flip(n - 1)])
        label = ("SU" if name.startswith("SU") else "PGU") + f"{n}"
    elif name == "torus_split":
        r = params.get("rank", n if n is not None else 1)
        if not isinstance(r, int) or r < 0:
            raise DatumError("torus_split needs rank >= 0")
        G = _group(params["group"]) if params.get("group") is not None else TRIVIAL_GROUP
        rd = _torus_datum(trivial_lattice(G, r))
        label = f"Gm^{r}" + (f"[{G.name}]" if G is not TRIVIAL_GROUP else "")
    elif name in ("torus_norm", "torus_norm_one"):
        gname = params.get("group")
        if gname is None:
            raise DatumError(f"{name} needs a group")
        G = _group(gname)
        X = regular_lattice(G) if name == "torus_norm" else norm_one_characters(G)
        rd = _torus_datum(X)
        label = f"{name}[{G.name or gname}]"
    elif name == "custom":
        rd = params.get("root_datum")
        if rd is None:
            raise DatumError("custom preset needs a root datum")
        label = params.get("label", "custom")
    else:
        raise DatumError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")
    diag = validate_root_datum(rd)
    if not diag.valid:
        raise DatumError("; ".join(diag.problems))
    return ReductiveDatum(label, rd.group, root_datum=rd, params={"preset": name, **{k: v for k, v in params.items()
                                                                                     if k != "root_datum"}})


def catalog() -> list[ReductiveDatum]:
    """The standard catalog used by the verification suites."""
    out = [
        preset("GL", n=2), preset("GL", n=3), preset("SL", n=2), preset("SL", n=5),
        preset("PGL", n=2), preset("PGL", n=3), preset("SL_mod_mu", n=4, d=2), preset("Sp", n=4),
        preset("SU_quasi_split", n=3), preset("SU_quasi_split", n=4), preset("PGU_quasi_split", n=3),
    ]
    for g in ("Z2", "Z4", "V4", "S3"):
        out.append(preset("torus_split", rank=2, group=g))
        out.append(preset("torus_norm", group=g))
        out.append(preset("torus_norm_one", group=g))
    return out


# ---------------------------------------------------------------------------
# Fundamental group
# ---------------------------------------------------------------------------

def pi1_borovoi(rd: RootDatum) -> GModule:
    """Cocharacters modulo the coroot lattice."""
    Y = rd.cocharacters()
    return GModule(rd.group, mats=Y.mats, relations=rd.coroots, check=False)


def pi1_via_resolution(d: ReductiveDatum):
    """Coker(S -> P) of a coflasque resolution of the fundamental group.

    Returns the cokernel module and the map it induces onto the input
    presentation.
    """
    M = d.pi1()
    res = coflasque_resolution(M)
    Q, _ = res.inclusion.cokernel()
    phi = GModuleMap(Q, M, res.projection.matrix, check=True)
    return Q, phi, res


def _invariant_battery(M: GModule) -> list:
    out = [str(M.abelian)]
    for h in subgroup_reps(M.group):
        out.append((h.order, str(CohomologyResult(h, M, 0).group), str(CohomologyResult(h, M, 1).group),
                    str(coinvariants(M, h).abelian)))
    return out


def pi1_routes(d: ReductiveDatum) -> dict:
    """Compare the direct fundamental group with the one recomputed from a resolution."""
    M = d.pi1()
    Q, phi, _ = pi1_via_resolution(d)
    iso = phi.is_isomorphism()
    same = Q.abelian == M.abelian and _invariant_battery(Q) == _invariant_battery(M)
    return {"direct": str(M.abelian), "resolution": str(Q.abelian), "induced_map_isomorphism": iso,
            "invariants_agree": same, "agree": iso and same}


# ---------------------------------------------------------------------------
# Pic, Brauer, local formula
# ---------------------------------------------------------------------------

def _resolution_data(d: ReductiveDatum):
    M = d.pi1()
    res = coflasque_resolution(M)
    four = dualize_resolution(res)
    return M, res, four


def pic_group(d: ReductiveDatum, data=None) -> dict:
    M, res, four = data or _resolution_data(d)
    G = d.group
    PG = invariants_sublattice(four.P, G.whole)
    SG = invariants_sublattice(four.S, G.whole)
    img = four.p_to_s.matrix @ PG
    sol = LatticeSolver(SG)
    cols = []
    for c in img.columns():
        y = sol.solve(c)
        if y is None:
            raise InvariantViolation("invariants do not map to invariants")
        cols.append(y)
    A = cokernel_structure(IntMatrix.from_columns(cols, SG.ncols) if cols else IntMatrix.zeros(SG.ncols, 0))
    B = coinvariants(M, G.whole).abelian.torsion()
    out = {"route_invariants": A, "route_coinvariants": B, "agree": A == B}
    if A != B:
        raise InvariantViolation(f"Pic routes disagree: {A} vs {B}")
    return out


def local_h1(d: ReductiveDatum, data=None) -> FiniteAbelianGroup:
    """Torsion of the coinvariants of the fundamental group, computed from the resolution."""
    M, res, four = data or _resolution_data(d)
    G = d.group
    P = res.middle
    I = IntMatrix.identity(P.rank)
    rel = [P.mats[g] - I for g in range(1, G.order)]
    rel.append(res.inclusion.matrix)
    return cokernel_structure(hstack(*rel)).torsion()


def brauer_nr(d: ReductiveDatum, data=None) -> dict:
    M, res, four = data or _resolution_data(d)
    G = d.group
    A = CohomologyResult(G.whole, four.S, 1).group
    B = sha1_omega_qz_dual(G, M)
    out = {"route_h1_flasque": A, "route_sha1_dual": B}
    if d.is_root_datum and d.root_datum.semisimple_rank == 0:
        out["route_sha2_characters"] = sha_omega(2, G, d.root_datum.characters())
    vals = list(out.values())
    out["agree"] = all(v == vals[0] for v in vals)
    if not out["agree"]:
        raise InvariantViolation("unramified Brauer routes disagree: " + ", ".join(str(v) for v in vals))
    return out


def classify(d: ReductiveDatum) -> dict:
    M = d.pi1()
    split = torsion_free_split(M)
    tors = split.torsion.abelian
    finite = M.abelian.is_finite
    if not tors.is_trivial:
        qt = "no"
        cof = False
    else:
        qt = is_permutation(split.free).status
        cof = is_coflasque(split.free).holds
    return {
        "is_torus": (d.root_datum.semisimple_rank == 0) if d.is_root_datum else None,
        "is_semisimple": finite,
        "is_simply_connected": M.abelian.is_trivial,
        "is_quasi_trivial": qt,
        "is_coflasque": cof,
    }


# ---------------------------------------------------------------------------
# mu(-1) and the rank check
# ---------------------------------------------------------------------------

def coroot_saturation(rd: RootDatum) -> IntMatrix:
    """Basis of the saturation of the coroot lattice inside the cocharacters."""
    n = rd.rank
    if rd.semisimple_rank == 0:
        return IntMatrix.zeros(n, 0)
    A = kernel_basis(rd.coroots.T)  # vectors orthogonal to every coroot
    if A.ncols == 0:
        return IntMatrix.identity(n)
    return kernel_basis(A.T)


def mu_minus_one(rd: RootDatum) -> GModule:
    """Torsion of the fundamental group, cross-checked against saturation / coroots."""
    M = pi1_borovoi(rd)
    split = torsion_free_split(M)
    T = split.torsion
    Y = rd.cocharacters()
    Sat = coroot_saturation(rd)
    if Sat.ncols:
        S, inc = submodule(Y, Sat, closed=True)
        sol = LatticeSolver(Sat)
        rel = IntMatrix.from_columns([sol.solve(c) for c in rd.coroots.columns()], Sat.ncols)
        Q = GModule(rd.group, mats=S.mats, relations=rel, check=False)
        to_pi = GModuleMap(Q, M, Sat, check=True)
        ok = Q.abelian == T.abelian and to_pi.is_injective()
    else:
        ok = T.abelian.is_trivial
    if not ok:
        raise InvariantViolation("torsion of the fundamental group differs from saturation / coroots")
    return T


def root_orthogonal_rank(rd: RootDatum) -> int:
    """Rank of the cocharacters orthogonal to every root."""
    if rd.semisimple_rank == 0:
        return rd.rank
    return kernel_basis(rd.roots.T).ncols


# ---------------------------------------------------------------------------
# Functoriality
# ---------------------------------------------------------------------------

def pi1_map(rd1: RootDatum, rd2: RootDatum, f: IntMatrix) -> GModuleMap:
    """The map on fundamental groups induced by a cocharacter map Y1 -> Y2."""
    if rd1.group is not rd2.group:
        raise DatumError("root data over different Galois groups")
    if f.shape != (rd2.rank, rd1.rank):
        raise DatumError("cocharacter map has the wrong shape")
    if rd2.semisimple_rank:
        sol = LatticeSolver(rd2.coroots)
        for c in (f @ rd1.coroots).columns():
            if not sol.contains(c):
                raise DatumError("map does not send coroots into the coroot lattice")
    elif not (f @ rd1.coroots).is_zero():
        raise DatumError("map does not send coroots into the coroot lattice")
    return GModuleMap(pi1_borovoi(rd1), pi1_borovoi(rd2), f, check=True)


def standard_cocharacter_maps(n: int) -> dict[str, IntMatrix]:
    """Cocharacter maps among G_m, SL_n, GL_n and PGL_n in the preset coordinates."""
    sl_gl = IntMatrix.from_columns([[int(i == j) - int(i == j + 1) for i in range(n)] for j in range(n - 1)], n)
    gl_pgl = IntMatrix([[int(i == j) - int(i == j + 1) for i in range(n)] for j in range(n - 1)], n)
    return {
        "Gm->GL": IntMatrix([[1] for _ in range(n)], 1),
        "SL->GL": sl_gl,
        "GL->PGL": gl_pgl,
        "GL->Gm": IntMatrix([[1] * n], n),
    }


def exact_sequences(n: int) -> dict[str, bool]:
    """Audit 0 -> pi1(SL) -> pi1(GL) -> pi1(Gm) -> 0 and 0 -> pi1(Gm) -> pi1(GL) -> pi1(PGL) -> 0."""
    sl, gl, pgl = preset("SL", n=n).root_datum, preset("GL", n=n).root_datum, preset("PGL", n=n).root_datum
    gm = preset("torus_split", rank=1).root_datum
    m = standard_cocharacter_maps(n)
    a = is_short_exact(pi1_map(sl, gl, m["SL->GL"]), pi1_map(gl, gm, m["GL->Gm"]))
    b = is_short_exact(pi1_map(gm, gl, m["Gm->GL"]), pi1_map(gl, pgl, m["GL->PGL"]))
    return {"SL-GL-Gm": a, "Gm-GL-PGL": b}


# ---------------------------------------------------------------------------
# Full report
# ---------------------------------------------------------------------------

CAVEATS = [
    "Brauer group computed up to a p-primary part in characteristic p",
    "local formula assumes the input group is the decomposition group",
]


def analyze(d: ReductiveDatum) -> dict:
    M = d.pi1()
    data = _resolution_data(d)
    N = M.normalize()
    report = {
        "label": d.label,
        "galois_order": d.group.order,
        "pi1": {"group": str(M.abelian), "structure": M.abelian.to_json(),
                "action": {nm: m.tolist() for nm, m in zip(d.group.gen_names, N.gen_mats)}},
        "pi1_routes": pi1_routes(d),
    }
    pic = pic_group(d, data)
    report["pic"] = {k: (str(v) if isinstance(v, FiniteAbelianGroup) else v) for k, v in pic.items()}
    br = brauer_nr(d, data)
    report["brauer_nr"] = {k: (str(v) if isinstance(v, FiniteAbelianGroup) else v) for k, v in br.items()}
    loc = local_h1(d, data)
    if loc != pic["route_coinvariants"]:
        raise InvariantViolation(f"local formula {loc} differs from Pic {pic['route_coinvariants']}")
    report["local_h1"] = str(loc)
    report["flags"] = classify(d)
    if d.is_root_datum:
        mu = mu_minus_one(d.root_datum)
        report["mu_minus_one"] = str(mu.abelian)
        report["root_orthogonal_rank"] = root_orthogonal_rank(d.root_datum)
    report["caveats"] = CAVEATS
    return report
