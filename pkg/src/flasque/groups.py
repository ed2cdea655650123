"""Finite groups given by generators, with subgroup machinery.

A group is enumerated once (breadth-first from the identity, so the element
order is canonical for a fixed generator list) and then handled through its
multiplication table.  Generators are permutations of {0..d-1} (tuples of
images) or unimodular integer matrices.
"""

from __future__ import annotations

import re
from collections import deque
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Hashable, Iterable, Mapping, Sequence

from .zlinalg import IntMatrix

DEFAULT_ORDER_CAP = 64


class GroupError(ValueError):
    pass


def parse_permutation(spec, degree: int | None = None) -> tuple[int, ...]:
    """Permutation from cycle notation ``"(1 2)(3 4)"`` or a 1-based image list."""
    if isinstance(spec, str):
        cycles = re.findall(r"\(([^()]*)\)", spec)
        if not cycles and spec.strip() not in ("", "()"):
            raise GroupError(f"cannot parse cycle notation {spec!r}")
        pts = [[int(x) for x in re.split(r"[\s,]+", c.strip()) if x] for c in cycles]
        top = max([p for c in pts for p in c], default=0)
        d = max(degree or 0, top)
        img = list(range(d))
        for c in pts:
            for a, b in zip(c, c[1:] + c[:1]):
                img[a - 1] = b - 1
        if sorted(img) != list(range(d)):
            raise GroupError(f"not a permutation: {spec!r}")
        return tuple(img)
    img = [int(x) - 1 for x in spec]
    if sorted(img) != list(range(len(img))):
        raise GroupError(f"not a permutation: {spec!r}")
    if degree and degree > len(img):
        img += list(range(len(img), degree))
    return tuple(img)


def _perm_mul(p, q):
    # (p*q)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def _mat_mul(a, b):
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in zip(*b)) for r in a)


class FiniteGroup:
    """An enumerated finite group.

    ``generators`` maps a name to a permutation tuple or a square integer
    matrix (anything with ``.rows`` or a nested sequence).  Element 0 is the
    identity.  ``words[g]`` writes element g as ``gens[words[g][0]] * parent``.
    """

    def __init__(self, generators: Mapping[str, object] | Sequence = (), order_cap: int = DEFAULT_ORDER_CAP,
                 name: str | None = None):
        if not isinstance(generators, Mapping):
            generators = {f"g{i + 1}": g for i, g in enumerate(generators)}
        self.name = name
        self.order_cap = order_cap
        self.gen_names = list(generators)
        kinds = set()
        gens = []
        for nm, g in generators.items():
            if isinstance(g, IntMatrix) or (isinstance(g, (list, tuple)) and g and isinstance(g[0], (list, tuple))):
                rows = g.rows if isinstance(g, IntMatrix) else tuple(tuple(int(x) for x in r) for r in g)
                m = IntMatrix(rows)
                if m.nrows != m.ncols or abs(m.det()) != 1:
                    raise GroupError(f"generator {nm} is not a unimodular square matrix")
                kinds.add(("mat", m.nrows))
                gens.append(m.rows)
            else:
                p = parse_permutation(g) if isinstance(g, str) else tuple(int(x) for x in g)
                if sorted(p) != list(range(len(p))):
                    raise GroupError(f"generator {nm} is not a permutation")
                kinds.add(("perm",))
                gens.append(p)
        if len({k[0] for k in kinds}) > 1 or len({k for k in kinds if k[0] == "mat"}) > 1:
            raise GroupError("mixed generator kinds")
        self.kind = next(iter(kinds))[0] if kinds else "perm"
        if self.kind == "perm" and gens:
            d = max(len(p) for p in gens)
            gens = [p + tuple(range(len(p), d)) for p in gens]
            ident = tuple(range(d))
            mul = _perm_mul
        elif self.kind == "mat":
            n = len(gens[0])
            ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
            mul = _mat_mul
        else:
            ident, mul = (), _perm_mul
        self._enumerate(gens, ident, mul)

    def _enumerate(self, gens, ident, mul):
        elements = [ident]
        index = {ident: 0}
        words = [()]
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for k, s in enumerate(gens):
                y = mul(s, elements[x])
                if y not in index:
                    if len(elements) >= self.order_cap:
                        raise GroupError(f"group order exceeds the cap {self.order_cap}")
                    index[y] = len(elements)
                    elements.append(y)
                    words.append((k, x))
                    queue.append(index[y])
        self.elements = elements
        self._index = index
        self.words = words
        self.gen_indices = [index[s] for s in gens]
        n = len(elements)
        self.table = [[index[mul(a, b)] for b in elements] for a in elements]
        self.inverses = [row.index(0) for row in self.table]

    # -- basics -------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def index_of(self, element: Hashable) -> int:
        return self._index[element]

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[g][x]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    def representation(self, gen_images: Sequence[IntMatrix]) -> list[IntMatrix]:
        """Extend matrices on the generators to all elements along the enumeration words."""
        if len(gen_images) != len(self.gen_indices):
            raise GroupError("one matrix per generator required")
        n = gen_images[0].nrows if gen_images else 0
        mats: list[IntMatrix] = [IntMatrix.identity(n)]
        for w in self.words[1:]:
            k, parent = w
            mats.append(gen_images[k] @ mats[parent])
        return mats

    # -- subgroups ----------------------------------------------------
    def closure(self, gens: Iterable[int]) -> frozenset[int]:
        elems = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.table[s][x]
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(elems)

    def subgroup(self, elements: Iterable[int]) -> Subgroup:
        return Subgroup(self, frozenset(elements))

    def generated(self, gens: Iterable[int]) -> Subgroup:
        return Subgroup(self, self.closure(gens))

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, frozenset(range(self.order)))

    @cached_property
    def trivial(self) -> Subgroup:
        return Subgroup(self, frozenset({0}))

    @cached_property
    def all_subgroups(self) -> list[frozenset[int]]:
        cyclic = {self.closure([g]) for g in range(self.order)}
        found = set(cyclic)
        frontier = set(cyclic)
        while frontier:
            new = set()
            for H in frontier:
                for C in cyclic:
                    if C <= H:
                        continue
                    J = self.closure(H | C)
                    if J not in found:
                        new.add(J)
            found |= new
            frontier = new
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def conjugate_set(self, H: frozenset[int], g: int) -> frozenset[int]:
        t, gi = self.table, self.inverses[g]
        return frozenset(t[t[g][h]][gi] for h in H)

    def _class_reps(self, subs: list[frozenset[int]]) -> list[Subgroup]:
        seen: set[frozenset[int]] = set()
        reps = []
        for H in subs:
            if H in seen:
                continue
            cls = {self.conjugate_set(H, g) for g in range(self.order)}
            seen |= cls
            reps.append(Subgroup(self, H))
        return reps

    @cached_property
    def _subgroup_reps(self) -> list[Subgroup]:
        return self._class_reps(self.all_subgroups)

    @cached_property
    def _cyclic_reps(self) -> list[Subgroup]:
        cyc = sorted({self.closure([g]) for g in range(self.order)}, key=lambda s: (len(s), sorted(s)))
        return self._class_reps(cyc)


class Subgroup:
    """A subgroup of a ``FiniteGroup``, stored as a set of element indices."""

    def __init__(self, parent: FiniteGroup, elements: frozenset[int]):
        self.parent = parent
        self.elements = frozenset(elements)
        self.sorted_elements = sorted(self.elements)

    def __repr__(self):
        return f"Subgroup(order={self.order}, elements={self.sorted_elements})"

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.elements == self.elements

    def __hash__(self):
        return hash(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self.elements

    def __le__(self, other: Subgroup) -> bool:
        return self.elements <= other.elements

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    @cached_property
    def generators(self) -> list[int]:
        """A small generating set, chosen greedily in canonical element order."""
        gens: list[int] = []
        span = frozenset({0})
        for g in self.sorted_elements:
            if g not in span:
                gens.append(g)
                span = self.parent.closure(gens)
        return gens

    @cached_property
    def is_cyclic(self) -> bool:
        return self.generator is not None

    @cached_property
    def generator(self) -> int | None:
        for g in self.sorted_elements:
            if self.parent.element_order(g) == self.order:
                return g
        return None

    def is_normal(self) -> bool:
        G = self.parent
        return all(G.conjugate_set(self.elements, g) == self.elements for g in G.gen_indices)

    def tree(self) -> tuple[list[int], dict[int, tuple[int, int]]]:
        """Breadth-first spanning tree of the Cayley graph on ``generators``.

        Returns (element order, parent map) with ``g = gens[k] * parent``
        recorded as ``parent_map[g] = (k, parent)``.
        """
        t = self.parent.table
        order = [0]
        parent: dict[int, tuple[int, int]] = {}
        seen = {0}
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            for k, s in enumerate(self.generators):
                y = t[s][x]
                if y not in seen:
                    seen.add(y)
                    parent[y] = (k, x)
                    order.append(y)
        return order, parent


def group_from_generators(gens, order_cap: int = DEFAULT_ORDER_CAP, name: str | None = None) -> FiniteGroup:
    return FiniteGroup(gens, order_cap=order_cap, name=name)


def subgroup_reps(G: FiniteGroup) -> list[Subgroup]:
    """One subgroup per conjugacy class, ordered by size (trivial first, G last)."""
    return G._subgroup_reps


def cyclic_subgroup_reps(G: FiniteGroup) -> list[Subgroup]:
    return G._cyclic_reps


def coset_permutation_action(G: FiniteGroup, H: Subgroup) -> tuple[list[frozenset[int]], list[tuple[int, ...]]]:
    """Left cosets gH (the first is H itself) and, for every element, its permutation of them."""
    if H.parent is not G:
        raise GroupError("subgroup belongs to another group")
    cosets: list[frozenset[int]] = []
    where: dict[int, int] = {}
    for g in range(G.order):
        if g in where:
            continue
        c = frozenset(G.table[g][h] for h in H.elements)
        for x in c:
            where[x] = len(cosets)
        cosets.append(c)
    perms = []
    for g in range(G.order):
        perms.append(tuple(where[G.table[g][min(c)]] for c in cosets))
    return cosets, perms


# ---------------------------------------------------------------------------
# Catalog of small groups
# ---------------------------------------------------------------------------

def _regular(elements: list, mul, gens: list, name: str) -> FiniteGroup:
    idx = {e: i for i, e in enumerate(elements)}
    perms = {f"g{k + 1}": tuple(idx[mul(g, e)] for e in elements) for k, g in enumerate(gens)}
    return FiniteGroup(perms, name=name)


def cyclic(n: int) -> FiniteGroup:
    if n == 1:
        return FiniteGroup({}, name="C1")
    return FiniteGroup({"s": tuple((i + 1) % n for i in range(n))}, name=f"C{n}")


def abelian(*ns: int) -> FiniteGroup:
    """Direct product of cyclic groups, as a permutation group on disjoint blocks."""
    gens, off = {}, 0
    total = sum(ns)
    for k, n in enumerate(ns):
        img = list(range(total))
        for i in range(n):
            img[off + i] = off + (i + 1) % n
        gens[f"s{k + 1}"] = tuple(img)
        off += n
    return FiniteGroup(gens, name="x".join(f"C{n}" for n in ns))


def semidirect_cyclic(m: int, n: int, u: int, name: str) -> FiniteGroup:
    """Z/m x| Z/n with the generator of Z/n acting on Z/m by multiplication by u."""
    els = [(a, b) for b in range(n) for a in range(m)]

    def mul(x, y):
        return ((x[0] + pow(u, x[1], m) * y[0]) % m, (x[1] + y[1]) % n)

    return _regular(els, mul, [(1, 0), (0, 1)], name)


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n acting on the n-gon."""
    if n == 2:
        return FiniteGroup({"r": (1, 0, 3, 2), "s": (2, 3, 0, 1)}, name="D2")
    return FiniteGroup({"r": tuple((i + 1) % n for i in range(n)), "s": tuple((-i) % n for i in range(n))},
                       name=f"D{n}")


def dicyclic(n: int) -> FiniteGroup:
    """Dicyclic group of order 4n (n = 2: quaternion group Q8)."""
    els = [(k, e) for e in (0, 1) for k in range(2 * n)]

    def mul(x, y):
        (k1, e1), (k2, e2) = x, y
        if e1 == 0:
            return ((k1 + k2) % (2 * n), e2)
        if e2 == 0:
            return ((k1 - k2) % (2 * n), 1)
        return ((k1 - k2 + n) % (2 * n), 0)

    return _regular(els, mul, [(1, 0), (0, 1)], "Q8" if n == 2 else f"Dic{n}")


def symmetric(n: int) -> FiniteGroup:
    if n < 2:
        return cyclic(1)
    return FiniteGroup({"t": (1, 0) + tuple(range(2, n)), "c": tuple((i + 1) % n for i in range(n))}, name=f"S{n}")


def alternating4() -> FiniteGroup:
    return FiniteGroup({"a": parse_permutation("(1 2 3)", 4), "b": parse_permutation("(1 2)(3 4)", 4)}, name="A4")


def _direct(G1: FiniteGroup, G2: FiniteGroup, name: str) -> FiniteGroup:
    els = [(a, b) for a in range(G1.order) for b in range(G2.order)]

    def mul(x, y):
        return (G1.table[x[0]][y[0]], G2.table[x[1]][y[1]])

    gens = [(g, 0) for g in G1.gen_indices] + [(0, g) for g in G2.gen_indices]
    return _regular(els, mul, gens, name)


def _c2sq_by_c4() -> FiniteGroup:
    els = [(v, k) for k in range(4) for v in range(4)]

    def act(k, v):  # generator of C4 swaps the two F2 coordinates
        return ((v & 1) << 1 | (v >> 1)) if k % 2 else v

    def mul(x, y):
        return (x[0] ^ act(x[1], y[0]), (x[1] + y[1]) % 4)

    return _regular(els, mul, [(1, 0), (0, 1)], "C2^2:C4")


def _pauli() -> FiniteGroup:
    X = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
    Z = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
    iI = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    return FiniteGroup({"X": X, "Z": Z, "i": iI}, name="Pauli")


_CATALOG_BUILDERS = {
    "C1": lambda: cyclic(1),
    **{f"C{n}": (lambda n=n: cyclic(n)) for n in range(2, 17)},
    "V4": lambda: abelian(2, 2),
    "C2xC2": lambda: abelian(2, 2),
    "S3": lambda: symmetric(3),
    "C2xC4": lambda: abelian(2, 4),
    "C2^3": lambda: abelian(2, 2, 2),
    "D4": lambda: dihedral(4),
    "Q8": lambda: dicyclic(2),
    "C3xC3": lambda: abelian(3, 3),
    "D5": lambda: dihedral(5),
    "C2xC6": lambda: abelian(2, 6),
    "D6": lambda: dihedral(6),
    "A4": alternating4,
    "Dic3": lambda: dicyclic(3),
    "D7": lambda: dihedral(7),
    "C4xC4": lambda: abelian(4, 4),
    "C2xC8": lambda: abelian(2, 8),
    "C2^2xC4": lambda: abelian(2, 2, 4),
    "C2^4": lambda: abelian(2, 2, 2, 2),
    "D8": lambda: dihedral(8),
    "Q16": lambda: dicyclic(4),
    "SD16": lambda: semidirect_cyclic(8, 2, 3, "SD16"),
    "M16": lambda: semidirect_cyclic(8, 2, 5, "M16"),
    "C4:C4": lambda: semidirect_cyclic(4, 4, 3, "C4:C4"),
    "C2xD4": lambda: _direct(dihedral(4), cyclic(2), "C2xD4"),
    "C2xQ8": lambda: _direct(dicyclic(2), cyclic(2), "C2xQ8"),
    "C2^2:C4": _c2sq_by_c4,
    "Pauli": _pauli,
}

# one name per isomorphism class, every group of order <= 16
SMALL_GROUPS = (
    ["C1", "C2", "C3", "C4", "V4", "C5", "C6", "S3", "C7", "C8", "C2xC4", "C2^3", "D4", "Q8",
     "C9", "C3xC3", "C10", "D5", "C11", "C12", "C2xC6", "D6", "A4", "Dic3", "C13", "C14", "D7", "C15",
     "C16", "C4xC4", "C2xC8", "C2^2xC4", "C2^4", "D8", "Q16", "SD16", "M16", "C4:C4", "C2xD4",
     "C2xQ8", "C2^2:C4", "Pauli"]
)


def catalog_group(name: str) -> FiniteGroup:
    """A named small group, e.g. ``"C4"``, ``"V4"``, ``"S3"``, ``"Q8"``."""
    key = re.sub(r"Z/?(\d+)", r"C\1", name.replace(" ", ""))
    aliases = {"C2xC2": "V4", "K4": "V4", "D3": "S3"}
    key = aliases.get(key, key)
    if key not in _CATALOG_BUILDERS:
        raise GroupError(f"unknown catalog group {name!r}")
    G = _CATALOG_BUILDERS[key]()
    G.name = key
    return G


def brute_force_subgroups(G: FiniteGroup) -> set[frozenset[int]]:
    """Every subgroup, by closing every multiset of 4 elements (enough generators for order <= 16)."""
    return {G.closure(c) for c in combinations_with_replacement(range(G.order), 4)}
