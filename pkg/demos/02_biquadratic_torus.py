"""The norm-one torus of a biquadratic extension, step by step.

Its unramified Brauer group is Z/2, the smallest nontrivial example.
Run: python3 demos/02_biquadratic_torus.py
"""

from flasque.cohom import h1, sha1_omega_qz_dual, sha_omega
from flasque.gmod import dual
from flasque.reductive import brauer_nr, pic_group, preset
from flasque.resolve import coflasque_resolution, dualize_resolution

d = preset("torus_norm_one", group="V4")
G = d.group
pi1 = d.pi1()
print("pi1 (the cocharacters):", pi1.abelian, "with", G.order, "group elements acting")

res = coflasque_resolution(pi1)
print("coflasque resolution 0 -> S -> P -> pi1 -> 0 with ranks", res.left.rank, res.middle.rank, res.right.rank)
print("audit:", res.audit())
print("P is a sum of coset lattices for subgroups of orders", [h.order for h in res.middle.certificate])

four = dualize_resolution(res)
four.audit()
print("dual sequence 0 -> T* -> P* -> S* -> mu* -> 0, mu* =", four.mu.abelian)

# Three ways to the unramified Brauer group.
print("H^1(G, S*)                      =", h1(G.whole, dual(res.left)).group)
print("Sha^1_omega(G, Hom(pi1, Q/Z))   =", sha1_omega_qz_dual(G, pi1))
print("Sha^2_omega(G, characters)      =", sha_omega(2, G, d.root_datum.characters()))
print("pipeline report:", {k: str(v) for k, v in brauer_nr(d).items()})
print("Pic:", {k: str(v) for k, v in pic_group(d).items()})
