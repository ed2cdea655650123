"""Group cohomology of small lattices, computed exactly.

Run: python3 demos/01_cohomology_basics.py
"""

from flasque.cohom import h0, h1, h2, is_permutation, sha_omega
from flasque.gmod import permutation_module, sign_lattice, trivial_lattice
from flasque.groups import catalog_group, cyclic, subgroup_reps
from flasque.reductive import norm_one_characters

# Z with the generator of Z/2 acting by -1 has no invariants but a class in H^1.
C2 = cyclic(2)
Zminus = sign_lattice(C2, C2.trivial)
print("H^0(Z/2, Z-) =", h0(C2.whole, Zminus).group)
print("H^1(Z/2, Z-) =", h1(C2.whole, Zminus).group)

# H^2(Z/n, Z) is cyclic of order n: it classifies the extensions of Z/n by Z.
for n in (2, 3, 4, 6):
    G = cyclic(n)
    print(f"H^2(Z/{n}, Z) =", h2(G.whole, trivial_lattice(G)).group)

# Permutation lattices Z[G/k] have no H^1 for any subgroup; this is the basic
# reason they serve as the middle terms of resolutions.
G = catalog_group("D4")
worst = max((str(h1(h, permutation_module(G, [k])).group) for k in subgroup_reps(G) for h in subgroup_reps(G)),
            key=len)
print("largest H^1(h, Z[D4/k]) seen:", worst)

# The norm-one lattice of the Klein four-group is the classic example with a
# class that vanishes on every cyclic subgroup.
V = catalog_group("V4")
J = norm_one_characters(V)
print("J_V4 is a permutation lattice?", is_permutation(J).status)
print("H^2(V4, J) =", h2(V.whole, J).group, "; Sha^2 over cyclic subgroups =", sha_omega(2, V, J))
