"""Fundamental groups and Picard groups of classical groups.

Run: python3 demos/03_adjoint_and_unitary_groups.py
"""

from flasque.reductive import analyze, exact_sequences, preset

for name, params in [("SL", {"n": 4}), ("SL_mod_mu", {"n": 4, "d": 2}), ("PGL", {"n": 4}), ("GL", {"n": 3}),
                     ("Sp", {"n": 4}), ("SU_quasi_split", {"n": 3}), ("PGU_quasi_split", {"n": 3})]:
    r = analyze(preset(name, **params))
    print(f"{r['label']:8s} pi1 = {r['pi1']['group']:6s} Pic = {r['pic']['route_invariants']:6s} "
          f"Br_nr = {r['brauer_nr']['route_h1_flasque']:4s} simply connected: {r['flags']['is_simply_connected']}")

# The quasi-split unitary group: the Galois action on pi1 = Z/3 is by -1,
# so the coinvariants (and so Pic) vanish although pi1 does not.
print("PGU3 action on pi1:", analyze(preset("PGU_quasi_split", n=3))["pi1"]["action"])

# pi1 turns 1 -> SL_n -> GL_n -> Gm -> 1 and 1 -> Gm -> GL_n -> PGL_n -> 1 into exact sequences.
for n in (2, 3, 4):
    print(f"n={n}:", exact_sequences(n))
