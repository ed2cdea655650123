"""Splicing a nine-diagram of lattices into quasi-isomorphic two-term complexes.

Run: python3 demos/04_splicing_diagrams.py
"""

import random

from flasque.complexes import borovoi_vs_resolution, random_nine_diagram, splice, torus_nine_diagram
from flasque.reductive import preset
from flasque.resolve import coflasque_resolution

rng = random.Random(2024)
for k in range(5):
    d = random_nine_diagram(rng)
    r = splice(d)
    ranks = {key: m.rank for key, m in sorted(d.modules.items())}
    print(f"diagram {k}: ranks {ranks}")
    print("   top    ", r.top_verdict.to_json())
    print("   bottom ", r.bottom_verdict.to_json())

res = coflasque_resolution(preset("torus_norm_one", group="V4").pi1())
print("torus diagram splice holds:", splice(torus_nine_diagram(res)).holds)

# The coroot complex [coroots -> cocharacters] against a resolution [S -> P].
for name, params in [("SL", {"n": 3}), ("PGL", {"n": 3}), ("PGU_quasi_split", {"n": 3})]:
    print(name, params, borovoi_vs_resolution(preset(name, **params).root_datum))
