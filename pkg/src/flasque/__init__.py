"""Exact integral tools for Galois lattices, flasque resolutions and root data.

Modules:

* ``zlinalg``: integer matrices, Smith form, lattice solving, finite abelian groups.
* ``groups``: enumerated finite groups, subgroups, a catalog of small groups.
* ``gmod``: finitely generated G-modules and equivariant maps.
* ``cohom``: H^0, H^1, H^2, Sha groups, flasque and permutation tests.
* ``resolve``: coflasque and flasque resolutions and their duals.
* ``reductive``: root data, fundamental groups, Picard and Brauer invariants.
* ``complexes``: two-term complexes, quasi-isomorphisms, nine-diagram splicing.
* ``cli``: the ``flasque`` command.
"""

from .cohom import h0, h1, h2, is_coflasque, is_flasque, is_permutation, sha1_omega_qz_dual, sha_omega
from .gmod import GModule, GModuleMap, dual, permutation_module, trivial_lattice
from .groups import FiniteGroup, catalog_group, subgroup_reps
from .reductive import analyze, catalog, preset
from .resolve import coflasque_resolution, dualize_resolution, flasque_resolution
from .zlinalg import FiniteAbelianGroup, IntMatrix, smith_normal_form

__version__ = "0.1.0"
