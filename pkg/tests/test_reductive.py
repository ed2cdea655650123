import pytest

from flasque.groups import catalog_group
from flasque.reductive import (DatumError, InvariantViolation, ReductiveDatum, RootDatum, analyze, brauer_nr,
                               catalog, classify, exact_sequences, local_h1, mu_minus_one, pi1_routes, pic_group,
                               preset, root_orthogonal_rank, validate_root_datum)
from flasque.zlinalg import FiniteAbelianGroup as FAG, IntMatrix


def test_catalog_size_and_labels():
    labels = [d.label for d in catalog()]
    assert len(labels) >= 10 and len(set(labels)) == len(labels)
    for want in ("GL2", "GL3", "SL2", "SL5", "PGL2", "PGL3", "SL4/mu2", "Sp4", "SU3", "SU4", "PGU3"):
        assert want in labels


@pytest.mark.parametrize("name,params,pi1", [
    ("GL", {"n": 3}, "Z"), ("SL", {"n": 5}, "0"), ("PGL", {"n": 4}, "Z/4"), ("SL_mod_mu", {"n": 4, "d": 2}, "Z/2"),
    ("Sp", {"n": 4}, "0"), ("SU_quasi_split", {"n": 3}, "0"), ("PGU_quasi_split", {"n": 3}, "Z/3"),
    ("torus_split", {"rank": 2}, "Z^2"), ("torus_norm", {"group": "S3"}, "Z^6"),
    ("torus_norm_one", {"group": "V4"}, "Z^3"),
])
def test_fundamental_groups(name, params, pi1):
    d = preset(name, **params)
    assert str(d.pi1().abelian) == pi1
    assert pi1_routes(d)["agree"]


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_pic_of_adjoint_groups(n):
    p = pic_group(preset("PGL", n=n))
    assert p["route_invariants"] == p["route_coinvariants"] == FAG.from_orders([n])


def test_norm_one_torus_invariants():
    vals = {}
    for g in ("Z2", "Z4", "V4", "S3"):
        d = preset("torus_norm_one", group=g)
        vals[g] = (str(pic_group(d)["route_invariants"]), str(brauer_nr(d)["route_h1_flasque"]), str(local_h1(d)))
    assert vals == {"Z2": ("Z/2", "0", "Z/2"), "Z4": ("Z/4", "0", "Z/4"), "V4": ("Z/2 x Z/2", "Z/2", "Z/2 x Z/2"),
                    "S3": ("Z/2", "0", "Z/2")}


def test_quasi_split_unitary_group():
    d = preset("PGU_quasi_split", n=3)
    assert str(pic_group(d)["route_invariants"]) == "0"
    assert mu_minus_one(d.root_datum).abelian == FAG((3,))
    act = d.pi1().normalize().gen_mats[0]
    assert act.tolist() == [[2]]


def test_flags():
    assert classify(preset("SL", n=5))["is_simply_connected"]
    assert classify(preset("torus_norm", group="V4"))["is_quasi_trivial"] == "yes"
    f = classify(preset("torus_norm_one", group="V4"))
    assert f["is_quasi_trivial"] == "no" and not f["is_semisimple"]
    assert classify(preset("PGL", n=2))["is_semisimple"]


def test_torsion_and_rank_checks():
    for d in catalog():
        A = d.pi1().abelian
        assert mu_minus_one(d.root_datum).abelian == A.torsion()
        assert root_orthogonal_rank(d.root_datum) == A.free_rank


@pytest.mark.parametrize("n", [2, 3, 4])
def test_gl_sequences(n):
    assert all(exact_sequences(n).values())


def test_analyze_report():
    r = analyze(preset("PGL", n=2))
    assert r["pi1"]["group"] == "Z/2" and r["pic"]["route_invariants"] == "Z/2"
    assert r["brauer_nr"]["route_h1_flasque"] == "0" and r["flags"]["is_semisimple"]
    assert r["caveats"]


def test_invalid_presets():
    with pytest.raises(DatumError):
        preset("Sp", n=3)
    with pytest.raises(DatumError):
        preset("SL_mod_mu", n=4, d=3)
    with pytest.raises(DatumError):
        preset("torus_norm")
    with pytest.raises(DatumError):
        preset("E8")


def test_root_datum_validation():
    G = catalog_group("C1")
    bad = RootDatum(G, IntMatrix([[1]]), IntMatrix([[1]]), [])
    diag = validate_root_datum(bad)
    assert not diag.valid and diag.problems


def test_direct_pi1_input():
    from flasque.gmod import GModule
    G = catalog_group("V4")
    M = GModule(G, gen_mats=[IntMatrix([[-1]]), IntMatrix([[1]])])
    d = ReductiveDatum("sign", G, direct_pi1=M)
    assert str(pic_group(d)["route_coinvariants"]) == "Z/2"
    assert local_h1(d) == FAG((2,))
