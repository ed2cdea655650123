import json

import pytest

from flasque import cli, reductive, suites
from flasque.cli import InputError, main, parse_input, to_json_text

BIQUADRATIC = {
    "schema": 1,
    "label": "norm-one torus of a biquadratic extension",
    "group": {"generators": {"s": "(1 2)(3 4)", "t": "(1 3)(2 4)"}},
    "module": {"role": "characters", "rank": 3,
               "action": {"s": [[0, 1, -1], [1, 0, -1], [0, 0, -1]], "t": [[0, -1, 1], [0, -1, 0], [1, -1, 0]]}},
}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, obj, name="in.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_analyze_preset_text(capsys):
    code, out, _ = run(capsys, "analyze", "--preset", "PGL", "--n", "2")
    assert code == 0
    assert "group: Z/2" in out and "route_invariants: Z/2" in out and "route_h1_flasque: 0" in out
    assert "is_semisimple: yes" in out


def test_analyze_simply_connected_json(capsys):
    code, out, _ = run(capsys, "analyze", "--preset", "SL", "--n", "5", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["schema"] == 1
    assert rep["pi1"]["group"] == "0" and rep["flags"]["is_simply_connected"]


def test_inline_biquadratic_torus(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "--input", write(tmp_path, BIQUADRATIC), "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["brauer_nr"]["route_h1_flasque"] == "Z/2"
    assert rep["brauer_nr"]["route_sha2_characters"] == "Z/2"
    assert rep["pic"]["route_invariants"] == "Z/2 x Z/2"


def test_report_echo_round_trips(tmp_path, capsys):
    code, out, _ = run(capsys, "analyze", "--input", write(tmp_path, BIQUADRATIC), "--format", "json")
    echo = json.loads(out)["input"]
    assert parse_input(json.dumps(echo))[0].source == echo
    assert echo == BIQUADRATIC
    again = parse_input(to_json_text(echo))[0].source
    assert again == echo


def test_parse_preset_job():
    jobs = parse_input('{"preset": "PGL", "n": 3}')
    assert len(jobs) == 1 and jobs[0].source == {"schema": 1, "preset": "PGL", "n": 3}


def test_missing_action_matrix_names_the_generator(tmp_path, capsys):
    bad = {"schema": 1, "group": "V4", "module": {"rank": 1, "action": {"s1": [[1]]}}}
    code, _, err = run(capsys, "analyze", "--input", write(tmp_path, bad))
    assert code == 1 and "'s2'" in err and "module.action.s2" in err


def test_malformed_json_reports_the_position(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", "--input", write(tmp_path, '{"preset": "PGL",\n "n": 3,,}'))
    assert code == 1 and "line 2" in err


@pytest.mark.parametrize("doc,fragment", [
    ({"schema": 2, "preset": "PGL", "n": 2}, "schema"),
    ({"preset": "PGL", "n": 2, "module": {}}, "exactly one"),
    ({"preset": "E8"}, "unknown preset"),
    ({"preset": "Sp", "n": 3}, "even"),
    ({"group": "V4", "module": {"rank": 1, "action": {"s1": [[2]], "s2": [[1]]}}}, "module"),
    ({"group": {"generators": {"a": "(1 2"}}, "module": {"rank": 0, "action": {"a": []}}}, "group"),
    ({"group": "C16", "module": {"rank": 0, "action": {"s1": []}}}, "order cap"),
])
def test_input_errors_exit_with_one(tmp_path, capsys, doc, fragment):
    args = ["analyze", "--input", write(tmp_path, doc)]
    if fragment == "order cap":
        args += ["--order-cap", "8"]
    code, _, err = run(capsys, *args)
    assert code == 1 and fragment in err


def test_no_input_source(capsys):
    code, _, err = run(capsys, "analyze")
    assert code == 1


def test_resolve_both_kinds(capsys):
    for kind in ("coflasque", "flasque"):
        code, out, _ = run(capsys, "resolve", "--preset", "torus_norm_one", "--group", "V4", "--kind", kind,
                           "--format", "json")
        rep = json.loads(out)
        assert code == 0 and all(rep["audit"].values())
        assert rep["resolution"]["kind"] == kind


def test_cohomology_command(tmp_path, capsys):
    path = write(tmp_path, BIQUADRATIC)
    code, out, _ = run(capsys, "cohomology", "--input", path, "--degree", "2", "--subgroup", "G", "--format", "json")
    rep = json.loads(out)
    # cohomology acts on the input module itself, whatever its role
    assert code == 0 and rep["degree"] == 2 and rep["subgroup"]["order"] == 4
    code, out, _ = run(capsys, "cohomology", "--input", path, "--degree", "0", "--subgroup", "0")
    assert code == 0 and "group: Z^3" in out
    code, _, err = run(capsys, "cohomology", "--input", path, "--subgroup", "99")
    assert code == 1 and "out of range" in err


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list", "--format", "json")
    rep = json.loads(out)
    assert code == 0 and len(rep["catalog"]) >= 10 and "PGL" in rep["presets"]
    assert any(g["name"] == "V4" for g in rep["groups"])


def test_batch_jobs_keep_input_order(tmp_path, capsys):
    doc = {"jobs": [{"preset": "PGL", "n": 3}, {"preset": "SL", "n": 2}, {"preset": "GL", "n": 2}]}
    code, out, _ = run(capsys, "analyze", "--input", write(tmp_path, doc), "--format", "json")
    rep = json.loads(out)
    assert code == 0 and [r["label"] for r in rep["results"]] == ["PGL3", "SL2", "GL2"]


def test_verify_single_suite_is_deterministic(capsys):
    a = run(capsys, "verify", "--suite", "appendixA", "--seed", "3", "--format", "json")
    b = run(capsys, "verify", "--suite", "appendixA", "--seed", "3", "--format", "json")
    assert a[0] == 0 and a[1] == b[1]
    assert json.loads(a[1])["all_hold"]


def test_route_disagreement_exits_with_two(monkeypatch, capsys):
    def broken(d, data=None):
        raise reductive.InvariantViolation("routes disagree")
    monkeypatch.setattr(cli, "analyze", lambda d: broken(d))
    code, _, err = run(capsys, "analyze", "--preset", "PGL", "--n", "2")
    assert code == 2 and "invariant violation" in err


def test_failed_suite_exits_with_two(monkeypatch, capsys):
    monkeypatch.setattr(suites, "run_suite", lambda name, seed: {"pic": {"x": {"holds": False, "cases": 1}}})
    code, out, _ = run(capsys, "verify", "--suite", "pic", "--format", "json")
    assert code == 2 and not json.loads(out)["all_hold"]


def test_text_rendering_of_groups():
    from flasque.zlinalg import FiniteAbelianGroup
    assert str(FiniteAbelianGroup((2, 4), 3)) == "Z/2 x Z/4 x Z^3"
    assert cli.to_text({"a": {"b": True}, "c": [1, 2]}) == "a:\n  b: yes\nc: [1, 2]"
