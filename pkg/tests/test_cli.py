import importlib
import json

from aps_homology.cli import main
from aps_homology.errors import InconsistentComplex

from conftest import CORPUS


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_annulus_loop_json(capsys):
    code, out, _ = run(capsys, "compute", CORPUS / "annulus_loop.json", "--ring", "f2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["format"] == "aps-report/1"
    assert doc["total_rank"] == 2


def test_compute_hopf_q(capsys):
    code, out, _ = run(capsys, "compute", CORPUS / "hopf.json", "--ring", "q", "--format", "json")
    assert code == 0 and json.loads(out)["total_rank"] == 4


def test_compute_all_rings_human(capsys):
    code, out, _ = run(capsys, "compute", CORPUS / "trefoil.json", "--ring", "all")
    assert code == 0
    assert "ring Z: total rank 4" in out
    assert "Z/2" in out
    assert "ring F2: total rank 6" in out


def test_json_is_byte_deterministic(capsys):
    args = ("compute", CORPUS / "figure_eight.json", "--ring", "all", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    _, c, _ = run(capsys, *args, "--threads", "2")
    assert a == b == c
    assert "timings" not in a


def test_malformed_input_exit_2(capsys):
    code, _, err = run(capsys, "compute", CORPUS / "malformed.json")
    assert code == 2 and "line" in err
    code, _, _ = run(capsys, "compute", CORPUS / "does_not_exist.json")
    assert code == 2


def test_invalid_diagram_lists_violations(capsys, tmp_path):
    doc = json.loads((CORPUS / "annulus_loop.json").read_text())
    doc["puncture_faces"]["p1"] = doc["outer_face"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "outer face" in err


def test_internal_error_exit_3(capsys, monkeypatch):
    cli = importlib.import_module("aps_homology.cli")

    def broken(*a, **k):
        raise InconsistentComplex("D^2 != 0")

    monkeypatch.setattr(cli, "assemble", broken)
    code, _, err = run(capsys, "compute", CORPUS / "hopf.json")
    assert code == 3 and "internal error" in err


def test_verify_corpus_and_dumps(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", CORPUS / "two_hole_eight.json", "--format", "json")
    assert code == 0 and json.loads(out)["ok"]
    dump = tmp_path / "c.json"
    run(capsys, "compute", CORPUS / "trefoil.json", "--dump-complex", dump)
    code, _, _ = run(capsys, "verify", dump)
    assert code == 0
    doc = json.loads(dump.read_text())
    next(dd for dd in doc["differentials"] if dd["entries"])["entries"][0][2] *= -1
    dump.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", dump)
    assert code == 4 and "d_squared" in out


def test_verify_fuzz(capsys):
    code, out, _ = run(capsys, "verify", "--fuzz", 10, "--max-crossings", 4, "--seed", 7, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["checked"] == 10 and doc["failures"] == []


def test_verify_needs_input(capsys):
    assert run(capsys, "verify")[0] == 2


def test_detect_outputs(capsys):
    for name, verdict, rank in [("annulus_loop", "EmbeddedKnotCandidate", 2),
                                ("unlink2", "NotEmbeddedKnot", 4), ("empty", "EmptyLink", 1)]:
        code, out, _ = run(capsys, "detect", CORPUS / f"{name}.json", "--format", "json")
        doc = json.loads(out)
        assert (code, doc["verdict"], doc["total_rank_mod2"]) == (0, verdict, rank)


def test_move_and_cube(capsys, tmp_path):
    out_path = tmp_path / "kink.json"
    code, _, _ = run(capsys, "move", CORPUS / "annulus_loop.json", "--kind", "R1", "--at", "0", "-o", out_path)
    assert code == 0
    code, out, _ = run(capsys, "cube", out_path, "--format", "json")
    doc = json.loads(out)
    assert [s["circles"] for s in doc["states"]] == [2, 1] or [s["circles"] for s in doc["states"]] == [1, 2]
    assert doc["state_sum_euler"] in (2, -2)
    code, _, err = run(capsys, "move", CORPUS / "hopf.json", "--kind", "reorder", "--at", "1,1")
    assert code == 2 and "permutation" in err


def test_cube_hopf(capsys):
    code, out, _ = run(capsys, "cube", CORPUS / "hopf.json")
    assert code == 0
    assert "2 merges, 2 splits" in out


def test_bad_thread_count(capsys):
    assert run(capsys, "compute", CORPUS / "hopf.json", "--threads", 0)[0] == 2
