import json
import subprocess
import sys

import pytest
from conftest import EXAMPLE_NAMES

from crossmod.cli import main
from crossmod.corpus import corpus_dir
from crossmod.presentation import parse_presentation

REPORT_FIELDS = {"input", "coefficient", "via", "count", "exponent", "invariant", "wall_time", "jobs"}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_trefoil_both_paths(capsys):
    code, out, _ = run(capsys, "invariant", "spun_trefoil", "--cm", "A", "--via", "both", "--format", "json")
    assert code == 0
    reports = json.loads(out)
    assert [r["via"] for r in reports] == ["diagram", "presentation"]
    assert all(r["invariant"] == "4/3" for r in reports)
    assert all(set(r) == REPORT_FIELDS for r in reports)


def test_hopf_prints_integer_as_fraction(capsys):
    code, out, _ = run(capsys, "invariant", "spun_hopf", "--cm", "A", "--format", "json")
    assert code == 0 and json.loads(out)["invariant"] == "18/1"


def test_k2_with_s3(capsys):
    code, out, _ = run(capsys, "invariant", "trivial_sphere_K2", "--cm", "conj_S3", "--format", "json")
    assert json.loads(out)["invariant"] == "1/1"


def test_text_output(capsys):
    code, out, _ = run(capsys, "invariant", "sigma_prime")
    assert code == 0 and "I = 24" in out


def test_disagreement_exits_2(capsys, tmp_path, monkeypatch):
    # the trefoil diagram paired with the Hopf presentation
    (tmp_path / "spun_trefoil.kwb").write_text((corpus_dir() / "spun_trefoil.kwb").read_text())
    (tmp_path / "spun_trefoil.cmp").write_text((corpus_dir() / "spun_hopf.cmp").read_text())
    monkeypatch.setenv("CROSSMOD_CORPUS", str(tmp_path))
    code, _, err = run(capsys, "invariant", "spun_trefoil", "--via", "both")
    assert code == 2 and "disagree" in err


def test_kwb_path_input(capsys):
    path = str(corpus_dir() / "spun_hopf.kwb")
    code, out, _ = run(capsys, "invariant", path, "--via", "both", "--format", "json")
    assert code == 0 and {r["invariant"] for r in json.loads(out)} == {"18/1"}


def test_cmp_path_needs_presentation_path(capsys):
    path = str(corpus_dir() / "spun_hopf.cmp")
    code, out, _ = run(capsys, "invariant", path, "--format", "json")
    assert code == 0 and json.loads(out)["via"] == "presentation"
    code, _, err = run(capsys, "invariant", path, "--via", "diagram")
    assert code == 1 and "diagram" in err


@pytest.mark.parametrize("jobs", [1, 4])
def test_jobs_flag(capsys, jobs):
    code, out, _ = run(capsys, "invariant", "spun_trefoil", "--via", "both", "--jobs", str(jobs), "--format", "json")
    assert code == 0 and {r["count"] for r in json.loads(out)} == {12}


def test_bad_jobs(capsys):
    assert run(capsys, "invariant", "spun_trefoil", "--jobs", "0")[0] == 1


def test_unknown_example_and_coefficient(capsys):
    code, _, err = run(capsys, "invariant", "nope")
    assert code == 1
    code, _, err = run(capsys, "invariant", "spun_trefoil", "--cm", "nope")
    assert code == 1 and "nope" in err


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
@pytest.mark.parametrize("ext", ["kwb", "cmp"])
def test_validate_corpus(capsys, name, ext):
    code, out, _ = run(capsys, "validate", str(corpus_dir() / f"{name}.{ext}"))
    assert code == 0 and "ok" in out


@pytest.mark.parametrize("stem", ["A", "z2_z4_sign", "trivial"])
def test_validate_xmod(capsys, stem):
    assert run(capsys, "validate", str(corpus_dir() / f"{stem}.xmod"))[0] == 0


def test_validate_mutated_file(capsys, tmp_path):
    text = (corpus_dir() / "spun_trefoil.kwb").read_text().replace("under_out=C", "under_out=Q")
    path = tmp_path / "bad.kwb"
    path.write_text(text)
    code, _, err = run(capsys, "validate", str(path))
    assert code == 1 and "line" in err and "'Q'" in err


def test_validate_empty_file(capsys, tmp_path):
    for name in ("empty.kwb", "empty.txt"):
        path = tmp_path / name
        path.write_text("")
        assert run(capsys, "validate", str(path))[0] == 1


def test_validate_missing_file(capsys, tmp_path):
    assert run(capsys, "validate", str(tmp_path / "none.kwb"))[0] == 1


def test_validate_consistency_flag(capsys, tmp_path):
    text = (corpus_dir() / "spun_trefoil.kwb").read_text().replace("end e last case=1", "end e last case=2")
    path = tmp_path / "bad.kwb"
    path.write_text(text)
    assert run(capsys, "validate", str(path))[0] == 0
    code, _, err = run(capsys, "validate", str(path), "--cm", "conj_S3")
    assert code == 1 and "band 'e'" in err


def test_validate_bad_xmod(capsys, tmp_path):
    path = tmp_path / "bad.xmod"
    path.write_text((corpus_dir() / "A.xmod").read_text().replace("0 2 1", "0 1 1"))
    assert run(capsys, "validate", str(path))[0] == 1


def test_extract_round_trips(capsys, tmp_path):
    out = tmp_path / "t.cmp"
    assert run(capsys, "extract", "spun_trefoil", "--out", str(out))[0] == 0
    p = parse_presentation(out.read_text())
    assert p.principal_names == ("e", "f") and len(p.two_relations) == 2


def test_extract_k3_and_bandless(capsys, tmp_path):
    code, out, _ = run(capsys, "extract", "trivial_sphere_K3")
    assert code == 0 and "rel2" not in out
    path = tmp_path / "plain.kwb"
    path.write_text("kwb v1\ncircles 1\narc X circle 0\n")
    code, out, _ = run(capsys, "extract", str(path))
    assert "pgen" not in out and parse_presentation(out).n_principal == 0


def test_examples_listing(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0 and len(out.strip().splitlines()) >= 8
    code, out, _ = run(capsys, "examples", "--format", "json")
    assert len(json.loads(out)) >= 8
    code, out, _ = run(capsys, "examples", "hopf")
    assert out.split()[0] == "spun_hopf" and len(out.strip().splitlines()) == 1


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "crossmod", "invariant", "spun_trefoil", "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["invariant"] == "4/3"
