import io
import json
import subprocess
import sys

import pytest

from weakframe.catalog import get_example
from weakframe.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def spec_file(tmp_path):
    def make(name, **params):
        path = tmp_path / f"{name}.json"
        get_example(name, **params).dump(path)
        return str(path)

    return make


def test_example_emits_valid_spec(tmp_path):
    code, out, _ = run("example", "classical-S", "--param", "n=2", "--param", "p=2")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 2 and data["p"] == 2 and len(data["coordinates"]) == 6
    path = tmp_path / "s.json"
    assert run("example", "classical-S", "--emit", str(path))[0] == 0
    assert json.loads(path.read_text())["name"] == "classical-S"


def test_example_lam_and_torus_params():
    code, out, _ = run("example", "euclid-weak-C", "--param", "n=2", "--param", "lam=2,3", "--param", "torus=1")
    assert code == 0
    data = json.loads(out)
    assert data["name"] == "euclid-weak-C-torus" and data["f"][3][2] == "3"


@pytest.mark.parametrize("param", ["n=0", "q=1", "lam=-1", "n"])
def test_example_bad_param_is_spec_error(param):
    code, _, err = run("example", "euclid-weak-C", "--param", param)
    assert code == 2 and err.startswith("error:")


def test_validate_passes(spec_file):
    code, out, _ = run("validate", spec_file("classical-S"), "--samples", "20")
    assert code == 0
    assert out.startswith("axioms: PASS")


def test_classify_generic(spec_file):
    code, out, _ = run("classify", spec_file("generic-weak-f"), "--samples", "30")
    assert code == 0
    assert out.splitlines()[0] == "valid metric weak f-structure; not normal"


def test_classify_json(spec_file):
    code, out, _ = run("classify", spec_file("classical-S"), "--samples", "20", "--report", "json")
    doc = json.loads(out)
    assert code == 0 and doc["weak_S"] is True and doc["weak_C"] is False
    assert set(doc["residuals"]) == {"N1", "d_Phi", "d_eta_minus_Phi", "d_eta"}


def test_check_parallel_f_on_euclid(spec_file):
    code, out, _ = run("check", spec_file("euclid-weak-C", n=2), "--theorem", "parallel-f", "--report", "json")
    assert code == 0
    doc = json.loads(out)
    (res,) = doc["checks"]
    counted = [x for x in res["identities"] if x["status"] in ("pass", "fail")]
    assert counted and all(x["max_residual"] < 1e-9 for x in counted)


def test_check_all_text_lists_every_check(spec_file):
    code, out, _ = run("check", spec_file("classical-S"), "--samples", "10")
    assert code == 0
    heads = [line.split(":")[0] for line in out.splitlines() if not line.startswith(" ")]
    assert heads == ["master-3.1", "normal-2.1", "weak-K", "almost-S", "h-identities", "weak-S", "weak-C", "parallel-f"]


def test_check_json_is_byte_identical(spec_file):
    path = spec_file("generic-weak-f")
    a = run("check", path, "--theorem", "all", "--seed", "42", "--report", "json", "--samples", "20")[1]
    b = run("check", path, "--theorem", "all", "--seed", "42", "--report", "json", "--samples", "20")[1]
    assert a == b
    doc = json.loads(a)
    assert doc["seed"] == 42 and doc["samples"] == 20 and doc["pass"] is True


def test_seed_changes_worst_point(spec_file):
    path = spec_file("generic-weak-f")
    a = json.loads(run("check", path, "--theorem", "master-3.1", "--report", "json", "--seed", "1", "--samples", "10")[1])
    b = json.loads(run("check", path, "--theorem", "master-3.1", "--report", "json", "--seed", "2", "--samples", "10")[1])
    assert a["checks"][0]["identities"][0]["worst_point"] != b["checks"][0]["identities"][0]["worst_point"]


def test_more_samples_never_lower_the_residual(spec_file):
    path = spec_file("generic-weak-f")

    def worst(n):
        doc = json.loads(run("check", path, "--theorem", "master-3.1", "--report", "json", "--samples", str(n))[1])
        return doc["checks"][0]["identities"][0]["max_residual"]

    assert worst(10) <= worst(20) <= worst(40)


def test_invalid_structure_exits_1(tmp_path):
    spec = get_example("euclid-weak-C")
    spec.Q[2][2] = "3"
    path = tmp_path / "bad.json"
    spec.dump(path)
    code, out, _ = run("validate", str(path), "--samples", "5")
    assert code == 1 and "Q-xi" in out
    code, out, _ = run("check", str(path), "--samples", "5")
    assert code == 1 and out.startswith("not a valid metric weak f-structure")
    code, out, _ = run("classify", str(path), "--samples", "5", "--report", "json")
    assert code == 1 and json.loads(out)["valid_metric_weak_f"] is False


def test_asymmetric_metric_exits_2_with_location(tmp_path):
    spec = get_example("euclid-weak-C")
    spec.g[0][1] = "0.5"
    path = tmp_path / "asym.json"
    spec.dump(path)
    code, _, err = run("validate", str(path))
    assert code == 2
    assert "g[0][1]" in err and "symmetric" in err and "asym.json:" in err


def test_malformed_json_exits_2(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"name": "x", ')
    assert run("validate", str(path))[0] == 2
    assert run("validate", str(tmp_path / "missing.json"))[0] == 2


def test_domain_error_exits_3(tmp_path):
    spec = get_example("euclid-weak-C")
    spec.f[0][1] = "-log(x1 + 0.5)"
    spec.f[1][0] = "log(x1 + 0.5)"
    path = tmp_path / "dom.json"
    spec.dump(path)
    code, _, err = run("validate", str(path))
    assert code == 3 and "log" in err


def test_console_entry_point(spec_file):
    path = spec_file("classical-S")
    proc = subprocess.run(
        [sys.executable, "-m", "weakframe.cli", "check", path, "--theorem", "weak-S", "--samples", "5"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("weak-S: PASS")
