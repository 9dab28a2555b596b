import json

import pytest

from hopforders.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_verify_hopf_p3(capsys):
    code, rep, _ = run(capsys, "verify-hopf", "--p", "3")
    assert code == 0 and rep["status"] == "pass"
    ids = [c["check_id"] for c in rep["checks"]]
    assert ids == sorted(ids)
    assert any(i.startswith("automorphisms/") for i in ids)
    assert rep["schema"] == "hopforders-report/1"


def test_invalid_p_is_config_error(capsys):
    code, rep, err = run(capsys, "verify-hopf", "--p", "2")
    assert code == 2 and rep is None and "InvalidP" in err


def test_mutation_reports_witness(capsys):
    code, rep, _ = run(capsys, "verify-hopf", "--p", "3", "--mutate", "omega-a1a1")
    assert code == 1
    failed = [c for c in rep["checks"] if c["status"] == "fail"]
    assert failed and all("witness" in c for c in failed)


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify-hopf"])
    assert exc.value.code == 2


def test_verify_order_p3(capsys):
    code, rep, _ = run(capsys, "verify-order", "--p", "3")
    assert code == 0
    assert "O_K[pi]" in rep["parameters"]["note"]
    assert any(c["check_id"] == "integrals/eps_is_2p" for c in rep["checks"])


@pytest.mark.parametrize("alpha", ["z-1", "1", "pi"])
def test_larson(capsys, alpha):
    code, rep, _ = run(capsys, "larson", "--p", "3", "--alpha", alpha)
    assert code == 0
    assert rep["parameters"]["ideal_condition"] is (alpha == "pi")


def test_larson_containment_violation(capsys):
    code, _, err = run(capsys, "larson", "--p", "3", "--alpha", "2")
    assert code == 2 and "ContainmentViolation" in err


def test_descent_bundled(capsys):
    code, rep, _ = run(capsys, "descent")
    assert code == 0
    assert rep["parameters"]["condition/paper-example"] is True
    assert rep["parameters"]["condition/paper-theorem"] is False


def test_descent_trivial_unit_fails(capsys):
    code, rep, _ = run(capsys, "descent", "--w", "1", "--d", "1")
    assert code == 1 and rep["status"] == "fail"


def test_descent_not_a_unit(capsys):
    code, _, err = run(capsys, "descent", "--w", "2", "--d", "1")
    assert code == 2 and "NotAUnit" in err


def test_reports_are_deterministic(capsys):
    a = run(capsys, "larson", "--p", "5", "--alpha", "pi")[1]
    b = run(capsys, "larson", "--p", "5", "--alpha", "pi")[1]
    assert json.dumps(a) == json.dumps(b)


def test_out_and_env_dir(tmp_path, monkeypatch, capsys):
    out = tmp_path / "r.json"
    assert main(["larson", "--p", "3", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["command"] == "larson"
    monkeypatch.setenv("HOPFORDERS_OUT_DIR", str(tmp_path / "reports"))
    assert main(["larson", "--p", "3"]) == 0
    assert (tmp_path / "reports" / "larson-p3.json").exists()
    assert capsys.readouterr().out == ""
