import json

import pytest

from cli import EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, (json.loads(out) if out else None), out


def test_plane_info(capsys):
    code, cert, _ = run(capsys, "plane", "info", "--q", "9")
    assert code == EXIT_OK
    assert cert["kind"] == "plane_info"
    assert cert["payload"]["n_points"] == 91
    assert cert["payload"]["singer_order"] == 91
    assert cert["payload"]["baer_partition_size"] == 7
    assert cert["field"] == {"p": 3, "h": 2, "modulus": [1, 0, 1]}


def test_construct_canonical(capsys):
    code, cert, _ = run(capsys, "construct", "canonical", "--q", "5", "--verify")
    assert code == EXIT_OK
    assert cert["kind"] == "resolving"
    assert cert["payload"]["size"] == 16
    assert cert["payload"]["verified"] is True
    assert cert["provenance"]["generator"] == "canonical"


def test_output_is_deterministic(capsys):
    first = run(capsys, "construct", "c", "--id", "1", "--q", "7")[2]
    second = run(capsys, "construct", "c", "--id", "1", "--q", "7")[2]
    assert first == second


def test_verify_round_trip_and_corruption(capsys, tmp_path):
    path = tmp_path / "canonical.json"
    code, cert, _ = run(capsys, "construct", "canonical", "--q", "3", "--out", str(path))
    assert code == EXIT_OK and path.exists()
    code, report, _ = run(capsys, "verify", "resolving", "--in", str(path))
    assert code == EXIT_OK
    assert report["kind"] == "verify_report" and report["payload"]["ok"] is True

    cert["payload"]["points"] = cert["payload"]["points"][1:]
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(cert))
    assert run(capsys, "verify", "resolving", "--in", str(broken))[0] == EXIT_USAGE

    cert["payload"]["verified"] = False
    broken.write_text(json.dumps(cert))
    code, report, _ = run(capsys, "verify", "resolving", "--in", str(broken))
    assert code == EXIT_FAILED
    assert report["payload"]["ok"] is False
    assert report["payload"]["violations"]


def test_geometry_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "construct", "canonical", "--q", "6")[0] == EXIT_USAGE
    assert run(capsys, "construct", "fano5", "--q", "3")[0] == EXIT_USAGE
    assert run(capsys, "construct", "c", "--q", "7")[0] == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "verify", "semi", "--in", str(bad))[0] == EXIT_USAGE


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["construct", "canonical"])
    assert excinfo.value.code == 2


def test_search_fano(capsys):
    code, cert, _ = run(capsys, "search", "mu", "--q", "2")
    assert code == EXIT_OK
    assert cert["kind"] == "search_result"
    assert cert["payload"]["optimum"] == 5
    assert cert["payload"]["proof_mode"] == "exhaustive"
    assert len(cert["payload"]["points"]) + len(cert["payload"]["lines"]) == 5


def test_search_budget_exit_3(capsys):
    code, cert, _ = run(capsys, "search", "mu", "--q", "3", "--budget-nodes", "10")
    assert code == EXIT_BUDGET
    assert cert["payload"]["proof_mode"] == "upper_bound_only"
    assert cert["payload"]["optimum"] == 8


def test_no_smaller(capsys, tmp_path):
    checkpoint = tmp_path / "fano-k4.json"
    code, cert, _ = run(capsys, "search", "no-smaller", "--q", "2", "--k", "4", "--checkpoint", str(checkpoint))
    assert code == EXIT_OK
    assert cert["payload"]["holds"] is True
    assert json.loads(checkpoint.read_text())["complete"] is True
    code, cert, _ = run(capsys, "search", "no-smaller", "--q", "2", "--k", "5")
    assert code == EXIT_FAILED
    assert cert["payload"]["witness"] is not None


def test_redei_commands(capsys):
    code, cert, _ = run(capsys, "redei", "szw-random", "--q", "3", "--trials", "20", "--seed", "4")
    assert code == EXIT_OK
    assert cert["payload"]["holds"] == 20
    assert cert["provenance"]["params"] == {"seed": 4, "trials": 20}
    code, cert, _ = run(capsys, "redei", "profile", "--q", "5")
    assert code == EXIT_OK
    assert cert["payload"]["ok"] is True
    code, cert, _ = run(capsys, "redei", "index-bounds", "--q", "7")
    assert code == EXIT_OK
    assert cert["payload"]["ok"] is True
    assert "large_index" not in cert["payload"]


def test_redei_profile_from_certificate(capsys, tmp_path):
    path = tmp_path / "semi.json"
    run(capsys, "construct", "vertexless-triangle", "--q", "7", "--out", str(path))
    code, cert, _ = run(capsys, "redei", "profile", "--q", "7", "--in", str(path))
    assert code == EXIT_OK
    assert cert["provenance"]["generator"] == "external"
