import json
import math

import pytest

from obcast.cli import main
from obcast.ensembles import dumps, gallery


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_gallery_listing(capsys):
    code, out, _ = run(capsys, "gallery")
    assert code == 0
    assert "bb84" in out and "thm1-pairs" in out and "gen-bb84(<theta>)" in out


def test_gallery_dump_round_trips(capsys):
    code, out, _ = run(capsys, "gallery", "prop1-povm")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "povm"


def test_gallery_unknown_name(capsys):
    code, _, err = run(capsys, "gallery", "nope")
    assert code == 1
    assert "unknown gallery name" in err


def test_bound_postinfo(capsys):
    code, out, _ = run(capsys, "bound", "--gallery", "bb84", "--method", "postinfo")
    assert code == 0
    record = json.loads(out)
    assert record["computed"] == pytest.approx((2 + math.sqrt(2)) / 4, abs=1e-6)
    assert record["gap"] <= 1e-7


def test_bound_postinfo_below_one_for_three_settings(capsys):
    code, out, _ = run(capsys, "bound", "--gallery", "thm1-pairs", "--method", "postinfo")
    assert code == 0
    assert json.loads(out)["computed"] < 1


def test_bound_disk(capsys):
    code, out, _ = run(capsys, "bound", "--gallery", "obb", "--method", "disk")
    assert code == 0
    record = json.loads(out)
    assert record["computed"] == pytest.approx(0.603553, abs=1e-6)
    assert record["certificate"] == "analytic"


def test_bound_thm4_and_prop4(capsys):
    code, out, _ = run(capsys, "bound", "--gallery", "gen-bb84(pi/2)", "--method", "thm4")
    assert code == 0
    assert json.loads(out)["computed"] == pytest.approx((2 - math.sqrt(2)) / 4, abs=1e-9)
    code, out, _ = run(capsys, "bound", "--gallery", "bb84", "--method", "prop4")
    assert code == 0
    assert json.loads(out)["computed"] == pytest.approx((2 + math.sqrt(2)) / 4, abs=1e-6)


def test_bound_unsupported_combination(capsys):
    code, _, err = run(capsys, "bound", "--gallery", "bb84", "--method", "disk")
    assert code == 1 and "disk" in err


def test_bound_from_file(tmp_path, capsys):
    path = tmp_path / "bb84.json"
    path.write_text(dumps(gallery("bb84")))
    code, out, _ = run(capsys, "bound", "--file", str(path), "--method", "postinfo")
    assert code == 0
    assert json.loads(out)["computed"] == pytest.approx((2 + math.sqrt(2)) / 4, abs=1e-6)


def test_check_feasible_gallery(capsys):
    code, out, _ = run(capsys, "check", "--gallery", "minimal-qutrit")
    assert code == 0
    assert "inconclusive" in out
    assert "feasible" in out


def test_check_six_state_set(capsys):
    code, out, _ = run(capsys, "check", "--gallery", "cor4-six")
    assert code == 0
    assert "quantum-communication protocol (cor4-isometry): verified" in out
    assert "infeasible" in out


def test_check_three_setting_pairs(capsys):
    code, out, _ = run(capsys, "check", "--gallery", "thm1-pairs")
    assert code == 0
    assert "thm1-isometry): verified" in out
    assert "kill-pattern certificate: infeasible" in out


def test_check_flags_orthogonality_violation(tmp_path, capsys):
    payload = {
        "kind": "gop",
        "dims": [2, 2],
        "prior": [0.5, 0.5],
        "states": [
            [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
            [[[1.0, 0.0], [0.0, 0.0]], [[0.7071067811865476, 0.0], [0.7071067811865476, 0.0]]],
        ],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    code, out, _ = run(capsys, "check", "--file", str(path))
    assert code == 3
    assert "VIOLATED" in out


def test_check_malformed_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "check", "--file", str(path))
    assert code == 1


def test_moe_subcommand(capsys):
    code, out, _ = run(capsys, "moe", "--game", "obb")
    assert code == 0
    assert "overlap constant: 1.0" in out
    code, out, _ = run(capsys, "moe", "--game", "bb84")
    assert code == 0
    assert repr(0.5 * (1 + 1 / math.sqrt(2)))[:12] in out


def test_ur_test_subcommand(capsys):
    code, out, _ = run(capsys, "ur-test", "--seed", "3", "--trials", "50")
    assert code == 0
    assert "PASS" in out


def test_usage_errors(capsys):
    assert run(capsys, "bound", "--gallery", "bb84")[0] == 1  # missing --method
    assert run(capsys, "bogus")[0] == 1


def test_reproduce_subset_json_and_csv(tmp_path, capsys):
    out_json = tmp_path / "r.json"
    code, stdout, _ = run(
        capsys,
        "reproduce",
        "--only",
        "prop1",
        "--out",
        str(out_json),
        "--seed",
        "42",
    )
    assert code == 0
    records = json.loads(out_json.read_text())
    assert {r["id"] for r in records} == {"prop1-outcome-table", "prop1-povm-spectra", "prop1-povm-sum"}
    assert all(r["pass"] for r in records)
    assert "PASS prop1-povm-sum" in stdout

    out_csv = tmp_path / "r.csv"
    code, _, _ = run(
        capsys,
        "reproduce",
        "--only",
        "prop1",
        "--format",
        "csv",
        "--out",
        str(out_csv),
        "--quiet",
    )
    assert code == 0
    lines = out_csv.read_text().strip().splitlines()
    assert lines[0].startswith("id,paper_ref,computed")
    assert len(lines) == 1 + len(records)


def test_reproduce_seed_determinism_on_a_random_case(tmp_path, capsys):
    paths = []
    for k in range(2):
        out = tmp_path / f"t{k}.json"
        code, _, _ = run(
            capsys,
            "reproduce",
            "--only",
            "moe-transpose",
            "--seed",
            "7",
            "--out",
            str(out),
            "--quiet",
        )
        assert code == 0
        paths.append(out.read_bytes())
    assert paths[0] == paths[1]
