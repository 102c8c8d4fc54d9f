import json
import subprocess
import sys

import pytest

from modp_companion.cli import THREADS_ENV, main
from modp_companion.eigensystems import CompanionFamily, synthetic_family


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_space_example(capsys):
    status, out, _ = run(capsys, "space", "--k", "12", "--N", "1", "--p", "13", "--prec", "20")
    assert status == 0
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["basis"]["dimension"] == 2
    assert doc["header"]["command"] == "space" and doc["header"]["config"]["k"] == 12
    assert "version" in doc["header"]


@pytest.mark.parametrize("argv,flag", [
    (["space", "--k", "12", "--N", "0", "--p", "13"], "--N"),
    (["space", "--k", "12", "--N", "1", "--p", "3"], "--p"),
    (["space", "--k", "12", "--N", "1", "--p", "15"], "--p"),
    (["space", "--k", "4", "--N", "7", "--p", "7"], "--p"),
    (["space", "--k", "0", "--N", "1", "--p", "13"], "--k"),
    (["synthetic", "--n", "4", "--p", "7"], "--n"),
    (["synthetic", "--n", "1", "--p", "7", "--trials", "0"], "--trials"),
    (["eigen", "--k", "4", "--N", "5", "--p", "7", "--primes", "2,4"], "--primes"),
])
def test_usage_errors_name_the_flag(capsys, argv, flag):
    status, out, err = run(capsys, *argv)
    assert status == 2 and out == ""
    assert flag in err


def test_malformed_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["space", "--k", "twelve", "--N", "1", "--p", "13"])
    assert exc.value.code == 2


def test_synthetic_campaign_example(capsys):
    status, out, _ = run(capsys, "synthetic", "--n", "2", "--p", "7", "--trials", "100",
                         "--norm-bound", "5000", "--seed", "42")
    assert status == 0
    doc = json.loads(out)
    assert doc["summary"] == {"trials": 100, "passed": 100}
    assert all(r["certificate"]["fully_passing"] for r in doc["results"])


def test_same_seed_gives_identical_bytes(capsys, monkeypatch):
    argv = ["synthetic", "--n", "3", "--p", "5", "--trials", "4", "--norm-bound", "800", "--seed", "7"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    monkeypatch.setenv(THREADS_ENV, "2")
    _, c, _ = run(capsys, *argv)
    assert a == b == c
    _, d, _ = run(capsys, *argv[:-1], "8")
    assert d != a


def test_bad_thread_count(capsys, monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "zero")
    status, _, err = run(capsys, "synthetic", "--n", "1", "--p", "5", "--trials", "1")
    assert status == 2 and THREADS_ENV in err


def test_verify_round_trip_and_tampering(capsys, tmp_path):
    path = tmp_path / "campaign.json"
    status, _, _ = run(capsys, "synthetic", "--n", "1", "--p", "5", "--trials", "5",
                       "--norm-bound", "1000", "--seed", "3", "--output", str(path))
    assert status == 0
    status, out, _ = run(capsys, "verify", str(path))
    assert status == 0 and json.loads(out)["reproduced"] is True
    doc = json.loads(path.read_text())
    doc["results"][2]["certificate"]["lemma_part2"]["checked"] += 1
    path.write_text(json.dumps(doc))
    status, out, _ = run(capsys, "verify", str(path))
    assert status == 1 and json.loads(out)["reproduced"] is False


def test_verify_rejects_garbage(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{not json")
    assert run(capsys, "verify", str(path))[0] == 2
    path.write_text(json.dumps({"schema": 99}))
    assert run(capsys, "verify", str(path))[0] == 2


def test_companion_on_a_family_file(capsys, tmp_path):
    fam = synthetic_family(2, 5, seed=12)
    good = tmp_path / "family.json"
    good.write_text(json.dumps(fam.to_json()))
    out_path = tmp_path / "cert.json"
    status, _, _ = run(capsys, "companion", "--family", str(good), "--norm-bound", "1500",
                       "--output", str(out_path))
    assert status == 0
    assert json.loads(out_path.read_text())["certificate"]["fully_passing"]
    assert run(capsys, "verify", str(out_path))[0] == 0

    systems = list(fam.systems)
    systems[3] = systems[3].with_eigenvalues({"l3.2": systems[3].eigenvalue("l3.2") + 1})
    bad = CompanionFamily(fam.monoid, fam.gammas, fam.subsets, systems)
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(bad.to_json()))
    status, out, _ = run(capsys, "companion", "--family", str(bad_path), "--norm-bound", "1500")
    cert = json.loads(out)["certificate"]
    assert status == 1 and not cert["lemma_part1"]["passed"]
    assert cert["lemma_part1"]["counterexample"]["norm"] == 3


def test_companion_on_the_bundled_target(capsys, tmp_path):
    path = tmp_path / "eta.json"
    status, _, _ = run(capsys, "companion", "--target", "eta23", "--primes", "2,3",
                       "--output", str(path))
    assert status == 0
    doc = json.loads(path.read_text())
    assert doc["header"]["config"]["p"] == 5
    assert doc["certificate"]["fully_passing"]
    assert doc["certificate"]["target_match"]["sturm_bound"] == 220
    assert doc["candidate"].startswith("1*q + 4*q^2 + 4*q^3 + 1*q^6")   # q - q^2 - q^3 + q^6 mod 5
    status, out, _ = run(capsys, "verify", str(path), "--format", "text")
    assert status == 0 and "reproduced: True" in out


def test_eigen_and_text_format(capsys):
    status, out, _ = run(capsys, "eigen", "--k", "12", "--N", "1", "--p", "13", "--primes", "2",
                         "--allow-unnormalized", "--format", "text")
    assert status == 0
    assert out.startswith("# modp-companion") and "2 eigenforms" in out
    status, out, _ = run(capsys, "eigen", "--k", "5", "--N", "23", "--p", "5", "--character", "-23",
                         "--primes", "2,3,5")
    doc = json.loads(out)
    assert status == 0 and doc["dimension"] == 9 and doc["eigenforms"]


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "modp_companion.cli", "space", "--k", "4", "--N", "1",
                          "--p", "7", "--prec", "10", "--format", "text"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "dimension 1" in res.stdout
