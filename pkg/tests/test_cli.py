import csv
import io
import json
import math

import pytest

from ersc import GeneralParams, from_json
from ersc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_deterministic(capsys):
    args = ("sample", "--model", "kahle", "--n", "3", "--p", "0.5,0.5", "--count", "4", "--seed", "7")
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    lines = a.splitlines()
    assert len(lines) == 4
    for line in lines:
        assert from_json(line).n == 3


def test_sample_without_seed_reports_it(capsys):
    code, out, err = run(capsys, "sample", "--model", "gnp", "--n", "4", "--p", "0.5", "--count", "2")
    assert code == 0 and err.startswith("seed: ")
    seed = err.split()[1]
    _, again, _ = run(capsys, "sample", "--model", "gnp", "--n", "4", "--p", "0.5", "--count", "2", "--seed", seed)
    assert again == out


def test_sample_lm_complete(capsys):
    _, out, _ = run(capsys, "sample", "--model", "lm", "--n", "10", "--d", "1", "--p", "1.0", "--count", "1", "--seed", "0")
    C = from_json(out)
    assert len(C.simplices(1)) == 45 and len(C.simplices(2)) == 120


def test_sample_general_from_file(capsys, tmp_path):
    pfile = tmp_path / "params.json"
    pfile.write_text(GeneralParams.random(3, 0.2, 0.9, seed=0).to_json())
    out_path = tmp_path / "out.jsonl"
    code, out, _ = run(
        capsys, "sample", "--model", "general", "--pfile", str(pfile), "--count", "50", "--seed", "1",
        "--output", str(out_path),
    )
    assert code == 0 and out == ""
    assert len(out_path.read_text().splitlines()) == 50


@pytest.mark.parametrize(
    "argv",
    [
        ("sample", "--model", "gnp", "--n", "4", "--p", "1.5", "--count", "1", "--seed", "0"),
        ("sample", "--model", "gnp", "--n", "4", "--count", "1"),
        ("sample", "--model", "lm", "--n", "4", "--d", "3", "--p", "0.5", "--count", "1"),
        ("sample", "--model", "general", "--count", "1"),
        ("sample", "--model", "gnp", "--n", "4", "--p", "0.5,0.2", "--count", "1"),
        ("sample", "--model", "gnp", "--n", "4", "--p", "0.5", "--count", "-1"),
        ("stats", "--model", "gnp", "--n", "4", "--p", "0.5", "--count", "10"),
        ("verify", "--suite", "product"),
        ("verify", "--suite", "a3", "--p", "0.4"),
        ("enumerate", "--kind", "C_n", "--n", "9"),
        ("fit", "--space", "/nonexistent", "--obs", "f_1", "--targets", "[1]"),
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_argparse_rejects_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--model", "gnp", "--bogus", "1"])
    assert exc.value.code == 2


def test_stats_kahle_csv(capsys):
    code, out, _ = run(capsys, "stats", "--model", "kahle", "--n", "10", "--p", "0.5,0.5", "--count", "3000", "--seed", "2")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["d", "f_mean_mc", "f_expected", "phi_mean_mc", "phi_expected", "z_score"]
    assert len(rows) == 9
    for r in rows:
        assert abs(float(r["z_score"])) < 4
    zero = [r for r in rows if r["d"] == "3"][0]
    assert float(zero["f_expected"]) == 0.0 and float(zero["f_mean_mc"]) == 0.0


def test_stats_general_csv(capsys, tmp_path):
    pfile = tmp_path / "p.json"
    pfile.write_text(GeneralParams.random(4, 0.2, 0.9, seed=3).to_json())
    code, out, _ = run(capsys, "stats", "--model", "general", "--pfile", str(pfile), "--count", "5000", "--seed", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 15
    assert rows[0]["simplex"] == "0"
    assert all(math.isfinite(float(r["z_score"])) for r in rows)


def test_enumerate_dist_fit_pipeline(capsys, tmp_path):
    space = tmp_path / "c3.jsonl"
    assert run(capsys, "enumerate", "--kind", "C_n", "--n", "3", "--output", str(space))[0] == 0
    assert len(space.read_text().splitlines()) == 9

    code, out, _ = run(capsys, "dist", "--model", "kahle", "--n", "3", "--p", "0.4,0.6", "--space", str(space))
    assert code == 0
    probs = [json.loads(line)["prob"] for line in out.splitlines()]
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)

    targets = tmp_path / "t.json"
    targets.write_text(json.dumps([1.2, 0.4**3 * 0.6, 0.4**3]))
    code, out, _ = run(
        capsys, "fit", "--space", str(space), "--obs", "f_1", "--obs", "f_2", "--obs", "phi_2",
        "--targets", str(targets),
    )
    assert code == 0
    report = json.loads(out)
    assert set(report) == {"theta", "gradient_norm", "iterations", "achieved", "entropy"}
    assert math.exp(-report["theta"][0]) == pytest.approx(0.4 / 0.6, abs=1e-8)


def test_dist_gnp_on_graph_space(capsys, tmp_path):
    space = tmp_path / "g.jsonl"
    run(capsys, "enumerate", "--kind", "graphs", "--n", "4", "--output", str(space))
    code, out, _ = run(capsys, "dist", "--model", "gnp", "--n", "4", "--p", "0.3", "--space", str(space))
    assert code == 0 and len(out.splitlines()) == 64


def test_fit_infeasible_exit_2(capsys, tmp_path):
    space = tmp_path / "c3.jsonl"
    run(capsys, "enumerate", "--kind", "C_n", "--n", "3", "--output", str(space))
    code, _, err = run(capsys, "fit", "--space", str(space), "--obs", "f_1", "--targets", "[4]")
    assert code == 2 and "targets" in err


def test_fit_bad_observable(capsys, tmp_path):
    space = tmp_path / "c3.jsonl"
    run(capsys, "enumerate", "--kind", "C_n", "--n", "3", "--output", str(space))
    code, _, _ = run(capsys, "fit", "--space", str(space), "--obs", "g_1", "--targets", "[1]")
    assert code == 2


@pytest.mark.parametrize("suite", ["a3", "a4", "fig6"])
def test_verify_suites(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite, "--p", "0.4,0.6")
    assert code == 0
    assert all(line.startswith(f"[{suite}] PASS") for line in out.splitlines()[:-1])
    assert out.splitlines()[-1].startswith("OK")


def test_verify_a3_values(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "a3")
    assert "4.6296296" in out


def test_verify_all_seeded(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "5", "--perturbations", "200")
    assert code == 0
    assert {line.split("]")[0][1:] for line in out.splitlines()[:-1]} == {"a3", "a4", "fig6", "product", "dominance"}


def test_verify_failure_exit_1(capsys, monkeypatch):
    import ersc.cli as cli
    from ersc.verify import Check

    monkeypatch.setattr(cli, "run_suite", lambda name, **kw: [Check("forced", 1.0, 0.0, 0.0, False)])
    code, out, _ = run(capsys, "verify", "--suite", "fig6")
    assert code == 1 and "FAIL forced" in out
