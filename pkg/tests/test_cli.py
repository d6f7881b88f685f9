"""Command-line harness checks, run in process through main(argv)."""

import json

import pytest

from mastkit.cli import (
    CSV_FIELDS,
    EXIT_CAP,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_TAXA,
    EXIT_VERIFY,
    main,
)

CAT11 = "(1,2,(3,(4,(5,(6,(7,(8,(9,(10,11)))))))));"


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_five_leaf_example(capsys):
    code, out, err = run(capsys, [
        "construct", "--t1", "(1,2,(3,(4,5)));",
        "--t2", "((1,2),((3,4),5));"])
    assert code == EXIT_OK and err == ""
    assert "size: 4" in out
    assert "agreement: 1 2 3 5" in out
    assert "verified: true" in out
    assert "branch: block-chain(singles=2 blocks=0);degenerate-exact" in out


def test_construct_json_is_stable(capsys):
    argv = ["construct", "--t1", "(1,2,(3,(4,5)));",
            "--t2", "((1,2),((3,4),5));", "--json"]
    code, first, _ = run(capsys, argv)
    assert code == EXIT_OK
    payload = json.loads(first)
    assert payload["size"] == 4
    assert payload["agreement"] == ["1", "2", "3", "5"]
    assert payload["verified"] is True
    code, second, _ = run(capsys, argv)
    assert first == second


def test_construct_tiny_inputs_agree_fully(capsys):
    code, out, _ = run(capsys, [
        "construct", "--t1", "(1,2,3);", "--t2", "(1,2,3);"])
    assert code == EXIT_OK
    assert "branch: tiny" in out and "size: 3" in out


def test_construct_weak_algorithm(capsys):
    code, out, _ = run(capsys, [
        "construct", "--t1", "(1,2,(3,(4,5)));",
        "--t2", "((1,2),((3,4),5));", "--algorithm", "weak"])
    assert code == EXIT_OK
    assert "algorithm: weak" in out
    assert "verified: true" in out


def test_exact_rooted_dp(capsys):
    code, out, _ = run(capsys, [
        "exact", "--t1", "((1,2),3);", "--t2", "((1,3),2);", "--rooted"])
    assert code == EXIT_OK
    assert "size: 2" in out
    assert "agreement: 2 3" in out
    assert "witness: (2,3);" in out


def test_exact_brute_force(capsys):
    code, out, _ = run(capsys, [
        "exact", "--t1", "(1,2,(3,(4,5)));", "--t2", "(1,2,(3,(4,5)));",
        "--method", "brute"])
    assert code == EXIT_OK
    assert "size: 5" in out


def test_exact_brute_cap_exit(capsys):
    code, out, err = run(capsys, [
        "exact", "--t1", CAT11, "--t2", CAT11, "--method", "brute"])
    assert code == EXIT_CAP
    assert "cap is 10" in err
    code, out, err = run(capsys, [
        "exact", "--t1", CAT11, "--t2", CAT11, "--method", "brute",
        "--cap", "11"])
    assert code == EXIT_OK


def test_exact_dp_cap_exit(capsys):
    code, _, err = run(capsys, [
        "exact", "--t1", CAT11, "--t2", CAT11, "--cap", "10"])
    assert code == EXIT_CAP and "cap is 10" in err


def test_verify_exit_codes(capsys):
    base = ["verify", "--t1", "((1,2),3);", "--t2", "((1,3),2);", "--rooted"]
    code, out, _ = run(capsys, base + ["--leaves", "1,2"])
    assert code == EXIT_OK and "verified: true" in out
    code, out, _ = run(capsys, base + ["--leaves", "1,2,3"])
    assert code == EXIT_VERIFY and "verified: false" in out


def test_parse_and_taxa_failures(capsys):
    code, _, err = run(capsys, [
        "construct", "--t1", "((1,2;", "--t2", "(1,2,3);"])
    assert code == EXIT_PARSE and "error:" in err
    code, _, err = run(capsys, [
        "construct", "--t1", "(1,2,3);", "--t2", "(1,2,4);"])
    assert code == EXIT_TAXA and "taxon set" in err


def test_no_command_prints_help(capsys):
    code, out, _ = run(capsys, [])
    assert code == EXIT_PARSE
    assert "usage: mastkit" in out


def test_gen_models_and_file_output(capsys, tmp_path):
    code, out, _ = run(capsys, ["gen", "--model", "caterpillar", "--n", "6"])
    assert code == EXIT_OK and out == "(1,2,(3,(4,(5,6))));\n"
    code, out, _ = run(capsys, ["gen", "--model", "adversarial", "--n", "8"])
    assert code == EXIT_OK
    assert out == ("(1,2,((3,4),((5,6),(7,8))));\n"
                   "(1,2,(3,(4,(5,(6,(7,8))))));\n")
    target = tmp_path / "trees.nwk"
    code, out, _ = run(capsys, [
        "gen", "--model", "uniform", "--n", "6", "--seed", "1",
        "--out", str(target)])
    assert code == EXIT_OK and out == ""
    assert target.read_text() == "(1,(((2,6),4),5),3);\n"


def test_gen_seed_env_default(capsys, monkeypatch):
    code, baseline, _ = run(capsys, ["gen", "--model", "uniform", "--n", "8"])
    monkeypatch.setenv("MASTKIT_SEED", "7")
    code, seeded, _ = run(capsys, ["gen", "--model", "uniform", "--n", "8"])
    code, explicit, _ = run(capsys, [
        "gen", "--model", "uniform", "--n", "8", "--seed", "7"])
    assert seeded == explicit
    assert seeded != baseline


def test_experiment_grid_and_determinism(capsys, tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    argv = ["experiment", "--n-min", "8", "--n-max", "16", "--trials", "2",
            "--cap", "16"]
    code, out, _ = run(capsys, argv + ["--out", str(first)])
    assert code == EXIT_OK
    assert out.startswith("min-main-ratio: ")
    code, out2, _ = run(capsys, argv + ["--out", str(second)])
    assert code == EXIT_OK and out2 == out
    body = first.read_text()
    assert body == second.read_text()
    lines = body.strip().split("\n")
    assert lines[0] == ",".join(CSV_FIELDS)
    # 2 sizes x 2 models x 2 trials x 3 algorithms.
    assert len(lines) == 1 + 24
    for line in lines[1:]:
        fields = dict(zip(CSV_FIELDS, line.split(",")))
        assert fields["verified"] == "true"
        assert fields["millis"] == "0"
        assert fields["algorithm"] in ("weak", "main", "exact_dp")
        assert fields["generator"] in ("uniform", "adversarial")


def test_experiment_cap_skips_exact_rows(capsys, tmp_path):
    target = tmp_path / "capped.csv"
    code, _, _ = run(capsys, [
        "experiment", "--n-min", "8", "--n-max", "16", "--cap", "8",
        "--out", str(target)])
    assert code == EXIT_OK
    lines = target.read_text().strip().split("\n")[1:]
    exact_sizes = {line.split(",")[0] for line in lines
                   if line.split(",")[3] == "exact_dp"}
    assert exact_sizes == {"8"}


def test_experiment_json_echoes_rows(capsys, tmp_path):
    target = tmp_path / "rows.csv"
    code, out, _ = run(capsys, [
        "experiment", "--n-min", "8", "--n-max", "8", "--models", "uniform",
        "--cap", "8", "--json", "--out", str(target)])
    assert code == EXIT_OK
    ratio_line, json_line = out.strip().split("\n")
    rows = json.loads(json_line)
    assert len(rows) == 3
    assert {row["algorithm"] for row in rows} == {"weak", "main", "exact_dp"}
    assert all(row["verified"] == "true" for row in rows)


def test_experiment_rejects_bad_grids(capsys, tmp_path):
    code, _, err = run(capsys, [
        "experiment", "--n-min", "6", "--n-max", "12",
        "--out", str(tmp_path / "x.csv")])
    assert code == EXIT_PARSE and "power-of-two" in err
    code, _, err = run(capsys, [
        "experiment", "--n-min", "8", "--n-max", "8", "--models", "mystery",
        "--out", str(tmp_path / "y.csv")])
    assert code == EXIT_PARSE and "unknown pair model" in err


def test_file_inputs_are_read_from_disk(capsys, tmp_path):
    one = tmp_path / "one.nwk"
    two = tmp_path / "two.nwk"
    one.write_text("(1,2,(3,(4,5)));\n")
    two.write_text("((1,2),((3,4),5));\n")
    code, out, _ = run(capsys, ["construct", "--t1", str(one),
                                "--t2", str(two)])
    assert code == EXIT_OK and "size: 4" in out
    code, _, err = run(capsys, ["construct", "--t1", str(tmp_path / "no.nwk"),
                                "--t2", str(two)])
    assert code == EXIT_PARSE and "cannot read" in err
