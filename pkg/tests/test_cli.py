import csv
import io
import json


from factorlens.cli import EXIT_BUDGET, EXIT_FAILED, EXIT_INPUT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_realize_union_row(capsys):
    code, out, _ = run(capsys, "unions", "--realize", "2,3", "--k-max", "6", "--format", "csv")
    assert code == EXIT_OK
    row = csv_rows(out)[1]
    assert (row["lambda"], row["rho"], row["size"], row["M"], row["union"]) == ("2", "3", "2", "0", "{2,3}")
    assert '"{2,3}"' in out


def test_free_monoid_rows(capsys):
    spec = json.dumps({"kind": "lattice", "atoms": [[1, 0], [0, 1]]})
    code, out, _ = run(capsys, "unions", "--spec", spec, "--k-max", "3", "--format", "csv")
    assert code == EXIT_OK
    for r in csv_rows(out):
        k = r["k"]
        assert (r["lambda"], r["rho"], r["size"], r["M"], r["union"]) == (k, k, "1", "0", "{%s}" % k)


def test_counterexample_row_three(capsys):
    code, out, _ = run(capsys, "counterexample", "--k-max", "4")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["m"] == [0, 1, 5, 19, 57]
    assert data["rows"][2]["upper"] == [3, 4, 5, 6, 7, 9, 11, 13, 15, 17, 19]
    assert data["aap_bound_strictly_increasing"]


def test_output_is_deterministic_across_threads(capsys, tmp_path):
    spec = json.dumps({"kind": "zerosum", "group": [3]})
    outs = []
    for t in ("1", "2"):
        path = tmp_path / f"u{t}.csv"
        assert main(["unions", "--spec", spec, "--k-max", "4", "--threads", t,
                     "--format", "csv", "--out", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert outs[0].count(b"\r\n") == 5


def test_invariants_two_three(capsys):
    code, out, _ = run(capsys, "invariants", "--spec", '{"kind": "numerical", "generators": [2, 3]}')
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["elasticity"] == "3/2"
    assert data["omega"] == [2, 3]
    assert data["delta"] == [1]


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "invariants", "--spec", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    assert run(capsys, "invariants", "--spec", '{"kind": "mystery"}')[0] == EXIT_INPUT
    assert run(capsys, "unions", "--spec", '{"generators": [[2, 3]], "depth": 3}')[0] == EXIT_INPUT
    assert run(capsys, "unions")[0] == EXIT_INPUT
    assert run(capsys, "realize", "1,x")[0] == EXIT_INPUT
    assert run(capsys, "unions", "--realize", "2,3", "--k-max", "0")[0] == EXIT_INPUT


def test_budget_partial(capsys):
    code, out, err = run(capsys, "unions", "--spec", '{"kind": "zerosum", "group": [3]}',
                         "--k-max", "3", "--budget", "5")
    assert code == EXIT_BUDGET
    data = json.loads(out)
    assert data["partial"]
    assert [r["k"] for r in data["rows"]] == [1]


def test_budget_from_environment(capsys, monkeypatch):
    import factorlens.cli as cli
    monkeypatch.setenv("FACTORLENS_BUDGET", "5")
    args = cli.build_parser().parse_args(["unions", "--realize", "2,3"])
    assert args.budget == 5


def test_family_horizon_is_partial(capsys):
    code, out, _ = run(capsys, "unions", "--spec", '{"generators": [[1, 2]], "depth": 3}',
                       "--k-max", "5", "--format", "csv")
    assert code == EXIT_BUDGET
    assert [r["k"] for r in csv_rows(out)] == ["1", "2", "3"]


def test_power_example(capsys):
    code, out, _ = run(capsys, "power-example", "--n", "2", "--k-max", "5")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["omega"] == [1, 5]
    assert data["rows"][3]["rho"] == data["rows"][3]["formula"] == 13


def test_structure_check_counterexample(capsys):
    code, out, _ = run(capsys, "structure-check", "--counterexample", "--k-max", "4")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["M_k"] == [0, 1, 8, None]


def test_paper_suite_subset_and_negative_control(capsys):
    code, out, err = run(capsys, "paper-suite", "--only", "5")
    assert code == EXIT_OK
    assert "[PASS] criterion 5" in err
    code, out, err = run(capsys, "paper-suite", "--only", "1", "--perturb")
    assert code == EXIT_FAILED
    assert "[FAIL] criterion 1" in err
    assert json.loads(out)["all_passed"] is False


def test_paper_suite_output_has_no_timings_by_default(capsys):
    _, out, _ = run(capsys, "paper-suite", "--only", "5")
    assert "seconds" not in out
