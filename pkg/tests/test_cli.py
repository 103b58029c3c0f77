import json

from syncsum.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_and_sum(capsys):
    assert run(capsys, "sum", "T", "0..9")[:2] == (0, "0 1 2 2 3 3 3 4 5 5\n")
    assert run(capsys, "eval", "T", "0")[:2] == (0, "0\n")
    code, out, _ = run(capsys, "sum", "le", str((13 ** 6 - 1) // 12))
    assert code == 0 and out.strip() == "402240"


def test_unknown_sequence(capsys):
    code, _, err = run(capsys, "eval", "nope", "0")
    assert code == 1 and "known:" in err


def test_usage_errors_exit_1(capsys):
    try:
        main(["frobnicate"])
    except SystemExit as exc:
        assert exc.code == 1
    capsys.readouterr()
    assert run(capsys, "sum", "T", "5..2")[0] == 1


def test_json_output(capsys):
    code, out, _ = run(capsys, "--json", "eval", "T", "0..3")
    assert code == 0 and json.loads(out)["values"] == [0, 1, 1, 0]


def test_learn_then_verify(capsys, tmp_path):
    aut = tmp_path / "tmsum.aut"
    code, _, _ = run(capsys, "learn", "T", "-o", str(aut))
    assert code == 0 and aut.exists()
    code, out, _ = run(capsys, "verify", str(aut), "T")
    assert code == 0
    assert out.splitlines() == ["functional: TRUE", "total: TRUE", "inductive: TRUE"]
    # the same automaton is not the running sum of another sequence
    code, out, _ = run(capsys, "verify", str(aut), "ttm")
    assert code == 3


def test_learn_divergence_exit_code(capsys, tmp_path):
    code, _, _ = run(capsys, "learn", "rs", "-o", str(tmp_path / "rs.aut"))
    assert code == 2
    assert not (tmp_path / "rs.aut").exists()


def test_learn_transcript_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    run(capsys, "learn", "sb", "--seed", "3", "--transcript", str(a), "-o", str(tmp_path / "x.aut"))
    run(capsys, "learn", "sb", "--seed", "3", "--transcript", str(b), "-o", str(tmp_path / "y.aut"))
    assert a.read_bytes() == b.read_bytes()


def test_minpoly(capsys, tmp_path):
    code, out, _ = run(capsys, "minpoly", "pd", "--pattern", "(10)^r 1")
    assert code == 0 and out.strip() == "x^4 - 6x^3 + 9x^2 - 4x"
    path = tmp_path / "pd.json"
    assert run(capsys, "derive", "--fixture", "pd", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "minpoly", str(path), "--pattern", "(10)^r 1")
    assert out.strip() == "x^4 - 6x^3 + 9x^2 - 4x"


def test_derive_writes_linrep(capsys, tmp_path):
    path = tmp_path / "t.json"
    assert run(capsys, "derive", "T", "-o", str(path))[0] == 0
    doc = json.loads(path.read_text())
    assert doc["system"] == "msd_2" and doc["sequence"] == "T"


def test_certify(capsys, tmp_path):
    path = tmp_path / "mw.json"
    assert run(capsys, "certify", "mw", "-o", str(path))[0] == 0
    doc = json.loads(path.read_text())
    assert doc["residual"] == {"A": "0", "B": "1"}
    code, out, _ = run(capsys, "certify", "pd", "--pattern", "(10)^r 1", "--alpha", "2/3")
    assert code == 0 and json.loads(out)["residual"]["B"] == "1/3"
    assert run(capsys, "certify", "pd", "--pattern", "(10)^r 1", "--alpha", "1/2")[0] == 1
    code, out, _ = run(capsys, "certify", "rs")
    assert json.loads(out)["method"] == "integer-formula"


def test_reproduce_section(capsys):
    code, out, _ = run(capsys, "reproduce", "5.1")
    assert code == 0
    assert sum(line.startswith("PASS") for line in out.splitlines()) == 3
    code, _, _ = run(capsys, "reproduce", "4.8")
    assert code == 0
    assert run(capsys, "reproduce", "7")[0] == 1


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "dump", "T")
    assert code == 0 and out.startswith("tracks: msd_2")
    code, out, _ = run(capsys, "catalog", "list")
    assert len(out.splitlines()) == 13
