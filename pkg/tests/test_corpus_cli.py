import json

import pytest

from transitivity.cli import main, parse_grid, parse_scale, UsageError
from transitivity import cli
from transitivity.core import Status, WitnessScale
from transitivity.corpus import Expectation, Truth, compare, corpus_entries, export_corpus, get_entry, run_corpus

FAST = ["full_one_sided", "full_two_sided", "golden_mean", "two_cycle", "gap3", "exact_f", "tent"]


def test_corpus_has_required_entries():
    ids = {e.id for e in corpus_entries()}
    assert {"full_one_sided", "full_two_sided", "golden_mean", "two_cycle", "fibonacci", "thue_morse",
            "gap3", "lindenstrauss", "exact_f", "fully_exact_g", "tent", "ladder", "gap3_x_full"} <= ids
    with pytest.raises(KeyError):
        get_entry("missing")


@pytest.mark.parametrize("value,status,ok", [
    (Truth.TRUE, Status.PROVED, True),
    (Truth.TRUE, Status.WITNESS, True),
    (Truth.TRUE, Status.UNKNOWN, False),
    (Truth.TRUE, Status.REFUTED, False),
    (Truth.FALSE, Status.REFUTED_BOUNDED, True),
    (Truth.FALSE, Status.NO_WITNESS, True),
    (Truth.FALSE, Status.PROVED, False),
    (Truth.UNTESTED, Status.PROVED, True),
])
def test_compare(value, status, ok):
    assert (compare(Expectation(value, "test"), status) is None) == ok


def test_lenient_expectation_only_rejects_opposite_certificate():
    exp = Expectation(Truth.FALSE, "test", strict=False)
    assert compare(exp, Status.UNKNOWN) is None
    assert compare(exp, Status.PROVED) is not None


def test_fast_corpus_subset_passes():
    report = run_corpus(only=FAST)
    assert report.passed, report.to_text()
    assert {1, 2, 3, 4} <= set(report.coverage)


def test_export(tmp_path):
    paths = export_corpus(tmp_path)
    assert len(paths) == len(corpus_entries())
    doc = json.loads((tmp_path / "gap3.json").read_text())
    assert doc == {"type": "gap_shift", "base": 3, "id": "gap3"}


def test_parse_scale_partial_override():
    assert parse_scale("L=10,K=3") == WitnessScale(2, 10, 32, 3)
    with pytest.raises(UsageError):
        parse_scale("Z=1")
    with pytest.raises(UsageError):
        parse_scale("L=0")


def test_parse_grid():
    g = parse_grid("eps=1/32", 7)
    assert str(g) == "eps=1/32,H=7"
    with pytest.raises(UsageError):
        parse_grid("eps=0.1", None)


@pytest.fixture
def files(tmp_path):
    export_corpus(tmp_path)
    (tmp_path / "bad.json").write_text('{"type": "sft",')
    (tmp_path / "invalid.json").write_text('{"type": "sft", "vertices": []}')
    return tmp_path


def test_cli_classify_text(files, capsys):
    assert main(["classify", str(files / "golden_mean.json")]) == 0
    out = " ".join(capsys.readouterr().out.split())
    assert "TM PROVED (primitive; period 1)" in out


def test_cli_classify_json_is_deterministic(files, capsys):
    args = ["classify", str(files / "gap3.json"), "--format", "json", "--scale", "ell=2,L=24,H=32,K=8"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    rows = {r["property"]: r["verdict"]["status"] for r in json.loads(first)["rows"]}
    assert rows["VST"] == "REFUTED_BOUNDED" and rows["TM"] == "WITNESS"


def test_cli_props_and_grid(files, capsys):
    assert main(["classify", str(files / "tent.json"), "--props", "TT,TM", "--grid", "eps=1/16",
                 "--horizon", "10", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["scales"]["grid"] == {"kind": "grid", "eps": "1/16", "horizon": 10}


@pytest.mark.parametrize("name,flag", [("bad.json", "PARSE_ERROR"), ("invalid.json", "VALIDATION_ERROR")])
def test_cli_exit_code_two_on_bad_input(files, capsys, name, flag):
    assert main(["classify", str(files / name)]) == 2
    assert flag in capsys.readouterr().err


def test_cli_bad_property(files, capsys):
    assert main(["classify", str(files / "tent.json"), "--props", "XYZ"]) == 2


def test_cli_missing_file(tmp_path, capsys):
    assert main(["classify", str(tmp_path / "none.json")]) == 2


def test_cli_hitting_set(files, capsys):
    assert main(["hitting-set", str(files / "two_cycle.json"), "--u", "0", "--v", "0",
                 "--max-n", "8", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["members"] == [2, 4, 6, 8]
    assert doc["class"] == "SYNDETIC_NOT_COFINITE"


def test_cli_hitting_set_needs_sft(files, capsys):
    assert main(["hitting-set", str(files / "gap3.json"), "--u", "1", "--v", "1"]) == 2


def test_cli_corpus_list_and_run(capsys):
    assert main(["corpus", "list"]) == 0
    assert "golden_mean" in capsys.readouterr().out
    assert main(["corpus", "run", "--only", "golden_mean,two_cycle"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_cli_corpus_run_fails_on_bad_expectation(capsys):
    # forcing a tiny witness scale makes the gap shift witnesses unreachable
    assert main(["corpus", "run", "--only", "gap3", "--scale", "ell=1,L=2,H=1,K=1"]) == 1


def test_cli_lattice(files, capsys):
    assert main(["lattice", "edges"]) == 0
    assert "E01" in capsys.readouterr().out
    assert main(["lattice", "explain", str(files / "tent.json")]) == 0
    out = capsys.readouterr().out
    assert "from LEO" in out
    assert main(["lattice", "explain"]) == 2


def test_cli_exit_code_one_on_contradiction(files, capsys, monkeypatch):
    real = cli.classify

    def broken(*args, **kwargs):
        report = real(*args, **kwargs)
        report.consistency["contradictions"] = ["TT: PROVED via x; REFUTED via y"]
        return report

    monkeypatch.setattr(cli, "classify", broken)
    assert main(["classify", str(files / "golden_mean.json")]) == 1
    assert "CONTRADICTION" in capsys.readouterr().out
