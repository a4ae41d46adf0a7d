"""Parser round-trips, CLI output formats, exit codes and the cache."""

import json

import pytest

from knotwind import (
    TorusKnot,
    ValidationError,
    cache_load,
    cache_store,
    parse_knot_expr,
)
from knotwind import __version__
from knotwind.cli import fraction_str, run


def run_ok(argv):
    status, out, err = run(argv)
    assert status == 0, (argv, err)
    return out


def test_parser_base_cases():
    expr = parse_knot_expr("T(2,3)")
    assert expr.summands == ((TorusKnot(2, 3), 1),)
    expr = parse_knot_expr("-T(4,5) # T(2,3)")
    assert expr.summands == ((TorusKnot(2, 3), 1), (TorusKnot(4, 5), -1))
    assert parse_knot_expr("U").is_unknot
    assert parse_knot_expr("  t( 2 , 3 )#u ").summands == ((TorusKnot(2, 3), 1),)


def test_parser_errors():
    with pytest.raises(ValidationError, match="not coprime"):
        parse_knot_expr("T(2,4)")
    with pytest.raises(ValidationError, match="position 0"):
        parse_knot_expr("")
    with pytest.raises(ValidationError, match="position"):
        parse_knot_expr("T(2,3) @ T(4,5)")
    with pytest.raises(ValidationError, match="position"):
        parse_knot_expr("T(2;3)")
    with pytest.raises(ValidationError):
        parse_knot_expr("T(1,5)")


def test_parser_round_trip():
    cases = [
        "U",
        "T(2,3)",
        "-T(2,3)",
        "T(2,3) # T(2,3) # -T(4,5)",
        "T(4,5) # -T(2,3) # T(2,3)",
    ]
    for text in cases:
        expr = parse_knot_expr(text)
        assert parse_knot_expr(str(expr)) == expr
    # canonical ordering makes permutations agree
    left = parse_knot_expr("T(2,3) # T(4,5)")
    right = parse_knot_expr("T(4,5)#T(2,3)")
    assert str(left) == str(right)
    assert left == right


def test_mirror_involution():
    expr = parse_knot_expr("T(2,3) # -T(4,5)")
    assert expr.mirror().mirror() == expr
    assert expr.mirror().summands == ((TorusKnot(2, 3), -1), (TorusKnot(4, 5), 1))


def test_fraction_str():
    from fractions import Fraction

    assert fraction_str(Fraction(7, 2)) == "7/2"
    assert fraction_str(Fraction(-1, 2)) == "-1/2"
    assert fraction_str(Fraction(4, 2)) == "2"
    assert fraction_str(3) == "3"


def test_cli_bound_winding_json():
    out = run_ok(["bound", "winding", "T(2,3)", "--format", "json"])
    doc = json.loads(out)
    assert doc["command"] == "bound winding"
    assert doc["value"] == 1
    assert doc["induced_minimum"] == 2
    assert all(entry["anchor"] for entry in doc["trail"])


def test_cli_vseq_and_dinv_json():
    doc = json.loads(run_ok(["vseq", "T(4,5)", "--format", "json"]))
    assert doc["value"] == [3, 2, 1, 1, 1, 1, 0]
    doc = json.loads(run_ok(["dinv", "T(2,3)", "--n", "1", "--i", "0", "--format", "json"]))
    assert doc["value"] == "-2"
    doc = json.loads(run_ok(["dinv", "U", "--n", "2", "--all", "--format", "json"]))
    assert doc["value"] == {"0": "1/4", "1": "-1/4"}


def test_cli_ncf_commands():
    doc = json.loads(run_ok(["ncf", "eval", "4,2", "--format", "json"]))
    assert doc["value"] == "7/2"
    doc = json.loads(run_ok(["ncf", "expand", "7/2", "--format", "json"]))
    assert doc["value"] == [4, 2]


def test_cli_examples_kn_trail():
    doc = json.loads(run_ok(["examples", "kn", "--n", "1", "--format", "json"]))
    names = [t["name"] for t in doc["trail"]]
    values = {t["name"]: t["value"] for t in doc["trail"]}
    assert values["2n+2"] == "4"
    assert doc["induced_minimum"] == 6
    assert names.index("2n+2") < names.index("gw >= (even)")
    assert doc["sharp"] is True


def test_cli_examples_whitehead_and_seifert():
    doc = json.loads(run_ok(["examples", "whitehead", "--format", "json"]))
    assert doc["value"] == 1 and doc["induced_minimum"] == 2
    doc = json.loads(run_ok(["seifert", "kn", "--n", "1", "--format", "json"]))
    assert doc["value"] == "-2/21"
    assert any(t["anchor"] == "plumbing" for t in doc["trail"])


def test_cli_bound_essential(tmp_path):
    table = {"w": 2, "d": {"0": "1", "1": "0", "2": "0", "3": "0"}}
    path = tmp_path / "dtable.json"
    path.write_text(json.dumps(table))
    doc = json.loads(run_ok(["bound", "essential", "--w", "2", "--dtable", str(path), "--format", "json"]))
    assert doc["value"] == "2"
    status, out, _ = run(["bound", "essential", "--w", "4", "--dtable", str(path), "--format", "json"])
    assert status == 2
    assert "does not match" in json.loads(out)["error"]["message"]
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    status, out, _ = run(["bound", "essential", "--w", "2", "--dtable", str(broken), "--format", "json"])
    assert status == 2
    assert json.loads(out)["error"]["kind"] == "validation"


def test_cli_csv_has_fixed_header():
    out = run_ok(["bound", "winding", "T(2,3)", "--format", "csv"])
    lines = out.splitlines()
    assert lines[0] == "section,name,value,anchor"
    assert any(line.startswith("result,value,1") for line in lines)
    out = run_ok(["vseq", "T(2,3)", "--format", "csv"])
    assert out.splitlines()[0] == "section,name,value,anchor"


def test_cli_validation_errors_and_exit_codes():
    status, out, err = run(["vseq", "T(2,4)", "--format", "json"])
    assert status == 2
    doc = json.loads(out)
    assert doc["error"]["kind"] == "validation"
    assert "(2,4)" in doc["error"]["message"]
    status, out, err = run(["vseq", "T(2,4)"])
    assert status == 2 and "error" in err
    status, _, _ = run(["dinv", "T(2,3)", "--n", "0", "--i", "0", "--format", "json"])
    assert status == 2
    status, _, _ = run([])
    assert status == 2
    status, _, _ = run(["nonsense"])
    assert status == 2


def test_cache_store_load_round_trip(tmp_path):
    path = tmp_path / "cache.json"
    entries = {"T(2,3)": [1, 0], "T(4,5)": [3, 2, 1, 1, 1, 1, 0]}
    assert cache_store(path, entries)
    assert cache_load(path) == entries
    first = path.read_bytes()
    assert cache_store(path, cache_load(path))
    assert path.read_bytes() == first


def test_cache_rejects_version_mismatch_and_corruption(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text(json.dumps({"tool_version": "0.0.0", "entries": {"T(2,3)": [1, 0]}}))
    assert cache_load(path) == {}
    path.write_text("{not json")
    with pytest.warns(RuntimeWarning):
        assert cache_load(path) == {}
    path.write_text(json.dumps({"tool_version": __version__, "entries": {"T(2,3)": "bad"}}))
    with pytest.warns(RuntimeWarning):
        assert cache_load(path) == {}


def test_cache_spot_check_catches_stale_values(tmp_path):
    path = tmp_path / "cache.json"
    path.write_text(json.dumps({"tool_version": __version__, "entries": {"T(2,3)": [5, 4, 3, 2, 1, 0]}}))
    with pytest.warns(RuntimeWarning):
        assert cache_load(path) == {}


def test_cli_cached_and_uncached_outputs_identical(tmp_path):
    path = tmp_path / "cache.json"
    plain = run_ok(["vseq", "T(3,4)", "--format", "json", "--no-cache"])
    first = run_ok(["vseq", "T(3,4)", "--format", "json", "--cache", str(path)])
    assert path.exists()
    stored = json.loads(path.read_text())
    assert stored["tool_version"] == __version__
    assert stored["entries"]["T(3,4)"] == [1, 1, 1, 0]
    second = run_ok(["vseq", "T(3,4)", "--format", "json", "--cache", str(path)])
    assert plain == first == second


def test_cli_no_cache_never_touches_file(tmp_path, monkeypatch):
    path = tmp_path / "cache.json"
    monkeypatch.setenv("KNOTWIND_CACHE", str(path))
    run_ok(["vseq", "T(2,3)", "--no-cache"])
    assert not path.exists()
    run_ok(["vseq", "T(2,3)"])
    assert path.exists()  # env var supplies the default path


def test_cli_version_and_help():
    from knotwind.cli import main

    assert main(["--help"]) == 0
    assert main(["--version"]) == 0
