import io
import json
from contextlib import redirect_stdout

import pytest

from circlespec import measure_to_json
from circlespec.cli import main

from tests.helpers import designed_relation_measure


def run_cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def run_json(argv):
    code, out = run_cli(argv)
    return code, json.loads(out)


def test_krot_passes_and_reports_formula():
    code, env = run_json(["krot", "--k", "1", "--m", "2"])
    assert code == 0
    assert env["command"] == "krot"
    assert env["passed"] is True
    assert env["report"]["formula"] == env["report"]["generic_value"] == 2


def test_sym_krot_passes():
    code, env = run_json(["sym-krot", "--k", "1", "--m", "3"])
    assert code == 0
    assert env["report"]["generic_value"] == 1


def test_fock_set_small_case():
    code, env = run_json(["fock-set", "--k", "2", "--max-m", "2", "--atoms", "6"])
    assert code == 0
    assert env["report"]["set"] == [1, 3]


def test_cs_criterion_failure_is_exit_1():
    code, env = run_json(["cs-criterion", "--k", "2", "--m", "2", "--n", "2"])
    assert code == 1
    assert env["passed"] is False


def test_cs_min_m_reference_output():
    code, env = run_json(["cs-min-m", "--k", "1"])
    assert code == 0
    assert env["report"]["m"] == 2
    assert env["report"]["sequence"] == ["1", "2"]


def test_cs_min_m_cap_is_exit_2(capsys):
    assert main(["cs-min-m", "--k", "3", "--m-cap", "3"]) == 2
    assert "cap" in capsys.readouterr().err


def test_translate_singular_identity_same_level_fails():
    code, env = run_json(
        ["translate-singular", "--n", "2", "--m", "2", "--shift", "identity"]
    )
    assert code == 1 and env["report"]["singular"] is False
    code, env = run_json(["translate-singular", "--n", "1", "--m", "2"])
    assert code == 0 and env["report"]["singular"] is True


def test_nonsimple_default_measure():
    code, env = run_json(["nonsimple"])
    assert code == 0
    assert env["report"]["witness"]["multiplicity"] == 2


def test_girsanov_default_paired_measure():
    code, env = run_json(["girsanov"])
    assert code == 0
    assert env["report"]["q"] == 2 and env["report"]["chosen_count"] >= 4
    assert env["report"]["measure_source"] == "paired-relation"


def test_vproste_generic_default():
    code, env = run_json(["vproste", "--atoms", "2", "--max-level", "3"])
    assert code == 0
    assert env["report"]["levels"] == {"1": True, "2": True, "3": True}


def test_relations_finds_designed_relation(tmp_path):
    path = tmp_path / "relation.json"
    path.write_text(measure_to_json(designed_relation_measure()), encoding="utf-8")
    code, env = run_json(["relations", "--measure", str(path), "--degree", "4"])
    assert code == 0
    assert env["report"]["count"] == 1


def test_multiplicity_reads_measure_file(tmp_path):
    path = tmp_path / "relation.json"
    path.write_text(measure_to_json(designed_relation_measure()), encoding="utf-8")
    code, env = run_json(
        ["multiplicity", "--measure", str(path), "--power", "2", "--group", "symmetric"]
    )
    assert code == 0
    assert env["report"]["entries"]["g0^1 * g1^1"] == 2


def test_multiplicity_with_explicit_generators():
    code, env = run_json(
        ["multiplicity", "--atoms", "3", "--power", "2", "--gens", "[[1,0]]"]
    )
    assert code == 0
    assert env["report"]["group"]["order"] == 2


def test_malformed_measure_is_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"atoms": [{"weight": "1/2"}]}', encoding="utf-8")
    assert main(["multiplicity", "--measure", str(path), "--power", "2"]) == 2
    assert "measure format" in capsys.readouterr().err


def test_missing_file_is_exit_2(tmp_path, capsys):
    assert main(["vproste", "--measure", str(tmp_path / "nope.json")]) == 2
    capsys.readouterr()


def test_cap_error_is_exit_2(capsys):
    assert main(["multiplicity", "--atoms", "8", "--power", "9", "--tuple-cap", "100"]) == 2
    assert "cap" in capsys.readouterr().err


def test_unknown_subcommand_is_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_missing_subcommand_prints_help(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_markov_subcommands():
    code, env = run_json(["markov", "round-trip", "--count", "5"])
    assert code == 0 and env["command"] == "markov round-trip"
    code, env = run_json(["markov", "lm-kk", "--n", "2", "--count", "1"])
    assert code == 0 and env["report"]["cases"] == 4
    code, env = run_json(["markov", "incl-excl", "--dims", "2,3"])
    assert code == 0 and env["report"]["dimension_lhs"] == 5


def test_markov_bad_dims_is_exit_2(capsys):
    assert main(["markov", "incl-excl", "--dims", "2,x"]) == 2
    capsys.readouterr()


def test_json_output_is_deterministic():
    args = ["markov", "round-trip", "--count", "8", "--seed", "3"]
    assert run_cli(args) == run_cli(args)
    args = ["krot", "--k", "1", "--m", "2"]
    assert run_cli(args) == run_cli(args)


def test_table_format_renders():
    code, out = run_cli(["krot", "--k", "1", "--m", "2", "--format", "table"])
    assert code == 0
    assert "generic_value: 2" in out
    assert out.startswith("command: krot")
    code, out = run_cli(
        ["multiplicity", "--atoms", "3", "--power", "2", "--format", "table"]
    )
    assert code == 0
    assert "eigenvalue" in out and "generic value" in out
