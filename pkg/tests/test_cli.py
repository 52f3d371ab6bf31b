import json

import pytest

from beliefchange.cli import main, parse_conditional_set, run_scenario
from beliefchange.lang import dnf_of_worlds
from beliefchange.tpo import conditional_set, parse_tpo

ATOMS = ("p", "q")

FIGURE_SCENARIO = """\
# lexicographic walk on the four-world example
atoms: p q
initial: 00 | 11 | 01 10
step: revise lexicographic p
query: belief p
query: conditional p => q
"""

FIGURE_TRANSCRIPT = """\
atoms: p q
initial: 00 | 11 | 01 10
beliefs: ~p & ~q
step 1: revise lexicographic p
state: 11 | 10 | 00 | 01
beliefs: p & q
query belief p: true
query conditional p => q: true
"""


def conditional_set_lines(t, atoms=ATOMS):
    lines = [
        f"{dnf_of_worlds(p, atoms)} => {dnf_of_worlds(q, atoms)}"
        for p, q in sorted(
            conditional_set(t).strongest_map().items(), key=lambda kv: sorted(kv[0])
        )
    ]
    lines.append(dnf_of_worlds(t.cells[0], atoms))
    return lines


# ---------------------------------------------------------------------------
# run


def test_figure_scenario_transcript_is_exact():
    code, out, err = run_scenario(FIGURE_SCENARIO)
    assert (code, err) == (0, "")
    assert out == FIGURE_TRANSCRIPT


def test_expansion_scenario_reaches_absurd():
    code, out, err = run_scenario(
        "atoms: p q\ninitial: 00 | 11 | 01 10\nstep: expand natural p\n"
    )
    assert code == 0
    assert "state: absurd" in out
    assert "beliefs: false" in out


def test_contraction_scenario_fixed_point():
    code, out, err = run_scenario(
        "atoms: p q\ninitial: 11 | 10 01 | 00\nstep: contract contract-stq-lex ~p\n"
    )
    assert code == 0
    assert "state: 11 | 01 10 | 00" in out


def test_transcripts_are_stable_across_runs():
    assert run_scenario(FIGURE_SCENARIO) == run_scenario(FIGURE_SCENARIO)


def test_machine_transcript_is_json():
    code, out, err = run_scenario(FIGURE_SCENARIO, fmt="machine")
    assert code == 0
    record = json.loads(out)
    assert record["initial"]["state"] == "00 | 11 | 01 10"
    assert record["steps"][0]["state"] == "11 | 10 | 00 | 01"
    assert record["steps"][0]["queries"][0]["result"] is True


def test_scenario_parse_errors_exit_2():
    for text in (
        "initial: 00 | 11 | 01 10\n",  # missing atoms
        "atoms: p q\n",  # missing initial
        "atoms: p q\ninitial: 00 | 11\n",  # bad partition
        "atoms: p q\ninitial: 00 | 11 | 01 10\nstep: revise sideways p\n",
        "atoms: p q\ninitial: 00 | 11 | 01 10\nstep: revise natural p &\n",
        "atoms: p q\ninitial: 00 | 11 | 01 10\nnonsense: 1\n",
    ):
        code, out, err = run_scenario(text)
        assert code == 2, text
        assert err.startswith("error:")


def test_semantic_errors_exit_3_with_step_index():
    code, out, err = run_scenario(
        "atoms: p q\ninitial: 00 | 11 | 01 10\n"
        "step: revise natural ~p\nstep: revise natural p & ~p\n"
    )
    assert code == 3
    assert "step 2" in err
    assert "step 1: revise natural ~p" in out  # transcript up to the failure

    code, _, err = run_scenario(
        "atoms: p q\ninitial: absurd\nstep: revise natural p\n"
    )
    assert code == 3 and "step 1" in err


def test_queries_without_steps_run_against_initial():
    code, out, _ = run_scenario(
        "atoms: p q\ninitial: 00 | 11 | 01 10\nquery: belief ~p\n"
    )
    assert code == 0
    assert "query belief ~p: true" in out


# ---------------------------------------------------------------------------
# closure files


def test_closure_of_contracted_set_plus_input(tmp_path, capsys):
    lines = conditional_set_lines(parse_tpo("00 11 | 01 10", 2)) + ["p"]
    path = tmp_path / "set.txt"
    path.write_text("\n".join(lines) + "\n")
    code = main(["closure", str(path), "--n", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "tpo: 11 | 00 | 01 10" in out
    assert "fast-path: applied" in out


def test_closure_of_rational_set_is_identity(tmp_path, capsys):
    m0 = parse_tpo("00 | 11 | 01 10", 2)
    path = tmp_path / "set.txt"
    path.write_text("\n".join(conditional_set_lines(m0)) + "\n")
    code = main(["closure", str(path), "--n", "2"])
    assert code == 0
    assert "tpo: 00 | 11 | 01 10" in capsys.readouterr().out


def test_closure_of_contradiction_exits_1(tmp_path, capsys):
    path = tmp_path / "set.txt"
    path.write_text("true => p\ntrue => ~p\n")
    code = main(["closure", str(path), "--n", "2"])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_closure_without_fast_path(tmp_path, capsys):
    path = tmp_path / "set.txt"
    path.write_text("p => q\n")
    code = main(["closure", str(path), "--n", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "fast-path: not applicable" in out
    assert "tpo: " in out


def test_closure_machine_format(tmp_path, capsys):
    path = tmp_path / "set.txt"
    path.write_text("p => q\n")
    code = main(["--format", "machine", "closure", str(path), "--n", "2"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["fast_path"] is False
    assert "|" in payload["tpo"]


def test_closure_custom_atoms(tmp_path, capsys):
    path = tmp_path / "set.txt"
    path.write_text("a => b\n")
    code = main(["closure", str(path), "--n", "2", "--atoms", "a,b"])
    assert code == 0
    path.write_text("x => y\n")
    assert main(["closure", str(path), "--n", "2"]) == 2  # unknown atoms


def test_conditional_set_parser_ignores_comments_and_blanks():
    delta = parse_conditional_set("# comment\n\np => q\n~p\n", ATOMS)
    assert len(delta.cond_pairs) == 1
    assert delta.plain_models == frozenset({0, 1})


# ---------------------------------------------------------------------------
# check / verify subcommands


def test_check_pass_and_fail_exit_codes(capsys):
    assert main(["check", "DP3", "restrained", "--n", "2", "--mode", "exhaustive"]) == 0
    capsys.readouterr()
    code = main(
        ["check", "CR4", "natural", "contract-stq-lex", "--n", "2", "--mode", "exhaustive"]
    )
    out = capsys.readouterr().out
    assert code == 1
    assert "witness" in out


def test_check_spu_passes_for_matching_pair(capsys):
    assert main(["check", "SPU", "natural", "contract-natural", "--n", "2"]) == 0
    capsys.readouterr()


def test_check_usage_errors_exit_2(capsys):
    assert main(["check", "SPU", "natural", "--n", "2"]) == 2  # missing contraction
    capsys.readouterr()
    assert main(["check", "Bogus", "natural"]) == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as exit_info:
        main(["check", "DP1", "sideways"])
    assert exit_info.value.code == 2
    capsys.readouterr()


def test_verify_subcommand(capsys):
    assert main(["verify", "P5", "--n", "2"]) == 0
    out = capsys.readouterr().out
    assert "outcome: pass" in out
    assert "11 | 01 10 | 00" in out  # the reproduced prior state


def test_verify_machine_format(capsys):
    assert main(["--format", "machine", "verify", "T3", "--n", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["check"] == "T3"
    assert payload["outcome"] == "pass"


def test_check_workers_flag_gives_identical_output(capsys):
    main(["check", "DP1", "natural", "--n", "2", "--workers", "1"])
    single = capsys.readouterr().out
    main(["check", "DP1", "natural", "--n", "2", "--workers", "2"])
    double = capsys.readouterr().out
    assert single == double


def test_run_subcommand_reads_files(tmp_path, capsys):
    path = tmp_path / "scenario.txt"
    path.write_text(FIGURE_SCENARIO)
    assert main(["run", str(path)]) == 0
    assert capsys.readouterr().out == FIGURE_TRANSCRIPT
    assert main(["run", str(tmp_path / "missing.txt")]) == 2
    capsys.readouterr()
