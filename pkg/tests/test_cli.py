"""Tests for the command line interface."""
import io

import pytest

from lazyasp.cli import (
    EXIT_OK,
    EXIT_RESOURCE_LIMIT,
    EXIT_USAGE,
    _config_from_args,
    build_parser,
    run_cli,
)
from lazyasp.models import PhasePolicy, RestartStrategy, Strictness


def _run(argv, stdin_text=""):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run_cli(argv, stdin=io.StringIO(stdin_text), stdout=stdout, stderr=stderr)
    return code, stdout.getvalue(), stderr.getvalue()


@pytest.fixture
def program_file(tmp_path):
    path = tmp_path / "loop.lp"
    path.write_text("a :- not b.\nb :- not a.\n")
    return str(path)


def test_answer_set_lines(program_file):
    """Test that answer sets are printed one per line, numbered from 1."""
    code, out, _ = _run([program_file, "--n-answers", "all"])
    assert code == EXIT_OK
    lines = out.splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("Answer set 1: { ")
    assert sorted(line.split(": ", 1)[1] for line in lines) == ["{ a }", "{ b }"]


def test_answer_limit(program_file):
    """Test that --n-answers bounds the output."""
    code, out, _ = _run([program_file, "--n-answers", "1"])
    assert code == EXIT_OK
    assert len(out.splitlines()) == 1


def test_unsat_exits_zero():
    """Test that an unsatisfiable program is a normal outcome."""
    code, out, _ = _run(["-"], stdin_text="a :- not a.")
    assert code == EXIT_OK
    assert out == "UNSATISFIABLE\n"


def test_files_are_concatenated(tmp_path):
    """Test that several input files form one program."""
    facts, rules = tmp_path / "facts.lp", tmp_path / "rules.lp"
    facts.write_text("q(1).\n")
    rules.write_text("p(X) :- q(X).\n")
    code, out, _ = _run([str(facts), str(rules)])
    assert code == EXIT_OK
    assert out == "Answer set 1: { p(1), q(1) }\n"


def test_missing_file(tmp_path):
    """Test that an unreadable input is a usage error."""
    code, out, err = _run([str(tmp_path / "nope.lp")])
    assert code == EXIT_USAGE
    assert out == ""
    assert err.startswith("lazy-asp: error:")


def test_parse_error_reports_position():
    """Test that syntax errors exit 1 with the line and column."""
    code, _, err = _run(["-"], stdin_text="a.\nb :- .\n")
    assert code == EXIT_USAGE
    assert ": 2:" in err


def test_unsafe_rule_is_usage_error():
    """Test that safety violations are reported before solving."""
    code, _, err = _run(["-"], stdin_text="p(X) :- not q(X).")
    assert code == EXIT_USAGE
    assert "X" in err


def test_no_input_files():
    """Test that running without input is a usage error."""
    code, _, err = _run([])
    assert code == EXIT_USAGE
    assert "no input files" in err


@pytest.mark.parametrize("argv", [["x.lp", "--heuristic", "best"], ["x.lp", "--n-answers", "some"], ["x.lp", "--restarts", "maybe"]])
def test_bad_option_values(argv):
    """Test that invalid option values are usage errors."""
    code, _, _ = _run(argv)
    assert code == EXIT_USAGE


def test_invalid_configuration_value():
    """Test that configuration validation errors are usage errors."""
    code, _, _ = _run(["-", "--n-answers", "0"], stdin_text="a.")
    assert code == EXIT_USAGE


def test_stats_go_to_stderr(program_file):
    """Test that statistics are printed to stderr only."""
    code, out, err = _run([program_file, "--stats"])
    assert code == EXIT_OK
    assert "conflicts=" not in out
    assert "status=exhausted" in err.splitlines()
    assert any(line.startswith("decisions=") for line in err.splitlines())


def test_conflict_limit_exit_code():
    """Test that hitting the conflict limit exits with 3."""
    clique = "\n".join(f"vertex({v})." for v in range(7))
    clique += "\n" + "\n".join(f"edge({u},{v})." for u in range(7) for v in range(u + 1, 7))
    clique += "\ncolour(r). colour(g). colour(b).\n"
    clique += "diff(r,g). diff(r,b). diff(g,r). diff(g,b). diff(b,r). diff(b,g).\n"
    clique += (
        "assign(V,C) :- vertex(V), colour(C), not other(V,C).\n"
        "other(V,C) :- assign(V,D), diff(C,D).\n"
        "colored(V) :- assign(V,C).\n"
        ":- vertex(V), not colored(V).\n"
        ":- edge(V,U), assign(V,C), assign(U,C).\n"
    )
    code, out, _ = _run(["-", "--max-conflicts", "1", "--n-answers", "all"], stdin_text=clique)
    assert code == EXIT_RESOURCE_LIMIT
    assert out.endswith("INTERRUPTED\n")


def test_generate_colouring():
    """Test that instance generation prints a program and solves nothing."""
    code, out, _ = _run(["--generate-colouring", "6", "0.5", "3", "1"])
    assert code == EXIT_OK
    assert out.startswith("% colouring vertices=6")
    assert "Answer set" not in out

    code, _, _ = _run(["--generate-colouring", "6", "half", "3", "1"])
    assert code == EXIT_USAGE


def test_option_mapping():
    """Test that options map onto the solver configuration."""
    args = build_parser().parse_args(
        [
            "x.lp",
            "--no-restarts",
            "--phase-init",
            "false",
            "--restart-strategy",
            "luby",
            "--deletion",
            "off",
            "--grounding-constraints",
            "strict",
            "--seed",
            "5",
        ]
    )
    config = _config_from_args(args)
    assert config.restarts is False
    assert config.deletion is False
    assert config.phase_policy is PhasePolicy.ALL_FALSE
    assert config.restart_strategy is RestartStrategy.LUBY
    assert config.grounding.constraints is Strictness.STRICT
    assert config.seed == 5
    assert config.n_answers == 10


def test_preset_with_override():
    """Test that explicit options override a preset."""
    args = build_parser().parse_args(["x.lp", "--preset", "baseline", "--restarts", "on", "--n-answers", "all"])
    config = _config_from_args(args)
    assert config.restarts is True
    assert config.deletion is False
    assert config.n_answers is None


def test_deletion_interval_and_support_check_options():
    """Test that the cleanup interval and the support check can be set from the command line."""
    args = build_parser().parse_args(["x.lp", "--deletion-interval", "50", "--support-check", "off"])
    config = _config_from_args(args)
    assert config.deletion_base_interval == 50
    assert config.support_check is False
    assert _config_from_args(build_parser().parse_args(["x.lp"])).support_check is True
