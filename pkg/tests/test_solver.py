"""Tests for the solve loop against hand-checked programs and the brute-force oracle."""
import itertools

import networkx as nx
import pytest

from lazyasp.assignment import TruthValue
from lazyasp.generators import colouring_program, generate_colouring_instance, generate_random_program
from lazyasp.models import HeuristicKind, PhasePolicy, SolverConfig
from lazyasp.oracle import brute_force_answer_sets
from lazyasp.solver import AnswerSet, DecisionObserver, SolveStatus, Solver, solve
from lazyasp.syntax import parse_program

ALL = SolverConfig(n_answers=None)


def _answers(text, config=ALL):
    result = solve(parse_program(text), config)
    return sorted(tuple(a.sorted_atoms()) for a in result.answer_sets), result.status


def test_even_loop_has_two_answer_sets():
    """Test the two answer sets of an even negative loop."""
    answers, status = _answers("a :- not b. b :- not a.")
    assert answers == [("a",), ("b",)]
    assert status is SolveStatus.EXHAUSTED


def test_odd_loop_is_unsat():
    """Test that a self-defeating rule has no answer set."""
    answers, status = _answers("a :- not a.")
    assert answers == []
    assert status is SolveStatus.UNSAT


def test_variables_bind_through_positive_body():
    """Test grounding of a rule with a variable only in the body."""
    answers, status = _answers("q(1,2). p(X) :- q(X,Y).")
    assert answers == [("p(1)", "q(1,2)")]
    assert status is SolveStatus.EXHAUSTED


def test_definite_program_has_its_least_model():
    """Test a program without negation."""
    answers, _ = _answers("a. b :- a. c :- d.")
    assert answers == [("a", "b")]


def test_violated_constraint_is_unsat():
    """Test that a constraint over facts removes the only candidate."""
    answers, status = _answers("a. :- a.")
    assert answers == []
    assert status is SolveStatus.UNSAT


def test_empty_program_has_empty_answer_set():
    """Test that the empty program has exactly the empty answer set."""
    result = solve(parse_program(""), ALL)
    assert result.answer_sets == [AnswerSet(frozenset())]
    assert str(result.answer_sets[0]) == "{ }"


def test_answer_set_formatting():
    """Test the printed form of an answer set."""
    result = solve(parse_program("b. a :- b."), ALL)
    assert str(result.answer_sets[0]) == "{ a, b }"


def test_triangle_has_six_colourings():
    """Test that K3 with three colours has exactly 3! answer sets."""
    result = solve(parse_program(colouring_program(nx.complete_graph(3), 3)), ALL)
    assert len(result.answer_sets) == 6
    for answer in result.answer_sets:
        assert len([a for a in answer.atoms if a.predicate == "assign"]) == 3


def test_k5_is_not_three_colourable():
    """Test that K5 with three colours is UNSAT."""
    result = solve(parse_program(colouring_program(nx.complete_graph(5), 3)), ALL)
    assert result.answer_sets == []
    assert result.status is SolveStatus.UNSAT
    assert result.statistics.conflicts > 0


def test_no_duplicate_answer_sets():
    """Test that enumeration never repeats an answer set."""
    text = generate_colouring_instance(8, 0.3, 3, seed=2)
    result = solve(parse_program(text), ALL)
    assert len(result.answer_sets) == len(set(result.answer_sets))


def test_solving_is_deterministic():
    """Test that equal inputs and configuration give equal answer sequences."""
    text = generate_colouring_instance(10, 0.3, 3, seed=4)
    config = SolverConfig(n_answers=None, phase_policy=PhasePolicy.RANDOM, seed=7)
    first = solve(parse_program(text), config)
    second = solve(parse_program(text), config)
    assert first.answer_sets == second.answer_sets
    assert first.statistics.conflicts == second.statistics.conflicts


def test_answer_limit():
    """Test that the search stops after the requested number of answer sets."""
    result = solve(parse_program("a :- not b. b :- not a."), SolverConfig(n_answers=1))
    assert len(result.answer_sets) == 1
    assert result.status is SolveStatus.LIMIT_REACHED


def test_conflict_limit():
    """Test that the conflict limit ends the run with RESOURCE_LIMIT."""
    text = colouring_program(nx.complete_graph(7), 3)
    result = solve(parse_program(text), SolverConfig(n_answers=None, max_conflicts=1))
    assert result.status is SolveStatus.RESOURCE_LIMIT
    assert result.statistics.conflicts >= 1


def test_timeout():
    """Test that the timeout ends the run with RESOURCE_LIMIT."""
    text = generate_colouring_instance(30, 0.05, 3, seed=1)
    result = solve(parse_program(text), SolverConfig(n_answers=None, timeout=0.05))
    assert result.status is SolveStatus.RESOURCE_LIMIT


def test_solver_is_not_reusable():
    """Test that a second run on the same instance is refused."""
    solver = Solver(parse_program("a."), ALL)
    assert len(list(solver.answer_sets())) == 1
    with pytest.raises(RuntimeError):
        list(solver.answer_sets())


def test_statistics_lines():
    """Test that statistics are reported one key=value per line."""
    result = solve(parse_program("a :- not b. b :- not a."), ALL)
    lines = result.statistics.lines()
    keys = [line.split("=")[0] for line in lines]
    assert keys[:3] == ["conflicts", "decisions", "restarts"]
    assert "answer_sets=2" in lines
    assert any(line.startswith("wall_time=") and line.count(".") == 1 for line in lines)
    assert result.statistics.ground_rules > 0


class _Recorder(DecisionObserver):
    """Checks every decision against the saved phase and the choice restriction."""

    def __init__(self):
        self.solver = None
        self.decisions = 0

    def on_decision(self, atom, sign, assignment):
        solver = self.solver
        self.decisions += 1
        assert solver.table.is_body_atom(atom)
        assert assignment.value(atom) is TruthValue.UNASSIGNED
        rule = solver.heuristic.choice_points[atom]
        assert rule.negative_body
        assert all(assignment.value(b).is_positive for b in rule.positive_body)
        assert sign is solver.phases.phase(atom)


@pytest.mark.parametrize("policy", list(PhasePolicy))
@pytest.mark.parametrize("seed", range(3))
def test_decisions_follow_saved_phase_and_choice_restriction(policy, seed):
    """Test that every decision is on an applicable body atom with the saved phase as sign."""
    text = generate_colouring_instance(12, 0.3, 3, seed=seed)
    recorder = _Recorder()
    solver = Solver(parse_program(text), SolverConfig(n_answers=None, phase_policy=policy), recorder)
    recorder.solver = solver
    list(solver.answer_sets())
    assert recorder.decisions > 0


TIGHT_DELETION = {"deletion_base_interval": 2, "deletion_interval_step": 1}

CONFIGS = [
    SolverConfig(
        n_answers=None,
        restarts=restarts,
        deletion=deletion,
        heuristic=heuristic,
        **(TIGHT_DELETION if deletion else {}),
    )
    for restarts, deletion, heuristic in itertools.product(
        (True, False), (True, False), (HeuristicKind.VSIDS, HeuristicKind.NAIVE)
    )
]


def _check_against_oracle(seed, config):
    program = parse_program(generate_random_program(seed))
    expected = brute_force_answer_sets(program)
    result = solve(program, config)
    assert len(result.answer_sets) == len(set(result.answer_sets))
    assert set(result.answer_sets) == expected, str(program)
    assert result.status is (SolveStatus.EXHAUSTED if expected else SolveStatus.UNSAT)


@pytest.mark.parametrize("seed", range(40))
def test_random_programs_match_oracle(seed):
    """Test the default configuration against the oracle on small random programs."""
    _check_against_oracle(seed, ALL)


@pytest.mark.parametrize("seed", range(40))
def test_random_programs_match_oracle_without_support_check(seed):
    """Test that answers do not depend on the on-demand support check."""
    _check_against_oracle(seed, SolverConfig(n_answers=None, support_check=False))


@pytest.mark.slow
@pytest.mark.parametrize("config", CONFIGS, ids=lambda c: f"{c.heuristic.value}-r{c.restarts:d}-d{c.deletion:d}")
def test_random_programs_match_oracle_all_configurations(config):
    """Test every restart, deletion and heuristic combination on 500 random programs."""
    for seed in range(500):
        _check_against_oracle(seed, config)


def test_restarts_keep_answers_complete():
    """Test that frequent restarts neither lose nor repeat answer sets."""
    text = generate_colouring_instance(9, 0.35, 3, seed=3)
    eager = SolverConfig(n_answers=None, luby_unit=1, restart_warmup=0, restart_factor=0.01)
    plain = SolverConfig(n_answers=None, restarts=False)
    first = solve(parse_program(text), eager)
    second = solve(parse_program(text), plain)
    assert set(first.answer_sets) == set(second.answer_sets)
    assert len(first.answer_sets) == len(set(first.answer_sets))


@pytest.mark.parametrize("policy", list(PhasePolicy))
def test_decision_instrumentation_over_random_programs(policy):
    """Test the phase and choice restriction checks on the random program suite."""
    for seed in range(100):
        recorder = _Recorder()
        program = parse_program(generate_random_program(seed))
        solver = Solver(program, SolverConfig(n_answers=None, phase_policy=policy), recorder)
        recorder.solver = solver
        list(solver.answer_sets())


@pytest.mark.parametrize("support_check", [True, False])
def test_path_colourings_enumerate_without_blowup(support_check):
    """Test that all 48 colourings of a five-vertex path come out through observed decisions."""
    recorder = _Recorder()
    config = SolverConfig(n_answers=None, support_check=support_check)
    solver = Solver(parse_program(colouring_program(nx.path_graph(5), 3)), config, recorder)
    recorder.solver = solver
    answers = list(solver.answer_sets())
    assert len(answers) == 48
    assert len(set(answers)) == 48
    assert solver.status is SolveStatus.EXHAUSTED
    assert solver.statistics.decisions == recorder.decisions
    assert solver.statistics.conflicts < 500


def test_cleanup_runs_on_tight_schedule():
    """Test that a short deletion interval removes learned nogoods without changing the answers."""
    deleted = 0
    for seed in range(4):
        program = parse_program(generate_colouring_instance(12, 0.4, 3, seed=seed))
        tight = solve(program, SolverConfig(n_answers=None, **TIGHT_DELETION))
        kept = solve(program, SolverConfig(n_answers=None, deletion=False))
        assert set(tight.answer_sets) == set(kept.answer_sets)
        assert len(tight.answer_sets) == len(set(tight.answer_sets))
        assert kept.statistics.deleted_nogoods == 0
        deleted += tight.statistics.deleted_nogoods
    assert deleted > 0
