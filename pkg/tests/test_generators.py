"""Tests for the seeded instance generators."""
import networkx as nx
import pytest

from lazyasp.generators import (
    COLOURING_PRESETS,
    colouring_program,
    generate_colouring_instance,
    generate_random_program,
)
from lazyasp.oracle import ground_program
from lazyasp.syntax import parse_program


def test_colouring_instance_is_deterministic():
    """Test that equal arguments give byte-identical text."""
    shape = COLOURING_PRESETS["hard"]
    first = generate_colouring_instance(shape.vertices, shape.edge_probability, shape.colours, seed=3)
    second = generate_colouring_instance(shape.vertices, shape.edge_probability, shape.colours, seed=3)
    assert first == second
    assert first != generate_colouring_instance(shape.vertices, shape.edge_probability, shape.colours, seed=4)


def test_colouring_instance_parses():
    """Test that generated instances are valid programs."""
    text = generate_colouring_instance(10, 0.4, 3, seed=0)
    assert text.startswith("% colouring vertices=10")
    program = parse_program(text)
    assert program.predicates()["edge"] == 2


def test_triangle_text():
    """Test the facts emitted for K3."""
    text = colouring_program(nx.complete_graph(3), 2)
    for fact in ("vertex(0).", "edge(0,1).", "edge(0,2).", "edge(1,2).", "colour(c2).", "diff(c1,c2)."):
        assert fact in text.splitlines()
    assert "edge(1,0)." not in text


def test_full_probability_gives_complete_graph():
    """Test that p = 1 emits every edge."""
    text = generate_colouring_instance(5, 1.0, 3, seed=0)
    assert sum(1 for line in text.splitlines() if line.startswith("edge(")) == 10


@pytest.mark.parametrize("colours", [0, 1])
def test_too_few_colours(colours):
    """Test that fewer than two colours are rejected."""
    with pytest.raises(ValueError):
        generate_colouring_instance(5, 0.5, colours, seed=0)


@pytest.mark.parametrize("probability", [0.0, -0.1, 1.5])
def test_probability_out_of_range(probability):
    """Test that edge probabilities outside (0, 1] are rejected."""
    with pytest.raises(ValueError):
        generate_colouring_instance(5, probability, 3, seed=0)


@pytest.mark.parametrize("seed", range(100))
def test_random_program_is_safe_and_small(seed):
    """Test that random programs parse and stay within the atom budget."""
    text = generate_random_program(seed)
    assert text == generate_random_program(seed)
    program = parse_program(text)
    atoms = set()
    for rule in ground_program(program):
        if rule.head is not None:
            atoms.add(rule.head)
        atoms |= rule.positive_body | rule.negative_body
    assert len(atoms) <= 20
