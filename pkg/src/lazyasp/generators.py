"""
Seeded instance generators: graph colouring benchmarks and small random
programs for oracle comparison.
"""

import random
from typing import Dict, List, NamedTuple

import networkx as nx

__all__ = [
    "ColouringPreset",
    "COLOURING_PRESETS",
    "colouring_program",
    "generate_colouring_instance",
    "generate_random_program",
]

COLOURING_ENCODING = """\
assign(V,C) :- vertex(V), colour(C), not other(V,C).
other(V,C) :- assign(V,D), diff(C,D).
colored(V) :- assign(V,C).
:- vertex(V), not colored(V).
:- edge(V,U), assign(V,C), assign(U,C).
"""


class ColouringPreset(NamedTuple):
    vertices: int
    edge_probability: float
    colours: int


# Average degree around 4.5 keeps 3-colouring near the phase transition
COLOURING_PRESETS: Dict[str, ColouringPreset] = {
    "hard": ColouringPreset(vertices=30, edge_probability=0.155, colours=3),
    "small": ColouringPreset(vertices=12, edge_probability=0.3, colours=3),
}


def colouring_program(graph: nx.Graph, colours: int, header: str = "") -> str:
    """
    Program text colouring ``graph`` with ``colours`` colours.

    Vertices must be integers. Each edge is emitted once, smaller vertex first.

    Raises:
        ValueError: If fewer than two colours are requested
    """
    if colours < 2:
        raise ValueError("at least two colours are required")
    lines: List[str] = []
    if header:
        lines.append(f"% {header}")
    lines.extend(f"vertex({v})." for v in sorted(graph.nodes))
    lines.extend(f"edge({u},{v})." for u, v in sorted(tuple(sorted(e)) for e in graph.edges))
    names = [f"c{i}" for i in range(1, colours + 1)]
    lines.extend(f"colour({c})." for c in names)
    lines.extend(f"diff({a},{b})." for a in names for b in names if a != b)
    return "\n".join(lines) + "\n" + COLOURING_ENCODING


def generate_colouring_instance(vertices: int, edge_probability: float, colours: int, seed: int) -> str:
    """
    Random G(n, p) graph colouring instance; identical arguments give
    byte-identical text.

    Raises:
        ValueError: If the probability is not in (0, 1] or colours < 2
    """
    if not 0.0 < edge_probability <= 1.0:
        raise ValueError("edge probability must be in (0, 1]")
    if vertices < 1:
        raise ValueError("at least one vertex is required")
    if edge_probability >= 1.0:
        graph = nx.complete_graph(vertices)
    else:
        graph = nx.gnp_random_graph(vertices, edge_probability, seed=seed)
    header = f"colouring vertices={vertices} p={edge_probability} colours={colours} seed={seed}"
    return colouring_program(graph, colours, header=header)


def generate_random_program(
    seed: int,
    max_predicates: int = 3,
    max_arity: int = 2,
    max_constants: int = 3,
    max_rules: int = 8,
    max_ground_atoms: int = 20,
) -> str:
    """
    A small random normal program, safe by construction.

    Predicate arities are redrawn until the Herbrand base has at most
    ``max_ground_atoms`` atoms. Head and negative body atoms only use
    variables bound in the positive body.
    """
    rng = random.Random(seed)
    constants = ["a", "b", "c", "d", "e"][: rng.randint(1, max_constants)]
    names = ["p", "q", "r", "s", "t"][: rng.randint(1, max_predicates)]
    while True:
        arities = {name: rng.randint(0, max_arity) for name in names}
        if sum(len(constants) ** k for k in arities.values()) <= max_ground_atoms:
            break

    def atom(name: str, pool: List[str]) -> str:
        arity = arities[name]
        if arity == 0:
            return name
        return f"{name}({','.join(rng.choice(pool) for _ in range(arity))})"

    statements = []
    for _ in range(rng.randint(1, 3)):
        statements.append(atom(rng.choice(names), constants) + ".")
    for _ in range(rng.randint(1, max(1, max_rules - len(statements)))):
        positive = [atom(rng.choice(names), constants + ["X", "Y"]) for _ in range(rng.randint(0, 2))]
        bound = sorted({t for a in positive for t in a.replace("(", ",").replace(")", "").split(",")[1:]
                        if t[:1].isupper()})
        pool = constants + bound
        negative = [f"not {atom(rng.choice(names), pool)}" for _ in range(rng.randint(0, 2))]
        body = ", ".join(positive + negative)
        if rng.random() < 0.2 and body:
            statements.append(f":- {body}.")
            continue
        head = atom(rng.choice(names), pool)
        statements.append(f"{head} :- {body}." if body else f"{head}.")
    return "\n".join(statements) + "\n"
