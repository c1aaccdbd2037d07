# -*- encoding: utf-8 -*-
"""
gricci Automorphisms - automorphism counts, symmetry factors and loop weights.

An automorphism is a permutation of half-edges that maps vertices to vertices of
the same kind, edges to edges of the same kind (dotted edges tail to tail) and
leaves to leaves of the same kind; with fix_leaves every leaf is fixed. Cyclic
orders are not required to be preserved.

The count factors as (vertex bijections) x (permutations inside classes of
parallel edges) x (permutations of same-kind leaves at one vertex). Vertex
bijections are enumerated with networkx's VF2 matcher on the simple directed
quotient graph whose edge attributes record the parallel edge classes.

Usage:
    from gricci.diagrams import automorphism_count, preset_graph, symmetry_factor

    automorphism_count(preset_graph("theta"), fix_leaves=True)   # 12
    symmetry_factor(preset_graph("unsigned_eye"), fix_leaves=True)   # Fraction(1, 2)
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from gricci.diagrams.graph import EdgeKind, SignedGraph
from gricci.exceptions import DiagramSizeError

logger = logging.getLogger(__name__)

HALF_EDGE_LIMIT = 12


def _quotient_graph(graph: SignedGraph, fix_leaves: bool) -> nx.DiGraph:
    """Simple digraph on vertices; node keys carry kind and leaves, edge keys carry classes."""
    leaves_at: dict[str, list] = {v.name: [] for v in graph.vertices}
    for leaf in graph.leaves:
        entry = (leaf.kind.value, leaf.label) if fix_leaves else (leaf.kind.value,)
        leaves_at[graph.vertex_of(leaf.half_edge).name].append(entry)

    g = nx.DiGraph()
    for v in graph.vertices:
        g.add_node(v.name, key=(v.kind.value, tuple(sorted(leaves_at[v.name]))))

    classes: dict[tuple[str, str], Counter] = {}
    for e in graph.edges:
        u, w = graph.vertex_of(e.a).name, graph.vertex_of(e.b).name
        classes.setdefault((u, w), Counter())[e.kind.value] += 1
        if e.kind is not EdgeKind.DOTTED:
            classes.setdefault((w, u), Counter())[e.kind.value] += 1
    for (u, w), counts in classes.items():
        g.add_edge(u, w, key=tuple(sorted(counts.items())))
    return g


def _parallel_factor(graph: SignedGraph, fix_leaves: bool) -> int:
    """Permutations of parallel same-kind edges, times same-kind leaves per vertex when free."""
    parallel: Counter = Counter()
    for e in graph.edges:
        u, w = graph.vertex_of(e.a).name, graph.vertex_of(e.b).name
        ends = (u, w) if e.kind is EdgeKind.DOTTED else tuple(sorted((u, w)))
        parallel[(ends, e.kind)] += 1
    factor = math.prod(math.factorial(n) for n in parallel.values())
    if not fix_leaves:
        leaf_groups = Counter(
            (graph.vertex_of(leaf.half_edge).name, leaf.kind) for leaf in graph.leaves
        )
        factor *= math.prod(math.factorial(n) for n in leaf_groups.values())
    return factor


def automorphism_count(
    graph: SignedGraph,
    fix_leaves: bool = True,
    limit: int = HALF_EDGE_LIMIT,
) -> int:
    """
    Exact number of kind- and incidence-preserving automorphisms.

    Args:
        graph: Valid signed graph
        fix_leaves: Count |Aut_0| (leaves pointwise fixed) instead of |Aut|
        limit: Maximum number of half-edges accepted

    Returns:
        Positive integer count

    Raises:
        DiagramSizeError: If the graph has more half-edges than limit
    """
    if graph.half_edge_count > limit:
        raise DiagramSizeError(graph.half_edge_count, limit)
    quotient = _quotient_graph(graph, fix_leaves)
    matcher = DiGraphMatcher(
        quotient,
        quotient,
        node_match=lambda a, b: a["key"] == b["key"],
        edge_match=lambda a, b: a["key"] == b["key"],
    )
    bijections = sum(1 for _ in matcher.isomorphisms_iter())
    count = bijections * _parallel_factor(graph, fix_leaves)
    logger.debug("graph %s: %d vertex bijections, |Aut|=%d", graph.name, bijections, count)
    return count


def symmetry_factor(graph: SignedGraph, fix_leaves: bool = True) -> Fraction:
    """1 / |Aut| as an exact fraction."""
    return Fraction(1, automorphism_count(graph, fix_leaves))


@dataclass(frozen=True)
class DiagramWeight:
    """
    Perturbative weight (i hbar)^hbar_power * symmetry_factor of one diagram.

    Attributes:
        hbar_power: k - chi for correlation forms, loops = 1 - chi for effective action terms
        symmetry_factor: 1/|Aut_0| or 1/|Aut|
        loops: Number of loops
    """
    hbar_power: int
    symmetry_factor: Fraction
    loops: int

    def to_dict(self) -> dict:
        return {
            "hbar_power": self.hbar_power,
            "symmetry_factor": str(self.symmetry_factor),
            "loops": self.loops,
        }


def loop_weight(graph: SignedGraph, fix_leaves: bool = True) -> DiagramWeight:
    """
    Weight of a diagram in the perturbative sums.

    With fix_leaves the graph is read as a term of a k-point correlation form,
    weight (i hbar)^(k - chi) / |Aut_0|; otherwise as an effective action term,
    weight (i hbar)^(1 - chi) / |Aut|.
    """
    chi = graph.euler_characteristic
    power = len(graph.leaves) - chi if fix_leaves else 1 - chi
    return DiagramWeight(power, symmetry_factor(graph, fix_leaves), graph.loops)


def signed_expansions(graph: SignedGraph) -> list[SignedGraph]:
    """
    Every way of replacing unsigned solid edges by plus or minus edges.

    The inverse pairing splits as t = t+ + t-, so the tensor factor of an
    unsigned graph is the sum of the factors of its expansions.
    """
    unsigned = [i for i, e in enumerate(graph.edges) if e.kind is EdgeKind.SOLID]
    expansions = []
    for signs in itertools.product((EdgeKind.PLUS, EdgeKind.MINUS), repeat=len(unsigned)):
        expansions.append(graph.with_edge_kinds(dict(zip(unsigned, signs))))
    return expansions
