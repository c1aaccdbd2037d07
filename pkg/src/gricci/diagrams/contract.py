# -*- encoding: utf-8 -*-
"""
gricci Contraction - the Lie algebra tensor factor of a signed graph.

Every half-edge gets an index. Vertices contribute c_abc (or its derivatives,
or derivatives of the anchor), edges contribute t+, t- or t (solid) and the
identity on W (dotted), leaves are raised with the inverse pairing of their sign
so that a plus leaf slot lies in V+. The whole product is one einsum with a
fixed loop order, so results do not depend on thread count.

Usage:
    from gricci.algebra import preset_algebra, random_metric
    from gricci.diagrams import contract, eye_diagram

    alg = preset_algebra("su2_double")
    tensor = contract(eye_diagram(), alg, random_metric(alg, seed=0, scale=0.1))
"""

import logging
from typing import TYPE_CHECKING, Callable

import numpy as np

from gricci.algebra import GeneralizedMetric, QuadraticLieAlgebra, SplitInversePairing, split_inverse
from gricci.diagrams.graph import EdgeKind, SignedGraph, Vertex, VertexKind
from gricci.exceptions import DiagramSizeError, DottedContentError

if TYPE_CHECKING:
    from gricci.flow.courant import CourantData

logger = logging.getLogger(__name__)

# numpy's einsum sublist format accepts at most 52 distinct indices
EINSUM_INDEX_LIMIT = 52


def _line_matrix(kind: EdgeKind, split: SplitInversePairing, base_dim: int) -> np.ndarray:
    if kind is EdgeKind.PLUS:
        return split.tplus
    if kind is EdgeKind.MINUS:
        return split.tminus
    if kind is EdgeKind.SOLID:
        return split.t
    return np.eye(base_dim)


def _contract(
    graph: SignedGraph,
    split: SplitInversePairing,
    vertex_tensor: Callable[[Vertex], np.ndarray],
    base_dim: int = 0,
) -> np.ndarray:
    """Assemble and evaluate the einsum for a graph."""
    if not graph.vertices:
        return np.array(1.0)
    ids: dict[str, int] = {}
    for v in graph.vertices:
        for h in v.all_half_edges:
            ids[h] = len(ids)
    if len(ids) + len(graph.leaves) > EINSUM_INDEX_LIMIT:
        raise DiagramSizeError(len(ids) + len(graph.leaves), EINSUM_INDEX_LIMIT)

    operands: list = []
    for v in graph.vertices:
        if v.kind is VertexKind.C_VERTEX:
            slots = list(v.half_edges) + list(v.dotted_in)
        else:
            # anchor rho^i_a: W index first, then the Lie algebra index
            slots = list(v.dotted_out) + list(v.half_edges) + list(v.dotted_in)
        operands += [vertex_tensor(v), [ids[h] for h in slots]]
    for e in graph.edges:
        operands += [_line_matrix(e.kind, split, base_dim), [ids[e.a], ids[e.b]]]
    output = []
    for position, leaf in enumerate(graph.leaves):
        out = len(ids) + position
        operands += [_line_matrix(leaf.kind, split, base_dim), [out, ids[leaf.half_edge]]]
        output.append(out)
    return np.einsum(*operands, output, optimize=False)


def contract(
    graph: SignedGraph,
    alg: QuadraticLieAlgebra,
    metric: GeneralizedMetric,
) -> np.ndarray:
    """
    Tensor factor T of a pure Chern-Simons graph.

    Each c-vertex contributes c with its half-edges read in stored cyclic order,
    each edge t+ / t- / t according to its kind, and each leaf slot is raised with
    the inverse pairing of its sign.

    Args:
        graph: Graph with c-vertices and solid edges only
        alg: Quadratic Lie algebra
        metric: Generalized metric defining t+ and t-

    Returns:
        Array with one slot per leaf, in leaf order

    Raises:
        DottedContentError: If the graph has anchor vertices or dotted lines
    """
    if graph.has_dotted_content:
        raise DottedContentError(
            f"graph {graph.name or '<anonymous>'} has dotted content, use contract_courant",
            graph.name,
        )
    split = split_inverse(alg, metric)
    return _contract(graph, split, lambda v: alg.structure)


def contract_courant(
    graph: SignedGraph,
    cdata: "CourantData",
    x: np.ndarray,
    metric: GeneralizedMetric,
) -> np.ndarray:
    """
    Tensor factor of a Courant sigma model graph at a point x of the base.

    A c-vertex with m incoming dotted lines contributes the m-th derivative of
    c_abc at x, a rho-vertex with m incoming dotted lines the m-th derivative of
    rho^i_a; dotted lines contract base indices with the identity. Derivatives
    beyond the polynomial degree are exact zeros.

    Args:
        graph: Valid signed graph, possibly with dotted content
        cdata: Polynomial Courant algebroid data
        x: Point of the base W
        metric: Generalized metric on the fiber

    Returns:
        Array with one slot per leaf (fiber index for solid leaves, base index for dotted)
    """
    x = np.asarray(x, dtype=float)
    fiber = cdata.fiber_algebra(x)
    split = split_inverse(fiber, metric)

    def vertex_tensor(v: Vertex) -> np.ndarray:
        order = len(v.dotted_in)
        if v.kind is VertexKind.C_VERTEX:
            return cdata.c_derivative(x, order)
        return cdata.rho_derivative(x, order)

    return _contract(graph, split, vertex_tensor, cdata.base_dim)
