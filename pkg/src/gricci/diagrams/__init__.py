# -*- encoding: utf-8 -*-
"""
gricci Diagrams - signed trivalent graphs, symmetry factors and tensor factors.

Usage:
    from gricci.diagrams import automorphism_count, contract, eye_diagram

    graph = eye_diagram()
    automorphism_count(graph, fix_leaves=True)
    tensor = contract(graph, alg, metric)
"""

from gricci.diagrams.automorphism import (
    HALF_EDGE_LIMIT,
    DiagramWeight,
    automorphism_count,
    loop_weight,
    signed_expansions,
    symmetry_factor,
)
from gricci.diagrams.contract import contract, contract_courant
from gricci.diagrams.graph import (
    PRESETS,
    Edge,
    EdgeKind,
    Leaf,
    SignedGraph,
    Vertex,
    VertexKind,
    eye_diagram,
    ggric_diagrams,
    load_graph,
    preset_graph,
    rho_loop,
    theta_graph,
    unsigned_eye,
)

__all__ = [
    "HALF_EDGE_LIMIT",
    "DiagramWeight",
    "automorphism_count",
    "loop_weight",
    "signed_expansions",
    "symmetry_factor",
    "contract",
    "contract_courant",
    "PRESETS",
    "Edge",
    "EdgeKind",
    "Leaf",
    "SignedGraph",
    "Vertex",
    "VertexKind",
    "eye_diagram",
    "ggric_diagrams",
    "load_graph",
    "preset_graph",
    "rho_loop",
    "theta_graph",
    "unsigned_eye",
]
