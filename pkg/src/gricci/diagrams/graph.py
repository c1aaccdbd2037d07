# -*- encoding: utf-8 -*-
"""
gricci SignedGraph - trivalent diagrams with signed edges and dotted anchor lines.

A graph is a set of internal vertices, each owning named half-edges, plus a
pairing of half-edges into edges or leaves. Solid half-edges carry Lie algebra
indices, dotted half-edges carry indices of the base W of a Courant algebroid.

    c_vertex    3 solid half-edges (in cyclic order) + any number of dotted inputs
    rho_vertex  1 solid half-edge + 1 dotted output + any number of dotted inputs

A dotted edge runs from a dotted output (tail) to a dotted input (head); the head
vertex is differentiated once along it.

Usage:
    from gricci.diagrams import eye_diagram, preset_graph

    graph = eye_diagram()
    theta = preset_graph("theta")
    graph.to_dict()
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from gricci.exceptions import GraphValidationError

logger = logging.getLogger(__name__)


class VertexKind(str, Enum):
    """Internal vertex kinds."""
    C_VERTEX = "c_vertex"       # structure constants c_abc(x)
    RHO_VERTEX = "rho_vertex"   # anchor rho^i_a(x)


class EdgeKind(str, Enum):
    """
    Edge and leaf kinds.

    PLUS and MINUS select t+ / t-, SOLID is the unsigned line carrying the full
    inverse pairing t, DOTTED pairs an anchor output with a derivative.
    """
    PLUS = "plus"
    MINUS = "minus"
    SOLID = "solid"
    DOTTED = "dotted"

    @property
    def is_solid(self) -> bool:
        return self is not EdgeKind.DOTTED


@dataclass(frozen=True)
class Vertex:
    """
    An internal vertex.

    Attributes:
        name: Unique vertex name
        kind: c_vertex or rho_vertex
        half_edges: Solid half-edges in cyclic (anticlockwise) order
        dotted_out: Outgoing dotted half-edges (the anchor output of a rho_vertex)
        dotted_in: Incoming dotted half-edges, one derivative each
    """
    name: str
    kind: VertexKind
    half_edges: tuple[str, ...]
    dotted_out: tuple[str, ...] = ()
    dotted_in: tuple[str, ...] = ()

    @property
    def all_half_edges(self) -> tuple[str, ...]:
        return self.half_edges + self.dotted_out + self.dotted_in

    def to_dict(self) -> dict:
        d = {"name": self.name, "kind": self.kind.value, "half_edges": list(self.half_edges)}
        if self.dotted_out:
            d["dotted_out"] = list(self.dotted_out)
        if self.dotted_in:
            d["dotted_in"] = list(self.dotted_in)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "Vertex":
        return cls(
            name=data["name"],
            kind=VertexKind(data["kind"]),
            half_edges=tuple(data.get("half_edges", ())),
            dotted_out=tuple(data.get("dotted_out", ())),
            dotted_in=tuple(data.get("dotted_in", ())),
        )


@dataclass(frozen=True)
class Edge:
    """
    An internal edge joining two half-edges.

    Solid edges are unoriented. For dotted edges a is the tail (a dotted output)
    and b the head (a dotted input).
    """
    a: str
    b: str
    kind: EdgeKind

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "kind": self.kind.value}

    @classmethod
    def from_dict(cls, data: dict) -> "Edge":
        return cls(data["a"], data["b"], EdgeKind(data["kind"]))


@dataclass(frozen=True)
class Leaf:
    """An external half-edge with its sign (or dotted kind) and label."""
    half_edge: str
    kind: EdgeKind
    label: str

    def to_dict(self) -> dict:
        return {"half_edge": self.half_edge, "kind": self.kind.value, "label": self.label}

    @classmethod
    def from_dict(cls, data: dict) -> "Leaf":
        return cls(data["half_edge"], EdgeKind(data["kind"]), str(data["label"]))


@dataclass(frozen=True)
class SignedGraph:
    """
    A validated signed diagram.

    Construction validates the graph; an invalid graph raises
    GraphValidationError naming the offending element.

    Attributes:
        vertices: Internal vertices
        edges: Internal edges
        leaves: External half-edges in slot order
        name: Optional label (preset name)
    """
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    leaves: tuple[Leaf, ...] = ()
    name: str = ""
    _owner: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "leaves", tuple(self.leaves))
        object.__setattr__(self, "_owner", _validate(self))

    def vertex_of(self, half_edge: str) -> Vertex:
        """The vertex owning a half-edge."""
        return self._owner[half_edge]

    def vertex(self, name: str) -> Vertex:
        for v in self.vertices:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def half_edge_count(self) -> int:
        return len(self._owner)

    @property
    def euler_characteristic(self) -> int:
        """Vertices minus internal edges; leaves do not count."""
        return len(self.vertices) - len(self.edges)

    @property
    def loops(self) -> int:
        return 1 - self.euler_characteristic

    @property
    def has_dotted_content(self) -> bool:
        return (
            any(v.kind is VertexKind.RHO_VERTEX or v.dotted_in or v.dotted_out for v in self.vertices)
            or any(e.kind is EdgeKind.DOTTED for e in self.edges)
            or any(leaf.kind is EdgeKind.DOTTED for leaf in self.leaves)
        )

    def to_dict(self) -> dict:
        d = {
            "vertices": [v.to_dict() for v in self.vertices],
            "edges": [e.to_dict() for e in self.edges],
            "leaves": [leaf.to_dict() for leaf in self.leaves],
        }
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "SignedGraph":
        try:
            return cls(
                vertices=tuple(Vertex.from_dict(v) for v in data["vertices"]),
                edges=tuple(Edge.from_dict(e) for e in data.get("edges", ())),
                leaves=tuple(Leaf.from_dict(leaf) for leaf in data.get("leaves", ())),
                name=data.get("name", ""),
            )
        except (KeyError, ValueError, TypeError) as e:
            raise GraphValidationError(f"malformed graph document: {e}")

    def with_edge_kinds(self, kinds: dict[int, EdgeKind]) -> "SignedGraph":
        """Copy with the edges at the given positions re-signed."""
        edges = tuple(
            Edge(e.a, e.b, kinds.get(i, e.kind)) for i, e in enumerate(self.edges)
        )
        return SignedGraph(self.vertices, edges, self.leaves, name="")


def _validate(graph: SignedGraph) -> dict[str, Vertex]:
    """
    Check vertex valences, half-edge usage, edge wiring and tadpoles.

    Returns:
        Map from half-edge name to its vertex
    """
    owner: dict[str, Vertex] = {}
    role: dict[str, str] = {}
    names = set()
    for v in graph.vertices:
        if v.name in names:
            raise GraphValidationError(f"duplicate vertex name {v.name!r}", v.name)
        names.add(v.name)
        if v.kind is VertexKind.C_VERTEX:
            if len(v.half_edges) != 3 or v.dotted_out:
                raise GraphValidationError(
                    f"c_vertex {v.name!r} needs 3 solid half-edges and no dotted output", v.name
                )
        elif len(v.half_edges) != 1 or len(v.dotted_out) != 1:
            raise GraphValidationError(
                f"rho_vertex {v.name!r} needs 1 solid half-edge and 1 dotted output", v.name
            )
        for group, label in ((v.half_edges, "solid"), (v.dotted_out, "out"), (v.dotted_in, "in")):
            for h in group:
                if h in owner:
                    raise GraphValidationError(f"half-edge {h!r} appears twice", h)
                owner[h] = v
                role[h] = label

    used: set[str] = set()

    def claim(h: str) -> None:
        if h not in owner:
            raise GraphValidationError(f"unknown half-edge {h!r}", h)
        if h in used:
            raise GraphValidationError(f"half-edge {h!r} is used twice", h)
        used.add(h)

    for e in graph.edges:
        claim(e.a)
        claim(e.b)
        if owner[e.a].name == owner[e.b].name:
            raise GraphValidationError(
                f"tadpole: edge {e.a}-{e.b} joins vertex {owner[e.a].name!r} to itself", e.a
            )
        if e.kind.is_solid:
            if role[e.a] != "solid" or role[e.b] != "solid":
                raise GraphValidationError(f"solid edge {e.a}-{e.b} must join solid half-edges", e.a)
        elif role[e.a] != "out" or role[e.b] != "in":
            raise GraphValidationError(
                f"dotted edge {e.a}->{e.b} must run from a dotted output to a dotted input", e.a
            )

    labels = set()
    for leaf in graph.leaves:
        claim(leaf.half_edge)
        if leaf.label in labels:
            raise GraphValidationError(f"duplicate leaf label {leaf.label!r}", leaf.half_edge)
        labels.add(leaf.label)
        if leaf.kind.is_solid != (role[leaf.half_edge] == "solid"):
            raise GraphValidationError(
                f"leaf {leaf.label!r} of kind {leaf.kind.value} sits on a {role[leaf.half_edge]} half-edge",
                leaf.half_edge,
            )

    dangling = sorted(set(owner) - used)
    if dangling:
        raise GraphValidationError(f"half-edges neither wired nor leaves: {dangling}", dangling[0])
    return owner


def eye_diagram() -> SignedGraph:
    """
    The eye diagram D: two c-vertices joined by a + and a - edge.

    Leaf "1" (+) sits on x and leaf "2" (-) on y. Cyclic orders are read
    anticlockwise from the drawing with x on the left: at x the leaf, then the
    lower (-) edge, then the upper (+) edge; at y the leaf, then the upper (+)
    edge, then the lower (-) edge.
    """
    return SignedGraph(
        vertices=(
            Vertex("x", VertexKind.C_VERTEX, ("x_leaf", "x_minus", "x_plus")),
            Vertex("y", VertexKind.C_VERTEX, ("y_leaf", "y_plus", "y_minus")),
        ),
        edges=(
            Edge("x_plus", "y_plus", EdgeKind.PLUS),
            Edge("x_minus", "y_minus", EdgeKind.MINUS),
        ),
        leaves=(
            Leaf("x_leaf", EdgeKind.PLUS, "1"),
            Leaf("y_leaf", EdgeKind.MINUS, "2"),
        ),
        name="eye",
    )


def unsigned_eye() -> SignedGraph:
    """The one-loop bubble with unsigned edges and unsigned leaves."""
    return SignedGraph(
        vertices=(
            Vertex("x", VertexKind.C_VERTEX, ("x_leaf", "x_lower", "x_upper")),
            Vertex("y", VertexKind.C_VERTEX, ("y_leaf", "y_upper", "y_lower")),
        ),
        edges=(
            Edge("x_upper", "y_upper", EdgeKind.SOLID),
            Edge("x_lower", "y_lower", EdgeKind.SOLID),
        ),
        leaves=(
            Leaf("x_leaf", EdgeKind.SOLID, "1"),
            Leaf("y_leaf", EdgeKind.SOLID, "2"),
        ),
        name="unsigned_eye",
    )


def theta_graph() -> SignedGraph:
    """Two c-vertices joined by three parallel unsigned edges, no leaves."""
    return SignedGraph(
        vertices=(
            Vertex("x", VertexKind.C_VERTEX, ("x0", "x1", "x2")),
            Vertex("y", VertexKind.C_VERTEX, ("y0", "y2", "y1")),
        ),
        edges=tuple(Edge(f"x{i}", f"y{i}", EdgeKind.SOLID) for i in range(3)),
        name="theta",
    )


def rho_loop(sign: EdgeKind) -> SignedGraph:
    """
    The anchor loop: a c-vertex with leaves "1" (+) and "2" (-) whose third
    solid half-edge runs along a sign edge into a rho-vertex, whose dotted output
    differentiates the c-vertex.
    """
    if sign not in (EdgeKind.PLUS, EdgeKind.MINUS):
        raise GraphValidationError(f"anchor loop sign must be plus or minus, got {sign.value}")
    return SignedGraph(
        vertices=(
            Vertex("x", VertexKind.C_VERTEX, ("x_plus", "x_minus", "x_loop"), dotted_in=("x_d",)),
            Vertex("r", VertexKind.RHO_VERTEX, ("r_loop",), dotted_out=("r_out",)),
        ),
        edges=(
            Edge("x_loop", "r_loop", sign),
            Edge("r_out", "x_d", EdgeKind.DOTTED),
        ),
        leaves=(
            Leaf("x_plus", EdgeKind.PLUS, "1"),
            Leaf("x_minus", EdgeKind.MINUS, "2"),
        ),
        name=f"rho_loop_{sign.value}",
    )


PRESETS = {
    "eye": eye_diagram,
    "unsigned_eye": unsigned_eye,
    "theta": theta_graph,
    "rho_loop_plus": lambda: rho_loop(EdgeKind.PLUS),
    "rho_loop_minus": lambda: rho_loop(EdgeKind.MINUS),
}


def preset_graph(name: str) -> SignedGraph:
    """
    Look up a named graph.

    Raises:
        GraphValidationError: For unknown names
    """
    try:
        return PRESETS[name]()
    except KeyError:
        raise GraphValidationError(
            f"unknown preset graph {name!r}, choose from {sorted(PRESETS)}", name
        )


def ggric_diagrams() -> list[tuple[Fraction, SignedGraph]]:
    """
    The one-loop divergent diagrams of the Courant sigma model with coefficients.

    Returns:
        [(1, D), (1/2, anchor loop through a + edge), (-1/2, anchor loop through a - edge)]
    """
    return [
        (Fraction(1), eye_diagram()),
        (Fraction(1, 2), rho_loop(EdgeKind.PLUS)),
        (Fraction(-1, 2), rho_loop(EdgeKind.MINUS)),
    ]


def load_graph(spec: str) -> SignedGraph:
    """Resolve a CLI graph argument: a preset name or "file:PATH" to a JSON document."""
    if spec.startswith("file:"):
        try:
            data = json.loads(Path(spec[5:]).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise GraphValidationError(f"cannot read graph {spec[5:]}: {e}")
        return SignedGraph.from_dict(data)
    return preset_graph(spec)
