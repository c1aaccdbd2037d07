# -*- encoding: utf-8 -*-
"""
Tests for gricci diagrams module.

Tests graph validation, automorphism counts against a brute-force search over
half-edge permutations, and tensor contraction against nested-loop oracles.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from gricci.algebra import (
    QuadraticLieAlgebra,
    automorphism,
    canonical_metric,
    metric_from_involution,
    preset_algebra,
    random_metric,
    split_inverse,
    transform_algebra,
    transform_metric,
)
from gricci.diagrams import (
    Edge,
    EdgeKind,
    Leaf,
    SignedGraph,
    Vertex,
    VertexKind,
    automorphism_count,
    contract,
    contract_courant,
    eye_diagram,
    ggric_diagrams,
    loop_weight,
    preset_graph,
    signed_expansions,
    symmetry_factor,
)
from gricci.exceptions import DiagramSizeError, DottedContentError, GraphValidationError
from gricci.flow import CourantData

C = VertexKind.C_VERTEX


def brute_force_automorphisms(graph: SignedGraph, fix_leaves: bool) -> int:
    """Count half-edge permutations preserving vertices, edges and leaves."""
    solid = {frozenset((e.a, e.b)): e.kind for e in graph.edges if e.kind is not EdgeKind.DOTTED}
    dotted = {(e.a, e.b) for e in graph.edges if e.kind is EdgeKind.DOTTED}
    leaves = {leaf.half_edge: leaf for leaf in graph.leaves}
    verts = graph.vertices
    count = 0
    for perm in itertools.permutations(range(len(verts))):
        pairs = [(verts[i], verts[j]) for i, j in enumerate(perm)]
        if any(
            v.kind != w.kind
            or len(v.half_edges) != len(w.half_edges)
            or len(v.dotted_in) != len(w.dotted_in)
            or len(v.dotted_out) != len(w.dotted_out)
            for v, w in pairs
        ):
            continue
        choices = []
        for v, w in pairs:
            for src, dst in ((v.half_edges, w.half_edges), (v.dotted_out, w.dotted_out), (v.dotted_in, w.dotted_in)):
                choices.append([list(zip(src, p)) for p in itertools.permutations(dst)])
        for combo in itertools.product(*choices):
            phi = dict(itertools.chain.from_iterable(combo))
            if any(solid.get(frozenset((phi[a], phi[b]))) != kind for a, b in map(tuple, solid) for kind in [solid[frozenset((a, b))]]):
                continue
            if any((phi[a], phi[b]) not in dotted for a, b in dotted):
                continue
            ok = True
            for h, leaf in leaves.items():
                image = leaves.get(phi[h])
                if image is None or image.kind != leaf.kind or (fix_leaves and image.label != leaf.label):
                    ok = False
                    break
            count += ok
    return count


def naive_eye(alg: QuadraticLieAlgebra, tp: np.ndarray, tm: np.ndarray) -> np.ndarray:
    """Eye diagram by nested loops, cyclic orders (leaf, -, +) and (leaf, +, -)."""
    n = alg.dim
    c = alg.structure
    core = np.zeros((n, n))
    for a, b, m1, p1, m2, p2 in itertools.product(range(n), repeat=6):
        core[a, b] += c[a, m1, p1] * c[b, p2, m2] * tp[p1, p2] * tm[m1, m2]
    out = np.zeros((n, n))
    for u, v, a, b in itertools.product(range(n), repeat=4):
        out[u, v] += tp[u, a] * tm[v, b] * core[a, b]
    return out


def random_quadratic(n: int, p: int, seed: int) -> QuadraticLieAlgebra:
    """Random totally antisymmetric c on a diagonal pairing (Jacobi not required)."""
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n, n))
    c = (a - a.transpose(1, 0, 2) + a.transpose(1, 2, 0)
         - a.transpose(2, 1, 0) + a.transpose(2, 0, 1) - a.transpose(0, 2, 1)) / 6
    return QuadraticLieAlgebra(np.diag([1.0] * p + [-1.0] * (n - p)), c)


def k4_graph() -> SignedGraph:
    names = "abcd"
    he = {(i, j): f"{names[i]}{names[j]}" for i in range(4) for j in range(4) if i != j}
    vertices = tuple(
        Vertex(names[i], C, tuple(he[(i, j)] for j in range(4) if j != i)) for i in range(4)
    )
    edges = tuple(
        Edge(he[(i, j)], he[(j, i)], EdgeKind.SOLID) for i, j in itertools.combinations(range(4), 2)
    )
    return SignedGraph(vertices, edges, name="k4")


def triangle_graph() -> SignedGraph:
    """Three c-vertices in a cycle, one unsigned leaf each."""
    vertices = tuple(Vertex(f"v{i}", C, (f"l{i}", f"n{i}", f"p{i}")) for i in range(3))
    edges = tuple(Edge(f"n{i}", f"p{(i + 1) % 3}", EdgeKind.SOLID) for i in range(3))
    leaves = tuple(Leaf(f"l{i}", EdgeKind.SOLID, str(i)) for i in range(3))
    return SignedGraph(vertices, edges, leaves, name="triangle")


@pytest.fixture
def su2_double():
    return preset_algebra("su2_double")


class TestSignedGraph:
    """Tests for SignedGraph construction and validation."""

    def test_eye_diagram_valid(self):
        """Test D has two c-vertices, a plus and a minus edge, leaves + and -."""
        graph = eye_diagram()
        assert len(graph.vertices) == 2
        assert [leaf.kind for leaf in graph.leaves] == [EdgeKind.PLUS, EdgeKind.MINUS]
        assert sorted(e.kind.value for e in graph.edges) == ["minus", "plus"]
        assert graph.loops == 1

    def test_tadpole_rejected(self):
        """Test an edge joining a vertex to itself fails validation."""
        with pytest.raises(GraphValidationError) as exc:
            SignedGraph(
                vertices=(Vertex("x", C, ("a", "b", "c")),),
                edges=(Edge("a", "b", EdgeKind.PLUS),),
                leaves=(Leaf("c", EdgeKind.PLUS, "1"),),
            )
        assert "tadpole" in str(exc.value)
        assert exc.value.element == "a"

    def test_wrong_valence_rejected(self):
        """Test a c-vertex needs three solid half-edges."""
        with pytest.raises(GraphValidationError):
            SignedGraph(vertices=(Vertex("x", C, ("a", "b")),), leaves=(
                Leaf("a", EdgeKind.PLUS, "1"), Leaf("b", EdgeKind.PLUS, "2")))

    def test_rho_vertex_needs_output(self):
        """Test a rho-vertex without its dotted output is rejected."""
        with pytest.raises(GraphValidationError):
            SignedGraph(
                vertices=(Vertex("r", VertexKind.RHO_VERTEX, ("a",)),),
                leaves=(Leaf("a", EdgeKind.PLUS, "1"),),
            )

    def test_reversed_dotted_edge_rejected(self):
        """Test dotted edges must run from an output to an input."""
        graph = preset_graph("rho_loop_plus").to_dict()
        for e in graph["edges"]:
            if e["kind"] == "dotted":
                e["a"], e["b"] = e["b"], e["a"]
        with pytest.raises(GraphValidationError):
            SignedGraph.from_dict(graph)

    def test_dangling_half_edge_rejected(self):
        """Test every half-edge must be wired or a leaf."""
        with pytest.raises(GraphValidationError) as exc:
            SignedGraph(vertices=(Vertex("x", C, ("a", "b", "c")),), leaves=(Leaf("a", EdgeKind.PLUS, "1"),))
        assert "b" in str(exc.value)

    def test_json_document(self):
        """Test a preset survives its JSON document."""
        graph = preset_graph("rho_loop_minus")
        assert SignedGraph.from_dict(graph.to_dict()) == graph

    def test_unknown_preset(self):
        """Test unknown preset names are rejected."""
        with pytest.raises(GraphValidationError):
            preset_graph("sunset")

    def test_ggric_diagrams(self):
        """Test the Courant sum has coefficients 1, 1/2, -1/2 and starts with D."""
        diagrams = ggric_diagrams()
        assert [c for c, _ in diagrams] == [Fraction(1), Fraction(1, 2), Fraction(-1, 2)]
        assert diagrams[0][1] == eye_diagram()
        loop_signs = [g.edges[0].kind for _, g in diagrams[1:]]
        assert loop_signs == [EdgeKind.PLUS, EdgeKind.MINUS]


class TestAutomorphisms:
    """Tests for automorphism_count and symmetry factors."""

    def test_theta(self):
        """Test |Aut(theta)| = 12."""
        assert automorphism_count(preset_graph("theta"), fix_leaves=True) == 12

    def test_signed_eye(self):
        """Test the +/- signs break the edge swap."""
        assert automorphism_count(eye_diagram(), fix_leaves=True) == 1
        assert automorphism_count(eye_diagram(), fix_leaves=False) == 1

    def test_unsigned_eye(self):
        """Test |Aut_0| = 2 and |Aut| = 4 for the unsigned bubble."""
        graph = preset_graph("unsigned_eye")
        assert automorphism_count(graph, fix_leaves=True) == 2
        assert automorphism_count(graph, fix_leaves=False) == 4
        assert symmetry_factor(graph, fix_leaves=True) == Fraction(1, 2)

    @pytest.mark.parametrize("name", ["theta", "eye", "unsigned_eye", "rho_loop_plus", "rho_loop_minus"])
    @pytest.mark.parametrize("fix_leaves", [True, False])
    def test_presets_match_brute_force(self, name, fix_leaves):
        """Test the matcher agrees with exhaustive half-edge search."""
        graph = preset_graph(name)
        assert automorphism_count(graph, fix_leaves) == brute_force_automorphisms(graph, fix_leaves)

    def test_k4(self):
        """Test the tetrahedron has the full symmetric group as automorphisms."""
        graph = k4_graph()
        assert automorphism_count(graph) == 24
        assert brute_force_automorphisms(graph, True) == 24

    def test_triangle_with_leaves(self):
        """Test the labelled triangle is rigid and the unlabelled one dihedral."""
        graph = triangle_graph()
        assert automorphism_count(graph, fix_leaves=True) == 1
        assert automorphism_count(graph, fix_leaves=False) == 6
        assert brute_force_automorphisms(graph, False) == 6

    def test_size_limit(self):
        """Test graphs beyond the half-edge limit are refused."""
        with pytest.raises(DiagramSizeError) as exc:
            automorphism_count(k4_graph(), limit=10)
        assert exc.value.half_edges == 12

    def test_loop_weight(self):
        """Test hbar powers for correlation forms and effective action terms."""
        weight = loop_weight(eye_diagram(), fix_leaves=True)
        assert weight.hbar_power == 2
        assert weight.loops == 1
        bubble = loop_weight(preset_graph("unsigned_eye"), fix_leaves=False)
        assert bubble.hbar_power == 1
        assert bubble.symmetry_factor == Fraction(1, 4)

    def test_signed_expansions_weight(self):
        """Test the unsigned bubble at 1/4 becomes the mixed bubble at 1/2."""
        expansions = signed_expansions(preset_graph("unsigned_eye"))
        assert len(expansions) == 4
        mixed = [g for g in expansions if {e.kind for e in g.edges} == {EdgeKind.PLUS, EdgeKind.MINUS}]
        assert len(mixed) == 2
        total = Fraction(len(mixed), 4)
        assert total == symmetry_factor(mixed[0], fix_leaves=False)


class TestContract:
    """Tests for contract."""

    def test_abelian_zero(self):
        """Test every graph vanishes on an abelian algebra."""
        alg = preset_algebra("abelian", p=2, q=2)
        tensor = contract(eye_diagram(), alg, random_metric(alg, seed=1))
        assert np.all(tensor == 0)

    def test_chiral_su2_zero(self):
        """Test D vanishes when V+ = 0."""
        alg = preset_algebra("su2")
        metric = metric_from_involution(alg, -np.eye(3))
        np.testing.assert_array_equal(contract(eye_diagram(), alg, metric), np.zeros((3, 3)))

    def test_subalgebra_splitting_zero(self, su2_double):
        """Test D vanishes on the su2_double subalgebra splitting."""
        metric = canonical_metric(su2_double)
        tensor = contract(eye_diagram(), su2_double, metric)
        np.testing.assert_allclose(tensor, 0.0, atol=1e-14)
        split = split_inverse(su2_double, metric)
        np.testing.assert_allclose(naive_eye(su2_double, split.tplus, split.tminus), 0.0, atol=1e-14)

    def test_generic_metric_nonzero(self, su2_double):
        """Test D is nonzero away from the subalgebra splitting."""
        tensor = contract(eye_diagram(), su2_double, random_metric(su2_double, seed=0))
        assert np.max(np.abs(tensor)) > 1e-3

    @pytest.mark.parametrize("n,p,seed", [(2, 1, 0), (3, 2, 1), (4, 2, 2), (5, 3, 3), (6, 3, 4), (6, 1, 5)])
    def test_matches_naive_oracle(self, n, p, seed):
        """Test the einsum agrees with nested loops on random algebras."""
        alg = random_quadratic(n, p, seed)
        metric = random_metric(alg, seed=seed + 100, scale=0.4)
        split = split_inverse(alg, metric)
        np.testing.assert_allclose(
            contract(eye_diagram(), alg, metric), naive_eye(alg, split.tplus, split.tminus), atol=1e-12
        )

    def test_theta_matches_naive(self):
        """Test the closed theta graph against a six-index loop."""
        alg = random_quadratic(4, 2, 7)
        t = alg.inverse_pairing
        c = alg.structure
        expected = 0.0
        for x0, x1, x2, y0, y1, y2 in itertools.product(range(4), repeat=6):
            expected += c[x0, x1, x2] * c[y0, y2, y1] * t[x0, y0] * t[x1, y1] * t[x2, y2]
        value = contract(preset_graph("theta"), alg, canonical_metric(alg))
        assert float(value) == pytest.approx(expected, abs=1e-12)

    def test_scaling(self, su2_double):
        """Test scaling c by s scales a two-vertex graph by s^2."""
        metric = random_metric(su2_double, seed=1, scale=0.1)
        scaled = QuadraticLieAlgebra(su2_double.pairing, 1.7 * su2_double.structure)
        np.testing.assert_allclose(
            contract(eye_diagram(), scaled, metric),
            1.7**2 * contract(eye_diagram(), su2_double, metric),
            rtol=1e-12,
            atol=1e-12,
        )

    def test_equivariance(self, su2_double):
        """Test contraction commutes with pairing-orthogonal automorphisms."""
        rng = np.random.default_rng(3)
        g = automorphism(su2_double, rng.normal(scale=0.5, size=6))
        metric = random_metric(su2_double, seed=0, scale=0.1)
        tensor = contract(eye_diagram(), su2_double, metric)
        assert np.linalg.norm(tensor) > 1e-6
        moved = contract(eye_diagram(), transform_algebra(su2_double, g), transform_metric(metric, g))
        np.testing.assert_allclose(moved, g @ tensor @ g.T, rtol=1e-9, atol=1e-10)

    def test_leaf_projection(self, su2_double):
        """Test Pi- kills the plus slot and Pi+ the minus slot."""
        metric = random_metric(su2_double, seed=9)
        tensor = contract(eye_diagram(), su2_double, metric)
        scale = np.linalg.norm(tensor)
        assert scale > 1.0
        np.testing.assert_allclose(metric.pminus @ tensor, 0.0, atol=1e-12 * scale)
        np.testing.assert_allclose(tensor @ metric.pplus.T, 0.0, atol=1e-12 * scale)

    def test_unsigned_is_sum_of_expansions(self, su2_double):
        """Test t = t+ + t- makes the unsigned graph the sum of its signed ones."""
        metric = random_metric(su2_double, seed=4)
        graph = preset_graph("unsigned_eye")
        total = sum(contract(g, su2_double, metric) for g in signed_expansions(graph))
        np.testing.assert_allclose(contract(graph, su2_double, metric), total, atol=1e-12)

    def test_dotted_content_refused(self, su2_double):
        """Test anchor graphs need contract_courant."""
        with pytest.raises(DottedContentError):
            contract(preset_graph("rho_loop_plus"), su2_double, canonical_metric(su2_double))


class TestContractCourant:
    """Tests for contract_courant."""

    def test_constant_c_reduces_to_contract(self, su2_double):
        """Test constant c without anchor gives the Lie algebra contraction."""
        cdata = CourantData.from_lie_algebra(su2_double, base_dim=2)
        metric = random_metric(su2_double, seed=2, scale=0.1)
        np.testing.assert_allclose(
            contract_courant(eye_diagram(), cdata, np.array([0.3, -1.0]), metric),
            contract(eye_diagram(), su2_double, metric),
            rtol=1e-12,
            atol=1e-14,
        )

    def test_zero_anchor_kills_dotted_graphs(self, su2_double):
        """Test rho = 0 gives zero for graphs with a dotted edge."""
        cdata = CourantData.from_lie_algebra(su2_double, base_dim=1)
        metric = random_metric(su2_double, seed=2)
        tensor = contract_courant(preset_graph("rho_loop_plus"), cdata, np.array([0.5]), metric)
        np.testing.assert_array_equal(tensor, np.zeros((6, 6)))

    @pytest.mark.parametrize("sign", ["rho_loop_plus", "rho_loop_minus"])
    def test_anchor_loop_matches_naive(self, sign):
        """Test the anchor loop on W = R, V = R^{2,1} with linear c and constant rho."""
        eps = np.zeros((3, 3, 3))
        eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
        eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
        rho = np.array([[0.7, -0.2, 0.4]])
        cdata = CourantData(1, np.diag([1.0, 1.0, -1.0]), {(0,): 0.5 * eps, (1,): 1.3 * eps}, {(0,): rho})
        alg = QuadraticLieAlgebra(cdata.pairing, cdata.c_at(np.array([0.8])))
        metric = random_metric(alg, seed=12, scale=0.3)
        split = split_inverse(alg, metric)
        loop = split.tplus if sign.endswith("plus") else split.tminus
        dc = 1.3 * eps
        expected = np.zeros((3, 3))
        for u, v, a, b, e, f in itertools.product(range(3), repeat=6):
            expected[u, v] += split.tplus[u, a] * split.tminus[v, b] * dc[a, b, e] * loop[e, f] * rho[0, f]
        tensor = contract_courant(preset_graph(sign), cdata, np.array([0.8]), metric)
        np.testing.assert_allclose(tensor, expected, atol=1e-12)
