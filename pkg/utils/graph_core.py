"""
Finite simple graphs on the vertex set 1..n and the combinatorial invariants
the edge-ideal computations consume: components, vertex covers, big height,
induced matchings, class recognizers and isomorphism.

Every NP-hard quantity here is computed exactly, by exhaustive search, and is
meant for the small graphs of the experiment sweeps.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import networkx as nx

from engines.homology import SimplicialComplex
from utils.config import DEFAULT_CAPS
from utils.errors import (
    CapExceededError,
    DuplicateEdgeError,
    EndpointRangeError,
    GraphFormatError,
    LoopError,
    MalformedLineError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Graph:
    """
    A finite simple graph with vertices 1..n.

    Isolated vertices are part of the graph: they count in ``n`` and so in the
    size of the ambient polynomial ring.
    """
    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError(f"vertex count must be nonnegative, got {self.n}")
        normalized = set()
        for edge in self.edges:
            u, v = edge
            if u == v:
                raise LoopError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise EndpointRangeError(f"edge {{{u},{v}}} leaves 1..{self.n}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @property
    def m(self):
        return len(self.edges)

    @property
    def vertices(self):
        return range(1, self.n + 1)

    @cached_property
    def edge_list(self):
        """Edges as (u, v) with u < v, sorted lexicographically."""
        return tuple(sorted(self.edges))

    @cached_property
    def adjacency(self):
        """Dict vertex -> frozenset of neighbours."""
        neighbours = {v: set() for v in self.vertices}
        for u, v in self.edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        return {v: frozenset(ns) for v, ns in neighbours.items()}

    def neighbors(self, v):
        return self.adjacency[v]

    def closed_neighborhood(self, v):
        return self.adjacency[v] | {v}

    def degree(self, v):
        return len(self.adjacency[v])

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in self.edges

    @cached_property
    def isolated_vertices(self):
        return tuple(v for v in self.vertices if not self.adjacency[v])

    def to_networkx(self):
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from(self.edge_list)
        return graph

    def __str__(self):
        body = ", ".join(f"{u}-{v}" for u, v in self.edge_list)
        return f"Graph(n={self.n}; {body})"


def make_graph(n, edges):
    """Build a Graph from any iterable of pairs."""
    return Graph(n, frozenset(tuple(edge) for edge in edges))


def parse_edge_list(text):
    """
    Parse an edge-list document.

    The first non-blank line is ``n m``; exactly m lines ``u v`` follow.
    Text after ``#`` on a line is ignored.

    Args:
        text: The document

    Returns:
        Graph with exactly the declared edges
    """
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            lines.append((line_no, content))
    if not lines:
        raise MalformedLineError("empty document; expected header 'n m'")

    def two_ints(line_no, content):
        parts = content.split()
        if len(parts) != 2:
            raise MalformedLineError(f"expected two integers, got {content!r}", line_no)
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLineError(f"expected two integers, got {content!r}", line_no)

    header_no, header = lines[0]
    n, m = two_ints(header_no, header)
    if n < 0 or m < 0:
        raise MalformedLineError(f"header values must be nonnegative, got {header!r}", header_no)
    if len(lines) - 1 != m:
        raise MalformedLineError(f"header declares {m} edges but {len(lines) - 1} edge lines follow", header_no)

    edges = set()
    for line_no, content in lines[1:]:
        u, v = two_ints(line_no, content)
        if u == v:
            raise LoopError(f"loop at vertex {u}", line_no)
        if not (1 <= u <= n and 1 <= v <= n):
            raise EndpointRangeError(f"edge {u} {v} leaves 1..{n}", line_no)
        key = (min(u, v), max(u, v))
        if key in edges:
            raise DuplicateEdgeError(f"edge {u} {v} listed twice", line_no)
        edges.add(key)
    return Graph(n, frozenset(edges))


def format_edge_list(graph):
    """Inverse of parse_edge_list."""
    lines = [f"{graph.n} {graph.m}"]
    lines.extend(f"{u} {v}" for u, v in graph.edge_list)
    return "\n".join(lines) + "\n"


def graph_to_json(graph):
    return {"n": graph.n, "edges": [[u, v] for u, v in graph.edge_list]}


def graph_from_json(data):
    try:
        pairs = [tuple(int(end) for end in edge) for edge in data["edges"]]
        seen = set()
        for index, (u, v) in enumerate(pairs, start=1):
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdgeError(f"edge {index} repeats {{{u},{v}}}")
            seen.add(key)
        return make_graph(int(data["n"]), pairs)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, GraphFormatError):
            raise
        raise GraphFormatError(f"bad graph JSON: {exc}") from exc


# Named families

def edgeless_graph(n):
    return Graph(n, frozenset())


def path_graph(n):
    return make_graph(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n):
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return make_graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])


def star_graph(m):
    """K_{1,m} with centre 1."""
    return make_graph(m + 1, [(1, leaf) for leaf in range(2, m + 2)])


def complete_graph(n):
    return make_graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def disjoint_union(first, second):
    """``second`` is shifted past ``first``'s vertices."""
    shift = first.n
    edges = list(first.edges) + [(u + shift, v + shift) for u, v in second.edges]
    return make_graph(first.n + second.n, edges)


def induced_subgraph(graph, vertices):
    """Induced subgraph, relabelled 1..k in increasing order of the kept vertices."""
    kept = sorted(set(vertices))
    position = {v: i for i, v in enumerate(kept, start=1)}
    edges = [(position[u], position[v]) for u, v in graph.edges if u in position and v in position]
    return make_graph(len(kept), edges)


# Labelings

@dataclass(frozen=True)
class Labeling:
    """A bijection of 1..n; ``perm[v - 1]`` is the new label of vertex v."""
    perm: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(1, len(self.perm) + 1)):
            raise ValueError(f"labeling {self.perm} is not a permutation of 1..{len(self.perm)}")

    def __call__(self, v):
        return self.perm[v - 1]

    def inverse(self):
        inverse = [0] * len(self.perm)
        for v, label in enumerate(self.perm, start=1):
            inverse[label - 1] = v
        return Labeling(tuple(inverse))


def relabel(graph, labeling):
    if len(labeling.perm) != graph.n:
        raise ValueError("labeling size does not match the graph")
    return make_graph(graph.n, [(labeling(u), labeling(v)) for u, v in graph.edges])


# Structure

def connected_components(graph):
    """Partition of 1..n into connected sets, ordered by least vertex."""
    components = [frozenset(c) for c in nx.connected_components(graph.to_networkx())]
    return sorted(components, key=min)


def edges_adjacent(e, f):
    """Two distinct edges are neighbours when they share a vertex."""
    return e != f and bool(set(e) & set(f))


def maximal_independent_sets(graph):
    """
    All maximal independent sets, as the maximal cliques of the complement.

    Returns:
        List of frozensets sorted by (size, members)
    """
    if graph.n == 0:
        return [frozenset()]
    complement = nx.complement(graph.to_networkx())
    sets = [frozenset(clique) for clique in nx.find_cliques(complement)]
    return sorted(sets, key=lambda s: (len(s), sorted(s)))


def minimal_vertex_covers(graph):
    everything = frozenset(graph.vertices)
    return [everything - s for s in maximal_independent_sets(graph)]


def min_vertex_cover(graph):
    """τ(G): the least size of a vertex cover."""
    return graph.n - max(len(s) for s in maximal_independent_sets(graph))


def bight(graph):
    """Big height of I(G): the largest size of an inclusion-minimal vertex cover."""
    return graph.n - min(len(s) for s in maximal_independent_sets(graph))


def induced_matching_number(graph):
    """
    ν(G), the largest induced matching.

    Two edges clash when they are at distance at most 2 in the line graph, so
    ν(G) is the clique number of the complement of the squared line graph.
    """
    if graph.m == 0:
        return 0
    line = nx.line_graph(graph.to_networkx())
    clashes = nx.power(line, 2) if line.number_of_edges() else line
    compatible = nx.complement(clashes)
    clique, _ = nx.max_weight_clique(compatible, weight=None)
    return len(clique)


def is_independent(graph, vertices):
    chosen = set(vertices)
    return not any(u in chosen and v in chosen for u, v in graph.edges)


def independence_complex(graph):
    """Ind(G): the faces are the independent sets; the Stanley–Reisner complex of I(G)."""
    return SimplicialComplex(graph.n, frozenset(maximal_independent_sets(graph)))


def are_isomorphic(first, second, caps=DEFAULT_CAPS):
    """
    Exact isomorphism test (VF2) after cheap invariant screening.

    Raises:
        CapExceededError: when either graph is larger than ``caps.max_iso_vertices``
    """
    size = max(first.n, second.n)
    if size > caps.max_iso_vertices:
        raise CapExceededError("max_iso_vertices", size, caps.max_iso_vertices)
    if first.n != second.n or first.m != second.m:
        return False
    if sorted(first.degree(v) for v in first.vertices) != sorted(second.degree(v) for v in second.vertices):
        return False
    return nx.is_isomorphic(first.to_networkx(), second.to_networkx())


# Class recognizers

@dataclass(frozen=True)
class ClassFlags:
    bipartite: bool
    forest: bool
    chordal: bool
    weakly_chordal: bool
    c5_free: bool
    vertex_decomposable: Optional[bool]
    unmixed: bool
    very_well_covered: bool

    def as_dict(self):
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def _has_long_chordless_cycle(nx_graph, min_length):
    return any(len(cycle) >= min_length for cycle in nx.chordless_cycles(nx_graph))


def is_weakly_chordal(graph):
    """No induced cycle of length ≥ 5 in G or in its complement."""
    nx_graph = graph.to_networkx()
    if _has_long_chordless_cycle(nx_graph, 5):
        return False
    return not _has_long_chordless_cycle(nx.complement(nx_graph), 5)


def is_c5_free(graph):
    cycles = nx.chordless_cycles(graph.to_networkx(), length_bound=5)
    return not any(len(cycle) == 5 for cycle in cycles)


def is_vertex_decomposable(graph, caps=DEFAULT_CAPS):
    """
    Vertex decomposability of Ind(G), by the recursive definition.

    The complex of an edgeless induced subgraph is a simplex. Otherwise a
    vertex v must exist with both Ind(G - v) and Ind(G - N[v]) vertex
    decomposable and v a shedding vertex: no maximal independent set of
    G - N[v] stays maximal in G - v.

    Returns:
        True / False, or None when n exceeds ``caps.max_vd_vertices``
    """
    if graph.n > caps.max_vd_vertices:
        logger.info("Vertex decomposability skipped: n=%d > %d", graph.n, caps.max_vd_vertices)
        return None

    adjacency = graph.adjacency
    nx_graph = graph.to_networkx()
    memo = {}

    def maximal_independent(vertices):
        if not vertices:
            return [frozenset()]
        return [frozenset(c) for c in nx.find_cliques(nx.complement(nx_graph.subgraph(vertices)))]

    def decomposable(vertices):
        if vertices in memo:
            return memo[vertices]
        result = False
        live = [v for v in sorted(vertices) if adjacency[v] & vertices]
        if not live:
            result = True
        for v in live:
            deletion = vertices - {v}
            link = vertices - adjacency[v] - {v}
            shedding = all(
                any(not (adjacency[w] & face) for w in adjacency[v] & vertices)
                for face in maximal_independent(link)
            )
            if shedding and decomposable(link) and decomposable(deletion):
                result = True
                break
        memo[vertices] = result
        return result

    return decomposable(frozenset(graph.vertices))


def classify(graph, caps=DEFAULT_CAPS):
    """
    Evaluate the class hypotheses used by the regularity and projective
    dimension comparisons.

    Args:
        graph: Graph
        caps: Size guards; vertex decomposability is reported as None above
            ``caps.max_vd_vertices``

    Returns:
        ClassFlags
    """
    nx_graph = graph.to_networkx()
    independent_sizes = {len(s) for s in maximal_independent_sets(graph)}
    unmixed = len(independent_sizes) == 1
    very_well_covered = (
        unmixed
        and not graph.isolated_vertices
        and 2 * (graph.n - independent_sizes.pop()) == graph.n
    )
    forest = graph.n == 0 or nx.is_forest(nx_graph)
    return ClassFlags(
        bipartite=nx.is_bipartite(nx_graph),
        forest=forest,
        chordal=nx.is_chordal(nx_graph),
        weakly_chordal=is_weakly_chordal(graph),
        c5_free=is_c5_free(graph),
        vertex_decomposable=is_vertex_decomposable(graph, caps),
        unmixed=unmixed,
        very_well_covered=very_well_covered,
    )
