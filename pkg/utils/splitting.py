"""
Splitting graphs.

A splitting map α: V(G') → V(G) is onto, sends edges to edges and induces a
bijection E(G') → E(G). This module verifies such maps, enumerates them by
set partitions of edge-ends, classifies them as special, builds the σ-stable
graphs G* and compares the invariants of G and G'.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from typing import Optional

import networkx as nx
from sympy import bell
from sympy.utilities.iterables import multiset_partitions

from engines.betti_engine import edge_ideal_betti, report_from_table
from engines.homology import GF2
from utils import graph_core
from utils.config import DEFAULT_CAPS
from utils.errors import CapExceededError, HypothesisError, NotASplittingError
from utils.graph_core import Graph, Labeling, connected_components, make_graph, relabel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplittingMap:
    """``source`` is G', ``target`` is G, ``alpha[v - 1]`` is α(v) for v in V(G')."""
    source: Graph
    target: Graph
    alpha: tuple

    def __call__(self, v):
        return self.alpha[v - 1]

    def image(self, edge):
        u, v = edge
        a, b = self(u), self(v)
        return (min(a, b), max(a, b))

    @cached_property
    def fibers(self):
        """Dict G-vertex -> tuple of G'-vertices mapped onto it."""
        fibers = {v: [] for v in self.target.vertices}
        for v, image in enumerate(self.alpha, start=1):
            fibers.setdefault(image, []).append(v)
        return {v: tuple(members) for v, members in fibers.items()}

    def fiber_pairs(self):
        """All pairs v < v' of G'-vertices with α(v) = α(v')."""
        for members in self.fibers.values():
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    yield members[a], members[b]


@dataclass(frozen=True)
class SplittingDiagnostics:
    """Outcome of verify_splitting; ``violation`` names the first failed condition."""
    violation: Optional[str] = None
    detail: str = ""
    witness: tuple = ()

    @property
    def ok(self):
        return self.violation is None

    def __bool__(self):
        return self.ok


def verify_splitting(candidate):
    """
    Check the three conditions of a splitting map, in order: α is a total map
    onto V(G), edges go to edges, and the edge map is a bijection.

    Returns:
        SplittingDiagnostics; falsy with a witness when a condition fails
    """
    source, target, alpha = candidate.source, candidate.target, candidate.alpha
    if len(alpha) != source.n or any(not (1 <= a <= target.n) for a in alpha):
        return SplittingDiagnostics("alpha_domain", f"alpha must send 1..{source.n} into 1..{target.n}", tuple(alpha))
    missing = sorted(set(target.vertices) - set(alpha))
    if missing:
        return SplittingDiagnostics("surjective", f"vertex {missing[0]} of G has no preimage", (missing[0],))

    seen = {}
    for edge in source.edge_list:
        image = candidate.image(edge)
        if image not in target.edges:
            return SplittingDiagnostics("edges_to_edges", f"edge {edge} maps to non-edge {image}", (edge, image))
        if image in seen:
            return SplittingDiagnostics(
                "edge_bijection", f"edges {seen[image]} and {edge} both map to {image}", (seen[image], edge, image)
            )
        seen[image] = edge
    uncovered = sorted(target.edges - set(seen))
    if uncovered:
        return SplittingDiagnostics("edge_bijection", f"edge {uncovered[0]} of G has no preimage", (uncovered[0],))
    return SplittingDiagnostics()


def _require_valid(candidate):
    diagnostics = verify_splitting(candidate)
    if not diagnostics:
        raise NotASplittingError(f"not a splitting map ({diagnostics.violation}): {diagnostics.detail}")


@dataclass(frozen=True)
class Specialness:
    condition1: bool
    condition2: bool

    @property
    def special(self):
        return self.condition1 or self.condition2


def specialness(candidate):
    """
    Condition (1): for v ≠ v' in one fibre every neighbour of v is adjacent to
    every neighbour of v'. Condition (2): such v, v' lie in different
    components of G'. Both hold vacuously when every fibre is a singleton.
    """
    _require_valid(candidate)
    source = candidate.source
    component_of = {}
    for number, component in enumerate(connected_components(source)):
        for v in component:
            component_of[v] = number

    condition1 = True
    condition2 = True
    for v, w in candidate.fiber_pairs():
        if condition1:
            condition1 = all(source.has_edge(a, b) for a in source.neighbors(v) for b in source.neighbors(w))
        if condition2:
            condition2 = component_of[v] != component_of[w]
        if not (condition1 or condition2):
            break
    return Specialness(condition1, condition2)


def identity_splitting(graph):
    return SplittingMap(graph, graph, tuple(graph.vertices))


# Enumeration

@dataclass(frozen=True)
class SplitOptions:
    """
    ``splitting_filter``: all / special / special1 / special2.
    ``dedupe``: one representative per class of (G', α) up to isomorphism
    of G' and automorphism of G.
    ``max_source_vertices``: drop splittings with more G'-vertices.
    ``pad_isolated``: extra isolated G'-vertices, all mapped to vertex 1.
    """
    splitting_filter: str = "all"
    dedupe: bool = False
    max_source_vertices: Optional[int] = None
    pad_isolated: int = 0


def _set_partitions(size):
    """Set partitions of range(size), blocks ordered by least element, one block first."""
    if size == 0:
        return [[]]
    partitions = []
    for partition in multiset_partitions(list(range(size))):
        partitions.append(sorted((sorted(block) for block in partition), key=lambda block: block[0]))
    partitions.sort(key=len)
    return partitions


def splitting_count(graph):
    """Number of raw splittings: the product of Bell(deg v)."""
    count = 1
    for v in graph.vertices:
        count *= int(bell(graph.degree(v)))
    return count


def _passes_filter(candidate, splitting_filter):
    if splitting_filter == "all":
        return True
    flags = specialness(candidate)
    if splitting_filter == "special":
        return flags.special
    if splitting_filter == "special1":
        return flags.condition1
    if splitting_filter == "special2":
        return flags.condition2
    raise ValueError(f"unknown splitting filter {splitting_filter!r}")


def _fibred_networkx(candidate):
    """G' and G side by side, each G'-vertex joined to its image by an 'alpha' edge."""
    graph = nx.Graph()
    graph.add_nodes_from((("s", v) for v in candidate.source.vertices), kind="source")
    graph.add_nodes_from((("t", v) for v in candidate.target.vertices), kind="target")
    graph.add_edges_from(((("s", u), ("s", v)) for u, v in candidate.source.edge_list), kind="edge")
    graph.add_edges_from(((("t", u), ("t", v)) for u, v in candidate.target.edge_list), kind="edge")
    graph.add_edges_from(((("s", v), ("t", candidate(v))) for v in candidate.source.vertices), kind="alpha")
    return graph


def _dedupe_key(candidate):
    source = candidate.source
    return (
        source.n,
        tuple(sorted(source.degree(v) for v in source.vertices)),
        tuple(sorted(len(members) for members in candidate.fibers.values())),
    )


def splittings_equivalent(first, second):
    """
    (G'_1, α_1) ≅ (G'_2, α_2): isomorphisms φ of the sources and ψ of the
    targets with α_2 ∘ φ = ψ ∘ α_1.
    """
    if first.target.m != second.target.m or _dedupe_key(first) != _dedupe_key(second):
        return False
    return nx.is_isomorphic(
        _fibred_networkx(first),
        _fibred_networkx(second),
        node_match=lambda a, b: a["kind"] == b["kind"],
        edge_match=lambda a, b: a["kind"] == b["kind"],
    )


def enumerate_splittings(graph, options=SplitOptions(), caps=DEFAULT_CAPS):
    """
    Yield one SplittingMap per choice of a set partition of the edge-ends at
    every vertex of G. Block b of the partition at v becomes the G'-vertex
    (v, b); G'-vertices are numbered in lexicographic (v, b) order. The first
    map yielded is the identity splitting.

    Raises:
        CapExceededError: when G has more than ``caps.max_split_edges`` edges
            or more than ``caps.max_splittings`` raw splittings
    """
    if graph.m > caps.max_split_edges:
        raise CapExceededError("max_split_edges", graph.m, caps.max_split_edges)
    raw = splitting_count(graph)
    if raw > caps.max_splittings:
        raise CapExceededError("max_splittings", raw, caps.max_splittings)
    logger.debug("Enumerating %d raw splittings of %s", raw, graph)

    incident = {v: sorted(e for e in graph.edge_list if v in e) for v in graph.vertices}
    choices = [_set_partitions(len(incident[v])) for v in graph.vertices]
    kept = {}

    for choice in product(*choices):
        block_of = {}
        names = []
        for v, partition in zip(graph.vertices, choice):
            if not partition:
                names.append((v, 0))
            for b, block in enumerate(partition):
                names.append((v, b))
                for position in block:
                    block_of[(v, incident[v][position])] = b
        names.sort()
        number = {name: k for k, name in enumerate(names, start=1)}
        edges = [
            (number[(u, block_of[(u, (u, w))])], number[(w, block_of[(w, (u, w))])])
            for u, w in graph.edge_list
        ]
        alpha = [v for v, _ in names] + [1] * options.pad_isolated
        candidate = SplittingMap(make_graph(len(alpha), edges), graph, tuple(alpha))

        if options.max_source_vertices is not None and candidate.source.n > options.max_source_vertices:
            continue
        if not _passes_filter(candidate, options.splitting_filter):
            continue
        if options.dedupe:
            bucket = kept.setdefault(_dedupe_key(candidate), [])
            if any(splittings_equivalent(candidate, other) for other in bucket):
                continue
            bucket.append(candidate)
        yield candidate


# Proof-side constructions

def merge_vertices(graph, x, y):
    """
    Identify y with x. Vertices after y shift down by one.

    Returns:
        SplittingMap from ``graph`` onto the merged graph

    Raises:
        HypothesisError: when x = y, x ~ y, or x and y have a common neighbour
    """
    if x == y or graph.has_edge(x, y):
        raise HypothesisError(f"cannot merge {x} and {y}: they must be distinct and non-adjacent")
    if graph.neighbors(x) & graph.neighbors(y):
        raise HypothesisError(f"cannot merge {x} and {y}: common neighbours would collapse edges")

    def new_label(v):
        if v == y:
            v = x
        return v - 1 if v > y else v

    edges = [(new_label(u), new_label(v)) for u, v in graph.edges]
    merged = make_graph(graph.n - 1, edges)
    return SplittingMap(graph, merged, tuple(new_label(v) for v in graph.vertices))


def reduction_chain(candidate):
    """
    Merge fibre pairs one at a time: G' = G_0 → G_1 → ... → G_t, where G_t
    is G up to the residual bijection returned alongside.

    Returns:
        (list of SplittingMap steps, residual Labeling of G_t onto G)
    """
    _require_valid(candidate)
    steps = []
    current = candidate.source
    alpha = list(candidate.alpha)
    while True:
        pair = None
        fibres = {}
        for v, image in enumerate(alpha, start=1):
            fibres.setdefault(image, []).append(v)
        for members in sorted(fibres.values()):
            if len(members) > 1:
                pair = members[0], members[1]
                break
        if pair is None:
            break
        step = merge_vertices(current, *pair)
        steps.append(step)
        reduced = [0] * step.target.n
        for v in current.vertices:
            reduced[step(v) - 1] = alpha[v - 1]
        alpha = reduced
        current = step.target
    return steps, Labeling(tuple(alpha))


def component_images(candidate):
    """For each component G'_i of G', the subgraph of G (on all of V(G)) with edges α(E(G'_i))."""
    _require_valid(candidate)
    images = []
    for component in connected_components(candidate.source):
        edges = [candidate.image(e) for e in candidate.source.edge_list if e[0] in component]
        images.append(make_graph(candidate.target.n, edges))
    return images


def edge_neighbor_preserved(candidate):
    """Adjacent edges of G' map to adjacent edges of G."""
    edges = candidate.source.edge_list
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            if graph_core.edges_adjacent(edges[a], edges[b]):
                if not graph_core.edges_adjacent(candidate.image(edges[a]), candidate.image(edges[b])):
                    return False
    return True


def find_splitting_map(source, target):
    """
    Search for any splitting map source → target.

    Vertices with edges are assigned by backtracking; isolated vertices of the
    source then cover whatever target vertices are still missing.

    Returns:
        SplittingMap, or None when there is none
    """
    if source.m != target.m:
        return None
    order = sorted((v for v in source.vertices if source.degree(v)), key=lambda v: -source.degree(v))
    isolated = [v for v in source.vertices if not source.degree(v)]
    assignment = {}
    used_edges = set()

    def extend(position):
        if position == len(order):
            missing = sorted(set(target.vertices) - set(assignment.values()))
            return len(missing) <= len(isolated)
        v = order[position]
        for image in target.vertices:
            if target.degree(image) < source.degree(v):
                continue
            added = []
            fits = True
            for w in source.neighbors(v):
                if w in assignment:
                    edge = (min(image, assignment[w]), max(image, assignment[w]))
                    if edge not in target.edges or edge in used_edges:
                        fits = False
                        break
                    used_edges.add(edge)
                    added.append(edge)
            if fits:
                assignment[v] = image
                if extend(position + 1):
                    return True
                del assignment[v]
            for edge in added:
                used_edges.discard(edge)
        return False

    if not extend(0):
        return None
    missing = sorted(set(target.vertices) - set(assignment.values()))
    for v in isolated:
        assignment[v] = missing.pop(0) if missing else 1
    found = SplittingMap(source, target, tuple(assignment[v] for v in source.vertices))
    return found if verify_splitting(found) else None


# Stretching

def stretched_graph(graph, t):
    """
    G^{σ^t}: every edge {i, j}, i < j, becomes {i, j + t}; the used indices
    are renumbered 1..k in increasing order.

    Returns:
        (Graph, dict new vertex -> set of G-vertices it stands for)
    """
    raw_edges = [(i, j + t) for i, j in graph.edge_list]
    claims = {}
    for (i, j), (low, high) in zip(graph.edge_list, raw_edges):
        claims.setdefault(low, set()).add(i)
        claims.setdefault(high, set()).add(j)
    used = sorted(claims)
    number = {index: k for k, index in enumerate(used, start=1)}
    stretched = make_graph(len(used), [(number[a], number[b]) for a, b in raw_edges])
    return stretched, {number[index]: owners for index, owners in claims.items()}


def _require_no_isolated(graph):
    if graph.isolated_vertices:
        raise HypothesisError(
            f"vertices {list(graph.isolated_vertices)} are isolated; I(G) does not determine them"
        )


def sigma_graph(graph, t=1):
    """
    G^{σ^t} with its splitting map: x_{i_k} ↦ i_k and x_{j_k + t} ↦ j_k.

    When a stretched index is both the lower end of one edge and the shifted
    upper end of another, that map is not defined; any other splitting map
    onto G is searched for instead.

    Raises:
        HypothesisError: G has isolated vertices, or t < 1
        NotASplittingError: G^{σ^t} is not a splitting graph of G at all
    """
    if t < 1:
        raise HypothesisError(f"t must be at least 1, got {t}")
    _require_no_isolated(graph)
    stretched, claims = stretched_graph(graph, t)
    if all(len(owners) == 1 for owners in claims.values()):
        natural = SplittingMap(stretched, graph, tuple(next(iter(claims[v])) for v in stretched.vertices))
        if verify_splitting(natural):
            return natural
    found = find_splitting_map(stretched, graph)
    if found is None:
        raise NotASplittingError(f"G^sigma^{t} of {graph} is not a splitting graph of it")
    logger.debug("Natural map collides at t=%d; using a searched splitting map", t)
    return found


def sigma_stable(graph, caps=DEFAULT_CAPS):
    """
    The σ-stable graph G* = G^{σ^{t0}}.

    From t = n on the stretched graphs no longer change up to isomorphism
    (lower ends stay below n, shifted upper ends above it), so G^{σ^n} is the
    reference and t0 is found by scanning down from n.

    Returns:
        (SplittingMap, t0)
    """
    _require_no_isolated(graph)
    reference, _ = stretched_graph(graph, graph.n)
    t0 = graph.n
    for t in range(graph.n - 1, 0, -1):
        candidate, _ = stretched_graph(graph, t)
        if not graph_core.are_isomorphic(candidate, reference, caps):
            break
        t0 = t
    return sigma_graph(graph, t0), t0


def gamma(graph, labeling):
    """γ(L): the number of components of G* for the relabelled graph."""
    relabelled = relabel(graph, labeling)
    _require_no_isolated(relabelled)
    stable, _ = stretched_graph(relabelled, relabelled.n)
    return len(connected_components(stable))


def _check_labeling_cap(graph, caps):
    if graph.n > caps.max_cg_vertices:
        raise CapExceededError("max_cg_vertices", graph.n, caps.max_cg_vertices)


def cg_set(graph, caps=DEFAULT_CAPS):
    """
    C(G) = {γ(L) : L a labeling of G}, by running over all n! labelings.

    Returns:
        Dict γ -> first Labeling (in lexicographic order) achieving it
    """
    _require_no_isolated(graph)
    _check_labeling_cap(graph, caps)
    achieved = {}
    for perm in permutations(graph.vertices):
        labeling = Labeling(perm)
        value = gamma(graph, labeling)
        achieved.setdefault(value, labeling)
    return dict(sorted(achieved.items()))


def _pull_back(candidate, labeling, graph):
    """Re-target a splitting of relabel(graph, L) onto graph itself."""
    inverse = labeling.inverse()
    return SplittingMap(candidate.source, graph, tuple(inverse(a) for a in candidate.alpha))


def sigma_stable_splittings(graph, caps=DEFAULT_CAPS):
    """
    The distinct σ-stable splittings G* → G over all labelings, up to
    isomorphism of (G', α), each with the natural map at t = n.
    """
    _require_no_isolated(graph)
    _check_labeling_cap(graph, caps)
    kept = []
    for perm in permutations(graph.vertices):
        labeling = Labeling(perm)
        stable = sigma_graph(relabel(graph, labeling), graph.n)
        candidate = _pull_back(stable, labeling, graph)
        if not any(splittings_equivalent(candidate, other) for other in kept):
            kept.append(candidate)
    return kept


def sigma_realizable(candidate, caps=DEFAULT_CAPS):
    """Whether G' is isomorphic to the σ-stable graph of G under some labeling."""
    graph = candidate.target
    _require_no_isolated(graph)
    _check_labeling_cap(graph, caps)
    components = len(connected_components(candidate.source))
    for perm in permutations(graph.vertices):
        stable, _ = stretched_graph(relabel(graph, Labeling(perm)), graph.n)
        if len(connected_components(stable)) != components:
            continue
        if graph_core.are_isomorphic(stable, candidate.source, caps):
            return True
    return False


# Comparison

COMPARISON_TAGS = ("pd", "reg", "betti", "dim", "depth")


@dataclass(frozen=True)
class ComparisonRecord:
    """
    Invariants of G (target) and a splitting graph G' (source).

    The five verdicts are derived from the reports each time they are read.
    """
    splitting: SplittingMap
    specialness: Specialness
    source_report: object
    target_report: object
    betti_totals_source: tuple
    betti_totals_target: tuple

    @property
    def pd_ok(self):
        return self.target_report.pd_ideal <= self.source_report.pd_ideal

    @property
    def reg_ok(self):
        return self.target_report.reg_ideal <= self.source_report.reg_ideal

    @property
    def betti_ok(self):
        width = max(len(self.betti_totals_source), len(self.betti_totals_target))
        source = list(self.betti_totals_source) + [0] * (width - len(self.betti_totals_source))
        target = list(self.betti_totals_target) + [0] * (width - len(self.betti_totals_target))
        return all(t <= s for t, s in zip(target, source))

    @property
    def dim_ok(self):
        return self.source_report.dim >= self.target_report.dim

    @property
    def depth_ok(self):
        return self.source_report.depth >= self.target_report.depth

    def verdicts(self):
        return {
            "pd": self.pd_ok,
            "reg": self.reg_ok,
            "betti": self.betti_ok,
            "dim": self.dim_ok,
            "depth": self.depth_ok,
        }

    def violated(self, tags=COMPARISON_TAGS):
        verdicts = self.verdicts()
        return [tag for tag in COMPARISON_TAGS if tag in tags and not verdicts[tag]]

    def deltas(self):
        """Source minus target for each invariant."""
        return {
            name: getattr(self.source_report, name) - getattr(self.target_report, name)
            for name in ("pd_ideal", "reg_ideal", "dim", "depth", "bight", "nu")
        }

    def to_row(self):
        """Flat dict for one CSV / JSON-lines row."""
        row = {
            "m": self.splitting.target.m,
            "n_target": self.splitting.target.n,
            "n_source": self.splitting.source.n,
            "components_source": len(connected_components(self.splitting.source)),
            "special1": self.specialness.condition1,
            "special2": self.specialness.condition2,
            "pd_ok": self.pd_ok,
            "reg_ok": self.reg_ok,
            "betti_ok": self.betti_ok,
            "dim_ok": self.dim_ok,
            "depth_ok": self.depth_ok,
        }
        row.update({f"delta_{name}": value for name, value in self.deltas().items()})
        return row


def compare(candidate, field=GF2, caps=DEFAULT_CAPS):
    """
    Invariants of G and G' side by side, with the verdicts
    (i) pd(I(G)) ≤ pd(I(G')), (ii) reg(I(G)) ≤ reg(I(G')),
    (iii) β_i(I(G)) ≤ β_i(I(G')) for all i, (iv) dim S'/I(G') ≥ dim S/I(G),
    (v) depth S'/I(G') ≥ depth S/I(G).

    Raises:
        NotASplittingError: when ``candidate`` fails verify_splitting
    """
    flags = specialness(candidate)
    source_table = edge_ideal_betti(candidate.source, field, caps)
    target_table = edge_ideal_betti(candidate.target, field, caps)
    return ComparisonRecord(
        splitting=candidate,
        specialness=flags,
        source_report=report_from_table(candidate.source, source_table),
        target_report=report_from_table(candidate.target, target_table),
        betti_totals_source=tuple(source_table.to_convention("of_ideal").totals()),
        betti_totals_target=tuple(target_table.to_convention("of_ideal").totals()),
    )


def splitting_to_json(candidate):
    return {
        "target": graph_core.graph_to_json(candidate.target),
        "source": graph_core.graph_to_json(candidate.source),
        "alpha": list(candidate.alpha),
    }


def splitting_from_json(data):
    return SplittingMap(
        graph_core.graph_from_json(data["source"]),
        graph_core.graph_from_json(data["target"]),
        tuple(int(a) for a in data["alpha"]),
    )
