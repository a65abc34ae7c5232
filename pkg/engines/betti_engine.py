"""
Graded Betti numbers of monomial ideals and the invariants read off them.

Two independent routes are provided:

* Hochster's formula for squarefree ideals,
  β_{i,j}(S/I_Δ) = Σ_{|W| = j} dim H̃_{j-i-1}(Δ_W; K),
  summed over all vertex subsets W of the Stanley–Reisner complex Δ.
* Upper Koszul simplicial complexes, which also handle non-squarefree ideals:
  β_{i,b}(I) = dim H̃_{i-1}(K^b(I); K) for b in the lcm lattice of I.

Tables are indexed by homological degree i and total internal degree j.
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from engines.homology import GF2, FieldSpec, reduced_homology_from_faces
from utils.config import DEFAULT_CAPS
from utils.errors import CapExceededError, InvariantBreachError
from utils import graph_core
from utils.ideal_core import Monomial, edge_ideal

logger = logging.getLogger(__name__)

CONVENTIONS = ("of_ideal", "of_quotient")


@dataclass(frozen=True)
class BettiTable:
    """
    Nonzero graded Betti numbers as sorted ((i, j), value) pairs.

    ``of_quotient`` tables describe S/I and always carry β_{0,0} = 1;
    ``of_ideal`` tables describe I, so β_{0,j} counts degree-j generators.
    """
    convention: str
    field: FieldSpec
    entries: tuple = ()

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}")
        cleaned = []
        for (i, j), value in dict(self.entries).items():
            if value < 0:
                raise InvariantBreachError(f"negative Betti number at ({i}, {j})")
            if value:
                cleaned.append(((int(i), int(j)), int(value)))
        object.__setattr__(self, "entries", tuple(sorted(cleaned)))

    def get(self, i, j):
        return dict(self.entries).get((i, j), 0)

    def as_dict(self):
        return dict(self.entries)

    @property
    def is_empty(self):
        return not self.entries

    @property
    def projective_dimension(self):
        """Largest i with a nonzero entry; -1 for an empty table."""
        return max((i for (i, _), _ in self.entries), default=-1)

    @property
    def regularity(self):
        """Largest j - i over nonzero entries; 0 for an empty table."""
        return max((j - i for (i, j), _ in self.entries), default=0)

    def totals(self):
        """β_i = Σ_j β_{i,j}, for i = 0..pd."""
        totals = [0] * (self.projective_dimension + 1)
        for (i, _), value in self.entries:
            totals[i] += value
        return totals

    def to_convention(self, convention):
        """Shift between the tables of S/I and of I (β_{i,j}(I) = β_{i+1,j}(S/I))."""
        if convention == self.convention:
            return self
        if convention == "of_ideal":
            shifted = {(i - 1, j): v for (i, j), v in self.entries if i >= 1}
        else:
            shifted = {(i + 1, j): v for (i, j), v in self.entries}
            shifted[(0, 0)] = 1
        return BettiTable(convention, self.field, tuple(shifted.items()))

    def linear_strand(self):
        """Entries of the ideal's table on its lowest row j - i (the generator degree row)."""
        if not self.entries:
            return {}
        ideal_table = self.to_convention("of_ideal")
        if ideal_table.is_empty:
            return {}
        row = min(j - i for (i, j), _ in ideal_table.entries)
        return {(i, j): v for (i, j), v in ideal_table.entries if j - i == row}

    def is_linear_resolution(self):
        """True when all entries of the ideal's table lie on one row j - i = d."""
        ideal_table = self.to_convention("of_ideal")
        return len({j - i for (i, j), _ in ideal_table.entries}) <= 1


def _check_size(ideal, caps):
    if ideal.ambient_n > caps.max_betti_vertices:
        raise CapExceededError("max_betti_vertices", ideal.ambient_n, caps.max_betti_vertices)


def _popcount(mask):
    return bin(mask).count("1")


def _subset_faces(vertices, blockers):
    """
    Faces of the Stanley–Reisner complex restricted to ``vertices``: the subsets
    containing no generator support. ``blockers[v]`` lists the support masks
    through v. Faces are returned by dimension as sorted tuples.
    """
    layers = [[()]]
    frontier = [((), 0)]
    while frontier:
        grown = []
        for face, mask in frontier:
            start = face[-1] + 1 if face else 0
            for v in vertices:
                if v < start:
                    continue
                extended = mask | (1 << v)
                if any(block & extended == block for block in blockers[v]):
                    continue
                grown.append((face + (v,), extended))
        if grown:
            layers.append([face for face, _ in grown])
        frontier = grown
    return layers


def _hochster_chunk(args):
    """Betti contributions of the subsets W in [start, stop)."""
    n, supports, field, start, stop = args
    blockers = {v: [s for s in supports if s >> v & 1] for v in range(n)}
    contributions = Counter()
    for subset in range(start, stop):
        inside = [s for s in supports if s & subset == s]
        covered = 0
        for s in inside:
            covered |= s
        # a vertex of W outside every generator inside W is a cone point
        if covered != subset:
            continue
        vertices = [v for v in range(n) if subset >> v & 1]
        local_blockers = {v: [s for s in blockers[v] if s & subset == s] for v in vertices}
        layers = _subset_faces(vertices, local_blockers)
        size = len(vertices)
        for layer_no, dim_h in enumerate(reduced_homology_from_faces(layers, field)):
            if dim_h:
                k = layer_no - 1
                contributions[(size - k - 1, size)] += dim_h
    return contributions


def graded_betti_hochster(ideal, field=GF2, caps=DEFAULT_CAPS, workers=1):
    """
    Betti table of S/I for a squarefree monomial ideal via Hochster's formula.

    The 2^n subsets are split into contiguous chunks; the chunk sums are added
    in chunk order, so the result does not depend on ``workers``.

    Args:
        ideal: Squarefree MonomialIdeal
        field: FieldSpec
        caps: Size guards (``max_betti_vertices``)
        workers: Processes to spread the subsets over

    Returns:
        BettiTable in the ``of_quotient`` convention
    """
    if not ideal.is_squarefree:
        raise ValueError(f"Hochster's formula needs a squarefree ideal; {ideal} is not")
    if any(g.degree == 0 for g in ideal.gens):
        raise ValueError("the unit ideal has no Stanley–Reisner complex")
    _check_size(ideal, caps)

    n = ideal.ambient_n
    supports = [sum(1 << (index - 1) for index in g.support) for g in ideal.gens]
    total = 1 << n
    chunks = max(1, workers) * 4 if workers > 1 else 1
    step = -(-total // chunks)
    tasks = [(n, supports, field, start, min(start + step, total)) for start in range(0, total, step)]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_hochster_chunk, tasks))
    else:
        parts = [_hochster_chunk(task) for task in tasks]

    entries = Counter()
    for part in parts:
        entries.update(part)
    logger.debug("Hochster table of %s over %s: %s", ideal, field, dict(entries))
    return BettiTable("of_quotient", field, tuple(entries.items()))


def lcm_lattice(ideal):
    """All lcms of nonempty subsets of the minimal generators."""
    lattice = set(ideal.gens)
    frontier = list(ideal.gens)
    while frontier:
        grown = []
        for element in frontier:
            for g in ideal.gens:
                candidate = element.lcm(g)
                if candidate not in lattice:
                    lattice.add(candidate)
                    grown.append(candidate)
        frontier = grown
    return lattice


def _upper_koszul_faces(ideal, multidegree):
    """K^b(I) = {F ⊆ supp(b) squarefree : x^(b - F) ∈ I}, layered by dimension."""
    support = sorted(multidegree.support)
    exponents = multidegree.exponent_map
    layers = []
    for size in range(len(support) + 1):
        layer = []
        for mask in range(1 << len(support)):
            if _popcount(mask) != size:
                continue
            face = tuple(support[pos] for pos in range(len(support)) if mask >> pos & 1)
            reduced = Monomial(tuple((index, exponents[index] - (1 if index in face else 0)) for index in support))
            if ideal.contains(reduced):
                layer.append(face)
        if not layer:
            break
        layers.append(layer)
    return layers


def graded_betti_koszul(ideal, field=GF2, caps=DEFAULT_CAPS):
    """
    Betti table of S/I through upper Koszul simplicial complexes.

    Args:
        ideal: MonomialIdeal (need not be squarefree)
        field: FieldSpec
        caps: Size guards

    Returns:
        BettiTable in the ``of_quotient`` convention
    """
    _check_size(ideal, caps)
    entries = Counter({(0, 0): 1})
    for multidegree in sorted(lcm_lattice(ideal), key=lambda b: b.sort_key()):
        layers = _upper_koszul_faces(ideal, multidegree)
        for layer_no, dim_h in enumerate(reduced_homology_from_faces(layers, field)):
            if dim_h:
                # H̃_{i-1} sits in layer i: β_{i,b}(I) = β_{i+1,b}(S/I)
                entries[(layer_no + 1, multidegree.degree)] += dim_h
    return BettiTable("of_quotient", field, tuple(entries.items()))


@lru_cache(maxsize=4096)
def _edge_ideal_table(graph, field, caps):
    return graded_betti_hochster(edge_ideal(graph), field, caps)


def edge_ideal_betti(graph, field=GF2, caps=DEFAULT_CAPS):
    """Memoised Hochster table of S/I(G)."""
    return _edge_ideal_table(graph, field, caps)


@dataclass(frozen=True)
class InvariantReport:
    """Homological and combinatorial invariants of S/I(G) over one field."""
    n: int
    pd_quotient: int
    pd_ideal: int
    reg_ideal: int
    reg_quotient: int
    depth: int
    dim: int
    bight: int
    nu: int
    field: FieldSpec

    def __post_init__(self):
        if self.pd_quotient != self.pd_ideal + 1:
            raise InvariantBreachError(f"pd mismatch: {self.pd_quotient} vs {self.pd_ideal} + 1")
        if self.reg_ideal != self.reg_quotient + 1:
            raise InvariantBreachError(f"reg mismatch: {self.reg_ideal} vs {self.reg_quotient} + 1")
        if self.depth + self.pd_quotient != self.n:
            raise InvariantBreachError(f"Auslander–Buchsbaum fails: {self.depth} + {self.pd_quotient} != {self.n}")
        if self.depth > self.dim:
            raise InvariantBreachError(f"depth {self.depth} exceeds dim {self.dim}")

    def as_dict(self):
        data = {name: getattr(self, name) for name in self.__dataclass_fields__}
        data["field"] = self.field.label
        return data


def report_from_table(graph, table):
    """Assemble an InvariantReport from a quotient Betti table of S/I(G)."""
    table = table.to_convention("of_quotient")
    pd_quotient = table.projective_dimension
    reg_quotient = table.regularity
    return InvariantReport(
        n=graph.n,
        pd_quotient=pd_quotient,
        pd_ideal=pd_quotient - 1,
        reg_ideal=reg_quotient + 1,
        reg_quotient=reg_quotient,
        depth=graph.n - pd_quotient,
        dim=graph.n - graph_core.min_vertex_cover(graph),
        bight=graph_core.bight(graph),
        nu=graph_core.induced_matching_number(graph),
        field=table.field,
    )


def invariants(graph, field=GF2, caps=DEFAULT_CAPS):
    """
    pd, reg, depth, dim, bight and ν of S/I(G).

    pd and reg come from the Betti table; depth = n - pd(S/I) by
    Auslander–Buchsbaum; dim = n - τ(G).

    Args:
        graph: Graph
        field: FieldSpec
        caps: Size guards

    Returns:
        InvariantReport
    """
    return report_from_table(graph, edge_ideal_betti(graph, field, caps))
