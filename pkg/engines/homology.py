"""
Exact reduced homology of finite simplicial complexes.

Boundary matrices are built over the integers and their ranks are taken over
the requested coefficient field: int bitsets for GF(2), galois field arrays
for GF(p), and sympy's DomainMatrix for the rationals.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import galois
import numpy as np
from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``kind`` is ``"rationals"`` or ``"prime"`` (then ``p`` is set)."""
    kind: str = "prime"
    p: int = 2

    def __post_init__(self):
        if self.kind == "rationals":
            object.__setattr__(self, "p", 0)
        elif self.kind == "prime":
            if not isprime(self.p):
                raise ValueError(f"field characteristic must be prime, got {self.p}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def characteristic(self):
        return self.p

    @property
    def label(self):
        """Short name used in tables and file names: ``gf2``, ``gfp:3``, ``q``."""
        if self.kind == "rationals":
            return "q"
        if self.p == 2:
            return "gf2"
        return f"gfp:{self.p}"

    def __str__(self):
        return "QQ" if self.kind == "rationals" else f"GF({self.p})"


GF2 = FieldSpec("prime", 2)
RATIONALS = FieldSpec("rationals")


def parse_field(text):
    """
    Parse a field flag value.

    Args:
        text: ``gf2``, ``q`` (also ``qq``/``rationals``) or ``gfp:<p>``

    Returns:
        FieldSpec
    """
    value = text.strip().lower()
    if value in ("gf2", "gf(2)"):
        return GF2
    if value in ("q", "qq", "rationals"):
        return RATIONALS
    if value.startswith("gfp:"):
        try:
            p = int(value[4:])
        except ValueError:
            raise ValueError(f"bad prime in field spec {text!r}")
        return FieldSpec("prime", p)
    raise ValueError(f"unknown field {text!r}; expected gf2, q or gfp:<p>")


@lru_cache(maxsize=None)
def _galois_field(p):
    return galois.GF(p)


def _rank_gf2(rows):
    # XOR basis keyed by leading bit
    basis = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            pivot = basis.get(lead)
            if pivot is None:
                basis[lead] = row
                break
            row ^= pivot
    return len(basis)


def matrix_rank(rows, n_cols, field):
    """
    Rank of a sparse integer matrix over ``field``.

    Args:
        rows: List of dicts mapping column index to an integer entry
        n_cols: Number of columns
        field: FieldSpec

    Returns:
        Integer rank
    """
    if not rows or n_cols == 0:
        return 0

    if field.kind == "prime" and field.p == 2:
        bitsets = []
        for row in rows:
            bits = 0
            for col, value in row.items():
                if value % 2:
                    bits |= 1 << col
            bitsets.append(bits)
        return _rank_gf2(bitsets)

    dense = np.zeros((len(rows), n_cols), dtype=np.int64)
    for r, row in enumerate(rows):
        for col, value in row.items():
            dense[r, col] = value

    if field.kind == "prime":
        gf = _galois_field(field.p)
        return int(np.linalg.matrix_rank(gf(dense % field.p)))

    matrix = DomainMatrix.from_list(dense.tolist(), ZZ)
    return int(matrix.to_field().rank())


@dataclass(frozen=True)
class SimplicialComplex:
    """
    A simplicial complex on the vertex set 1..n, stored by its facets.

    The void complex has no facets; the complex {∅} has the single facet ∅.
    """
    n: int
    facets: frozenset

    def __post_init__(self):
        facets = {frozenset(f) for f in self.facets}
        for facet in facets:
            if any(v < 1 or v > self.n for v in facet):
                raise ValueError(f"facet {sorted(facet)} leaves the vertex set 1..{self.n}")
        maximal = frozenset(f for f in facets if not any(f < g for g in facets))
        object.__setattr__(self, "facets", maximal)

    @property
    def is_void(self):
        return not self.facets

    @property
    def dimension(self):
        if self.is_void:
            return None
        return max(len(f) for f in self.facets) - 1

    def contains(self, face):
        face = frozenset(face)
        return any(face <= facet for facet in self.facets)

    def faces(self):
        """All faces, including ∅ when the complex is nonvoid."""
        seen = set()
        for facet in self.facets:
            members = sorted(facet)
            for size in range(len(members) + 1):
                for face in combinations(members, size):
                    seen.add(face)
        return sorted(seen, key=lambda face: (len(face), face))

    def faces_by_dimension(self):
        """List indexed by dim+1 of sorted vertex tuples; index 0 holds the empty face."""
        if self.is_void:
            return []
        layers = [[] for _ in range(self.dimension + 2)]
        for face in self.faces():
            layers[len(face)].append(face)
        return layers

    def induced(self, vertices):
        """The induced subcomplex on ``vertices`` (same vertex labels)."""
        keep = frozenset(vertices)
        if self.is_void:
            return self
        return SimplicialComplex(self.n, frozenset(f & keep for f in self.facets))


def reduced_euler_characteristic(faces_by_dim):
    """Σ (-1)^k f_k over k = -1..dim, with the empty face counted in degree -1."""
    return sum((-1) ** (index + 1) * len(layer) for index, layer in enumerate(faces_by_dim))


def reduced_homology_from_faces(faces_by_dim, field):
    """
    Reduced homology dimensions from a face list.

    Args:
        faces_by_dim: Output of SimplicialComplex.faces_by_dimension (or the
            same layout built elsewhere): layer k+1 holds the k-faces as
            sorted tuples
        field: FieldSpec

    Returns:
        List h with h[k+1] = dim H̃_k for k = -1..dim; empty for the void complex
    """
    if not faces_by_dim:
        return []

    index = [{face: pos for pos, face in enumerate(layer)} for layer in faces_by_dim]

    # ranks[k] is the rank of the boundary map out of layer k (layer 0 maps to zero)
    ranks = [0] * (len(faces_by_dim) + 1)
    for layer_no in range(1, len(faces_by_dim)):
        lower = index[layer_no - 1]
        rows = []
        for face in faces_by_dim[layer_no]:
            row = {}
            for drop in range(len(face)):
                boundary_face = face[:drop] + face[drop + 1:]
                row[lower[boundary_face]] = -1 if drop % 2 else 1
            rows.append(row)
        ranks[layer_no] = matrix_rank(rows, len(lower), field)

    homology = []
    for layer_no, layer in enumerate(faces_by_dim):
        homology.append(len(layer) - ranks[layer_no] - ranks[layer_no + 1])
    return homology


def reduced_homology_dims(complex_, field):
    """
    Reduced homology of a simplicial complex.

    Args:
        complex_: SimplicialComplex
        field: FieldSpec

    Returns:
        List of dim H̃_k(Δ; K) for k = -1..dim Δ
    """
    layers = complex_.faces_by_dimension()
    homology = reduced_homology_from_faces(layers, field)
    logger.debug("Homology of complex with %d facets over %s: %s", len(complex_.facets), field, homology)
    return homology
