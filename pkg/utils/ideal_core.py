"""
Monomials, monomial ideals given by their minimal generators, edge ideals,
the stretching operator σ^t and the colon ideal I(G) : (x - y).
"""

import json
import logging
import re
from dataclasses import dataclass
from functools import cached_property

from utils.errors import HypothesisError, IdealFormatError

logger = logging.getLogger(__name__)

AMBIENT_CONVENTIONS = ("minimal", "degree_bound")

_FACTOR = re.compile(r"x(\d+)(?:\^(\d+))?")


@dataclass(frozen=True)
class Monomial:
    """
    A monomial x_{i}^{a_i} ... stored as sorted (index, exponent) pairs with
    positive exponents only. The empty tuple is the monomial 1.
    """
    exponents: tuple = ()

    def __post_init__(self):
        merged = {}
        for index, power in self.exponents:
            if index < 1:
                raise IdealFormatError(f"variable index must be positive, got {index}")
            if power < 0:
                raise IdealFormatError(f"exponent must be nonnegative, got {power}")
            if power:
                merged[index] = merged.get(index, 0) + power
        object.__setattr__(self, "exponents", tuple(sorted(merged.items())))

    @classmethod
    def from_indices(cls, *indices):
        """x_{i_1} x_{i_2} ...; repeated indices raise the exponent."""
        return cls(tuple((index, 1) for index in indices))

    @cached_property
    def degree(self):
        return sum(power for _, power in self.exponents)

    @cached_property
    def exponent_map(self):
        return dict(self.exponents)

    @property
    def support(self):
        return frozenset(index for index, _ in self.exponents)

    @property
    def max_index(self):
        return self.exponents[-1][0] if self.exponents else 0

    @property
    def is_squarefree(self):
        return all(power == 1 for _, power in self.exponents)

    def indices(self):
        """i_1 ≤ i_2 ≤ ... ≤ i_d, each index repeated by its exponent."""
        return [index for index, power in self.exponents for _ in range(power)]

    def divides(self, other):
        theirs = other.exponent_map
        return all(theirs.get(index, 0) >= power for index, power in self.exponents)

    def lcm(self, other):
        merged = dict(self.exponents)
        for index, power in other.exponents:
            merged[index] = max(merged.get(index, 0), power)
        return Monomial(tuple(merged.items()))

    def sort_key(self):
        return (self.degree, tuple(self.indices()))

    def __str__(self):
        return format_monomial(self)


def format_monomial(monomial):
    """'x1^2*x4^3*x7'; the monomial 1 prints as '1'."""
    if not monomial.exponents:
        return "1"
    return "*".join(f"x{index}" if power == 1 else f"x{index}^{power}" for index, power in monomial.exponents)


def parse_monomial(text):
    """
    Parse 'x1^2*x4^3*x7', the juxtaposed 'x1^2x4^3x7', or '1'.

    Returns:
        Monomial
    """
    compact = text.replace(" ", "").replace("*", "")
    if compact == "1":
        return Monomial()
    if not compact:
        raise IdealFormatError("empty monomial")
    position = 0
    factors = []
    while position < len(compact):
        match = _FACTOR.match(compact, position)
        if not match:
            raise IdealFormatError(f"cannot read monomial {text!r} at {compact[position:]!r}")
        power = int(match.group(2)) if match.group(2) else 1
        factors.append((int(match.group(1)), power))
        position = match.end()
    return Monomial(tuple(factors))


@dataclass(frozen=True)
class MonomialIdeal:
    """
    A monomial ideal of K[x_1, ..., x_{ambient_n}] by its minimal generators,
    kept sorted by (degree, indices). Build it with ``minimalize``.
    """
    ambient_n: int
    gens: tuple = ()

    def __post_init__(self):
        gens = tuple(sorted(set(self.gens), key=Monomial.sort_key))
        for g in gens:
            if g.max_index > self.ambient_n:
                raise IdealFormatError(f"generator {g} uses a variable beyond x{self.ambient_n}")
        for a in gens:
            for b in gens:
                if a != b and a.divides(b):
                    raise IdealFormatError(f"generator {b} is divisible by {a}; use minimalize()")
        object.__setattr__(self, "gens", gens)

    @property
    def is_zero(self):
        return not self.gens

    @property
    def is_squarefree(self):
        return all(g.is_squarefree for g in self.gens)

    @property
    def max_degree(self):
        return max((g.degree for g in self.gens), default=0)

    def supports(self):
        return [g.support for g in self.gens]

    def contains(self, monomial):
        return any(g.divides(monomial) for g in self.gens)

    def __str__(self):
        if not self.gens:
            return "(0)"
        return "(" + ", ".join(format_monomial(g) for g in self.gens) + ")"


def minimalize(gens, ambient_n=None):
    """
    The unique minimal generating set of the ideal generated by ``gens``.

    Args:
        gens: Iterable of Monomials
        ambient_n: Ring size; defaults to the largest index used

    Returns:
        MonomialIdeal
    """
    distinct = sorted(set(gens), key=Monomial.sort_key)
    kept = [g for g in distinct if not any(h != g and h.divides(g) for h in distinct)]
    if ambient_n is None:
        ambient_n = max((g.max_index for g in kept), default=0)
    return MonomialIdeal(ambient_n, tuple(kept))


def edge_ideal(graph):
    """I(G) = (x_u x_v : {u, v} ∈ E(G)) in K[x_1, ..., x_n]."""
    return MonomialIdeal(graph.n, tuple(Monomial.from_indices(u, v) for u, v in graph.edge_list))


def stretch(monomial, t=1):
    """
    σ^t(x_{i_1} x_{i_2} ... x_{i_d}) = x_{i_1} x_{i_2 + t} ... x_{i_d + (d-1)t}
    for i_1 ≤ ... ≤ i_d. For t ≥ 1 the result is squarefree.
    """
    if t < 1:
        raise ValueError(f"stretch needs t >= 1, got {t}")
    shifted = [index + k * t for k, index in enumerate(monomial.indices())]
    return Monomial.from_indices(*shifted)


def stretch_ideal(ideal, t=1, ambient="minimal"):
    """
    I^{σ^t}: stretch every minimal generator and minimalize.

    Args:
        ideal: MonomialIdeal
        t: Stretch step, t ≥ 1
        ambient: ``"minimal"`` keeps the smallest ring that holds the stretched
            generators (and the original variables); ``"degree_bound"`` uses
            n + t(d - 1) variables with d the largest generator degree

    Returns:
        MonomialIdeal
    """
    if ambient not in AMBIENT_CONVENTIONS:
        raise ValueError(f"unknown ambient convention {ambient!r}")
    stretched = [stretch(g, t) for g in ideal.gens]
    if ambient == "degree_bound":
        size = ideal.ambient_n + t * max(ideal.max_degree - 1, 0)
    else:
        size = max([ideal.ambient_n] + [g.max_index for g in stretched])
    return minimalize(stretched, size)


def stretch_until_squarefree(ideal):
    """
    Least t ≥ 0 with squarefree generators in I^{σ^t} (σ^0 is the identity).

    Returns:
        (t, stretched ideal)
    """
    if ideal.is_squarefree:
        return 0, ideal
    t = 1
    current = stretch_ideal(ideal, t)
    while not current.is_squarefree:
        t += 1
        current = stretch_ideal(ideal, t)
    return t, current


def colon_by_linear_difference(graph, x, y):
    """
    I(G) : (x - y) = I(G) + (z w : z ∈ N(x), w ∈ N(y)), valid when the
    closed neighbourhoods of x and y are disjoint.

    Raises:
        HypothesisError: when N[x] ∩ N[y] ≠ ∅
    """
    common = graph.closed_neighborhood(x) & graph.closed_neighborhood(y)
    if common:
        raise HypothesisError(
            f"N[{x}] and N[{y}] share {sorted(common)}; the colon formula needs them disjoint"
        )
    products = [Monomial.from_indices(z, w) for z in graph.neighbors(x) for w in graph.neighbors(y)]
    return minimalize(list(edge_ideal(graph).gens) + products, graph.n)


def ideal_to_json(ideal):
    return {"n": ideal.ambient_n, "gens": [format_monomial(g) for g in ideal.gens]}


def parse_ideal(text):
    """
    Read an ideal document: either JSON ``{"n": int, "gens": [...]}`` or a
    comma/newline separated generator list, optionally in parentheses, in
    which case the ring is the smallest one holding the generators.

    Returns:
        MonomialIdeal (minimalized)
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
            gens = [parse_monomial(item) for item in data["gens"]]
            size = int(data["n"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, IdealFormatError):
                raise
            raise IdealFormatError(f"bad ideal JSON: {exc}") from exc
        return minimalize(gens, size)

    if stripped.startswith("(") and stripped.endswith(")"):
        stripped = stripped[1:-1]
    pieces = [piece.strip() for piece in re.split(r"[,\n]", stripped)]
    gens = [parse_monomial(piece) for piece in pieces if piece and piece != "0"]
    return minimalize(gens)
