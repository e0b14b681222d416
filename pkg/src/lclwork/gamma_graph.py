"""Gamma-graphs, Gamma-maps, finite actions, and the LCL translations.

A Gamma-graph has a vertex list and edges labelled by group elements. Edge
sets are stored over an explicit finite support ``T``: the triples with a
label in ``T`` are listed, and the ``cofinite`` flag says whether every
triple with a label outside ``T`` is an edge. All checks are restricted to
the supports involved.
"""

import bisect
import itertools
import logging
from collections.abc import Callable, Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from lclwork.exceptions import ColoringError, GroupError
from lclwork.groups import (
    FiniteGroup,
    FreeAbelian,
    FreeGroup,
    GenSet,
    GroupElement,
    GroupOracle,
    Space,
)
from lclwork.lcl import LCLInstance, Pattern, pattern_translate

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Labelled edge ``(gamma, v, w)``.
type Triple = tuple[GroupElement, Hashable, Hashable]


@dataclass(frozen=True)
class GammaGraph:
    """A Gamma-graph with edges stored as sorted index triples over the support."""

    oracle: GroupOracle
    vertices: tuple[Hashable, ...]
    support: tuple[GroupElement, ...]
    triples: tuple[tuple[int, int, int], ...]
    cofinite: bool = False

    @classmethod
    def build(
        cls,
        oracle: GroupOracle,
        vertices: Iterable[Hashable],
        support: Iterable[GroupElement],
        edges: Iterable[Triple],
        *,
        cofinite: bool = False,
    ) -> "GammaGraph":
        """Create a graph from labelled edges.

        Raises
        ------
        GroupError
            If an edge label is outside the support or an endpoint is not a vertex.
        """
        verts = tuple(vertices)
        vertex_index = {v: i for i, v in enumerate(verts)}
        if len(vertex_index) != len(verts):
            msg = "Gamma-graph vertices must be distinct"
            raise GroupError(msg)
        supp = tuple(sorted({oracle.check(g) for g in support}))
        support_index = {g: i for i, g in enumerate(supp)}
        triples: set[tuple[int, int, int]] = set()
        for gamma, v, w in edges:
            if gamma not in support_index:
                msg = f"edge label {gamma!r} is outside the support"
                raise GroupError(msg)
            if v not in vertex_index or w not in vertex_index:
                msg = f"edge ({gamma!r}, {v!r}, {w!r}) has an endpoint that is not a vertex"
                raise GroupError(msg)
            triples.add((support_index[gamma], vertex_index[v], vertex_index[w]))
        return cls(oracle, verts, supp, tuple(sorted(triples)), cofinite)

    @cached_property
    def vertex_index(self) -> dict[Hashable, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def support_index(self) -> dict[GroupElement, int]:
        return {g: i for i, g in enumerate(self.support)}

    def has_edge(self, gamma: GroupElement, v: Hashable, w: Hashable) -> bool:
        """Whether ``(gamma, v, w)`` is an edge, explicit or implicit."""
        if gamma not in self.support_index:
            return self.cofinite
        key = (self.support_index[gamma], self.vertex_index[v], self.vertex_index[w])
        pos = bisect.bisect_left(self.triples, key)
        return pos < len(self.triples) and self.triples[pos] == key

    def edges(self) -> Iterator[Triple]:
        """Explicit edges in lexicographic index order."""
        for g, v, w in self.triples:
            yield self.support[g], self.vertices[v], self.vertices[w]

    def pairs(self, gamma: GroupElement) -> list[tuple[int, int]]:
        """Vertex index pairs joined by ``gamma`` among the explicit triples."""
        g = self.support_index[gamma]
        lo = bisect.bisect_left(self.triples, (g, -1, -1))
        hi = bisect.bisect_left(self.triples, (g + 1, -1, -1))
        return [(v, w) for _, v, w in self.triples[lo:hi]]

    def __len__(self) -> int:
        return len(self.triples)

    def to_payload(self, dump_vertex: Callable[[Any], Any] | None = None) -> dict[str, Any]:
        """Certificate form: ``{vertices, support, triples, cofinite}``."""
        dump = dump_vertex or (lambda v: v)
        return {
            "vertices": [dump(v) for v in self.vertices],
            "support": [self.oracle.dump(g) for g in self.support],
            "triples": [[self.oracle.dump(self.support[g]), v, w] for g, v, w in self.triples],
            "cofinite": self.cofinite,
        }


@dataclass(frozen=True)
class VertexMap:
    """A total function between vertex lists, stored as images in source order."""

    source: tuple[Hashable, ...]
    images: tuple[Hashable, ...]

    def __post_init__(self) -> None:
        if len(self.source) != len(self.images):
            msg = "vertex map must have exactly one image per source vertex"
            raise ColoringError(msg)

    @classmethod
    def from_mapping(cls, graph: GammaGraph, mapping: Mapping[Hashable, Hashable]) -> "VertexMap":
        """Read a mapping over the vertices of ``graph``.

        Raises
        ------
        ColoringError
            If some vertex has no image.
        """
        missing = [v for v in graph.vertices if v not in mapping]
        if missing:
            msg = f"vertex map is not total: no image for {missing[0]!r}"
            raise ColoringError(msg)
        return cls(graph.vertices, tuple(mapping[v] for v in graph.vertices))

    @classmethod
    def identity(cls, graph: GammaGraph) -> "VertexMap":
        return cls(graph.vertices, graph.vertices)

    @cached_property
    def _lookup(self) -> dict[Hashable, Hashable]:
        return dict(zip(self.source, self.images, strict=True))

    def __call__(self, v: Hashable) -> Hashable:
        return self._lookup[v]

    def then(self, other: "VertexMap") -> "VertexMap":
        """The composition ``other . self``."""
        return VertexMap(self.source, tuple(other(w) for w in self.images))


@dataclass(frozen=True)
class GammaMapVerdict:
    """Result of ``is_gamma_map``; ``violation`` is the first failing triple."""

    ok: bool
    violation: Triple | None = None


def is_gamma_map(f: VertexMap, source: GammaGraph, target: GammaGraph) -> GammaMapVerdict:
    """Check that every represented edge of ``source`` maps to an edge of ``target``.

    Explicit edges of ``source`` are checked. A cofinite ``source`` also has
    every triple labelled outside its support, which matters only for labels
    in the support of ``target``; labels outside both supports pass. Triples
    are visited in lexicographic order, so the reported violation is the first.

    Raises
    ------
    ColoringError
        If ``f`` is not total on the vertices of ``source`` or hits a non-vertex.
    """
    if f.source != source.vertices:
        msg = "vertex map is not defined on the source vertices"
        raise ColoringError(msg)
    for w in f.images:
        if w not in target.vertex_index:
            msg = f"vertex map image {w!r} is not a vertex of the target"
            raise ColoringError(msg)

    labels = set(source.support)
    if source.cofinite:
        labels |= set(target.support)
    everything = list(itertools.product(range(len(source.vertices)), repeat=2))
    for gamma in sorted(labels):
        pairs = source.pairs(gamma) if gamma in source.support_index else everything
        for v, w in pairs:
            fv, fw = f.images[v], f.images[w]
            if not target.has_edge(gamma, fv, fw):
                triple = (gamma, source.vertices[v], source.vertices[w])
                LOGGER.debug("Gamma-map violation at %r", triple)
                return GammaMapVerdict(False, triple)
    return GammaMapVerdict(True)


@dataclass(frozen=True)
class FiniteAction:
    """A group acting on the points ``0..size-1``.

    Each generator acts by a permutation; an element acts through its word,
    applying the rightmost letter first.
    """

    oracle: GroupOracle
    size: int
    permutations: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        perms = tuple(tuple(int(i) for i in p) for p in self.permutations)
        object.__setattr__(self, "permutations", perms)
        if len(perms) != len(self.oracle.generators):
            msg = (
                f"{self.oracle.describe()} has {len(self.oracle.generators)} generators, "
                f"got {len(perms)} permutations"
            )
            raise GroupError(msg)
        for p in perms:
            if sorted(p) != list(range(self.size)):
                msg = f"{list(p)} is not a permutation of 0..{self.size - 1}"
                raise GroupError(msg)
        if isinstance(self.oracle, FreeAbelian):
            for p, q in itertools.combinations(perms, 2):
                if any(p[q[x]] != q[p[x]] for x in range(self.size)):
                    msg = "generator permutations of a free abelian group must commute"
                    raise GroupError(msg)
        elif isinstance(self.oracle, FiniteGroup):
            elems = range(self.oracle.order)
            for a, b in itertools.product(elems, repeat=2):
                ab = self.oracle.mul(a, b)
                for x in self.points:
                    if self.act(ab, x) != self.act(a, self.act(b, x)):
                        msg = "generator permutations do not respect the group relations"
                        raise GroupError(msg)
        elif not isinstance(self.oracle, FreeGroup):
            msg = f"finite actions of {self.oracle.describe()} are not supported"
            raise GroupError(msg)

    @classmethod
    def trivial(cls, oracle: GroupOracle, size: int = 1) -> "FiniteAction":
        """Every element fixes every point."""
        ident = tuple(range(size))
        return cls(oracle, size, tuple(ident for _ in oracle.generators))

    @classmethod
    def rotation(cls, oracle: GroupOracle, size: int) -> "FiniteAction":
        """Every generator acts as ``x -> x + 1 mod size``."""
        rot = tuple((x + 1) % size for x in range(size))
        return cls(oracle, size, tuple(rot for _ in oracle.generators))

    @cached_property
    def points(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    @cached_property
    def _inverses(self) -> tuple[tuple[int, ...], ...]:
        result = []
        for p in self.permutations:
            inv = [0] * self.size
            for x, y in enumerate(p):
                inv[y] = x
            result.append(tuple(inv))
        return tuple(result)

    def act(self, g: GroupElement, x: Any) -> int:
        y = int(x)
        for letter in reversed(self.oracle.word(g)):
            perm = self.permutations[letter - 1] if letter > 0 else self._inverses[-letter - 1]
            y = perm[y]
        return y

    def dump_point(self, x: Any) -> Any:
        return x

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and 0 <= x < self.size


def action_table(
    space: Space, support: Iterable[GroupElement]
) -> dict[tuple[GroupElement, Any], Any]:
    """Tabulate ``gamma . x`` for all ``gamma`` in the support and all points.

    Raises
    ------
    GroupError
        If the space does not act totally on the support.
    """
    table: dict[tuple[GroupElement, Any], Any] = {}
    for gamma in support:
        for x in space.points:
            y = space.act(gamma, x)
            if y is None:
                msg = f"{gamma!r} moves {x!r} out of the space"
                raise GroupError(msg)
            table[gamma, x] = y
    return table


def action_to_gamma_graph(
    oracle: GroupOracle,
    points: Iterable[Hashable],
    table: Mapping[tuple[GroupElement, Any], Any],
    support: Iterable[GroupElement],
) -> GammaGraph:
    """The Gamma-graph with edges ``(gamma, x, gamma . x)`` for ``gamma`` in the support.

    Raises
    ------
    GroupError
        If the table is incomplete, leaves the point set, lets the identity
        move a point, or composes inconsistently inside the support.
    """
    verts = tuple(points)
    vertex_set = set(verts)
    supp = sorted({oracle.check(g) for g in support})
    supp_set = set(supp)
    for gamma in supp:
        for x in verts:
            y = table.get((gamma, x))
            if y is None or y not in vertex_set:
                msg = f"action table has no valid value for {gamma!r} . {x!r}"
                raise GroupError(msg)
            if gamma == oracle.identity and y != x:
                msg = f"identity moves {x!r} to {y!r}"
                raise GroupError(msg)
    for gamma, delta in itertools.product(supp, repeat=2):
        product = oracle.mul(gamma, delta)
        if product not in supp_set:
            continue
        for x in verts:
            if table[product, x] != table[gamma, table[delta, x]]:
                msg = f"action table composes inconsistently at {gamma!r}, {delta!r}, {x!r}"
                raise GroupError(msg)
    edges = [(gamma, x, table[gamma, x]) for gamma in supp for x in verts]
    return GammaGraph.build(oracle, verts, supp, edges)


def window_gamma_graph(
    space: Space,
    support: Iterable[GroupElement],
    points: Iterable[Any] | None = None,
    sources: Iterable[Any] | None = None,
) -> GammaGraph:
    """The Gamma-graph of an action read inside a finite set of points.

    Vertices are ``points`` (all points by default); edges are the
    ``(gamma, x, gamma . x)`` with ``x`` in ``sources`` (default: the vertices)
    and ``gamma . x`` a vertex.
    """
    verts = tuple(space.points if points is None else points)
    vertex_set = set(verts)
    origins = verts if sources is None else tuple(x for x in verts if x in set(sources))
    supp = tuple(support)
    edges = []
    for gamma in supp:
        for x in origins:
            y = space.act(gamma, x)
            if y is not None and y in vertex_set:
                edges.append((gamma, x, y))
    return GammaGraph.build(space.oracle, verts, supp, edges)


def lcl_to_gamma_graph(lcl: LCLInstance, support: Iterable[GroupElement]) -> GammaGraph:
    """The pattern graph of an instance.

    Vertices are pattern indices. For ``gamma`` in the support, ``(gamma, P, Q)``
    is an edge iff the translate ``gamma P`` is compatible with ``Q``; labels
    outside the support are unconstrained.
    """
    oracle = lcl.oracle
    supp = sorted({oracle.check(g) for g in support})
    indices = range(len(lcl.patterns))
    edges: list[Triple] = []
    for gamma in supp:
        translated = [pattern_translate(oracle, gamma, p) for p in lcl.patterns]
        edges.extend(
            (gamma, i, j)
            for i in indices
            for j in indices
            if translated[i].compatible(lcl.patterns[j])
        )
    return GammaGraph.build(oracle, indices, supp, edges, cofinite=True)


def gamma_graph_to_lcl(graph: GammaGraph, gen_set: GenSet) -> LCLInstance:
    """All total ``P : S -> V`` with ``(s, P(1), P(s))`` an edge for every ``s`` in ``S``.

    Colors are vertex indices; the alphabet is the vertex list.

    Raises
    ------
    GroupError
        If the graph is not cofinite or ``S`` does not cover its support.
    """
    oracle = graph.oracle
    if not graph.cofinite:
        msg = "only finite (cofinite-edge) Gamma-graphs translate to LCLs"
        raise GroupError(msg)
    uncovered = [g for g in graph.support if g not in gen_set]
    if uncovered:
        msg = f"S does not cover the support of the graph: missing {uncovered[0]!r}"
        raise GroupError(msg)
    identity = oracle.identity
    others = [s for s in gen_set if s != identity]
    n = len(graph.vertices)
    patterns: list[Pattern] = []
    for base in range(n):
        base_vertex = graph.vertices[base]
        if not graph.has_edge(identity, base_vertex, base_vertex):
            continue
        choices = [
            [w for w in range(n) if graph.has_edge(s, base_vertex, graph.vertices[w])]
            for s in others
        ]
        for images in itertools.product(*choices):
            patterns.append(Pattern(((identity, base), *zip(others, images, strict=True))))
    origin = {"construction": "gamma_graph", "s": gen_set.dump(), "vertices": n}
    return LCLInstance.build(oracle, patterns, n, origin)
