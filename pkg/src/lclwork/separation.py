"""Monochromatic components, S-separation, and the Pi_{S,n} correspondence.

Two points ``x`` and ``x' = s x`` with ``s`` in ``S`` are adjacent when they
have the same color. A coloring is S-separated with bound ``k`` when every
component of this graph has at most ``k`` points.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from lclwork.exceptions import ColoringError, InvariantViolation
from lclwork.groups import DEFAULT_SET_POWER_LIMIT, GenSet, Window, set_power
from lclwork.lcl import (
    LCLInstance,
    Pattern,
    PatternAssignment,
    WindowConfiguration,
    pi_sn_violations,
)
from lclwork.models import SeparationReport

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Reports list full component membership up to this many points.
DEFAULT_MEMBERSHIP_LIMIT = 1000


class UnionFind:
    """Union by size with an undo log.

    No path compression, so every union can be undone in LIFO order.
    """

    def __init__(self, size: int) -> None:
        self.parent = list(range(size))
        self.size = [1] * size
        self._history: list[tuple[int, int] | None] = []

    def find(self, i: int) -> int:
        """Root of the set containing ``i``."""
        while self.parent[i] != i:
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> int:
        """Merge the sets of ``a`` and ``b``; return the size of the merged set.

        The smaller root is attached below the larger one. Every call is
        recorded, so it can be undone even when ``a`` and ``b`` already share a set.
        """
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self._history.append(None)
            return self.size[ra]
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self._history.append((ra, rb))
        return self.size[ra]

    def undo(self) -> None:
        """Revert the most recent ``union``, including one that merged nothing.

        Raises
        ------
        IndexError
            If there is no union left to undo.
        """
        record = self._history.pop()
        if record is not None:
            ra, rb = record
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]

    def component_size(self, i: int) -> int:
        return self.size[self.find(i)]


@dataclass(frozen=True, eq=False)
class ComponentGraph:
    """Components of the monochromatic S-adjacency graph of a coloring."""

    config: WindowConfiguration
    gen_set: GenSet
    components: tuple[tuple[Any, ...], ...]
    boundary: tuple[bool, ...]

    @cached_property
    def component_of(self) -> dict[Any, int]:
        return {x: i for i, comp in enumerate(self.components) for x in comp}

    def component(self, x: Any) -> tuple[Any, ...]:
        """Members of the component containing ``x``, in canonical order."""
        return self.components[self.component_of[x]]

    def is_boundary(self, x: Any) -> bool:
        return self.boundary[self.component_of[x]]

    def sizes(self) -> list[int]:
        """Component sizes in component order."""
        return [len(c) for c in self.components]


def component_graph(config: WindowConfiguration, gen_set: GenSet) -> ComponentGraph:
    """Compute the exact components of the monochromatic S-adjacency graph.

    A component is boundary-touching when some member ``x`` has ``S x``
    leaving the space. Components are listed by their first point in
    canonical order, members in canonical order.
    """
    space = config.space
    points = space.points
    index = {x: i for i, x in enumerate(points)}
    uf = UnionFind(len(points))
    touches = [False] * len(points)
    for i, x in enumerate(points):
        color = config[x]
        for s in gen_set:
            y = space.act(s, x)
            if y is None:
                touches[i] = True
            elif config[y] == color:
                uf.union(i, index[y])
    groups: dict[int, list[int]] = {}
    for i in range(len(points)):
        groups.setdefault(uf.find(i), []).append(i)
    members = sorted(groups.values(), key=lambda g: g[0])
    return ComponentGraph(
        config,
        gen_set,
        tuple(tuple(points[i] for i in g) for g in members),
        tuple(any(touches[i] for i in g) for g in members),
    )


def is_s_separated(
    config: WindowConfiguration,
    gen_set: GenSet,
    k: int,
    *,
    membership_limit: int = DEFAULT_MEMBERSHIP_LIMIT,
    graph: ComponentGraph | None = None,
) -> SeparationReport:
    """Measure components and check them against the bound ``k``.

    The verdict is true iff no measured component exceeds ``k``. Interior
    components are exact; boundary-touching ones are lower bounds, so they
    can only violate. The first point of the first violating component is
    reported.

    Parameters
    ----------
    config
        The coloring.
    gen_set
        The adjacency set ``S``.
    k
        Component size bound, at least 1.
    membership_limit
        List component membership only for spaces up to this many points.
    graph
        A precomputed component graph of the same coloring.
    """
    if k < 1:
        msg = f"component bound must be at least 1, got {k}"
        raise ValueError(msg)
    cg = graph if graph is not None else component_graph(config, gen_set)
    space = config.space
    sizes = cg.sizes()
    interior = [n for n, b in zip(sizes, cg.boundary, strict=True) if not b]
    touching = [n for n, b in zip(sizes, cg.boundary, strict=True) if b]
    violation = next((comp[0] for comp in cg.components if len(comp) > k), None)
    members = None
    if len(space.points) <= membership_limit:
        members = [[space.dump_point(x) for x in comp] for comp in cg.components]
    report = SeparationReport(
        k=k,
        verdict=violation is None,
        point_count=len(space.points),
        component_count=len(sizes),
        max_interior_component=max(interior, default=0),
        max_boundary_component=max(touching, default=0),
        max_component=max(sizes, default=0),
        histogram=dict(sorted(Counter(sizes).items())),
        violation=None if violation is None else space.dump_point(violation),
        members=members,
    )
    LOGGER.debug(
        "separation k=%d: %d components, interior max %d, boundary max %d",
        k,
        report.component_count,
        report.max_interior_component,
        report.max_boundary_component,
    )
    return report


def pi_to_separated_bound(
    lcl: LCLInstance, assignment: PatternAssignment, graph: ComponentGraph
) -> int:
    """Check ``[x] subset dom(P) x`` for every assigned point and return ``max |dom(P)|``.

    Raises
    ------
    ColoringError
        If a pattern of the instance is not in Pi_{S,n}.
    InvariantViolation
        If some component escapes the domain of its point's pattern.
    """
    gen_set = graph.gen_set
    oracle = gen_set.oracle
    for i, pattern in enumerate(lcl.patterns):
        problems = pi_sn_violations(pattern, gen_set)
        if problems:
            msg = f"pattern {i} is not in Pi_(S,n): {problems[0]}"
            raise ColoringError(msg)
    bound = max((len(p) for p in lcl.patterns), default=0)
    for x, index in assignment.items():
        pattern = lcl.patterns[index]
        reach = {oracle.mul(g, x) for g in pattern.dom}
        component = graph.component(x)
        escaped = [y for y in component if y not in reach]
        if escaped:
            msg = f"component of {x!r} leaves dom(P) x at {escaped[0]!r}"
            raise InvariantViolation(msg)
    return bound


def separated_scope(window: Window, gen_set: GenSet, k: int) -> list[Any]:
    """Points ``x`` with ``S^(k+1) x`` inside the window."""
    oracle = gen_set.oracle
    reach = set_power(gen_set, k + 1, limit=DEFAULT_SET_POWER_LIMIT)
    return [x for x in window.points if all(oracle.mul(g, x) in window for g in reach)]


def separated_to_pi(
    config: WindowConfiguration,
    gen_set: GenSet,
    k: int,
    *,
    n: int | None = None,
) -> tuple[LCLInstance, PatternAssignment]:
    """Build the Pi_{S,n} patterns realized by an S-separated coloring.

    For every point ``x`` with ``S^(k+1) x`` inside the window, the pattern
    ``P_x`` has domain ``{g : g x in S [x]}`` and ``P_x(g) = c(g x)``. Patterns
    are deduplicated in order of first appearance.

    Returns
    -------
    tuple[LCLInstance, PatternAssignment]
        The fragment and the map from in-scope points to its pattern indices.

    Raises
    ------
    ColoringError
        If the space is not a window of the group or a component in scope is
        not inside ``S^k x``.
    InvariantViolation
        If a constructed pattern is not in Pi_{S,n} or leaves ``S^(k+1)``.
    """
    if k < 1:
        msg = f"component bound must be at least 1, got {k}"
        raise ValueError(msg)
    window = config.space
    if not isinstance(window, Window):
        msg = "separated_to_pi needs a window of the group acted on by left multiplication"
        raise ColoringError(msg)
    oracle = gen_set.oracle
    colors = n if n is not None else max(config.values(), default=-1) + 1
    within_k = set_power(gen_set, k)
    within_k1 = set_power(gen_set, k + 1)
    graph = component_graph(config, gen_set)

    index_of: dict[Pattern, int] = {}
    assignment: PatternAssignment = {}
    for x in separated_scope(window, gen_set, k):
        x_inv = oracle.inv(x)
        component = graph.component(x)
        offsets = [oracle.mul(y, x_inv) for y in component]
        if any(g not in within_k for g in offsets):
            msg = f"component of {x!r} is not contained in S^{k} x"
            raise ColoringError(msg)
        domain = {oracle.mul(s, g) for s in gen_set for g in offsets}
        pattern = Pattern.from_mapping({g: config[oracle.mul(g, x)] for g in domain})
        problems = pi_sn_violations(pattern, gen_set, colors)
        if problems:
            msg = f"pattern built at {x!r} is not in Pi_(S,{colors}): {problems[0]}"
            raise InvariantViolation(msg)
        if any(g not in within_k1 for g in domain):
            msg = f"pattern built at {x!r} leaves S^{k + 1}"
            raise InvariantViolation(msg)
        assignment[x] = index_of.setdefault(pattern, len(index_of))
    origin = {"construction": "separated", "s": gen_set.dump(), "k": k, "n": colors}
    lcl = LCLInstance.build(oracle, list(index_of), colors, origin)
    LOGGER.debug("built %d distinct patterns for %d points", len(lcl), len(assignment))
    return lcl, assignment
