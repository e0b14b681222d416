"""Minimum-color search for S-separated colorings with bounded components.

The exact search is a complete backtracking over the window in branch order
with an incremental union-find; the heuristic search is a randomized greedy
start followed by local repair and only ever reports witnesses.
"""

import logging
import random
from dataclasses import dataclass

from lclwork.exceptions import InvariantViolation
from lclwork.groups import GenSet, Window
from lclwork.lcl import WindowConfiguration
from lclwork.models import SearchCertificate
from lclwork.separation import UnionFind, component_graph, is_s_separated

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Default node budget of a single search.
DEFAULT_NODE_BUDGET = 10**8


@dataclass(frozen=True)
class SearchProblem:
    """Find an ``n``-coloring of the window whose S-components have at most ``k`` points."""

    gen_set: GenSet
    n: int
    k: int
    window: Window
    budget: int = DEFAULT_NODE_BUDGET
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            msg = f"number of colors must be at least 1, got {self.n}"
            raise ValueError(msg)
        if self.k < 1:
            msg = f"component bound must be at least 1, got {self.k}"
            raise ValueError(msg)
        if self.budget < 1:
            msg = f"node budget must be positive, got {self.budget}"
            raise ValueError(msg)
        if self.window.oracle != self.gen_set.oracle:
            msg = "window and generating set belong to different groups"
            raise ValueError(msg)

    def certificate(self, outcome: str, **kwargs: object) -> SearchCertificate:
        """A certificate echoing this problem."""
        return SearchCertificate(
            outcome=outcome,  # type: ignore[arg-type]
            group=self.window.oracle.describe(),
            points=[self.window.dump_point(x) for x in self.window.points],
            s=self.gen_set.dump(),
            n=self.n,
            k=self.k,
            seed=self.seed,
            budget=self.budget,
            **kwargs,  # type: ignore[arg-type]
        )


class ExactSearch:
    """Complete backtracking search for one problem."""

    def __init__(self, problem: SearchProblem) -> None:
        """Initialize the search.

        Parameters
        ----------
        problem
            The problem to solve; the window is colored in its branch order.
        """
        self.problem = problem
        self.order = problem.window.branch_order()
        self.nodes = 0
        self.prunes = 0
        self.max_depth = 0
        index = {x: i for i, x in enumerate(self.order)}
        window = problem.window
        self._earlier: list[list[int]] = []
        for i, x in enumerate(self.order):
            neighbors = {index[y] for s in problem.gen_set if (y := window.act(s, x)) is not None}
            self._earlier.append(sorted(j for j in neighbors if j < i))
        self._preference = self._color_preference()

    def _color_preference(self) -> list[list[int]]:
        n = self.problem.n
        if self.problem.seed is None:
            return [list(range(n)) for _ in self.order]
        rng = random.Random(self.problem.seed)
        prefs = []
        for _ in self.order:
            perm = list(range(n))
            rng.shuffle(perm)
            prefs.append(perm)
        return prefs

    def _candidates(self, depth: int, used: int) -> list[int]:
        """Colors to try at ``depth``, reversed for popping.

        Existing colors come in seed order, then the next new color; the first
        point only ever gets color 0.
        """
        if depth == 0:
            return [0]
        existing = [c for c in self._preference[depth] if c < used]
        if used < self.problem.n:
            existing.append(used)
        existing.reverse()
        return existing

    def run(self) -> SearchCertificate:
        """Search until a witness is found, the tree is exhausted, or the budget runs out.

        Returns
        -------
        SearchCertificate
            The outcome; a witness certificate carries the coloring in the
            window's canonical point order.

        Raises
        ------
        InvariantViolation
            If a found witness fails independent re-verification.
        """
        p = self.problem
        m = len(self.order)
        if m == 0:
            return p.certificate("witness", witness=[])

        colors = [-1] * m
        unions = [0] * m
        used_before = [0] * m
        uf = UnionFind(m)
        used = 0
        stack = [self._candidates(0, 0)]
        outcome = "exhausted"
        while stack:
            depth = len(stack) - 1
            # revisiting a depth: drop the previous color and its unions
            if colors[depth] != -1:
                for _ in range(unions[depth]):
                    uf.undo()
                colors[depth] = -1
                used = used_before[depth]
            candidates = stack[-1]
            if not candidates:
                stack.pop()
                continue
            color = candidates.pop()
            self.nodes += 1
            if self.nodes > p.budget:
                outcome = "budget"
                break
            colors[depth] = color
            used_before[depth] = used
            used = max(used, color + 1)
            merged = 0
            fits = True
            for j in self._earlier[depth]:
                if colors[j] == color:
                    merged += 1
                    if uf.union(depth, j) > p.k:
                        fits = False
                        break
            unions[depth] = merged
            if not fits:
                self.prunes += 1
                continue
            self.max_depth = max(self.max_depth, depth + 1)
            if depth + 1 == m:
                outcome = "witness"
                break
            stack.append(self._candidates(depth + 1, used))

        stats = {"nodes": self.nodes, "prunes": self.prunes, "max_depth": self.max_depth}
        LOGGER.debug("exact search n=%d k=%d: %s after %d nodes", p.n, p.k, outcome, self.nodes)
        if outcome != "witness":
            return p.certificate(outcome, **stats)
        by_point = dict(zip(self.order, colors, strict=True))
        config = WindowConfiguration(p.window, by_point)
        _reverify(config, p)
        return p.certificate("witness", witness=list(config.values()), **stats)


def _reverify(config: WindowConfiguration, problem: SearchProblem) -> None:
    report = is_s_separated(config, problem.gen_set, problem.k)
    if not report.verdict or max(config.values(), default=0) >= problem.n:
        msg = f"search produced an invalid witness (violation at {report.violation!r})"
        raise InvariantViolation(msg)


def exact_search(problem: SearchProblem) -> SearchCertificate:
    """Run a complete backtracking search; see ``ExactSearch``."""
    return ExactSearch(problem).run()


def heuristic_search(problem: SearchProblem, restarts: int = 10) -> SearchCertificate:
    """Randomized greedy coloring with local repair.

    Each restart colors the window greedily in branch order, then repeatedly
    recolors a point of the first oversized component with the color shared
    by the fewest of its S-neighbors. Nodes count repair steps against the
    budget. Never reports exhaustion: failure is reported as ``budget``.
    """
    window = problem.window
    order = window.branch_order()
    rng = random.Random(problem.seed)
    neighbors = {
        x: [y for s in problem.gen_set if (y := window.act(s, x)) is not None and y != x]
        for x in order
    }
    steps_per_restart = max(1, 20 * len(order))
    nodes = 0
    for restart in range(restarts):
        colors: dict[object, int] = {}
        for x in order:
            counts = [0] * problem.n
            for y in neighbors[x]:
                if y in colors:
                    counts[colors[y]] += 1
            best = min(counts)
            colors[x] = rng.choice([c for c in range(problem.n) if counts[c] == best])
        for _ in range(steps_per_restart):
            nodes += 1
            config = WindowConfiguration(window, colors)
            graph = component_graph(config, problem.gen_set)
            oversized = next((c for c in graph.components if len(c) > problem.k), None)
            if oversized is None:
                _reverify(config, problem)
                LOGGER.debug("heuristic witness after %d restarts, %d steps", restart, nodes)
                return problem.certificate(
                    "witness", method="heuristic", witness=list(config.values()), nodes=nodes
                )
            if nodes >= problem.budget:
                return problem.certificate("budget", method="heuristic", nodes=nodes)
            x = rng.choice(oversized)
            counts = [0] * problem.n
            for y in neighbors[x]:
                counts[colors[y]] += 1
            counts[colors[x]] += len(order)
            best = min(counts)
            colors[x] = rng.choice([c for c in range(problem.n) if counts[c] == best])
    return problem.certificate("budget", method="heuristic", nodes=nodes)
