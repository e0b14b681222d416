"""Window-scale subshifts of Pi-colorings, shifts, and equivariant pullbacks.

The subshift of an instance is approximated by the configurations of a
finite window that are valid at every interior point. Configurations are
produced lazily in lexicographic order of their values in canonical point
order.
"""

import logging
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from tqdm import tqdm

from lclwork.exceptions import ColoringError, FreenessError, InvariantViolation
from lclwork.groups import GroupElement, Space, Window
from lclwork.lcl import LCLInstance, WindowConfiguration, verify_pi_coloring
from lclwork.models import EnumerationReport, ExtensionReport

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Default cap on enumerated configurations.
DEFAULT_ENUMERATION_LIMIT = 10_000


@dataclass(frozen=True, eq=False)
class WindowedSubshift:
    """Valid configurations of an instance on a finite space.

    Points listed in ``fixed`` keep their given colors. Iteration is a
    backtracking in point order: after each assignment, every interior point
    whose constraint involves the assigned point must keep some pattern whose
    assigned targets all agree.
    """

    lcl: LCLInstance
    space: Space
    fixed: Mapping[Any, int] = field(default_factory=dict)

    @cached_property
    def _constraints(self) -> dict[Any, list[list[tuple[int, int]]]]:
        """Per interior point, the ``(point index, color)`` targets of each fitting pattern."""
        index = {x: i for i, x in enumerate(self.space.points)}
        result: dict[Any, list[list[tuple[int, int]]]] = {}
        for x in self.space.points:
            fitting = []
            for pattern in self.lcl.patterns:
                targets = []
                for g, color in pattern.entries:
                    y = self.space.act(g, x)
                    if y is None:
                        break
                    targets.append((index[y], color))
                else:
                    fitting.append(targets)
            if fitting or not self.lcl.patterns:
                result[x] = fitting
        return result

    @property
    def interior(self) -> tuple[Any, ...]:
        """Points where some pattern fits; every point for an instance without patterns."""
        return tuple(x for x in self.space.points if x in self._constraints)

    @cached_property
    def _watchers(self) -> list[list[tuple[int, list[list[tuple[int, int]]]]]]:
        """Constraints to recheck once the point at each index is assigned."""
        index = {x: i for i, x in enumerate(self.space.points)}
        watchers: list[list[tuple[int, list[list[tuple[int, int]]]]]] = [
            [] for _ in self.space.points
        ]
        for x, fitting in self._constraints.items():
            involved = {index[x]} | {i for targets in fitting for i, _ in targets}
            for i in involved:
                watchers[i].append((index[x], fitting))
        return watchers

    def _alive(self, depth: int, values: list[int]) -> bool:
        # indices above depth are still unassigned and match anything
        for _, fitting in self._watchers[depth]:
            if not any(
                all(i > depth or values[i] == color for i, color in targets)
                for targets in fitting
            ):
                return False
        return True

    def __iter__(self) -> Iterator[WindowConfiguration]:
        points = self.space.points
        m = len(points)
        alphabet = self.lcl.alphabet_size
        choices = [
            [self.fixed[x]] if x in self.fixed else list(range(alphabet)) for x in points
        ]
        if m == 0:
            yield WindowConfiguration(self.space, {})
            return
        values = [-1] * m
        cursor = [0] * m
        depth = 0
        while depth >= 0:
            if cursor[depth] >= len(choices[depth]):
                cursor[depth] = 0
                depth -= 1
                continue
            values[depth] = choices[depth][cursor[depth]]
            cursor[depth] += 1
            if not self._alive(depth, values):
                continue
            if depth == m - 1:
                yield WindowConfiguration.from_values(self.space, values)
            else:
                depth += 1

    def first(self) -> WindowConfiguration | None:
        """The lexicographically first valid configuration, or ``None`` if there is none."""
        return next(iter(self), None)


def enumerate_window_configs(
    lcl: LCLInstance, space: Space, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> tuple[list[WindowConfiguration], bool]:
    """All valid configurations of the space, in canonical order, up to ``limit``.

    Returns
    -------
    tuple[list[WindowConfiguration], bool]
        The configurations and whether the list was truncated at ``limit``.
    """
    configs: list[WindowConfiguration] = []
    for config in WindowedSubshift(lcl, space):
        if len(configs) == limit:
            LOGGER.warning("enumeration truncated at %d configurations", limit)
            return configs, True
        configs.append(config)
    return configs, False


def enumeration_report(
    lcl: LCLInstance, space: Space, limit: int = DEFAULT_ENUMERATION_LIMIT
) -> EnumerationReport:
    """Certificate form of ``enumerate_window_configs``; the count is exact when not truncated."""
    configs, truncated = enumerate_window_configs(lcl, space, limit)
    subshift = WindowedSubshift(lcl, space)
    return EnumerationReport(
        points=[space.dump_point(x) for x in space.points],
        interior=[space.dump_point(x) for x in subshift.interior],
        configurations=[list(c.values()) for c in configs],
        count=None if truncated else len(configs),
        truncated=truncated,
    )


def shift_config(gamma: GroupElement, config: WindowConfiguration) -> WindowConfiguration:
    """The shift ``(gamma . x)_d = x_(d gamma)`` on the truncated domain ``W gamma^-1 ∩ W``.

    An empty truncation gives a configuration of the empty window.
    """
    window = config.space
    if not isinstance(window, Window):
        msg = "shifts are defined for windows of the group"
        raise ColoringError(msg)
    oracle = window.oracle
    oracle.check(gamma)
    domain = [d for d in window.points if oracle.mul(d, gamma) in window]
    shifted = Window.of(oracle, domain)
    return WindowConfiguration(shifted, {d: config[oracle.mul(d, gamma)] for d in domain})


def canonical_coloring(config: WindowConfiguration) -> int:
    """The color at the identity.

    Raises
    ------
    ColoringError
        If the identity is not in the configuration's domain.
    """
    identity = config.space.oracle.identity
    if identity not in config.colors:
        msg = "the identity is not in the configuration's domain"
        raise ColoringError(msg)
    return config[identity]


def extension_check(
    lcl: LCLInstance,
    window: Window,
    larger: Window,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    *,
    progress: bool = False,
) -> ExtensionReport:
    """Count valid window configurations with a valid extension to the larger window.

    All configurations extending across growing windows is evidence, not proof,
    that the full subshift is nonempty.
    """
    if not set(window.points) <= set(larger.points):
        msg = "the extension window must contain the window"
        raise ValueError(msg)
    report = ExtensionReport(window_size=len(window), extension_size=len(larger))
    configs, report.truncated = enumerate_window_configs(lcl, window, limit)
    for config in tqdm(configs, desc="Extensions", disable=not progress):
        report.checked += 1
        if WindowedSubshift(lcl, larger, config.colors).first() is not None:
            report.extendable += 1
        else:
            report.non_extendable += 1
            if report.first_non_extendable is None:
                report.first_non_extendable = list(config.values())
    LOGGER.debug(
        "extension check: %d of %d configurations extend",
        report.extendable,
        report.checked,
    )
    return report


def pullback_group_coloring(
    config: WindowConfiguration,
    basepoint: Any,
    group_ball: Window,
    lcl: LCLInstance | None = None,
) -> WindowConfiguration:
    """Pull a coloring of an orbit back to a ball of the group: ``c'(g) = c(g . x0)``.

    With an instance given, a valid coloring must pull back to a coloring
    valid at every ball point where all pattern domains fit; this is
    re-verified.

    Raises
    ------
    FreenessError
        If two ball elements reach the same point of the orbit.
    ColoringError
        If an element moves the basepoint out of the space.
    InvariantViolation
        If the pullback of a valid coloring fails re-verification.
    """
    space = config.space
    seen: dict[Any, GroupElement] = {}
    colors: dict[Any, int] = {}
    for g in group_ball.points:
        y = space.act(g, basepoint)
        if y is None:
            msg = f"{g!r} moves the basepoint out of the space"
            raise ColoringError(msg)
        if y in seen:
            msg = f"{seen[y]!r} and {g!r} both reach {y!r}: the orbit is not free on the ball"
            raise FreenessError(msg)
        seen[y] = g
        colors[g] = config[y]
    pulled = WindowConfiguration(group_ball, colors)
    if lcl is not None and verify_pi_coloring(config, lcl).ok:
        oracle = group_ball.oracle
        deep = [
            g
            for g in group_ball.points
            if all(oracle.mul(d, g) in group_ball for p in lcl.patterns for d in p.dom)
        ]
        verdict = verify_pi_coloring(pulled, lcl, deep)
        if not verdict.ok:
            msg = f"pullback of a valid coloring fails at {verdict.failure!r}"
            raise InvariantViolation(msg)
    return pulled
