"""Patterns, LCL instances, and verification of Pi-colorings.

A pattern is a partial coloring of a finite subset of the group. A coloring
``c`` of a space matches a pattern ``P`` at ``x`` when ``c(g x) = P(g)`` for
every ``g`` in the domain of ``P``.

Translation follows the shift ``(g . x)_d = x_{dg}``: ``gP`` has domain
``dom(P) g^-1`` and ``(gP)(d) = P(dg)``. With this convention the first-match
map of a coloring is a Gamma-map into the pattern graph.
"""

import enum
import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from lclwork.exceptions import ColoringError, GroupError, SizeLimitError
from lclwork.groups import GenSet, GroupElement, GroupOracle, Space, Window

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Default largest window accepted by ``pi_sn_generate``.
DEFAULT_PI_SN_WINDOW_LIMIT = 24

#: Default largest number of patterns (or domain subsets) ``pi_sn_generate`` may produce.
DEFAULT_PATTERN_LIMIT = 200_000

#: Map from checked points to indices into an instance's pattern list.
type PatternAssignment = dict[Any, int]


class Match(enum.Enum):
    """Outcome of checking one pattern at one point."""

    MATCH = "match"
    MISMATCH = "mismatch"
    OUT_OF_WINDOW = "out-of-window"


@dataclass(frozen=True)
class Pattern:
    """A coloring of a finite nonempty subset of the group."""

    entries: tuple[tuple[GroupElement, int], ...]

    def __post_init__(self) -> None:
        entries = tuple(sorted(self.entries))
        if not entries:
            msg = "pattern domain must be nonempty"
            raise ValueError(msg)
        if len({g for g, _ in entries}) != len(entries):
            msg = "pattern domain has repeated elements"
            raise ValueError(msg)
        for _, color in entries:
            if not isinstance(color, int) or color < 0:
                msg = f"pattern colors are natural numbers, got {color!r}"
                raise ValueError(msg)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_mapping(cls, mapping: Mapping[GroupElement, int]) -> "Pattern":
        return cls(tuple(mapping.items()))

    @cached_property
    def values(self) -> dict[GroupElement, int]:
        return dict(self.entries)

    @property
    def dom(self) -> tuple[GroupElement, ...]:
        return tuple(g for g, _ in self.entries)

    @property
    def image(self) -> frozenset[int]:
        return frozenset(c for _, c in self.entries)

    def __call__(self, g: GroupElement) -> int:
        return self.values[g]

    def __len__(self) -> int:
        return len(self.entries)

    def compatible(self, other: "Pattern") -> bool:
        """Whether the union of both patterns is still a function."""
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        return all(large.values.get(g, c) == c for g, c in small.entries)

    def dump(self, oracle: GroupOracle) -> list[list[Any]]:
        return [[oracle.dump(g), c] for g, c in self.entries]

    @classmethod
    def load(cls, oracle: GroupOracle, raw: Sequence[Sequence[Any]]) -> "Pattern":
        return cls(tuple((oracle.parse(g), int(c)) for g, c in raw))


@dataclass(frozen=True)
class LCLInstance:
    """An ordered finite family of patterns together with its color alphabet.

    The order is fixed and decides first matches. ``origin`` records the
    parameters a fragment was generated from, so it can be regenerated.
    """

    oracle: GroupOracle
    patterns: tuple[Pattern, ...]
    alphabet_size: int
    origin: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "patterns", tuple(self.patterns))
        used = max((max(p.image) for p in self.patterns), default=-1)
        if self.alphabet_size <= used:
            msg = f"alphabet of size {self.alphabet_size} does not cover color {used}"
            raise ValueError(msg)

    @classmethod
    def build(
        cls,
        oracle: GroupOracle,
        patterns: Iterable[Pattern],
        alphabet_size: int | None = None,
        origin: Mapping[str, Any] | None = None,
    ) -> "LCLInstance":
        """Create an instance, deriving the alphabet from the patterns unless given."""
        pats = tuple(patterns)
        if alphabet_size is None:
            alphabet_size = max((max(p.image) for p in pats), default=-1) + 1
        return cls(oracle, pats, alphabet_size, dict(origin or {}))

    @property
    def alphabet(self) -> range:
        return range(self.alphabet_size)

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self.patterns)

    def dump(self) -> dict[str, Any]:
        return {
            "patterns": [p.dump(self.oracle) for p in self.patterns],
            "alphabet": self.alphabet_size,
            "origin": dict(self.origin),
        }

    @classmethod
    def load(cls, oracle: GroupOracle, raw: Mapping[str, Any]) -> "LCLInstance":
        """Inverse of ``dump``; the pattern order is kept."""
        return cls.build(
            oracle,
            [Pattern.load(oracle, p) for p in raw["patterns"]],
            int(raw["alphabet"]),
            raw.get("origin"),
        )


@dataclass(frozen=True, eq=False)
class WindowConfiguration:
    """A total coloring of the points of a space."""

    space: Space
    colors: Mapping[Any, int]

    def __post_init__(self) -> None:
        if len(self.colors) != len(self.space.points) or any(
            x not in self.colors for x in self.space.points
        ):
            msg = "configuration must color exactly the points of its space"
            raise ColoringError(msg)

    @classmethod
    def from_values(cls, space: Space, values: Sequence[int]) -> "WindowConfiguration":
        """Build from colors listed in the space's point order."""
        if len(values) != len(space.points):
            msg = f"expected {len(space.points)} colors, got {len(values)}"
            raise ColoringError(msg)
        return cls(space, dict(zip(space.points, values, strict=True)))

    def __getitem__(self, x: Any) -> int:
        return self.colors[x]

    @property
    def is_empty(self) -> bool:
        return not self.space.points

    def values(self) -> tuple[int, ...]:
        """Colors in the space's point order."""
        return tuple(self.colors[x] for x in self.space.points)

    def dump(self) -> dict[str, Any]:
        return {
            "points": [self.space.dump_point(x) for x in self.space.points],
            "colors": list(self.values()),
        }


@dataclass(frozen=True)
class PiVerdict:
    """Result of checking a coloring against an LCL instance."""

    assignment: PatternAssignment
    failure: Any | None = None
    boundary_skipped: tuple[Any, ...] = ()

    @property
    def ok(self) -> bool:
        return self.failure is None


def pattern_translate(oracle: GroupOracle, gamma: GroupElement, pattern: Pattern) -> Pattern:
    """Return ``gamma P``: domain ``dom(P) gamma^-1`` and ``(gamma P)(d) = P(d gamma)``."""
    gamma_inv = oracle.inv(gamma)
    return Pattern(tuple((oracle.mul(p, gamma_inv), c) for p, c in pattern.entries))


def _targets(space: Space, x: Any, pattern: Pattern) -> list[tuple[Any, int]] | None:
    targets: list[tuple[Any, int]] = []
    for g, color in pattern.entries:
        y = space.act(g, x)
        if y is None:
            return None
        targets.append((y, color))
    return targets


def matches_at(config: WindowConfiguration, x: Any, pattern: Pattern) -> Match:
    """Check ``c(g x) = P(g)`` for all ``g`` in the domain of ``P``.

    Returns ``Match.OUT_OF_WINDOW`` when some ``g x`` leaves the space.
    """
    targets = _targets(config.space, x, pattern)
    if targets is None:
        return Match.OUT_OF_WINDOW
    if all(config.colors[y] == color for y, color in targets):
        return Match.MATCH
    return Match.MISMATCH


def verify_pi_coloring(
    config: WindowConfiguration, lcl: LCLInstance, points: Iterable[Any] | None = None
) -> PiVerdict:
    """Find a matching pattern at every interior point, in canonical point order.

    A point is interior when some pattern's translated domain fits in the
    space; other points are skipped and counted, never failed. With an empty
    instance nothing can match, so every point is interior. The first
    interior point without a match is returned as the failure.

    Parameters
    ----------
    config
        The coloring to check.
    lcl
        The ordered pattern family; the first matching pattern is assigned.
    points
        Restrict the check to these points (all points by default).
    """
    space = config.space
    if points is None:
        checked: Sequence[Any] = space.points
    else:
        wanted = set(points)
        checked = [x for x in space.points if x in wanted]
    assignment: PatternAssignment = {}
    skipped: list[Any] = []
    for x in checked:
        fitting = False
        for index, pattern in enumerate(lcl.patterns):
            targets = _targets(space, x, pattern)
            if targets is None:
                continue
            fitting = True
            if all(config.colors[y] == color for y, color in targets):
                assignment[x] = index
                break
        else:
            if fitting or not lcl.patterns:
                LOGGER.debug("no pattern matches at %r", x)
                return PiVerdict(assignment, x, tuple(skipped))
            skipped.append(x)
    return PiVerdict(assignment, None, tuple(skipped))


def first_match_map(
    config: WindowConfiguration, lcl: LCLInstance, points: Iterable[Any] | None = None
) -> PatternAssignment:
    """Assign to each interior point the first pattern, in list order, matching there.

    Raises
    ------
    ColoringError
        If some interior point has no matching pattern.
    """
    verdict = verify_pi_coloring(config, lcl, points)
    if not verdict.ok:
        msg = f"coloring is not a Pi-coloring: no pattern matches at {verdict.failure!r}"
        raise ColoringError(msg)
    return verdict.assignment


def interaction_support(lcl: LCLInstance) -> frozenset[GroupElement]:
    """All ``g`` for which some translate ``gP`` can overlap some domain ``dom(Q)``."""
    oracle = lcl.oracle
    domain = {g for pattern in lcl.patterns for g in pattern.dom}
    return frozenset(oracle.mul(oracle.inv(q), p) for p in domain for q in domain)


def pi_sn_violations(pattern: Pattern, gen_set: GenSet, n: int | None = None) -> list[str]:
    """Independent check of the Pi_{S,n} membership conditions; empty when satisfied."""
    oracle = gen_set.oracle
    if oracle.identity not in pattern.values:
        return ["identity is not in the domain"]
    problems: list[str] = []
    base = pattern(oracle.identity)
    for g, color in pattern.entries:
        if n is not None and color >= n:
            problems.append(f"color {color} at {g!r} is not below {n}")
        if color == base and any(oracle.mul(s, g) not in pattern.values for s in gen_set):
            problems.append(f"S * {g!r} is not contained in the domain")
    return problems


def pi_sn_generate(
    gen_set: GenSet,
    n: int,
    window: Window,
    *,
    window_limit: int = DEFAULT_PI_SN_WINDOW_LIMIT,
    pattern_limit: int = DEFAULT_PATTERN_LIMIT,
) -> LCLInstance:
    """Enumerate the patterns of Pi_{S,n} whose domain lies in the window.

    Pi_{S,n} is infinite; this returns its window-bounded fragment. A pattern
    is fixed by the color ``c0`` of the identity, the set ``A`` of points
    colored ``c0`` (which needs ``S A`` inside the window), the other colors
    on ``S A \\ A``, and an optional other color on each remaining point.

    Raises
    ------
    SizeLimitError
        If the window or the number of patterns exceeds its limit.
    """
    if n < 1:
        msg = f"number of colors must be positive, got {n}"
        raise ValueError(msg)
    oracle = gen_set.oracle
    identity = oracle.identity
    wset = window.pointset
    if identity not in wset:
        msg = "the pattern window must contain the identity"
        raise ValueError(msg)
    if len(wset) > window_limit:
        msg = f"pattern window has {len(wset)} points, above the limit {window_limit}"
        raise SizeLimitError(msg)
    origin = {
        "construction": "pi_sn",
        "s": gen_set.dump(),
        "n": n,
        "window": [oracle.dump(x) for x in window.points],
    }
    # points that may share the identity's color
    eligible = [x for x in window.points if all(oracle.mul(s, x) in wset for s in gen_set)]
    if identity not in eligible:
        return LCLInstance.build(oracle, [], n, origin)
    others = [x for x in eligible if x != identity]
    if 2 ** len(others) > pattern_limit:
        msg = f"{2 ** len(others)} candidate domains exceed the limit {pattern_limit}"
        raise SizeLimitError(msg)

    patterns: list[Pattern] = []
    subsets = itertools.chain.from_iterable(
        itertools.combinations(others, r) for r in range(len(others) + 1)
    )
    for chosen in subsets:
        same = {identity, *chosen}
        reach = {oracle.mul(s, a) for s in gen_set for a in same}
        required = sorted(reach - same)
        optional = sorted(wset - reach)
        count = n * (n - 1) ** len(required) * n ** len(optional)
        if len(patterns) + count > pattern_limit:
            msg = f"Pi_(S,{n}) fragment exceeds the pattern limit {pattern_limit}"
            raise SizeLimitError(msg)
        for base in range(n):
            rest: list[int | None] = [c for c in range(n) if c != base]
            for required_colors in itertools.product(rest, repeat=len(required)):
                for optional_colors in itertools.product([None, *rest], repeat=len(optional)):
                    mapping: dict[GroupElement, int] = dict.fromkeys(same, base)
                    mapping.update(zip(required, required_colors, strict=True))  # type: ignore[arg-type]
                    mapping.update(
                        (x, c)
                        for x, c in zip(optional, optional_colors, strict=True)
                        if c is not None
                    )
                    patterns.append(Pattern.from_mapping(mapping))
    patterns.sort(key=lambda p: p.entries)
    LOGGER.debug("generated %d patterns of Pi_(S,%d) on %d points", len(patterns), n, len(wset))
    return LCLInstance.build(oracle, patterns, n, origin)


def freeness_lcl(oracle: GroupOracle, gamma: GroupElement) -> LCLInstance:
    """The LCL of injections ``{1, gamma} -> {0, 1, 2}``.

    Raises
    ------
    GroupError
        If ``gamma`` is the identity.
    """
    oracle.check(gamma)
    if gamma == oracle.identity:
        msg = "the freeness LCL needs a non-identity element"
        raise GroupError(msg)
    patterns = [
        Pattern(((oracle.identity, a), (gamma, b)))
        for a, b in itertools.permutations(range(3), 2)
    ]
    origin = {"construction": "freeness", "gamma": oracle.dump(gamma)}
    return LCLInstance.build(oracle, patterns, 3, origin)
