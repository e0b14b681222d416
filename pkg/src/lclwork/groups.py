"""Decidable group arithmetic, generating sets, and windows.

Elements are plain hashable canonical forms, so equality is structural
equality and Python's natural ordering is the canonical order:

- free abelian group ``Z^d``: a tuple of ``d`` integers;
- free group ``F_m``: a reduced tuple of nonzero letters, ``+i`` for the
  generator ``i`` and ``-i`` for its inverse;
- finite group: an index into the multiplication table;
- direct product: a pair of component elements.
"""

import functools
import itertools
import logging
from abc import ABC, abstractmethod
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, ClassVar, Literal, Protocol

import numpy as np

from lclwork.exceptions import GroupError, SizeLimitError

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Default element-count limit of ``set_power``.
DEFAULT_SET_POWER_LIMIT = 10**6

type GroupElement = int | tuple[Any, ...]


class GroupOracle(ABC):
    """Decidable arithmetic for one supported group family."""

    #: Family tag used in configurations and certificates.
    family: ClassVar[str]

    @property
    @abstractmethod
    def identity(self) -> GroupElement:
        """The neutral element."""

    @property
    @abstractmethod
    def generators(self) -> tuple[GroupElement, ...]:
        """The standard generators, in letter order."""

    @abstractmethod
    def mul(self, a: GroupElement, b: GroupElement) -> GroupElement:
        """Return the product ``ab`` in canonical form."""

    @abstractmethod
    def inv(self, a: GroupElement) -> GroupElement:
        """Return the inverse of ``a`` in canonical form."""

    @abstractmethod
    def is_element(self, x: object) -> bool:
        """Whether ``x`` is a canonical element of this group."""

    @abstractmethod
    def parse(self, raw: Any) -> GroupElement:
        """Convert a JSON value into a canonical element."""

    @abstractmethod
    def dump(self, x: GroupElement) -> Any:
        """Convert a canonical element into a JSON value."""

    @abstractmethod
    def word(self, x: GroupElement) -> tuple[int, ...]:
        """Return a word in generator letters whose product is ``x``."""

    @abstractmethod
    def describe(self) -> str:
        """Short human-readable name of the group."""

    def length(self, x: GroupElement) -> int:
        """Word length of ``x`` with respect to the standard generators."""
        return len(self.word(x))

    def branch_key(self, x: GroupElement) -> Any:
        """Sort key for search branch order; defaults to the canonical order."""
        return x

    def check(self, x: object) -> GroupElement:
        """Return ``x`` unchanged if it is an element, raise ``GroupError`` otherwise."""
        if not self.is_element(x):
            msg = f"{x!r} is not an element of {self.describe()}"
            raise GroupError(msg)
        return x  # type: ignore[return-value]

    def letter(self, letter: int) -> GroupElement:
        """The element denoted by a single generator letter."""
        if letter == 0 or abs(letter) > len(self.generators):
            msg = f"invalid generator letter {letter} for {self.describe()}"
            raise GroupError(msg)
        gen = self.generators[abs(letter) - 1]
        return gen if letter > 0 else self.inv(gen)

    def evaluate(self, word: Iterable[int]) -> GroupElement:
        """Multiply out a word of generator letters."""
        result = self.identity
        for letter in word:
            result = self.mul(result, self.letter(letter))
        return result

    def power(self, x: GroupElement, n: int) -> GroupElement:
        """Return ``x**n`` for any integer ``n``."""
        if n < 0:
            return self.power(self.inv(x), -n)
        result = self.identity
        for _ in range(n):
            result = self.mul(result, x)
        return result


def _is_int(x: object) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class FreeAbelian(GroupOracle):
    """The free abelian group ``Z^dim`` with the standard basis as generators."""

    family: ClassVar[str] = "free_abelian"

    dim: int

    def __post_init__(self) -> None:
        if self.dim < 1:
            msg = f"free abelian dimension must be positive, got {self.dim}"
            raise GroupError(msg)

    @cached_property
    def identity(self) -> tuple[int, ...]:
        return (0,) * self.dim

    @cached_property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim))

    def mul(self, a: GroupElement, b: GroupElement) -> tuple[int, ...]:
        assert isinstance(a, tuple) and isinstance(b, tuple)
        return tuple(x + y for x, y in zip(a, b, strict=True))

    def inv(self, a: GroupElement) -> tuple[int, ...]:
        assert isinstance(a, tuple)
        return tuple(-x for x in a)

    def is_element(self, x: object) -> bool:
        return isinstance(x, tuple) and len(x) == self.dim and all(_is_int(v) for v in x)

    def parse(self, raw: Any) -> tuple[int, ...]:
        if _is_int(raw) and self.dim == 1:
            return (raw,)
        if isinstance(raw, list | tuple):
            value = tuple(raw)
            self.check(value)
            return value
        msg = f"cannot read {raw!r} as an element of {self.describe()}"
        raise GroupError(msg)

    def dump(self, x: GroupElement) -> list[int]:
        assert isinstance(x, tuple)
        return list(x)

    def word(self, x: GroupElement) -> tuple[int, ...]:
        assert isinstance(x, tuple)
        letters: list[int] = []
        for i, coord in enumerate(x):
            sign = 1 if coord > 0 else -1
            letters.extend([sign * (i + 1)] * abs(coord))
        return tuple(letters)

    def length(self, x: GroupElement) -> int:
        assert isinstance(x, tuple)
        return sum(abs(v) for v in x)

    def describe(self) -> str:
        return "Z" if self.dim == 1 else f"Z^{self.dim}"


@dataclass(frozen=True)
class FreeGroup(GroupOracle):
    """The free group of the given rank on generators ``a, b, c, ...``."""

    family: ClassVar[str] = "free_group"

    rank: int

    def __post_init__(self) -> None:
        if not 1 <= self.rank <= 26:
            msg = f"free group rank must be in 1..26, got {self.rank}"
            raise GroupError(msg)

    @property
    def identity(self) -> tuple[int, ...]:
        return ()

    @cached_property
    def generators(self) -> tuple[tuple[int, ...], ...]:
        return tuple((i,) for i in range(1, self.rank + 1))

    def mul(self, a: GroupElement, b: GroupElement) -> tuple[int, ...]:
        assert isinstance(a, tuple) and isinstance(b, tuple)
        word = list(a)
        for letter in b:
            if word and word[-1] == -letter:
                word.pop()
            else:
                word.append(letter)
        return tuple(word)

    def inv(self, a: GroupElement) -> tuple[int, ...]:
        assert isinstance(a, tuple)
        return tuple(-letter for letter in reversed(a))

    def is_element(self, x: object) -> bool:
        if not isinstance(x, tuple):
            return False
        if not all(_is_int(v) and v != 0 and abs(v) <= self.rank for v in x):
            return False
        return all(x[i] != -x[i + 1] for i in range(len(x) - 1))

    def parse(self, raw: Any) -> tuple[int, ...]:
        letters: list[int]
        if isinstance(raw, str):
            letters = []
            for char in raw.replace(" ", ""):
                if not char.isalpha() or not char.isascii():
                    msg = f"invalid letter {char!r} in {raw!r}"
                    raise GroupError(msg)
                index = ord(char.lower()) - ord("a") + 1
                letters.append(index if char.islower() else -index)
        elif isinstance(raw, list | tuple):
            letters = list(raw)
        else:
            msg = f"cannot read {raw!r} as an element of {self.describe()}"
            raise GroupError(msg)
        for letter in letters:
            if not _is_int(letter) or letter == 0 or abs(letter) > self.rank:
                msg = f"invalid letter {letter!r} for {self.describe()}"
                raise GroupError(msg)
        return self.mul((), tuple(letters))

    def dump(self, x: GroupElement) -> list[int]:
        assert isinstance(x, tuple)
        return list(x)

    def word(self, x: GroupElement) -> tuple[int, ...]:
        assert isinstance(x, tuple)
        return x

    def branch_key(self, x: GroupElement) -> Any:
        assert isinstance(x, tuple)
        return (len(x), x)

    def describe(self) -> str:
        return f"F_{self.rank}"


@dataclass(frozen=True)
class FiniteGroup(GroupOracle):
    """A finite group given by its multiplication table.

    The table is validated at construction: it must be square with entries in
    range, associative, have a two-sided identity, and inverses.
    """

    family: ClassVar[str] = "finite"

    table: tuple[tuple[int, ...], ...]
    generator_indices: tuple[int, ...] = ()
    name: str = field(default="", compare=False)
    _identity: int = field(init=False, default=0, repr=False, compare=False)
    _inverses: tuple[int, ...] = field(init=False, default=(), repr=False, compare=False)

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.table)
        object.__setattr__(self, "table", rows)
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[0] != arr.shape[1]:
            msg = "multiplication table must be a non-empty square array"
            raise GroupError(msg)
        order = arr.shape[0]
        if arr.min() < 0 or arr.max() >= order:
            msg = f"multiplication table entries must lie in 0..{order - 1}"
            raise GroupError(msg)
        idx = np.arange(order)
        if not np.array_equal(arr[arr], arr[idx[:, None, None], arr[None, :, :]]):
            msg = "multiplication table is not associative"
            raise GroupError(msg)
        left_neutral = (arr == idx[None, :]).all(axis=1)
        right_neutral = (arr == idx[:, None]).all(axis=0)
        neutral = np.flatnonzero(left_neutral & right_neutral)
        if neutral.size == 0:
            msg = "multiplication table has no identity"
            raise GroupError(msg)
        identity = int(neutral[0])
        has_inverse = arr == identity
        if not has_inverse.any(axis=1).all():
            msg = "multiplication table has elements without inverses"
            raise GroupError(msg)
        object.__setattr__(self, "_identity", identity)
        object.__setattr__(
            self, "_inverses", tuple(int(np.argmax(row)) for row in has_inverse)
        )
        gens = tuple(int(g) for g in self.generator_indices)
        for g in gens:
            if not 0 <= g < order:
                msg = f"generator index {g} out of range"
                raise GroupError(msg)
        if not gens:
            gens = self._greedy_generators()
        object.__setattr__(self, "generator_indices", gens)

    @classmethod
    def cyclic(cls, order: int) -> "FiniteGroup":
        """The cyclic group ``Z/order`` generated by ``1``."""
        if order < 1:
            msg = f"cyclic group order must be positive, got {order}"
            raise GroupError(msg)
        table = tuple(tuple((a + b) % order for b in range(order)) for a in range(order))
        return cls(table, (1,) if order > 1 else (), name=f"Z/{order}")

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def identity(self) -> int:
        return self._identity

    @property
    def generators(self) -> tuple[int, ...]:
        return self.generator_indices

    def mul(self, a: GroupElement, b: GroupElement) -> int:
        assert isinstance(a, int) and isinstance(b, int)
        return self.table[a][b]

    def inv(self, a: GroupElement) -> int:
        assert isinstance(a, int)
        return self._inverses[a]

    def is_element(self, x: object) -> bool:
        return _is_int(x) and 0 <= x < self.order  # type: ignore[operator]

    def parse(self, raw: Any) -> int:
        return self.check(raw)  # type: ignore[return-value]

    def dump(self, x: GroupElement) -> int:
        assert isinstance(x, int)
        return x

    def closure(self, elems: Iterable[int]) -> frozenset[int]:
        """The subgroup generated by ``elems``."""
        seen = {self.identity}
        gens = list(elems)
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in gens:
                h = self.mul(g, s)
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return frozenset(seen)

    def _greedy_generators(self) -> tuple[int, ...]:
        gens: list[int] = []
        generated = self.closure(gens)
        for g in range(self.order):
            if g not in generated:
                gens.append(g)
                generated = self.closure(gens)
        return tuple(gens)

    @cached_property
    def _words(self) -> dict[int, tuple[int, ...]]:
        words: dict[int, tuple[int, ...]] = {self.identity: ()}
        queue = deque([self.identity])
        letters = [s for i in range(1, len(self.generators) + 1) for s in (i, -i)]
        while queue:
            g = queue.popleft()
            for letter in letters:
                h = self.mul(g, self.letter(letter))
                if h not in words:
                    words[h] = (*words[g], letter)
                    queue.append(h)
        return words

    def word(self, x: GroupElement) -> tuple[int, ...]:
        assert isinstance(x, int)
        try:
            return self._words[x]
        except KeyError:
            msg = f"element {x} is not in the subgroup generated by {self.generators}"
            raise GroupError(msg) from None

    def describe(self) -> str:
        return self.name or f"finite({self.order})"


@dataclass(frozen=True)
class DirectProduct(GroupOracle):
    """The direct product of two supported groups, elements are pairs."""

    family: ClassVar[str] = "product"

    left: GroupOracle
    right: GroupOracle

    @cached_property
    def identity(self) -> tuple[Any, ...]:
        return (self.left.identity, self.right.identity)

    @cached_property
    def generators(self) -> tuple[tuple[Any, ...], ...]:
        lefts = tuple((g, self.right.identity) for g in self.left.generators)
        rights = tuple((self.left.identity, h) for h in self.right.generators)
        return lefts + rights

    def mul(self, a: GroupElement, b: GroupElement) -> tuple[Any, ...]:
        assert isinstance(a, tuple) and isinstance(b, tuple)
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a: GroupElement) -> tuple[Any, ...]:
        assert isinstance(a, tuple)
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def is_element(self, x: object) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and self.left.is_element(x[0])
            and self.right.is_element(x[1])
        )

    def parse(self, raw: Any) -> tuple[Any, ...]:
        if not isinstance(raw, list | tuple) or len(raw) != 2:
            msg = f"product elements are pairs, got {raw!r}"
            raise GroupError(msg)
        return (self.left.parse(raw[0]), self.right.parse(raw[1]))

    def dump(self, x: GroupElement) -> list[Any]:
        assert isinstance(x, tuple)
        return [self.left.dump(x[0]), self.right.dump(x[1])]

    def word(self, x: GroupElement) -> tuple[int, ...]:
        assert isinstance(x, tuple)
        shift = len(self.left.generators)
        rights = tuple(
            letter + shift if letter > 0 else letter - shift for letter in self.right.word(x[1])
        )
        return self.left.word(x[0]) + rights

    def length(self, x: GroupElement) -> int:
        assert isinstance(x, tuple)
        return self.left.length(x[0]) + self.right.length(x[1])

    def branch_key(self, x: GroupElement) -> Any:
        assert isinstance(x, tuple)
        return (self.length(x), self.left.branch_key(x[0]), self.right.branch_key(x[1]))

    def describe(self) -> str:
        return f"({self.left.describe()} x {self.right.describe()})"


@dataclass(frozen=True)
class GenSet:
    """A finite symmetric subset of the group containing the identity."""

    oracle: GroupOracle
    elements: tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        if list(self.elements) != sorted(set(self.elements)):
            msg = "generating set elements must be unique and in canonical order"
            raise GroupError(msg)
        members = set(self.elements)
        if self.oracle.identity not in members:
            msg = "generating set must contain the identity"
            raise GroupError(msg)
        for s in self.elements:
            if self.oracle.inv(s) not in members:
                msg = f"generating set is not closed under inversion: {s!r}"
                raise GroupError(msg)

    @cached_property
    def members(self) -> frozenset[GroupElement]:
        return frozenset(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.members

    def dump(self) -> list[Any]:
        """JSON form of the elements, in canonical order."""
        return [self.oracle.dump(s) for s in self.elements]


def make_gen_set(oracle: GroupOracle, elems: Iterable[Any]) -> GenSet:
    """Return the smallest generating set containing ``elems``.

    Adds the identity and all inverses, deduplicates, and sorts canonically.

    Raises
    ------
    GroupError
        If an element is not expressible in the oracle's family.
    """
    members: set[GroupElement] = {oracle.identity}
    for x in elems:
        oracle.check(x)
        members.add(x)
        members.add(oracle.inv(x))
    return GenSet(oracle, tuple(sorted(members)))


def standard_gen_set(oracle: GroupOracle) -> GenSet:
    """Generators, their inverses, and the identity."""
    return make_gen_set(oracle, oracle.generators)


def subgroup_gen_set(oracle: GroupOracle, sub_generators: Iterable[Any]) -> GenSet:
    """Generating set over the ambient group for the subgroup generated by ``sub_generators``.

    Every operation accepting a ``GenSet`` accepts the result, which is how the
    restriction of an action to the subgroup is read at window scale.
    """
    return make_gen_set(oracle, sub_generators)


def set_power(
    gen_set: GenSet, k: int, *, limit: int = DEFAULT_SET_POWER_LIMIT
) -> frozenset[GroupElement]:
    """Return ``S^k``, the set of all products of ``k`` elements of ``S``.

    ``S^0`` is the identity alone. Iteration stops early at a fixpoint.

    Raises
    ------
    SizeLimitError
        If the set grows beyond ``limit`` elements.
    """
    if k < 0:
        msg = f"set power exponent must be non-negative, got {k}"
        raise ValueError(msg)
    oracle = gen_set.oracle
    current: frozenset[GroupElement] = frozenset([oracle.identity])
    for step in range(k):
        grown = frozenset(oracle.mul(s, x) for s in gen_set for x in current)
        if len(grown) > limit:
            msg = f"S^{step + 1} has {len(grown)} elements, above the limit {limit}"
            raise SizeLimitError(msg)
        if grown == current:
            LOGGER.debug("set power reached its fixpoint after %d steps", step)
            break
        current = grown
    return current


def ball(oracle: GroupOracle, radius: int, *, limit: int = DEFAULT_SET_POWER_LIMIT) -> GenSet:
    """The ball of the given radius in the word metric, as a generating set."""
    return GenSet(
        oracle, tuple(sorted(set_power(standard_gen_set(oracle), radius, limit=limit)))
    )


def group_arith(
    oracle: GroupOracle, op: Literal["mul", "inv", "id"], *args: GroupElement
) -> GroupElement:
    """Dispatch a single arithmetic operation, validating its arguments."""
    for arg in args:
        oracle.check(arg)
    match op:
        case "id":
            return oracle.identity
        case "inv":
            (x,) = args
            return oracle.inv(x)
        case "mul":
            return functools.reduce(oracle.mul, args, oracle.identity)
        case _:
            msg = f"unknown group operation {op!r}"
            raise ValueError(msg)


class Space(Protocol):
    """A finite set of points acted on by a group, possibly partially."""

    @property
    def oracle(self) -> GroupOracle: ...

    @property
    def points(self) -> tuple[Any, ...]: ...

    def act(self, g: GroupElement, x: Any) -> Any | None:
        """Return ``g . x``, or ``None`` when it leaves the space."""
        ...

    def dump_point(self, x: Any) -> Any: ...

    def __contains__(self, x: object) -> bool: ...


@dataclass(frozen=True)
class Window:
    """A finite set of group elements acted on by left multiplication.

    Points are kept unique and in canonical order. The action is free by
    construction; results falling outside the window are reported as ``None``.
    """

    oracle: GroupOracle
    points: tuple[Any, ...]

    def __post_init__(self) -> None:
        for x in self.points:
            self.oracle.check(x)
        object.__setattr__(self, "points", tuple(sorted(set(self.points))))

    @classmethod
    def of(cls, oracle: GroupOracle, points: Iterable[GroupElement]) -> "Window":
        """A window of arbitrary elements; duplicates are dropped."""
        return cls(oracle, tuple(points))

    @classmethod
    def box(cls, oracle: GroupOracle, size: int, *, start: int = 0) -> "Window":
        """The box ``[start, start + size)^d`` of a free abelian group."""
        if not isinstance(oracle, FreeAbelian):
            msg = f"box windows need a free abelian group, not {oracle.describe()}"
            raise GroupError(msg)
        if size < 0:
            msg = f"box size must be non-negative, got {size}"
            raise GroupError(msg)
        axis = range(start, start + size)
        return cls(oracle, tuple(itertools.product(axis, repeat=oracle.dim)))

    @classmethod
    def ball(
        cls, oracle: GroupOracle, radius: int, *, limit: int = DEFAULT_SET_POWER_LIMIT
    ) -> "Window":
        """The word-metric ball of the given radius around the identity."""
        return cls(oracle, ball(oracle, radius, limit=limit).elements)

    @classmethod
    def whole(cls, oracle: GroupOracle) -> "Window":
        """All elements of a finite group."""
        if not isinstance(oracle, FiniteGroup):
            msg = f"whole-group windows need a finite group, not {oracle.describe()}"
            raise GroupError(msg)
        return cls(oracle, tuple(range(oracle.order)))

    @cached_property
    def pointset(self) -> frozenset[Any]:
        return frozenset(self.points)

    def __contains__(self, x: object) -> bool:
        return x in self.pointset

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.points)

    def act(self, g: GroupElement, x: Any) -> Any | None:
        y = self.oracle.mul(g, x)
        return y if y in self.pointset else None

    def dump_point(self, x: Any) -> Any:
        return self.oracle.dump(x)

    def branch_order(self) -> tuple[Any, ...]:
        """Points in search branch order (row-major, or by word length)."""
        return tuple(sorted(self.points, key=self.oracle.branch_key))
