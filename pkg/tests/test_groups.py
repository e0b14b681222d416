"""Tests for group arithmetic, generating sets, and windows."""

import itertools
import random
from collections.abc import Callable

import pytest

from lclwork.exceptions import GroupError, SizeLimitError
from lclwork.groups import (
    DirectProduct,
    FiniteGroup,
    FreeAbelian,
    FreeGroup,
    GenSet,
    GroupOracle,
    Window,
    ball,
    group_arith,
    make_gen_set,
    set_power,
    standard_gen_set,
)


class TestFreeAbelian:
    """Tests for the free abelian groups."""

    def test_arithmetic(self, z2: FreeAbelian) -> None:
        """Test identity, products, and inverses."""
        assert z2.identity == (0, 0)
        assert z2.generators == ((1, 0), (0, 1))
        assert z2.mul((1, 2), (3, -5)) == (4, -3)
        assert z2.inv((1, -2)) == (-1, 2)

    def test_parse_and_dump(self, z: FreeAbelian, z2: FreeAbelian) -> None:
        """Test that Z accepts bare integers and Z^2 accepts pairs."""
        assert z.parse(3) == (3,)
        assert z2.parse([1, -1]) == (1, -1)
        assert z2.dump((1, -1)) == [1, -1]
        with pytest.raises(GroupError):
            z2.parse([1, 2, 3])
        with pytest.raises(GroupError):
            z2.parse("a")

    def test_word_and_length(self, z2: FreeAbelian) -> None:
        """Test that words use signed one-based letters and evaluate back."""
        assert z2.word((2, -1)) == (1, 1, -2)
        assert z2.length((2, -1)) == 3
        assert z2.evaluate(z2.word((2, -1))) == (2, -1)

    def test_invalid_dimension(self) -> None:
        """Test that the dimension must be positive."""
        with pytest.raises(GroupError):
            FreeAbelian(0)

    def test_describe(self, z: FreeAbelian, z2: FreeAbelian) -> None:
        """Test the display names."""
        assert z.describe() == "Z"
        assert z2.describe() == "Z^2"


class TestFreeGroup:
    """Tests for the free groups."""

    def test_free_reduction(self, f2: FreeGroup) -> None:
        """Test that products are freely reduced."""
        assert f2.mul((1, 2), (-2, -1)) == ()
        assert f2.mul((1, 2), (-2, 1)) == (1, 1)
        assert f2.inv((1, -2)) == (2, -1)

    def test_parse_strings(self, f2: FreeGroup) -> None:
        """Test that lower case letters are generators and upper case their inverses."""
        assert f2.parse("ab") == (1, 2)
        assert f2.parse("B") == (-2,)
        assert f2.parse("aA") == ()
        assert f2.parse([1, -1, 2]) == (2,)

    def test_parse_rejects_unknown_letters(self, f2: FreeGroup) -> None:
        """Test that letters beyond the rank are rejected."""
        with pytest.raises(GroupError):
            f2.parse("c")
        with pytest.raises(GroupError):
            f2.parse([3])

    def test_is_element_requires_reduced_words(self, f2: FreeGroup) -> None:
        """Test that unreduced tuples are not canonical elements."""
        assert f2.is_element((1, 2))
        assert not f2.is_element((1, -1))
        assert not f2.is_element([1])

    def test_branch_key_orders_by_length(self, f2: FreeGroup) -> None:
        """Test that shorter words come first in branch order."""
        window = Window.ball(f2, 1)
        assert window.branch_order()[0] == ()
        assert [len(x) for x in Window.ball(f2, 2).branch_order()][:5] == [0, 1, 1, 1, 1]

    def test_power(self, f2: FreeGroup) -> None:
        """Test positive and negative powers."""
        assert f2.power((1,), 3) == (1, 1, 1)
        assert f2.power((1, 2), -1) == (-2, -1)
        assert f2.power((1, 2), 0) == ()


class TestFiniteGroup:
    """Tests for finite groups given by multiplication tables."""

    def test_cyclic(self) -> None:
        """Test the cyclic group of order four."""
        group = FiniteGroup.cyclic(4)
        assert group.order == 4
        assert group.identity == 0
        assert group.inv(1) == 3
        assert group.mul(3, 2) == 1
        assert group.word(3) == (-1,)
        assert group.length(2) == 2
        assert group.describe() == "Z/4"

    def test_table_must_be_square(self) -> None:
        """Test that a non-square table is rejected."""
        with pytest.raises(GroupError, match="square"):
            FiniteGroup(((0, 1),))

    def test_table_entries_in_range(self) -> None:
        """Test that entries outside the element range are rejected."""
        with pytest.raises(GroupError, match="entries"):
            FiniteGroup(((0, 1), (1, 2)))

    def test_table_needs_identity(self) -> None:
        """Test that the right projection, associative but without identity, is rejected."""
        with pytest.raises(GroupError, match="identity"):
            FiniteGroup(((0, 1), (0, 1)))

    def test_table_must_be_associative(self) -> None:
        """Test that a non-associative loop is rejected."""
        table = (
            (0, 1, 2, 3, 4),
            (1, 0, 3, 4, 2),
            (2, 4, 0, 1, 3),
            (3, 2, 4, 0, 1),
            (4, 3, 1, 2, 0),
        )
        with pytest.raises(GroupError, match="associative"):
            FiniteGroup(table)

    def test_greedy_generators(self) -> None:
        """Test that generators are chosen greedily when none are given."""
        table = tuple(tuple((a + b) % 6 for b in range(6)) for a in range(6))
        group = FiniteGroup(table)
        assert group.generators == (1,)
        assert group.closure([2]) == frozenset({0, 2, 4})


class TestDirectProduct:
    """Tests for direct products."""

    def test_componentwise(self, z: FreeAbelian) -> None:
        """Test that arithmetic is componentwise and generators are concatenated."""
        group = DirectProduct(z, FiniteGroup.cyclic(2))
        assert group.identity == ((0,), 0)
        assert group.generators == (((1,), 0), ((0,), 1))
        assert group.mul(((1,), 1), ((2,), 1)) == ((3,), 0)
        assert group.parse([[2], 1]) == ((2,), 1)
        assert group.word(((2,), 1)) == (1, 1, 2)
        assert group.describe() == "(Z x Z/2)"

    def test_parse_requires_pairs(self, z: FreeAbelian) -> None:
        """Test that product elements must be pairs."""
        group = DirectProduct(z, z)
        with pytest.raises(GroupError):
            group.parse([1])


class TestGenSet:
    """Tests for generating sets and set powers."""

    def test_make_gen_set_closes_under_inverses(self, z: FreeAbelian) -> None:
        """Test that the identity and inverses are added."""
        gen_set = make_gen_set(z, [(2,)])
        assert gen_set.elements == ((-2,), (0,), (2,))
        assert gen_set.dump() == [[-2], [0], [2]]

    def test_gen_set_validation(self, z: FreeAbelian) -> None:
        """Test that a set must contain the identity and be symmetric."""
        with pytest.raises(GroupError, match="identity"):
            GenSet(z, ((-1,), (1,)))
        with pytest.raises(GroupError, match="inversion"):
            GenSet(z, ((0,), (1,)))
        with pytest.raises(GroupError, match="canonical"):
            GenSet(z, ((1,), (0,), (-1,)))

    def test_ball_sizes(self, z: FreeAbelian, z2: FreeAbelian, f2: FreeGroup) -> None:
        """Test the sizes of word-metric balls."""
        assert len(ball(z, 2)) == 5
        assert len(ball(z2, 1)) == 5
        assert len(ball(z2, 2)) == 13
        assert len(ball(f2, 2)) == 17
        assert len(ball(f2, 6)) == 1457

    def test_set_power(self, z: FreeAbelian) -> None:
        """Test that S^k is the radius k ball for the standard set and S^0 is trivial."""
        gen_set = standard_gen_set(z)
        assert set_power(gen_set, 0) == frozenset({(0,)})
        assert set_power(gen_set, 3) == frozenset((i,) for i in range(-3, 4))

    def test_set_power_fixpoint(self) -> None:
        """Test that set powers stop growing in a finite group."""
        group = FiniteGroup.cyclic(3)
        assert set_power(standard_gen_set(group), 10) == frozenset({0, 1, 2})

    def test_set_power_limit(self, z: FreeAbelian) -> None:
        """Test that the element limit is enforced."""
        with pytest.raises(SizeLimitError):
            set_power(standard_gen_set(z), 2, limit=3)

    def test_negative_exponent(self, z: FreeAbelian) -> None:
        """Test that negative exponents are rejected."""
        with pytest.raises(ValueError, match="non-negative"):
            set_power(standard_gen_set(z), -1)


class TestWindow:
    """Tests for windows of the group."""

    def test_box(self, z2: FreeAbelian) -> None:
        """Test the box window and its partial action."""
        window = Window.box(z2, 2)
        assert window.points == ((0, 0), (0, 1), (1, 0), (1, 1))
        assert window.act((1, 0), (0, 1)) == (1, 1)
        assert window.act((1, 0), (1, 1)) is None
        assert (1, 1) in window
        assert (2, 0) not in window

    def test_box_with_start(self, z: FreeAbelian) -> None:
        """Test a box that does not start at the origin."""
        assert Window.box(z, 3, start=-1).points == ((-1,), (0,), (1,))

    def test_box_needs_free_abelian(self, f2: FreeGroup) -> None:
        """Test that boxes are only defined for free abelian groups."""
        with pytest.raises(GroupError):
            Window.box(f2, 2)

    def test_whole_needs_finite_group(self, z: FreeAbelian) -> None:
        """Test that whole-group windows need a finite group."""
        assert Window.whole(FiniteGroup.cyclic(3)).points == (0, 1, 2)
        with pytest.raises(GroupError):
            Window.whole(z)

    def test_points_are_canonical(self, z: FreeAbelian) -> None:
        """Test that points are deduplicated and sorted."""
        window = Window.of(z, [(2,), (0,), (2,)])
        assert window.points == ((0,), (2,))
        assert window.dump_point((2,)) == [2]

    def test_rejects_non_elements(self, z2: FreeAbelian) -> None:
        """Test that every point must be a group element."""
        with pytest.raises(GroupError):
            Window.of(z2, [(1,)])


class TestGroupArith:
    """Tests for group_arith."""

    def test_operations(self, z: FreeAbelian) -> None:
        """Test each supported operation."""
        assert group_arith(z, "id") == (0,)
        assert group_arith(z, "inv", (2,)) == (-2,)
        assert group_arith(z, "mul", (1,), (2,), (3,)) == (6,)

    def test_validates_arguments(self, z: FreeAbelian) -> None:
        """Test that arguments must be elements."""
        with pytest.raises(GroupError):
            group_arith(z, "inv", (1, 2))

    def test_letter_validation(self, z: FreeAbelian) -> None:
        """Test that letter zero and letters beyond the rank are rejected."""
        assert z.letter(-1) == (-1,)
        with pytest.raises(GroupError):
            z.letter(0)
        with pytest.raises(GroupError):
            z.letter(2)


def _symmetric_group_3() -> FiniteGroup:
    # composition (a b)(i) = a(b(i)); index 0 is the identity permutation
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = tuple(
        tuple(index[tuple(a[b[i]] for i in range(3))] for b in perms) for a in perms
    )
    return FiniteGroup(table, name="S3")


#: Groups of every family, including nonabelian ones.
GROUPS: dict[str, Callable[[], GroupOracle]] = {
    "Z^2": lambda: FreeAbelian(2),
    "F_2": lambda: FreeGroup(2),
    "Z/5": lambda: FiniteGroup.cyclic(5),
    "S3": _symmetric_group_3,
    "F_2 x S3": lambda: DirectProduct(FreeGroup(2), _symmetric_group_3()),
}


class TestGroupLaws:
    """Randomized checks of the group axioms for every family."""

    @pytest.mark.parametrize("name", sorted(GROUPS))
    def test_axioms_on_random_triples(self, name: str) -> None:
        """Test associativity, identity, and inverses on 1000 random triples."""
        group = GROUPS[name]()
        elements = Window.ball(group, 3).points
        rng = random.Random(name)
        identity = group.identity
        for _ in range(1000):
            x, y, z = (rng.choice(elements) for _ in range(3))
            assert group.mul(group.mul(x, y), z) == group.mul(x, group.mul(y, z))
            assert group.mul(x, group.inv(x)) == identity
            assert group.mul(group.inv(x), x) == identity
            assert group.mul(identity, x) == x
            assert group.mul(x, identity) == x
            assert group.is_element(group.mul(x, y))

    @pytest.mark.parametrize("name", sorted(GROUPS))
    def test_words_evaluate_back(self, name: str) -> None:
        """Test that every ball element is the product of its word."""
        group = GROUPS[name]()
        for x in Window.ball(group, 2).points:
            assert group.evaluate(group.word(x)) == x

    def test_symmetric_group_is_nonabelian(self) -> None:
        """Test that the table built for S3 really is a nonabelian group of order six."""
        group = _symmetric_group_3()
        assert group.order == 6
        assert any(group.mul(a, b) != group.mul(b, a) for a in range(6) for b in range(6))


class TestSetPowerLaws:
    """Tests for the growth and product laws of set powers."""

    @pytest.mark.parametrize("name", sorted(GROUPS))
    def test_powers_are_nested(self, name: str) -> None:
        """Test that S^j is contained in S^(j+1)."""
        gen_set = standard_gen_set(GROUPS[name]())
        powers = [set_power(gen_set, j) for j in range(4)]
        for smaller, larger in itertools.pairwise(powers):
            assert smaller <= larger

    @pytest.mark.parametrize("name", sorted(GROUPS))
    def test_product_of_powers(self, name: str) -> None:
        """Test that S^a S^b equals S^(a+b)."""
        group = GROUPS[name]()
        gen_set = standard_gen_set(group)
        for a, b in [(0, 2), (1, 1), (1, 2), (2, 1)]:
            left = set_power(gen_set, a)
            right = set_power(gen_set, b)
            product = {group.mul(x, y) for x in left for y in right}
            assert product == set_power(gen_set, a + b)

    def test_non_standard_set(self, f2: FreeGroup) -> None:
        """Test the laws for a set that is not the standard ball."""
        gen_set = make_gen_set(f2, [(1, 2), (2,)])
        s2 = set_power(gen_set, 2)
        assert set_power(gen_set, 1) <= s2
        assert {f2.mul(x, y) for x in gen_set for y in gen_set} == s2
