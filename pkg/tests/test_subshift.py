"""Tests for window subshifts, shifts, extensions, and pullbacks."""

import itertools
import logging
import random
from typing import Any

import pytest

from lclwork.exceptions import ColoringError, FreenessError
from lclwork.gamma_graph import FiniteAction
from lclwork.groups import FreeAbelian, FreeGroup, GroupOracle, Window
from lclwork.lcl import (
    LCLInstance,
    Pattern,
    WindowConfiguration,
    freeness_lcl,
    verify_pi_coloring,
)
from lclwork.subshift import (
    WindowedSubshift,
    canonical_coloring,
    enumerate_window_configs,
    enumeration_report,
    extension_check,
    pullback_group_coloring,
    shift_config,
)


class TestEnumeration:
    """Tests for WindowedSubshift and enumerate_window_configs."""

    def test_proper_coloring(self, z: FreeAbelian, proper_two_coloring: LCLInstance) -> None:
        """Test that both alternating colorings are listed in lexicographic order."""
        configs, truncated = enumerate_window_configs(proper_two_coloring, Window.box(z, 4))
        assert [list(c.values()) for c in configs] == [[0, 1, 0, 1], [1, 0, 1, 0]]
        assert not truncated

    def test_truncation(
        self,
        z: FreeAbelian,
        proper_two_coloring: LCLInstance,
        caplog: pytest.LogCaptureFixture,
    ) -> None:
        """Test that hitting the limit is reported."""
        with caplog.at_level(logging.WARNING):
            configs, truncated = enumerate_window_configs(
                proper_two_coloring, Window.box(z, 4), limit=1
            )
        assert len(configs) == 1
        assert truncated
        assert "truncated at 1" in caplog.text

    def test_empty_instance(self, z: FreeAbelian) -> None:
        """Test that an instance without patterns has no valid configuration."""
        lcl = LCLInstance.build(z, [], 1)
        assert enumerate_window_configs(lcl, Window.box(z, 2)) == ([], False)

    def test_fixed_points(self, z: FreeAbelian, proper_two_coloring: LCLInstance) -> None:
        """Test that fixed colors are respected."""
        subshift = WindowedSubshift(proper_two_coloring, Window.box(z, 3), {(2,): 0})
        config = subshift.first()
        assert config is not None
        assert list(config.values()) == [0, 1, 0]
        assert subshift.interior == ((0,), (1,))

    def test_report(self, z: FreeAbelian, proper_two_coloring: LCLInstance) -> None:
        """Test the certificate form of an enumeration."""
        report = enumeration_report(proper_two_coloring, Window.box(z, 4))
        assert report.points == [[0], [1], [2], [3]]
        assert report.interior == [[0], [1], [2]]
        assert report.count == 2
        assert not report.truncated


class TestFreenessColorings:
    """Tests for the freeness LCL on finite actions."""

    def test_trivial_action_has_no_coloring(self, z: FreeAbelian) -> None:
        """Test that a fixed point cannot be colored differently from itself."""
        lcl = freeness_lcl(z, (1,))
        assert WindowedSubshift(lcl, FiniteAction.trivial(z, 3)).first() is None

    def test_rotation_is_colorable(self, z: FreeAbelian) -> None:
        """Test that a rotation of three points has a coloring."""
        lcl = freeness_lcl(z, (1,))
        config = WindowedSubshift(lcl, FiniteAction.rotation(z, 3)).first()
        assert config is not None
        assert list(config.values()) == [0, 1, 2]


class TestExtensionCheck:
    """Tests for extension_check."""

    def test_counts(self, z: FreeAbelian) -> None:
        """Test a window with one extendable and one non-extendable configuration."""
        lcl = LCLInstance.build(z, [Pattern((((0,), 0), ((1,), 1)))])
        report = extension_check(lcl, Window.box(z, 1), Window.box(z, 2))
        assert report.window_size == 1
        assert report.extension_size == 2
        assert report.checked == 2
        assert report.extendable == 1
        assert report.non_extendable == 1
        assert report.first_non_extendable == [1]

    def test_larger_must_contain_window(
        self, z: FreeAbelian, proper_two_coloring: LCLInstance
    ) -> None:
        """Test that the extension window must contain the window."""
        with pytest.raises(ValueError, match="contain"):
            extension_check(proper_two_coloring, Window.box(z, 3), Window.box(z, 3, start=1))


class TestShiftAndCanonical:
    """Tests for shift_config and canonical_coloring."""

    def test_shift(self, z: FreeAbelian) -> None:
        """Test that shifting truncates the domain to the points staying inside."""
        config = WindowConfiguration.from_values(Window.box(z, 3), [0, 1, 2])
        shifted = shift_config((1,), config)
        assert shifted.space.points == ((0,), (1,))
        assert list(shifted.values()) == [1, 2]

    def test_shift_out_of_window(self, z: FreeAbelian) -> None:
        """Test that a large shift leaves the empty configuration."""
        config = WindowConfiguration.from_values(Window.box(z, 3), [0, 1, 2])
        assert shift_config((5,), config).is_empty

    def test_canonical_coloring(self, z: FreeAbelian) -> None:
        """Test that the canonical coloring reads the identity."""
        config = WindowConfiguration.from_values(Window.box(z, 3, start=-1), [5, 6, 7])
        assert canonical_coloring(config) == 6
        assert canonical_coloring(shift_config((1,), config)) == 7
        with pytest.raises(ColoringError, match="identity"):
            canonical_coloring(WindowConfiguration.from_values(Window.box(z, 2, start=1), [0, 1]))


class TestPullback:
    """Tests for pullback_group_coloring."""

    def test_rotation(self, z: FreeAbelian) -> None:
        """Test the pullback of a rotation to the radius one ball."""
        action = FiniteAction.rotation(z, 3)
        config = WindowConfiguration(action, {0: 0, 1: 1, 2: 2})
        pulled = pullback_group_coloring(config, 0, Window.ball(z, 1), freeness_lcl(z, (1,)))
        assert dict(pulled.colors) == {(-1,): 2, (0,): 0, (1,): 1}

    def test_orbit_not_free_on_ball(self, z: FreeAbelian) -> None:
        """Test that a ball wrapping around the orbit is rejected."""
        action = FiniteAction.rotation(z, 3)
        config = WindowConfiguration(action, {0: 0, 1: 1, 2: 2})
        with pytest.raises(FreenessError):
            pullback_group_coloring(config, 0, Window.ball(z, 2))

    def test_fixed_point(self, z: FreeAbelian) -> None:
        """Test that a fixed point is never free."""
        config = WindowConfiguration(FiniteAction.trivial(z, 1), {0: 0})
        with pytest.raises(FreenessError):
            pullback_group_coloring(config, 0, Window.ball(z, 1))

    def test_basepoint_leaving_window(self, z: FreeAbelian) -> None:
        """Test that the basepoint must stay in the space."""
        config = WindowConfiguration.from_values(Window.box(z, 2), [0, 1])
        with pytest.raises(ColoringError, match="out of the space"):
            pullback_group_coloring(config, (0,), Window.ball(z, 1))


def _random_lcl(
    oracle: GroupOracle, support: tuple[Any, ...], alphabet: int, seed: int
) -> LCLInstance:
    rng = random.Random(seed)
    patterns = []
    for _ in range(rng.randint(1, 4)):
        domain = rng.sample(support, rng.randint(1, len(support)))
        patterns.append(Pattern.from_mapping({g: rng.randrange(alphabet) for g in domain}))
    return LCLInstance.build(oracle, patterns, alphabet)


class TestAgainstNaiveFilter:
    """Tests that the backtracking enumeration equals filtering all colorings."""

    @pytest.mark.parametrize("seed", range(12))
    def test_random_instances(
        self, z: FreeAbelian, z2: FreeAbelian, f2: FreeGroup, seed: int
    ) -> None:
        """Test random instances on windows of three group families."""
        spaces = [
            (Window.box(z, 6), Window.ball(z, 1).points),
            (Window.box(z2, 2), Window.ball(z2, 1).points),
            (Window.ball(f2, 1), Window.ball(f2, 1).points),
        ]
        for alphabet in (1, 2, 3):
            for window, support in spaces:
                if alphabet ** len(window) > 1000:
                    continue
                lcl = _random_lcl(window.oracle, support, alphabet, seed)
                naive: list[tuple[int, ...]] = []
                for values in itertools.product(range(alphabet), repeat=len(window)):
                    config = WindowConfiguration.from_values(window, values)
                    if verify_pi_coloring(config, lcl).ok:
                        naive.append(values)
                configs, truncated = enumerate_window_configs(lcl, window)
                assert not truncated
                assert [c.values() for c in configs] == naive


class TestShiftAction:
    """Tests for the shift action on a nonabelian group."""

    def test_shifts_compose(self, f2: FreeGroup) -> None:
        """Test that shifting by g then by h agrees with shifting by h g on the common domain."""
        window = Window.ball(f2, 2)
        rng = random.Random(5)
        moves = Window.ball(f2, 1).points
        for _ in range(40):
            config = WindowConfiguration(window, {x: rng.randrange(3) for x in window.points})
            g, h = rng.choice(moves), rng.choice(moves)
            twice = shift_config(h, shift_config(g, config))
            once = shift_config(f2.mul(h, g), config)
            assert set(twice.space.points) <= set(once.space.points)
            for d in twice.space.points:
                assert twice[d] == once[d]

    def test_canonical_coloring_reads_the_orbit(self, f2: FreeGroup) -> None:
        """Test that the canonical coloring of the shift by g is the color at g."""
        window = Window.ball(f2, 2)
        rng = random.Random(6)
        config = WindowConfiguration(window, {x: rng.randrange(4) for x in window.points})
        for g in window.points:
            assert canonical_coloring(shift_config(g, config)) == config[g]


class TestParity:
    """Tests that alternation forces the parity of distant colors."""

    def test_odd_distance(self, z: FreeAbelian, proper_two_coloring: LCLInstance) -> None:
        """Test that the endpoints of an odd path extend only when they differ."""
        ends = Window.of(z, [(0,), (3,)])
        report = extension_check(proper_two_coloring, ends, Window.box(z, 4))
        assert report.checked == 4
        assert report.extendable == 2
        assert report.non_extendable == 2
        assert report.first_non_extendable == [0, 0]

    def test_even_distance(self, z: FreeAbelian, proper_two_coloring: LCLInstance) -> None:
        """Test that the endpoints of an even path extend only when they agree."""
        ends = Window.of(z, [(0,), (2,)])
        report = extension_check(proper_two_coloring, ends, Window.box(z, 3))
        assert report.extendable == 2
        assert report.first_non_extendable == [0, 1]
