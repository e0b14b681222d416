"""Schematic S-separated colorings of free abelian and free groups.

Both schemes are instantiated on a finite window and always verified with
``is_s_separated``; a scheme is never trusted on its own.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

from lclwork.exceptions import GroupError, WitnessError
from lclwork.groups import FreeAbelian, FreeGroup, GenSet, Window, ball
from lclwork.lcl import WindowConfiguration
from lclwork.models import SeparationReport
from lclwork.separation import is_s_separated

#: Logger instance.
LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class WitnessResult:
    """A verified schematic coloring with its certified bound."""

    scheme: str
    config: WindowConfiguration
    gen_set: GenSet
    k: int
    colors: int
    report: SeparationReport
    flagged: bool = False
    params: dict[str, Any] = field(default_factory=dict)


def brick_witness(
    oracle: FreeAbelian, radius: int, block: int, window: Window | None = None
) -> WitnessResult:
    """Color ``Z^d`` by the parities of ``floor(x_i / L)``, flattened to ``2^d`` colors.

    Components are ``L^d`` blocks when ``L >= r``, which is the bound checked.
    The default window is the box ``[0, 3L)^d``.

    Raises
    ------
    WitnessError
        If the coloring is not S-separated with bound ``L^d`` on the window.
    """
    if not isinstance(oracle, FreeAbelian):
        msg = f"brick witnesses need a free abelian group, not {oracle.describe()}"
        raise GroupError(msg)
    if block < 1 or radius < 0:
        msg = f"need block >= 1 and radius >= 0, got block={block}, radius={radius}"
        raise ValueError(msg)
    window = window or Window.box(oracle, 3 * block)
    gen_set = ball(oracle, radius)
    colors = {
        x: sum(((coord // block) % 2) << i for i, coord in enumerate(x)) for x in window.points
    }
    config = WindowConfiguration(window, colors)
    k = block**oracle.dim
    report = is_s_separated(config, gen_set, k)
    params = {"radius": radius, "block": block}
    if not report.verdict:
        msg = (
            f"brick coloring with block {block} is not separated for radius {radius}: "
            f"component of size {report.max_component} at {report.violation!r}"
        )
        raise WitnessError(msg)
    LOGGER.debug("brick witness verified on %d points with k=%d", len(window), k)
    return WitnessResult(
        "brick", config, gen_set, k, 2**oracle.dim, report, flagged=block < radius, params=params
    )


def tree_band_witness(
    oracle: FreeGroup, radius: int, band: int, window: Window | None = None
) -> WitnessResult:
    """Color a free group by ``floor(|w| / L) mod 2`` on a ball window.

    The certified bound is the measured interior component maximum (at least
    1). Bands no wider than the adjacency radius are flagged, since their
    components are expected to grow with the window. The default window is
    the ball of radius 6.

    Raises
    ------
    WitnessError
        If a boundary component exceeds the measured interior bound.
    """
    if not isinstance(oracle, FreeGroup):
        msg = f"tree band witnesses need a free group, not {oracle.describe()}"
        raise GroupError(msg)
    if band < 1 or radius < 0:
        msg = f"need band >= 1 and radius >= 0, got band={band}, radius={radius}"
        raise ValueError(msg)
    window = window or Window.ball(oracle, 6)
    gen_set = ball(oracle, radius)
    colors = {x: (oracle.length(x) // band) % 2 for x in window.points}
    config = WindowConfiguration(window, colors)
    measured = is_s_separated(config, gen_set, max(len(window), 1))
    k = max(measured.max_interior_component, 1)
    report = is_s_separated(config, gen_set, k)
    params = {"radius": radius, "band": band}
    if not report.verdict:
        msg = (
            f"tree band coloring with band {band} exceeds its interior bound {k} "
            f"at {report.violation!r}"
        )
        raise WitnessError(msg)
    flagged = band <= radius
    if flagged:
        LOGGER.warning("band %d is not wider than radius %d: bound %d may grow", band, radius, k)
    return WitnessResult("tree_band", config, gen_set, k, 2, report, flagged, params)
