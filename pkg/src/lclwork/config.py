"""Configuration models for lclwork.

``Settings`` holds tool-wide defaults read from the environment and the
settings file; ``RunConfig`` describes one batch of tasks and is read from a
JSON document.
"""

import os
from pathlib import Path
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic_settings import (
    BaseSettings,
    JsonConfigSettingsSource,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)

from lclwork.exceptions import GroupError, SizeLimitError
from lclwork.gamma_graph import FiniteAction
from lclwork.groups import (
    DirectProduct,
    FiniteGroup,
    FreeAbelian,
    FreeGroup,
    GenSet,
    GroupOracle,
    Window,
    ball,
    make_gen_set,
    subgroup_gen_set,
)
from lclwork.lcl import LCLInstance, Pattern, freeness_lcl, pi_sn_generate


def get_app_config_path() -> Path:
    """Determine the path to the settings file using XDG standard.

    The settings file location is determined by:
    1. LCLWORK_CONFIG_PATH environment variable if set
    2. XDG_CONFIG_HOME/lclwork/config.json if XDG_CONFIG_HOME is set
    3. ~/.config/lclwork/config.json (XDG default)

    The file is optional and never created here.

    Returns
    -------
    Path
        Path to the settings file.
    """
    config_env = os.environ.get("LCLWORK_CONFIG_PATH")
    if config_env:
        return Path(config_env)
    xdg_config_home = os.environ.get("XDG_CONFIG_HOME")
    if xdg_config_home:
        config_dir = Path(xdg_config_home) / "lclwork"
    else:
        config_dir = Path.home() / ".config" / "lclwork"
    return config_dir / "config.json"


class Settings(BaseSettings):
    """Tool-wide limits and defaults.

    Precedence: explicit values, then ``LCLWORK_*`` environment variables,
    then the JSON settings file, then the defaults below.
    """

    model_config = SettingsConfigDict(env_prefix="LCLWORK_", extra="ignore")

    node_budget: int = Field(
        default=10**8,
        ge=1,
        title="Node Budget",
        description="Default number of search nodes before a search reports 'budget'.",
    )
    set_power_limit: int = Field(
        default=10**6,
        ge=1,
        title="Set Power Limit",
        description="Largest number of elements a set power S^k may have.",
    )
    pi_sn_window_limit: int = Field(
        default=24,
        ge=1,
        title="Pi_(S,n) Window Limit",
        description="Largest pattern window accepted when generating Pi_(S,n) fragments.",
    )
    pattern_limit: int = Field(
        default=200_000,
        ge=1,
        title="Pattern Limit",
        description="Largest number of patterns (or candidate domains) of a generated fragment.",
    )
    enumeration_limit: int = Field(
        default=10_000,
        ge=1,
        title="Enumeration Limit",
        description="Default cap on enumerated window configurations.",
    )
    membership_limit: int = Field(
        default=1000,
        ge=0,
        title="Membership Limit",
        description=(
            "Separation reports list full component membership for windows up to this "
            "many points and only the histogram above."
        ),
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        return (
            init_settings,
            env_settings,
            JsonConfigSettingsSource(settings_cls, json_file=get_app_config_path()),
        )


class SpecModel(BaseModel):
    """Base for run configuration models; unknown keys are errors."""

    model_config = ConfigDict(extra="forbid")


class GroupSpec(SpecModel):
    """A supported group family and its parameters."""

    family: Literal["free_abelian", "free_group", "finite", "cyclic", "product"] = Field(
        title="Family",
        description="Group family: Z^d, free group F_m, finite table, Z/n, or a direct product.",
    )
    dim: int = Field(default=1, ge=1, title="Dimension", description="d for Z^d.")
    rank: int = Field(default=2, ge=1, le=26, title="Rank", description="m for F_m.")
    order: int = Field(default=1, ge=1, title="Order", description="n for the cyclic group Z/n.")
    table: list[list[int]] | None = Field(
        default=None,
        title="Multiplication Table",
        description="Row a, column b holds the index of a*b (finite family only).",
    )
    generators: list[int] = Field(
        default_factory=list,
        title="Generators",
        description="Generator indices of a finite group; chosen greedily when empty.",
    )
    name: str = Field(default="", title="Name", description="Display name of a finite group.")
    factors: list["GroupSpec"] = Field(
        default_factory=list,
        title="Factors",
        description="The two factors of a direct product.",
    )

    @model_validator(mode="after")
    def _check_family(self) -> "GroupSpec":
        if self.family == "finite" and self.table is None:
            msg = "a finite group needs a multiplication table"
            raise ValueError(msg)
        if self.family == "product" and len(self.factors) != 2:
            msg = "a direct product needs exactly two factors"
            raise ValueError(msg)
        return self

    def build(self) -> GroupOracle:
        """Create the group oracle.

        Raises
        ------
        GroupError
            If the parameters do not describe a valid group.
        """
        match self.family:
            case "free_abelian":
                return FreeAbelian(self.dim)
            case "free_group":
                return FreeGroup(self.rank)
            case "cyclic":
                return FiniteGroup.cyclic(self.order)
            case "finite":
                assert self.table is not None
                rows = tuple(tuple(row) for row in self.table)
                return FiniteGroup(rows, tuple(self.generators), name=self.name)
            case "product":
                left, right = self.factors
                return DirectProduct(left.build(), right.build())
        msg = f"unknown group family {self.family!r}"  # pragma: no cover
        raise GroupError(msg)  # pragma: no cover


class GenSetSpec(SpecModel):
    """A finite symmetric set ``S`` containing the identity."""

    radius: int | None = Field(
        default=None,
        ge=0,
        title="Radius",
        description="Use the word-metric ball of this radius (the default, radius 1).",
    )
    elements: list[Any] | None = Field(
        default=None,
        title="Elements",
        description="Use these elements, closed under inverses and with the identity added.",
    )
    subgroup: list[Any] | None = Field(
        default=None,
        title="Subgroup Generators",
        description="Read the action restricted to the subgroup these elements generate.",
    )

    @model_validator(mode="after")
    def _one_source(self) -> "GenSetSpec":
        given = [v for v in (self.radius, self.elements, self.subgroup) if v is not None]
        if len(given) > 1:
            msg = "give at most one of radius, elements, subgroup"
            raise ValueError(msg)
        return self

    def build(self, oracle: GroupOracle, *, limit: int = 10**6) -> GenSet:
        """Create ``S``; without elements or subgroup generators it is a ball, radius 1 by default.

        Raises
        ------
        GroupError
            If an element does not parse for the group.
        SizeLimitError
            If the ball exceeds ``limit`` elements.
        """
        if self.elements is not None:
            return make_gen_set(oracle, [oracle.parse(e) for e in self.elements])
        if self.subgroup is not None:
            return subgroup_gen_set(oracle, [oracle.parse(e) for e in self.subgroup])
        return ball(oracle, 1 if self.radius is None else self.radius, limit=limit)

    def label(self) -> str:
        """Short row label used in evidence tables."""
        if self.elements is not None:
            return "{" + ",".join(str(e) for e in self.elements) + "}"
        if self.subgroup is not None:
            return "subgroup(" + ",".join(str(e) for e in self.subgroup) + ")"
        return f"ball({1 if self.radius is None else self.radius})"


class WindowSpec(SpecModel):
    """A finite window of the group.

    ``per_k`` grows the size (box) or radius (ball) by ``per_k * k`` for
    tasks that scan a bound ``k``.
    """

    kind: Literal["box", "ball", "whole", "points"] = Field(
        title="Kind",
        description="Box [start, start+size)^d, word-metric ball, whole finite group, or points.",
    )
    size: int = Field(default=0, ge=0, title="Size", description="Box side length.")
    start: int = Field(default=0, title="Start", description="Box corner coordinate.")
    radius: int = Field(default=0, ge=0, title="Radius", description="Ball radius.")
    per_k: int = Field(default=0, ge=0, title="Growth per k", description="Growth per unit of k.")
    points: list[Any] = Field(
        default_factory=list, title="Points", description="Explicit window points."
    )

    def build(self, oracle: GroupOracle, k: int = 0, *, limit: int = 10**6) -> Window:
        """Create the window for the bound ``k``.

        Raises
        ------
        GroupError
            If the kind does not fit the group or a point is not an element.
        """
        match self.kind:
            case "box":
                return Window.box(oracle, self.size + self.per_k * k, start=self.start)
            case "ball":
                return Window.ball(oracle, self.radius + self.per_k * k, limit=limit)
            case "whole":
                return Window.whole(oracle)
            case "points":
                return Window.of(oracle, [oracle.parse(p) for p in self.points])
        msg = f"unknown window kind {self.kind!r}"  # pragma: no cover
        raise GroupError(msg)  # pragma: no cover


class ActionSpec(SpecModel):
    """A finite action by one permutation of ``0..size-1`` per generator."""

    size: int = Field(ge=1, title="Size", description="Number of points.")
    permutations: list[list[int]] | None = Field(
        default=None,
        title="Permutations",
        description="Generator permutations; 'kind' is used when omitted.",
    )
    kind: Literal["trivial", "rotation"] = Field(
        default="rotation",
        title="Kind",
        description="Every generator fixes every point, or shifts x to x+1 mod size.",
    )

    def build(self, oracle: GroupOracle) -> FiniteAction:
        # explicit permutations win over the kind
        if self.permutations is not None:
            return FiniteAction(oracle, self.size, tuple(tuple(p) for p in self.permutations))
        if self.kind == "trivial":
            return FiniteAction.trivial(oracle, self.size)
        return FiniteAction.rotation(oracle, self.size)


class LCLSpec(SpecModel):
    """An LCL instance: explicit patterns, a Pi_(S,n) fragment, or the freeness LCL."""

    kind: Literal["patterns", "pi_sn", "freeness"] = Field(title="Kind")
    patterns: list[list[list[Any]]] = Field(
        default_factory=list,
        title="Patterns",
        description="Ordered patterns, each a list of [element, color] pairs.",
    )
    alphabet: int | None = Field(
        default=None, ge=0, title="Alphabet Size", description="Defaults to max color + 1."
    )
    s: GenSetSpec | None = Field(default=None, title="S", description="S for Pi_(S,n).")
    n: int = Field(default=2, ge=1, title="Colors", description="n for Pi_(S,n).")
    window: WindowSpec | None = Field(
        default=None, title="Pattern Window", description="Window bounding Pi_(S,n) domains."
    )
    gamma: Any = Field(default=None, title="Gamma", description="Element of the freeness LCL.")

    @model_validator(mode="after")
    def _check_kind(self) -> "LCLSpec":
        if self.kind == "pi_sn" and self.window is None:
            msg = "a pi_sn instance needs a pattern window"
            raise ValueError(msg)
        if self.kind == "freeness" and self.gamma is None:
            msg = "the freeness LCL needs gamma"
            raise ValueError(msg)
        return self

    def build(self, oracle: GroupOracle, settings: Settings) -> LCLInstance:
        match self.kind:
            case "patterns":
                patterns = [Pattern.load(oracle, p) for p in self.patterns]
                return LCLInstance.build(oracle, patterns, self.alphabet, {"construction": "list"})
            case "pi_sn":
                assert self.window is not None
                gen_set = (self.s or GenSetSpec()).build(oracle, limit=settings.set_power_limit)
                return pi_sn_generate(
                    gen_set,
                    self.n,
                    self.window.build(oracle, limit=settings.set_power_limit),
                    window_limit=settings.pi_sn_window_limit,
                    pattern_limit=settings.pattern_limit,
                )
            case "freeness":
                return freeness_lcl(oracle, oracle.parse(self.gamma))
        msg = f"unknown LCL kind {self.kind!r}"  # pragma: no cover
        raise GroupError(msg)  # pragma: no cover

    def check(self, oracle: GroupOracle, settings: Settings) -> None:
        """Build the parts of the instance, without generating a Pi_(S,n) fragment.

        Raises
        ------
        ValueError
            If some part is not valid for the group.
        SizeLimitError
            If the pattern window is above the configured limit.
        """
        if self.kind != "pi_sn":
            self.build(oracle, settings)
            return
        assert self.window is not None
        (self.s or GenSetSpec()).build(oracle, limit=settings.set_power_limit)
        window = self.window.build(oracle, limit=settings.set_power_limit)
        if oracle.identity not in window:
            msg = "the pattern window must contain the identity"
            raise ValueError(msg)
        if len(window) > settings.pi_sn_window_limit:
            msg = (
                f"pattern window has {len(window)} points, "
                f"above the limit {settings.pi_sn_window_limit}"
            )
            raise SizeLimitError(msg)


class SearchTask(SpecModel):
    """Find an S-separated n-coloring of a window with components of at most k points."""

    task: Literal["search"] = "search"
    s: GenSetSpec = Field(default_factory=GenSetSpec, title="S")
    n: int = Field(ge=1, title="Colors")
    k: int = Field(ge=1, title="Component Bound")
    window: WindowSpec = Field(title="Window")
    method: Literal["exact", "heuristic"] = Field(
        default="exact",
        title="Method",
        description="Exact search can prove exhaustion; heuristic search only finds witnesses.",
    )
    restarts: int = Field(default=10, ge=1, title="Heuristic Restarts")
    derive_lcl: bool = Field(
        default=False,
        title="Derive Pi_(S,n) Fragment",
        description="Build the Pi_(S,n) patterns realized by a found witness.",
    )


class TableTask(SpecModel):
    """Minimum colors for every (S, k) pair, with the derived evidence value."""

    task: Literal["table"] = "table"
    s_list: list[GenSetSpec] = Field(min_length=1, title="Generating Sets")
    k_schedule: list[int] = Field(min_length=1, title="k Schedule")
    n_max: int = Field(default=4, ge=1, title="Largest n")
    window: WindowSpec = Field(title="Window Policy")


class VerifyTask(SpecModel):
    """Check a given coloring for S-separation and/or against an LCL instance."""

    task: Literal["verify"] = "verify"
    colors: list[int] = Field(title="Colors", description="Colors in canonical point order.")
    window: WindowSpec = Field(title="Window")
    s: GenSetSpec | None = Field(default=None, title="S")
    k: int | None = Field(default=None, ge=1, title="Component Bound")
    lcl: LCLSpec | None = Field(default=None, title="LCL")

    @model_validator(mode="after")
    def _something_to_check(self) -> "VerifyTask":
        if self.lcl is None and (self.s is None or self.k is None):
            msg = "a verify task needs an LCL, or S and k"
            raise ValueError(msg)
        return self


class PiSnTask(SpecModel):
    """Generate a Pi_(S,n) fragment and optionally check its colorings on a window."""

    task: Literal["pi-sn"] = "pi-sn"
    s: GenSetSpec = Field(default_factory=GenSetSpec, title="S")
    n: int = Field(ge=1, title="Colors")
    pattern_window: WindowSpec = Field(title="Pattern Window")
    check_window: WindowSpec | None = Field(
        default=None,
        title="Check Window",
        description="Enumerate valid colorings here and bound their components.",
    )


class SubshiftTask(SpecModel):
    """Enumerate valid window configurations and optionally test their extensions."""

    task: Literal["subshift"] = "subshift"
    lcl: LCLSpec = Field(title="LCL")
    window: WindowSpec = Field(title="Window")
    extension_window: WindowSpec | None = Field(default=None, title="Extension Window")


class FreenessTask(SpecModel):
    """Look for a coloring of the freeness LCL on a window or a finite action."""

    task: Literal["freeness"] = "freeness"
    gamma: Any = Field(title="Gamma")
    window: WindowSpec | None = Field(default=None, title="Window")
    action: ActionSpec | None = Field(default=None, title="Finite Action")

    @model_validator(mode="after")
    def _one_space(self) -> "FreenessTask":
        if (self.window is None) == (self.action is None):
            msg = "a freeness task needs exactly one of window, action"
            raise ValueError(msg)
        return self


class WitnessTask(SpecModel):
    """Instantiate and verify a schematic S-separated coloring."""

    task: Literal["witness"] = "witness"
    scheme: Literal["brick", "tree_band"] = Field(title="Scheme")
    radius: int = Field(default=1, ge=0, title="Radius of S")
    block: int = Field(default=2, ge=1, title="Block or Band Width")
    window: WindowSpec | None = Field(default=None, title="Window")


#: Any task, selected by its ``task`` key.
TaskSpec = Annotated[
    SearchTask | TableTask | VerifyTask | PiSnTask | SubshiftTask | FreenessTask | WitnessTask,
    Field(discriminator="task"),
]


class RunConfig(SpecModel):
    """A batch of tasks over one group."""

    group: GroupSpec = Field(title="Group")
    tasks: list[TaskSpec] = Field(default_factory=list, title="Tasks")
    seed: int | None = Field(
        default=0, title="Seed", description="Seed of the search branch order; null for none."
    )
    budget: int | None = Field(
        default=None, ge=1, title="Node Budget", description="Overrides the settings default."
    )
    limit: int | None = Field(
        default=None, ge=1, title="Enumeration Limit", description="Overrides the settings default."
    )
    out: str = Field(default="certificates", title="Output Directory")
