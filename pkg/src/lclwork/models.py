"""Pydantic models for reports, evidence tables, and certificates."""

from typing import Any, Literal

from pydantic import BaseModel, Field

#: Version of the certificate format written by this package.
SCHEMA_VERSION = 1

#: Search outcome.
SearchOutcome = Literal["witness", "exhausted", "budget"]


class SeparationReport(BaseModel):
    """Component measurement of a coloring against a size bound ``k``.

    Boundary-touching components are window truncations: their sizes are
    lower bounds of the true sizes, so they can violate the bound but never
    certify it.
    """

    k: int
    verdict: bool
    point_count: int = 0
    component_count: int = 0
    max_interior_component: int = 0
    max_boundary_component: int = 0
    max_component: int = 0
    histogram: dict[int, int] = Field(default_factory=dict)
    violation: Any = None
    members: list[list[Any]] | None = None


class SearchCertificate(BaseModel):
    """Outcome and statistics of one exact or heuristic search."""

    outcome: SearchOutcome
    method: Literal["exact", "heuristic"] = "exact"
    group: str = ""
    points: list[Any] = Field(default_factory=list)
    witness: list[int] | None = None
    s: list[Any] = Field(default_factory=list)
    n: int = 1
    k: int = 1
    seed: int | None = None
    budget: int = 0
    nodes: int = 0
    prunes: int = 0
    max_depth: int = 0


class AsdimRow(BaseModel):
    """Minimum color count found for one ``(S, k)`` pair."""

    s_index: int
    s_label: str
    s: list[Any] = Field(default_factory=list)
    k: int
    window_size: int = 0
    min_n: int | None = None
    outcome: Literal["exact", "exhausted", "budget"]
    nodes: int = 0
    searches: list[SearchCertificate] = Field(default_factory=list)


class AsdimEvidence(BaseModel):
    """Finite-scale asymptotic dimension evidence.

    Exhausted rows only prove that no coloring exists on their window with
    their bound; the evidence value is window-scale, never a proof.
    """

    group: str
    rows: list[AsdimRow] = Field(default_factory=list)
    value: int | None = None
    monotone: bool = True
    notes: list[str] = Field(default_factory=list)


class ExtensionReport(BaseModel):
    """Counts of valid window configurations that extend to a larger window."""

    window_size: int
    extension_size: int
    checked: int = 0
    extendable: int = 0
    non_extendable: int = 0
    truncated: bool = False
    first_non_extendable: list[int] | None = None


class EnumerationReport(BaseModel):
    """Valid window configurations of an instance, possibly truncated."""

    points: list[Any] = Field(default_factory=list)
    interior: list[Any] = Field(default_factory=list)
    configurations: list[list[int]] = Field(default_factory=list)
    count: int | None = None
    truncated: bool = False


class WitnessPayload(BaseModel):
    """A coloring of a window, as colors in canonical point order."""

    points: list[Any]
    colors: list[int]
    s: list[Any] = Field(default_factory=list)
    k: int | None = None
    n: int | None = None


class LCLPayload(BaseModel):
    """An ordered pattern list with its alphabet size and generation parameters."""

    patterns: list[list[list[Any]]]
    alphabet: int
    origin: dict[str, Any] = Field(default_factory=dict)


class Certificate(BaseModel):
    """Self-contained record of one task outcome, re-verifiable without run state."""

    schema_version: int = SCHEMA_VERSION
    task: dict[str, Any]
    group: dict[str, Any]
    outcome: str
    witness: WitnessPayload | None = None
    lcl: LCLPayload | None = None
    assignment: list[list[Any]] | None = None
    search: SearchCertificate | None = None
    separation: SeparationReport | None = None
    evidence: AsdimEvidence | None = None
    extension: ExtensionReport | None = None
    enumeration: EnumerationReport | None = None
    gamma_graph: dict[str, Any] | None = None
    statistics: dict[str, Any] = Field(default_factory=dict)
    toolchain: dict[str, str] = Field(default_factory=dict)


class VerifyResult(BaseModel):
    """Verdict of re-verifying a certificate."""

    verdict: bool
    trusted: bool = False
    violation: str | None = None
    checks: list[str] = Field(default_factory=list)


class RunResult(BaseModel):
    """Summary of a batch run."""

    certificates_written: list[str] = Field(default_factory=list)
    outcomes: list[str] = Field(default_factory=list)
    budget_hits: int = 0
    errors: list[str] = Field(default_factory=list)
