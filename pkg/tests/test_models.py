"""Tests for Pydantic models."""

import pytest
from pydantic import ValidationError

from lclwork.models import (
    SCHEMA_VERSION,
    AsdimEvidence,
    AsdimRow,
    Certificate,
    RunResult,
    SearchCertificate,
    SeparationReport,
    VerifyResult,
    WitnessPayload,
)


class TestSearchCertificate:
    """Tests for SearchCertificate."""

    def test_default_values(self) -> None:
        """Test that statistics default to zero."""
        search = SearchCertificate(outcome="exhausted")
        assert search.method == "exact"
        assert search.witness is None
        assert (search.nodes, search.prunes, search.max_depth) == (0, 0, 0)

    def test_rejects_unknown_outcome(self) -> None:
        """Test that only the three search outcomes are accepted."""
        with pytest.raises(ValidationError):
            SearchCertificate(outcome="maybe")  # type: ignore[arg-type]


class TestSeparationReport:
    """Tests for SeparationReport."""

    def test_histogram_keys_survive_json(self) -> None:
        """Test that integer histogram keys come back as integers."""
        report = SeparationReport(k=2, verdict=True, histogram={1: 4, 2: 3})
        restored = SeparationReport.model_validate_json(report.model_dump_json())
        assert restored.histogram == {1: 4, 2: 3}
        assert restored.members is None


class TestAsdimEvidence:
    """Tests for AsdimEvidence and AsdimRow."""

    def test_default_values(self) -> None:
        """Test an empty table."""
        evidence = AsdimEvidence(group="Z")
        assert evidence.rows == []
        assert evidence.value is None
        assert evidence.monotone
        assert evidence.notes == []

    def test_row_outcomes(self) -> None:
        """Test that rows accept only exact, exhausted, and budget."""
        row = AsdimRow(s_index=0, s_label="S0", k=1, outcome="budget")
        assert row.min_n is None
        with pytest.raises(ValidationError):
            AsdimRow(s_index=0, s_label="S0", k=1, outcome="witness")  # type: ignore[arg-type]


class TestCertificate:
    """Tests for Certificate."""

    def test_schema_version(self) -> None:
        """Test that new certificates carry the current schema version."""
        cert = Certificate(task={"task": "witness"}, group={"family": "free_abelian"}, outcome="x")
        assert cert.schema_version == SCHEMA_VERSION == 1
        assert cert.statistics == {}

    def test_json_round_trip(self) -> None:
        """Test that a certificate with nested payloads survives JSON."""
        cert = Certificate(
            task={"task": "witness"},
            group={"family": "free_abelian"},
            outcome="verified",
            witness=WitnessPayload(points=[[0], [1]], colors=[0, 1], s=[[-1], [0], [1]], k=1),
            separation=SeparationReport(k=1, verdict=True),
        )
        restored = Certificate.model_validate(cert.model_dump(mode="json"))
        assert restored == cert


class TestResults:
    """Tests for VerifyResult and RunResult."""

    def test_verify_result(self) -> None:
        """Test the defaults of a verdict."""
        result = VerifyResult(verdict=True)
        assert not result.trusted
        assert result.violation is None
        assert result.checks == []

    def test_run_result(self) -> None:
        """Test the defaults of a run summary."""
        result = RunResult()
        assert result.certificates_written == []
        assert result.outcomes == []
        assert result.budget_hits == 0
        assert result.errors == []
