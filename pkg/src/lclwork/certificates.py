"""Certificate payloads, persistence, and independent re-verification.

Re-verification rebuilds the group, windows, and instances from the
certificate alone and re-runs the cheap direction of every claim: witnesses
are re-checked, exhaustion is only checked for consistency and reported as
trusted.
"""

import json
import logging
import platform
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pydantic
from pydantic import ValidationError

from lclwork import __version__
from lclwork.config import ActionSpec, GroupSpec
from lclwork.evidence import evidence_value
from lclwork.exceptions import CertificateError, GroupError
from lclwork.file_utils import load_json, save_json
from lclwork.groups import GenSet, GroupOracle, Space, Window
from lclwork.lcl import (
    LCLInstance,
    Match,
    WindowConfiguration,
    freeness_lcl,
    matches_at,
    pi_sn_violations,
    verify_pi_coloring,
)
from lclwork.models import (
    SCHEMA_VERSION,
    Certificate,
    LCLPayload,
    SearchCertificate,
    VerifyResult,
    WitnessPayload,
)
from lclwork.separation import is_s_separated

#: Logger instance.
LOGGER = logging.getLogger(__name__)


def toolchain() -> dict[str, str]:
    """Versions of the software that produced a certificate."""
    return {
        "lclwork": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "pydantic": pydantic.VERSION,
    }


def witness_payload(
    config: WindowConfiguration,
    gen_set: GenSet | None = None,
    k: int | None = None,
    n: int | None = None,
) -> WitnessPayload:
    """Serialize a coloring, with the separation parameters it was checked against.

    Parameters
    ----------
    config
        The coloring; points are dumped in the space's canonical order.
    gen_set
        The set ``S``, if the coloring is a separated witness.
    k
        Component bound of the witness.
    n
        Number of colors the witness was searched with.

    Returns
    -------
    WitnessPayload
        The JSON-ready payload.
    """
    space = config.space
    return WitnessPayload(
        points=[space.dump_point(x) for x in space.points],
        colors=list(config.values()),
        s=gen_set.dump() if gen_set is not None else [],
        k=k,
        n=n,
    )


def lcl_payload(lcl: LCLInstance) -> LCLPayload:
    """The certificate form of an instance, origin included."""
    return LCLPayload.model_validate(lcl.dump())


def write_certificate(path: Path, certificate: Certificate) -> None:
    """Write a certificate as JSON, creating parent directories.

    Parameters
    ----------
    path
        Target file; an existing file is replaced.
    certificate
        The certificate to write.
    """
    save_json(path, certificate.model_dump(mode="json"))


def load_certificate(path: Path) -> Certificate:
    """Read a certificate and check its schema version.

    Raises
    ------
    CertificateError
        If the file is unreadable, not JSON, of another schema version, or malformed.
    """
    try:
        data = load_json(path)
    except OSError as e:
        msg = f"cannot read certificate {path}: {e}"
        raise CertificateError(msg) from e
    except json.JSONDecodeError as e:
        msg = f"certificate {path} is not valid JSON: {e}"
        raise CertificateError(msg) from e
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        version = data.get("schema_version") if isinstance(data, dict) else None
        msg = f"unsupported certificate schema version {version!r} (expected {SCHEMA_VERSION})"
        raise CertificateError(msg)
    try:
        return Certificate.model_validate(data)
    except ValidationError as e:
        msg = f"malformed certificate {path}: {e}"
        raise CertificateError(msg) from e


class _Failed(Exception):
    """A re-verification check failed."""


class CertificateVerifier:
    """Re-verify one certificate against its own contents."""

    def __init__(self, certificate: Certificate) -> None:
        self.certificate = certificate
        self.task_name = str(certificate.task.get("task", ""))
        self.checks: list[str] = []
        self.trusted = False
        try:
            self.oracle: GroupOracle = GroupSpec.model_validate(certificate.group).build()
        except (ValidationError, GroupError) as e:
            msg = f"certificate group cannot be rebuilt: {e}"
            raise CertificateError(msg) from e

    def verify(self) -> VerifyResult:
        """Re-check the certificate with the handler for its task.

        Returns
        -------
        VerifyResult
            The verdict; a failed check is reported, never raised.

        Raises
        ------
        CertificateError
            If the task is unknown or the payload does not fit the group.
        """
        handler = {
            "search": self._search,
            "table": self._table,
            "verify": self._verify,
            "pi-sn": self._pi_sn,
            "subshift": self._subshift,
            "freeness": self._freeness,
            "witness": self._witness,
        }.get(self.task_name)
        if handler is None:
            msg = f"unknown certificate task {self.task_name!r}"
            raise CertificateError(msg)
        try:
            handler()
        except _Failed as e:
            return VerifyResult(verdict=False, violation=str(e), checks=self.checks)
        except (GroupError, KeyError, ValueError, TypeError) as e:
            msg = f"certificate payload is inconsistent: {e}"
            raise CertificateError(msg) from e
        return VerifyResult(verdict=True, trusted=self.trusted, checks=self.checks)

    def _window(self, points: Sequence[Any]) -> Window:
        return Window.of(self.oracle, [self.oracle.parse(p) for p in points])

    def _config(
        self, space: Space, points: Sequence[Any], colors: Sequence[int]
    ) -> WindowConfiguration:
        parsed = [self.oracle.parse(p) if isinstance(space, Window) else p for p in points]
        return WindowConfiguration(space, dict(zip(parsed, colors, strict=True)))

    def _gen_set(self, raw: Sequence[Any]) -> GenSet:
        return GenSet(self.oracle, tuple(sorted({self.oracle.parse(s) for s in raw})))

    def _lcl(self) -> LCLInstance:
        if self.certificate.lcl is None:
            raise _Failed("certificate has no LCL payload")
        return LCLInstance.load(self.oracle, self.certificate.lcl.model_dump())

    def _check_separated(self, payload: WitnessPayload) -> WindowConfiguration:
        if payload.k is None:
            raise _Failed("witness has no bound k")
        window = self._window(payload.points)
        config = self._config(window, payload.points, payload.colors)
        if payload.n is not None and any(c >= payload.n for c in payload.colors):
            raise _Failed(f"witness uses a color outside 0..{payload.n - 1}")
        report = is_s_separated(config, self._gen_set(payload.s), payload.k)
        if not report.verdict:
            raise _Failed(
                f"component of size {report.max_component} containing {report.violation!r} "
                f"exceeds k={payload.k}"
            )
        self.checks.append(f"witness on {len(window)} points is S-separated with k={payload.k}")
        return config

    def _check_search(self, search: SearchCertificate) -> None:
        if search.outcome == "witness":
            if search.witness is None:
                raise _Failed("witness outcome without a witness")
            payload = WitnessPayload(
                points=search.points, colors=search.witness, s=search.s, k=search.k, n=search.n
            )
            self._check_separated(payload)
            return
        if search.witness is not None:
            raise _Failed(f"{search.outcome} outcome carries a witness")
        if search.outcome == "exhausted" and search.nodes > search.budget:
            raise _Failed("exhausted search explored more nodes than its budget")
        exact_budget = search.outcome == "budget" and search.method == "exact"
        if exact_budget and search.nodes <= search.budget:
            raise _Failed("budget outcome although the node count is within the budget")
        self.trusted = True
        self.checks.append(f"{search.outcome} search (n={search.n}, k={search.k}) is consistent")

    def _search(self) -> None:
        cert = self.certificate
        if cert.search is None:
            raise _Failed("search certificate has no search record")
        self._check_search(cert.search)
        if cert.lcl is None or cert.witness is None:
            return
        lcl = self._lcl()
        gen_set = self._gen_set(cert.witness.s)
        for i, pattern in enumerate(lcl.patterns):
            problems = pi_sn_violations(pattern, gen_set, lcl.alphabet_size)
            if problems:
                raise _Failed(f"derived pattern {i} is not in Pi_(S,n): {problems[0]}")
        window = self._window(cert.witness.points)
        config = self._config(window, cert.witness.points, cert.witness.colors)
        for raw_point, index in cert.assignment or []:
            x = self.oracle.parse(raw_point)
            if matches_at(config, x, lcl.patterns[index]) is not Match.MATCH:
                raise _Failed(f"pattern {index} does not match at {raw_point!r}")
        self.checks.append(f"{len(lcl)} derived patterns are in Pi_(S,n) and match")

    def _table(self) -> None:
        evidence = self.certificate.evidence
        if evidence is None:
            raise _Failed("table certificate has no evidence")
        for row in evidence.rows:
            for search in row.searches:
                self._check_search(search)
            label = f"row {row.s_label}, k={row.k}"
            if [s.n for s in row.searches] != list(range(1, len(row.searches) + 1)):
                raise _Failed(f"{label} does not search n = 1, 2, ... in order")
            if row.outcome == "exhausted" and (
                not row.searches or any(s.outcome != "exhausted" for s in row.searches)
            ):
                raise _Failed(f"{label} is exhausted without exhausting every n")
            if row.outcome == "exact":
                last = row.searches[-1] if row.searches else None
                if last is None or last.outcome != "witness" or last.n != row.min_n:
                    raise _Failed(f"{label} has no witness for its min n")
                if any(s.outcome != "exhausted" for s in row.searches[:-1]):
                    raise _Failed(f"{label} skips a smaller n")
        if evidence_value(evidence.rows) != evidence.value:
            raise _Failed("recorded evidence value does not match its rows")
        self.checks.append(f"evidence table with {len(evidence.rows)} rows is consistent")

    def _verify(self) -> None:
        cert = self.certificate
        if cert.witness is None:
            raise _Failed("verify certificate has no coloring")
        window = self._window(cert.witness.points)
        config = self._config(window, cert.witness.points, cert.witness.colors)
        valid = True
        if cert.witness.k is not None:
            report = is_s_separated(config, self._gen_set(cert.witness.s), cert.witness.k)
            valid = valid and report.verdict
        if cert.lcl is not None:
            valid = valid and verify_pi_coloring(config, self._lcl()).ok
        if valid != (cert.outcome == "valid"):
            raise _Failed(f"recorded outcome {cert.outcome!r} does not match re-verification")
        self.checks.append(f"coloring re-verified as {cert.outcome}")

    def _pi_sn(self) -> None:
        lcl = self._lcl()
        origin = lcl.origin
        gen_set = self._gen_set(origin["s"])
        window = self._window(origin["window"])
        for i, pattern in enumerate(lcl.patterns):
            problems = pi_sn_violations(pattern, gen_set, origin["n"])
            if problems:
                raise _Failed(f"pattern {i} is not in Pi_(S,n): {problems[0]}")
            if any(g not in window for g in pattern.dom):
                raise _Failed(f"pattern {i} leaves the pattern window")
        self.checks.append(f"{len(lcl)} patterns satisfy the Pi_(S,n) conditions")

    def _subshift(self) -> None:
        cert = self.certificate
        lcl = self._lcl()
        enumeration = cert.enumeration
        if enumeration is None:
            raise _Failed("subshift certificate has no enumeration")
        window = self._window(enumeration.points)
        for values in enumeration.configurations:
            config = self._config(window, enumeration.points, values)
            verdict = verify_pi_coloring(config, lcl)
            if not verdict.ok:
                raise _Failed(f"configuration {values} fails at {verdict.failure!r}")
        if not enumeration.truncated and enumeration.count != len(enumeration.configurations):
            raise _Failed("configuration count does not match the listed configurations")
        extension = cert.extension
        if (
            extension is not None
            and extension.extendable + extension.non_extendable != extension.checked
        ):
            raise _Failed("extension counts are inconsistent")
        self.trusted = True
        self.checks.append(f"{len(enumeration.configurations)} configurations are valid")

    def _freeness(self) -> None:
        cert = self.certificate
        task = cert.task
        lcl = freeness_lcl(self.oracle, self.oracle.parse(task["gamma"]))
        if cert.outcome == "no-coloring":
            self.trusted = True
            self.checks.append("no coloring exists (trusted enumeration)")
            return
        if cert.witness is None:
            raise _Failed("colorable outcome without a coloring")
        space: Space
        if task.get("action") is not None:
            space = ActionSpec.model_validate(task["action"]).build(self.oracle)
        else:
            space = self._window(cert.witness.points)
        config = self._config(space, cert.witness.points, cert.witness.colors)
        verdict = verify_pi_coloring(config, lcl)
        if not verdict.ok:
            raise _Failed(f"freeness coloring fails at {verdict.failure!r}")
        self.checks.append("freeness coloring is valid")

    def _witness(self) -> None:
        if self.certificate.witness is None:
            raise _Failed("witness certificate has no coloring")
        self._check_separated(self.certificate.witness)


def verify_certificate(path: Path) -> VerifyResult:
    """Re-verify a certificate file.

    Returns
    -------
    VerifyResult
        The verdict, with the first violation when false.

    Raises
    ------
    CertificateError
        If the certificate cannot be read or has an unknown schema.
    """
    result = CertificateVerifier(load_certificate(path)).verify()
    LOGGER.debug("verified %s: %s", path, result.verdict)
    return result
