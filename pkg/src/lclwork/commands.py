"""Sub-commands of the lclwork CLI."""

import logging
from pathlib import Path
from typing import Literal

from lclwork.certificates import load_certificate, verify_certificate
from lclwork.config_store import get_settings, load_run_config
from lclwork.evidence import emit_table
from lclwork.exceptions import CertificateError, ConfigError, InvariantViolation
from lclwork.run_service import RunService

#: Logger instance.
LOGGER = logging.getLogger(__name__)


def _set_verbose(verbose: bool) -> None:
    if verbose:
        logging.getLogger("lclwork").setLevel(logging.DEBUG)


def run(
    config: Path,
    *,
    jobs: int = 1,
    budget: int | None = None,
    seed: int | None = None,
    limit: int | None = None,
    out: Path | None = None,
    progress: bool = True,
    verbose: bool = False,
) -> None:
    """Run the tasks of a configuration and write one certificate per task.

    Exit status is 0 on success, 1 if some task failed, 2 for an invalid
    configuration, 3 if a search ran out of budget or a size limit was hit,
    and 4 if an internal invariant was violated.

    Parameters
    ----------
    config
        Path to the JSON run configuration.
    jobs
        Number of tasks executed concurrently.
    budget
        Node budget per search; overrides the configuration.
    seed
        Seed of the search branch order; overrides the configuration.
    limit
        Enumeration limit; overrides the configuration.
    out
        Output directory for certificates; overrides the configuration.
    progress
        Show progress bars.
    verbose
        Enable debug logging.
    """
    _set_verbose(verbose)

    try:
        run_config = load_run_config(config)
        overrides = {
            key: value
            for key, value in {"budget": budget, "seed": seed, "limit": limit}.items()
            if value is not None
        }
        run_config = run_config.model_copy(update=overrides)
        settings = get_settings()
    except ConfigError as e:
        LOGGER.error("✗ %s", e)
        raise SystemExit(2) from e

    output_dir = out or Path(run_config.out)
    service = RunService(run_config, settings, output_dir, jobs=jobs, progress=progress)
    try:
        result = service.run()
    except ConfigError as e:
        LOGGER.error("✗ %s", e)
        raise SystemExit(2) from e
    except InvariantViolation as e:
        LOGGER.error("✗ Internal invariant violated: %s", e)
        raise SystemExit(4) from e

    # Summary
    LOGGER.info("")
    LOGGER.info("=" * 70)
    LOGGER.info("Run Summary")
    LOGGER.info("=" * 70)
    LOGGER.info("Tasks: %d", len(run_config.tasks))
    LOGGER.info("Certificates written: %d", len(result.certificates_written))
    for index, outcome in enumerate(result.outcomes):
        LOGGER.info("  %2d. %-8s %s", index + 1, run_config.tasks[index].task, outcome)

    if result.errors:
        LOGGER.warning("Errors encountered: %d", len(result.errors))
        for error in result.errors[:5]:
            LOGGER.warning("  - %s", error)
        if len(result.errors) > 5:
            LOGGER.warning("  ... and %d more errors", len(result.errors) - 5)

    if result.budget_hits:
        LOGGER.warning("✗ %d task(s) hit the node budget or a size limit", result.budget_hits)
        raise SystemExit(3)
    if result.errors:
        raise SystemExit(1)

    LOGGER.info("")
    LOGGER.info("✓ Run completed successfully!")
    LOGGER.info("Output directory: %s", output_dir.absolute())


def verify(certificate: Path, *, verbose: bool = False) -> None:
    """Re-verify a certificate without any other run state.

    Witnesses are re-checked; exhaustion claims are only checked for
    consistency and reported as trusted.

    Parameters
    ----------
    certificate
        Path to the certificate.
    verbose
        Enable debug logging.
    """
    _set_verbose(verbose)

    try:
        result = verify_certificate(certificate)
    except CertificateError as e:
        LOGGER.error("✗ %s", e)
        raise SystemExit(2) from e

    for check in result.checks:
        LOGGER.info("✓ %s", check)
    if not result.verdict:
        LOGGER.error("✗ Verification failed: %s", result.violation)
        raise SystemExit(1)
    if result.trusted:
        LOGGER.info("✓ Verified (exhaustion trusted, checked for consistency only)")
    else:
        LOGGER.info("✓ Verified")


def table(
    certificate: Path,
    *,
    format: Literal["text", "csv"] = "text",
    verbose: bool = False,
) -> None:
    """Render the evidence table of a table certificate.

    Parameters
    ----------
    certificate
        Path to a certificate written by a ``table`` task.
    format
        Output format.
    verbose
        Enable debug logging.
    """
    _set_verbose(verbose)

    try:
        cert = load_certificate(certificate)
    except CertificateError as e:
        LOGGER.error("✗ %s", e)
        raise SystemExit(2) from e
    if cert.evidence is None:
        LOGGER.error("✗ %s holds no evidence table", certificate)
        raise SystemExit(2)
    print(emit_table(cert.evidence, format), end="")


def settings() -> None:
    """Display the effective settings as JSON."""
    try:
        current = get_settings()
    except ConfigError as e:
        LOGGER.error("✗ %s", e)
        raise SystemExit(2) from e
    print(current.model_dump_json(indent=2))
