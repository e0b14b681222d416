"""Batch runner: validates a run configuration, executes its tasks, and writes certificates.

This module contains the business logic behind ``lclwork run``.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from tqdm import tqdm

from lclwork.certificates import (
    lcl_payload,
    toolchain,
    verify_certificate,
    witness_payload,
    write_certificate,
)
from lclwork.config import (
    FreenessTask,
    GroupSpec,
    PiSnTask,
    RunConfig,
    SearchTask,
    Settings,
    SubshiftTask,
    TableTask,
    TaskSpec,
    VerifyTask,
    WitnessTask,
)
from lclwork.evidence import min_colors_table
from lclwork.exceptions import (
    ColoringError,
    ConfigError,
    GroupError,
    InvariantViolation,
    SizeLimitError,
    WitnessError,
)
from lclwork.file_utils import certificate_path
from lclwork.gamma_graph import (
    VertexMap,
    action_table,
    action_to_gamma_graph,
    is_gamma_map,
    lcl_to_gamma_graph,
    window_gamma_graph,
)
from lclwork.groups import GroupOracle, Space
from lclwork.lcl import (
    WindowConfiguration,
    first_match_map,
    freeness_lcl,
    interaction_support,
    pi_sn_generate,
    verify_pi_coloring,
)
from lclwork.models import Certificate, RunResult
from lclwork.search_service import SearchProblem, exact_search, heuristic_search
from lclwork.separation import (
    component_graph,
    is_s_separated,
    pi_to_separated_bound,
    separated_to_pi,
)
from lclwork.subshift import (
    WindowedSubshift,
    enumerate_window_configs,
    enumeration_report,
    extension_check,
)
from lclwork.witnesses import brick_witness, tree_band_witness

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Largest instance whose first-match map is also checked as a Gamma-map.
GAMMA_MAP_PATTERN_LIMIT = 500


@dataclass(frozen=True)
class RunContext:
    """Everything a task needs besides its own specification; picklable."""

    group: GroupSpec
    settings: Settings
    seed: int | None
    budget: int
    limit: int


@dataclass(frozen=True)
class TaskOutcome:
    """A certificate, or the kind and message of the error that prevented it."""

    certificate: Certificate | None = None
    error_kind: str | None = None
    message: str = ""


class TaskRunner:
    """Execute one task and build its certificate."""

    def __init__(self, context: RunContext, task: TaskSpec) -> None:
        self.context = context
        self.task = task
        self.settings = context.settings
        self.oracle: GroupOracle = context.group.build()

    def _certificate(self, outcome: str, **kwargs: Any) -> Certificate:
        return Certificate(
            task=self.task.model_dump(mode="json"),
            group=self.context.group.model_dump(mode="json"),
            outcome=outcome,
            toolchain=toolchain(),
            **kwargs,
        )

    def run(self) -> Certificate:
        """Dispatch on the task kind and return its unwritten certificate."""
        match self.task:
            case SearchTask():
                return self._search(self.task)
            case TableTask():
                return self._table(self.task)
            case VerifyTask():
                return self._verify(self.task)
            case PiSnTask():
                return self._pi_sn(self.task)
            case SubshiftTask():
                return self._subshift(self.task)
            case FreenessTask():
                return self._freeness(self.task)
            case WitnessTask():
                return self._witness(self.task)
        msg = f"unknown task {self.task!r}"  # pragma: no cover
        raise ConfigError(msg)  # pragma: no cover

    def _search(self, task: SearchTask) -> Certificate:
        limit = self.settings.set_power_limit
        gen_set = task.s.build(self.oracle, limit=limit)
        window = task.window.build(self.oracle, task.k, limit=limit)
        problem = SearchProblem(
            gen_set, task.n, task.k, window, self.context.budget, self.context.seed
        )
        if task.method == "heuristic":
            search = heuristic_search(problem, task.restarts)
        else:
            search = exact_search(problem)
        if search.outcome != "witness" or search.witness is None:
            return self._certificate(search.outcome, search=search)
        config = WindowConfiguration.from_values(window, search.witness)
        report = is_s_separated(
            config, gen_set, task.k, membership_limit=self.settings.membership_limit
        )
        extra: dict[str, Any] = {}
        if task.derive_lcl:
            lcl, assignment = separated_to_pi(config, gen_set, task.k, n=task.n)
            extra["lcl"] = lcl_payload(lcl)
            extra["assignment"] = [[window.dump_point(x), i] for x, i in assignment.items()]
            extra["statistics"] = {"derived_patterns": len(lcl), "in_scope": len(assignment)}
        return self._certificate(
            "witness",
            search=search,
            witness=witness_payload(config, gen_set, task.k, task.n),
            separation=report,
            **extra,
        )

    def _table(self, task: TableTask) -> Certificate:
        limit = self.settings.set_power_limit
        gen_sets = [s.build(self.oracle, limit=limit) for s in task.s_list]
        evidence = min_colors_table(
            self.oracle,
            gen_sets,
            task.k_schedule,
            lambda _s, k: task.window.build(self.oracle, k, limit=limit),
            n_max=task.n_max,
            budget=self.context.budget,
            seed=self.context.seed,
            labels=[s.label() for s in task.s_list],
        )
        outcome = "budget" if any(r.outcome == "budget" for r in evidence.rows) else "complete"
        return self._certificate(outcome, evidence=evidence, statistics={"value": evidence.value})

    def _verify(self, task: VerifyTask) -> Certificate:
        limit = self.settings.set_power_limit
        window = task.window.build(self.oracle, limit=limit)
        config = WindowConfiguration.from_values(window, task.colors)
        gen_set = task.s.build(self.oracle, limit=limit) if task.s is not None else None
        valid = True
        stats: dict[str, Any] = {}
        extra: dict[str, Any] = {}
        if gen_set is not None and task.k is not None:
            report = is_s_separated(
                config, gen_set, task.k, membership_limit=self.settings.membership_limit
            )
            extra["separation"] = report
            valid = report.verdict
        if task.lcl is not None:
            lcl = task.lcl.build(self.oracle, self.settings)
            extra["lcl"] = lcl_payload(lcl)
            verdict = verify_pi_coloring(config, lcl)
            stats["boundary_skipped"] = len(verdict.boundary_skipped)
            stats["interior_checked"] = len(verdict.assignment)
            if not verdict.ok:
                valid = False
                stats["failure"] = window.dump_point(verdict.failure)
            else:
                extra["assignment"] = [
                    [window.dump_point(x), i] for x, i in verdict.assignment.items()
                ]
                stats.update(self._first_match_checks(config, lcl, verdict.assignment, gen_set))
        extra["statistics"] = stats
        return self._certificate(
            "valid" if valid else "invalid",
            witness=witness_payload(config, gen_set, task.k if gen_set is not None else None),
            **extra,
        )

    def _first_match_checks(
        self,
        config: WindowConfiguration,
        lcl: Any,
        assignment: dict[Any, int],
        gen_set: Any,
    ) -> dict[str, Any]:
        stats: dict[str, Any] = {}
        if len(lcl) <= GAMMA_MAP_PATTERN_LIMIT:
            support = sorted(interaction_support(lcl))
            source = window_gamma_graph(config.space, support, points=list(assignment))
            target = lcl_to_gamma_graph(lcl, support)
            first = first_match_map(config, lcl, list(assignment))
            gamma_map = is_gamma_map(VertexMap.from_mapping(source, first), source, target)
            if not gamma_map.ok:
                msg = f"first-match map is not a Gamma-map at {gamma_map.violation!r}"
                raise InvariantViolation(msg)
            stats["gamma_map_edges"] = len(source)
        if lcl.origin.get("construction") == "pi_sn" and gen_set is not None:
            graph = component_graph(config, gen_set)
            stats["pi_sn_bound"] = pi_to_separated_bound(lcl, assignment, graph)
        return stats

    def _pi_sn(self, task: PiSnTask) -> Certificate:
        limit = self.settings.set_power_limit
        gen_set = task.s.build(self.oracle, limit=limit)
        lcl = pi_sn_generate(
            gen_set,
            task.n,
            task.pattern_window.build(self.oracle, limit=limit),
            window_limit=self.settings.pi_sn_window_limit,
            pattern_limit=self.settings.pattern_limit,
        )
        stats: dict[str, Any] = {
            "patterns": len(lcl),
            "max_domain": max((len(p) for p in lcl.patterns), default=0),
        }
        outcome = "generated"
        if task.check_window is not None:
            window = task.check_window.build(self.oracle, limit=limit)
            configs, truncated = enumerate_window_configs(lcl, window, self.context.limit)
            bound = 0
            for config in configs:
                assignment = first_match_map(config, lcl)
                graph = component_graph(config, gen_set)
                bound = max(bound, pi_to_separated_bound(lcl, assignment, graph))
            stats.update(
                {"colorings_checked": len(configs), "truncated": truncated, "bound": bound}
            )
            if truncated:
                outcome = "truncated"
        return self._certificate(outcome, lcl=lcl_payload(lcl), statistics=stats)

    def _subshift(self, task: SubshiftTask) -> Certificate:
        limit = self.settings.set_power_limit
        lcl = task.lcl.build(self.oracle, self.settings)
        window = task.window.build(self.oracle, limit=limit)
        enumeration = enumeration_report(lcl, window, self.context.limit)
        extra: dict[str, Any] = {}
        if task.extension_window is not None:
            larger = task.extension_window.build(self.oracle, limit=limit)
            extra["extension"] = extension_check(lcl, window, larger, self.context.limit)
        outcome = "nonempty" if enumeration.configurations else "empty"
        return self._certificate(
            outcome, lcl=lcl_payload(lcl), enumeration=enumeration, **extra
        )

    def _freeness(self, task: FreenessTask) -> Certificate:
        gamma = self.oracle.parse(task.gamma)
        lcl = freeness_lcl(self.oracle, gamma)
        space: Space
        extra: dict[str, Any] = {}
        if task.action is not None:
            space = task.action.build(self.oracle)
            support = sorted({self.oracle.identity, gamma, self.oracle.inv(gamma)})
            graph = action_to_gamma_graph(
                self.oracle, space.points, action_table(space, support), support
            )
            extra["gamma_graph"] = graph.to_payload()
        else:
            assert task.window is not None
            space = task.window.build(self.oracle, limit=self.settings.set_power_limit)
        found = WindowedSubshift(lcl, space).first()
        if found is None:
            return self._certificate("no-coloring", lcl=lcl_payload(lcl), **extra)
        return self._certificate(
            "colorable", lcl=lcl_payload(lcl), witness=witness_payload(found), **extra
        )

    def _witness(self, task: WitnessTask) -> Certificate:
        window = (
            task.window.build(self.oracle, limit=self.settings.set_power_limit)
            if task.window is not None
            else None
        )
        if task.scheme == "brick":
            result = brick_witness(self.oracle, task.radius, task.block, window)  # type: ignore[arg-type]
        else:
            result = tree_band_witness(self.oracle, task.radius, task.block, window)  # type: ignore[arg-type]
        return self._certificate(
            "verified",
            witness=witness_payload(result.config, result.gen_set, result.k, result.colors),
            separation=result.report,
            statistics={"k": result.k, "flagged": result.flagged, **result.params},
        )


def execute_task(context: RunContext, task: TaskSpec) -> TaskOutcome:
    """Run one task, turning expected failures into an outcome instead of raising.

    Module-level so that it can be sent to worker processes.
    """
    try:
        return TaskOutcome(TaskRunner(context, task).run())
    except InvariantViolation as e:
        return TaskOutcome(error_kind="invariant", message=str(e))
    except SizeLimitError as e:
        return TaskOutcome(error_kind="limit", message=str(e))
    except (WitnessError, ColoringError, GroupError, ValueError) as e:
        return TaskOutcome(error_kind="error", message=str(e))


class RunService:
    """Service for running a batch of tasks and writing certificates."""

    def __init__(
        self,
        config: RunConfig,
        settings: Settings,
        output_dir: Path,
        *,
        jobs: int = 1,
        progress: bool = True,
    ) -> None:
        """Initialize the run service.

        Parameters
        ----------
        config
            The validated run configuration.
        settings
            Tool-wide limits and defaults.
        output_dir
            Directory receiving the certificates.
        jobs
            Number of tasks executed concurrently.
        progress
            Show a progress bar.
        """
        self.config = config
        self.settings = settings
        self.output_dir = output_dir
        self.jobs = max(1, jobs)
        self.progress = progress
        self.result = RunResult()
        self.context = RunContext(
            group=config.group,
            settings=settings,
            seed=config.seed,
            budget=config.budget or settings.node_budget,
            limit=config.limit or settings.enumeration_limit,
        )

    def validate(self) -> GroupOracle:
        """Build the group and every task's windows and sets before computing anything.

        Raises
        ------
        ConfigError
            If the group or some task does not describe valid objects.
        """
        try:
            oracle = self.config.group.build()
            limit = self.settings.set_power_limit
            for i, task in enumerate(self.config.tasks):
                for name in ("s", "window", "pattern_window", "check_window", "extension_window"):
                    spec = getattr(task, name, None)
                    if spec is not None:
                        spec.build(oracle, limit=limit)
                for spec in getattr(task, "s_list", []):
                    spec.build(oracle, limit=limit)
                lcl_spec = getattr(task, "lcl", None)
                if lcl_spec is not None:
                    lcl_spec.check(oracle, self.settings)
                if isinstance(task, FreenessTask):
                    freeness_lcl(oracle, oracle.parse(task.gamma))
                    if task.action is not None:
                        task.action.build(oracle)
                LOGGER.debug("task %d (%s) validated", i + 1, task.task)
        except (ValueError, SizeLimitError) as e:
            msg = f"invalid run configuration: {e}"
            raise ConfigError(msg) from e
        return oracle

    def run(self) -> RunResult:
        """Validate, execute all tasks, then write and re-verify certificates in task order.

        Returns
        -------
        RunResult
            Summary of the run.

        Raises
        ------
        ConfigError
            If validation fails; nothing is computed or written.
        InvariantViolation
            If a task falsified an invariant or a written certificate fails
            re-verification.
        """
        oracle = self.validate()
        tasks = self.config.tasks
        LOGGER.info("Running %d tasks over %s", len(tasks), oracle.describe())
        outcomes: list[TaskOutcome]
        if self.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = pool.map(execute_task, [self.context] * len(tasks), tasks)
                outcomes = list(
                    tqdm(futures, total=len(tasks), desc="Tasks", disable=not self.progress)
                )
        else:
            outcomes = [
                execute_task(self.context, task)
                for task in tqdm(tasks, desc="Tasks", disable=not self.progress)
            ]

        for index, (task, outcome) in enumerate(zip(tasks, outcomes, strict=True)):
            label = f"task {index + 1} ({task.task})"
            if outcome.error_kind == "invariant":
                msg = f"{label}: {outcome.message}"
                raise InvariantViolation(msg)
            if outcome.certificate is None:
                if outcome.error_kind == "limit":
                    self.result.budget_hits += 1
                self.result.errors.append(f"{label}: {outcome.message}")
                self.result.outcomes.append("error")
                continue
            path = certificate_path(self.output_dir, index, task.task)
            write_certificate(path, outcome.certificate)
            verdict = verify_certificate(path)
            if not verdict.verdict:
                msg = f"{label}: written certificate fails re-verification: {verdict.violation}"
                raise InvariantViolation(msg)
            if outcome.certificate.outcome == "budget":
                self.result.budget_hits += 1
            self.result.certificates_written.append(str(path))
            self.result.outcomes.append(outcome.certificate.outcome)
            LOGGER.debug("%s: %s -> %s", label, outcome.certificate.outcome, path)
        return self.result
