"""Minimum-color tables and their rendering.

A row records, for one generating set ``S`` and bound ``k``, the least ``n``
for which the window has an S-separated ``n``-coloring with components of at
most ``k`` points. The evidence value takes, for each ``S``, the least such
``n`` over its exact rows, then the largest over all ``S``, minus one.
"""

import csv
import io
import logging
from collections.abc import Callable, Sequence
from typing import Literal

from rich.console import Console
from rich.table import Table
from tqdm import tqdm

from lclwork.groups import GenSet, GroupOracle, Window
from lclwork.models import AsdimEvidence, AsdimRow, SearchCertificate
from lclwork.search_service import DEFAULT_NODE_BUDGET, SearchProblem, exact_search

#: Logger instance.
LOGGER = logging.getLogger(__name__)

#: Columns of the comma-separated table.
CSV_HEADER = ("group", "s", "k", "min_n", "outcome", "nodes")

#: Builds the search window for a generating set and a bound.
type WindowPolicy = Callable[[GenSet, int], Window]


def min_colors_table(
    oracle: GroupOracle,
    gen_sets: Sequence[GenSet],
    k_schedule: Sequence[int],
    window_policy: WindowPolicy,
    *,
    n_max: int = 4,
    budget: int = DEFAULT_NODE_BUDGET,
    seed: int | None = None,
    labels: Sequence[str] | None = None,
    progress: bool = False,
) -> AsdimEvidence:
    """Scan ``n = 1, 2, ...`` with ``exact_search`` for every ``(S, k)`` pair.

    A row is ``exact`` when a witness was found at ``n`` and every smaller
    ``n`` was exhausted, ``exhausted`` when no ``n`` up to ``n_max`` works, and
    ``budget`` when a search ran out of nodes. Only exact rows enter the
    evidence value.
    """
    names = list(labels) if labels is not None else [f"S{i}" for i in range(len(gen_sets))]
    rows: list[AsdimRow] = []
    pairs = [(i, k) for i in range(len(gen_sets)) for k in sorted(set(k_schedule))]
    for s_index, k in tqdm(pairs, desc="Table rows", disable=not progress):
        gen_set = gen_sets[s_index]
        window = window_policy(gen_set, k)
        searches: list[SearchCertificate] = []
        outcome: Literal["exact", "exhausted", "budget"] = "exhausted"
        min_n = None
        for n in range(1, n_max + 1):
            cert = exact_search(SearchProblem(gen_set, n, k, window, budget, seed))
            searches.append(cert)
            if cert.outcome == "witness":
                outcome, min_n = "exact", n
                break
            if cert.outcome == "budget":
                outcome = "budget"
                LOGGER.warning("budget exhausted for %s, k=%d, n=%d", names[s_index], k, n)
                break
        rows.append(
            AsdimRow(
                s_index=s_index,
                s_label=names[s_index],
                s=gen_set.dump(),
                k=k,
                window_size=len(window),
                min_n=min_n,
                outcome=outcome,
                nodes=sum(c.nodes for c in searches),
                searches=searches,
            )
        )
    evidence = AsdimEvidence(group=oracle.describe(), rows=rows)
    evidence.value = evidence_value(rows)
    evidence.monotone, evidence.notes = check_monotone(rows, gen_sets)
    evidence.notes.append("window-scale evidence: exhausted rows hold only for their window and k")
    return evidence


def evidence_value(rows: Sequence[AsdimRow]) -> int | None:
    """Max over ``S`` of the min over exact rows of ``min_n``, minus one."""
    per_s: dict[int, int] = {}
    for row in rows:
        if row.outcome == "exact" and row.min_n is not None:
            per_s[row.s_index] = min(per_s.get(row.s_index, row.min_n), row.min_n)
    if not per_s:
        return None
    return max(per_s.values()) - 1


def check_monotone(
    rows: Sequence[AsdimRow], gen_sets: Sequence[GenSet]
) -> tuple[bool, list[str]]:
    """Check that ``min_n`` does not grow with ``k`` and does not shrink as ``S`` grows.

    Only exact rows are compared; the second condition only for nested sets.
    """
    notes: list[str] = []
    exact = {(r.s_index, r.k): r.min_n for r in rows if r.outcome == "exact"}
    for (s_index, k), n in sorted(exact.items()):
        for (other_s, other_k), other_n in sorted(exact.items()):
            if n is None or other_n is None:
                continue
            if other_s == s_index and other_k > k and other_n > n:
                notes.append(f"min n grows with k for S{s_index}: k={k} -> {other_k}")
            if (
                other_k == k
                and other_s != s_index
                and gen_sets[s_index].members < gen_sets[other_s].members
                and other_n < n
            ):
                notes.append(f"min n shrinks from S{s_index} to S{other_s} at k={k}")
    for note in notes:
        LOGGER.warning("monotonicity: %s", note)
    return not notes, notes


def _sorted_rows(evidence: AsdimEvidence) -> list[AsdimRow]:
    return sorted(evidence.rows, key=lambda r: (r.s_index, r.k))


def emit_table(evidence: AsdimEvidence, fmt: Literal["text", "csv"] = "text") -> str:
    """Render an evidence table as aligned text or comma-separated rows."""
    rows = _sorted_rows(evidence)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            min_n = "" if row.min_n is None else row.min_n
            writer.writerow([evidence.group, row.s_label, row.k, min_n, row.outcome, row.nodes])
        return buffer.getvalue()

    table = Table(title=f"Minimum colors for {evidence.group}", box=None)
    for name in CSV_HEADER[1:]:
        table.add_column(name, justify="left" if name in ("s", "outcome") else "right")
    for row in rows:
        min_n = "-" if row.min_n is None else str(row.min_n)
        table.add_row(row.s_label, str(row.k), min_n, row.outcome, str(row.nodes))
    console = Console(
        file=io.StringIO(), width=100, color_system=None, force_terminal=False, highlight=False
    )
    console.print(table)
    text = console.file.getvalue()  # type: ignore[attr-defined]
    if rows:
        value = "n/a" if evidence.value is None else str(evidence.value)
        text += f"evidence value: {value}\n"
    return text
