"""CLI entry point for lclwork."""

import logging
from inspect import BoundArguments
from typing import Annotated, Any, Callable

import cyclopts
from rich.console import Console
from rich.logging import RichHandler

from lclwork import __version__
from lclwork.commands import run, settings, table, verify

#: Logger instance.
LOGGER = logging.getLogger(__name__)

app = cyclopts.App(
    name="lclwork",
    help="Exact search for LCL colorings and asymptotic dimension evidence over group actions",
    version=__version__,
    default_parameter=cyclopts.Parameter(parse=r"^[^_].*"),
)


@app.meta.default
def main(
    *tokens: Annotated[str, cyclopts.Parameter(show=False, allow_leading_hyphen=True)],
    verbose: bool = False,
) -> Any:  # pragma: no cover
    """Exact search for LCL colorings and asymptotic dimension evidence.

    Parameters
    ----------
    verbose
        Enable verbose mode.
    """
    rich_console = Console()
    rich_handler = RichHandler(console=rich_console)

    lvl = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=lvl, handlers=[rich_handler], format="%(message)s", datefmt="[%X]")

    command: Callable[..., Any]
    bound: BoundArguments
    command, bound, _ = app.parse_args(tokens, console=rich_console)  # type: ignore[assignment]
    return command(*bound.args, **bound.kwargs)


app.command(run)
app.command(verify)
app.command(table)
app.command(settings)


def cli() -> None:
    """CLI entry point for the lclwork command."""
    app.meta()


if __name__ == "__main__":
    cli()
