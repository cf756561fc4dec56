"""Shared plumbing of the CLI verbs: run configs, report output, exit codes."""
import json
import logging
from typing import Any, Dict
import click
from pydantic import ValidationError
from rich.console import Console
from cartan_sub.core.errors import EXIT_USAGE, error_payload, exit_code_for
from cartan_sub.models.requests import RunConfig
from cartan_sub.services.run_service import run_service
from cartan_sub.utils.converters import render, write_text

logger = logging.getLogger(__name__)

# stdout carries reports
console = Console(stderr=True)

STATUS_STYLE = {0: "green", 1: "red", 2: "yellow"}

FORMATS = click.Choice(["json", "md"], case_sensitive=False)
REPORT_FILE = click.Path(dir_okay=False)


def build_config(
    ctx: click.Context,
    command: str,
    options: Dict[str, Any] = None,
    **fields: Any
) -> RunConfig:
    """
    RunConfig from the group options plus verb fields; None means "use the default".

    Raises:
        click.exceptions.Exit: the values fail validation (exit 1)
    """
    values = {k: v for k, v in (ctx.obj or {}).items() if v is not None}
    values.update({k: v for k, v in fields.items() if v is not None})
    try:
        return RunConfig(command=command, options=options or {}, **values)
    except ValidationError as e:
        logger.error(f"Invalid options for {command}: {e.errors()[0]['msg']}")
        message = str(e.errors()[0]["msg"])
        console.print_json(json.dumps({
            "error": {"message": message, "type": "ValidationError", "details": {}}
        }))
        ctx.exit(EXIT_USAGE)


def emit(report: Any, config: RunConfig) -> None:
    """Write the rendered report to --output, or to stdout."""
    text = render(report, config.output_format)
    if config.output:
        path = write_text(text, config.output)
        console.print(f"Report written to [bold]{path}[/bold]")
    else:
        click.echo(text, nl=False)


def fail(ctx: click.Context, exc: Exception) -> None:
    """Print the error payload on stderr and exit with its code."""
    code = exit_code_for(exc)
    if code == EXIT_USAGE and not hasattr(exc, "exit_code"):
        logger.exception(f"Unexpected error: {exc}")
    console.print_json(json.dumps(error_payload(exc), default=str))
    ctx.exit(code)


def execute(ctx: click.Context, config: RunConfig) -> None:
    """Run one command through the run service and exit with its code."""
    try:
        report, code = run_service.run(config)
        emit(report, config)
    except Exception as e:
        fail(ctx, e)
        return
    style = STATUS_STYLE.get(code, "white")
    console.print(f"[{style}]{config.command}: exit {code}[/{style}]")
    ctx.exit(code)
