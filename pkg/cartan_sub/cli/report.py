"""`report --all`: the acceptance table."""
import click
from rich.table import Table
from cartan_sub.config import settings
from cartan_sub.cli.common import FORMATS, REPORT_FILE, build_config, console, emit, fail
from cartan_sub.models.responses import PASS, ReportSummary
from cartan_sub.services.report_service import ReportService
from cartan_sub.services.run_service import exit_code_for_report


def status_table(summary: ReportSummary) -> Table:
    table = Table(title=f"Acceptance checks (seed {summary.seed})")
    table.add_column("check")
    table.add_column("status")
    table.add_column("detail", overflow="fold")
    for check in summary.checks:
        style = "green" if check.status == PASS else "red"
        table.add_row(check.name, f"[{style}]{check.status}[/{style}]", check.detail)
    return table


@click.command("report")
@click.option("--all", "run_all", is_flag=True, required=True, help="Run every acceptance check")
@click.option("--threads", type=int, help="Worker threads (CARTAN_SUB_THREADS by default)")
@click.option(
    "--parameters", type=click.Path(exists=True, dir_okay=False), help="YAML run parameters"
)
@click.option("--seed", type=int, help="Seed for every sampled check (overrides the group option)")
@click.option("--format", "output_format", type=FORMATS, help="Report format")
@click.option("--output", "-o", type=REPORT_FILE, help="Report file (stdout by default)")
@click.pass_context
def report(ctx, run_all, threads, parameters, seed, output_format, output):
    """Run the acceptance checks on a worker pool and print the PASS/FAIL table."""
    config = build_config(ctx, "report", seed=seed, output_format=output_format, output=output)
    try:
        service = ReportService(
            threads=threads,
            seed=config.seed,
            parameters=settings.load_run_parameters(parameters) if parameters else None,
        )
        summary = service.run_all()
        emit(summary, config)
    except Exception as e:
        fail(ctx, e)
        return
    console.print(status_table(summary))
    ctx.exit(exit_code_for_report(summary))
