"""
Main CLI application

Every workflow of the toolkit under one ``e2e-ner`` command.
"""

import sys
from collections.abc import Sequence
from importlib.metadata import PackageNotFoundError, version

import click
import typer
from pydantic import ValidationError
from rich.markup import escape

from ..core.config import settings
from ..core.exceptions import E2ENerError
from ..core.logging_config import setup_logging
from .common import CliState, console, err_console
from .corpus_commands import corpus_app
from .lm_commands import lm_app
from .model_commands import decode_command, experiment_command, pipeline_command, train_command
from .text_commands import augment_command, eval_command, transform_command

EXIT_USAGE = 1
EXIT_DATA = 2

app = typer.Typer(
    help="End-to-end named entity extraction with tagged CTC transcripts",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

# subcommand groups
app.add_typer(corpus_app, name="corpus")
app.add_typer(lm_app, name="lm")

app.command("train")(train_command)
app.command("decode")(decode_command)
app.command("pipeline")(pipeline_command)
app.command("experiment")(experiment_command)
app.command("eval")(eval_command)
app.command("augment")(augment_command)
app.command("transform")(transform_command)


@app.callback()
def configure(
    ctx: typer.Context,
    threads: int | None = typer.Option(
        None, "--threads", min=1, help="Worker thread cap (default: available cores)"
    ),
    seed: int | None = typer.Option(None, "--seed", help="Seed for every random choice"),
) -> None:
    """Set up logging and the global options."""
    setup_logging(settings.LOG_LEVEL, settings.LOG_FILE, settings.LOG_FORMAT)
    ctx.obj = CliState(threads=threads or settings.THREADS, seed=seed)


@app.command("version")
def show_version() -> None:
    """Show the installed version."""
    try:
        installed = version(settings.PROJECT_NAME)
    except PackageNotFoundError:
        installed = "unknown"
    console.print(f"[cyan]{settings.PROJECT_NAME} v{installed}[/cyan]")


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code.

    0 on success, 1 on usage errors, 2 on data errors (bad documents, missing
    or corrupt files).
    """
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = app(args=args, prog_name="e2e-ner", standalone_mode=False)
    except click.UsageError as e:
        e.show(file=sys.stderr)
        return EXIT_USAGE
    except click.exceptions.Abort:
        err_console.print("[red]aborted[/red]")
        return EXIT_USAGE
    except click.ClickException as e:
        e.show(file=sys.stderr)
        return EXIT_DATA
    except E2ENerError as e:
        err_console.print(f"[red]error:[/red] {escape(e.message)}", highlight=False)
        for key, value in e.details.items():
            err_console.print(f"  {key}: {value}", markup=False, highlight=False)
        return EXIT_DATA
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or e.title
        message = f"{escape(field)}: {escape(first['msg'])}"
        err_console.print(f"[red]error:[/red] {message}", highlight=False)
        return EXIT_DATA
    except OSError as e:
        err_console.print(f"[red]error:[/red] {escape(str(e))}", highlight=False)
        return EXIT_DATA
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
