# import libs
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table
# local
from .app import cmd_embed, cmd_evaluate, cmd_explain, cmd_synth, cmd_train
from .config import __description__, __version__, get_config
from .errors import BiteNetError, ConfigError
from .models import AggregateReport, MetricReport, RunConfig
from .utils import load_config_file, merge_config, nest_keys, parse_assignments

# NOTE: logger
logger = logging.getLogger(__name__)

COMMANDS = ("synth", "train", "evaluate", "embed", "explain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitenet",
        description=f"{__description__}: bidirectional temporal encoder for patient journeys",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS, help="Pipeline step to run")
    parser.add_argument("--config", metavar="PATH", help="key=value or YAML run configuration")
    parser.add_argument(
        "--set", dest="overrides", metavar="KEY=VALUE", action="append", default=[],
        help="Override one configuration key (repeatable), e.g. model.d=32")
    parser.add_argument("--force", action="store_true", help="Overwrite existing outputs")
    parser.add_argument("--seeds", metavar="S1,S2,...", help="Training seeds, e.g. 1,2,3")
    parser.add_argument("--log-level", help="Override BITENET_LOG_LEVEL")
    return parser


def _describe_validation(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        where = ".".join(str(p) for p in item.get("loc", ()))
        parts.append(f"{where}: {item.get('msg', 'invalid value')}")
    return "; ".join(parts)


def resolve_config(
    config_path: Optional[str] = None,
    overrides: Sequence[str] = (),
    force: bool = False,
    seeds: Optional[str] = None
) -> RunConfig:
    """
    Merge defaults, the config file and ``--set`` overrides (highest wins).

    Raises
    ------
    ConfigError
        Unreadable file, malformed override or a value that fails validation;
        the message names the offending key.
    """
    document: Dict[str, Any] = {}
    if config_path:
        document = load_config_file(config_path)
    document = merge_config(document, nest_keys(parse_assignments(overrides, source="--set")))
    if force:
        document["force"] = True
    if seeds is not None:
        document["seeds"] = seeds
    try:
        return RunConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(f"invalid configuration: {_describe_validation(e)}") from e


def setup_logging(level: Optional[str] = None) -> None:
    settings = get_config()
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format=settings.log_format,
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _report_table(title: str, flat: Dict[str, Any]) -> Table:
    table = Table(title=title)
    table.add_column("metric")
    table.add_column("value", justify="right")
    for key, value in flat.items():
        table.add_row(key, value)
    return table


def print_report(console: Console, report: MetricReport, title: str = "Test metrics") -> None:
    console.print(_report_table(title, {k: f"{v:.4f}" for k, v in report.flat().items()}))


def print_aggregate(console: Console, aggregate: AggregateReport) -> None:
    rows = {k: f"{s.mean:.4f} ± {s.std:.4f}" for k, s in aggregate.metrics.items()}
    console.print(_report_table(f"Test metrics over seeds {aggregate.seeds}", rows))


def main(argv: Optional[List[str]] = None) -> int:
    """Console entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    console = Console()
    errors = Console(stderr=True)

    try:
        config = resolve_config(args.config, args.overrides, args.force, args.seeds)
        if args.command == "synth":
            files = cmd_synth(config)
            console.print(f"wrote {files.journeys}, {files.categories}, {files.truth}")
        elif args.command == "train":
            outcome = cmd_train(config)
            if outcome.aggregate is not None:
                print_aggregate(console, outcome.aggregate)
            else:
                print_report(console, outcome.reports[0])
        elif args.command == "evaluate":
            print_report(console, cmd_evaluate(config), title="Evaluation")
        elif args.command == "embed":
            console.print(f"wrote {cmd_embed(config)}")
        elif args.command == "explain":
            path, _ = cmd_explain(config)
            console.print(f"wrote {path}")
    except BiteNetError as e:
        errors.print(f"[bold red]error:[/bold red] {escape(str(e))}", highlight=False)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
