"""
Linha de comando principal.
Registra os subcomandos e traduz exceções em códigos de saída.
"""

import json
from typing import Any, Optional

import click
from loguru import logger
from pydantic import ValidationError

from src.cli.commands.analyze import analyze
from src.cli.commands.audit import audit
from src.cli.commands.portrait import portrait
from src.cli.commands.sweep import sweep
from src.core.config import get_settings
from src.core.exceptions import BaseAppException
from src.core.logging import setup_logging

settings = get_settings()


class PortraitGroup(click.Group):
    """
    Grupo que converte erros em documento JSON no stderr:
        0 sucesso, 2 entrada, 3 motor ou oráculo, 4 pré-condição
    """

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except BaseAppException as exc:
            logger.debug(f"{type(exc).__name__}: {exc.message}")
            click.echo(json.dumps(exc.to_dict()), err=True)
            ctx.exit(exc.exit_code)
        except ValidationError as exc:
            click.echo(json.dumps({
                "error": "InputSchemaError",
                "message": str(exc).splitlines()[0],
                "details": {"errors": len(exc.errors())},
            }), err=True)
            ctx.exit(2)


@click.group(cls=PortraitGroup)
@click.version_option(settings.app_version, prog_name=settings.app_name)
@click.option("--log-level", default=None, help="Log level (stderr)")
@click.option("--json-logs", is_flag=True, default=False, help="Structured JSON log lines")
def cli(log_level: Optional[str], json_logs: bool) -> None:
    """Phase portraits of planar star-node fields with homogeneous nonlinearity."""
    setup_logging(log_level=log_level, enable_json=json_logs or None)


cli.add_command(analyze)
cli.add_command(portrait)
cli.add_command(sweep)
cli.add_command(audit)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
