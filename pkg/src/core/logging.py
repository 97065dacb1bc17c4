"""
Sistema de logging centralizado usando Loguru.
Os logs vão sempre para stderr: stdout é reservado para os relatórios JSON.
"""

import sys
import logging
from pathlib import Path
from typing import Optional
from loguru import logger

from src.core.config import get_settings

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan> | "
    "<level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function} | {message} | {extra}"

# bibliotecas numéricas que falam pelo logging padrão
_QUIET_LIBRARIES = ("matplotlib", "matplotlib.font_manager", "PIL")


class InterceptHandler(logging.Handler):
    """Redireciona registros do logging padrão para o loguru"""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level_name = logger.level(record.levelname).name
        except ValueError:
            level_name = str(record.levelno)

        # sobe até o chamador real, fora do módulo logging
        frame, depth = logging.currentframe(), 2
        while frame is not None and frame.f_code.co_filename == logging.__file__:
            frame, depth = frame.f_back, depth + 1

        logger.opt(depth=depth, exception=record.exc_info).log(level_name, record.getMessage())


def setup_logging(
    log_level: Optional[str] = None,
    log_file: Optional[str] = None,
    enable_json: Optional[bool] = None
) -> None:
    """
    Configura o sistema de logging da aplicação.

    Args:
        log_level: Nível de log (DEBUG, INFO, WARNING, ERROR)
        log_file: Caminho para arquivo de log (opcional)
        enable_json: Se True, cada linha em stderr é um objeto JSON (serialize do loguru)
    """
    settings = get_settings()
    logger.remove()

    level = (log_level or settings.log_level).upper()
    as_json = settings.enable_json_logs if enable_json is None else enable_json

    # ========================================
    # CONSOLE (stderr)
    # ========================================
    if as_json:
        logger.add(sys.stderr, level=level, serialize=True, backtrace=False, diagnose=False)
    else:
        logger.add(
            sys.stderr,
            format=CONSOLE_FORMAT,
            level=level,
            colorize=True,
            backtrace=True,
            diagnose=settings.is_development
        )

    # ========================================
    # ARQUIVO (se especificado)
    # ========================================
    target = log_file or settings.log_file
    if target:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            target,
            format=FILE_FORMAT,
            level=level,
            serialize=as_json,
            rotation="50 MB",
            retention="14 days",
            compression="zip",
            diagnose=False
        )

    # ========================================
    # INTEGRAÇÃO COM LOGGING PADRÃO
    # ========================================
    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
    for name in _QUIET_LIBRARIES:
        library_logger = logging.getLogger(name)
        library_logger.handlers = [InterceptHandler()]
        library_logger.setLevel(logging.WARNING)
        library_logger.propagate = False

    logger.debug(f"Logging configured: level={level}, json={as_json}")


def log_analysis(
    degree: int,
    verdict: str,
    n_infinite: Optional[int],
    n_finite: Optional[int],
    duration_ms: float,
    warnings: int = 0
) -> None:
    """Loga o resultado de uma análise de campo de forma estruturada."""
    log_data = {
        "degree": degree,
        "verdict": verdict,
        "n_infinite": n_infinite,
        "n_finite": n_finite,
        "warnings": warnings,
        "duration_ms": round(duration_ms, 2)
    }
    message = f"Portrait assembled: n={degree} verdict={verdict} ({duration_ms:.0f}ms)"
    if warnings:
        logger.bind(**log_data).warning(f"{message} with {warnings} warning(s)")
    else:
        logger.bind(**log_data).info(message)


def log_oracle_run(
    kind: str,
    accepted: int,
    rejected: int,
    escaped: bool,
    duration_ms: float,
    error: Optional[str] = None
) -> None:
    """Loga uma integração numérica do oráculo."""
    log_data = {
        "kind": kind,
        "accepted": accepted,
        "rejected": rejected,
        "escaped": escaped,
        "duration_ms": round(duration_ms, 2)
    }

    if error is None:
        logger.bind(**log_data).debug(
            f"Oracle {kind}: {accepted} steps ({rejected} rejected), escaped={escaped}"
        )
    else:
        log_data["error"] = error
        logger.bind(**log_data).error(f"Oracle {kind} failed: {error}")


def log_consistency(form_id: str, matches: int, mismatches: int) -> None:
    """Loga o resumo de uma verificação de forma canônica."""
    log_data = {"form": form_id, "matches": matches, "mismatches": mismatches}
    level = "INFO" if mismatches == 0 else "WARNING"
    logger.bind(**log_data).log(
        level,
        f"Canonical form {form_id}: {matches} MATCH / {mismatches} MISMATCH"
    )
