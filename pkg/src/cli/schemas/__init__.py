"""
Schemas da linha de comando - Importações centralizadas.

Uso:
    from src.cli.schemas import FieldInput, PortraitReport
"""

# Entrada
from src.cli.schemas.field_input import (
    FieldInput,
    load_field_input
)

# Relatório
from src.cli.schemas.report import (
    PortraitReport,
    SCHEMA_VERSION
)

# Varredura
from src.cli.schemas.sweep import (
    SweepSummary,
    parse_grid,
    write_sweep_csv,
    CSV_COLUMNS,
    DEFAULT_EPS_GRID
)

# Auditoria
from src.cli.schemas.audit import (
    AuditReport,
    AuditFormSummary,
    AuditMismatch
)

__all__ = [
    # Entrada
    "FieldInput",
    "load_field_input",
    # Relatório
    "PortraitReport",
    "SCHEMA_VERSION",
    # Varredura
    "SweepSummary",
    "parse_grid",
    "write_sweep_csv",
    "CSV_COLUMNS",
    "DEFAULT_EPS_GRID",
    # Auditoria
    "AuditReport",
    "AuditFormSummary",
    "AuditMismatch",
]
