"""
Configurações centralizadas do motor de análise usando Pydantic Settings.
Todas as tolerâncias numéricas são carregadas e validadas aqui, e copiadas
para cada relatório emitido.
"""

from functools import lru_cache
from typing import Any, Dict, Optional
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configurações globais da aplicação"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # ========================================
    # APLICAÇÃO
    # ========================================
    app_name: str = Field(default="Star Node Portraits")
    app_version: str = Field(default="0.1.0")
    environment: str = Field(default="development")
    log_level: str = Field(default="WARNING")
    log_file: Optional[str] = Field(default=None)
    enable_json_logs: bool = Field(default=False)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normaliza o nível de log"""
        level = v.upper()
        if level not in {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    # ========================================
    # POLINÔMIOS
    # ========================================
    zero_coeff_tol: float = Field(default=1e-12, gt=0)
    degeneracy_tol: float = Field(default=1e-12, gt=0)

    # ========================================
    # RAÍZES
    # ========================================
    root_multiplicity_tol: float = Field(default=1e-7, gt=0)
    root_merge_tol: float = Field(default=1e-9, gt=0)
    root_xtol: float = Field(default=1e-13, gt=0)

    # ========================================
    # EQUILÍBRIOS
    # ========================================
    f_zero_tol: float = Field(default=1e-9, gt=0)
    residual_tol: float = Field(default=1e-8, gt=0)

    # ========================================
    # ESTRUTURA GLOBAL
    # ========================================
    quad_abs_tol: float = Field(default=1e-8, gt=0)
    quad_limit: int = Field(default=400, ge=50)
    guard_grid: int = Field(default=4096, ge=64)
    guard_min_abs_g: float = Field(default=1e-6, gt=0)
    guard_g_floor: float = Field(default=1e-12, gt=0)

    # ========================================
    # ORÁCULO NUMÉRICO
    # ========================================
    ode_rtol: float = Field(default=1e-10, gt=0)
    ode_atol: float = Field(default=1e-10, gt=0)
    ode_min_step: float = Field(default=1e-14, gt=0)
    ode_max_steps: int = Field(default=2_000_000, ge=100)
    escape_radius: float = Field(default=1e6, gt=0)
    return_map_attempts: int = Field(default=3, ge=1, le=10)
    return_map_budget_turns: float = Field(default=10.0, gt=0)
    cycle_tol: float = Field(default=1e-9, gt=0)
    cycle_bracket_expansions: int = Field(default=12, ge=1)

    # ========================================
    # VERIFICAÇÃO CRUZADA
    # ========================================
    seed: int = Field(default=20240607)
    verify_trajectories: int = Field(default=6, ge=1)
    verify_t_end: float = Field(default=10.0, gt=0)
    verify_escape_factor: float = Field(default=50.0, gt=1)

    # ========================================
    # MÉTODOS AUXILIARES
    # ========================================

    @property
    def is_development(self) -> bool:
        """Verifica se está em modo desenvolvimento"""
        return self.environment.lower() in ("development", "dev", "local")

    def tolerances(self) -> Dict[str, float]:
        """Retorna apenas as tolerâncias numéricas (registradas nos relatórios)"""
        keys = [
            "zero_coeff_tol", "degeneracy_tol", "root_multiplicity_tol",
            "root_merge_tol", "root_xtol", "f_zero_tol", "residual_tol",
            "quad_abs_tol", "guard_min_abs_g", "guard_g_floor", "ode_rtol", "ode_atol",
            "ode_min_step", "escape_radius", "cycle_tol",
        ]
        return {key: float(getattr(self, key)) for key in keys}

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Cópia com sobrescritas vindas da linha de comando (ignora None)"""
        update = {k: v for k, v in overrides.items() if v is not None}
        if not update:
            return self
        return self.model_validate({**self.model_dump(), **update})


_active: Optional[Settings] = None


@lru_cache
def _load_settings() -> Settings:
    """Usa LRU cache para evitar recarregar .env múltiplas vezes."""
    return Settings()


def get_settings() -> Settings:
    """
    Retorna instância única de Settings (Singleton), ou a instância
    instalada por use_settings().
    """
    return _active if _active is not None else _load_settings()


def use_settings(settings: Optional[Settings]) -> None:
    """Instala (ou remove, com None) as configurações ativas do processo"""
    global _active
    _active = settings


if __name__ == "__main__":
    print("🔧 Validando configurações...")
    s = get_settings()
    print(f"✅ App: {s.app_name} v{s.app_version}")
    print(f"✅ Environment: {s.environment}")
    print(f"✅ Seed: {s.seed}")
    print("\n📋 Tolerâncias:")
    import json
    print(json.dumps(s.tolerances(), indent=2))
