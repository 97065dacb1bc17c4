"""
Script para analisar os campos nomeados e mostrar os vereditos.

Rode: python scripts/run_fixtures.py [--verify]
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from loguru import logger

from src.core.exceptions import BaseAppException
from src.core.logging import setup_logging
from src.domain.fixtures import FIXTURES
from src.domain.services.portrait_processor import PortraitProcessor


def main() -> None:
    verify = "--verify" in sys.argv[1:]
    setup_logging()
    processor = PortraitProcessor(verify=verify)

    print("\n" + "=" * 60)
    print("🧭 RETRATOS DOS CAMPOS NOMEADOS")
    print("=" * 60 + "\n")

    for name, build in FIXTURES.items():
        field = build()
        try:
            result = processor.process(field)
        except BaseAppException as e:
            logger.exception(f"❌ Erro ao analisar {name}: {e.message}")
            print(f"❌ {name}: {e.message}\n")
            continue

        portrait = result.portrait
        print(f"• {name} (n={field.degree}, λ={field.lam:g})")
        print(f"   Veredito: {portrait.verdict.value}")
        print(f"   Infinito: {len(portrait.infinite)} | Finitos: {len(portrait.finite)}")
        if portrait.located_cycle is not None:
            print(f"   Ciclo: r* = {portrait.located_cycle.radius:.8f}")
        if portrait.continuum is not None and portrait.continuum.continuum_case is not None:
            print(f"   Caso do contínuo: {portrait.continuum.continuum_case.value}")
        if result.cross_validation is not None:
            print(f"   Oráculo: {result.cross_validation.contradictions} contradição(ões)")
        for warning in portrait.warnings:
            print(f"   ⚠️  {warning}")
        print()


if __name__ == "__main__":
    main()
