"""
Pipeline principal de análise.
Orquestra todo o fluxo: campo → raízes → equilíbrios → estrutura global → oráculo.
"""

import time
from typing import Optional

from loguru import logger

from src.core.config import Settings, get_settings
from src.core.exceptions import OracleError
from src.domain.models import AnalysisResult, CanonicalSpec, GlobalPortrait, StarField, Verdict
from src.domain.services.canonical import consistency_check, instantiate
from src.domain.services.global_structure import assemble_portrait
from src.infrastructure.oracle.cross_validation import cross_validate
from src.infrastructure.oracle.return_map import locate_cycle


class PortraitProcessor:
    """
    Processador central de campos.
    Coordena a análise simbólica, a localização numérica do ciclo e a
    verificação cruzada opcional.
    """

    def __init__(self, settings: Optional[Settings] = None, verify: bool = False, strict: bool = False):
        self.settings = settings or get_settings()
        self.verify = verify
        self.strict = strict

    def process(self, field: StarField, canonical: Optional[CanonicalSpec] = None) -> AnalysisResult:
        """
        Fluxo:
        1. Retrato global
        2. Ciclo limite localizado pelo mapa de retorno (quando o veredito é ciclo)
        3. Verificação cruzada (com verify=True)
        4. Consistência com a forma canônica (entrada canônica)
        """
        started = time.perf_counter()
        logger.info(f"Processing field of degree {field.degree} with lambda={field.lam:g}")

        # ========== 1. RETRATO ==========
        portrait = assemble_portrait(field, strict=self.strict)

        # ========== 2. CICLO ==========
        portrait = self._with_located_cycle(field, portrait)

        # ========== 3. ORÁCULO ==========
        summary = None
        if self.verify:
            summary = cross_validate(field, portrait, seed=self.settings.seed)

        # ========== 4. FORMA CANÔNICA ==========
        consistency = consistency_check(canonical) if canonical is not None else None

        return AnalysisResult(
            field=field,
            portrait=portrait,
            consistency=consistency,
            cross_validation=summary,
            duration_ms=(time.perf_counter() - started) * 1000,
        )

    def process_canonical(self, spec: CanonicalSpec) -> AnalysisResult:
        return self.process(instantiate(spec), canonical=spec)

    def _with_located_cycle(self, field: StarField, portrait: GlobalPortrait) -> GlobalPortrait:
        if portrait.verdict is not Verdict.LIMIT_CYCLE:
            return portrait
        if portrait.cycle is None:
            logger.warning("Cycle predicted without a criterion certificate: location skipped")
            return portrait
        try:
            profile = locate_cycle(field, portrait.cycle)
        except OracleError as exc:
            logger.warning(f"Cycle predicted but not located: {exc.message}")
            return portrait.model_copy(update={"warnings": portrait.warnings + (exc.message,)})
        return portrait.model_copy(update={"located_cycle": profile})
