"""
Schema do documento de entrada (campo por coeficientes ou forma canônica).
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.core.exceptions import InputSchemaError
from src.domain.models import CanonicalSpec, StarField
from src.domain.services.canonical import instantiate


class FieldInput(BaseModel):
    """
    Exatamente uma das formas:
        {"lambda": 1.0, "degree": 3, "Q1": [...], "Q2": [...]}
        {"canonical": {"degree": 3, "form_id": "IX", ...}}
    Coeficientes em ordem crescente de k (c_k ↔ x^(n−k) y^k).
    """

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    lam: Optional[float] = Field(None, alias="lambda")
    degree: Optional[int] = Field(None, ge=2)
    q1: Optional[List[float]] = Field(None, alias="Q1")
    q2: Optional[List[float]] = Field(None, alias="Q2")
    canonical: Optional[CanonicalSpec] = None

    @model_validator(mode="after")
    def exactly_one_form(self) -> "FieldInput":
        explicit = [self.lam, self.degree, self.q1, self.q2]
        if self.canonical is not None:
            if any(v is not None for v in explicit):
                raise ValueError("give either coefficients or canonical, not both")
            return self
        if any(v is None for v in explicit):
            raise ValueError("coefficient input needs lambda, degree, Q1 and Q2")
        for name, coeffs in (("Q1", self.q1), ("Q2", self.q2)):
            if len(coeffs) != self.degree + 1:
                raise ValueError(f"{name} needs degree+1 = {self.degree + 1} coefficients")
        return self

    def to_field(self) -> StarField:
        """
        Raises:
            ParamConstraintViolatedError: parâmetros canônicos inválidos
            InputSchemaError: campo inválido (λ = 0, Q ≡ 0)
        """
        if self.canonical is not None:
            return instantiate(self.canonical)
        try:
            return StarField.build(self.lam, tuple(self.q1), tuple(self.q2))
        except ValidationError as exc:
            raise InputSchemaError(_first_error(exc)) from exc


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    return f"{location}: {error['msg']}" if location else error["msg"]


def _read_document(source: str) -> Dict[str, Any]:
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8") if path.is_file() else source
        payload = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputSchemaError(f"cannot read JSON from {source[:80]!r}: {exc}") from exc
    if not isinstance(payload, dict):
        raise InputSchemaError("expected a JSON object")
    return payload


def load_field_input(source: str) -> FieldInput:
    """
    Aceita um caminho de arquivo ou o próprio documento JSON.

    Raises:
        InputSchemaError: JSON inválido ou fora do esquema
    """
    payload = _read_document(source)
    try:
        return FieldInput.model_validate(payload)
    except ValidationError as exc:
        raise InputSchemaError(_first_error(exc)) from exc
