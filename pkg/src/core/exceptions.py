"""
Exceções customizadas do motor de análise.
Cada família carrega o código de saída usado pela linha de comando.
"""

from typing import Optional, Any


class BaseAppException(Exception):
    """Exceção base da aplicação"""

    def __init__(
        self,
        message: str,
        exit_code: int = 3,
        details: Optional[dict[str, Any]] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        """Documento de erro emitido em stderr pela CLI"""
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


# ========================================
# EXCEÇÕES DE ENTRADA
# ========================================

class InputError(BaseAppException):
    """Erro nos dados de entrada"""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs: Any):
        details = {"field": field} if field else {}
        details.update(kwargs)
        super().__init__(message, exit_code=2, details=details)


class InputSchemaError(InputError):
    """Documento de entrada não segue o esquema"""

    def __init__(self, reason: str, **kwargs: Any):
        super().__init__(message=f"Invalid field specification: {reason}", **kwargs)


class ParamConstraintViolatedError(InputError):
    """Parâmetros fora da região válida da forma canônica"""

    def __init__(self, form_id: str, reason: str, **kwargs: Any):
        super().__init__(
            message=f"Form {form_id}: {reason}",
            field="params",
            form_id=form_id,
            **kwargs
        )


class RenderError(InputError):
    """Falha ao desenhar o retrato no disco de Poincaré"""

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Failed to render {path}: {reason}",
            field="svg",
            path=path
        )


# ========================================
# SINAIS DE RAMIFICAÇÃO DO MOTOR
# ========================================

class EngineError(BaseAppException):
    """Condição numérica que exige outro caminho de análise"""

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(message, exit_code=3, details=kwargs)


class IdenticallyZeroError(EngineError):
    """Polinômio identicamente nulo passado ao isolamento de raízes"""

    def __init__(self, scale: float):
        super().__init__(
            message="Polynomial is identically zero; use the degenerate path",
            scale=scale
        )


class DegenerateContinuumError(EngineError):
    """yQ1 = xQ2: todo ponto no infinito é equilíbrio"""

    def __init__(self, degree: int):
        super().__init__(
            message="F vanishes identically: every point at infinity is an equilibrium",
            degree=degree
        )


class NearZeroFError(EngineError):
    """f(θ0) numericamente nulo onde um equilíbrio finito seria afirmado"""

    def __init__(self, theta: float, f_value: float, tol: float):
        super().__init__(
            message=f"|f({theta:.12g})| = {abs(f_value):.3e} is below {tol:.1e}",
            theta=theta,
            f_value=f_value,
            tol=tol
        )


# ========================================
# EXCEÇÕES DE PRÉ-CONDIÇÃO
# ========================================

class PreconditionViolatedError(BaseAppException):
    """Hipótese de uma operação não satisfeita"""

    def __init__(self, operation: str, reason: str, **kwargs: Any):
        super().__init__(
            message=f"{operation}: {reason}",
            exit_code=4,
            details={"operation": operation, "reason": reason, **kwargs}
        )


# ========================================
# EXCEÇÕES DO ORÁCULO NUMÉRICO
# ========================================

class OracleError(BaseAppException):
    """Erro na integração numérica"""

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(message, exit_code=3, details=kwargs)


class StepUnderflowError(OracleError):
    """Passo exigido abaixo do mínimo permitido"""

    def __init__(self, t: float, step: float, norm: float):
        super().__init__(
            message=f"Step underflow at t={t:.6g} (h={step:.3e}, |y|={norm:.3e})",
            t=t,
            step=step,
            norm=norm
        )


class NoReturnError(OracleError):
    """Trajetória não voltou à seção dentro do orçamento de tempo"""

    def __init__(self, section_theta: float, r0: float, budget: float, escaped: bool = False):
        super().__init__(
            message=f"No return to section {section_theta:.6g} from r0={r0:.6g} within t={budget:.6g}",
            section_theta=section_theta,
            r0=r0,
            budget=budget,
            escaped=escaped
        )


class CycleNotFoundError(OracleError):
    """O critério simbólico indica ciclo mas o mapa de retorno não tem ponto fixo"""

    def __init__(self, reason: str, **kwargs: Any):
        super().__init__(message=f"Limit cycle not located: {reason}", **kwargs)


# ========================================
# CONSISTÊNCIA INTERNA
# ========================================

class InternalConsistencyError(BaseAppException):
    """Resultado contradiz um teorema verificado internamente"""

    def __init__(self, message: str, **kwargs: Any):
        super().__init__(message, exit_code=3, details=kwargs)
