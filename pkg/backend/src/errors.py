"""Exception hierarchy shared by every ordlab package."""
from __future__ import annotations

from src.utils.console import Style


class OrdlabError(RuntimeError):
    """Base class. Subclasses set a ``component`` tag and build ``message``."""

    component = "Ordlab"

    def __init__(self, headline: str, detail: str = "", *args):
        super().__init__(headline, *args)
        self.headline = headline
        self.detail = detail
        self.message = f"[{self.component}] {headline}"
        if detail:
            self.message += f" \n|__ {detail}"

    def __str__(self):
        return self.__repr__() + "\n" + Style("ERROR", self.message).__str__()

    def to_json(self) -> dict:
        return {"error": type(self).__name__, "message": self.headline, "detail": self.detail}


class FormulaError(OrdlabError):
    component = "Formula"


class FormulaSyntaxError(FormulaError):
    def __init__(self, text: str, position: int, reason: str = ""):
        self.text = text
        self.position = position
        pointer = text[:position] + " <HERE> " + text[position:]
        super().__init__(f"Syntax error at position {position}", reason or pointer)


class UnboundVariableError(FormulaError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__("Unbound variables", ", ".join(self.names))


class GoedelDecodeError(FormulaError):
    def __init__(self, code: int, reason: str):
        self.code = code
        super().__init__(f"Not a Goedel code: {code}", reason)


class OrdinalError(OrdlabError):
    component = "Ordinal"


class NotLimitError(OrdinalError):
    pass


class ProgramError(OrdlabError):
    component = "Program"


class ProgramSyntaxError(ProgramError):
    pass


class FuelExhaustedError(ProgramError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"Fuel exhausted after {budget} steps", "raise the fuel policy or lower the bound")


class UnknownOpcodeError(ProgramError):
    def __init__(self, opcode: str):
        self.opcode = opcode
        super().__init__(f"Unknown opcode <{opcode}>")


class OrderError(OrdlabError):
    component = "Order"


class LinearityError(OrderError):
    pass


class TemplateError(OrderError):
    pass


class ChainError(OrdlabError):
    component = "Stammbaum"


class CertificateError(OrdlabError):
    component = "Certificate"


class RefutationAborted(OrdlabError):
    component = "Refutation"


class StageMachineError(OrdlabError):
    component = "StageMachine"


class PreconditionViolation(StageMachineError):
    def __init__(self, stage: int, reason: str):
        self.stage = stage
        super().__init__(f"Precondition violated at stage {stage}", reason)


class ProgressionError(OrdlabError):
    component = "Progression"


class ArityError(ProgressionError):
    pass


class RegistryError(ProgressionError):
    pass


class ShapeError(ProgressionError):
    pass


class VerificationFailure(OrdlabError):
    component = "Verify"
