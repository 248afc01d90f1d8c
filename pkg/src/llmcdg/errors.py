"""Exception hierarchy shared across the toolkit.

Every error a user can trigger from the CLI derives from :class:`CdgError`,
so the command-line layer can report it without a traceback.
"""

from __future__ import annotations


class CdgError(Exception):
    """Base class for all toolkit errors."""

    kind = "error"


class VerilogError(CdgError):
    """An error tied to a location in Verilog source."""

    kind = "verilog-error"

    def __init__(self, message: str, line: int | None = None, col: int | None = None, path: str = ""):
        self.message = message
        self.line = line
        self.col = col
        self.path = path
        super().__init__(self._format())

    def _format(self) -> str:
        where = self.path or "<source>"
        if self.line is not None:
            where += f":{self.line}"
            if self.col is not None:
                where += f":{self.col}"
        return f"{where}: {self.message}"


class LexError(VerilogError):
    kind = "lex-error"


class ParseError(VerilogError):
    kind = "syntax-error"


class UnsupportedConstructError(VerilogError):
    kind = "unsupported-construct"

    def __init__(self, construct: str, line: int | None = None, col: int | None = None, path: str = ""):
        self.construct = construct
        super().__init__(f"unsupported construct '{construct}'", line, col, path)


class SemanticError(VerilogError):
    """Unresolved names, bad widths, multiply-driven regs and similar."""

    kind = "semantic-error"


class ElaborationError(VerilogError):
    kind = "elaboration-error"


class SimulationError(CdgError):
    kind = "simulation-error"


class NonConvergenceError(SimulationError):
    kind = "non-convergence"


class StimulusError(CdgError):
    """Raised by the stimulus decoder; the message is written to be fed back to a model."""

    kind = "stimulus-error"


class JsonMalformedError(StimulusError):
    kind = "json-malformed"


class WrongShapeError(StimulusError):
    kind = "wrong-shape"


class UnknownSignalError(StimulusError):
    kind = "unknown-signal"

    def __init__(self, name: str, message: str):
        self.name = name
        super().__init__(message)


class ValueOutOfRangeError(StimulusError):
    kind = "value-out-of-range"

    def __init__(self, name: str, value, width: int, message: str):
        self.name = name
        self.value = value
        self.width = width
        super().__init__(message)


class GeneratorError(CdgError):
    kind = "generator-error"


class StateSpaceTooLargeError(GeneratorError):
    kind = "state-space-too-large"


class UnreachableError(GeneratorError):
    kind = "unreachable"

    def __init__(self, coverpoints: list, message: str = ""):
        self.coverpoints = list(coverpoints)
        super().__init__(message or f"{len(self.coverpoints)} coverpoint(s) unreachable from reset")


class ExtractionExhaustedError(GeneratorError):
    kind = "extraction-exhausted"

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        joined = "; ".join(self.errors)
        super().__init__(f"no valid stimulus after {len(self.errors)} attempt(s): {joined}")


class TransportError(CdgError):
    kind = "transport-error"


class ReplayExhaustedError(TransportError):
    kind = "replay-exhausted"


class ReplayMismatchError(TransportError):
    kind = "replay-fingerprint-mismatch"


class TranscriptFormatError(CdgError):
    kind = "transcript-parse-error"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class ConfigError(CdgError):
    kind = "config-error"
