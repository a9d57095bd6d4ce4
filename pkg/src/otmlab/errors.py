"""Exception hierarchy shared by all otmlab modules."""


class OTMLabError(Exception):
    """Base class for every error raised by otmlab."""

    #: short machine-readable name, surfaced by the command line front end
    name = "error"


class ParseError(OTMLabError, ValueError):
    """Malformed text. ``pos`` is a 0-based offset, ``line``/``col`` are 1-based."""

    name = "parse-error"

    def __init__(self, message, text="", pos=0, line=None, col=None):
        if line is None or col is None:
            line = text.count("\n", 0, pos) + 1
            col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.message = message
        self.pos = pos
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")


class UnsupportedRange(OTMLabError, ValueError):
    name = "unsupported-range"


class InvalidEnumeration(OTMLabError, ValueError):
    name = "invalid-enumeration"


class CodeError(OTMLabError, ValueError):
    """A set of ordinals that is not a code of any set."""

    name = "invalid-code"


class IllFoundedCode(CodeError):
    name = "ill-founded-code"


class NonExtensionalCode(CodeError):
    name = "non-extensional-code"


class AsmError(ParseError):
    name = "asm-error"


class ProgramError(OTMLabError, ValueError):
    name = "invalid-program"


class MissingOracle(OTMLabError):
    name = "missing-oracle"


class OracleUndefined(OTMLabError):
    name = "oracle-undefined"


class MachineFailure(OTMLabError):
    """A machine-backed transformer did not halt with a finite output."""

    name = "machine-failure"

    def __init__(self, outcome, detail=""):
        self.outcome = outcome
        super().__init__(f"{outcome}: {detail}" if detail else outcome)


class ProblemMismatch(OTMLabError, ValueError):
    name = "problem-mismatch"


class PreconditionViolation(OTMLabError, ValueError):
    name = "precondition-violation"


class EncodingMismatch(OTMLabError):
    name = "mismatch-across-encodings"


class MissingRule(OTMLabError):
    name = "missing-rule"
