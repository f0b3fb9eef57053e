"""Error types shared across the toolchain.

Input errors (bad files, bad flags) derive from :class:`InputError` and make
the CLI exit with status 1.  :class:`InternalError` signals a broken solver
invariant and exits with status 2.
"""


class OmegaRlError(Exception):
    pass


class InputError(OmegaRlError):
    pass


class InternalError(OmegaRlError):
    pass


class SourceError(InputError):
    """An error with a position in an input file."""

    def __init__(self, message, filename="<input>", line=0, col=0):
        self.filename = filename
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{filename}:{line}:{col}: {message}")


# --- PRISM front end ---------------------------------------------------

class PrismSyntaxError(SourceError):
    pass


class PrismTypeError(SourceError):
    pass


class UnknownIdentifier(SourceError):
    pass


class BadModelKind(SourceError):
    pass


class DivisionByZero(InputError):
    pass


# --- model construction ------------------------------------------------

class DeadlockState(InputError):
    pass


class ProbabilitySumError(InputError):
    pass


class UnassignedAction(InputError):
    pass


class MissingDecision(InputError):
    pass


# --- HOA front end ------------------------------------------------------

class HoaSyntaxError(SourceError):
    pass


class UnsupportedFeature(SourceError):
    pass


class UnsupportedAcceptance(InputError):
    pass


# --- product / solver ---------------------------------------------------

class NondeterministicAutomatonOnGame(InputError):
    pass


class NoConvergence(InternalError):
    pass


# --- learning -----------------------------------------------------------

class DisabledAction(InputError):
    pass


class UnknownScheme(InputError):
    pass


class DigestMismatch(InputError):
    pass


class QTableParseError(InputError):
    pass
