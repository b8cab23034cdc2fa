"""Exception hierarchy.

Two broad families matter to callers: InputError (bad user input: grammar,
file format, unknown example) and NumericalError (a well-formed request hit
a numerical precondition: degenerate frame, failed deflation, umbilic point,
...).  The CLI maps them to distinct exit codes and the service to distinct
HTTP statuses.
"""


class FrontalLabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FrontalLabError):
    """Problems with user-supplied input (exit code 2)."""


class ExprSyntaxError(InputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifierError(InputError):
    def __init__(self, name: str, offset: int, allowed):
        allowed = ", ".join(allowed)
        super().__init__(f"unknown identifier {name!r} (at offset {offset}; allowed: {allowed})")
        self.name = name
        self.offset = offset


class SurfaceFileError(InputError):
    """Malformed surface-definition file (missing key, bad number, ...)."""


class UnknownExampleError(InputError):
    pass


class NumericalError(FrontalLabError):
    """A numerical precondition failed (exit code 3)."""


class EvalDomainError(NumericalError):
    """log/sqrt of a non-positive value, or division by a (near-)zero value."""

    def __init__(self, message: str, node=None):
        if node is not None:
            message = f"{message} in {node}"
        super().__init__(message)
        self.node = node


class JetOrderError(NumericalError):
    """Requested a derivative beyond the truncation order of a jet."""


class DeflationError(NumericalError):
    """A jet expected to be divisible by v**k is not.

    This is the numerical detector for "not a frontal in this chart" (when it
    fires on the transverse derivative of the surface) and for "singular point
    is not pure-frontal" (when it fires on the transverse derivative of the
    unit normal).
    """


class FrameDegeneracyError(NumericalError):
    """The moving frame {f_u, h, nu} degenerated (E*G - F**2 <= 0)."""


class GammaNegativeError(NumericalError):
    """H**2 - K fell below -tolerance: inconsistent curvature data."""


class UmbilicError(NumericalError):
    """Principal-direction machinery requested at a (near-)umbilic point."""


class PreconditionError(NumericalError):
    """An operation was called outside its stated domain of validity."""


class VerificationFailure(FrontalLabError):
    """At least one verification check failed (exit code 4)."""
