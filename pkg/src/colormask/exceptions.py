"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can print
``error: <code>: <message>`` on a single line.
"""


class ColorMaskError(Exception):
    code = "error"


class InvalidDimensionError(ColorMaskError, ValueError):
    code = "invalid-dimension"


class InvalidParameterError(ColorMaskError, ValueError):
    code = "invalid-parameter"


class InvalidConfigError(ColorMaskError, ValueError):
    code = "invalid-config"


class InvalidArgumentError(ColorMaskError, ValueError):
    code = "invalid-argument"


class KernelTooLargeError(ColorMaskError, ValueError):
    code = "kernel-too-large"


class WindowTooLargeError(ColorMaskError, ValueError):
    code = "window-too-large"


class ContractViolationError(ColorMaskError, IndexError):
    code = "contract-violation"


class BankFormatError(ColorMaskError):
    code = "bank-format"


class BadMagicError(BankFormatError):
    code = "bad-magic"


class VersionMismatchError(BankFormatError):
    code = "version-mismatch"


class TruncatedPayloadError(BankFormatError):
    code = "truncated-payload"


class LengthMismatchError(BankFormatError):
    code = "length-mismatch"
