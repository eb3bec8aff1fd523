"""Exception hierarchy shared by every module.

The CLI maps these onto stable exit codes, so new errors should subclass
one of the three families below rather than ``Exception`` directly.
"""


class MildiscError(Exception):
    """Base class for all package errors."""


# -- usage / parameter family (exit 2) --------------------------------------

class ParameterError(MildiscError, ValueError):
    """An argument is outside its documented domain."""


# -- input family (exit 3) ---------------------------------------------------

class InputError(MildiscError):
    """The input data or file could not be used."""


class StructuralError(InputError):
    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class EmptyDatasetError(InputError):
    pass


class UnusableDatasetError(InputError):
    pass


class UnsupportedFeatureError(InputError):
    def __init__(self, attribute, kind):
        super().__init__(f"attribute {attribute!r} has unsupported type {kind!r}")
        self.attribute = attribute
        self.kind = kind


# -- contract family (exit 4) ------------------------------------------------

class ContractError(MildiscError):
    """A caller broke an operation's precondition."""


class AllMissingError(ContractError):
    pass


class AttributeTypeError(ContractError, TypeError):
    pass


class DomainError(ContractError):
    """A training value fell outside the partition's [d_min, d_max] range."""


class SchemaError(ContractError):
    def __init__(self, missing=(), unexpected=()):
        self.missing = tuple(missing)
        self.unexpected = tuple(unexpected)
        parts = []
        if self.missing:
            parts.append("missing from data: " + ", ".join(self.missing))
        if self.unexpected:
            parts.append("not covered by schemes: " + ", ".join(self.unexpected))
        super().__init__("attribute mismatch; " + "; ".join(parts))
