"""Constants shared by the termination checker modules."""

from enum import Enum, IntEnum

VERSION = "0.1.0"


class EVENTS(IntEnum):
    """Session events."""

    DEFINED = 0
    CALL = 1
    VERDICT = 2
    RESULT = 3
    ERROR = 4


class ExitCode(IntEnum):
    """Process exit status of the command line driver."""

    OK = 0
    PARSE_ERROR = 1
    RUNTIME_ERROR = 2
    STRICT_FAILURE = 3


class RuntimeErrorKind(str, Enum):
    """Reasons an evaluation can go wrong."""

    UNBOUND_VARIABLE = "unbound-variable"
    NO_MATCHING_BRANCH = "no-matching-branch"
    MISSING_LABEL = "missing-label"
    APPLY_NON_FUNCTION = "apply-non-function"
    CASE_NON_CONSTRUCTOR = "case-non-constructor"
    PROJECT_NON_TUPLE = "project-non-tuple"
    FUEL_EXHAUSTED = "fuel-exhausted"
    RECURSION_DEPTH = "recursion-depth"


RESERVED_WORDS = frozenset({"case", "of", "let", "in"})
