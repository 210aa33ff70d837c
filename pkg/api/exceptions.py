"""Custom exceptions and error handling for the Hilbert triplets workbench."""
import logging
from typing import Any, Dict, Optional

# Set up logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE_ERROR = 2


class WorkbenchException(Exception):
    """Base exception class for the workbench."""
    def __init__(self, message: str, error_code: str = None, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(WorkbenchException):
    """Raised when input validation fails."""
    def __init__(self, message: str, field: str = None):
        if field:
            message = f"Validation error in field '{field}': {message}"
        super().__init__(message, "VALIDATION_ERROR", {"field": field} if field else None)


class NotationError(WorkbenchException):
    """Raised when an R-notation string cannot be parsed."""
    def __init__(self, text: str, reason: str):
        super().__init__(f"Cannot parse notation '{text}': {reason}", "NOTATION_ERROR")


# Structures and enrichments

class MixedSignatureError(WorkbenchException):
    """Raised when siblings of a nest do not share one signature."""
    def __init__(self, signatures):
        rendered = ", ".join(str(tuple(s)) for s in signatures)
        super().__init__(f"Siblings have unequal signatures: {rendered}", "MIXED_SIGNATURE")


class OutOfRangeError(WorkbenchException):
    """Raised when a leaf label falls outside {1..n}."""
    def __init__(self, value: Any, n: int):
        super().__init__(f"Label {value!r} is outside 1..{n}", "OUT_OF_RANGE")


class EmptySetError(WorkbenchException):
    """Raised when a nest contains an empty set."""
    def __init__(self, message: str = "Structures cannot contain empty sets"):
        super().__init__(message, "EMPTY_SET")


class MissingFullStructureError(WorkbenchException):
    """Raised when an enrichment lacks the full structure {1..n}."""
    def __init__(self, n: int):
        full = ",".join(str(i) for i in range(1, n + 1))
        super().__init__(f"Enrichment must contain the full structure {{{full}}}", "MISSING_FULL_STRUCTURE")


# Symmetry and classification

class NotASubgroupOfStabilizerError(WorkbenchException):
    """Raised when a group does not lie inside the stabilizer of an enrichment."""
    def __init__(self, message: str):
        super().__init__(message, "NOT_A_SUBGROUP_OF_STABILIZER")


class LevelCapExceededError(WorkbenchException):
    """Raised when an enrichment is deeper than the configured level cap."""
    def __init__(self, level: int, cap: int):
        super().__init__(f"Enrichment level {level} exceeds the cap {cap}", "LEVEL_CAP_EXCEEDED",
                         {"level": level, "cap": cap})


class ClassificationIncompleteError(WorkbenchException):
    """Raised when neither a model nor a detector matches an enrichment."""
    def __init__(self, enrichment_text: str):
        super().__init__(f"No model or detector matches {enrichment_text}", "CLASSIFICATION_INCOMPLETE")


class VerificationMismatchError(WorkbenchException):
    """Raised when a recomputation contradicts stored reference data."""
    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "VERIFICATION_MISMATCH", details)


class NotASubEnrichmentError(WorkbenchException):
    """Raised when a restriction is requested along a non-inclusion."""
    def __init__(self, message: str = "Source enrichment is not contained in the target"):
        super().__init__(message, "NOT_A_SUB_ENRICHMENT")


# Polynomial algebra

class NonUnitLeadingCoefficientError(WorkbenchException):
    """Raised when a marked basis element has a non-unit leading coefficient."""
    def __init__(self, polynomial_text: str):
        super().__init__(f"Leading coefficient of {polynomial_text} is not a unit", "NON_UNIT_LEADING_COEFFICIENT")


class ResourceBudgetExceededError(WorkbenchException):
    """Raised when a computation exceeds the configured degree or size caps."""
    def __init__(self, message: str):
        super().__init__(message, "RESOURCE_BUDGET_EXCEEDED")


class InconsistentSyzygyError(WorkbenchException):
    """Raised when the syzygy conditions cannot be solved consistently."""
    def __init__(self, message: str):
        super().__init__(message, "INCONSISTENT_SYZYGY")


class NotZeroDimensionalError(WorkbenchException):
    """Raised when a quotient ring is not finite dimensional."""
    def __init__(self, message: str = "Ideal is not zero-dimensional"):
        super().__init__(message, "NOT_ZERO_DIMENSIONAL")


def create_error_response(
    exit_code: int,
    message: str,
    error_code: str = None,
    details: Dict[str, Any] = None
) -> Dict[str, Any]:
    """Create a standardized error response."""
    error_response = {
        "error": True,
        "message": message,
        "exit_code": exit_code
    }

    if error_code:
        error_response["error_code"] = error_code

    if details:
        error_response["details"] = details

    return error_response


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the command-line exit code."""
    if isinstance(exc, SystemExit):
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE_ERROR
    return EXIT_DOMAIN_ERROR


def handle_exception(exc: BaseException) -> Dict[str, Any]:
    """Log an exception and build its error payload."""
    exit_code = exit_code_for(exc)
    if isinstance(exc, WorkbenchException):
        logger.error(f"Domain error: {exc.message}")
        return create_error_response(exit_code, exc.message, exc.error_code, exc.details)

    logger.error(f"Unhandled error: {str(exc)}", exc_info=True)
    return create_error_response(exit_code, "An unexpected error occurred", "INTERNAL_ERROR",
                                 {"reason": str(exc)})
