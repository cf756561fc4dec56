"""Custom exceptions and error payloads."""
from typing import Any, Dict, Optional

# Exit codes of the command-line surface
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MATH = 2


class CartanSubError(Exception):
    """Base exception for the submersion engine."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_USAGE,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class UndeclaredInvariantError(CartanSubError):
    """Invariant head not declared in the vocabulary."""

    def __init__(self, head: str):
        super().__init__(
            message=f"Invariant '{head}' is not declared",
            details={"head": head}
        )


class IndexClassMismatchError(CartanSubError):
    """Index value outside the class of its slot."""

    def __init__(self, head: str, slot: int, index: Any, expected: str):
        super().__init__(
            message=f"Index {index!r} in slot {slot} of '{head}' is not in class '{expected}'",
            details={"head": head, "slot": slot, "index": str(index), "expected": expected}
        )


class TruncationError(CartanSubError):
    """Derivative order beyond the truncation order."""

    def __init__(self, head: str, order: int, truncation: int):
        super().__init__(
            message=f"Derivative order {order} of '{head}' exceeds truncation order {truncation}",
            details={"head": head, "order": order, "truncation": truncation}
        )


class MissingDRuleError(CartanSubError):
    """Generator without a structural equation."""

    def __init__(self, generator: str, geometry: str):
        super().__init__(
            message=f"No d-rule for generator '{generator}' in geometry '{geometry}'",
            details={"generator": generator, "geometry": geometry}
        )


class InconsistentRelationsError(CartanSubError):
    """Relation set reduces to 1 = 0."""

    def __init__(self, relation: str):
        super().__init__(
            message=f"Relation set is inconsistent: {relation} reduces to a nonzero constant",
            exit_code=EXIT_MATH,
            details={"relation": relation}
        )


class CyclicRewritingError(CartanSubError):
    """Rewriting did not reach a fixed point."""

    def __init__(self, passes: int):
        super().__init__(
            message=f"Rewriting rules did not stabilize after {passes} passes",
            exit_code=EXIT_MATH,
            details={"passes": passes}
        )


class UnknownGeometryError(CartanSubError):
    """Geometry name not in the catalog."""

    def __init__(self, name: str):
        super().__init__(
            message=f"Unknown geometry '{name}'",
            details={"geometry": name}
        )


class InvalidParametersError(CartanSubError):
    """Parameters outside the allowed range."""

    def __init__(self, name: str, message: str):
        super().__init__(
            message=f"Invalid parameters for '{name}': {message}",
            details={"geometry": name}
        )


class DimensionGuardError(CartanSubError):
    """Dimension for which the requested object carries no information."""

    def __init__(self, operation: str, dimension: int, reason: str):
        super().__init__(
            message=f"{operation} is not available for n={dimension}: {reason}",
            exit_code=EXIT_MATH,
            details={"operation": operation, "dimension": dimension, "reason": reason}
        )


class UnknownConstraintError(CartanSubError):
    """Constraint specification not recognized."""

    def __init__(self, name: str):
        super().__init__(
            message=f"Unknown constraint '{name}'",
            details={"constraint": name}
        )


class NonReductiveGeometryError(CartanSubError):
    """Geometry without covariant derivatives."""

    def __init__(self, name: str, reason: str):
        super().__init__(
            message=f"Geometry '{name}' is not reductive: {reason}",
            details={"geometry": name, "reason": reason}
        )


class StructureEquationError(CartanSubError):
    """d^2 of a generator does not vanish modulo the relations."""

    def __init__(self, generator: str, residual: str):
        super().__init__(
            message=f"d^2({generator}) does not vanish: residual {residual}",
            exit_code=EXIT_MATH,
            details={"generator": generator, "residual": residual}
        )


class CertificateReplayError(CartanSubError):
    """Certificate failed standalone re-verification."""

    def __init__(self, scenario: str, message: str):
        super().__init__(
            message=f"Certificate '{scenario}' does not replay: {message}",
            exit_code=EXIT_MATH,
            details={"scenario": scenario}
        )


class HeadNotInTableError(CartanSubError):
    """Invariant head absent from a seed table."""

    def __init__(self, head: str, table: str):
        super().__init__(
            message=f"Invariant '{head}' has no row in table '{table}'",
            details={"head": head, "table": table}
        )


class InvolutiveOrderingError(CartanSubError):
    """Seed table ordering violates the involutive rank rule."""

    def __init__(self, table: str, message: str):
        super().__init__(
            message=f"Table '{table}' is not in involutive ordering: {message}",
            details={"table": table}
        )


class GeometryDefinitionError(CartanSubError):
    """Invalid geometry definition file."""

    def __init__(self, path: str, message: str):
        super().__init__(
            message=f"Invalid geometry definition '{path}': {message}",
            details={"path": path}
        )


def error_payload(exc: Exception) -> Dict[str, Any]:
    """Render an exception in the report error shape."""
    if isinstance(exc, CartanSubError):
        return {
            "error": {
                "message": exc.message,
                "type": exc.__class__.__name__,
                "details": exc.details
            }
        }
    return {
        "error": {
            "message": "Internal error",
            "type": "InternalError",
            "details": {
                "exception": str(exc)
            }
        }
    }


def exit_code_for(exc: Exception) -> int:
    """Exit code for an exception raised during a run."""
    if isinstance(exc, CartanSubError):
        return exc.exit_code
    return EXIT_USAGE
