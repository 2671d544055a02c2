"""
Error hierarchy shared by both apps.

Every error carries the process exit code the ``phl`` command reports for it:
1 when a mathematical assertion failed, 2 for usage or input problems and
3 when a search ran out of budget.
"""


class PrimHomError(Exception):
    exit_code = 1
    default_message = "Computation failed"

    def __init__(self, message=None, **context):
        self.message = message or self.default_message
        self.context = context
        super().__init__(self.message)

    def to_dict(self):
        data = {'error': type(self).__name__, 'message': self.message}
        if self.context:
            data['context'] = {key: _plain(value) for key, value in self.context.items()}
        return data


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# Mathematical assertion failures (exit 1)

class NotAssociative(PrimHomError):
    default_message = "Multiplication table is not associative"


class InternalNonInteger(PrimHomError):
    default_message = "Expected an exact rational integer"


class OrthogonalityError(PrimHomError):
    default_message = "Character table fails exact orthogonality"


class ChevalleyWeilViolation(PrimHomError):
    default_message = "Deck action character differs from (n-1)*regular + trivial"


class ExhaustiveCheckFailed(PrimHomError):
    default_message = "Exhaustive verification failed"


class NotAnAutomorphism(PrimHomError):
    default_message = "Substitution and its inverse do not compose to the identity"


class WitnessVerificationFailed(PrimHomError):
    default_message = "Witness word does not evaluate to the claimed element"


# Usage and input errors (exit 2)

class UsageError(PrimHomError):
    exit_code = 2
    default_message = "Invalid input"


class BadParameters(UsageError):
    default_message = "Group parameters violate the defining relations"


class ClosureBoundExceeded(UsageError):
    default_message = "Closure exceeded the element bound"


class SchemaError(UsageError):
    default_message = "Input does not match the expected schema"


class NotAPGroup(UsageError):
    default_message = "Group order is not a prime power"


class NotSurjective(UsageError):
    default_message = "Homomorphism images do not generate the target group"


class EmptyWord(UsageError):
    default_message = "Word is empty after free reduction"


class PrimeSearchFailed(UsageError):
    default_message = "No suitable prime found below the search limit"


class DivisionByZero(UsageError, ZeroDivisionError):
    default_message = "Division by zero in a cyclotomic field"


# Budget (exit 3)

class StateBudgetExceeded(PrimHomError):
    exit_code = 3
    default_message = "State budget exceeded"
