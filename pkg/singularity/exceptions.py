"""
Errors raised by the singularity computations.

Every error carries a short machine-readable ``code`` which the CLI reports in
JSON mode. ``CheckFailure`` is special: it means a guaranteed invariant did
not hold, which signals an implementation bug rather than bad input.
"""


class SingkError(Exception):
    code = 'singk_error'

    def __init__(self, message=None, **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json_object(self):
        return {'status': 'Error', 'code': self.code, 'message': str(self)}


# Exact arithmetic
class ConductorMismatch(SingkError, RuntimeError):
    code = 'conductor_mismatch'

class NotRational(SingkError, ArithmeticError):
    code = 'not_rational'

class NotIntegral(SingkError, ArithmeticError):
    code = 'not_integral'


# Matrix groups
class OrderExceeded(SingkError, ValueError):
    code = 'order_exceeded'

    def __init__(self, max_order):
        super().__init__(f"Group closure exceeded {max_order} elements; the group is infinite or too large", max_order=max_order)
        self.max_order = max_order

class NonInvertibleGenerator(SingkError, ValueError):
    code = 'non_invertible_generator'

class NotNormal(SingkError, ValueError):
    code = 'not_normal'


# Characters and the representation ring
class GroupMismatch(SingkError, ValueError):
    code = 'group_mismatch'

class TableMismatch(SingkError, ValueError):
    code = 'table_mismatch'

class DegreeOutOfRange(SingkError, ValueError):
    code = 'degree_out_of_range'

class NonExactDivision(SingkError, ArithmeticError):
    code = 'non_exact_division'

class NotVirtualCharacter(SingkError, ValueError):
    code = 'not_virtual_character'

class AlgorithmFailure(SingkError, RuntimeError):
    code = 'algorithm_failure'


# Integer lattices
class FactorizationTooLarge(SingkError, ValueError):
    code = 'factorization_too_large'


# Singularities and tables
class NotFreeAction(SingkError, ValueError):
    code = 'not_free_action'

class DimensionMismatch(SingkError, ValueError):
    code = 'dimension_mismatch'

class NotCoprime(SingkError, ValueError):
    code = 'not_coprime'

class NotPairwiseCoprime(SingkError, ValueError):
    code = 'not_pairwise_coprime'

class InvalidLabel(SingkError, ValueError):
    code = 'invalid_label'

class PresetIntegrityError(SingkError, RuntimeError):
    code = 'preset_integrity'


class CheckFailure(SingkError, AssertionError):
    """A guaranteed structural property failed."""
    code = 'check_failure'
