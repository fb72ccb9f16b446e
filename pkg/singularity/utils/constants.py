# Enumerations shared by the pipelines, the reports and the CLI
from enum import Enum

class OutputMode(Enum):
    JSON = 'json'
    TEXT = 'text'

class CheckStatus(Enum):
    PASS = 'pass'
    FAIL = 'fail'
    # The structural guarantee only holds under a hypothesis the model violates
    NOT_APPLICABLE = 'not_applicable'

class Provenance(Enum):
    # Value produced by an algorithm in this package
    COMPUTED = 'computed'
    # Value asserted by a theorem under the input's hypotheses, never computed
    CITED = 'cited'

class ModelKind(Enum):
    MATRIX_GROUP = 'matrix-group'
    CYCLIC_WEIGHTS = 'cyclic-weights'

class KnorrerBase(Enum):
    # k[z]/(z^2): Z/2 at degree 0
    Z2 = 'z2'
    # The node xy = 0: Z at degree 0
    XY = 'xy'
    # k[e]/(e^m): Z/m at degree 0
    EPS = 'eps'

# Exit codes of the singk command
EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CHECK_FAILURE = 3

# Version of the JSON report layout
REPORT_SCHEMA_VERSION = 1

friendly_to_output_mode_map = {v.value: v for v in OutputMode}
friendly_to_check_status_map = {v.value: v for v in CheckStatus}
friendly_to_provenance_map = {v.value: v for v in Provenance}
friendly_to_model_kind_map = {v.value: v for v in ModelKind}
