"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class NZFlowError(Exception):
    code = "error"


class ParameterError(NZFlowError):
    """A constructor argument violates its stated precondition."""

    code = "parameter"


class StructuralError(NZFlowError):
    """Mismatched carriers: mixed-group operands, unknown edge ids, ..."""

    code = "structural"


class ConnectionSetError(NZFlowError):
    code = "connection-set"


class GraphError(NZFlowError):
    code = "graph"


class QuotientError(NZFlowError):
    code = "quotient"


class CapacityError(NZFlowError):
    """An exhaustive procedure was asked to exceed its practical size limit."""

    code = "capacity"


class ParityError(NZFlowError):
    code = "parity"


class LiftError(NZFlowError):
    code = "lift"


class NormalizationError(NZFlowError):
    code = "normalization"


class TransversalError(NZFlowError):
    code = "transversal"


class CertificateError(NZFlowError):
    code = "certificate"


class PlanError(NZFlowError):
    code = "plan"


class ConstructionError(NZFlowError):
    code = "construction"


class UnsupportedFamilyError(NZFlowError):
    code = "unsupported-family"
