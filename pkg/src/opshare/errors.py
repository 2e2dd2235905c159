"""Exception types shared across the package."""


class OpShareError(Exception):
    """Base class for every error this package raises deliberately."""


class DimensionMismatch(OpShareError):
    """Amplitude count, matrix shape, or register size does not fit."""


class ZeroNorm(OpShareError):
    """A state vector with zero norm was supplied or produced."""


class DuplicateLabel(OpShareError):
    """A qubit label occurs more than once where labels must be unique."""


class UnknownQubit(OpShareError):
    """An operation addressed a qubit label not present in the register."""


class SameQubit(OpShareError):
    """A two-qubit operation addressed the same qubit twice."""


class LabelMismatch(OpShareError):
    """Two states cover different qubit label sets."""


class NotUnitary(OpShareError):
    """A matrix failed the unitarity gate at construction."""


class NormViolation(OpShareError):
    """Channel coefficients violate their normalization constraint."""


class UnownedQubit(OpShareError):
    """System setup left a qubit without exactly one owner."""


class NotOwner(OpShareError):
    """A party acted on a qubit it does not own (a protocol bug)."""


class BasisArity(OpShareError):
    """Measurement basis does not match the number of qubits given."""


class SelfSend(OpShareError):
    """A classical message was addressed to its own sender."""


class DivisionByZero(OpShareError):
    """Efficiency requested with zero total resource count."""


class ConfigParse(OpShareError):
    """A run configuration document or flag value is malformed."""


class InvariantBreach(OpShareError):
    """An internal consistency check failed; results must not be trusted."""
