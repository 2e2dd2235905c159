"""Channel states and gates used by both sharing schemes.

The Pauli Y here is the real matrix |0><1| - |1><0| (so Y*Y = -I); the
correction identities of the schemes hold exactly under it, and success is
judged by phase-insensitive fidelity anyway.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DuplicateLabel, NormViolation
from .states import BELL_ORDER, BELL_VECTORS, BellOutcome, PureState, QubitId, Unitary

_SQRT2_INV = 1.0 / np.sqrt(2.0)
_SQRT3_INV = 1.0 / np.sqrt(3.0)

PAULI_MATRICES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, 1], [-1, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

_PAULI_GATES = {kind: Unitary(m, tag=kind) for kind, m in PAULI_MATRICES.items()}


def pauli(kind: str) -> Unitary:
    """One of the Pauli operators I, X, Y, Z (Y in its real form)."""
    if kind not in _PAULI_GATES:
        raise ValueError(f"unknown Pauli kind {kind!r}")
    return _PAULI_GATES[kind]


def target_state(a: complex, b: complex, label: QubitId) -> PureState:
    """The single-qubit state a|0> + b|1> to be operated on remotely."""
    misfit = abs(abs(a) ** 2 + abs(b) ** 2 - 1.0)
    if misfit > 1e-9:
        warnings.warn(
            f"target amplitudes off unit norm by {misfit:.3e}; renormalizing",
            stacklevel=2,
        )
    return PureState((label,), np.array([a, b]))


def bell_state(kind: BellOutcome, q1: QubitId, q2: QubitId) -> PureState:
    """One of the four Bell states on (q1, q2)."""
    if q1 == q2:
        raise DuplicateLabel(f"Bell state needs two distinct labels, got {q1!r} twice")
    return PureState((q1, q2), BELL_VECTORS[BELL_ORDER.index(kind)])


def w_symmetric(g: QubitId, h: QubitId, j: QubitId) -> PureState:
    """The permutation-symmetric W state (|001> + |010> + |100>)/sqrt(3)."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b001] = amps[0b010] = amps[0b100] = _SQRT3_INV
    return PureState((g, h, j), amps)


@dataclass(frozen=True)
class WAsymmetricSpec:
    """Weights of the asymmetric W channel; |alpha|^2 + |beta|^2 must be 1."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        misfit = abs(abs(self.alpha) ** 2 + abs(self.beta) ** 2 - 1.0)
        if misfit > 1e-12:
            raise NormViolation(
                f"|alpha|^2 + |beta|^2 deviates from 1 by {misfit:.3e}"
            )


def w_asymmetric(spec: WAsymmetricSpec, g: QubitId, h: QubitId, j: QubitId) -> PureState:
    """The asymmetric W state (alpha|001> + beta|010> + |100>)/sqrt(2)."""
    amps = np.zeros(8, dtype=np.complex128)
    amps[0b001] = spec.alpha * _SQRT2_INV
    amps[0b010] = spec.beta * _SQRT2_INV
    amps[0b100] = _SQRT2_INV
    return PureState((g, h, j), amps)


@dataclass(frozen=True)
class OmegaSpec:
    """The shared operation, as rotation angles or an explicit 2x2 matrix.

    The angle form follows the usual one-qubit parameterization:
    rows ``[cos(t/2), -e^{il} sin(t/2)]`` and
    ``[e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]``.
    """

    theta: float = 0.0
    phi: float = 0.0
    lam: float = 0.0
    matrix: tuple[tuple[complex, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.matrix is not None:  # keep hashable whatever array-like came in
            rows = tuple(tuple(complex(x) for x in row) for row in self.matrix)
            object.__setattr__(self, "matrix", rows)


@lru_cache(maxsize=512)
def omega(spec: OmegaSpec) -> Unitary:
    """Concrete unitary for the shared operation."""
    if spec.matrix is not None:
        return Unitary(np.asarray(spec.matrix, dtype=np.complex128), tag="omega")
    c, s = np.cos(spec.theta / 2.0), np.sin(spec.theta / 2.0)
    m = np.array(
        [
            [c, -np.exp(1j * spec.lam) * s],
            [np.exp(1j * spec.phi) * s, np.exp(1j * (spec.phi + spec.lam)) * c],
        ]
    )
    return Unitary(m, tag="omega")


@lru_cache(maxsize=512)
def collective_u(spec: WAsymmetricSpec) -> Unitary:
    """Two-qubit operation concentrating alpha|01> + beta|10> onto |10>.

    Fixes |00> and |11>; unitary for any complex unit (alpha, beta). On real
    weights it matches the published form up to a sign on the |01>-output
    row, which only rephases the discarded subspace.
    """
    a, b = spec.alpha, spec.beta
    m = np.array(
        [
            [1, 0, 0, 0],
            [0, b, -a, 0],
            [0, np.conj(a), np.conj(b), 0],
            [0, 0, 0, 1],
        ]
    )
    return Unitary(m, tag="U")


@lru_cache(maxsize=512)
def collective_u_jack(spec: WAsymmetricSpec) -> Unitary:
    """Mirror of collective_u: concentrates alpha|01> + beta|10> onto |01>.

    Used when the second sharer recovers, so the encoded amplitude ends on
    the right-hand qubit and the left-hand qubit is released to |0>.
    """
    a, b = spec.alpha, spec.beta
    m = np.array(
        [
            [1, 0, 0, 0],
            [0, np.conj(a), np.conj(b), 0],
            [0, b, -a, 0],
            [0, 0, 0, 1],
        ]
    )
    return Unitary(m, tag="U'")
