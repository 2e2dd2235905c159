"""Dense statevector core for small labeled-qubit registers.

Conventions fixed here and relied on everywhere else:

- A register is an ordered tuple of string labels. Label k addresses bit k
  of the amplitude index counted from the most significant bit, so on the
  register ``(p, q)`` the amplitude ``amps[0b10]`` belongs to p=1, q=0.
- Bell states are named so that psi pairs |00>/|11> and phi pairs |01>/|10>
  (the reverse of the more common phi/psi naming; kept because the two-bit
  wire encoding of the protocols is defined against it). The fixed outcome
  order is psi+, psi-, phi+, phi- with bit codes 00, 01, 10, 11.
- Measured qubits are removed from the register. Measuring the last qubit
  leaves the trivial scalar register.
- States and matrices are immutable after construction; every operation is
  a pure function returning new values, so they are safe to share.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateLabel,
    LabelMismatch,
    NotUnitary,
    SameQubit,
    UnknownQubit,
    ZeroNorm,
)

QubitId = str

NORM_ATOL = 1e-12
UNITARY_ATOL = 1e-10
PROB_FLOOR = 1e-15  # branches at or below this probability are dropped


class BellOutcome(enum.Enum):
    """The four Bell-measurement outcomes, in fixed wire order."""

    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"

    @property
    def bits(self) -> str:
        """Two-bit classical encoding of this outcome."""
        return _BELL_BITS[self]


BELL_ORDER: tuple[BellOutcome, ...] = (
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
)

_BELL_BITS = {
    BellOutcome.PSI_PLUS: "00",
    BellOutcome.PSI_MINUS: "01",
    BellOutcome.PHI_PLUS: "10",
    BellOutcome.PHI_MINUS: "11",
}

# Rows are the Bell basis vectors in BELL_ORDER over |00>,|01>,|10>,|11>.
_SQRT2_INV = 1.0 / np.sqrt(2.0)
BELL_VECTORS = np.array(
    [
        [1, 0, 0, 1],
        [1, 0, 0, -1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
    ],
    dtype=np.complex128,
) * _SQRT2_INV
BELL_VECTORS.setflags(write=False)
_BELL_PROJ = BELL_VECTORS.conj()  # hoisted: the projector rows used on every measurement
_BELL_PROJ.setflags(write=False)


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized complex amplitude vector over an ordered labeled register."""

    qubits: tuple[QubitId, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        qubits = tuple(self.qubits)
        if len(set(qubits)) != len(qubits):
            raise DuplicateLabel(f"duplicate qubit labels in {qubits}")
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != 1 << len(qubits):
            raise DimensionMismatch(
                f"{len(qubits)} qubits need {1 << len(qubits)} amplitudes, got {amps.size}"
            )
        norm_sq = np.vdot(amps, amps).real
        if norm_sq == 0.0:
            raise ZeroNorm("state vector has zero norm")
        if not norm_sq < np.inf:  # also catches NaN
            raise ValueError("amplitudes must be finite")
        amps = amps / math.sqrt(norm_sq)  # fresh array, so the input is never aliased
        amps.setflags(write=False)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "amps", amps)

    @property
    def n(self) -> int:
        return len(self.qubits)

    def amplitude(self, bits: str) -> complex:
        """Amplitude of the basis state written as a bit string in register order."""
        if len(bits) != self.n:
            raise DimensionMismatch(f"expected {self.n} bits, got {bits!r}")
        return complex(self.amps[int(bits, 2)]) if bits else complex(self.amps[0])

    def __repr__(self) -> str:
        width = max(self.n, 1)
        terms = " ".join(
            f"|{i:0{width}b}>:{a:.6g}"
            for i, a in enumerate(self.amps)
            if abs(a) > 1e-12
        )
        return f"PureState({','.join(self.qubits) or '<scalar>'}; {terms})"


@dataclass(frozen=True, eq=False)
class Unitary:
    """A 2x2 or 4x4 unitary matrix, checked at construction."""

    matrix: np.ndarray
    tag: str = "u"

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape not in ((2, 2), (4, 4)):
            raise DimensionMismatch(f"unitary must be 2x2 or 4x4, got {matrix.shape}")
        deviation = np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])))
        if not deviation <= UNITARY_ATOL:
            raise NotUnitary(f"matrix fails the unitarity gate (deviation {deviation:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class BranchOutcome:
    """One measurement branch: outcome, exact probability, collapsed state."""

    outcome: BellOutcome | int
    probability: float
    collapsed: PureState


def make_state(qubits: Sequence[QubitId], amps: Sequence[complex]) -> PureState:
    """Build a normalized state over the given labels from raw amplitudes."""
    if len(qubits) < 1:
        raise DimensionMismatch("register needs at least one qubit")
    return PureState(tuple(qubits), np.asarray(amps, dtype=np.complex128))


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor product; a's qubits become the leading labels."""
    overlap = set(a.qubits) & set(b.qubits)
    if overlap:
        raise DuplicateLabel(f"tensor factors share labels {sorted(overlap)}")
    return PureState(a.qubits + b.qubits, np.kron(a.amps, b.amps))


def _axes(state: PureState, targets: Sequence[QubitId]) -> list[int]:
    axes = []
    for q in targets:
        try:
            axes.append(state.qubits.index(q))
        except ValueError:
            raise UnknownQubit(f"qubit {q!r} not in register {state.qubits}") from None
    return axes


def _targets_front(state: PureState, targets: Sequence[QubitId]) -> tuple[np.ndarray, tuple[QubitId, ...]]:
    """Reshape amplitudes to (2^k, rest) with the k target axes leading, in the given order."""
    axes = _axes(state, targets)
    front = set(axes)
    perm = axes + [i for i in range(state.n) if i not in front]
    psi = state.amps.reshape((2,) * state.n).transpose(perm)
    rest = tuple(q for q in state.qubits if q not in targets)
    return psi.reshape(1 << len(axes), -1), rest


def _apply_on_axes(state: PureState, matrix: np.ndarray, axes: list[int]) -> PureState:
    n = state.n
    back = set(axes)
    perm = [i for i in range(n) if i not in back] + axes
    inverse = [0] * n
    for pos, ax in enumerate(perm):
        inverse[ax] = pos
    psi = state.amps.reshape((2,) * n).transpose(perm)
    psi = psi.reshape(-1, matrix.shape[0]) @ matrix.T
    psi = psi.reshape((2,) * n).transpose(inverse)
    return PureState(state.qubits, psi.reshape(-1))


def apply_single(state: PureState, u: Unitary, q: QubitId) -> PureState:
    """Apply a single-qubit unitary to the named qubit."""
    if u.dim != 2:
        raise DimensionMismatch("apply_single needs a 2x2 unitary")
    (k,) = _axes(state, (q,))
    if state.n == 1:
        return PureState(state.qubits, u.matrix @ state.amps)
    return _apply_on_axes(state, u.matrix, [k])


def apply_pair(state: PureState, u: Unitary, q1: QubitId, q2: QubitId) -> PureState:
    """Apply a two-qubit unitary on (q1, q2); q1 is the left slot of the 4-dim basis."""
    if u.dim != 4:
        raise DimensionMismatch("apply_pair needs a 4x4 unitary")
    if q1 == q2:
        raise SameQubit(f"apply_pair needs two distinct qubits, got {q1!r} twice")
    return _apply_on_axes(state, u.matrix, _axes(state, (q1, q2)))


def branch_z(state: PureState, q: QubitId) -> list[BranchOutcome]:
    """All computational-basis branches for one qubit; zero-probability branches dropped."""
    mat, rest = _targets_front(state, (q,))
    return _branches((0, 1), mat, rest)


def branch_bell(state: PureState, q1: QubitId, q2: QubitId) -> list[BranchOutcome]:
    """All Bell-basis branches for a qubit pair; zero-probability branches dropped."""
    if q1 == q2:
        raise SameQubit(f"Bell measurement needs two distinct qubits, got {q1!r} twice")
    mat, rest = _targets_front(state, (q1, q2))
    return _branches(BELL_ORDER, _BELL_PROJ @ mat, rest)


def _row_probs(rows: np.ndarray) -> np.ndarray:
    return (rows.real**2 + rows.imag**2).sum(axis=1)


def _collapse(rest: tuple[QubitId, ...], row: np.ndarray, prob: float) -> PureState:
    """Collapsed state with the already-known norm; skips re-validation.

    Normalizing by the branch probability (not a recomputed norm) keeps the
    sampled and enumerated paths bit-identical.
    """
    amps = row / math.sqrt(prob)
    amps.setflags(write=False)
    state = object.__new__(PureState)
    object.__setattr__(state, "qubits", rest)
    object.__setattr__(state, "amps", amps)
    return state


def _branches(outcomes: Sequence[BellOutcome | int], rows: np.ndarray, rest: tuple[QubitId, ...]) -> list[BranchOutcome]:
    probs = _row_probs(rows)
    return [
        BranchOutcome(outcome, float(p), _collapse(rest, row, float(p)))
        for outcome, p, row in zip(outcomes, probs, rows)
        if p > PROB_FLOOR
    ]


def _pick(probs: np.ndarray, draw: float) -> int:
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw}")
    cumulative = 0.0
    last = -1
    for k, p in enumerate(probs):
        if p <= PROB_FLOOR:
            continue
        cumulative += p
        last = k
        if draw < cumulative:
            return k
    if last < 0:
        raise ZeroNorm("no branch has nonzero probability")
    return last  # draw fell into float shortfall below 1


def measure_z(state: PureState, q: QubitId, draw: float) -> tuple[int, float, PureState]:
    """Sampled counterpart of branch_z; the caller supplies the uniform draw."""
    mat, rest = _targets_front(state, (q,))
    probs = _row_probs(mat)
    k = _pick(probs, draw)
    return k, float(probs[k]), _collapse(rest, mat[k], float(probs[k]))


def measure_bell(state: PureState, q1: QubitId, q2: QubitId, draw: float) -> tuple[BellOutcome, float, PureState]:
    """Sampled counterpart of branch_bell; the caller supplies the uniform draw."""
    if q1 == q2:
        raise SameQubit(f"Bell measurement needs two distinct qubits, got {q1!r} twice")
    mat, rest = _targets_front(state, (q1, q2))
    rows = _BELL_PROJ @ mat
    probs = _row_probs(rows)
    k = _pick(probs, draw)
    return BELL_ORDER[k], float(probs[k]), _collapse(rest, rows[k], float(probs[k]))


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2, insensitive to global phase; registers must cover the same labels."""
    if set(a.qubits) != set(b.qubits):
        raise LabelMismatch(f"label sets differ: {a.qubits} vs {b.qubits}")
    if a.qubits == b.qubits:
        other = b.amps
    else:
        perm = [b.qubits.index(q) for q in a.qubits]
        other = b.amps.reshape((2,) * b.n).transpose(perm).reshape(-1)
    return float(abs(np.vdot(a.amps, other)) ** 2)
