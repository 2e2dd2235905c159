"""Three-party system model: qubit ownership, local operations, classical messages.

A LoccSystem is a value passed linearly through protocol steps; operations
return new systems and append to an ordered transcript. Every local action
is gated on ownership, so a protocol bug that touches a foreign qubit
surfaces as NotOwner rather than as silently wrong physics.

Classical-bit accounting: a public announcement is logged as one send per
receiver that later conditions on it; sends sharing an announcement id are
counted once by cbit_count, because that is how the schemes' published
totals (5 and 4 cbits) reconcile.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    BasisArity,
    DuplicateLabel,
    InvariantBreach,
    NotOwner,
    SelfSend,
    UnownedQubit,
)
from .states import (
    BellOutcome,
    PureState,
    QubitId,
    Unitary,
    apply_pair,
    apply_single,
    branch_bell,
    branch_z,
    measure_bell,
    measure_z,
    tensor,
)


class Party(enum.Enum):
    GREY = "Grey"
    HOLLY = "Holly"
    JACK = "Jack"


@dataclass(frozen=True)
class LocalUnitary:
    """A unitary applied by one party (or jointly, when parties has two entries)."""

    parties: tuple[Party, ...]
    qubits: tuple[QubitId, ...]
    tag: str
    matrix: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class Measurement:
    party: Party
    qubits: tuple[QubitId, ...]
    basis: str  # "bell" or "z"
    outcome: BellOutcome | int
    probability: float


@dataclass(frozen=True)
class ClassicalSend:
    sender: Party
    receiver: Party
    bits: str
    announcement: int | None = None  # sends sharing an id form one announcement


TranscriptEvent = Union[LocalUnitary, Measurement, ClassicalSend]


@dataclass(frozen=True, eq=False)
class LoccSystem:
    """Global state, qubit ownership, and the append-only event transcript."""

    state: PureState
    owner: dict[QubitId, Party]
    transcript: tuple[TranscriptEvent, ...] = ()


def init_system(parts: Sequence[tuple[PureState, Mapping[QubitId, Party]]]) -> LoccSystem:
    """Tensor the given states together and record who owns which qubit."""
    if not parts:
        raise UnownedQubit("init_system needs at least one part")
    owner: dict[QubitId, Party] = {}
    state = None
    for part_state, fragment in parts:
        missing = set(part_state.qubits) - set(fragment)
        if missing:
            raise UnownedQubit(f"no owner given for qubits {sorted(missing)}")
        extra = set(fragment) - set(part_state.qubits)
        if extra:
            raise UnownedQubit(f"ownership names absent qubits {sorted(extra)}")
        clash = set(fragment) & set(owner)
        if clash:
            raise DuplicateLabel(f"labels {sorted(clash)} appear in more than one part")
        owner.update(fragment)
        state = part_state if state is None else tensor(state, part_state)
    return LoccSystem(state, owner)


def _require_owned(sys: LoccSystem, parties: Iterable[Party], qubits: Sequence[QubitId]) -> None:
    allowed = set(parties)
    for q in qubits:
        holder = sys.owner.get(q)
        if holder is None:
            raise NotOwner(f"qubit {q!r} is not part of the system")
        if holder not in allowed:
            raise NotOwner(f"{holder.value} owns {q!r}; acting parties are {sorted(p.value for p in allowed)}")


def _apply(state: PureState, u: Unitary, qubits: Sequence[QubitId]) -> PureState:
    if len(qubits) == 1:
        return apply_single(state, u, qubits[0])
    if len(qubits) == 2:
        return apply_pair(state, u, qubits[0], qubits[1])
    raise BasisArity(f"unitaries act on one or two qubits, got {len(qubits)}")


def local_unitary(sys: LoccSystem, party: Party, u: Unitary, qubits: Sequence[QubitId]) -> LoccSystem:
    """Apply a unitary on qubits the acting party owns."""
    qubits = tuple(qubits)
    _require_owned(sys, (party,), qubits)
    event = LocalUnitary((party,), qubits, u.tag, u.matrix)
    return LoccSystem(_apply(sys.state, u, qubits), sys.owner, sys.transcript + (event,))


def cooperative_unitary(
    sys: LoccSystem, parties: Iterable[Party], u: Unitary, qubits: Sequence[QubitId]
) -> LoccSystem:
    """Apply a unitary jointly; the listed parties must cover all touched qubits."""
    qubits = tuple(qubits)
    parties = tuple(sorted(set(parties), key=lambda p: p.value))
    _require_owned(sys, parties, qubits)
    event = LocalUnitary(parties, qubits, u.tag, u.matrix)
    return LoccSystem(_apply(sys.state, u, qubits), sys.owner, sys.transcript + (event,))


def _check_measure_args(sys: LoccSystem, party: Party, qubits: tuple[QubitId, ...], basis: str) -> None:
    if basis == "bell":
        if len(qubits) != 2:
            raise BasisArity(f"Bell measurement needs exactly 2 qubits, got {len(qubits)}")
    elif basis == "z":
        if len(qubits) != 1:
            raise BasisArity(f"computational measurement needs exactly 1 qubit, got {len(qubits)}")
    else:
        raise BasisArity(f"unknown basis {basis!r}")
    _require_owned(sys, (party,), qubits)


def _without(owner: dict[QubitId, Party], qubits: tuple[QubitId, ...]) -> dict[QubitId, Party]:
    return {q: p for q, p in owner.items() if q not in qubits}


def local_measure(
    sys: LoccSystem, party: Party, qubits: Sequence[QubitId], basis: str, draw: float
) -> tuple[BellOutcome | int, LoccSystem]:
    """Sampled projective measurement; measured qubits leave state and ownership."""
    qubits = tuple(qubits)
    _check_measure_args(sys, party, qubits, basis)
    if basis == "bell":
        outcome, prob, collapsed = measure_bell(sys.state, qubits[0], qubits[1], draw)
    else:
        outcome, prob, collapsed = measure_z(sys.state, qubits[0], draw)
    event = Measurement(party, qubits, basis, outcome, prob)
    return outcome, LoccSystem(collapsed, _without(sys.owner, qubits), sys.transcript + (event,))


def branch_measure(
    sys: LoccSystem, party: Party, qubits: Sequence[QubitId], basis: str
) -> list[tuple[BellOutcome | int, float, LoccSystem]]:
    """All branches of a measurement, each as its own continued system."""
    qubits = tuple(qubits)
    _check_measure_args(sys, party, qubits, basis)
    if basis == "bell":
        branches = branch_bell(sys.state, qubits[0], qubits[1])
    else:
        branches = branch_z(sys.state, qubits[0])
    owner = _without(sys.owner, qubits)
    out = []
    for br in branches:
        event = Measurement(party, qubits, basis, br.outcome, br.probability)
        out.append((br.outcome, br.probability, LoccSystem(br.collapsed, owner, sys.transcript + (event,))))
    return out


def _valid_bits(bits: str) -> str:
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"bits must be a nonempty 0/1 string, got {bits!r}")
    return bits


def send_bits(sys: LoccSystem, sender: Party, receiver: Party, bits: str) -> LoccSystem:
    """Log a classical message; no state change."""
    if sender is receiver:
        raise SelfSend(f"{sender.value} cannot send to itself")
    event = ClassicalSend(sender, receiver, _valid_bits(bits))
    return LoccSystem(sys.state, sys.owner, sys.transcript + (event,))


def announce(sys: LoccSystem, sender: Party, receivers: Sequence[Party], bits: str) -> LoccSystem:
    """Log one public announcement as a send per receiver, counted once."""
    if sender in receivers:
        raise SelfSend(f"{sender.value} cannot announce to itself")
    if not receivers:
        raise ValueError("announce needs at least one receiver")
    _valid_bits(bits)
    used = [e.announcement for e in sys.transcript if isinstance(e, ClassicalSend) and e.announcement]
    ann = max(used, default=0) + 1
    events = tuple(ClassicalSend(sender, r, bits, announcement=ann) for r in receivers)
    return LoccSystem(sys.state, sys.owner, sys.transcript + events)


def cbit_count(sys: LoccSystem) -> int:
    """Total classical bits transmitted, counting each announcement once."""
    total = 0
    seen: set[int] = set()
    for e in sys.transcript:
        if not isinstance(e, ClassicalSend):
            continue
        if e.announcement is not None:
            if e.announcement in seen:
                continue
            seen.add(e.announcement)
        total += len(e.bits)
    return total


def operation_counts(sys: LoccSystem) -> dict[str, int]:
    """Tally of what the transcript actually contains."""
    counts = {
        "bell_measurements": 0,
        "z_measurements": 0,
        "single_qubit_unitaries": 0,
        "collective_unitaries": 0,
    }
    for e in sys.transcript:
        if isinstance(e, Measurement):
            counts["bell_measurements" if e.basis == "bell" else "z_measurements"] += 1
        elif isinstance(e, LocalUnitary):
            counts["single_qubit_unitaries" if len(e.qubits) == 1 else "collective_unitaries"] += 1
    return counts


def _outcome_label(outcome: BellOutcome | int) -> str:
    return outcome.value if isinstance(outcome, BellOutcome) else str(outcome)


def transcript_lines(sys: LoccSystem) -> list[str]:
    """Line-oriented transcript record: index, variant, parties, qubits, payload, probability."""
    lines = []
    for i, e in enumerate(sys.transcript):
        if isinstance(e, LocalUnitary):
            parties = "+".join(p.value for p in e.parties)
            fields = (str(i), "unitary", parties, ",".join(e.qubits), e.tag, "-")
        elif isinstance(e, Measurement):
            payload = f"{e.basis}:{_outcome_label(e.outcome)}"
            fields = (str(i), "measure", e.party.value, ",".join(e.qubits), payload, f"{e.probability:.12g}")
        else:
            payload = f"{len(e.bits)}:{e.bits}"
            if e.announcement is not None:
                payload += f"@{e.announcement}"
            fields = (str(i), "send", f"{e.sender.value}>{e.receiver.value}", "-", payload, "-")
        lines.append("\t".join(fields))
    return lines


def replay_transcript(initial: LoccSystem, events: Sequence[TranscriptEvent]) -> LoccSystem:
    """Re-execute a transcript from the initial system, re-checking ownership.

    Measurement events are replayed by selecting the recorded outcome among
    the freshly enumerated branches, so the final state is reproduced
    bit-for-bit; a recorded outcome whose probability no longer matches is
    an InvariantBreach.
    """
    sys = initial
    for e in events:
        if isinstance(e, LocalUnitary):
            u = Unitary(e.matrix, e.tag)
            if len(e.parties) == 1:
                sys = local_unitary(sys, e.parties[0], u, e.qubits)
            else:
                sys = cooperative_unitary(sys, e.parties, u, e.qubits)
        elif isinstance(e, Measurement):
            branches = branch_measure(sys, e.party, e.qubits, e.basis)
            matching = [b for b in branches if b[0] == e.outcome]
            if not matching:
                raise InvariantBreach(
                    f"recorded outcome {_outcome_label(e.outcome)} has zero probability on replay"
                )
            outcome, prob, sys = matching[0]
            if abs(prob - e.probability) > 1e-12:
                raise InvariantBreach(
                    f"replayed probability {prob!r} differs from recorded {e.probability!r}"
                )
        else:
            if e.sender is e.receiver:
                raise SelfSend(f"{e.sender.value} cannot send to itself")
            sys = LoccSystem(sys.state, sys.owner, sys.transcript + (e,))
    return sys
