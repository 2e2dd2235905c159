"""Statevector simulator and verification harness for three-party
single-qubit operation sharing over Bell + W channels.

Two schemes are implemented end to end under a strict LOCC model: a
probabilistic one over a Bell pair plus a symmetric W state, and a
deterministic one over a Bell pair plus an asymmetric W state. The
analysis layer enumerates every measurement branch exactly, cross-checks
with seeded Monte Carlo, and reproduces the schemes' resource and
efficiency comparison, flagging any figure that disagrees with the
published tables.
"""

from .analysis import (
    BranchRecord,
    BranchReport,
    ComparisonReport,
    EfficiencyRecord,
    SchemeStats,
    compare_schemes,
    efficiency,
    enumerate_scheme,
    monte_carlo,
)
from .channels import (
    OmegaSpec,
    WAsymmetricSpec,
    bell_state,
    collective_u,
    collective_u_jack,
    omega,
    pauli,
    target_state,
    w_asymmetric,
    w_symmetric,
)
from .errors import OpShareError
from .locc import (
    ClassicalSend,
    LocalUnitary,
    LoccSystem,
    Measurement,
    Party,
    announce,
    branch_measure,
    cbit_count,
    cooperative_unitary,
    init_system,
    local_measure,
    local_unitary,
    operation_counts,
    replay_transcript,
    send_bits,
    transcript_lines,
)
from .schemes import (
    Scheme,
    SchemeConfig,
    SchemeResult,
    correction_for_teleport,
    initial_system,
    reference_state,
    run_s1,
    run_s2,
    run_scheme,
    stage1_correction_audit,
    teleport_and_operate,
)
from .states import (
    BellOutcome,
    BranchOutcome,
    PureState,
    Unitary,
    apply_pair,
    apply_single,
    branch_bell,
    branch_z,
    fidelity,
    make_state,
    measure_bell,
    measure_z,
    tensor,
)

__version__ = "0.1.0"
