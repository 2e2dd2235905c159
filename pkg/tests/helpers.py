"""Shared test helpers: independent oracles and random-input generators.

The oracles here deliberately avoid the package's reshape/transpose tricks:
gates are applied by explicit index arithmetic and projections by explicit
sums, so they check the implementation rather than mirror it.
"""

from __future__ import annotations

import numpy as np

from opshare import OmegaSpec, PureState, WAsymmetricSpec


def bit_of(index: int, pos: int, n: int) -> int:
    """Bit of qubit `pos` inside basis index `index` (qubit 0 is the MSB)."""
    return (index >> (n - 1 - pos)) & 1


def with_bits(index: int, n: int, positions: list[int], values: list[int]) -> int:
    for pos, val in zip(positions, values):
        mask = 1 << (n - 1 - pos)
        index = (index | mask) if val else (index & ~mask)
    return index


def oracle_apply_single(state: PureState, matrix: np.ndarray, q: str) -> np.ndarray:
    n = state.n
    pos = state.qubits.index(q)
    out = np.zeros_like(state.amps)
    for idx in range(1 << n):
        row = bit_of(idx, pos, n)
        for col in (0, 1):
            out[idx] += matrix[row, col] * state.amps[with_bits(idx, n, [pos], [col])]
    return out


def oracle_apply_pair(state: PureState, matrix: np.ndarray, q1: str, q2: str) -> np.ndarray:
    n = state.n
    p1, p2 = state.qubits.index(q1), state.qubits.index(q2)
    out = np.zeros_like(state.amps)
    for idx in range(1 << n):
        row = 2 * bit_of(idx, p1, n) + bit_of(idx, p2, n)
        for col in range(4):
            src = with_bits(idx, n, [p1, p2], [col >> 1, col & 1])
            out[idx] += matrix[row, col] * state.amps[src]
    return out


def oracle_bell_projection(state: PureState, q1: str, q2: str) -> list[tuple[float, np.ndarray]]:
    """(probability, unnormalized collapsed amplitudes over the remaining qubits)."""
    bell = np.array(
        [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex
    ) / np.sqrt(2)
    n = state.n
    p1, p2 = state.qubits.index(q1), state.qubits.index(q2)
    rest = [i for i in range(n) if i not in (p1, p2)]
    results = []
    for v in bell:
        collapsed = np.zeros(1 << len(rest), dtype=complex)
        for idx in range(1 << n):
            rest_idx = 0
            for r in rest:
                rest_idx = (rest_idx << 1) | bit_of(idx, r, n)
            pair = 2 * bit_of(idx, p1, n) + bit_of(idx, p2, n)
            collapsed[rest_idx] += np.conj(v[pair]) * state.amps[idx]
        results.append((float(np.sum(np.abs(collapsed) ** 2)), collapsed))
    return results


def random_unit_pair(rng: np.random.Generator) -> tuple[complex, complex]:
    v = rng.normal(size=4)
    v = v / np.linalg.norm(v)
    return complex(v[0], v[1]), complex(v[2], v[3])


def random_omega(rng: np.random.Generator) -> OmegaSpec:
    t, p, l = rng.uniform(0.0, 2.0 * np.pi, size=3)
    return OmegaSpec(float(t), float(p), float(l))


def random_wspec(rng: np.random.Generator) -> WAsymmetricSpec:
    alpha, beta = random_unit_pair(rng)
    return WAsymmetricSpec(alpha, beta)


def omega_matrix(spec: OmegaSpec) -> np.ndarray:
    """Independent matrix build for the angle form (same convention, direct formula)."""
    c, s = np.cos(spec.theta / 2), np.sin(spec.theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * spec.lam) * s],
            [np.exp(1j * spec.phi) * s, np.exp(1j * (spec.phi + spec.lam)) * c],
        ]
    )
