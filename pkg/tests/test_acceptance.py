"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run with `pytest tests/test_acceptance.py -v -s` to see one pass/fail line
per criterion.
"""

import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from helpers import omega_matrix, random_omega, random_unit_pair, random_wspec
from opshare import (
    OmegaSpec,
    Party,
    Scheme,
    SchemeConfig,
    WAsymmetricSpec,
    apply_single,
    compare_schemes,
    enumerate_scheme,
    fidelity,
    monte_carlo,
    target_state,
    tensor,
    w_symmetric,
)
from opshare.channels import collective_u, omega
from opshare.errors import NotOwner
from opshare.locc import branch_measure, replay_transcript
from opshare.published import collective_u_published
from opshare.schemes import (
    apply_teleport_step,
    initial_system,
    run_s1,
    run_s2,
    stage1_correction_audit,
)

S2 = 2**-0.5
DEFAULT_OMEGA = OmegaSpec(np.pi / 2, 0.0, np.pi)


@contextmanager
def criterion(number, description):
    try:
        yield
    except BaseException:
        print(f"\n[FAIL] criterion {number}: {description}")
        raise
    print(f"\n[PASS] criterion {number}: {description}")


def random_cfg(rng, scheme, recoverer=Party.HOLLY):
    a, b = random_unit_pair(rng)
    wspec = random_wspec(rng) if scheme is Scheme.S2 else None
    return SchemeConfig(scheme, a, b, random_omega(rng), wspec, recoverer)


def test_criterion_1_s1_success_probability_exact():
    with criterion(1, "S1 exact success probability 2/3 over 100 random configs (< 1 s)"):
        rng = np.random.default_rng(101)
        configs = [
            random_cfg(rng, Scheme.S1, Party.HOLLY if i % 2 else Party.JACK)
            for i in range(100)
        ]
        start = time.perf_counter()
        for cfg in configs:
            report = enumerate_scheme(cfg)
            assert abs(report.p_success - 2 / 3) <= 1e-12
        elapsed = time.perf_counter() - start
        assert elapsed < 1.0, f"enumeration took {elapsed:.2f}s"


def test_criterion_2_sharing_branch_law():
    with criterion(2, "stage-2 Bell probabilities follow (1+|a'|^2)/6 and (1+|b'|^2)/6"):
        rng = np.random.default_rng(102)
        for _ in range(100):
            cfg = random_cfg(rng, Scheme.S1)
            ap, bp = omega_matrix(cfg.omega) @ np.array([cfg.a, cfg.b])
            marginal = enumerate_scheme(cfg).marginal("sharing_bm")
            pa, pb = (1 + abs(ap) ** 2) / 6, (1 + abs(bp) ** 2) / 6
            assert abs(marginal["psi+"] - pa) <= 1e-12
            assert abs(marginal["psi-"] - pa) <= 1e-12
            assert abs(marginal["phi+"] - pb) <= 1e-12
            assert abs(marginal["phi-"] - pb) <= 1e-12


def test_criterion_3_s2_determinism():
    with criterion(3, "S2 succeeds with probability 1 and fidelity 1 over 100 random configs"):
        rng = np.random.default_rng(103)
        configs = [
            random_cfg(rng, Scheme.S2, Party.HOLLY if i % 2 else Party.JACK)
            for i in range(98)
        ]
        a, b = random_unit_pair(rng)
        for weights in ((1.0, 0.0), (0.0, 1.0)):
            configs.append(
                SchemeConfig(Scheme.S2, a, b, random_omega(rng), WAsymmetricSpec(*weights))
            )
        for cfg in configs:
            report = enumerate_scheme(cfg)
            assert abs(report.p_success - 1.0) <= 1e-12
            assert report.fidelity_given_success >= 1 - 1e-10


def test_criterion_4_comparison_table_reproduction():
    with criterion(4, "comparison prints 5/4 cbits, P = 2/3 and 1, eta = 1/15 and 1/9 exactly"):
        cfg_s1 = SchemeConfig(Scheme.S1, S2, S2, DEFAULT_OMEGA)
        cfg_s2 = SchemeConfig(Scheme.S2, S2, S2, DEFAULT_OMEGA, WAsymmetricSpec(0.6, 0.8))
        report = compare_schemes(cfg_s1, cfg_s2)
        row_s1, row_s2 = report.rows
        assert (row_s1.cbits, row_s2.cbits) == (5, 4)
        assert row_s1.p_rational == Fraction(2, 3) and row_s2.p_rational == Fraction(1)
        assert row_s1.eta.eta == Fraction(1, 15) and row_s2.eta.eta == Fraction(1, 9)
        text = report.to_text()
        assert "| 5 | 2/3 | 1/15" in text
        assert "| 4 | 1 | 1/9" in text


def test_criterion_5_teleport_stage_oracle():
    with criterion(5, "all four forced teleport outcomes recover the operated state; "
                      "correction-table divergence flagged exactly once"):
        rng = np.random.default_rng(105)
        for _ in range(100):
            a, b = random_unit_pair(rng)
            spec = random_omega(rng)
            cfg = SchemeConfig(Scheme.S1, a, b, spec)
            expected = tensor(
                apply_single(target_state(a, b, "g1"), omega(spec), "g1"),
                w_symmetric("g", "h", "j"),
            )
            branches = branch_measure(initial_system(cfg), Party.HOLLY, ("h'", "h1"), "bell")
            assert len(branches) == 4
            for outcome, _, sys1 in branches:
                done = apply_teleport_step(sys1, cfg.omega, outcome)
                assert fidelity(done.state, expected) >= 1 - 1e-10

        audit = stage1_correction_audit()
        print("derived teleport corrections:",
              {o.value: p for o, p in audit.derived.items()})
        assert len(audit.divergent) == 4
        cfg_s1 = SchemeConfig(Scheme.S1, S2, S2, DEFAULT_OMEGA)
        cfg_s2 = SchemeConfig(Scheme.S2, S2, S2, DEFAULT_OMEGA, WAsymmetricSpec(0.6, 0.8))
        flags = [d for d in compare_schemes(cfg_s1, cfg_s2).divergences
                 if d.field == "stage1_corrections"]
        assert len(flags) == 1


def test_criterion_6_collective_u_contract():
    with criterion(6, "collective U unitary to 1e-12 and concentrating for 1000 random weights"):
        rng = np.random.default_rng(106)
        for _ in range(1000):
            spec = random_wspec(rng)
            u = collective_u(spec).matrix
            assert np.max(np.abs(u.conj().T @ u - np.eye(4))) <= 1e-12
            out = u @ np.array([0, spec.alpha, spec.beta, 0])
            assert abs(out[2]) ** 2 >= 1 - 1e-12
        for _ in range(100):
            x = rng.uniform(-1, 1)
            alpha, beta = x, float(np.sqrt(1 - x * x))
            derived = collective_u(WAsymmetricSpec(alpha, beta)).matrix
            assert np.allclose(
                np.abs(derived), np.abs(collective_u_published(alpha, beta)), atol=1e-12
            )


def test_criterion_7_monte_carlo_consistency():
    with criterion(7, "10^5 S1 trials within 0.0045 of 2/3; 10^3 S2 trials all succeed (< 30 s)"):
        start = time.perf_counter()
        cfg_s1 = SchemeConfig(Scheme.S1, S2, S2, DEFAULT_OMEGA)
        stats = monte_carlo(cfg_s1, 100_000, 42)
        assert abs(stats.success_rate - 2 / 3) <= 0.0045
        cfg_s2 = SchemeConfig(Scheme.S2, S2, S2, DEFAULT_OMEGA, WAsymmetricSpec(0.6, 0.8))
        stats2 = monte_carlo(cfg_s2, 1000, 42)
        assert stats2.successes == 1000
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0, f"sampling took {elapsed:.1f}s"


def test_criterion_8_locality_and_replay():
    with criterion(8, "transcripts replay bit-for-bit under ownership checks; "
                      "unowned operations raise NotOwner"):
        rng = np.random.default_rng(108)
        runs = []
        for i in range(10):
            cfg = random_cfg(rng, Scheme.S1, Party.HOLLY if i % 2 else Party.JACK)
            runs.append((cfg, run_s1(cfg, rng.random(3))))
        for i in range(10):
            cfg = random_cfg(rng, Scheme.S2, Party.HOLLY if i % 2 else Party.JACK)
            runs.append((cfg, run_s2(cfg, rng.random(2))))
        for cfg, result in runs:
            replayed = replay_transcript(initial_system(cfg), result.system.transcript)
            assert np.array_equal(replayed.state.amps, result.system.state.amps)
            assert replayed.state.qubits == result.system.state.qubits

        import dataclasses

        cfg, result = runs[0]
        events = list(result.system.transcript)
        tampered_index = next(
            i for i, e in enumerate(events) if hasattr(e, "parties") and e.parties == (Party.GREY,)
        )
        events[tampered_index] = dataclasses.replace(events[tampered_index], parties=(Party.JACK,))
        with pytest.raises(NotOwner):
            replay_transcript(initial_system(cfg), events)


def test_criterion_9_recoverer_symmetry():
    with criterion(9, "swapping the recoverer leaves success probability and "
                      "fidelity distribution unchanged"):
        rng = np.random.default_rng(109)
        for i in range(20):
            scheme = Scheme.S1 if i % 2 else Scheme.S2
            a, b = random_unit_pair(rng)
            spec = random_omega(rng)
            wspec = random_wspec(rng) if scheme is Scheme.S2 else None
            reports = {
                who: enumerate_scheme(SchemeConfig(scheme, a, b, spec, wspec, who))
                for who in (Party.HOLLY, Party.JACK)
            }
            assert abs(reports[Party.HOLLY].p_success - reports[Party.JACK].p_success) <= 1e-12
            distributions = {
                who: sorted(
                    (br.probability, -1.0 if br.fidelity is None else br.fidelity)
                    for br in report.branches
                )
                for who, report in reports.items()
            }
            for (p_h, f_h), (p_j, f_j) in zip(*distributions.values()):
                assert abs(p_h - p_j) <= 1e-12
                assert abs(f_h - f_j) <= 1e-12
