"""Exact branch enumeration, Monte Carlo estimation, and the scheme comparison.

Enumeration expands every measurement depth-first with exact branch
probabilities (no randomness), so scheme-level claims — success probability
2/3 versus 1, the stage-two branch law, classical-bit counts — are checked
against the statevector itself. Monte Carlo reruns the same protocol with
sampled draws as an independent statistical cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import published
from .errors import ConfigParse, DivisionByZero, InvariantBreach
from .locc import LoccSystem, Party, branch_measure, cbit_count, operation_counts
from .schemes import (
    GREY_BELL,
    HOLLY_BELL,
    TARGET,
    W_QUBIT,
    CorrectionAudit,
    Scheme,
    SchemeConfig,
    announce_sharing_outcome,
    apply_teleport_step,
    assist_party,
    finish_s1_success,
    finish_s2,
    initial_system,
    run_scheme_from,
    stage1_correction_audit,
)

# Channel qubits feeding the efficiency denominator: the Bell pair plus the
# W triple. The target qubit is not a channel.
CHANNEL_QUBITS = 5


@dataclass(frozen=True, eq=False)
class BranchRecord:
    """One enumeration leaf; fidelity is None on failed paths."""

    path: tuple[tuple[str, str], ...]
    probability: float
    success: bool
    fidelity: float | None
    cbits: int
    system: LoccSystem


@dataclass(frozen=True, eq=False)
class BranchReport:
    """Full enumeration of one scheme configuration."""

    scheme: Scheme
    branches: tuple[BranchRecord, ...]
    p_success: float
    fidelity_given_success: float

    def marginal(self, measurement: str) -> dict[str, float]:
        """Total probability of each outcome of the named measurement."""
        out: dict[str, float] = {}
        for br in self.branches:
            for name, outcome in br.path:
                if name == measurement:
                    out[outcome] = out.get(outcome, 0.0) + br.probability
        return out

    def to_text(self) -> str:
        lines = ["[branches]"]
        for br in self.branches:
            path = " ".join(f"{name}={outcome}" for name, outcome in br.path)
            fid = "-" if br.fidelity is None else _fmt(br.fidelity)
            lines.append(
                f"{path} | p={_fmt(br.probability)} | success={'yes' if br.success else 'no'}"
                f" | fidelity={fid} | cbits={br.cbits}"
            )
        lines += ["", "[summary]", f"leaves: {len(self.branches)}", f"p_success: {_fmt(self.p_success)}"]
        exact = as_exact_rational(self.p_success)
        if exact is not None:
            lines.append(f"p_success_exact: {_fmt_fraction(exact)}")
        lines.append(f"fidelity_given_success: {_fmt(self.fidelity_given_success)}")
        return "\n".join(lines)

    def to_jsonable(self) -> dict:
        exact = as_exact_rational(self.p_success)
        return {
            "scheme": self.scheme.value,
            "branches": [
                {
                    "path": [[name, outcome] for name, outcome in br.path],
                    "probability": br.probability,
                    "success": br.success,
                    "fidelity": br.fidelity,
                    "cbits": br.cbits,
                }
                for br in self.branches
            ],
            "p_success": self.p_success,
            "p_success_exact": None if exact is None else _fmt_fraction(exact),
            "fidelity_given_success": self.fidelity_given_success,
        }


@dataclass(frozen=True)
class SchemeStats:
    """Aggregate of sampled runs at a fixed seed."""

    trials: int
    successes: int
    mean_fidelity_on_success: float | None
    seed: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    def to_jsonable(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "mean_fidelity_on_success": self.mean_fidelity_on_success,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class EfficiencyRecord:
    """Intrinsic efficiency eta = p / (q + t), kept exact as a rational."""

    p: Fraction
    q: int
    t: int
    eta: Fraction


def efficiency(p: Fraction | int, q: int, t: int) -> EfficiencyRecord:
    """Success probability over total channel-qubit plus classical-bit count."""
    if q < 0 or t < 0:
        raise ValueError("resource counts cannot be negative")
    if q + t == 0:
        raise DivisionByZero("efficiency needs q + t > 0")
    p = Fraction(p)
    return EfficiencyRecord(p, q, t, p / (q + t))


def enumerate_scheme(cfg: SchemeConfig) -> BranchReport:
    """Depth-first expansion of every measurement with exact probabilities."""
    records: list[BranchRecord] = []
    sys0 = initial_system(cfg)
    for out1, p1, sys1 in branch_measure(sys0, Party.HOLLY, (TARGET, HOLLY_BELL), "bell"):
        sys1 = apply_teleport_step(sys1, cfg.omega, out1)
        for out2, p2, sys2 in branch_measure(sys1, Party.GREY, (GREY_BELL, "g"), "bell"):
            sys2 = announce_sharing_outcome(sys2, cfg, out2)
            head = (("teleport_bm", out1.value), ("sharing_bm", out2.value))
            if cfg.scheme is Scheme.S1:
                helper = assist_party(cfg)
                for bit, p3, sys3 in branch_measure(sys2, helper, (W_QUBIT[helper],), "z"):
                    path = head + (("assist_z", str(bit)),)
                    if bit == 0:
                        leaf, fid = finish_s1_success(sys3, cfg, out2)
                        records.append(
                            BranchRecord(path, p1 * p2 * p3, True, fid, cbit_count(leaf), leaf)
                        )
                    else:
                        records.append(
                            BranchRecord(path, p1 * p2 * p3, False, None, cbit_count(sys3), sys3)
                        )
            else:
                leaf, fid = finish_s2(sys2, cfg, out2)
                records.append(BranchRecord(head, p1 * p2, True, fid, cbit_count(leaf), leaf))

    total = sum(br.probability for br in records)
    if abs(total - 1.0) > 1e-12:
        raise InvariantBreach(f"branch probabilities sum to {total!r}, not 1")
    p_success = sum(br.probability for br in records if br.success)
    fid_sum = sum(br.probability * br.fidelity for br in records if br.success)
    fidelity_given_success = fid_sum / p_success if p_success > 0 else 0.0
    return BranchReport(cfg.scheme, tuple(records), p_success, fidelity_given_success)


def monte_carlo(cfg: SchemeConfig, trials: int, seed: int) -> SchemeStats:
    """Sampled runs; trial t consumes row t of the seed-determined draw table."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    sys0 = initial_system(cfg)
    draw_table = np.random.default_rng(seed).random((trials, 3))
    successes = 0
    fid_sum = 0.0
    for t in range(trials):
        result = run_scheme_from(sys0, cfg, draw_table[t])
        if result.success:
            successes += 1
            fid_sum += result.fidelity
    mean_fid = fid_sum / successes if successes else None
    return SchemeStats(trials, successes, mean_fid, seed)


@dataclass(frozen=True)
class Divergence:
    """A derived figure that disagrees with the published one."""

    field: str
    scheme: str | None
    published_value: str
    derived_value: str


@dataclass(frozen=True, eq=False)
class SchemeRow:
    scheme: str
    channel_qubits: int
    counts: dict[str, int]
    cbits: int
    p_success: float
    p_rational: Fraction | None
    eta: EfficiencyRecord | None


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    """Side-by-side resource and probability comparison of the two schemes."""

    rows: tuple[SchemeRow, SchemeRow]
    divergences: tuple[Divergence, ...]
    s1_failure_cbits: int
    correction_audit: CorrectionAudit

    def to_text(self) -> str:
        header = (
            "scheme | channel_qubits | bell_measurements | z_measurements"
            " | single_qubit_unitaries | collective_unitaries | cbits | p_success | eta"
        )
        lines = ["[comparison]", header]
        for row in self.rows:
            p = _fmt_fraction(row.p_rational) if row.p_rational is not None else _fmt(row.p_success)
            eta = _fmt_fraction(row.eta.eta) if row.eta is not None else "-"
            lines.append(
                f"{row.scheme} | {row.channel_qubits} | {row.counts['bell_measurements']}"
                f" | {row.counts['z_measurements']} | {row.counts['single_qubit_unitaries']}"
                f" | {row.counts['collective_unitaries']} | {row.cbits} | {p} | {eta}"
            )
        audit = self.correction_audit
        lines += [
            "",
            "[teleport_corrections]",
            "derived: " + _fmt_corrections(audit.derived),
            "published: " + _fmt_corrections(audit.published),
            "",
            "[divergences]",
        ]
        for d in self.divergences:
            where = f"{d.scheme} " if d.scheme else ""
            lines.append(f"{where}{d.field}: derived {d.derived_value}, published {d.published_value}")
        lines += ["", "[notes]", f"s1_failure_path_cbits: {self.s1_failure_cbits}"]
        return "\n".join(lines)

    def to_jsonable(self) -> dict:
        audit = self.correction_audit
        return {
            "rows": [
                {
                    "scheme": row.scheme,
                    "channel_qubits": row.channel_qubits,
                    **row.counts,
                    "cbits": row.cbits,
                    "p_success": row.p_success,
                    "p_success_exact": None if row.p_rational is None else _fmt_fraction(row.p_rational),
                    "eta": None if row.eta is None else _fmt_fraction(row.eta.eta),
                }
                for row in self.rows
            ],
            "teleport_corrections": {
                "derived": {o.value: p for o, p in audit.derived.items()},
                "published": {o.value: p for o, p in audit.published.items()},
            },
            "divergences": [
                {
                    "field": d.field,
                    "scheme": d.scheme,
                    "published": d.published_value,
                    "derived": d.derived_value,
                }
                for d in self.divergences
            ],
            "s1_failure_path_cbits": self.s1_failure_cbits,
        }


def compare_schemes(cfg_s1: SchemeConfig, cfg_s2: SchemeConfig) -> ComparisonReport:
    """Run both schemes on the same target and operation and tabulate resources."""
    if cfg_s1.scheme is not Scheme.S1 or cfg_s2.scheme is not Scheme.S2:
        raise ConfigParse("compare_schemes needs one s1 config and one s2 config")
    if (cfg_s1.a, cfg_s1.b, cfg_s1.omega) != (cfg_s2.a, cfg_s2.b, cfg_s2.omega):
        raise ConfigParse("compare_schemes needs matching a, b, omega across configs")

    reports = {"s1": enumerate_scheme(cfg_s1), "s2": enumerate_scheme(cfg_s2)}
    rows = []
    divergences: list[Divergence] = []
    for name in ("s1", "s2"):
        report = reports[name]
        success_leaf = next(br for br in report.branches if br.success)
        counts = operation_counts(success_leaf.system)
        cbits = success_leaf.cbits
        p_rational = as_exact_rational(report.p_success)
        eta = efficiency(p_rational, CHANNEL_QUBITS, cbits) if p_rational is not None else None
        rows.append(
            SchemeRow(name, CHANNEL_QUBITS, counts, cbits, report.p_success, p_rational, eta)
        )
        reference = published.COMPARISON_TABLE[name]
        checks = [
            ("channel_qubits", reference["channel_qubits"], CHANNEL_QUBITS),
            ("bell_measurements", reference["bell_measurements"], counts["bell_measurements"]),
            ("z_measurements", reference["z_measurements"], counts["z_measurements"]),
            ("cbits", reference["cbits"], cbits),
            ("p_success", reference["p_success"], p_rational),
            ("eta", reference["eta"], None if eta is None else eta.eta),
        ]
        for field, expected, derived in checks:
            if expected != derived:
                divergences.append(
                    Divergence(field, name, _fmt_value(expected), _fmt_value(derived))
                )

    audit = stage1_correction_audit()
    if audit.divergent:
        divergences.append(
            Divergence(
                "stage1_corrections",
                None,
                _fmt_corrections(audit.published),
                _fmt_corrections(audit.derived),
            )
        )

    failure_leaf = next(br for br in reports["s1"].branches if not br.success)
    return ComparisonReport(tuple(rows), tuple(divergences), failure_leaf.cbits, audit)


def as_exact_rational(x: float, max_denominator: int = 64, atol: float = 1e-12) -> Fraction | None:
    """Snap a float to a small exact rational, or None if none is that close."""
    r = Fraction(x).limit_denominator(max_denominator)
    return r if abs(float(r) - x) <= atol else None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _fmt_fraction(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _fmt_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return _fmt_fraction(v)
    return str(v)


def _fmt_corrections(table) -> str:
    return " ".join(f"{o.value}->{p}" for o, p in table.items())
