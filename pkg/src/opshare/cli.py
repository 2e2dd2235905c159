"""Command-line front end: configure a scheme, run, enumerate, compare."""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from math import pi

from .analysis import compare_schemes, enumerate_scheme, monte_carlo
from .channels import OmegaSpec, WAsymmetricSpec
from .errors import ConfigParse, InvariantBreach, NormViolation, OpShareError
from .locc import Party
from .schemes import Scheme, SchemeConfig

DEFAULTS: dict = {
    "scheme": "s1",
    "a": [2**-0.5, 0.0],
    "b": [2**-0.5, 0.0],
    "omega": {"angles": [pi / 2, 0.0, pi]},
    "alpha": [0.6, 0.0],
    "beta": [0.8, 0.0],
    "recoverer": "holly",
    "trials": 100000,
    "seed": 42,
}

_CONFIG_FIELDS = set(DEFAULTS)
_RECOVERERS = {"holly": Party.HOLLY, "jack": Party.JACK}


def _parse_complex_pair(field: str, value) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise ConfigParse(f"field {field!r} must be a [re, im] number pair")
    return complex(value[0], value[1])


def _parse_complex_flag(field: str, text: str) -> list[float]:
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise ConfigParse(f"flag --{field} takes RE or RE,IM")
    try:
        re = float(parts[0])
        im = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise ConfigParse(f"flag --{field} has a non-numeric part in {text!r}") from None
    return [re, im]


def _parse_omega(value) -> OmegaSpec:
    if not isinstance(value, dict) or set(value) not in ({"angles"}, {"matrix"}):
        raise ConfigParse("field 'omega' must be {'angles': [t, p, l]} or {'matrix': ...}")
    if "angles" in value:
        angles = value["angles"]
        if not isinstance(angles, list) or len(angles) != 3 or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in angles
        ):
            raise ConfigParse("field 'omega.angles' must be three numbers")
        return OmegaSpec(float(angles[0]), float(angles[1]), float(angles[2]))
    rows = value["matrix"]
    try:
        matrix = tuple(
            tuple(complex(entry[0], entry[1]) for entry in row) for row in rows
        )
    except (TypeError, IndexError):
        raise ConfigParse("field 'omega.matrix' must be 2x2 [re, im] entries") from None
    if len(matrix) != 2 or any(len(row) != 2 for row in matrix):
        raise ConfigParse("field 'omega.matrix' must be 2x2 [re, im] entries")
    return OmegaSpec(matrix=matrix)


def _load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ConfigParse(f"cannot read config file: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigParse(f"config file is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ConfigParse("config document must be a JSON object")
    unknown = set(doc) - _CONFIG_FIELDS
    if unknown:
        raise ConfigParse(f"unknown config field: {sorted(unknown)[0]!r}")
    return doc


def _resolve_config(args: argparse.Namespace) -> dict:
    doc = dict(DEFAULTS)
    if args.config:
        doc.update(_load_config_file(args.config))
    if args.scheme is not None:
        doc["scheme"] = args.scheme
    if args.a is not None:
        doc["a"] = _parse_complex_flag("a", args.a)
    if args.b is not None:
        doc["b"] = _parse_complex_flag("b", args.b)
    if args.omega_angles is not None:
        parts = args.omega_angles.split(",")
        if len(parts) != 3:
            raise ConfigParse("flag --omega-angles takes THETA,PHI,LAMBDA")
        try:
            doc["omega"] = {"angles": [float(x) for x in parts]}
        except ValueError:
            raise ConfigParse("flag --omega-angles has a non-numeric part") from None
    if args.alpha is not None:
        doc["alpha"] = _parse_complex_flag("alpha", args.alpha)
    if args.beta is not None:
        doc["beta"] = _parse_complex_flag("beta", args.beta)
    if args.recoverer is not None:
        doc["recoverer"] = args.recoverer
    if args.trials is not None:
        doc["trials"] = args.trials
    if args.seed is not None:
        doc["seed"] = args.seed
    _validate_document(doc)
    return doc


def _validate_document(doc: dict) -> None:
    if doc["scheme"] not in ("s1", "s2"):
        raise ConfigParse("field 'scheme' must be 's1' or 's2'")
    if doc["recoverer"] not in _RECOVERERS:
        raise ConfigParse("field 'recoverer' must be 'holly' or 'jack'")
    if not isinstance(doc["trials"], int) or isinstance(doc["trials"], bool) or doc["trials"] < 1:
        raise ConfigParse("field 'trials' must be a positive integer")
    if not isinstance(doc["seed"], int) or isinstance(doc["seed"], bool) or doc["seed"] < 0:
        raise ConfigParse("field 'seed' must be a non-negative integer")
    a = _parse_complex_pair("a", doc["a"])
    b = _parse_complex_pair("b", doc["b"])
    if abs(a) ** 2 + abs(b) ** 2 == 0:
        raise ConfigParse("fields 'a' and 'b' cannot both be zero")
    _parse_omega(doc["omega"])
    _parse_complex_pair("alpha", doc["alpha"])
    _parse_complex_pair("beta", doc["beta"])


def _scheme_config(doc: dict, scheme: str | None = None) -> SchemeConfig:
    scheme = scheme or doc["scheme"]
    wspec = None
    if scheme == "s2":
        try:
            wspec = WAsymmetricSpec(
                _parse_complex_pair("alpha", doc["alpha"]),
                _parse_complex_pair("beta", doc["beta"]),
            )
        except NormViolation as e:
            raise ConfigParse(f"fields 'alpha'/'beta': {e}") from None
    return SchemeConfig(
        scheme=Scheme(scheme),
        a=_parse_complex_pair("a", doc["a"]),
        b=_parse_complex_pair("b", doc["b"]),
        omega=_parse_omega(doc["omega"]),
        wspec=wspec,
        recoverer=_RECOVERERS[doc["recoverer"]],
    )


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _fmt_pair(pair) -> str:
    return f"{_fmt(pair[0])}{'+' if pair[1] >= 0 else '-'}{_fmt(abs(pair[1]))}j"


def _config_lines(doc: dict, include_channel: bool) -> list[str]:
    lines = [
        "[config]",
        f"scheme: {doc['scheme']}",
        f"a: {_fmt_pair(doc['a'])}",
        f"b: {_fmt_pair(doc['b'])}",
    ]
    omega = doc["omega"]
    if "angles" in omega:
        lines.append("omega: angles " + " ".join(_fmt(x) for x in omega["angles"]))
    else:
        entries = " ".join(_fmt_pair(e) for row in omega["matrix"] for e in row)
        lines.append(f"omega: matrix {entries}")
    if include_channel:
        lines.append(f"alpha: {_fmt_pair(doc['alpha'])}")
        lines.append(f"beta: {_fmt_pair(doc['beta'])}")
    lines.append(f"recoverer: {doc['recoverer']}")
    lines.append(f"trials: {doc['trials']}")
    lines.append(f"seed: {doc['seed']}")
    return lines


def _header(command: str, args: argparse.Namespace) -> list[str]:
    lines = [f"opshare {command}"]
    if not args.no_timestamp:
        lines.append(f"timestamp: {datetime.now(timezone.utc).isoformat()}")
    return lines


def _emit(args: argparse.Namespace, text: str) -> None:
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def _emit_json(args: argparse.Namespace, payload: dict) -> None:
    if not args.no_timestamp:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    _emit(args, json.dumps(payload, indent=2, sort_keys=True))


def _cmd_run(args: argparse.Namespace, doc: dict) -> int:
    cfg = _scheme_config(doc)
    stats = monte_carlo(cfg, doc["trials"], doc["seed"])
    if args.json:
        _emit_json(args, {"command": "run", "config": doc, "result": stats.to_jsonable()})
        return 0
    lines = _header("run", args) + _config_lines(doc, cfg.scheme is Scheme.S2)
    lines += [
        "[result]",
        f"trials: {stats.trials}",
        f"successes: {stats.successes}",
        f"success_rate: {_fmt(stats.success_rate)}",
        "mean_fidelity_on_success: "
        + ("-" if stats.mean_fidelity_on_success is None else _fmt(stats.mean_fidelity_on_success)),
    ]
    _emit(args, "\n".join(lines))
    return 0


def _cmd_enumerate(args: argparse.Namespace, doc: dict) -> int:
    cfg = _scheme_config(doc)
    report = enumerate_scheme(cfg)
    if args.json:
        _emit_json(args, {"command": "enumerate", "config": doc, "report": report.to_jsonable()})
        return 0
    lines = _header("enumerate", args) + _config_lines(doc, cfg.scheme is Scheme.S2)
    _emit(args, "\n".join(lines) + "\n" + report.to_text())
    return 0


def _cmd_compare(args: argparse.Namespace, doc: dict) -> int:
    report = compare_schemes(_scheme_config(doc, "s1"), _scheme_config(doc, "s2"))
    if args.json:
        _emit_json(args, {"command": "compare", "config": doc, "report": report.to_jsonable()})
        return 0
    lines = _header("compare", args) + _config_lines(doc, True)
    _emit(args, "\n".join(lines) + "\n" + report.to_text())
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opshare", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_text in (
        ("run", _cmd_run, "sampled Monte Carlo runs of one scheme"),
        ("enumerate", _cmd_enumerate, "exact branch enumeration of one scheme"),
        ("compare", _cmd_compare, "side-by-side comparison of both schemes"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--scheme", choices=("s1", "s2"))
        p.add_argument("--a", metavar="RE[,IM]")
        p.add_argument("--b", metavar="RE[,IM]")
        p.add_argument("--omega-angles", metavar="T,P,L")
        p.add_argument("--alpha", metavar="RE[,IM]")
        p.add_argument("--beta", metavar="RE[,IM]")
        p.add_argument("--recoverer", choices=("holly", "jack"))
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--config", metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--json", action="store_true")
        p.add_argument("--no-timestamp", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        doc = _resolve_config(args)
        return args.func(args, doc)
    except ConfigParse as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except InvariantBreach as e:
        print(f"invariant breach: {e}", file=sys.stderr)
        return 3
    except OpShareError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
