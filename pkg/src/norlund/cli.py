"""Command-line front end.

Exit status: 0 on success, 1 on bad input, 2 when an exact invariant fails
(e.g. a row of C_pq not summing to 1).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .demos import CATALOG, run_demo
from .inclusion import (
    InvariantViolation,
    classify_inclusion,
    inclusion_matrix,
    kojima_schur_report,
)
from .numerics import LimitConfig, NumericsError, parse_rational, render_value
from .transform import HorizonMismatch, convolve, invert_mean, norlund_mean, solve_kernel
from .weights import WeightSpecError, generate_weights

COMMANDS = ("mean", "invert", "kernel", "matrix", "diagnose", "classify", "demo")
NEEDS_Q = {"kernel", "matrix", "diagnose", "classify"}
NEEDS_SEQUENCE = {"mean", "invert"}
USES_DETECTORS = {"diagnose", "classify", "demo"}

PROBES = {
    "const1": lambda m: Fraction(1),
    # partial sums of 1 - 1 + 1 - ..., not the terms themselves (see altsign)
    "grandi": lambda m: Fraction(1 - m % 2),
    "e0": lambda m: Fraction(int(m == 0)),
    "altsign": lambda m: Fraction((-1) ** m),
}

CONFIG_ENV = "NORLUND_CONFIG"
# JSON config keys -> LimitConfig fields
_CONFIG_KEYS = {
    "horizon": "horizon",
    "window": "window",
    "tol": "tolerance",
    "tolerance": "tolerance",
    "zero_threshold": "zero_threshold",
    "growth_factor": "growth_factor",
    "n_max": "n_max",
}


class InputError(ValueError):
    pass


@dataclass
class CommandRequest:
    command: str
    p_spec: str | None = None
    q_spec: str | None = None
    probe: str | None = None
    values: str | None = None
    input_path: str | None = None
    horizon: int | None = None
    arith: str = "exact"
    format: str = "json"
    demo: str | None = None
    config: LimitConfig = field(default_factory=LimitConfig)


# --------------------------------------------------------------------------
# Input handling
# --------------------------------------------------------------------------


def _parse_values(tokens, source: str) -> list[Fraction]:
    out = []
    for tok in tokens:
        tok = str(tok).strip()
        if not tok:
            continue
        try:
            out.append(parse_rational(tok, allow_decimal=True))
        except NumericsError:
            raise InputError(f"{source}: cannot parse value {tok!r}") from None
    if not out:
        raise InputError(f"{source}: empty sequence")
    return out


def read_sequence_file(path: str) -> list[Fraction]:
    """A JSON array of strings/numbers, or CSV with one value per line."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"--input: {exc}") from None
    if text.lstrip().startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"--input: invalid JSON ({exc})") from None
        return _parse_values(data, "--input")
    tokens = [t for line in text.splitlines() for t in line.split(",")]
    return _parse_values(tokens, "--input")


def _resolve_sequence(req: CommandRequest, horizon: int | None) -> list[Fraction]:
    sources = [s for s in (req.probe, req.values, req.input_path) if s is not None]
    if len(sources) != 1:
        raise InputError(f"{req.command} needs exactly one of --probe, --values, --input")
    if req.probe is not None:
        if req.probe not in PROBES:
            raise InputError(f"--probe: unknown probe {req.probe!r}; choose from {', '.join(PROBES)}")
        M = req.config.horizon if horizon is None else horizon
        return [PROBES[req.probe](m) for m in range(M + 1)]
    if req.values is not None:
        seq = _parse_values(req.values.split(","), "--values")
    else:
        seq = read_sequence_file(req.input_path)
    if horizon is not None and len(seq) != horizon + 1:
        raise InputError(f"input has {len(seq)} values but --horizon {horizon} needs {horizon + 1}")
    return seq


def _weights(spec: str | None, flag: str, horizon: int):
    if spec is None:
        raise InputError(f"{flag} is required")
    try:
        return generate_weights(spec, horizon)
    except WeightSpecError as exc:
        raise InputError(f"{flag}: {exc}") from None


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key in sorted(obj):
            yield from _flatten(obj[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(obj, list):
        for i, item in enumerate(obj):
            yield from _flatten(item, f"{prefix}[{i}]")
    else:
        yield prefix, "" if obj is None else obj


def _report_csv(obj: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(_flatten(obj))
    return buf.getvalue()


def _report_text(obj: dict) -> str:
    return "".join(f"{key}: {value}\n" for key, value in _flatten(obj))


def _emit_sequence(req: CommandRequest, header: dict, seq) -> str:
    rendered = [render_value(x, req.arith) for x in seq]
    if req.format == "csv":
        return "".join(v + "\n" for v in rendered)
    if req.format == "text":
        head = " ".join(f"{k}={v}" for k, v in header.items())
        return head + "\n" + "".join(f"{m:>5}  {v}\n" for m, v in enumerate(rendered))
    return dump_json({**header, "arith": req.arith, "values": rendered}) + "\n"


def _emit_report(req: CommandRequest, obj: dict) -> str:
    if req.format == "csv":
        return _report_csv(obj)
    if req.format == "text":
        return _report_text(obj)
    return dump_json(obj) + "\n"


def _render_sup(obj: dict, arith: str) -> dict:
    # condition-one sup is exact; float mode renders it as a float string
    if arith == "float" and "sup" in obj:
        obj = {**obj, "sup": render_value(parse_rational(obj["sup"]), "float")}
    return obj


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def _cmd_mean(req, horizon):
    seq = _resolve_sequence(req, horizon)
    p = _weights(req.p_spec, "--p", len(seq) - 1)
    out = norlund_mean(p, seq)
    return 0, _emit_sequence(req, {"command": "mean", "p": p.label, "horizon": p.horizon}, out)


def _cmd_invert(req, horizon):
    seq = _resolve_sequence(req, horizon)
    p = _weights(req.p_spec, "--p", len(seq) - 1)
    out = invert_mean(p, seq)
    return 0, _emit_sequence(req, {"command": "invert", "p": p.label, "horizon": p.horizon}, out)


def _pq(req, horizon):
    M = req.config.horizon if horizon is None else horizon
    return _weights(req.p_spec, "--p", M), _weights(req.q_spec, "--q", M)


def _cmd_kernel(req, horizon):
    p, q = _pq(req, horizon)
    k = solve_kernel(p, q)
    conv_ok = convolve(k, p.values) == q.values
    summed_ok = convolve(k, p.partial_sums) == q.partial_sums
    status = 0 if conv_ok and summed_ok else 2
    if req.format == "json":
        obj = {
            "command": "kernel", "p": p.label, "q": q.label, "horizon": p.horizon, "arith": req.arith,
            "values": [render_value(x, req.arith) for x in k],
            "convolution_identity": "pass" if conv_ok else "fail",
            "summed_identity": "pass" if summed_ok else "fail",
        }
        return status, dump_json(obj) + "\n"
    text = _emit_sequence(req, {"command": "kernel", "p": p.label, "q": q.label}, k)
    if req.format == "text":
        text += f"convolution_identity: {'pass' if conv_ok else 'fail'}\n"
        text += f"summed_identity: {'pass' if summed_ok else 'fail'}\n"
    return status, text


def _materialize(p, q, arith):
    C = inclusion_matrix(p, q)
    if arith == "exact":
        C.check_row_sums()
    return C


def _cmd_matrix(req, horizon):
    p, q = _pq(req, horizon)
    C = _materialize(p, q, req.arith)
    if req.format == "csv":
        if req.arith == "exact":
            lines = ["m,n,numerator,denominator"] + [f"{m},{n},{a},{b}" for m, n, a, b in C.csv_records()]
        else:
            lines = ["m,n,value"] + [
                f"{m},{n},{render_value(c, 'float')}" for m, row in enumerate(C.rows) for n, c in enumerate(row)
            ]
        return 0, "\n".join(lines) + "\n"
    rows = [[render_value(c, req.arith) for c in row] for row in C.rows]
    if req.format == "text":
        return 0, "".join(f"{m:>4}: " + "  ".join(r) + "\n" for m, r in enumerate(rows))
    obj = {"command": "matrix", "p": p.label, "q": q.label, "horizon": C.horizon, "arith": req.arith, "rows": rows}
    return 0, dump_json(obj) + "\n"


def _cmd_diagnose(req, horizon):
    p, q = _pq(req, horizon)
    C = _materialize(p, q, req.arith)
    ks = kojima_schur_report(C, req.config.with_horizon(C.horizon))
    obj = ks.to_dict()
    obj["row_abs_sum"] = _render_sup(obj["row_abs_sum"], req.arith)
    obj = {"command": "diagnose", "p": p.label, "q": q.label, "horizon": C.horizon, **obj}
    return 0, _emit_report(req, obj)


def _cmd_classify(req, horizon):
    p, q = _pq(req, horizon)
    report = classify_inclusion(p, q, req.config.with_horizon(p.horizon))
    obj = report.to_dict()
    obj["condition_one"] = _render_sup(obj["condition_one"], req.arith)
    return 0, _emit_report(req, obj)


def _cmd_demo(req, horizon):
    if req.demo is None:
        lines = [f"{s.name}: {s.description}" for s in CATALOG.values()]
        return 0, "\n".join(lines) + "\n"
    if req.demo not in CATALOG:
        raise InputError(f"demo: unknown demo {req.demo!r}; choose from {', '.join(CATALOG)}")
    cfg = req.config if horizon is None else req.config.with_horizon(horizon)
    result = run_demo(req.demo, cfg)
    return (0 if result["passed"] else 2), _emit_report(req, result)


_DISPATCH = {
    "mean": _cmd_mean,
    "invert": _cmd_invert,
    "kernel": _cmd_kernel,
    "matrix": _cmd_matrix,
    "diagnose": _cmd_diagnose,
    "classify": _cmd_classify,
    "demo": _cmd_demo,
}


def run_command(req: CommandRequest) -> tuple[int, str, str]:
    """Run one request; returns ``(exit_status, stdout_text, stderr_text)``."""
    if req.command not in _DISPATCH:
        return 1, "", f"error: unknown command {req.command!r}\n"
    if req.command in NEEDS_Q and req.q_spec is None:
        return 1, "", f"error: {req.command} requires --q\n"
    try:
        status, out = _DISPATCH[req.command](req, req.horizon)
    except (InputError, WeightSpecError, NumericsError, HorizonMismatch) as exc:
        return 1, "", f"error: {exc}\n"
    except InvariantViolation as exc:
        return 2, "", f"invariant violation: {exc}\n"
    return status, out, ""


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------


def load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{CONFIG_ENV}: cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{CONFIG_ENV}: {path} must hold a JSON object")
    out = {}
    for key, value in data.items():
        name = _CONFIG_KEYS.get(key.replace("-", "_"))
        if name is None:
            raise InputError(f"{CONFIG_ENV}: unknown config field {key!r}")
        out[name] = value
    return out


def _growth_factor(text: str) -> Fraction:
    try:
        return parse_rational(text, allow_decimal=True)
    except NumericsError as exc:
        raise argparse.ArgumentTypeError(str(exc))


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1), not argparse's default 2
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="norlund",
        description="Nörlund means, the inclusion matrix C_pq and finite-horizon inclusion verdicts.",
        epilog="Weight specs: u | cesaro:<int> | const:<rat> | geom:<rat> | list:<rat>,... "
               "Probes: const1, grandi = partial sums (1,0,1,0,...) of 1-1+1-..., e0, altsign = ((-1)^n).",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("demo", nargs="?", help="scenario name for the demo command")
    parser.add_argument("--p", dest="p_spec")
    parser.add_argument("--q", dest="q_spec")
    parser.add_argument("--horizon", type=int)
    parser.add_argument("--window", type=int)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--zero-threshold", type=float)
    parser.add_argument("--growth-factor", type=_growth_factor)
    parser.add_argument("--n-max", type=int)
    parser.add_argument("--arith", choices=("exact", "float"), default="exact")
    parser.add_argument("--format", choices=("json", "csv", "text"), default="json")
    parser.add_argument("--probe", help="named input sequence: " + ", ".join(PROBES))
    parser.add_argument("--values", help="inline comma-separated input sequence")
    parser.add_argument("--input", dest="input_path", help="CSV (one value per line) or JSON array file")
    return parser


def request_from_args(argv=None, environ=None) -> CommandRequest:
    """Defaults, then the NORLUND_CONFIG file, then flags."""
    environ = os.environ if environ is None else environ
    args = build_parser().parse_args(argv)
    if args.command != "demo" and args.demo is not None:
        raise InputError(f"unexpected argument {args.demo!r}")
    overrides = load_config_file(environ[CONFIG_ENV]) if environ.get(CONFIG_ENV) else {}
    for flag, name in [("horizon", "horizon"), ("window", "window"), ("tol", "tolerance"),
                       ("zero_threshold", "zero_threshold"), ("growth_factor", "growth_factor"),
                       ("n_max", "n_max")]:
        value = getattr(args, flag)
        if value is not None:
            overrides[name] = value
    if isinstance(overrides.get("growth_factor"), str):
        overrides["growth_factor"] = parse_rational(overrides["growth_factor"], allow_decimal=True)
    horizon = overrides.get("horizon")
    if args.command not in USES_DETECTORS:
        # no detectors run, so a horizon shorter than the window is fine
        overrides.pop("horizon", None)
    cfg = replace(LimitConfig(), **overrides)
    return CommandRequest(
        command=args.command, p_spec=args.p_spec, q_spec=args.q_spec, probe=args.probe,
        values=args.values, input_path=args.input_path, horizon=horizon,
        arith=args.arith, format=args.format, demo=args.demo, config=cfg,
    )


def main(argv=None) -> int:
    try:
        req = request_from_args(argv)
    except (InputError, NumericsError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    status, out, err = run_command(req)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
