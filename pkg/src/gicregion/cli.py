"""Command-line front end: parse a channel config, dispatch, emit CSV/JSON.

Exit codes: 0 success, 2 validation error, 3 regime error, 4 numeric
non-convergence.  Errors print a single machine-parseable line to stderr
(``E<code>: <message>``) and never leave a partial artifact behind: output
files are fully rendered in memory, then written through a temp file and an
atomic rename.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, fields

from .boundary import (
    boundary_point_at_mu,
    key_points,
    mu2_closed,
    mu_at_d3,
    trace_lower_boundary,
    trace_upper_boundary,
)
from .core import (
    ChannelParams,
    GicError,
    NumericError,
    PowerSplit,
    RegimeError,
    ValidationError,
    awgn_capacity,
    scsd_layer_rates,
)
from .hk import lp_optimize_full, lp_optimize_reduced
from .mac import classify, corner_rates, sum_rate_front
from .oracle import grid_oracle

COMMANDS = ("trace", "classify", "sumrate", "hk-compare", "oracle", "scsd-demo", "keypoints")

_EXIT_CODES = {ValidationError: 2, RegimeError: 3, NumericError: 4}


@dataclass
class RunConfig:
    """Validated run configuration; flags override config-file values."""

    command: str
    a: float | None = None
    b: float | None = None
    p1: float | None = None
    p2: float | None = None
    points: int = 200
    resolution: int = 101
    mu: float = 1.0
    seed: int = 0
    delta: float = 1e-4
    rho: float | None = None
    theta: float | None = None
    power: float | None = None
    noise: float = 1.0
    layers: int = 10
    out: str | None = None
    format: str = "csv"

    def params(self) -> ChannelParams:
        missing = [k for k in ("a", "b", "p1", "p2") if getattr(self, k) is None]
        if missing:
            raise ValidationError(f"missing channel parameters: {', '.join(missing)}")
        return ChannelParams(a=self.a, b=self.b, p1=self.p1, p2=self.p2)


_FIELD_TYPES = {f.name: f for f in fields(RunConfig)}
_INT_KEYS = {"points", "resolution", "seed", "layers"}
_STR_KEYS = {"command", "out", "format"}


def _coerce(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ValidationError(f"config key {key!r} expects an integer; got {raw!r}")
    try:
        return float(raw)
    except ValueError:
        raise ValidationError(f"config key {key!r} expects a number; got {raw!r}")


def load_config_file(path: str) -> dict:
    """Flat ``key = value`` text; blank lines and '#' comments are ignored."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}")
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, _, raw = text.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ValidationError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _coerce(key, raw.strip())
    return values


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


def _write_artifact(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".gicregion-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(config: RunConfig, header: list[str], rows: list[list], payload: dict) -> None:
    if config.format == "csv":
        text = _csv_text(header, rows)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.out:
        _write_artifact(config.out, text)
    else:
        sys.stdout.write(text)


_TRACE_HEADER = ["mu", "rho", "theta", "p1hat", "p2hat", "r1", "r2", "regime", "mac_case"]


def _trace_rows(points) -> list[list]:
    return [
        [pt.mu, pt.rho, pt.theta, pt.p1hat, pt.p2hat, pt.r1, pt.r2, pt.regime, pt.mac_case]
        for pt in points
    ]


def _point_dict(pt) -> dict:
    return {
        "mu": pt.mu,
        "rho": pt.rho,
        "theta": pt.theta,
        "p1hat": pt.p1hat,
        "p2hat": pt.p2hat,
        "r1": pt.r1,
        "r2": pt.r2,
        "regime": pt.regime,
        "mac_case": pt.mac_case,
    }


def _cmd_trace(config: RunConfig) -> None:
    params = config.params()
    if config.points < 2:
        raise ValidationError(f"--points must be >= 2; got {config.points}")
    lower = trace_lower_boundary(params, config.points)
    upper = trace_upper_boundary(params, config.points)
    rows = _trace_rows(lower.points) + _trace_rows(upper.points)
    payload = {
        "params": params.as_dict(),
        "regime_report": {
            "lower": lower.regime,
            "lower_clipped": lower.clipped,
            "upper": upper.regime,
            "upper_clipped": upper.clipped,
        },
        "points": [_point_dict(pt) for pt in lower.points]
        + [_point_dict(pt) for pt in upper.points],
    }
    _emit(config, _TRACE_HEADER, rows, payload)
    print(
        f"trace: {len(lower)} lower + {len(upper)} upper points; "
        f"lower regime {lower.regime}, upper regime {upper.regime}",
        file=sys.stderr,
    )


def _cmd_classify(config: RunConfig) -> None:
    params = config.params()
    if config.rho is None or config.theta is None:
        raise ValidationError("classify requires --rho and --theta")
    split = PowerSplit(rho=config.rho, theta=config.theta)
    corners = corner_rates(params, split)
    case = classify(corners)
    payload = dict(corners.as_dict())
    payload["case_id"] = case.name
    header = list(payload.keys())
    _emit(config, header, [list(payload.values())], payload)


def _cmd_sumrate(config: RunConfig) -> None:
    params = config.params()
    front = sum_rate_front(params)
    payload = {
        "r_sum": front.r_sum,
        "binding_receiver": front.binding_receiver,
        "rho_s": front.rho_s,
        "theta_s": front.theta_s,
    }
    _emit(config, list(payload.keys()), [list(payload.values())], payload)


def _cmd_hk_compare(config: RunConfig) -> None:
    params = config.params()
    if config.resolution < 2:
        raise ValidationError(f"--resolution must be >= 2; got {config.resolution}")
    n = config.resolution
    rows = []
    max_diff = 0.0
    for i in range(n):
        for j in range(n):
            split = PowerSplit(rho=i / (n - 1), theta=j / (n - 1))
            full = lp_optimize_full(params, split, config.mu).weighted_sum(config.mu)
            red = lp_optimize_reduced(params, split, config.mu).weighted_sum(config.mu)
            diff = abs(full - red)
            max_diff = max(max_diff, diff)
            rows.append([split.rho, split.theta, full, red, diff])
    payload = {
        "params": params.as_dict(),
        "mu": config.mu,
        "resolution": n,
        "max_discrepancy": max_diff,
        "cells": [
            {"rho": r, "theta": t, "full": f, "reduced": d, "abs_diff": x}
            for r, t, f, d, x in rows
        ],
    }
    _emit(config, ["rho", "theta", "full", "reduced", "abs_diff"], rows, payload)
    print(f"hk-compare: max discrepancy {_fmt(max_diff)} over {n * n} splits", file=sys.stderr)


def _cmd_oracle(config: RunConfig) -> None:
    params = config.params()
    reference_pt = boundary_point_at_mu(params, config.mu)
    reference = reference_pt.r1 + config.mu * reference_pt.r2
    report = grid_oracle(params, config.mu, config.resolution, reference)
    payload = {
        "best_value": report.best_value,
        "best_rho": report.best_split.rho,
        "best_theta": report.best_split.theta,
        "gap_vs_reference": report.gap_vs_reference,
        "reference_value": reference,
        "samples": report.samples,
        "resolution": report.resolution,
        "seed": report.seed,
        "mu": config.mu,
    }
    _emit(config, list(payload.keys()), [list(payload.values())], payload)
    print(
        f"oracle: value={_fmt(report.best_value)} gap={_fmt(report.gap_vs_reference)} "
        f"argmax=({_fmt(report.best_split.rho)},{_fmt(report.best_split.theta)}) "
        f"seed={report.seed}",
        file=sys.stderr,
    )


def _cmd_scsd_demo(config: RunConfig) -> None:
    if config.power is None:
        raise ValidationError("scsd-demo requires --power")
    rates = scsd_layer_rates(config.power, config.noise, config.layers)
    capacity = awgn_capacity(config.power, config.noise)
    residual = math.fsum(rates) - capacity
    rows = [[i + 1, r] for i, r in enumerate(rates)]
    payload = {
        "power": config.power,
        "noise": config.noise,
        "layers": config.layers,
        "rates": rates,
        "total": math.fsum(rates),
        "single_layer_capacity": capacity,
        "telescoping_residual": residual,
    }
    _emit(config, ["layer", "rate"], rows, payload)
    print(f"scsd-demo: {config.layers} layers, telescoping residual {_fmt(residual)}", file=sys.stderr)


def _cmd_keypoints(config: RunConfig) -> None:
    params = config.params()
    kp = key_points(params)
    mu_d1 = mu2_closed(params, params.p1, params.t2)
    mu_d3 = mu_at_d3(params)
    named = [
        ("A", kp.point_a),
        ("D1", _stationary_point(params, kp.d2_p2hat, mu_d1)),
        ("D2", _stationary_point(params, kp.d2_p2hat, mu_d1)),
        ("D3", _stationary_point(params, kp.d3_p2hat, mu_d3)),
        ("S", boundary_point_at_mu(params, 1.0)),
    ]
    rows = [
        [name, pt.mu, pt.rho, pt.theta, pt.p1hat, pt.p2hat, pt.r1, pt.r2]
        for name, pt in named
    ]
    payload = {
        "params": params.as_dict(),
        "points": {name: _point_dict(pt) for name, pt in named},
    }
    _emit(config, ["point", "mu", "rho", "theta", "p1hat", "p2hat", "r1", "r2"], rows, payload)


def _stationary_point(params: ChannelParams, p2hat: float, mu: float):
    from .boundary import _assemble  # shared assembly, internal on purpose

    split = PowerSplit.from_private_powers(params, params.p1, p2hat)
    return _assemble(params, split, mu, "StationaryUser2")


_DISPATCH = {
    "trace": _cmd_trace,
    "classify": _cmd_classify,
    "sumrate": _cmd_sumrate,
    "hk-compare": _cmd_hk_compare,
    "oracle": _cmd_oracle,
    "scsd-demo": _cmd_scsd_demo,
    "keypoints": _cmd_keypoints,
}


def build_config(argv: list[str]) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="gic-region",
        description="Rate-region computations for the 2-user weak Gaussian interference channel.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument("--config", help="flat key = value config file")
    parser.add_argument("--a", type=float)
    parser.add_argument("--b", type=float)
    parser.add_argument("--p1", type=float)
    parser.add_argument("--p2", type=float)
    parser.add_argument("--points", type=int)
    parser.add_argument("--resolution", type=int)
    parser.add_argument("--mu", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--rho", type=float)
    parser.add_argument("--theta", type=float)
    parser.add_argument("--power", type=float)
    parser.add_argument("--noise", type=float)
    parser.add_argument("--layers", type=int)
    parser.add_argument("--out")
    parser.add_argument("--format", choices=("csv", "json"))
    ns = parser.parse_args(argv)

    values: dict = {}
    if ns.config:
        values.update(load_config_file(ns.config))
    for key in _FIELD_TYPES:
        flag = getattr(ns, key, None)
        if flag is not None:
            values[key] = flag
    command = values.pop("command", None)
    if command is None:
        raise ValidationError("no command given (positional argument or 'command' config key)")
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    config = RunConfig(command=command, **values)
    if config.format not in ("csv", "json"):
        raise ValidationError(f"format must be csv or json; got {config.format!r}")
    return config


def run(config: RunConfig) -> int:
    _DISPATCH[config.command](config)
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(build_config(argv))
    except GicError as exc:
        code = 2
        for etype, ecode in _EXIT_CODES.items():
            if isinstance(exc, etype):
                code = ecode
        message = str(exc).replace("\n", " ")
        print(f"E{code}: {message}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
