"""Batch driver: ``adamslab <command> [key=value ...] [--flags]``.

Settings come from built-in defaults, then an optional ``--config`` file of
``key=value`` lines, then positional ``key=value`` pairs, then flags; later
sources win.  Tables are CSV with a ``#`` line recording the resolved
settings, so equal settings give byte-identical output.

Exit codes: 0 success, 1 invalid configuration, 2 solver non-convergence or a
failed self-test, 3 a probe whose rows mostly overflowed.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import Callable, Optional

import numpy as np

from .functionals import (
    atc_identity_rhs,
    atsc_probe,
    cc_probe,
    concentration_level,
    embedding_probe,
    moser_probe,
)
from .mp_solver import EndpointSearchError, ProblemSpec, default_grid, diagnostics, mountain_pass_solve
from .radial_core import derived_constants
from .rearrangement import property_suite
from .sequences import PiecewiseRadial, moser_adams_xi, xi_closed_form
from .young import PhiOverflowError

EXIT_OK, EXIT_CONFIG, EXIT_FAILED, EXIT_OVERFLOW = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _words(text: str) -> list[str]:
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _bool(text) -> bool:
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


PARSERS: dict[str, Callable] = {
    "n": int,
    "p": float,
    "gamma": float,
    "alpha": float,
    "alpha_ratio": float,
    "ell": _floats,
    "ell_ratio": _floats,
    "k_min": float,
    "k_max": float,
    "k_points": int,
    "log_k": _bool,
    "lambda": float,
    "vartheta": float,
    "alpha0": float,
    "mu": float,
    "nodes": int,
    "rmax": float,
    "tol": float,
    "seed": int,
    "trials": int,
    "delta": float,
    "rho": float,
    "families": _words,
    "out": str,
}

FLAGS = ("n", "p", "gamma", "alpha", "ell", "k-min", "k-max", "lambda", "vartheta", "alpha0",
         "nodes", "rmax", "tol", "seed", "out")

COMMON = {"n": "4", "p": "1.5", "gamma": "1"}

DEFAULTS: dict[str, dict[str, str]] = {
    "constants": {"vartheta": "7", "alpha0": "1"},
    "moser-scan": {"k_min": "1e3", "k_max": "1e9", "k_points": "3"},
    "adams-probe": {"alpha_ratio": "1.1", "k_min": "1e3", "k_max": "1e9", "k_points": "7"},
    "cc-probe": {"ell_ratio": "1.1", "delta": "0.5", "k_min": "1e3", "k_max": "1e9", "k_points": "7"},
    "atsc-scan": {"ell_ratio": "0.9,0.95,0.99", "k_min": "2", "k_max": "1e6", "k_points": "240",
                  "log_k": "true", "families": "xi"},
    "rearrange-selftest": {"trials": "1000", "seed": "7"},
    "embed": {"rho": "6", "trials": "30", "seed": "0"},
    "solve": {"lambda": "1e6", "vartheta": "7", "alpha0": "1", "nodes": "2048", "rmax": "8", "tol": "1e-6"},
}


def _normalize_key(key: str) -> str:
    key = key.strip().lstrip("-").replace("-", "_")
    aliases = {"kgrid": "kgrid", "lam": "lambda", "r_max": "rmax", "theta": "vartheta"}
    return aliases.get(key, key)


def _parse_pairs(items, source: str) -> dict[str, str]:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"{source}: expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = _normalize_key(key)
        if key == "kgrid":
            parts = value.split(":")
            if len(parts) not in (2, 3):
                raise ConfigError("kgrid must look like k_min:k_max[:points]")
            out["k_min"], out["k_max"] = parts[0], parts[1]
            if len(parts) == 3:
                out["k_points"] = parts[2]
            continue
        out[key] = value.strip()
    return out


def _read_config(path: str) -> dict[str, str]:
    try:
        with open(path, encoding="utf-8") as handle:
            lines = [ln.split("#", 1)[0].strip() for ln in handle]
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return _parse_pairs([ln for ln in lines if ln], path)


def resolve(command: str, config: Optional[str], pairs, flags: dict) -> dict:
    raw = dict(COMMON)
    raw.update(DEFAULTS[command])
    if config:
        raw.update(_read_config(config))
    raw.update(_parse_pairs(pairs, "arguments"))
    raw.update({_normalize_key(k): v for k, v in flags.items() if v is not None})
    settings = {}
    for key, value in raw.items():
        if key not in PARSERS:
            raise ConfigError(f"unknown setting {key!r}")
        try:
            settings[key] = PARSERS[key](value)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return settings


def _config_line(command: str, settings: dict) -> str:
    def show(v):
        if isinstance(v, list):
            return ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
        return repr(v) if isinstance(v, float) else str(v)

    body = " ".join(f"{k}={show(v)}" for k, v in sorted(settings.items()) if k != "out")
    return f"# adamslab {command} {body}\n"


def _csv(header, rows, comment: str, notes=()) -> str:
    buf = io.StringIO()
    buf.write(comment)
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    for key, value in notes:
        buf.write(f"# {key}={value!r}\n" if isinstance(value, float) else f"# {key}={value}\n")
    return buf.getvalue()


def _k_grid(s: dict) -> list[float]:
    lo, hi, m = s["k_min"], s["k_max"], s["k_points"]
    if m < 1 or not (0 < lo <= hi):
        raise ConfigError("need 0 < k_min <= k_max and k_points >= 1")
    if s.get("log_k"):
        return np.geomspace(lo, hi, m).tolist() if m > 1 else [lo]
    if lo < 3:
        raise ConfigError("need k_min >= 3")
    return np.geomspace(lo, hi, m).tolist() if m > 1 else [lo]


def _check_model(s: dict):
    try:
        return derived_constants(s["n"], s["p"], s["gamma"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# -- commands -------------------------------------------------------------------


def cmd_constants(s, comment):
    mu = s.get("mu", s.get("vartheta"))
    try:
        cs = derived_constants(s["n"], s["p"], s["gamma"], mu, s.get("alpha0"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = [(k, v if isinstance(v, int) else float(v)) for k, v in cs.as_rows()]
    return _csv(["name", "value"], rows, comment), EXIT_OK


def cmd_moser_scan(s, comment):
    _check_model(s)
    n, p = s["n"], s["p"]
    rows = []
    for k in _k_grid(s):
        log_k = math.log(k)
        xi = moser_adams_xi(n=n, log_k=log_k)
        plain = PiecewiseRadial(n, xi.pieces)
        for t in (n / 2.0, p):
            closed = xi_closed_form(log_k, n, t)
            quad = plain.lap_norm_fn(t) ** t
            rows.append((k, t, quad, closed["total"], abs(quad / closed["total"] - 1.0),
                         closed["disc"], closed["annulus"], closed["collar"]))
    header = ["k", "t", "quadrature", "closed_form", "rel_err", "disc", "annulus", "collar"]
    return _csv(header, rows, comment), EXIT_OK


def _probe_output(table, comment, growth_key: str):
    rows = [(r.param, r.value, r.log_value, int(r.overflow)) for r in table]
    overflowed = sum(r.overflow for r in table)
    logs = table.log_values
    notes = [(growth_key, float(logs[-1] - logs[0]))]
    text = _csv(["log_k", "value", "log_value", "overflow"], rows, comment, notes)
    return text, EXIT_OVERFLOW if overflowed * 2 > len(table) else EXIT_OK


def cmd_adams_probe(s, comment):
    cs = _check_model(s)
    alpha = s["alpha"] if "alpha" in s else s["alpha_ratio"] * cs.beta_gamma
    if alpha < 0:
        raise ConfigError("alpha must be nonnegative")
    table = moser_probe(alpha, s["gamma"], _k_grid(s), s["n"], s["p"])
    return _probe_output(table, comment, "log_growth")


def cmd_cc_probe(s, comment):
    _check_model(s)
    if not 0 < s["delta"] < 1:
        raise ConfigError("delta must lie in (0, 1)")
    level = concentration_level(s["delta"], s["n"])
    ratios = s["ell"] if "ell" in s else [x * level for x in s["ell_ratio"]]
    if len(ratios) != 1:
        raise ConfigError("cc-probe takes a single ell")
    table = cc_probe(ratios[0], s["delta"], s["gamma"], _k_grid(s), s["n"], s["p"])
    text, code = _probe_output(table, comment, "log_growth")
    return text + f"# concentration_level={level!r}\n", code


def cmd_atsc_scan(s, comment):
    cs = _check_model(s)
    n, p, gamma = s["n"], s["p"], s["gamma"]
    ells = s["ell"] if "ell" in s else [x * cs.beta_n2 for x in s["ell_ratio"]]
    if any(not 0 < x < cs.beta_n2 for x in ells):
        raise ConfigError("every ell must lie in (0, beta(n,2))")
    table = atsc_probe(ells, gamma, _k_grid(s), n, p, log_k=s.get("log_k", False), families=s["families"])
    gap = 1.0 - (table.params / cs.beta_n2) ** ((n - 2.0) / 2.0)
    notes = []
    if len(table) >= 2:
        slope = float(np.polyfit(np.log(gap), table.log_values, 1)[0])
        notes.append(("fitted_slope", slope))
    notes.append(("envelope_slope", -(2.0 * cs.p_star / n) * (1.0 - gamma / n)))
    notes.append(("atc_half", atc_identity_rhs(table, n / 2.0, n / 2.0, gamma, n, p)))
    notes.append(("atc_full", atc_identity_rhs(table, float(n), float(n), gamma, n, p)))
    rows = [(r.param, r.param / cs.beta_n2, r.value, r.envelope, int(r.overflow), r.argmax) for r in table]
    text = _csv(["ell", "ell_ratio", "value", "envelope", "overflow", "best_log_k"], rows, comment, notes)
    overflowed = sum(r.overflow for r in table)
    return text, EXIT_OVERFLOW if overflowed * 2 > len(table) else EXIT_OK


def cmd_rearrange_selftest(s, comment):
    if s["trials"] < 1:
        raise ConfigError("trials must be positive")
    _check_model(s)
    rows = property_suite(s["trials"], s["seed"], s["n"], s["p"])
    failed = any(row[2] for row in rows)
    text = _csv(["property", "trials", "violations", "worst"], rows, comment)
    return text, EXIT_FAILED if failed else EXIT_OK


def cmd_embed(s, comment):
    _check_model(s)
    try:
        best, trace = embedding_probe(s["rho"], s["gamma"], s["n"], s["p"], s["trials"], seed=s["seed"], history=True)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = list(enumerate(trace, start=1))
    return _csv(["trial", "running_min"], rows, comment, [("estimate", best)]), EXIT_OK


def cmd_solve(s, comment):
    try:
        spec = ProblemSpec(
            n=s["n"], p=s["p"], gamma=s["gamma"], lam=s["lambda"], vartheta=s["vartheta"],
            alpha0=s["alpha0"], mu=s.get("mu"), grid=default_grid(s["n"], s["nodes"], s["rmax"]), tol=s["tol"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = mountain_pass_solve(spec)
    summary = diagnostics(spec, report)
    record = report.to_record() + "".join(f"diag_{k}={v!r}\n" if isinstance(v, float) else f"diag_{k}={v}\n"
                                          for k, v in summary.as_rows())
    profile = _csv(["r", "u", "lap_u"], report.profile_rows(), comment)
    return (record, profile), EXIT_OK if report.ok else EXIT_FAILED


COMMANDS = {
    "constants": cmd_constants,
    "moser-scan": cmd_moser_scan,
    "adams-probe": cmd_adams_probe,
    "cc-probe": cmd_cc_probe,
    "atsc-scan": cmd_atsc_scan,
    "rearrange-selftest": cmd_rearrange_selftest,
    "embed": cmd_embed,
    "solve": cmd_solve,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adamslab", description="Adams-type inequality experiments.")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("settings", nargs="*", help="key=value overrides")
    parser.add_argument("--config", help="file of key=value lines")
    for flag in FLAGS:
        parser.add_argument(f"--{flag}", dest=flag.replace("-", "_"), default=None)
    return parser


def _write(text: str, path: Optional[str]):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def run(command: str, settings: dict) -> int:
    """Execute one command with resolved settings; returns the exit code."""
    comment = _config_line(command, settings)
    result, code = COMMANDS[command](settings, comment)
    out = settings.get("out")
    if isinstance(result, tuple):
        record, table = result
        sys.stdout.write(record)
        if out:
            _write(table, out)
    else:
        _write(result, out)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {flag.replace("-", "_"): getattr(args, flag.replace("-", "_")) for flag in FLAGS}
    try:
        settings = resolve(args.command, args.config, args.settings, flags)
        return run(args.command, settings)
    except ConfigError as exc:
        print(f"adamslab: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EndpointSearchError as exc:
        print(f"adamslab: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except PhiOverflowError as exc:
        print(f"adamslab: overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW


if __name__ == "__main__":
    sys.exit(main())
