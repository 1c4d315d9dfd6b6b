"""Command-line orchestrator.

Subcommands: ``tables`` (build and cross-check the B/A tables), ``certify``
(square certificates and Sturm positivity), ``guess`` (recurrence pipeline
per column), ``fact1`` (formal identity check), ``report`` (aggregate
ledger). Artifacts are cached as canonical JSON with content checksums; a
checksum mismatch is treated as a miss and recomputed.

Exit codes: 0 all verifications pass, 1 a mathematical verification failed,
2 usage or environment error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, fields

from . import serialize as ser
from .certify import certify_fact2
from .fact1 import flow_consistency_ok, verify_fact1
from .holonomic import (
    GuessNotFound,
    SeqSlice,
    SymSquareNotFound,
    guess_rec,
    initial_value_bridge,
    op_equal,
    rec_verify,
    sym_square_root,
)
from .tables import (
    TableMismatch,
    a_via_convolution,
    build_a_table,
    build_b_table,
    build_b_table_rec,
    cross_check,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2

GUESS_MAX_ORDER = 3
GUESS_MAX_DEG_N = 8
GUESS_MAX_DEG_C = 3

L_FIELD_NOTE = (
    "the order-2 recurrence for the square roots carries n-dependent "
    "irrational constant factors, so it is certified through the symmetric "
    "square over the rational-function field instead of being guessed "
    "directly"
)


class UsageError(Exception):
    """Bad flags, bad config file, or an unusable environment."""


@dataclass
class RunConfig:
    max_n: int = 20
    fact1_max_k: int = 6
    sturm_max_n: int = 12
    guess_k_range: int = 6
    guess_window: int = 30
    verify_window: int = 60
    cache_dir: str = "cache"
    output_format: str = "text"


_INT_FIELDS = {
    "max_n",
    "fact1_max_k",
    "sturm_max_n",
    "guess_k_range",
    "guess_window",
    "verify_window",
}
_CONFIG_KEYS = {f.name for f in fields(RunConfig)} | {"format"}


def parse_config_file(path: str) -> dict:
    """Plain-text ``key = value`` pairs; '#' starts a comment."""
    overrides = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "format":
            key = "output_format"
        if key not in _CONFIG_KEYS and key != "output_format":
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if key in _INT_FIELDS:
            try:
                overrides[key] = int(value)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from exc
        else:
            overrides[key] = value
    return overrides


def make_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    overrides = {}
    if args.config:
        overrides.update(parse_config_file(args.config))
    flag_map = {
        "max_n": args.max_n,
        "fact1_max_k": args.max_k,
        "sturm_max_n": args.sturm_max_n,
        "guess_k_range": args.guess_k_range,
        "guess_window": args.guess_window,
        "verify_window": args.verify_window,
        "cache_dir": args.cache_dir,
        "output_format": args.format,
    }
    for key, value in flag_map.items():
        if value is not None:
            overrides[key] = value
    for key, value in overrides.items():
        setattr(cfg, key, value)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    for name in _INT_FIELDS:
        if getattr(cfg, name) < 0:
            raise UsageError(f"{name} must be >= 0")
    if cfg.verify_window <= cfg.guess_window:
        raise UsageError("verify_window must exceed guess_window")
    if cfg.output_format not in ("json", "text"):
        raise UsageError("format must be 'json' or 'text'")


# ---------------------------------------------------------------------------
# Cache layer: canonical JSON files with checksums, atomic replace-on-write.


def cache_path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.cache_dir, name)


def ensure_cache_dir(cfg: RunConfig) -> None:
    try:
        os.makedirs(cfg.cache_dir, exist_ok=True)
        probe = os.path.join(cfg.cache_dir, ".write-probe")
        with open(probe, "w", encoding="utf-8") as fh:
            fh.write("ok")
        os.remove(probe)
    except OSError as exc:
        raise UsageError(f"cache directory {cfg.cache_dir!r} is not writable: {exc}")


def cache_write(cfg: RunConfig, name: str, payload) -> None:
    path = cache_path(cfg, name)
    tmp = path + ".tmp"
    data = ser.canonical_dumps(ser.wrap(payload)) + "\n"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(data)
    os.replace(tmp, path)


def cache_read(cfg: RunConfig, name: str):
    """Payload, or None on missing file, bad JSON, or checksum mismatch."""
    path = cache_path(cfg, name)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    return ser.unwrap(doc)


# ---------------------------------------------------------------------------
# Output helpers


def _emit(cfg: RunConfig, payload: dict, text_lines: list[str]) -> None:
    if cfg.output_format == "json":
        print(ser.canonical_dumps(payload))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# tables


def _build_checked_tables(cfg: RunConfig):
    b = build_b_table(cfg.max_n)
    b_rec = build_b_table_rec(cfg.max_n)
    cross_check(b, b_rec)
    a = build_a_table(cfg.max_n)
    a_conv = a_via_convolution(b)
    cross_check(a, a_conv)
    return b, a


def _persist_tables(cfg: RunConfig, b, a) -> None:
    b_payload = ser.table_to_json(b)
    b_payload.update({"builder": "inverse-square-root", "cross_check": "recurrence", "cross_check_ok": True})
    a_payload = ser.table_to_json(a)
    a_payload.update({"builder": "series-inverse", "cross_check": "convolution-of-B", "cross_check_ok": True})
    cache_write(cfg, f"b_table_N{cfg.max_n}.json", b_payload)
    cache_write(cfg, f"a_table_N{cfg.max_n}.json", a_payload)


def cmd_tables(cfg: RunConfig) -> int:
    ensure_cache_dir(cfg)
    try:
        b, a = _build_checked_tables(cfg)
    except TableMismatch as exc:
        _emit(
            cfg,
            {"command": "tables", "ok": False, "first_mismatch": [exc.k, exc.n]},
            [f"tables: FAIL cross-check first differs at (k, n) = ({exc.k}, {exc.n})"],
        )
        return EXIT_VERIFY
    try:
        _persist_tables(cfg, b, a)
    except OSError as exc:
        print(f"tables: cannot persist: {exc}", file=sys.stderr)
        return EXIT_USAGE
    count = (cfg.max_n + 1) * (cfg.max_n + 2) // 2
    _emit(
        cfg,
        {
            "command": "tables",
            "ok": True,
            "max_n": cfg.max_n,
            "entries_per_table": count,
            "cross_checks": ["B: inverse-square-root == recurrence", "A: series-inverse == convolution-of-B"],
        },
        [
            f"tables: built B and A up to n = {cfg.max_n} ({count} entries each)",
            "tables: B cross-check (inverse square root vs recurrence): ok",
            "tables: A cross-check (series inverse vs convolution of B): ok",
        ],
    )
    return EXIT_OK


def _load_or_build_tables(cfg: RunConfig):
    b_payload = cache_read(cfg, f"b_table_N{cfg.max_n}.json")
    a_payload = cache_read(cfg, f"a_table_N{cfg.max_n}.json")
    if b_payload is not None and a_payload is not None:
        try:
            return ser.table_from_json(b_payload), ser.table_from_json(a_payload)
        except (KeyError, ValueError, TypeError):
            pass
    b, a = _build_checked_tables(cfg)
    _persist_tables(cfg, b, a)
    return b, a


# ---------------------------------------------------------------------------
# certify


def cmd_certify(cfg: RunConfig) -> int:
    ensure_cache_dir(cfg)
    try:
        b, a = _load_or_build_tables(cfg)
    except TableMismatch as exc:
        print(f"certify: table cross-check failed at ({exc.k}, {exc.n})", file=sys.stderr)
        return EXIT_VERIFY
    report = certify_fact2(b, a, sturm_max_n=cfg.sturm_max_n)
    payload = ser.fact2_report_to_json(report)
    cache_write(cfg, f"cert_fact2_N{cfg.max_n}.json", payload)
    lines = [
        f"certify: {len(report.certificates)} square certificates for B entries, n <= {cfg.max_n}",
        f"certify: exponent pattern alpha=(n-k)%2, beta=k%2: {'ok' if report.pattern_ok else 'FAIL'}",
        f"certify: A == convolution of B squares: {'ok' if report.a_convolution_ok else 'FAIL'}",
        f"certify: Sturm nonnegativity of A entries, n <= {report.sturm_max_n}: "
        f"{'ok' if report.sturm_ok else 'FAIL'}",
    ]
    if report.first_failure:
        k, n, msg = report.first_failure
        lines.append(f"certify: FAIL first failing entry ({k}, {n}): {msg}")
    _emit(cfg, {"command": "certify", **payload}, lines)
    return EXIT_OK if report.ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# guess


def _extended_b_table(cfg: RunConfig, needed: int):
    name = f"b_table_N{needed}.json"
    payload = cache_read(cfg, name)
    if payload is not None:
        try:
            table = ser.table_from_json(payload)
            if table.max_n >= needed:
                return table
        except (KeyError, ValueError, TypeError):
            pass
    table = build_b_table_rec(needed)
    payload = ser.table_to_json(table)
    payload.update({"builder": "recurrence", "cross_check": None, "cross_check_ok": None})
    cache_write(cfg, name, payload)
    return table


def _guess_one(cfg: RunConfig, table, k: int) -> dict:
    column = table.column(k)
    window = SeqSlice.make(k, column[: cfg.guess_window + 1], meta=f"B,k={k}")
    full = SeqSlice.make(k, column[: cfg.verify_window + 1], meta=f"B,k={k}")
    bounds = [GUESS_MAX_ORDER, GUESS_MAX_DEG_N, GUESS_MAX_DEG_C]
    try:
        op = guess_rec(window, GUESS_MAX_ORDER, GUESS_MAX_DEG_N, GUESS_MAX_DEG_C)
    except GuessNotFound as exc:
        return {"k": k, "ok": False, "error": str(exc), "bounds": bounds}
    verdict = rec_verify(op, full)
    record = {
        "k": k,
        "operator": ser.recop_to_json(op),
        "guess_bounds": bounds,
        "guess_window": [k, k + cfg.guess_window],
        "verify": {
            "from": k,
            "to": k + cfg.verify_window,
            "ok": verdict.ok,
            "first_failure": verdict.first_failure,
            "leading_zero_ns": list(verdict.leading_zero_ns),
        },
        "l_field_note": L_FIELD_NOTE,
    }
    try:
        cert = sym_square_root(op, check_range=(k, k + cfg.verify_window))
    except (SymSquareNotFound,) as exc:
        record.update({"ok": False, "error": f"sym_square_root: {exc}"})
        return record
    reconstruction_ok = op_equal(cert.reconstruct(), op)
    positivity_ok = all(v["A"] and v["B2"] for v in cert.positivity.values())
    bridge_ok = initial_value_bridge(cert, window)
    sym = ser.sym_square_to_json(cert)
    sym.update(
        {
            "reconstruction_ok": reconstruction_ok,
            "positivity_all_nonneg": positivity_ok,
            "initial_value_bridge_ok": bridge_ok,
        }
    )
    record["sym_square"] = sym
    record["ok"] = bool(
        op.order == 3
        and verdict.ok
        and reconstruction_ok
        and positivity_ok
        and bridge_ok
    )
    return record


def cmd_guess(cfg: RunConfig, k: int | None) -> int:
    ensure_cache_dir(cfg)
    if k is not None and k < 0:
        raise UsageError("--k must be >= 0")
    ks = [k] if k is not None else list(range(cfg.guess_k_range + 1))
    needed = max(ks) + cfg.verify_window
    table = _extended_b_table(cfg, needed)
    all_ok = True
    lines = []
    records = []
    for kk in ks:
        record = _guess_one(cfg, table, kk)
        cache_write(cfg, f"recop_k{kk}.json", record)
        records.append(record)
        all_ok = all_ok and record.get("ok", False)
        if record.get("ok"):
            lines.append(
                f"guess k={kk}: order-3 operator found, verified on n = {kk}..{kk + cfg.verify_window}, "
                "symmetric-square certificate ok"
            )
        else:
            lines.append(f"guess k={kk}: FAIL ({record.get('error', 'verification failed')})")
    _emit(cfg, {"command": "guess", "ok": all_ok, "results": records}, lines)
    return EXIT_OK if all_ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# fact1


def cmd_fact1(cfg: RunConfig) -> int:
    if cfg.fact1_max_k < 1:
        raise UsageError("fact1 needs max_k >= 1")
    ensure_cache_dir(cfg)
    result = verify_fact1(cfg.fact1_max_k)
    flow_ok = flow_consistency_ok()
    payload = {
        "max_k": cfg.fact1_max_k,
        "epsilon": result.epsilon,
        "orders_ok": [result.residuals[j].is_zero() for j in range(1, cfg.fact1_max_k + 1)],
        "first_failure": result.first_failure,
        "flow_consistency_ok": flow_ok,
        "ok": result.ok and flow_ok,
    }
    cache_write(cfg, f"fact1_K{cfg.fact1_max_k}.json", payload)
    lines = [
        f"fact1: epsilon = {result.epsilon:+d}",
        f"fact1: flow consistency (wdot = -w(1-w)/(1+w)): {'ok' if flow_ok else 'FAIL'}",
    ]
    for j in range(1, cfg.fact1_max_k + 1):
        status = "ok" if result.residuals[j].is_zero() else "FAIL"
        lines.append(f"fact1: order w^{j}: {status}")
    _emit(cfg, {"command": "fact1", **payload}, lines)
    return EXIT_OK if payload["ok"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# report


def cmd_report(cfg: RunConfig) -> int:
    missing = []

    def fetch(name: str):
        payload = cache_read(cfg, name)
        if payload is None:
            missing.append(name)
        return payload

    b = fetch(f"b_table_N{cfg.max_n}.json")
    a = fetch(f"a_table_N{cfg.max_n}.json")
    cert = fetch(f"cert_fact2_N{cfg.max_n}.json")
    recops = {}
    for kk in range(cfg.guess_k_range + 1):
        payload = fetch(f"recop_k{kk}.json")
        if payload is not None:
            recops[kk] = payload
    fact1_payload = fetch(f"fact1_K{cfg.fact1_max_k}.json")

    if missing:
        _emit(
            cfg,
            {"command": "report", "ok": False, "missing": sorted(missing)},
            ["report: missing artifacts:"] + [f"  - {m}" for m in sorted(missing)],
        )
        return EXIT_VERIFY

    def table_summary(payload):
        return {
            "kind": payload["kind"],
            "max_n": payload["max_n"],
            "convention": payload["convention"],
            "entries": len(payload["entries"]),
            "builder": payload.get("builder"),
            "cross_check": payload.get("cross_check"),
            "cross_check_ok": payload.get("cross_check_ok"),
        }

    rec_section = {
        "k_range": cfg.guess_k_range,
        "per_k": [recops[kk] for kk in sorted(recops)],
        "ok": all(recops[kk].get("ok", False) for kk in recops),
    }
    ok = bool(
        b.get("cross_check_ok")
        and a.get("cross_check_ok")
        and cert.get("ok")
        and rec_section["ok"]
        and fact1_payload.get("ok")
    )
    ledger = {
        "schema": "bieberbach-ledger/1",
        "max_n": cfg.max_n,
        "tables": {"b": table_summary(b), "a": table_summary(a)},
        "fact2": cert,
        "recurrences": rec_section,
        "fact1": fact1_payload,
        "ok": ok,
    }
    lines = [
        f"report: tables B/A up to n = {cfg.max_n}: "
        f"{'ok' if b.get('cross_check_ok') and a.get('cross_check_ok') else 'FAIL'}",
        f"report: fact2 certificates ({len(cert.get('certificates', []))} entries): "
        f"{'ok' if cert.get('ok') else 'FAIL'}",
        f"report: recurrence pipeline k <= {cfg.guess_k_range}: "
        f"{'ok' if rec_section['ok'] else 'FAIL'}",
        f"report: fact1 identity (K = {cfg.fact1_max_k}, epsilon = "
        f"{fact1_payload.get('epsilon'):+d}): {'ok' if fact1_payload.get('ok') else 'FAIL'}",
        f"report: overall: {'ok' if ok else 'FAIL'}",
    ]
    _emit(cfg, ledger, lines)
    return EXIT_OK if ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file (flags win)")
    common.add_argument("--cache-dir", dest="cache_dir", help="artifact cache directory")
    common.add_argument("--format", choices=["json", "text"], help="output format")
    common.add_argument("--max-n", dest="max_n", type=int, help="largest n for the tables")
    common.add_argument("--max-k", dest="max_k", type=int, help="largest w-order for fact1")
    common.add_argument("--sturm-max-n", dest="sturm_max_n", type=int, help="Sturm budget for A entries")
    common.add_argument("--guess-k-range", dest="guess_k_range", type=int, help="guess columns 0..K")
    common.add_argument("--guess-window", dest="guess_window", type=int, help="guessing window length")
    common.add_argument("--verify-window", dest="verify_window", type=int, help="verification window length")

    parser = argparse.ArgumentParser(
        prog="bieberbach",
        description="Exact verification of the Loewner-derivative identity and the "
        "kernel positivity certificates behind the Bieberbach conjecture.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[common], help="build and cross-check the B/A tables")
    sub.add_parser("certify", parents=[common], help="square certificates and Sturm positivity")
    guess = sub.add_parser("guess", parents=[common], help="recurrence guessing pipeline")
    guess.add_argument("--k", type=int, default=None, help="single column to guess (default: all up to guess-k-range)")
    sub.add_parser("fact1", parents=[common], help="verify the formal identity")
    sub.add_parser("report", parents=[common], help="aggregate verification ledger")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = make_config(args)
        if args.command == "tables":
            return cmd_tables(cfg)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "guess":
            return cmd_guess(cfg, args.k)
        if args.command == "fact1":
            return cmd_fact1(cfg)
        if args.command == "report":
            return cmd_report(cfg)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
