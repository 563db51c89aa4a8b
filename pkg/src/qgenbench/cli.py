"""Command-line entry point: ``run``, ``validate`` and ``report``.

Exit codes: 0 success, 1 runtime failure, 2 configuration or input error.
The ``QGENBENCH_THREADS`` environment variable sets the default thread count
for population evaluation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .pipeline import ConfigError, apply_overrides, load_config, read_records, run_benchmark, write_record

log = logging.getLogger("qgenbench")

GEN_KEYS = ("fidelity", "exploration", "precision", "normalized_rate", "normalized_coverage")


def cmd_run(config_path, out_dir, overrides=()) -> int:
    try:
        cfg = apply_overrides(load_config(config_path), overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return 1
    records = run_benchmark(cfg)
    write_record(records, out / "results.json")
    with (out / "loss_history.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["repetition", "module", "evaluations", "kl"])
        for rec in records:
            for name, m in rec.metrics.items():
                for evals, kl in m.get("loss_history", []):
                    writer.writerow([rec.repetition, name, evals, repr(kl)])
    failed = [r for r in records if r.failed]
    for r in failed:
        print(f"repetition {r.repetition} failed in {r.error['stage']} "
              f"({r.error['phase']}): {r.error['message']}", file=sys.stderr)
    log.info("wrote %d record(s) to %s", len(records), out / "results.json")
    return 1 if failed else 0


def cmd_validate(config_path, overrides=()) -> int:
    try:
        cfg = apply_overrides(load_config(config_path), overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    print(f"seed={cfg.seed} repetitions={cfg.repetitions}")
    for i, node in enumerate(cfg.chain):
        params = ", ".join(f"{k}={v}" for k, v in node.config.items())
        print(f"  {i}. {node.kind}:{node.name}" + (f"({params})" if params else ""))
    return 0


def _record_row(rec) -> dict:
    row = {"tts": rec.tts}
    for t in rec.timings:
        row[f"t_{t.module_name}"] = t.total
    for name, m in rec.metrics.items():
        if "final_kl" in m and "loss_history" in m:
            row["final_kl"] = m["final_kl"]
            for key in ("sampled_kl", "kl_train", "kl_sol"):
                if key in m:
                    row[key] = m[key]
            for key in GEN_KEYS:
                if key in m.get("generalization", {}):
                    row[key] = m["generalization"][key]
    return row


def _signature(rec) -> dict:
    sig = {}
    for node in rec.config_echo.chain:
        sig[f"{node.kind}"] = node.name
        for k, v in node.config.items():
            sig[f"{node.name}.{k}"] = json.dumps(v)
    return sig


def summarize(records) -> list:
    """Group runs that differ only in seed; return one row per group with mean and SEM."""
    groups = {}
    sigs = {}
    for rec in records:
        sig = _signature(rec)
        key = json.dumps(sig, sort_keys=True)
        groups.setdefault(key, []).append(_record_row(rec))
        sigs[key] = sig
    varying = sorted({k for s in sigs.values() for k in s
                      if len({s2.get(k) for s2 in sigs.values()}) > 1})
    rows = []
    for key, runs in groups.items():
        row = {"group": ";".join(f"{k}={sigs[key].get(k)}" for k in varying) or "all",
               "runs": len(runs)}
        columns = list(dict.fromkeys(c for r in runs for c in r))
        for col in columns:
            vals = np.array([r[col] for r in runs if col in r], dtype=float)
            row[f"{col}_mean"] = float(vals.mean())
            # population standard deviation over runs divided by sqrt(#runs)
            row[f"{col}_sem"] = float(vals.std(ddof=0) / math.sqrt(len(vals)))
        rows.append(row)
    return rows


def _format_rows(rows, fmt) -> str:
    columns = list(dict.fromkeys(c for r in rows for c in r))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({c: (repr(v) if isinstance(v, float) else v) for c, v in r.items()})
        return buf.getvalue()
    cells = [[c for c in columns]] + [
        [f"{r[c]:.6g}" if isinstance(r.get(c), float) else str(r.get(c, "")) for c in columns]
        for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells) + "\n"


def cmd_report(record_paths, fmt="table") -> int:
    if not record_paths:
        print("report needs at least one record file", file=sys.stderr)
        return 2
    records = []
    for p in record_paths:
        try:
            records.extend(read_records(p))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"cannot read records from {p}: {exc}", file=sys.stderr)
            return 2
    if not records:
        print("no records found", file=sys.stderr)
        return 2
    sys.stdout.write(_format_rows(summarize(records), fmt))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgenbench", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a benchmark config")
    run.add_argument("-c", "--config", required=True)
    run.add_argument("-o", "--out", required=True, help="output directory")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")

    val = sub.add_parser("validate", help="parse a config and print its module chain")
    val.add_argument("-c", "--config", required=True)
    val.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")

    rep = sub.add_parser("report", help="summarize record files")
    rep.add_argument("files", nargs="*")
    rep.add_argument("--format", choices=("table", "csv"), default="table")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "run":
        return cmd_run(args.config, args.out, args.overrides)
    if args.command == "validate":
        return cmd_validate(args.config, args.overrides)
    return cmd_report(args.files, args.format)


if __name__ == "__main__":
    sys.exit(main())
