"""Benchmark manager: drives a module chain and assembles benchmark records.

Preprocess runs down the chain in order, postprocess runs back up in reverse.
Each module's two phases are timed on the monotonic clock; the time-to-solution
is the sum of those stage times, and everything else spent by the runner is
reported separately as ``t_overhead``.
"""
from __future__ import annotations

import logging
import subprocess
import time
import traceback
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .config import PipelineConfig
from .modules import REGISTRY
from .record import BenchmarkRecord, StageTiming

log = logging.getLogger(__name__)


def git_revision() -> str:
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], cwd=Path(__file__).parent,
                             capture_output=True, text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    rev = out.stdout.strip()
    return rev if out.returncode == 0 and rev else "unknown"


def module_seed(seed: int, repetition: int, index: int) -> int:
    ss = np.random.SeedSequence([seed, repetition, index])
    return int(ss.generate_state(2, dtype=np.uint64)[0])


def run_pipeline(config: PipelineConfig, repetition: int = 0) -> BenchmarkRecord:
    """Execute one repetition of the chain."""
    wall0 = time.perf_counter_ns()
    record = BenchmarkRecord(config_echo=config, git_revision=git_revision(),
                             started_at=datetime.now(timezone.utc).isoformat(),
                             repetition=repetition)
    modules = [REGISTRY[(nd.kind, nd.name)](dict(nd.config), module_seed(config.seed, repetition, i))
               for i, nd in enumerate(config.chain)]
    timings = [StageTiming(nd.name) for nd in config.chain]
    payload: dict = {}
    phase, stage = "preprocess", 0
    try:
        for stage, mod in enumerate(modules):
            t0 = time.perf_counter_ns()
            try:
                payload = mod.preprocess(payload)
            finally:
                timings[stage].t_preprocess = (time.perf_counter_ns() - t0) * 1e-9
        phase = "postprocess"
        for stage in reversed(range(len(modules))):
            t0 = time.perf_counter_ns()
            try:
                payload = modules[stage].postprocess(payload)
            finally:
                timings[stage].t_postprocess = (time.perf_counter_ns() - t0) * 1e-9
    except Exception as exc:
        log.error("stage %s failed during %s: %s", config.chain[stage].name, phase, exc)
        record.status = "failed"
        record.error = {"stage": config.chain[stage].name, "phase": phase,
                        "type": type(exc).__name__, "message": str(exc),
                        "traceback": traceback.format_exc()}
    record.timings = timings
    record.metrics = {nd.name: _plain(mod.metrics) for nd, mod in zip(config.chain, modules)}
    record.tts = sum(t.total for t in timings)
    record.t_overhead = (time.perf_counter_ns() - wall0) * 1e-9 - record.tts
    return record


def run_benchmark(config: PipelineConfig) -> list:
    """One record per repetition, in order."""
    return [run_pipeline(config, r) for r in range(config.repetitions)]


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj
