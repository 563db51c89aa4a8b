"""Config-driven benchmark pipeline."""
from .config import (KIND_ORDER, ConfigError, ModuleNode, PipelineConfig, apply_overrides,
                     load_config, parse_config)
from .core import run_benchmark, run_pipeline
from .modules import REGISTRY, Module, register
from .record import BenchmarkRecord, StageTiming, read_records, write_record

__all__ = [
    "KIND_ORDER", "ConfigError", "ModuleNode", "PipelineConfig", "apply_overrides", "load_config",
    "parse_config", "run_benchmark", "run_pipeline", "REGISTRY", "Module", "register",
    "BenchmarkRecord", "StageTiming", "read_records", "write_record",
]
