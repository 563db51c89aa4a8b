"""Benchmark configuration: parsing, validation and ``--set`` overrides.

A config is a YAML document::

    seed: 7
    repetitions: 1
    chain:
      - application: generative_modeling
      - dataset: discrete
        n: 8
        k: 4
        alpha: 0.5
      - circuit: standard
        depth: 2
      - library: statevector
      - training: qcbm
        max_evals: 2000
        popsize: 50

Each chain entry names its kind as the single key whose value is the module
implementation; the remaining keys are that module's parameters.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field

import yaml

KIND_ORDER = ("application", "dataset", "transformation", "circuit", "library", "training", "inference")
TOP_LEVEL = {"chain", "repetitions", "seed"}


class ConfigError(ValueError):
    def __init__(self, message: str, key: str = ""):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


@dataclass
class ModuleNode:
    name: str
    kind: str
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {self.kind: self.name, **self.config}


@dataclass
class PipelineConfig:
    chain: list
    repetitions: int = 1
    seed: int = 0

    def to_dict(self) -> dict:
        return {"seed": self.seed, "repetitions": self.repetitions,
                "chain": [node.to_dict() for node in self.chain]}

    def node(self, ref: str) -> ModuleNode:
        """Look a module up by kind or by implementation name."""
        hits = [nd for nd in self.chain if ref in (nd.kind, nd.name)]
        if not hits:
            raise ConfigError("no such module in the chain", ref)
        return hits[0]

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)


def _node_from_entry(i: int, entry) -> ModuleNode:
    key = f"chain[{i}]"
    if not isinstance(entry, dict):
        raise ConfigError("chain entries must be mappings", key)
    kinds = [k for k in entry if k in KIND_ORDER]
    if len(kinds) != 1:
        unknown = [k for k in entry if k not in KIND_ORDER]
        if not kinds and unknown:
            raise ConfigError(f"unknown module kind {unknown[0]!r}", key)
        raise ConfigError(f"expected exactly one module kind key, got {kinds}", key)
    kind = kinds[0]
    name = entry[kind]
    if not isinstance(name, str):
        raise ConfigError("module implementation must be a string", f"{key}.{kind}")
    return ModuleNode(name, kind, {k: v for k, v in entry.items() if k != kind})


def validate(cfg: PipelineConfig) -> PipelineConfig:
    from .modules import REGISTRY

    if not cfg.chain:
        raise ConfigError("chain must not be empty", "chain")
    if cfg.chain[0].kind != "application":
        raise ConfigError(f"chain must start with an application, got {cfg.chain[0].kind}", "chain[0]")
    if isinstance(cfg.repetitions, bool) or not isinstance(cfg.repetitions, int) or cfg.repetitions < 1:
        raise ConfigError("must be a positive integer", "repetitions")
    if isinstance(cfg.seed, bool) or not isinstance(cfg.seed, int) or not 0 <= cfg.seed < 2 ** 64:
        raise ConfigError("must be an unsigned 64-bit integer", "seed")
    seen = set()
    prev = -1
    for i, node in enumerate(cfg.chain):
        key = f"chain[{i}]"
        if node.kind not in KIND_ORDER:
            raise ConfigError(f"unknown module kind {node.kind!r}", key)
        rank = KIND_ORDER.index(node.kind)
        if rank <= prev:
            raise ConfigError(
                f"{node.kind} cannot follow {KIND_ORDER[prev]}; order is {' -> '.join(KIND_ORDER)}", key)
        prev = rank
        if node.name in seen:
            raise ConfigError(f"duplicate module name {node.name!r}", key)
        seen.add(node.name)
        cls = REGISTRY.get((node.kind, node.name))
        if cls is None:
            raise ConfigError(f"unknown {node.kind} implementation {node.name!r}", f"{key}.{node.kind}")
        for param in node.config:
            if param not in cls.params:
                raise ConfigError(f"unknown parameter for {node.kind}:{node.name}", f"{key}.{param}")
    return cfg


def parse_config(text: str) -> PipelineConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")
    for key in doc:
        if key not in TOP_LEVEL:
            raise ConfigError("unknown top-level key", str(key))
    if "chain" not in doc:
        raise ConfigError("missing required key", "chain")
    if not isinstance(doc["chain"], list):
        raise ConfigError("must be a list of modules", "chain")
    chain = [_node_from_entry(i, e) for i, e in enumerate(doc["chain"])]
    return validate(PipelineConfig(chain, doc.get("repetitions", 1), doc.get("seed", 0)))


def load_config(path) -> PipelineConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def apply_overrides(cfg: PipelineConfig, overrides) -> PipelineConfig:
    """Return a copy with ``key=value`` overrides applied.

    Keys are ``seed``, ``repetitions`` or ``<kind-or-name>.<param>``; values
    are parsed as YAML scalars.
    """
    cfg = copy.deepcopy(cfg)
    for item in overrides:
        if "=" not in item:
            raise ConfigError("override must look like key=value", item)
        key, raw = item.split("=", 1)
        value = yaml.safe_load(raw)
        if key in ("seed", "repetitions"):
            setattr(cfg, key, value)
            continue
        if "." not in key:
            raise ConfigError("unknown config key", key)
        ref, param = key.split(".", 1)
        cfg.node(ref).config[param] = value
    return validate(cfg)
