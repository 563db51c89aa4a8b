"""Backend-agnostic gate sequences for the copula and standard ansatzes.

A :class:`GateSequence` is a plain list of gates with wire indices and, for
parameterized gates, an index into the parameter vector. Qubit 0 is the most
significant bit of a basis-state index.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

import numpy as np

GATE_KINDS = ("H", "CNOT", "RX", "RY", "RZ", "RZZ", "CP")
PARAMETERIZED = frozenset({"RX", "RY", "RZ", "RZZ", "CP"})
TWO_QUBIT = frozenset({"CNOT", "RZZ", "CP"})


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]
    param_index: Optional[int] = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT else 1
        if len(self.wires) != arity:
            raise CircuitError(f"{self.kind} takes {arity} wire(s), got {self.wires}")
        if arity == 2 and self.wires[0] == self.wires[1]:
            raise CircuitError(f"{self.kind} wires must be distinct, got {self.wires}")
        if (self.param_index is not None) != (self.kind in PARAMETERIZED):
            raise CircuitError(f"{self.kind} param_index mismatch: {self.param_index}")


@dataclass(frozen=True)
class GateSequence:
    n: int
    depth: int
    gates: tuple[Gate, ...]
    ansatz: str
    registers: Optional[int] = None

    def __post_init__(self):
        for g in self.gates:
            if any(w < 0 or w >= self.n for w in g.wires):
                raise CircuitError(f"wire out of range for n={self.n}: {g}")
        idx = sorted(g.param_index for g in self.gates if g.param_index is not None)
        if idx != list(range(len(idx))):
            raise CircuitError("param indices must cover 0..P-1 without gaps")

    @property
    def param_count(self) -> int:
        return sum(1 for g in self.gates if g.param_index is not None)

    def dump(self) -> str:
        """One gate per line: ``KIND wires [param_index]``."""
        lines = []
        for g in self.gates:
            line = " ".join([g.kind, *map(str, g.wires)])
            if g.param_index is not None:
                line += f" [{g.param_index}]"
            lines.append(line)
        return "\n".join(lines) + "\n"


def parse_dump(text: str, n: int, depth: int, ansatz: str, registers=None) -> GateSequence:
    gates = []
    for line in text.splitlines():
        tokens = line.split()
        if not tokens:
            continue
        pidx = None
        if tokens[-1].startswith("["):
            pidx = int(tokens.pop()[1:-1])
        gates.append(Gate(tokens[0], tuple(int(t) for t in tokens[1:]), pidx))
    return GateSequence(n, depth, tuple(gates), ansatz, registers)


class _Builder:
    def __init__(self):
        self.gates = []
        self.p = 0

    def fixed(self, kind, *wires):
        self.gates.append(Gate(kind, wires))

    def param(self, kind, *wires):
        self.gates.append(Gate(kind, wires, self.p))
        self.p += 1


def copula_param_count(n: int, m: int, d: int) -> int:
    return d * (3 * n + m * comb(n // m, 2))


def standard_param_count(n: int, d: int) -> int:
    if d == 2:
        return 3 * n - 1
    return (3 * d // 2 + 1) * n - d // 2


def build_copula(n: int, m: int = 2, d: int = 1) -> GateSequence:
    """Copula ansatz over ``m`` registers of ``n/m`` qubits each.

    A fixed entangler (Hadamards on register 0, then CNOTs pairing qubit i of
    register 0 with qubit i of register 1) prepares the maximally correlated
    state. Each of the ``d`` blocks then applies RZ-RX-RZ to every qubit and
    RZZ to every pair inside each register. Every parameterized gate acts
    within a single register, so each register's marginal stays uniform.
    """
    if m != 2:
        raise CircuitError(f"only m=2 registers are supported, got m={m}")
    if n < 2 or n % 2:
        raise CircuitError(f"copula circuit needs an even n >= 2, got n={n}")
    if d < 1:
        raise CircuitError(f"depth must be >= 1, got d={d}")
    h = n // 2
    b = _Builder()
    for q in range(h):
        b.fixed("H", q)
    for q in range(h):
        b.fixed("CNOT", q, q + h)
    regs = [range(0, h), range(h, n)]
    for _ in range(d):
        for q in range(n):
            b.param("RZ", q)
            b.param("RX", q)
            b.param("RZ", q)
        for reg in regs:
            for i in reg:
                for j in reg:
                    if i < j:
                        b.param("RZZ", i, j)
    return GateSequence(n, d, tuple(b.gates), "copula", m)


def build_standard(n: int, d: int = 2) -> GateSequence:
    """Standard ansatz with ``d/2`` blocks of RY, RZ layers plus an RZZ ladder.

    For ``d > 2`` a closing RY layer is appended, which gives
    ``(3d/2 + 1) n - d/2`` parameters.
    """
    if n < 1:
        raise CircuitError(f"n must be positive, got {n}")
    if d < 2 or d % 2:
        raise CircuitError(f"standard circuit needs an even depth >= 2, got d={d}")
    b = _Builder()
    for _ in range(d // 2):
        for q in range(n):
            b.param("RY", q)
        for q in range(n):
            b.param("RZ", q)
        for q in range(n - 1):
            b.param("RZZ", q, q + 1)
    if d > 2:
        for q in range(n):
            b.param("RY", q)
    return GateSequence(n, d, tuple(b.gates), "standard")


def build(ansatz: str, n: int, d: int, m: int = 2) -> GateSequence:
    if ansatz == "copula":
        return build_copula(n, m, d)
    if ansatz == "standard":
        return build_standard(n, d)
    raise CircuitError(f"unknown ansatz {ansatz!r}")


def warm_start(params_shallow, seq_shallow: GateSequence, seq_deep: GateSequence,
               eps: float = 1e-2, seed=None) -> np.ndarray:
    """Embed trained shallow parameters into a deeper circuit of the same ansatz.

    The shallow vector fills the leading entries; the remainder is drawn
    i.i.d. from uniform(-eps, eps) so the added layers start close to the
    identity.
    """
    params_shallow = np.asarray(params_shallow, dtype=float)
    if (seq_shallow.ansatz != seq_deep.ansatz or seq_shallow.n != seq_deep.n
            or seq_shallow.registers != seq_deep.registers):
        raise CircuitError("warm start needs the same ansatz, n and registers")
    if seq_deep.depth <= seq_shallow.depth:
        raise CircuitError("deep circuit must be deeper than the shallow one")
    if params_shallow.shape != (seq_shallow.param_count,):
        raise CircuitError(
            f"expected {seq_shallow.param_count} shallow params, got {params_shallow.shape}")
    rng = np.random.default_rng(seed)
    tail = seq_deep.param_count - seq_shallow.param_count
    if eps > 0:
        rest = rng.uniform(-eps, eps, size=tail)
    else:
        rest = np.zeros(tail)
    return np.concatenate([params_shallow, rest])
