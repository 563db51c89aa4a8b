"""Concrete benchmark modules for the generative-modeling application.

Each module receives the payload dict produced by its predecessor in
``preprocess`` and returns a new dict for its successor; ``postprocess`` runs
on the way back up the chain. Modules never mutate the payload they receive.
"""
from __future__ import annotations

from typing import ClassVar

import numpy as np

from .. import circuits, datasets, metrics, simulator, training, transforms
from ..datatypes import PointCloud

REGISTRY: dict = {}


def register(cls):
    REGISTRY[(cls.kind, cls.name)] = cls
    return cls


class Module:
    """Base class: a named stage with declared parameters and default values."""

    kind: ClassVar[str] = ""
    name: ClassVar[str] = ""
    params: ClassVar[dict] = {}

    def __init__(self, config: dict, seed: int):
        self.config = {**self.params, **config}
        self.seed = seed
        self.metrics: dict = {}

    def preprocess(self, payload: dict) -> dict:
        return dict(payload)

    def postprocess(self, payload: dict) -> dict:
        return dict(payload)


@register
class GenerativeModeling(Module):
    kind, name = "application", "generative_modeling"

    def postprocess(self, payload):
        report = payload.get("train_report")
        if report is not None:
            self.metrics["final_kl"] = report.final_kl
        return dict(payload)


@register
class Discrete(Module):
    kind, name = "dataset", "discrete"
    params = {"n": 8, "k": 4, "alpha": 0.5}

    def preprocess(self, payload):
        c = self.config
        ds = datasets.make_discrete(int(c["n"]), int(c["k"]), float(c["alpha"]), self.seed)
        self.metrics.update(solution_size=len(ds.solution_set), train_size=len(ds.train_set),
                            alpha_effective=len(ds.train_set) / len(ds.solution_set))
        return {**payload, "dataset": ds, "n_qubits": ds.n,
                "target": transforms.pmf_from_bitstring_set(ds.train_set, ds.n)}


class _Continuous(Module):
    def generate(self) -> PointCloud:
        raise NotImplementedError

    def preprocess(self, payload):
        cloud = self.generate()
        self.metrics.update(num_points=len(cloud), dims=cloud.dims)
        return {**payload, "cloud": cloud}


@register
class XDataset(_Continuous):
    kind, name = "dataset", "x"
    params = {"num_points": 10000}

    def generate(self):
        return datasets.make_x(int(self.config["num_points"]), self.seed)


@register
class ODataset(_Continuous):
    kind, name = "dataset", "o"
    params = {"num_points": 10000}

    def generate(self):
        return datasets.make_o(int(self.config["num_points"]), self.seed)


@register
class MixedGaussians(_Continuous):
    kind, name = "dataset", "mixed_gaussians"
    params = {"num_points": 10000, "n_modes": 4}

    def generate(self):
        c = self.config
        return datasets.make_mixed_gaussians(int(c["num_points"]), int(c["n_modes"]), self.seed)


@register
class CsvDataset(_Continuous):
    kind, name = "dataset", "csv"
    params = {"path": None, "dims": 2}

    def generate(self):
        if not self.config["path"]:
            raise ValueError("csv dataset needs a path")
        return datasets.load_csv(self.config["path"], int(self.config["dims"]))


class _Transformation(Module):
    params = {"n_qubits": 6}

    def preprocess(self, payload):
        if "cloud" not in payload:
            raise ValueError(f"{self.name} transformation needs a continuous dataset")
        n = int(self.config["n_qubits"])
        tf, unit = transforms.fit_forward(self.name, payload["cloud"])
        target = transforms.discretize(unit, n)
        self.metrics.update(n_qubits=n, nonzero_bins=int(np.count_nonzero(target.probs)))
        return {**payload, "transform": tf, "n_qubits": n, "target": target}

    def postprocess(self, payload):
        q = payload.get("samples")
        if q is not None:
            tf = payload["transform"]
            points = transforms.inverse(tf, transforms.cell_centers(q.to_indices(), q.n_bits, tf.dims))
            self.metrics.update(generated_mean=points.points.mean(axis=0).tolist(),
                                generated_std=points.points.std(axis=0).tolist(),
                                data_mean=payload["cloud"].points.mean(axis=0).tolist(),
                                data_std=payload["cloud"].points.std(axis=0).tolist())
            payload = {**payload, "generated_points": points}
        return dict(payload)


@register
class MinMax(_Transformation):
    kind, name = "transformation", "minmax"


@register
class Pit(_Transformation):
    kind, name = "transformation", "pit"


class _Circuit(Module):
    def build(self, n: int) -> circuits.GateSequence:
        raise NotImplementedError

    def preprocess(self, payload):
        n = self.config.get("n_qubits") or payload.get("n_qubits")
        if n is None:
            raise ValueError("circuit needs n_qubits from the config or an upstream module")
        if payload.get("n_qubits") not in (None, n):
            raise ValueError(f"circuit n_qubits={n} does not match upstream n_qubits={payload['n_qubits']}")
        seq = self.build(int(n))
        self.metrics.update(n_qubits=seq.n, depth=seq.depth, param_count=seq.param_count,
                            gate_count=len(seq.gates))
        return {**payload, "circuit": seq, "n_qubits": seq.n}


@register
class CopulaCircuit(_Circuit):
    kind, name = "circuit", "copula"
    params = {"n_qubits": None, "depth": 1, "registers": 2}

    def build(self, n):
        return circuits.build_copula(n, int(self.config["registers"]), int(self.config["depth"]))


@register
class StandardCircuit(_Circuit):
    kind, name = "circuit", "standard"
    params = {"n_qubits": None, "depth": 2}

    def build(self, n):
        return circuits.build_standard(n, int(self.config["depth"]))


@register
class Statevector(Module):
    kind, name = "library", "statevector"
    params = {"threads": None, "readout_flip_prob": 0.0}

    def preprocess(self, payload):
        p = float(self.config["readout_flip_prob"])
        noise = simulator.NoiseSpec(p) if p > 0 else None
        threads = self.config["threads"] or simulator.default_threads()
        return {**payload, "backend": {"threads": int(threads), "noise": noise}}


@register
class Qcbm(Module):
    kind, name = "training", "qcbm"
    params = {"popsize": 200, "max_evals": 20000, "exact": True, "shots": 10000,
              "init_sigma": training.INIT_SIGMA, "eval_shots": 10000,
              "warm_start_params": None, "warm_start_depth": None, "warm_start_eps": 1e-2}

    def _init_params(self, seq):
        c = self.config
        if c["warm_start_params"] is None:
            return None
        shallow = np.asarray(c["warm_start_params"], dtype=float)
        if c["warm_start_depth"] is None:
            return shallow
        seq_shallow = circuits.build(seq.ansatz, seq.n, int(c["warm_start_depth"]),
                                     seq.registers or 2)
        return circuits.warm_start(shallow, seq_shallow, seq, float(c["warm_start_eps"]),
                                   seed=[self.seed, 1])

    def preprocess(self, payload):
        for key in ("circuit", "target", "backend"):
            if key not in payload:
                raise ValueError(f"qcbm training needs '{key}' from upstream modules")
        c, seq, backend = self.config, payload["circuit"], payload["backend"]
        cfg = training.QcbmConfig(
            popsize=int(c["popsize"]), max_evals=int(c["max_evals"]), exact=bool(c["exact"]),
            shots=int(c["shots"]), seed=self.seed, init_sigma=float(c["init_sigma"]),
            init_params=self._init_params(seq), threads=backend["threads"],
            noise=backend["noise"])
        report = training.train_qcbm(seq, payload["target"], cfg)
        self.metrics.update(report.to_dict())
        return {**payload, "train_report": report}

    def postprocess(self, payload):
        seq, report = payload["circuit"], payload["train_report"]
        noise = payload["backend"]["noise"]
        shots = int(self.config["eval_shots"])
        q = simulator.sample(seq, report.best_params, shots, seed=[self.seed, 2], noise=noise)
        self.metrics["sampled_kl"] = training.sampled_kl(payload["target"], q)
        self.metrics["eval_shots"] = shots
        ds = payload.get("dataset")
        if ds is not None:
            rep = metrics.generalization_report(q, ds.train_set, ds.solution_set)
            self.metrics["generalization"] = rep.to_dict()
            kl_tr, kl_sol = metrics.kl_train_vs_sol(
                simulator.exact_probs(seq, report.best_params), ds.train_set, ds.solution_set)
            self.metrics.update(kl_train=kl_tr, kl_sol=kl_sol)
        return {**payload, "samples": q}


@register
class Sampler(Module):
    kind, name = "inference", "sampler"
    params = {"n_samples": 10000}

    def preprocess(self, payload):
        seq, report = payload["circuit"], payload["train_report"]
        n = int(self.config["n_samples"])
        out = training.infer(seq, report.best_params, n, seed=self.seed,
                             transform=payload.get("transform"))
        if isinstance(out, PointCloud):
            self.metrics.update(n_samples=len(out), mean=out.points.mean(axis=0).tolist())
        else:
            self.metrics.update(n_samples=out.total, distinct=len(out.counts))
        return {**payload, "inference": out}
