"""Benchmarking quantum circuit Born machines on a statevector simulator."""
from .circuits import Gate, GateSequence, build_copula, build_standard, warm_start
from .datatypes import BitstringSet, PointCloud, Pmf, SampleMultiset
from .metrics import GeneralizationReport, classify, generalization_report, kl_train_vs_sol
from .simulator import NoiseSpec, eval_population, exact_probs, sample
from .training import infer, kl_divergence, train_qcbm

__version__ = "0.1.0"
