"""Train on part of a cardinality-constrained set and measure how well the model generalizes."""
import numpy as np

from qgenbench import circuits, datasets, metrics, simulator, training, transforms
from qgenbench.datatypes import SampleMultiset

ds = datasets.make_discrete(n=8, k=4, alpha=0.5, seed=0)
print(f"|S| = {len(ds.solution_set)}, |T| = {len(ds.train_set)}")


def summary(q):
    rep = metrics.generalization_report(q, ds.train_set, ds.solution_set)
    return (f"E={rep.exploration:.3f} P={rep.precision:.3f} F={rep.fidelity:.3f} "
            f"R~={rep.normalized_rate:.3f} C~={rep.normalized_coverage:.3f}")


# Two reference samplers bracket the scale.
memorizer = SampleMultiset.from_bitstrings(8, np.random.default_rng(1).choice(sorted(ds.train_set), 10_000))
uniform = SampleMultiset.from_indices(8, np.random.default_rng(1).integers(0, 256, 10_000))
print("memorizer:", summary(memorizer))
print("uniform  :", summary(uniform))

target = transforms.pmf_from_bitstring_set(ds.train_set, 8)
for d in (2, 6):
    seq = circuits.build_standard(8, d)
    rep = training.train_qcbm(seq, target, popsize=50, max_evals=20_000, seed=0, init_sigma=0.5)
    q = simulator.sample(seq, rep.best_params, 10_000, seed=0)
    kl_tr, kl_sol = metrics.kl_train_vs_sol(simulator.exact_probs(seq, rep.best_params),
                                            ds.train_set, ds.solution_set)
    print(f"QCBM d={d} ({seq.param_count} params):", summary(q),
          f"KL_train={kl_tr:.3f} KL_sol={kl_sol:.3f}")
