"""Build both ansatz families, inspect them, and sample from them."""
import numpy as np

from qgenbench import circuits, simulator

# A copula circuit on 4 qubits: two registers of 2 qubits each.
seq = circuits.build_copula(4, m=2, d=1)
print(seq.dump())
print("parameters:", seq.param_count)

theta = np.random.default_rng(0).normal(size=seq.param_count)
probs = simulator.exact_probs(seq, theta).probs
print("exact PMF:", np.round(probs, 4))

# Register marginals of a copula circuit are uniform whatever theta is.
grid = probs.reshape(4, 4)
print("register 0 marginal:", grid.sum(axis=1))
print("register 1 marginal:", grid.sum(axis=0))

# Finite shots give a multiset of bitstrings.
q = simulator.sample(seq, theta, shots=2000, seed=1)
print("most common:", sorted(q.counts.items(), key=lambda kv: -kv[1])[:5])

# Readout noise flips each measured bit independently.
noisy = simulator.sample(seq, theta, shots=2000, seed=1, noise=simulator.NoiseSpec(0.1))
print("distinct outcomes without / with noise:", len(q.counts), len(noisy.counts))

# The standard ansatz grows with depth d in pairs of layers.
for d in (2, 4, 6):
    print(f"standard n=8 d={d}: {circuits.build_standard(8, d).param_count} parameters")

# A population is evaluated in one call; results do not depend on the thread count.
pop = np.random.default_rng(2).normal(size=(64, seq.param_count))
a = simulator.eval_population(seq, pop, threads=1, as_array=True)
b = simulator.eval_population(seq, pop, threads=4, as_array=True)
print("population rows:", a.shape, "identical across threads:", np.array_equal(a, b))
