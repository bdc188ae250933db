"""Sample a binned unsharp position observable and split its variance.

The smearing by the ground-state density adds noise: Var = sharp part + noise part.
"""
from pomquant import (
    FockState,
    GeneratingOperator,
    QuantizerA,
    assemble_binned_observable,
    sample_outcomes,
    variance_decomposition,
)

DIM = 32
quantizer = QuantizerA(GeneratingOperator.fock_projector(0, DIM))
pom = assemble_binned_observable(quantizer, "position", [-2.0, -1.0, 0.0, 1.0, 2.0])
state = FockState.from_amplitudes([1, 0, 0.5], DIM)

rep = sample_outcomes(pom, state, n=200_000, seed=1)
for label, count in rep.counts.items():
    print(f"label {label:+.1f}: {count}")
for k, (e, p) in enumerate(zip(rep.empirical_moments, rep.predicted_moments), 1):
    print(f"moment {k}: sampled {e:.4f}, predicted {p:.4f}")

v = variance_decomposition(pom, state)
print(f"variance {v.total:.4f} = {v.sharp:.4f} (from E[1]) + {v.noise:.4f} (noise)")
