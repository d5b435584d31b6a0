"""
What the fixed-point iteration does on the ring
===============================================

Iterating E -> Lambda_r(E)/sum on the ring never settles on an irreducible
form.  The ratio Phi = (largest far-pair conductivity)/(near-pair
conductivity) falls every step, so the far couplings collapse towards zero.
Successive forms then look alike in the sup norm because their small
coefficients are already close to zero, while the Hilbert projective
distance between them stays large.
"""

# %%
import numpy as np

from fracform import DirichletForm, build_counterexample, iterate

ring = build_counterexample()
trace = iterate(ring, DirichletForm.unit(20), np.ones(20), max_steps=40, tol=0.0)

print(f"{'step':>4} {'sup residual':>14} {'projective':>11} {'Phi':>11} {'min coef':>10}")
for rec in trace.records[1::4]:
    print(f"{rec.step:4d} {rec.residual:14.3e} {rec.projective_residual:11.4f} "
          f"{rec.phi:11.3e} {rec.coefficients.min():10.2e}")

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    steps = [rec.step for rec in trace.records[1:]]
    fig, ax = plt.subplots()
    ax.semilogy(steps, trace.residuals, label="sup-norm residual")
    ax.semilogy(steps, trace.phis[1:], label="Phi")
    ax.semilogy(steps, [rec.projective_residual for rec in trace.records[1:]],
                label="projective residual")
    ax.set_xlabel("step")
    ax.legend()
    fig.savefig("ring_iteration.png", dpi=120)
