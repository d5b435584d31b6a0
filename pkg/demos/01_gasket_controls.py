"""
Renormalization on the n-gaskets
================================

The n-gasket glues n copies of an n-point network pairwise at single
vertices.  For n = 2 it is an interval cut in half; for n = 3 it has the
combinatorics of the Sierpinski gasket.  These are the positive controls:
self-similar energies exist and are easy to find.
"""

# %%
import numpy as np

from fracform import (DirichletForm, build_gasket, effective_conductivity,
                      harmonic_extension, iterate, renormalize)

# %%
# Two unit conductors in series halve the conductance.
interval = build_gasket(2)
print(renormalize(interval, DirichletForm.unit(2), np.ones(2)).coefficients)

# %%
# On the 3-gasket the unit form comes back multiplied by 3/5.
gasket = build_gasket(3)
E = DirichletForm.unit(3)
F = renormalize(gasket, E, np.ones(3))
print("renormalized coefficients:", F.coefficients)
print("effective conductivity before/after:",
      effective_conductivity(E, 1, 2), effective_conductivity(F, 1, 2))

# %%
# The harmonic extension of the indicator of P_1 puts 2/5 on the two
# adjacent midpoints and 1/5 on the opposite one.
print(harmonic_extension(gasket, E, np.ones(3), [1.0, 0.0, 0.0])[3:])

# %%
# Starting from a lopsided form, the normalized iteration still finds the
# symmetric eigenform with eigenvalue 3/5.
E0 = DirichletForm(3, [1.0, 5.0, 0.2])
trace = iterate(gasket, E0, np.ones(3), max_steps=200, tol=1e-12)
print(f"converged={trace.converged} after {trace.records[-1].step} steps")
print("eigenform:", trace.form.coefficients, "eigenvalue:", trace.records[-1].eigenvalue)
