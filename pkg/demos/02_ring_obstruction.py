"""
The 20-cell ring and its obstruction certificate
================================================

Twenty cells with twenty vertices each are glued in a cycle.  Neighbouring
cells share one vertex, alternating between adjacent and opposite labels.
For any weights r, the near pair of the heaviest block keeps at least w/2
of its conductance under renormalization, while every opposite pair keeps
strictly less than w/2.  A self-similar energy would need both to be 1.
"""

# %%
import numpy as np

from fracform import (DirichletForm, build_counterexample, cell_adjacency, certify,
                      certify_no_eigenform, entry_label, far_pair_competitor,
                      near_pair_analysis)

ring = build_counterexample()
print(f"{ring.n_cells} cells, {ring.n_level1} level-1 vertices")
adj = cell_adjacency(ring)
print("cells 1,2 share", adj[(1, 2)], "- cells 1,3 share", adj[(1, 3)])
print("entry labels:", [entry_label(i) for i in range(1, 21)])

# %%
# One certificate for the unit form with unit weights.
cert = certify(DirichletForm.unit(20), np.ones(20))
print(f"w = {cert.block_weight}, near ratio {cert.near_ratio:.4f} >= {cert.block_weight / 2}")
print(f"far ratio {cert.far_ratio:.4f} < {cert.block_weight / 2}  (margin {cert.far_margin:.4f})")

# %%
# The level-1 minimizer for the near pair, and the explicit chain-of-cells
# competitor for a far pair.
nb = near_pair_analysis(DirichletForm.unit(20), np.ones(20))
print(f"value at the shared vertex t = {nb.gluing_value:.4f}, t^2+(1-t)^2 = {nb.mixing_bound:.4f}")
comp = far_pair_competitor(DirichletForm.unit(20), np.ones(20), 1)
print(f"competitor energy {comp.level1_energy:.4f} <= bound {comp.bound:.4f}")

# %%
# A batch of random forms and weights: every certificate holds.
certs = certify_no_eigenform(None, sample_count=25, seed=42)
print("all valid:", all(c.is_valid() for c in certs))
print("smallest far margin:", min(c.worst_far_margin for c in certs))
