"""Dirichlet-form renormalization on finitely ramified fractals."""

from .eigenflow import (IterationFailure, IterationTrace, SearchConfig, SearchReport,
                        iterate, projective_residual, residual, search_eigenform,
                        weight_grid)
from .errors import FracformError, InvalidTriple, NumericalFailure, ReducibleForm
from .forms import (DirichletForm, effective_conductivity, energy, harmonic_min,
                    is_irreducible, pinned_minimizer)
from .obstruction import (ObstructionCertificate, block_weight, certify,
                          certify_no_eigenform, far_pair_competitor, far_pair_ratio,
                          far_pair_ratios, near_pair_analysis, near_pair_ratio)
from .renorm import (Level1Form, assemble_level1, effective_conductivity_level1,
                     harmonic_extension, renormalize)
from .triples import (FractalTriple, build_counterexample, build_gasket, cell_adjacency,
                      entry_label, opposite, validate_triple)

__all__ = [
    "DirichletForm", "FractalTriple", "Level1Form", "ObstructionCertificate",
    "IterationTrace", "SearchConfig", "SearchReport",
    "FracformError", "InvalidTriple", "IterationFailure", "NumericalFailure", "ReducibleForm",
    "assemble_level1", "block_weight", "build_counterexample", "build_gasket",
    "cell_adjacency", "certify", "certify_no_eigenform", "effective_conductivity",
    "effective_conductivity_level1", "energy", "entry_label", "far_pair_competitor",
    "far_pair_ratio", "far_pair_ratios", "harmonic_extension", "harmonic_min",
    "is_irreducible", "iterate", "near_pair_analysis", "near_pair_ratio", "opposite",
    "pinned_minimizer", "projective_residual", "renormalize", "residual",
    "search_eigenform", "validate_triple", "weight_grid",
]
