"""Level-1 energy, harmonic extension and the renormalization map.

The weighted level-1 energy of a boundary form ``E`` is the sum over cells
of ``r_i * E(v o psi_i)``.  Renormalizing ``E`` means taking the trace of
that network back onto the boundary points.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csc_matrix, diags
from scipy.sparse.linalg import splu

from .errors import NumericalFailure
from .forms import DirichletForm, _check_pair, require_irreducible
from .network import star_mesh_reduce

#: Coefficients of a trace in ``[-CLIP_TOL, 0)`` are treated as rounding noise.
CLIP_TOL = 1e-9


def as_weights(r, n_cells):
    r = np.asarray(r, dtype=float).ravel()
    if r.shape != (n_cells,):
        raise ValueError(f"expected {n_cells} weights, got {r.size}")
    if not np.all(np.isfinite(r)) or np.any(r <= 0):
        raise ValueError("weights must be positive and finite")
    return r


def _check_dims(T, E):
    if E.n_boundary != T.n_boundary:
        raise ValueError(f"form has N={E.n_boundary} but triple has N={T.n_boundary}")


@dataclass(frozen=True)
class Level1Form:
    """Weighted sum of cell energies, as a sparse symmetric conductance matrix
    on the level-1 vertices (0-based indices, zero diagonal)."""

    conductance: csc_matrix

    @property
    def n_level1(self):
        return self.conductance.shape[0]

    def energy(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n_level1,):
            raise ValueError(f"level-1 function must have shape ({self.n_level1},)")
        upper = self.conductance.tocoo()
        keep = upper.row < upper.col
        d = v[upper.row[keep]] - v[upper.col[keep]]
        return float(np.dot(upper.data[keep], d * d))

    def laplacian(self):
        C = self.conductance
        return (diags(np.asarray(C.sum(axis=1)).ravel()) - C).tocsc()

    def edges(self):
        """Set of 0-based vertex pairs ``(a, b)``, ``a < b``, with positive conductance."""
        upper = self.conductance.tocoo()
        return {(int(a), int(b)) for a, b, c in zip(upper.row, upper.col, upper.data)
                if a < b and c > 0}


def assemble_level1(T, E, r):
    """Assemble the weighted level-1 form of ``E`` on the triple ``T``."""
    _check_dims(T, E)
    r = as_weights(r, T.n_cells)
    C = E.matrix()
    rows, cols = np.nonzero(C)
    cells = T.cell_array
    data = np.concatenate([ri * C[rows, cols] for ri in r])
    row_ids = np.concatenate([cell[rows] for cell in cells])
    col_ids = np.concatenate([cell[cols] for cell in cells])
    n1 = T.n_level1
    M = coo_matrix((data, (row_ids, col_ids)), shape=(n1, n1)).tocsc()
    M.sum_duplicates()
    return Level1Form(M)


def _dense_level1(T, E, r):
    C = E.matrix()
    out = np.zeros((T.n_level1, T.n_level1))
    for ri, cell in zip(r, T.cell_array):
        out[np.ix_(cell, cell)] += ri * C
    return out


def _elimination_order(T):
    # vertices private to one cell first keeps fill-in inside that cell
    interior = T.interior()
    mult = T.multiplicity()[interior]
    return interior[np.lexsort((interior, mult))]


def _pinned_solve(L, pinned, values):
    n = L.shape[0]
    free = np.setdiff1d(np.arange(n), pinned)
    v = np.empty(n)
    v[pinned] = values
    if free.size == 0:
        return v
    L = L.tocsc()
    L_ff = L[free][:, free]
    rhs = -(L[free][:, pinned] @ np.asarray(values, dtype=float))
    try:
        x = splu(csc_matrix(L_ff)).solve(rhs)
    except RuntimeError as exc:
        raise NumericalFailure(f"interior system is singular: {exc}") from None
    if not np.all(np.isfinite(x)):
        raise NumericalFailure("interior solve produced non-finite values")
    v[free] = x
    return v


def harmonic_extension(T, E, r, u):
    """Level-1 function equal to ``u`` on the boundary that minimizes the
    weighted level-1 energy.  Solved as a sparse linear system on the
    interior vertices."""
    _check_dims(T, E)
    require_irreducible(E)
    u = np.asarray(u, dtype=float)
    if u.shape != (T.n_boundary,):
        raise ValueError(f"boundary function must have shape ({T.n_boundary},)")
    level1 = assemble_level1(T, E, r)
    return _pinned_solve(level1.laplacian(), np.arange(T.n_boundary), u)


def renormalize(T, E, r):
    """Trace of the weighted level-1 energy onto the boundary points.

    Interior vertices are eliminated by star-mesh transforms, private cell
    vertices first.  Returns a :class:`DirichletForm` whose energy at ``u``
    equals the level-1 energy of the harmonic extension of ``u``.
    """
    _check_dims(T, E)
    require_irreducible(E)
    r = as_weights(r, T.n_cells)
    C = star_mesh_reduce(_dense_level1(T, E, r), np.arange(T.n_boundary),
                         order=_elimination_order(T))
    out = C[np.triu_indices(T.n_boundary, 1)]
    if not np.all(np.isfinite(out)):
        raise NumericalFailure("trace has non-finite coefficients")
    if np.any(out < -CLIP_TOL):
        raise NumericalFailure(f"trace has negative coefficient {out.min():.3e}")
    F = DirichletForm(T.n_boundary, np.clip(out, 0.0, None))
    try:
        require_irreducible(F)
    except ValueError:
        raise NumericalFailure("trace lost irreducibility (underflow or broken connectivity)") from None
    return F


def level1_pinned_minimizer(T, E, r, j1, j2):
    """Minimizer of the level-1 energy with value 0 at ``P_j1`` and 1 at
    ``P_j2``, every other vertex free.  Returns ``(v, energy)``."""
    _check_dims(T, E)
    _check_pair(T.n_boundary, j1, j2)
    require_irreducible(E)
    level1 = assemble_level1(T, E, r)
    v = _pinned_solve(level1.laplacian(), np.array([j1 - 1, j2 - 1]), [0.0, 1.0])
    return v, level1.energy(v)


def effective_conductivity_level1(T, E, r, j1, j2):
    """Effective conductivity of the renormalized form, computed on level 1.

    Agrees with ``effective_conductivity(renormalize(T, E, r), j1, j2)`` but
    never forms the trace.
    """
    return level1_pinned_minimizer(T, E, r, j1, j2)[1]
