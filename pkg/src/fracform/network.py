"""Resistor-network reduction by successive star-mesh transforms.

Eliminating a vertex ``v`` with conductances ``c_va`` to its neighbours adds
``c_va * c_vb / sum_w c_vw`` between every pair of neighbours.  Only sums,
products and quotients of nonnegative numbers occur, so reduced conductances
keep full relative accuracy even when they span many orders of magnitude.
The result equals the Schur complement of the network Laplacian onto the
kept vertices.
"""

import numpy as np


def star_mesh_reduce(conductance, keep, order=None):
    """Eliminate all vertices not in ``keep``.

    Parameters
    ----------
    conductance : (n, n) array_like
        Symmetric nonnegative conductance matrix. The diagonal is ignored.
    keep : sequence of int
        Vertices to keep; the output rows follow this order.
    order : sequence of int, optional
        Elimination order for the remaining vertices. Defaults to ascending.

    Returns
    -------
    ndarray of shape (len(keep), len(keep))
        Conductance matrix of the reduced network, zero diagonal.
    """
    C = np.array(conductance, dtype=float)
    n = C.shape[0]
    if C.shape != (n, n):
        raise ValueError(f"conductance must be square, got shape {C.shape}")
    np.fill_diagonal(C, 0.0)
    keep = np.asarray(keep, dtype=int)
    if order is None:
        mask = np.ones(n, dtype=bool)
        mask[keep] = False
        order = np.flatnonzero(mask)
    for v in order:
        nb = np.flatnonzero(C[v])
        if nb.size:
            c = C[v, nb]
            C[np.ix_(nb, nb)] += np.outer(c, c) / c.sum()
            C[nb, nb] = 0.0
            C[v, nb] = 0.0
            C[nb, v] = 0.0
    return C[np.ix_(keep, keep)]


def laplacian(conductance):
    """Graph Laplacian ``diag(C 1) - C`` of a dense conductance matrix."""
    C = np.array(conductance, dtype=float)
    np.fill_diagonal(C, 0.0)
    return np.diag(C.sum(axis=1)) - C
