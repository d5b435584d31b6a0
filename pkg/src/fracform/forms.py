"""Dirichlet forms on the boundary set V0.

Boundary labels are 1-based in every public function (label ``j`` is the
point ``P_j``); boundary functions are plain arrays with ``u[j - 1]`` the
value at ``P_j``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import ReducibleForm
from .network import laplacian, star_mesh_reduce

#: Default relative tolerance for numeric post-conditions.
RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class DirichletForm:
    """Nonnegative conductances on all unordered pairs of boundary points.

    ``coefficients`` is dense over the ``N (N - 1) / 2`` pairs, in
    lexicographic pair order (1,2), (1,3), ..., (N-1,N).
    """

    n_boundary: int
    coefficients: np.ndarray

    def __post_init__(self):
        n = int(self.n_boundary)
        if n < 2:
            raise ValueError(f"a form needs at least 2 boundary points, got {n}")
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.size != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} coefficients for N={n}, got {c.size}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if np.any(c < 0):
            raise ValueError("coefficients must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "n_boundary", n)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def unit(cls, n):
        """Complete form with every conductance equal to one."""
        return cls(n, np.ones(n * (n - 1) // 2))

    @classmethod
    def from_matrix(cls, conductance):
        C = np.asarray(conductance, dtype=float)
        n = C.shape[0]
        if not np.allclose(C, C.T, rtol=1e-12, atol=0):
            raise ValueError("conductance matrix must be symmetric")
        return cls(n, C[np.triu_indices(n, 1)])

    @classmethod
    def from_pairs(cls, n, pairs):
        """Build from a mapping ``{(j1, j2): c}``; missing pairs get zero."""
        C = np.zeros((n, n))
        for (a, b), c in pairs.items():
            _check_pair(n, a, b)
            C[a - 1, b - 1] = C[b - 1, a - 1] = c
        return cls.from_matrix(C)

    @property
    def pairs(self):
        rows, cols = np.triu_indices(self.n_boundary, 1)
        return [(int(a) + 1, int(b) + 1) for a, b in zip(rows, cols)]

    def coefficient(self, j1, j2):
        _check_pair(self.n_boundary, j1, j2)
        return float(self.matrix()[j1 - 1, j2 - 1])

    def matrix(self):
        """Symmetric ``(N, N)`` conductance matrix with zero diagonal."""
        n = self.n_boundary
        C = np.zeros((n, n))
        rows, cols = np.triu_indices(n, 1)
        C[rows, cols] = self.coefficients
        C[cols, rows] = self.coefficients
        return C

    def laplacian(self):
        return laplacian(self.matrix())

    def total(self):
        return float(self.coefficients.sum())

    def scaled(self, t):
        return DirichletForm(self.n_boundary, t * self.coefficients)

    def normalized(self):
        """The proportional form whose coefficients sum to one."""
        s = self.total()
        if s <= 0:
            raise ValueError("cannot normalize the zero form")
        return self.scaled(1.0 / s)

    def __eq__(self, other):
        if not isinstance(other, DirichletForm):
            return NotImplemented
        return (self.n_boundary == other.n_boundary
                and np.array_equal(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((self.n_boundary, self.coefficients.tobytes()))

    def __repr__(self):
        return f"DirichletForm(n_boundary={self.n_boundary}, coefficients={self.coefficients!r})"


def _check_pair(n, j1, j2):
    if not (1 <= j1 <= n and 1 <= j2 <= n):
        raise ValueError(f"labels must lie in 1..{n}, got ({j1}, {j2})")
    if j1 == j2:
        raise ValueError(f"labels of a pair must differ, got ({j1}, {j2})")


def _as_boundary_function(E, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (E.n_boundary,):
        raise ValueError(f"boundary function must have shape ({E.n_boundary},), got {u.shape}")
    return u


def energy(E, u):
    """``sum over pairs of c_{j1 j2} (u(P_j1) - u(P_j2))**2``."""
    u = _as_boundary_function(E, u)
    rows, cols = np.triu_indices(E.n_boundary, 1)
    return float(np.dot(E.coefficients, (u[rows] - u[cols]) ** 2))


def is_irreducible(E):
    """True iff the graph of pairs with positive conductance is connected."""
    n_comp, _ = connected_components(E.matrix() > 0, directed=False)
    return n_comp == 1


def require_irreducible(E):
    if not is_irreducible(E):
        raise ReducibleForm("the form vanishes on a nonconstant function "
                            "(its conductance graph is disconnected)")


def effective_conductivity(E, j1, j2):
    """Minimum energy over boundary functions equal to 0 at ``P_j1`` and 1 at ``P_j2``.

    Computed by eliminating every other boundary point from the network.
    """
    _check_pair(E.n_boundary, j1, j2)
    require_irreducible(E)
    return float(star_mesh_reduce(E.matrix(), [j1 - 1, j2 - 1])[0, 1])


def effective_conductivities(E, pairs):
    """Effective conductivities of several pairs, as a float array."""
    return np.array([effective_conductivity(E, a, b) for a, b in pairs])


def pinned_minimizer(E, j1, j2, t1, t2):
    """Energy minimizer with ``u(P_j1) = t1`` and ``u(P_j2) = t2``.

    Returns ``(u, energy(E, u))``; the energy equals
    ``(t1 - t2)**2 * effective_conductivity(E, j1, j2)``.
    """
    n = E.n_boundary
    _check_pair(n, j1, j2)
    require_irreducible(E)
    pinned = np.array([j1 - 1, j2 - 1])
    free = np.setdiff1d(np.arange(n), pinned)
    u = np.empty(n)
    u[pinned] = (t1, t2)
    if free.size:
        L = E.laplacian()
        rhs = -L[np.ix_(free, pinned)] @ u[pinned]
        u[free] = np.linalg.solve(L[np.ix_(free, free)], rhs)
    return u, energy(E, u)


def harmonic_min(b):
    """Minimize ``sum b_i x_i**2`` over vectors with ``sum x_i = 1``.

    The minimum is the harmonic sum ``1 / sum(1 / b_i)``, attained at
    ``x_i = value / b_i``.  Returns ``(value, x)``.
    """
    b = np.asarray(b, dtype=float).ravel()
    if b.size == 0:
        raise ValueError("need at least one weight")
    if not np.all(b > 0) or not np.all(np.isfinite(b)):
        raise ValueError("weights must be positive and finite")
    value = 1.0 / np.sum(1.0 / b)
    return float(value), value / b
