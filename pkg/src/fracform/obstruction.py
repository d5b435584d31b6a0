"""Why the 20-cell ring fractal admits no self-similar energy.

Pair the cells into ten blocks ``(2h+1, 2h+2)``.  Let ``w`` be the largest,
over blocks, of the smaller weight in the block.  For every irreducible form
``E`` and weights ``r`` on the ring:

* the *near* pair ``(2h+1, 2h+2)`` of a block attaining ``w`` keeps at least
  a factor ``w / 2`` of its effective conductivity under renormalization;
* every *far* (opposite) pair ``(l, l+10)`` ends up with effective
  conductivity strictly below ``w / 2`` times the largest far-pair
  conductivity of ``E``.

A fixed point would need both ratios equal to one, i.e. ``w <= 2`` and
``w > 2`` at once.  The helpers below evaluate both sides numerically and
bundle them into :class:`ObstructionCertificate` records.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NumericalFailure, ReducibleForm
from .forms import (DirichletForm, effective_conductivity, energy, harmonic_min,
                    pinned_minimizer, require_irreducible)
from .renorm import as_weights, assemble_level1, level1_pinned_minimizer, renormalize
from .triples import RING_SIZE, build_counterexample, entry_label, gluing_vertex, opposite

N_BLOCKS = RING_SIZE // 2
#: Coefficient range of randomly sampled forms and weights.
SAMPLE_RANGE = (0.1, 10.0)


@lru_cache(maxsize=1)
def ring():
    return build_counterexample()


def _ring_inputs(E, r):
    if E.n_boundary != RING_SIZE:
        raise ValueError(f"ring forms live on {RING_SIZE} boundary points, got {E.n_boundary}")
    return as_weights(r, RING_SIZE)


def block_weight(r):
    """Largest block minimum ``max_h min(r_{2h+1}, r_{2h+2})``.

    Returns ``(value, h)`` with ``h`` in ``0..9`` the smallest block attaining
    it.  Both weights of block ``h`` are then ``>= value`` and every block
    has a weight ``<= value``.
    """
    r = np.asarray(r, dtype=float).ravel()
    if r.size != RING_SIZE:
        raise ValueError(f"expected {RING_SIZE} weights, got {r.size}")
    mins = np.minimum(r[0::2], r[1::2])
    h = int(np.argmax(mins))
    return float(mins[h]), h


def near_pair(h):
    """Boundary labels ``(2h+1, 2h+2)`` of block ``h``."""
    return 2 * h + 1, 2 * h + 2


def far_conductances(E):
    """Effective conductivities ``C(l, l+10)`` for ``l = 1..20`` (array index ``l - 1``)."""
    half = np.array([effective_conductivity(E, l, l + N_BLOCKS) for l in range(1, N_BLOCKS + 1)])
    return np.concatenate([half, half])


@dataclass(frozen=True)
class NearPairAnalysis:
    """Level-1 view of the near pair of the heaviest block."""

    ratio: float
    block_weight: float
    conductivity: float
    level1_minimum: float
    gluing_value: float
    block_energy: float

    @property
    def mixing_bound(self):
        t = self.gluing_value
        return t * t + (1 - t) ** 2


def near_pair_ratio(E, r, renormalized=None):
    """``C(Lambda_r E)/C(E)`` on the near pair of the heaviest block; at least ``w / 2``."""
    r = _ring_inputs(E, r)
    _, h = block_weight(r)
    a, b = near_pair(h)
    F = renormalize(ring(), E, r) if renormalized is None else renormalized
    return effective_conductivity(F, a, b) / effective_conductivity(E, a, b)


def near_pair_analysis(E, r):
    """Recompute the near-pair ratio on level 1 and expose the gluing value.

    The minimizer ``v`` of the level-1 energy with ``v(P_a) = 0``,
    ``v(P_b) = 1`` takes some value ``t`` at the vertex shared by cells ``a``
    and ``b``; the energy of those two cells is at least
    ``(t**2 + (1-t)**2) * C(E; a, b)``.
    """
    r = _ring_inputs(E, r)
    require_irreducible(E)
    w, h = block_weight(r)
    a, b = near_pair(h)
    T = ring()
    v, s_min = level1_pinned_minimizer(T, E, r, a, b)
    cells = T.cell_array
    block_energy = energy(E, v[cells[a - 1]]) + energy(E, v[cells[b - 1]])
    c = effective_conductivity(E, a, b)
    return NearPairAnalysis(ratio=s_min / c, block_weight=w, conductivity=c,
                            level1_minimum=s_min, gluing_value=float(v[gluing_vertex(a)]),
                            block_energy=block_energy)


def far_pair_ratios(E, r, renormalized=None):
    """``C(Lambda_r E; l, l+10) / max_l C(E; l, l+10)`` for ``l = 1..20``."""
    r = _ring_inputs(E, r)
    F = renormalize(ring(), E, r) if renormalized is None else renormalized
    return far_conductances(F) / far_conductances(E).max()


def far_pair_ratio(E, r, l):
    """Single far-pair ratio; strictly below ``w / 2`` for every label ``l``."""
    if not 1 <= l <= RING_SIZE:
        raise ValueError(f"label must lie in 1..{RING_SIZE}, got {l}")
    return float(far_pair_ratios(E, r)[l - 1])


@dataclass(frozen=True)
class FarPairCompetitor:
    """Explicit level-1 function with value 0 at ``P_l`` and 1 at ``P_{l+10}``.

    Cell ``l`` is constant 0 and cell ``l+10`` constant 1.  Going around
    either arc, each intermediate cell carries the pinned minimizer of ``E``
    between its two opposite gluing labels, and the values at the gluing
    vertices step through cumulative sums of the optimal mixing vectors.
    """

    label: int
    values: np.ndarray
    cell_values: np.ndarray
    forward_mixing: np.ndarray
    backward_mixing: np.ndarray
    level1_energy: float
    chain_energy: float
    bound: float


def far_pair_competitor(E, r, l):
    r = _ring_inputs(E, r)
    require_irreducible(E)
    if not 1 <= l <= RING_SIZE:
        raise ValueError(f"label must lie in 1..{RING_SIZE}, got {l}")
    T = ring()
    cells = T.cell_array
    wrap = lambda i: (i - 1) % RING_SIZE + 1  # noqa: E731

    fwd_w = r[[wrap(l + d) - 1 for d in range(1, N_BLOCKS)]]
    bwd_w = r[[wrap(l + N_BLOCKS + d) - 1 for d in range(1, N_BLOCKS)]]
    fwd_h, x = harmonic_min(fwd_w)
    bwd_h, x2 = harmonic_min(bwd_w)
    s = np.concatenate([[0.0], np.cumsum(x)])
    s2 = 1.0 - np.concatenate([[0.0], np.cumsum(x2)])
    s[-1], s2[-1] = 1.0, 0.0

    cell_values = np.empty((RING_SIZE, RING_SIZE))
    chain = 0.0
    for d in range(RING_SIZE):
        i = wrap(l + d)
        if d == 0:
            u = np.zeros(RING_SIZE)
        elif d == N_BLOCKS:
            u = np.ones(RING_SIZE)
        else:
            levels = s if d < N_BLOCKS else s2
            n = d if d < N_BLOCKS else d - N_BLOCKS
            j = entry_label(i)
            u, e = pinned_minimizer(E, j, opposite(j), levels[n - 1], levels[n])
            chain += r[i - 1] * e
        cell_values[i - 1] = u

    values = np.full(T.n_level1, np.nan)
    for i in range(RING_SIZE):
        values[cells[i]] = cell_values[i]
    level1 = assemble_level1(T, E, r).energy(values)
    M = far_conductances(E).max()
    return FarPairCompetitor(label=l, values=values, cell_values=cell_values,
                             forward_mixing=x, backward_mixing=x2, level1_energy=level1,
                             chain_energy=chain, bound=M * (fwd_h + bwd_h))


@dataclass(frozen=True)
class ObstructionCertificate:
    """Numeric evidence that ``Lambda_r E`` is not a multiple of ``E``.

    ``near_margin >= 0`` and ``far_margin > 0`` together are incompatible
    with a fixed point.  ``far_ratios[l-1]`` is the far-pair ratio at label
    ``l``; ``worst_far_margin`` is the margin of the largest of them.
    """

    block_weight: float
    block: int
    far_label: int
    near_ratio: float
    far_ratio: float
    far_ratios: tuple
    weights: tuple
    coefficients: tuple = field(repr=False)

    @property
    def near_margin(self):
        return self.near_ratio - self.block_weight / 2

    @property
    def far_margin(self):
        return self.block_weight / 2 - self.far_ratio

    @property
    def worst_far_margin(self):
        return self.block_weight / 2 - max(self.far_ratios)

    def violations(self, tol=1e-9):
        """List of broken invariants (empty for a valid certificate)."""
        out = []
        r = np.asarray(self.weights)
        w, h = self.block_weight, self.block
        if min(r[2 * h], r[2 * h + 1]) < w:
            out.append(f"block {h} has a weight below {w}")
        if np.any(np.minimum(r[0::2], r[1::2]) > w):
            out.append(f"some block has both weights above {w}")
        if self.near_ratio < (w / 2) * (1 - tol):
            out.append(f"near ratio {self.near_ratio!r} below half block weight {w / 2!r}")
        if not self.far_margin > 0:
            out.append(f"far ratio {self.far_ratio!r} not below half block weight {w / 2!r}")
        if not self.worst_far_margin > 0:
            out.append(f"some far ratio (max {max(self.far_ratios)!r}) not below {w / 2!r}")
        return out

    def is_valid(self, tol=1e-9):
        return not self.violations(tol)


def certify(E, r):
    """Build the obstruction certificate of ``(E, r)`` on the ring."""
    r = _ring_inputs(E, r)
    require_irreducible(E)
    w, h = block_weight(r)
    F = renormalize(ring(), E, r)
    far_E = far_conductances(E)
    far_F = far_conductances(F)
    l_hat = int(np.argmax(far_E[:N_BLOCKS])) + 1
    ratios = far_F / far_E.max()
    return ObstructionCertificate(
        block_weight=w, block=h, far_label=l_hat,
        near_ratio=near_pair_ratio(E, r, renormalized=F),
        far_ratio=float(far_F[l_hat - 1] / far_E[l_hat - 1]),
        far_ratios=tuple(float(x) for x in ratios),
        weights=tuple(float(x) for x in r),
        coefficients=tuple(float(x) for x in E.coefficients))


def _log_uniform(rng, size):
    lo, hi = np.log(SAMPLE_RANGE[0]), np.log(SAMPLE_RANGE[1])
    return np.exp(rng.uniform(lo, hi, size))


def sample_generators(seed, count):
    """Independent counter-based generators, one per sample index."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def sample_form(rng, n=RING_SIZE):
    """Irreducible form with log-uniform coefficients on ``SAMPLE_RANGE``."""
    return DirichletForm(n, _log_uniform(rng, n * (n - 1) // 2))


def sample_weights(rng, k=RING_SIZE):
    return _log_uniform(rng, k)


def certify_no_eigenform(r=None, sample_count=100, seed=42):
    """Certificates for ``sample_count`` random forms on the ring.

    Sample ``n`` draws its form (and its weights, when ``r`` is None) from
    its own generator, so results do not depend on evaluation order.
    """
    if sample_count < 0:
        raise ValueError("sample_count must be nonnegative")
    if r is not None:
        r = as_weights(r, RING_SIZE)
    certs = []
    for n, rng in enumerate(sample_generators(seed, sample_count)):
        E = sample_form(rng)
        rn = sample_weights(rng) if r is None else r
        try:
            certs.append(certify(E, rn))
        except (NumericalFailure, ReducibleForm) as exc:
            raise NumericalFailure(f"sample {n}: {exc}") from exc
    return certs
