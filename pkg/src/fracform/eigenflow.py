"""Normalized renormalization iteration and the eigenform search.

An ``r``-eigenform is a form with ``Lambda_r(E) = rho E``.  Since scaling
``r`` only rescales ``rho``, iterating ``E -> Lambda_r(E) / sum`` and
watching how far successive forms are from proportional is the natural
numerical probe.
"""

import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure, ReducibleForm
from .forms import DirichletForm, effective_conductivity, is_irreducible, require_irreducible
from .obstruction import N_BLOCKS, block_weight, certify, far_conductances, near_pair
from .renorm import as_weights, renormalize
from .triples import build_gasket, is_counterexample

log = logging.getLogger(__name__)


def _normalized_coefficients(E):
    s = E.total()
    if s <= 0:
        raise ValueError("residual is undefined for the zero form")
    return E.coefficients / s


def residual(E, F):
    """Sup-norm distance of the coefficient vectors, each scaled to sum one.

    Zero exactly when the forms are proportional.
    """
    if E.n_boundary != F.n_boundary:
        raise ValueError("forms live on different boundary sets")
    return float(np.max(np.abs(_normalized_coefficients(E) - _normalized_coefficients(F))))


def projective_residual(E, F):
    """Hilbert projective distance ``log max(F/E) - log min(F/E)``.

    Pairs where both coefficients vanish are skipped; if exactly one of them
    vanishes the distance is infinite.  Unlike :func:`residual` it does not
    shrink when the forms drift towards the boundary of the cone.
    """
    if E.n_boundary != F.n_boundary:
        raise ValueError("forms live on different boundary sets")
    a, b = E.coefficients, F.coefficients
    if a.sum() <= 0 or b.sum() <= 0:
        raise ValueError("residual is undefined for the zero form")
    both = (a > 0) & (b > 0)
    if np.any((a > 0) != (b > 0)):
        return math.inf
    q = np.log(b[both]) - np.log(a[both])
    return float(q.max() - q.min())


@dataclass(frozen=True)
class StepRecord:
    step: int
    coefficients: np.ndarray
    residual: float
    projective_residual: float
    eigenvalue: float
    M: float = math.nan
    m: float = math.nan

    @property
    def phi(self):
        return self.M / self.m

    @property
    def coeff_sum(self):
        return float(self.coefficients.sum())


@dataclass
class IterationTrace:
    """Per-step records of the normalized iteration.

    Step 0 holds the normalized starting form (residuals are NaN).  The
    ``eigenvalue`` of step ``n`` is the coefficient sum of
    ``Lambda_r(E_{n-1})``.  ``M`` and ``m`` are the largest far-pair and the
    heaviest-block near-pair effective conductivities, filled in on the ring
    fractal only.
    """

    n_boundary: int
    weights: np.ndarray
    records: list = field(default_factory=list)
    converged: bool = False

    @property
    def form(self):
        return DirichletForm(self.n_boundary, self.records[-1].coefficients)

    @property
    def residuals(self):
        return np.array([rec.residual for rec in self.records[1:]])

    @property
    def phis(self):
        return np.array([rec.phi for rec in self.records])

    def best(self):
        """Record with the smallest residual (earliest on ties), or None."""
        steps = self.records[1:]
        if not steps:
            return None
        return min(steps, key=lambda rec: (rec.residual, rec.step))


class IterationFailure(NumericalFailure):
    """Numerical failure at a given step; ``trace`` holds the steps completed."""

    def __init__(self, step, trace, reason):
        self.step = step
        self.trace = trace
        super().__init__(f"step {step}: {reason}")


def _ring_extremes(E, h):
    a, b = near_pair(h)
    return float(far_conductances(E)[:N_BLOCKS].max()), effective_conductivity(E, a, b)


def iterate(T, E0, r, max_steps=200, tol=1e-10):
    """Iterate ``E -> Lambda_r(E) / sum`` from ``E0`` until the residual
    between successive forms drops below ``tol`` or ``max_steps`` is hit.

    Raises :class:`IterationFailure` (carrying the partial trace) if a step
    breaks down numerically.
    """
    require_irreducible(E0)
    r = as_weights(r, T.n_cells)
    ring = is_counterexample(T)
    h = block_weight(r)[1] if ring else None
    trace = IterationTrace(n_boundary=T.n_boundary, weights=r)

    def record(step, E, res, proj, rho):
        extremes = _ring_extremes(E, h) if ring else (math.nan, math.nan)
        trace.records.append(StepRecord(step, E.coefficients, res, proj, rho, *extremes))

    E = E0.normalized()
    record(0, E, math.nan, math.nan, math.nan)
    for step in range(1, max_steps + 1):
        try:
            raw = renormalize(T, E, r)
            F = raw.normalized()
            if not is_irreducible(F):
                raise NumericalFailure("normalized form underflowed to a reducible one")
            res = residual(F, E)
            record(step, F, res, projective_residual(F, E), raw.total())
        except (NumericalFailure, ReducibleForm) as exc:
            raise IterationFailure(step, trace, exc) from exc
        E = F
        if res < tol:
            trace.converged = True
            break
    return trace


@dataclass(frozen=True)
class SearchConfig:
    """Weight grid and iteration budget for :func:`search_eigenform`.

    Weights take values ``1..levels`` on a pattern of length ``period``
    repeated around the cells, then are rescaled to sum ``k``.  ``period``
    defaults to ``k``, or 4 on the ring fractal.
    """

    levels: int = 3
    period: int = None
    max_steps: int = 200
    tol: float = 1e-10
    certify: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")

    def as_dict(self):
        return {"levels": self.levels, "period": self.period, "max_steps": self.max_steps,
                "tol": self.tol, "certify": self.certify}


def _canonical_pattern(a, gasket, ring):
    g = math.gcd(*a)
    key = tuple(x // g for x in a)
    if gasket:
        key = tuple(sorted(key))
    if ring:
        key = min(key[s:] + key[:s] for s in range(0, len(key), 2))
    return key


def weight_grid(T, levels=3, period=None):
    """Symmetry-reduced grid of weight vectors on the simplex ``sum r = k``.

    Patterns that are proportional, or related by a symmetry of the triple
    (any permutation for gaskets, rotation by two cells on the ring), are
    kept once, at their lexicographically first representative.
    """
    k = T.n_cells
    ring = is_counterexample(T)
    if period is None:
        period = 4 if ring else k
    if not 1 <= period <= k:
        raise ValueError(f"period must lie in 1..{k}, got {period}")
    gasket = period == k and T == build_gasket(k)
    ring = ring and period % 2 == 0 and k % period == 0
    seen = set()
    grid = []
    for a in itertools.product(range(1, levels + 1), repeat=period):
        key = _canonical_pattern(a, gasket, ring)
        if key in seen:
            continue
        seen.add(key)
        r = np.array([a[i % period] for i in range(k)], dtype=float)
        grid.append(r * (k / r.sum()))
    return grid


@dataclass(frozen=True)
class PointResult:
    index: int
    weights: np.ndarray
    steps: int
    converged: bool
    best_step: int
    best_residual: float
    best_projective_residual: float
    eigenvalue: float
    coefficients: np.ndarray
    failure: str = None
    certificate: object = None


@dataclass
class SearchReport:
    config: SearchConfig
    n_cells: int
    points: list
    elapsed: float = 0.0

    @property
    def best(self):
        """Point with the smallest best residual; lowest grid index on ties."""
        ok = [p for p in self.points if p.best_step > 0]
        if not ok:
            return None
        return min(ok, key=lambda p: (p.best_residual, p.index))

    @property
    def best_residual(self):
        b = self.best
        return math.inf if b is None else b.best_residual

    @property
    def certificates(self):
        return [p.certificate for p in self.points if p.certificate is not None]


def _run_point(args):
    T, index, r, config = args
    n = T.n_boundary
    failure = None
    try:
        trace = iterate(T, DirichletForm.unit(n), r, config.max_steps, config.tol)
    except IterationFailure as exc:
        trace, failure = exc.trace, str(exc)
    best = trace.best()
    if best is None:
        best = trace.records[0]
    cert = None
    if config.certify and is_counterexample(T):
        E = DirichletForm(n, best.coefficients)
        try:
            cert = certify(E, r)
        except (NumericalFailure, ReducibleForm) as exc:
            failure = (failure + "; " if failure else "") + f"certificate: {exc}"
    return PointResult(index=index, weights=r, steps=trace.records[-1].step,
                       converged=trace.converged, best_step=best.step,
                       best_residual=best.residual,
                       best_projective_residual=best.projective_residual,
                       eigenvalue=best.eigenvalue, coefficients=best.coefficients,
                       failure=failure, certificate=cert)


def search_eigenform(T, config=None):
    """Run the normalized iteration from the unit form at every grid point.

    Results are listed in grid order whatever the number of workers.
    Numerical failures are recorded on the point and do not stop the sweep.
    """
    config = SearchConfig() if config is None else config
    grid = weight_grid(T, config.levels, config.period)
    jobs = [(T, i, r, config) for i, r in enumerate(grid)]
    start = time.perf_counter()
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            points = list(pool.map(_run_point, jobs))
    else:
        points = [_run_point(job) for job in jobs]
    elapsed = time.perf_counter() - start
    log.info("searched %d weight vectors in %.2fs", len(points), elapsed)
    return SearchReport(config=config, n_cells=T.n_cells, points=points, elapsed=elapsed)
