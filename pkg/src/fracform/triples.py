"""Combinatorial fractal triples (V0, V1, Psi).

A triple is stored as ``k`` cell maps, each a tuple of ``N`` global level-1
vertex ids: entry ``h - 1`` of cell ``i`` is the id of the image of boundary
point ``P_h`` under the ``i``-th map.  Ids are 1-based, and ids ``1..N`` are
the boundary points themselves.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidTriple

#: Number of boundary points and cells of the ring counterexample.
RING_SIZE = 20
_HALF = RING_SIZE // 2


@dataclass(frozen=True)
class FractalTriple:
    n_boundary: int
    n_cells: int
    n_level1: int
    cells: tuple

    @property
    def cell_array(self):
        """Cell maps as a ``(k, N)`` integer array of 0-based vertex indices."""
        return np.asarray(self.cells, dtype=int) - 1

    def multiplicity(self):
        """Number of cells containing each level-1 vertex (0-based array)."""
        return np.bincount(self.cell_array.ravel(), minlength=self.n_level1)

    def interior(self):
        """0-based indices of level-1 vertices that are not boundary points."""
        return np.arange(self.n_boundary, self.n_level1)


def _collect_violations(n_boundary, n_cells, n_level1, cells):
    found = []
    if n_boundary < 2:
        found.append(("Malformed", f"n_boundary must be >= 2, got {n_boundary}"))
    if n_cells < n_boundary:
        found.append(("Malformed", f"n_cells={n_cells} is smaller than n_boundary={n_boundary}"))
    if len(cells) != n_cells:
        found.append(("Malformed", f"expected {n_cells} cell maps, got {len(cells)}"))
    if n_level1 < n_boundary:
        found.append(("Malformed", f"n_level1={n_level1} is smaller than n_boundary={n_boundary}"))
    bad_shape = False
    for i, cell in enumerate(cells, start=1):
        if len(cell) != n_boundary:
            found.append(("Malformed", f"cell {i} has {len(cell)} entries, expected {n_boundary}"))
            bad_shape = True
            continue
        out = [v for v in cell if not 1 <= v <= n_level1]
        if out:
            found.append(("CoverageGap", f"cell {i} maps to ids outside 1..{n_level1}: {out}"))
            bad_shape = True
        if len(set(cell)) != len(cell):
            dup = sorted({v for v in cell if cell.count(v) > 1})
            found.append(("NotInjective", f"cell {i} repeats vertex ids {dup}"))
    if found and (bad_shape or len(cells) != n_cells):
        return found

    used = set()
    for cell in cells:
        used.update(cell)
    missing = sorted(set(range(1, n_level1 + 1)) - used)
    if missing:
        found.append(("CoverageGap", f"vertex ids not covered by any cell: {missing}"))

    for j in range(1, min(n_boundary, len(cells)) + 1):
        if cells[j - 1][j - 1] != j:
            found.append(("AxiomA", f"cell {j} does not fix boundary point {j} "
                                    f"(maps it to {cells[j - 1][j - 1]})"))
    for i, cell in enumerate(cells, start=1):
        for h, v in enumerate(cell, start=1):
            if v <= n_boundary and v != i:
                found.append(("AxiomB", f"boundary point {v} lies in cell {i} "
                                        f"(image of label {h})"))
            elif v <= n_boundary and v == i and h != i:
                found.append(("AxiomB", f"cell {i} maps label {h} onto boundary point {v}"))

    if n_level1 > 0:
        rows, cols = [], []
        for cell in cells:
            ids = [v - 1 for v in cell]
            rows.extend(ids[:-1])
            cols.extend(ids[1:])
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n_level1, n_level1))
        n_comp, labels = connected_components(graph, directed=False)
        if n_comp > 1:
            stray = [int(v) + 1 for v in np.flatnonzero(labels != labels[0])]
            found.append(("AxiomC", f"level-1 cell graph has {n_comp} components; "
                                    f"not connected to vertex 1: {stray}"))
    return found


def validate_triple(raw):
    """Check a triple description and return it as a :class:`FractalTriple`.

    ``raw`` is either a ``FractalTriple`` or a mapping with keys
    ``n_boundary``, ``n_cells``, ``n_level1`` and ``cells``.  Every violation
    is reported at once through :class:`~fracform.errors.InvalidTriple`.
    """
    if isinstance(raw, FractalTriple):
        n, k, n1, cells = raw.n_boundary, raw.n_cells, raw.n_level1, raw.cells
    else:
        try:
            n, k, n1 = int(raw["n_boundary"]), int(raw["n_cells"]), int(raw["n_level1"])
            cells = raw["cells"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidTriple([("Malformed", f"missing or bad field: {exc}")]) from None
    try:
        cells = tuple(tuple(int(v) for v in cell) for cell in cells)
    except (TypeError, ValueError) as exc:
        raise InvalidTriple([("Malformed", f"cell entries must be integers: {exc}")]) from None
    violations = _collect_violations(n, k, n1, cells)
    if violations:
        raise InvalidTriple(violations)
    return FractalTriple(n, k, n1, cells)


def entry_label(i):
    """Label at which cell ``i`` of the ring counterexample meets cell ``i - 1``.

    Cell ``i`` touches its predecessor at the image of ``P_entry`` and its
    successor at the image of the opposite point ``P_{entry + 10}``.  Indices
    are taken mod 20 and returned in ``1..20``.
    """
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
        raise TypeError(f"cell index must be an integer, got {i!r}")
    i = (int(i) - 1) % RING_SIZE + 1
    label = i - 1 if i % 2 == 0 else i - 9
    return (label - 1) % RING_SIZE + 1


def opposite(label):
    """The label opposite to ``label`` in the ring counterexample, in 1..20."""
    return (int(label) + _HALF - 1) % RING_SIZE + 1


def _wrap(i):
    return (i - 1) % RING_SIZE + 1


def build_counterexample():
    """The 20-cell ring fractal on which no self-similar energy exists.

    Cells form a cycle.  Cells ``i`` and ``i + 1`` share exactly one vertex
    ``Q_i``: the images of ``P_{i+1}`` and ``P_i`` when ``i`` is odd, and of
    ``P_{i+9}`` and ``P_{i-8}`` when ``i`` is even.  Ids 1..20 are the
    boundary points, 21..40 are ``Q_1..Q_20``, and the 17 private vertices
    of each cell follow in (cell, label) order.
    """
    slots = {}
    for i in range(1, RING_SIZE + 1):
        slots[(i, i)] = i
    for i in range(1, RING_SIZE + 1):
        q = RING_SIZE + i
        if i % 2:
            slots[(i, _wrap(i + 1))] = q
            slots[(_wrap(i + 1), i)] = q
        else:
            slots[(i, _wrap(i + 9))] = q
            slots[(_wrap(i + 1), _wrap(i - 8))] = q
    next_id = 2 * RING_SIZE + 1
    cells = []
    for i in range(1, RING_SIZE + 1):
        row = []
        for h in range(1, RING_SIZE + 1):
            if (i, h) not in slots:
                slots[(i, h)] = next_id
                next_id += 1
            row.append(slots[(i, h)])
        cells.append(tuple(row))
    return FractalTriple(RING_SIZE, RING_SIZE, next_id - 1, tuple(cells))


def is_counterexample(triple):
    return triple == build_counterexample()


def gluing_vertex(i):
    """0-based level-1 index of ``Q_i``, the vertex shared by cells i and i+1."""
    return RING_SIZE + _wrap(i) - 1


def build_gasket(n):
    """The ``n``-gasket: cells ``i`` and ``j`` share one vertex ``m_ij``.

    ``n = 2`` is the interval split in two, ``n = 3`` has the combinatorics
    of the Sierpinski gasket.  Midpoint ids follow the boundary ids in
    lexicographic pair order.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"gasket order must be an integer >= 2, got {n!r}")
    n = int(n)
    mid = {pair: n + idx + 1 for idx, pair in enumerate(combinations(range(1, n + 1), 2))}
    cells = []
    for i in range(1, n + 1):
        cells.append(tuple(i if j == i else mid[(min(i, j), max(i, j))]
                           for j in range(1, n + 1)))
    return FractalTriple(n, n, n + len(mid), tuple(cells))


def cell_adjacency(triple):
    """Shared vertex ids of every unordered cell pair.

    Returns a dict mapping ``(i, i2)`` with ``i < i2`` (1-based cells) to a
    sorted tuple of shared 1-based vertex ids, empty when disjoint.
    """
    sets = [set(cell) for cell in triple.cells]
    return {(a + 1, b + 1): tuple(sorted(sets[a] & sets[b]))
            for a, b in combinations(range(len(sets)), 2)}
