"""JSON and CSV formats.

Output is canonical: sorted keys, floats written with 17 significant digits,
NaN and infinities as ``null``.  Writing, reading and writing again gives the
same bytes.
"""

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .forms import DirichletForm
from .triples import validate_triple


def _encode(obj, out):
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for n, key in enumerate(sorted(obj)):
            if n:
                out.append(", ")
            out.append(json.dumps(str(key)) + ": ")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for n, item in enumerate(obj):
            if n:
                out.append(", ")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    out = []
    _encode(obj, out)
    return "".join(out) + "\n"


def write_json(obj, path):
    Path(path).write_text(dumps(obj))


def read_json(path):
    return json.loads(Path(path).read_text())


def triple_to_dict(T):
    return {"n_boundary": T.n_boundary, "n_cells": T.n_cells, "n_level1": T.n_level1,
            "cells": [list(cell) for cell in T.cells]}


def triple_from_dict(d):
    return validate_triple(d)


def form_to_dict(E):
    return {"n_boundary": E.n_boundary,
            "coefficients": [{"pair": [a, b], "c": float(c)}
                             for (a, b), c in zip(E.pairs, E.coefficients)]}


def form_from_dict(d):
    """Parse a form file; every pair ``j1 < j2`` must appear exactly once."""
    n = int(d["n_boundary"])
    pairs = {}
    for entry in d["coefficients"]:
        a, b = (int(x) for x in entry["pair"])
        if a > b:
            a, b = b, a
        if (a, b) in pairs:
            raise ValueError(f"pair {(a, b)} listed twice")
        pairs[(a, b)] = float(entry["c"])
    if len(pairs) != n * (n - 1) // 2:
        raise ValueError(f"form file lists {len(pairs)} pairs, expected {n * (n - 1) // 2}")
    return DirichletForm.from_pairs(n, pairs)


def weights_to_dict(r):
    return {"r": [float(x) for x in r]}


def weights_from_dict(d):
    return np.asarray(d["r"], dtype=float)


def certificate_to_dict(cert, tol=1e-9):
    return {"block_weight": cert.block_weight, "block": cert.block,
            "far_label": cert.far_label, "near_ratio": cert.near_ratio,
            "far_ratio": cert.far_ratio, "far_ratios": list(cert.far_ratios),
            "near_margin": cert.near_margin, "far_margin": cert.far_margin,
            "worst_far_margin": cert.worst_far_margin,
            "valid": cert.is_valid(tol), "weights": list(cert.weights),
            "coefficients": list(cert.coefficients)}


def report_to_dict(report):
    """Search report without wall-clock data, so equal inputs give equal files."""
    best = report.best
    points = []
    for p in report.points:
        points.append({
            "index": p.index, "weights": p.weights, "steps": p.steps,
            "converged": p.converged, "best_step": p.best_step,
            "best_residual": p.best_residual,
            "best_projective_residual": p.best_projective_residual,
            "eigenvalue": p.eigenvalue, "coefficients": p.coefficients,
            "failure": p.failure,
            "certificate": None if p.certificate is None else certificate_to_dict(p.certificate)})
    return {"config": report.config.as_dict(), "n_cells": report.n_cells,
            "best": None if best is None else {"index": best.index,
                                               "residual": best.best_residual},
            "points": points}


TRACE_COLUMNS = ("step", "residual", "M", "m", "phi", "coeff_sum")


def trace_to_csv(trace):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for rec in trace.records:
        row = [rec.step] + [format(x, ".17g") for x in
                            (rec.residual, rec.M, rec.m, rec.phi, rec.coeff_sum)]
        writer.writerow(row)
    return buf.getvalue()
