"""
Searching for eigenforms over a weight grid
===========================================

The same budget (3 weight levels, 200 steps, tolerance 1e-10) on the
interval, the 3-gasket and the ring.
"""

# %%
from fracform import SearchConfig, build_counterexample, build_gasket, search_eigenform

config = SearchConfig(levels=3, max_steps=200, tol=1e-10)
for name, T in [("interval", build_gasket(2)), ("3-gasket", build_gasket(3)),
                ("ring", build_counterexample())]:
    report = search_eigenform(T, config)
    best = report.best
    print(f"{name:9s} {len(report.points):3d} points  best residual {best.best_residual:.2e}"
          f"  projective {best.best_projective_residual:.3g}  eigenvalue {best.eigenvalue:.6g}")
    if report.certificates:
        ok = all(c.is_valid() for c in report.certificates)
        print(f"          certificates attached: {len(report.certificates)}, all valid: {ok}")
