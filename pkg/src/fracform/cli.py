"""``fracform`` command line.

Exit status: 0 success, 1 usage error, 2 invalid input, 3 numerical
failure, 4 a certificate broke its invariants.
"""

import argparse
import logging
import sys
from importlib.metadata import PackageNotFoundError, version

from . import io
from .eigenflow import IterationFailure, SearchConfig, iterate, search_eigenform
from .errors import InvalidTriple, NumericalFailure, ReducibleForm
from .forms import DirichletForm, effective_conductivity
from .obstruction import certify_no_eigenform
from .renorm import renormalize
from .triples import build_counterexample, build_gasket

EXIT_USAGE, EXIT_INVALID, EXIT_NUMERIC, EXIT_CERTIFICATE = 1, 2, 3, 4

EXPLAIN = {
    "block_weight": "w = max over blocks h=0..9 of min(r_{2h+1}, r_{2h+2}); "
                    "block h attains it, so r_{2h+1} >= w and r_{2h+2} >= w, "
                    "and every block has some weight <= w.",
    "block": "smallest block index h in 0..9 with min(r_{2h+1}, r_{2h+2}) = w.",
    "far_label": "smallest label l with C(E; l, l+10) >= C(E; l', l'+10) for all l'.",
    "near_ratio": "C(Lambda_r E; 2h+1, 2h+2) / C(E; 2h+1, 2h+2) >= w / 2, "
                  "since any admissible level-1 function costs at least "
                  "w (t^2 + (1-t)^2) C(E; 2h+1, 2h+2) on the two cells of block h.",
    "far_ratio": "C(Lambda_r E; l, l+10) / C(E; l, l+10) at the far label, bounded by "
                 "(sum_{i=1..9} 1/r_{l+i})^-1 + (sum_{i=1..9} 1/r_{l+10+i})^-1 < w / 2.",
    "far_ratios": "C(Lambda_r E; l, l+10) / max_l' C(E; l', l'+10) for l = 1..20, "
                  "each strictly below w / 2.",
    "near_margin": "near_ratio - w / 2 >= 0.",
    "far_margin": "w / 2 - far_ratio > 0.",
    "worst_far_margin": "w / 2 - max(far_ratios) > 0.",
    "fixed_point": "Lambda_r E = E would force near_ratio = far_ratio = 1, "
                   "i.e. w <= 2 and w > 2 simultaneously.",
}


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _package_version():
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def _load_triple(path):
    return io.triple_from_dict(io.read_json(path))


def _load_form(path):
    return io.form_from_dict(io.read_json(path))


def _load_weights(path):
    return io.weights_from_dict(io.read_json(path))


def cmd_triple_build(args):
    if args.kind == "counterexample":
        T = build_counterexample()
    else:
        if args.n is None:
            raise _Usage("--n is required for --kind gasket")
        T = build_gasket(args.n)
    _emit(io.dumps(io.triple_to_dict(T)), args.output)
    return 0


def cmd_triple_validate(args):
    T = _load_triple(args.path)
    print(f"valid: N={T.n_boundary} k={T.n_cells} |V1|={T.n_level1}")
    return 0


def cmd_form_unit(args):
    _emit(io.dumps(io.form_to_dict(DirichletForm.unit(args.n))), args.output)
    return 0


def cmd_form_conductivity(args):
    E = _load_form(args.form)
    try:
        j1, j2 = (int(x) for x in args.pair.split(","))
    except ValueError:
        raise _Usage(f"--pair must look like 'j1,j2', got {args.pair!r}") from None
    print(format(effective_conductivity(E, j1, j2), ".17g"))
    return 0


def cmd_renorm(args):
    T, E, r = _load_triple(args.triple), _load_form(args.form), _load_weights(args.weights)
    _emit(io.dumps(io.form_to_dict(renormalize(T, E, r))), args.output)
    return 0


def cmd_iterate(args):
    T, E, r = _load_triple(args.triple), _load_form(args.form), _load_weights(args.weights)
    status = 0
    try:
        trace = iterate(T, E, r, args.max_steps, args.tol)
    except IterationFailure as exc:
        trace, status = exc.trace, EXIT_NUMERIC
        print(f"numerical failure: {exc}", file=sys.stderr)
    if args.trace:
        _emit(io.trace_to_csv(trace), args.trace)
    if args.output:
        _emit(io.dumps(io.form_to_dict(trace.form)), args.output)
    last = trace.records[-1]
    state = "converged" if trace.converged else "no fixed point found"
    print(f"{state} after {last.step} steps, residual {last.residual:.3e}, "
          f"eigenvalue {last.eigenvalue:.12g}", file=sys.stderr)
    return status


def cmd_search(args):
    T = _load_triple(args.triple)
    config = SearchConfig(levels=args.grid, period=args.period, max_steps=args.max_steps,
                          tol=args.tol, workers=args.workers)
    report = search_eigenform(T, config)
    _emit(io.dumps(io.report_to_dict(report)), args.output)
    print(f"{len(report.points)} grid points, best residual {report.best_residual:.3e}",
          file=sys.stderr)
    return 0


def cmd_certify(args):
    r = None if args.weights is None else _load_weights(args.weights)
    certs = certify_no_eigenform(r, args.samples, args.seed)
    doc = {"seed": args.seed, "samples": args.samples,
           "weights": None if r is None else list(r),
           "certificates": [io.certificate_to_dict(c, args.tol) for c in certs]}
    _emit(io.dumps(doc), args.output)
    bad = [n for n, c in enumerate(certs) if not c.is_valid(args.tol)]
    if bad:
        print(f"certificates violating invariants: {bad}", file=sys.stderr)
        return EXIT_CERTIFICATE
    return 0


def cmd_explain(args):
    if args.field not in EXPLAIN:
        raise _Usage(f"unknown field {args.field!r}; choose from {', '.join(EXPLAIN)}")
    print(f"{args.field}: {EXPLAIN[args.field]}")
    return 0


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _seed(text):
    x = int(text)
    if not 0 <= x < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return x


def build_parser():
    p = _Parser(prog="fracform", description="Renormalization of Dirichlet forms on "
                                             "finitely ramified fractals.")
    p.add_argument("--version", action="version", version=f"fracform {_package_version()}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    triple = sub.add_parser("triple", help="build or validate fractal triples")
    tsub = triple.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = tsub.add_parser("build")
    b.add_argument("--kind", choices=["counterexample", "gasket"], required=True)
    b.add_argument("--n", type=int)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_triple_build)
    v = tsub.add_parser("validate")
    v.add_argument("path")
    v.set_defaults(func=cmd_triple_validate)

    form = sub.add_parser("form", help="boundary forms")
    fsub = form.add_subparsers(dest="action", required=True, parser_class=_Parser)
    u = fsub.add_parser("unit", help="write the complete unit form")
    u.add_argument("--n", type=int, required=True)
    u.add_argument("-o", "--output")
    u.set_defaults(func=cmd_form_unit)
    c = fsub.add_parser("conductivity", help="effective conductivity of a pair")
    c.add_argument("--form", required=True)
    c.add_argument("--pair", required=True)
    c.set_defaults(func=cmd_form_conductivity)

    rn = sub.add_parser("renorm", help="apply the renormalization map once")
    rn.add_argument("--triple", required=True)
    rn.add_argument("--form", required=True)
    rn.add_argument("--weights", required=True)
    rn.add_argument("-o", "--output")
    rn.set_defaults(func=cmd_renorm)

    it = sub.add_parser("iterate", help="normalized fixed-point iteration")
    it.add_argument("--triple", required=True)
    it.add_argument("--form", required=True)
    it.add_argument("--weights", required=True)
    it.add_argument("--max-steps", type=int, default=200)
    it.add_argument("--tol", type=_positive_float, default=1e-10)
    it.add_argument("--trace")
    it.add_argument("-o", "--output")
    it.set_defaults(func=cmd_iterate)

    se = sub.add_parser("search", help="eigenform search over a weight grid")
    se.add_argument("--triple", required=True)
    se.add_argument("--grid", type=int, default=3, help="weight levels per axis")
    se.add_argument("--period", type=int)
    se.add_argument("--max-steps", type=int, default=200)
    se.add_argument("--tol", type=_positive_float, default=1e-10)
    se.add_argument("--workers", type=int, default=1)
    se.add_argument("-o", "--output")
    se.set_defaults(func=cmd_search)

    ce = sub.add_parser("certify", help="obstruction certificates on the ring fractal")
    ce.add_argument("--samples", type=int, default=100)
    ce.add_argument("--seed", type=_seed, default=42)
    ce.add_argument("--weights", help="fixed weights; sampled per form when omitted")
    ce.add_argument("--tol", type=_positive_float, default=1e-9)
    ce.add_argument("-o", "--output")
    ce.set_defaults(func=cmd_certify)

    ex = sub.add_parser("explain", help="print the inequality behind a certificate field")
    ex.add_argument("field")
    ex.set_defaults(func=cmd_explain)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"fracform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidTriple, ReducibleForm) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
