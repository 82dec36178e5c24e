"""Command-line front end.

Exit codes: 0 success, 2 parse or schema error, 3 mathematical
precondition violated, 4 a theorem-level check failed.
"""

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import bounds, graphs, newton, stable
from .errors import ChabautyError, InvariantBreach, PreconditionError, SchemaError
from .exact import (
    DEFAULT_PRECISION, as_rational, format_rational, np_blocks, np_naive,
    np_upper_bound_remark, np_value, safe_cutoff,
)


def _rational(text):
    try:
        return as_rational(text)
    except SchemaError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _plain(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _emit(out, record, fmt, rows=None):
    """Write one record as a key/value table, canonical JSON, or CSV."""
    record = _plain(record)
    if fmt == "json":
        out.write(json.dumps(record, sort_keys=True, indent=2) + "\n")
    elif fmt == "csv":
        rows = rows if rows is not None else [record]
        flat = [_flatten(r) for r in rows]
        header = list(dict.fromkeys(k for r in flat for k in r))
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        out.write(buf.getvalue())
    else:
        for k, v in _flatten(record).items():
            out.write(f"{k:<32} {v}\n")


def _flatten(d, prefix=""):
    flat = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, x in enumerate(v):
                flat.update(_flatten(x, f"{key}.{i}."))
        elif isinstance(v, list):
            flat[key] = " ".join(_cell(x) for x in v)
        else:
            flat[key] = v
    return flat


def _cell(x):
    if isinstance(x, (list, tuple)):
        return "(" + ",".join(str(y) for y in x) + ")"
    return str(x)


def _report_csv_row(report):
    # inputs..., np_calls..., final_bound
    row = dict(report.to_json()["inputs"])
    for i, c in enumerate(report.np_calls):
        for k, v in c.to_json().items():
            row[f"np{i}_{k}"] = v
    row["final_bound"] = report.final_bound
    return row


def _load_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{what} file {path} is not valid JSON: {exc}") from None


def _load_graphs(path):
    """A single JSON graph, or one graph per line (JSONL)."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read graph file {path}: {exc.strerror}") from None
    try:
        return [graphs.MetricGraph.from_json(json.loads(text))]
    except json.JSONDecodeError:
        pass
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(graphs.MetricGraph.from_json(json.loads(line)))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}:{lineno}: not valid JSON: {exc}") from None
    if not out:
        raise SchemaError(f"{path}: no graphs found")
    return out


# -- np ---------------------------------------------------------------------

def cmd_np(args, out):
    if args.r <= 0:
        raise PreconditionError(f"r must be positive, got {format_rational(args.r)}")
    value = np_value(args.p, args.r, args.n0)
    record = {"p": args.p, "r": args.r, "n0": args.n0, "N_p": value}
    if args.show_violations:
        record["violations"] = [{"block": k, "largest_violator": top} for k, top in np_blocks(args.p, args.r, args.n0)]
    if args.remark:
        rb = np_upper_bound_remark(args.p, args.r, args.n0, args.precision)
        record["remark_bound"] = rb.bound
        record["remark_exp_form"] = rb.exp_form
        record["remark_doubled"] = rb.doubled
    if args.check_naive:
        cutoff = safe_cutoff(args.p, args.r, args.n0)
        naive = np_naive(args.p, args.r, args.n0, cutoff)
        record["naive"] = naive
        if naive != value:
            raise InvariantBreach(f"block method {value} disagrees with naive scan {naive}")
    if args.format == "table" and not (args.show_violations or args.remark or args.check_naive):
        out.write(f"{value}\n")
    else:
        _emit(out, record, args.format)
    return 0


# -- bound ------------------------------------------------------------------

def cmd_bound(args, out):
    kind = args.bound_kind
    if kind == "rational":
        rep = bounds.rational_point_bound(args.q, args.e, args.p, args.g, args.use_remark_bound, args.precision)
    elif kind == "torsion":
        rep = bounds.torsion_bound_theorem(args.g, args.p, args.e, args.variant, args.use_remark_bound, args.precision)
    elif kind == "torsion-intro":
        rep = bounds.torsion_bound_intro(args.g, args.d, args.use_remark_bound, args.precision)
    elif kind == "wide-open":
        rep = bounds.wide_open_report(args.deg, args.r, args.g, args.p, args.leaf_free, args.use_remark_bound, args.precision)
    else:
        rep = bounds.annulus_report(args.r, args.g, args.p, args.use_remark_bound, args.precision)
    if not bounds.replay(rep):
        raise InvariantBreach("bound report does not replay")
    if args.format == "csv":
        _emit(out, {}, "csv", rows=[_report_csv_row(rep)])
    else:
        _emit(out, rep.to_json(), args.format)
    return 0


# -- graph ------------------------------------------------------------------

def cmd_graph(args, out):
    if args.graph_cmd == "enumerate":
        for G in stable.enumerate_stable_graphs(args.genus, args.max_genus, args.weight_zero):
            out.write(json.dumps(G.to_json(), separators=(",", ":")) + "\n")
        return 0
    if args.graph_cmd == "stats":
        rows = []
        for G in _load_graphs(args.file):
            st = graphs.stable_stats_check(G)
            if not st.holds:
                raise InvariantBreach(f"stable graph exceeds a combinatorial ceiling: {st}")
            rows.append({"genus": st.genus, "vertices": st.vertices, "edges": st.edges, "loops": st.loops,
                         "max_degree": st.max_degree, "margins": st.margins, "holds": st.holds})
        if args.format == "csv":
            _emit(out, {}, "csv", rows=rows)
        elif args.format == "json" and len(rows) > 1:
            out.write(json.dumps(rows, sort_keys=True, indent=2) + "\n")
        else:
            for row in rows:
                _emit(out, row, args.format)
        return 0
    # check
    G = graphs.MetricGraph.from_json(_load_json(args.file, "graph"))
    record = {"genus": graphs.genus(G), "canonical_divisor": graphs.canonical_divisor(G).to_dict(),
              "genus_zero_leaf": graphs.has_genus_zero_leaf(G)}
    if args.function:
        F = graphs.PLFunction.from_json(G, _load_json(args.function, "function"))
        canonical = graphs.is_canonical_section(F)
        g = record["genus"]
        ceiling = 2 * g - 2 if not record["genus_zero_leaf"] else 2 * g - 1
        slope = graphs.max_abs_slope(F)
        record.update({
            "divisor": graphs.divisor_of(F).to_dict(),
            "is_canonical_section": canonical,
            "max_abs_slope": slope,
            "slope_ceiling": ceiling,
            "slope_bound_verdict": ("holds" if slope <= ceiling else "violated") if canonical else "not applicable",
        })
        if canonical and slope > ceiling:
            raise InvariantBreach(f"canonical section with slope {slope} > {ceiling}")
    _emit(out, record, args.format)
    return 0


# -- newton -----------------------------------------------------------------

def cmd_newton(args, out):
    s = newton.ValuationSeries.from_json(_load_json(args.file, "series"))
    if args.newton_cmd == "slopes":
        if args.r is None:
            raise SchemaError("--r is required")
        n_min, n_max = newton.attaining_set(s, args.r)
        record = {"r": args.r, "F": newton.tropical_eval(s, args.r), "attaining_set": [n_min, n_max],
                  "slope_toward_inner": -n_max, "slope_toward_outer": n_min,
                  "hull_vertices": [[n, v] for n, v in newton.hull_vertices(s)]}
    elif args.newton_cmd == "zeros":
        if args.r1 is not None or args.r2 is not None:
            if args.r1 is None or args.r2 is None:
                raise SchemaError("--r1 and --r2 go together")
            record = {"r1": args.r1, "r2": args.r2, "zeros": newton.zeros_in_subannulus(s, args.r1, args.r2)}
        elif args.r is not None:
            zeros = newton.zeros_in_open_subdisc(s, args.r)
            record = {"r": args.r, "zeros": zeros}
            if any(n > 0 for n in s.terms):
                record["disc_bound"] = newton.disc_zero_bound(s, args.r)
        else:
            raise SchemaError("give --r (disc) or --r1/--r2 (subannulus)")
    else:
        if args.r is None:
            raise SchemaError("--r is required")
        rep = newton.verify_annular_bound(s, args.r)
        record = {"r": args.r, "slope_found": rep.slope_found, "n0": rep.n0, "bound": rep.bound, "holds": rep.holds}
        if not rep.holds:
            raise InvariantBreach(f"annular slope bound failed: {rep}")
    _emit(out, record, args.format)
    return 0


# -- oracle -----------------------------------------------------------------

def cmd_oracle(args, out):
    if args.oracle_cmd == "np":
        cases = mismatches = 0
        for p in (2, 3, 5, 7):
            for den in range(1, args.max_den + 1):
                for num in (1, 2, 3):
                    r = Fraction(num, den)
                    for n0 in range(-3, 21):
                        cases += 1
                        exact = np_value(p, r, n0)
                        if np_naive(p, r, n0, safe_cutoff(p, r, n0)) != exact:
                            mismatches += 1
        _emit(out, {"cases": cases, "mismatches": mismatches}, args.format)
        if mismatches:
            raise InvariantBreach(f"{mismatches} N_p mismatches")
        return 0
    a = stable.enumerate_by_degeneration(args.genus)
    b = stable.enumerate_brute_force(args.genus)
    _emit(out, {"genus": args.genus, "degeneration": len(a), "brute_force": len(b), "agree": a == b}, args.format)
    if a != b:
        raise InvariantBreach("enumeration strategies disagree")
    return 0


def build_parser():
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=["table", "json", "csv"], default="table")
    fmt.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                     help="working bits for certified ln/exp enclosures")

    parser = argparse.ArgumentParser(prog="chabauty-bounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("np", parents=[fmt], help="exact correction function N_p(r, n0)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=_rational, required=True)
    p.add_argument("--n0", type=int, required=True)
    p.add_argument("--show-violations", action="store_true")
    p.add_argument("--remark", action="store_true", help="also print the closed-form upper bounds")
    p.add_argument("--check-naive", action="store_true", help="cross-check against a linear scan")
    p.set_defaults(func=cmd_np)

    b = sub.add_parser("bound", help="uniform bound calculators")
    bsub = b.add_subparsers(dest="bound_kind", required=True)
    common = argparse.ArgumentParser(add_help=False, parents=[fmt])
    common.add_argument("--use-remark-bound", action="store_true",
                        help="use the closed-form upper bound for N_p instead of the exact value")
    x = bsub.add_parser("rational", parents=[common])
    x.add_argument("--q", type=int, required=True)
    x.add_argument("--e", type=int, required=True)
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--g", type=int, required=True)
    x = bsub.add_parser("torsion", parents=[common])
    x.add_argument("--g", type=int, required=True)
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--e", type=int, required=True)
    x.add_argument("--variant", type=int, choices=[1, 2], default=1)
    x = bsub.add_parser("torsion-intro", parents=[common])
    x.add_argument("--g", type=int, required=True)
    x.add_argument("--d", type=int, required=True)
    x = bsub.add_parser("wide-open", parents=[common])
    x.add_argument("--deg", type=int, required=True)
    x.add_argument("--r", type=_rational, required=True)
    x.add_argument("--g", type=int, required=True)
    x.add_argument("--p", type=int, required=True)
    x.add_argument("--leaf-free", action="store_true")
    x = bsub.add_parser("annulus", parents=[common])
    x.add_argument("--r", type=_rational, required=True)
    x.add_argument("--g", type=int, required=True)
    x.add_argument("--p", type=int, required=True)
    b.set_defaults(func=cmd_bound)

    g = sub.add_parser("graph", help="metric graph checks and stable type enumeration")
    gsub = g.add_subparsers(dest="graph_cmd", required=True)
    x = gsub.add_parser("check", parents=[fmt])
    x.add_argument("--file", required=True)
    x.add_argument("--function")
    x = gsub.add_parser("enumerate", parents=[fmt])
    x.add_argument("--genus", type=int, required=True)
    x.add_argument("--max-genus", type=int, default=stable.DEFAULT_MAX_GENUS)
    x.add_argument("--weight-zero", action="store_true", help="only types with all weights 0")
    x = gsub.add_parser("stats", parents=[fmt])
    x.add_argument("--file", required=True)
    g.set_defaults(func=cmd_graph)

    n = sub.add_parser("newton", help="Newton polygon slopes and zero counts")
    nsub = n.add_subparsers(dest="newton_cmd", required=True)
    for name in ("slopes", "zeros", "verify-annulus"):
        x = nsub.add_parser(name, parents=[fmt])
        x.add_argument("--file", required=True)
        x.add_argument("--r", type=_rational)
        if name == "zeros":
            x.add_argument("--r1", type=_rational)
            x.add_argument("--r2", type=_rational)
    n.set_defaults(func=cmd_newton)

    o = sub.add_parser("oracle", help="independent cross-check suites")
    osub = o.add_subparsers(dest="oracle_cmd", required=True)
    x = osub.add_parser("np", parents=[fmt])
    x.add_argument("--max-den", type=int, default=50)
    x = osub.add_parser("enumerate", parents=[fmt])
    x.add_argument("--genus", type=int, choices=[2, 3], default=2)
    o.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ChabautyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
