"""Command-line front end: read CNF / graph / subset-sum files, run a
reduction or experiment, write a JSON or CSV report, and render a matplotlib
figure next to the report where a plot makes sense.

Exit codes: 0 success, 1 instance too large for the requested procedure,
2 malformed input or bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import geometry, grassmann, misc_encodings, optimize, sat_encode, srg, subset_sum
from .errors import InstanceTooLarge, NpforgeError, ParseError

SCHEMA = "npforge/1"


class OracleMismatch(NpforgeError):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}")


def _write_json(path: Optional[str], payload: dict, summary: str):
    payload = {"schema": SCHEMA, **payload}
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(summary)


def _figure_path(out: Optional[str], suffix: str) -> Optional[str]:
    if not out:
        return None
    stem, _ = os.path.splitext(out)
    return f"{stem}.{suffix}.png"


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("NPFORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ParseError(f"NPFORGE_THREADS={env!r} is not an integer")
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# subcommands


def cmd_encode(args) -> None:
    f = sat_encode.parse_dimacs(_read(args.input))
    enc = sat_encode.ENCODERS[args.method](f)
    if args.oracle:
        sat = sat_encode.sat_oracle(f) is not None
        if (sat_encode.lattice_min(enc) == 0) != sat:
            raise OracleMismatch("encoding minimum disagrees with the SAT oracle")
    payload = {
        "command": "encode",
        "method": args.method,
        "degree": enc.poly.degree(),
        "original_vars": enc.original_vars,
        "aux_vars": enc.aux_vars,
        "var_names": enc.var_names,
        "polynomial": enc.poly.to_json_dict(),
    }
    _write_json(args.out, payload,
                f"encoded {args.input} with {args.method}: degree "
                f"{enc.poly.degree()}, {enc.original_vars}+{enc.aux_vars} vars")


def _plane_from_cnf(path: str):
    f = sat_encode.parse_dimacs(_read(path))
    enc = sat_encode.encode_quadratic(f)
    q = geometry.to_quadratic_form(enc.poly)
    return f, enc, geometry.reduce_plane(q)


def cmd_reduce_plane(args) -> None:
    f, enc, res = _plane_from_cnf(args.input)
    if isinstance(res, geometry.NoZero):
        payload = {"command": "reduce-plane", "verdict": "NoZero",
                   "reason": res.reason}
        _write_json(args.out, payload, "no zero: formula is unsatisfiable")
        return
    n = enc.original_vars + enc.aux_vars
    if args.oracle:
        sat = sat_encode.sat_oracle(f) is not None
        hit = geometry.plane_hypercube_oracle(res, n) is not None
        if sat != hit:
            raise OracleMismatch("plane-lattice intersection disagrees with SAT oracle")
    payload = {"command": "reduce-plane", "verdict": "Plane",
               "num_vars": n, **geometry.plane_to_json_dict(res)}
    _write_json(args.out, payload,
                f"plane with {res.d} rows in {n} variables")


def cmd_reduce_sphere(args) -> None:
    f, enc, res = _plane_from_cnf(args.input)
    n = enc.original_vars + enc.aux_vars
    if isinstance(res, geometry.NoZero):
        payload = {"command": "reduce-sphere", "verdict": "NoZero",
                   "reason": res.reason}
        _write_json(args.out, payload, "no zero: formula is unsatisfiable")
        return
    sph = geometry.plane_to_sphere(res, n)
    if isinstance(sph, geometry.EmptyIntersection):
        payload = {"command": "reduce-sphere", "verdict": "EmptyIntersection",
                   "reason": sph.reason}
        _write_json(args.out, payload, "sphere construction: empty intersection")
        return
    if args.oracle:
        sat = sat_encode.sat_oracle(f) is not None
        hit = geometry.sphere_hypercube_oracle(sph) is not None
        if sat != hit:
            raise OracleMismatch("sphere-lattice intersection disagrees with SAT oracle")
    payload = {"command": "reduce-sphere", "verdict": "Sphere",
               **geometry.sphere_to_json_dict(sph)}
    _write_json(args.out, payload, f"sphere in {sph.num_vars} dimensions")


def cmd_pack_ss(args) -> None:
    f, enc, res = _plane_from_cnf(args.input)
    if isinstance(res, geometry.NoZero):
        payload = {"command": "pack-ss", "verdict": "NoZero", "reason": res.reason}
        _write_json(args.out, payload, "no zero: formula is unsatisfiable")
        return
    packed = geometry.pack_subset_sum(res)
    if args.oracle:
        sat = sat_encode.sat_oracle(f) is not None
        solvable = subset_sum.subset_sum_solvable(packed.instance)
        if sat != solvable:
            raise OracleMismatch("packed subset-sum disagrees with SAT oracle")
    payload = {
        "command": "pack-ss",
        "verdict": "Packed",
        "base": str(packed.base),
        "num_rows": packed.num_rows,
        "values": [str(v) for v in packed.values],
        "target": str(packed.target),
    }
    _write_json(args.out, payload,
                f"packed {len(packed.values)} values, base {packed.base}")


def cmd_subsetsum(args) -> None:
    inst = subset_sum.parse_instance_file(_read(args.input))
    norm = subset_sum.normalize(inst)
    si = norm.signed
    zero_count = subset_sum.brute_force_zero(si)
    integral = subset_sum.cosine_integral(si)
    expected = subset_sum.expected_integral(si)
    if args.oracle and abs(integral - expected) > 1e-8 * (1 + 2 * math.pi):
        raise OracleMismatch("cosine integral disagrees with the counting formula")
    probe = subset_sum.inverse_square_probe(si)
    payload = {
        "command": "subsetsum",
        "values": inst.values,
        "target": inst.target,
        "normalized_values": si.values,
        "dropped_zeros": norm.dropped_zeros,
        "zero_sign_count": zero_count,
        "solvable": subset_sum.subset_sum_solvable(inst),
        "cosine_integral": integral,
        "expected_integral": expected,
        "power_sums": {f"t{k}": subset_sum.power_sum_identity(k, si)
                       for k in (0, 2, 4, 6)},
        "inverse_square_probe": (probe if isinstance(probe, str)
                                 else f"{probe.numerator}/{probe.denominator}"),
    }
    fig = _figure_path(args.out, "cosine")
    if fig:
        total = sum(si.values)
        phi = np.linspace(0, 2 * math.pi, max(512, 8 * total))
        vals = np.prod(np.cos(np.outer(phi, si.values)), axis=1)
        plt.figure(figsize=(7, 3))
        plt.plot(phi, vals, lw=0.8)
        plt.axhline(0, color="gray", lw=0.5)
        plt.xlabel("phi")
        plt.ylabel("product of cosines")
        plt.title(f"mean = {integral / (2 * math.pi):.3e}")
        plt.tight_layout()
        plt.savefig(fig, dpi=120)
        plt.close()
        payload["figure"] = fig
    _write_json(args.out, payload,
                f"zero-sign count {zero_count}, integral {integral:.6e}")


def cmd_hamilton(args) -> None:
    g = grassmann.parse_graph(_read(args.input))
    report = grassmann.graph_report(g)
    if args.oracle and grassmann.derivative_trace(g) != report["trace"]:
        raise OracleMismatch("walk-sum trace disagrees with the subset-DP count")
    payload = {"command": "hamilton", **report}
    _write_json(args.out, payload,
                f"n={report['n']}: trace {report['trace']}, "
                f"{report['directed_cycles']} directed cycles")


def _load_objective(args):
    """CNF path plus --method gives an encoded formula; a .json path is read
    as a serialized polynomial."""
    if args.input.endswith(".json"):
        from .polynomial import SparsePolynomial
        raw = json.loads(_read(args.input))
        return SparsePolynomial.from_json_dict(raw.get("polynomial", raw)), None
    f = sat_encode.parse_dimacs(_read(args.input))
    enc = sat_encode.ENCODERS[args.method](f)
    return enc.poly, f


def _config(args) -> optimize.OptimizerConfig:
    if args.config:
        cfg = optimize.OptimizerConfig.from_file(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        return cfg
    return optimize.OptimizerConfig(seed=args.seed or 0)


def cmd_optimize(args) -> None:
    poly, formula = _load_objective(args)
    cfg = _config(args)
    reports, summary = optimize.multi_start(poly, args.starts, cfg, formula=formula)
    if args.oracle and formula is not None:
        sat = sat_encode.sat_oracle(formula) is not None
        if summary["zero_found"] and not sat:
            raise OracleMismatch("descent reported a zero on an unsatisfiable formula")
    best = min(reports, key=lambda r: r.final_value)
    payload = {
        "command": "optimize",
        "config": cfg.to_dict(),
        "starts": args.starts,
        "summary": summary,
        "best": best.to_dict(),
    }
    if args.out:
        log_path = os.path.splitext(args.out)[0] + ".runs.csv"
        with open(log_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["start_index", "final_value", "iters", "verdict"])
            for i, r in enumerate(reports):
                w.writerow([i, repr(r.final_value), r.iters, r.verdict])
        payload["run_log"] = log_path
        fig = _figure_path(args.out, "values")
        plt.figure(figsize=(6, 3))
        plt.plot(sorted(r.final_value for r in reports), marker=".", lw=0.7)
        plt.xlabel("run (sorted)")
        plt.ylabel("final value")
        plt.yscale("symlog", linthresh=1e-12)
        plt.tight_layout()
        plt.savefig(fig, dpi=120)
        plt.close()
        payload["figure"] = fig
    _write_json(args.out, payload,
                f"best value {summary['best_value']:.3e} over {args.starts} starts, "
                f"{summary['distinct_minima']} distinct minima")


def cmd_census(args) -> None:
    poly, _ = _load_objective(args)
    cfg = _config(args)
    count, reps = optimize.local_minima_census(poly, args.samples, cfg)
    payload = {
        "command": "census",
        "config": cfg.to_dict(),
        "samples": args.samples,
        "count": count,
        "representatives": [[float(v) for v in r] for r in reps],
    }
    fig = _figure_path(args.out, "census")
    if fig and reps:
        pts = np.array(payload["representatives"])
        plt.figure(figsize=(4, 4))
        if pts.shape[1] >= 2:
            plt.scatter(pts[:, 0], pts[:, 1], s=18)
            plt.xlabel("x0")
            plt.ylabel("x1")
        else:
            plt.scatter(pts[:, 0], np.zeros(len(pts)), s=18)
            plt.xlabel("x0")
        plt.title(f"{count} local minima")
        plt.tight_layout()
        plt.savefig(fig, dpi=120)
        plt.close()
        payload["figure"] = fig
    _write_json(args.out, payload, f"{count} local minima from {args.samples} starts")


def cmd_srg(args) -> None:
    if args.input and args.second:
        g1 = grassmann.parse_graph(_read(args.input))
        g2 = grassmann.parse_graph(_read(args.second))
        names = (args.input, args.second)
    else:
        g1, g2 = srg.generate_srg_pair_16()
        names = ("rooks_4x4", "shrikhande")
    v1 = srg.invariant_vector(g1, kmax=args.kmax)
    v2 = srg.invariant_vector(g2, kmax=args.kmax)
    report = srg.compare_invariants(v1, v2)
    if args.oracle and g1.n == g2.n == 16:
        structurally_distinct = srg.local_structure_distinct(g1, g2)
        report["local_structure_distinct"] = structurally_distinct
    payload = {"command": "srg", "graphs": list(names), **report}
    if args.out:
        csv_path = os.path.splitext(args.out)[0] + ".invariants.csv"
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["graph", "invariant", "value"])
            for name, vec in zip(names, (v1, v2)):
                for label, value in vec:
                    w.writerow([name, label, repr(value)])
        payload["invariant_csv"] = csv_path
        fig = _figure_path(args.out, "invariants")
        labels = [lab for lab, _ in v1]
        x = np.arange(len(labels))
        plt.figure(figsize=(max(6, 0.45 * len(labels)), 3.5))
        plt.bar(x - 0.2, [abs(v) + 1e-300 for _, v in v1], width=0.4, label=names[0])
        plt.bar(x + 0.2, [abs(v) + 1e-300 for _, v in v2], width=0.4, label=names[1])
        plt.yscale("log")
        plt.xticks(x, labels, rotation=60, ha="right", fontsize=7)
        plt.ylabel("|invariant|")
        plt.legend()
        plt.tight_layout()
        plt.savefig(fig, dpi=120)
        plt.close()
        payload["figure"] = fig
    _write_json(args.out, payload,
                f"verdict {report['verdict']}, max relative delta "
                f"{report['max_rel_delta']:.3e}")


def cmd_misc(args) -> None:
    if args.op == "factor":
        if args.n is None:
            raise ParseError("--n required for op factor")
        x, v = misc_encodings.factorization_grid_max(args.n)
        payload = {"command": "misc", "op": "factor", "n": args.n,
                   "best_x": x, "best_value": v,
                   "at_max": bool(abs(v - 2) < 1e-9)}
        summary = f"objective peak {v:.6f} at x={x}"
    elif args.op == "monomials":
        f = sat_encode.parse_dimacs(_read(args.input))
        count = misc_encodings.sat_monomial_count(f)
        if args.oracle and count != misc_encodings.sat_monomial_brute(f):
            raise OracleMismatch("monomial count disagrees with direct enumeration")
        payload = {"command": "misc", "op": "monomials",
                   "count": str(count), "satisfiable": count > 0}
        summary = f"monomial count {count} ({'SAT' if count > 0 else 'UNSAT'})"
    elif args.op == "coloring":
        g = grassmann.parse_graph(_read(args.input))
        best, angles = misc_encodings.coloring_descent(g, seed=args.seed or 0)
        colors = misc_encodings.round_to_coloring(angles)
        proper = misc_encodings.is_proper_coloring(g, colors)
        if args.oracle and best < 1e-12 and not proper:
            raise OracleMismatch("zero objective did not round to a proper coloring")
        payload = {"command": "misc", "op": "coloring",
                   "best_value": best, "colors": colors, "proper": proper}
        summary = f"best objective {best:.3e}, proper coloring: {proper}"
    else:
        raise ParseError(f"unknown misc op {args.op!r}")
    _write_json(args.out, payload, summary)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="npforge",
                                 description="boolean-problem reductions and experiments")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("input", help="input file")
        p.add_argument("--out", help="report file (JSON); figures and CSV "
                                     "land next to it")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--oracle", action="store_true",
                       help="also run the brute-force verifier and fail on disagreement")
        p.add_argument("--threads", type=int, default=None,
                       help="worker cap (NPFORGE_THREADS as fallback)")

    p = sub.add_parser("encode", help="CNF to nonnegative polynomial")
    p.add_argument("--method", choices=sorted(sat_encode.ENCODERS), default="deg4")
    common(p)
    p.set_defaults(func=cmd_encode)

    for name, fn, hlp in [("reduce-plane", cmd_reduce_plane, "CNF to plane system"),
                          ("reduce-sphere", cmd_reduce_sphere, "CNF to sphere"),
                          ("pack-ss", cmd_pack_ss, "CNF to packed subset-sum")]:
        p = sub.add_parser(name, help=hlp)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("subsetsum", help="subset-sum identities and integral")
    common(p)
    p.set_defaults(func=cmd_subsetsum)

    p = sub.add_parser("hamilton", help="Hamilton cycle detection via walk traces")
    common(p)
    p.set_defaults(func=cmd_hamilton)

    p = sub.add_parser("optimize", help="multi-start descent on an encoding")
    p.add_argument("--method", choices=sorted(sat_encode.ENCODERS), default="deg6")
    p.add_argument("--starts", type=int, default=50)
    p.add_argument("--config", help="optimizer config JSON")
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("census", help="local minima census")
    p.add_argument("--method", choices=sorted(sat_encode.ENCODERS), default="deg6")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--config", help="optimizer config JSON")
    common(p)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("srg", help="strongly regular graph invariant comparison")
    p.add_argument("input", nargs="?", help="first graph (default: built-in pair)")
    p.add_argument("second", nargs="?", help="second graph")
    p.add_argument("--kmax", type=int, default=8)
    common(p, needs_input=False)
    p.set_defaults(func=cmd_srg)

    p = sub.add_parser("misc", help="factorization / monomial count / coloring")
    p.add_argument("--op", choices=["factor", "monomials", "coloring"], required=True)
    p.add_argument("--n", type=int, help="number to factor (op=factor)")
    p.add_argument("input", nargs="?", help="input file (monomials, coloring)")
    common(p, needs_input=False)
    p.set_defaults(func=cmd_misc)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        threads = _resolve_threads(args)
        os.environ.setdefault("OMP_NUM_THREADS", str(threads))
        args.func(args)
        return 0
    except InstanceTooLarge as exc:
        print(f"error: instance too large: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OracleMismatch as exc:
        print(f"oracle mismatch: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
