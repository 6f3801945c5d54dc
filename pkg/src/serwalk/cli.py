"""serwalk command line: generate walks, rearrange, verify, plot.

Exit codes: 0 success, 1 property failure, 2 usage or input error.
Outputs are deterministic for a fixed argument list (including --seed);
no timestamps or machine state leak into any artifact.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from contextlib import contextmanager

from . import analysis, rearrange, seqspace, traceio, walks
from .core import EUCLIDEAN, PointSample

log = logging.getLogger("serwalk")

PASS, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _setup_logging():
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(os.environ.get("SERWALK_LOG", "error"))
    if level is None:
        level = logging.ERROR
    logging.basicConfig(level=level, format="%(levelname)s %(message)s")


@contextmanager
def _out_stream(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fp:
            yield fp


def _write_manifest(path, args):
    if path in (None, "-"):
        return
    manifest = {k: v for k, v in sorted(vars(args).items())
                if k != "func" and v is not None}
    with open(path + ".manifest.json", "w") as fp:
        json.dump(manifest, fp, indent=1, sort_keys=True)
        fp.write("\n")


def _load_walk(path):
    try:
        with open(path) as fp:
            head = fp.read(1)
            fp.seek(0)
            if head == "{":
                return traceio.read_walk_jsonl(fp)
            return traceio.read_walk_csv(fp)
    except (OSError, ValueError, KeyError) as err:
        raise UsageError(f"cannot read trace {path}: {err}") from err


def _load_sample(path):
    try:
        with open(path) as fp:
            return traceio.read_sample_csv(fp)
    except (OSError, ValueError) as err:
        raise UsageError(f"cannot read sample {path}: {err}") from err


def _parse_floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# generate

def cmd_generate(args) -> int:
    name = args.generator
    sparse = None
    walk = None
    terms = None
    if name == "two-lines":
        walk = walks.gen_two_lines(args.phases)
    elif name == "halflines":
        abscissae = (_parse_floats(args.abscissae) if args.abscissae
                     else list(range(args.phases + 1)))
        walk = walks.gen_halflines(abscissae, args.phases)
    elif name == "chainable":
        if not args.target:
            raise UsageError("chainable needs --target")
        walk = walks.build_chainable_walk(list(_load_sample(args.target)),
                                          args.phases)
    elif name == "unbounded":
        radii = _parse_floats(args.radii) if args.radii else [2.0, 3.0, 4.0]
        comps = _demo_components(max(radii))
        walk = walks.build_unbounded_components_walk(comps, radii, args.phases)
    elif name == "c0-two-point":
        walk, sparse = seqspace.gen_c0_two_point(args.phases), True
    elif name == "c0-singleton":
        walk, sparse = seqspace.gen_c0_singleton_divergent(args.phases), True
    elif name == "no-rp":
        series, _ = seqspace.gen_no_rp_series(args.kmax)
        terms = series.terms
    else:
        raise UsageError(f"unknown generator {name!r}")

    with _out_stream(args.out) as fp:
        if terms is not None:
            traceio.write_terms_json(terms, fp)
        elif sparse:
            traceio.write_walk_jsonl(walk, fp)
        elif args.format == "svg":
            traceio.write_walk_svg(walk, fp)
        else:
            traceio.write_walk_csv(walk, fp)
    _write_manifest(args.out, args)
    log.info("generated %s (%d sums)", name, 0 if walk is None else len(walk))
    return PASS


def _demo_components(top):
    seg = [(-1.0, 0.1 * i) for i in range(int(top * 10) + 1)]
    seg2 = [(1.0, 0.1 * i) for i in range(int(top * 10) + 1)]
    return [PointSample(tuple(seg), "left"), PointSample(tuple(seg2), "right")]


# ---------------------------------------------------------------------------
# rearrange

def cmd_rearrange(args) -> int:
    if args.stages < 1:
        raise UsageError("stages must be >= 1")
    if not args.target:
        raise UsageError("rearrange needs --target")
    target = _load_sample(args.target)
    dim = len(target.points[0])
    series = rearrange.full_range_series(dim, args.terms)
    rng = random.Random(args.seed)
    try:
        tau, walk, reports = rearrange.rearrange_to_limit_set(
            series, target, args.stages, rng=rng)
    except (ValueError, AssertionError) as err:
        print(f"rearrangement failed: {err}", file=sys.stderr)
        return FAIL
    base = args.out or "rearranged"
    with open(base + ".csv", "w") as fp:
        traceio.write_walk_csv(walk, fp)
    with open(base + ".perm.json", "w") as fp:
        json.dump({"images": tau.images}, fp)
        fp.write("\n")
    report = {"stages": reports}
    if len(target.points) == 1:
        check = analysis.singleton_convergence_check(walk, 2.0 ** -args.stages)
        report["convergence"] = check["verdict"]
    with open(base + ".report.json", "w") as fp:
        json.dump(report, fp, indent=1)
        fp.write("\n")
    _write_manifest(base, args)
    return PASS


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    what = args.check
    if what == "estimate":
        walk = _load_walk(args.input)
        est = analysis.estimate_limit_set(walk, window_fraction=args.window,
                                          resolution=args.resolution)
        report = traceio.estimate_report(est)
        with _out_stream(args.out) as fp:
            json.dump(report, fp, indent=1)
            fp.write("\n")
        return PASS
    if what == "dichotomy":
        walk = _load_walk(args.input)
        est = analysis.estimate_limit_set(walk, window_fraction=args.window,
                                          resolution=args.resolution)
        bound = args.bound
        if bound is None:
            from .core import norm
            bound = max(norm(p, est.kind) for p in est.points)
        report = analysis.verify_dichotomy(est, args.gap, bound)
        out = traceio.estimate_report(est, {"dichotomy": report["verdict"]})
        with _out_stream(args.out) as fp:
            json.dump(out, fp, indent=1)
            fp.write("\n")
        print(report["verdict"])
        return FAIL if report["verdict"] == analysis.VIOLATION else PASS
    if what == "singleton":
        walk = _load_walk(args.input)
        res = analysis.singleton_convergence_check(walk, args.tol)
        print(res["verdict"])
        return PASS if res["verdict"] != "not-singleton" else FAIL
    if what == "cauchy":
        walk = _load_walk(args.input)
        res = analysis.cauchy_diagnostic(walk)
        print(json.dumps({"max_gap": res["max_gap"]}))
        return PASS
    if what == "vector-family":
        fam = seqspace.gen_vector_family(args.k)
        ok = (fam.check_unit_norms() and fam.check_zero_sum()
              and fam.check_prefix_lower_bound())
        print("pass" if ok else "fail")
        return PASS if ok else FAIL
    if what == "rp-instance":
        try:
            with open(args.input) as fp:
                terms = traceio.read_terms_json(fp)
        except (OSError, ValueError, KeyError) as err:
            raise UsageError(f"cannot read terms {args.input}: {err}") from err
        kind = "sup" if hasattr(terms[0], "entries") else EUCLIDEAN
        prefix = min(len(terms), args.prefix)
        order = rearrange.find_balanced_permutation(
            terms[:prefix], args.epsilon,
            "exhaustive" if prefix <= 10 else "greedy", kind=kind,
            rng=random.Random(args.seed))
        if order is None:
            print("no balanced permutation")
            return FAIL
        print(json.dumps({"order": order}))
        return PASS
    raise UsageError(f"unknown verifier {what!r}")


# ---------------------------------------------------------------------------
# plot

def cmd_plot(args) -> int:
    walk = _load_walk(args.input)
    if hasattr(walk.sums[0], "entries") or len(walk.sums[0]) != 2:
        raise UsageError("plotting needs a 2-D dense trace")
    marks = list(_load_sample(args.marks)) if args.marks else None
    with _out_stream(args.out) as fp:
        traceio.write_walk_svg(walk, fp, marks=marks)
    return PASS


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="serwalk",
                                 description="rearranged-series walk toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a canonical walk trace")
    g.add_argument("generator", choices=["two-lines", "halflines", "chainable",
                                         "unbounded", "c0-two-point",
                                         "c0-singleton", "no-rp"])
    g.add_argument("--phases", type=int, default=3)
    g.add_argument("--kmax", type=int, default=1)
    g.add_argument("--abscissae")
    g.add_argument("--radii")
    g.add_argument("--target")
    g.add_argument("--out")
    g.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("rearrange", help="steer a full-sum-range series onto a target")
    r.add_argument("--target", required=True)
    r.add_argument("--stages", type=int, default=5)
    r.add_argument("--terms", type=int, default=80000)
    r.add_argument("--out")
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_rearrange)

    v = sub.add_parser("verify", help="run a property verifier")
    v.add_argument("check", choices=["estimate", "dichotomy", "singleton",
                                     "cauchy", "vector-family", "rp-instance"])
    v.add_argument("--input")
    v.add_argument("--epsilon", type=float, default=1.0)
    v.add_argument("--resolution", type=float, default=0.1)
    v.add_argument("--window", type=float, default=0.3)
    v.add_argument("--gap", type=float, default=0.9)
    v.add_argument("--bound", type=float)
    v.add_argument("--tol", type=float, default=0.1)
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--prefix", type=int, default=10)
    v.add_argument("--out")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a 2-D trace as SVG")
    p.add_argument("--input", required=True)
    p.add_argument("--marks")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    _setup_logging()
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(str(err), file=sys.stderr)
        return USAGE
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
