"""Command-line front end: ``fundtriples <command> ...``.

Exit codes: 0 member or compatible, 1 not, 2 bad input or arguments,
3 the requested test does not apply to this input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import constraints as C
from . import document as D
from . import epipolar as E
from . import smallalg as sa
from .camera import PRIORS, dimension_estimate, mega_matrix, rescale, sample_triple
from .errors import DocumentError, RankError, TripleError

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INAPPLICABLE = 0, 1, 2, 3

VERDICT_EXIT = {
    C.Verdict.Member: EXIT_OK,
    C.Verdict.NonMember: EXIT_NO,
    C.Verdict.LocallyConsistent: EXIT_OK,
    C.Verdict.Inconsistent: EXIT_NO,
    E.HZVerdict.Compatible: EXIT_OK,
    E.HZVerdict.Incompatible: EXIT_NO,
    E.HZVerdict.Inapplicable: EXIT_INAPPLICABLE,
}


class UsageError(Exception):
    pass


def _emit(obj, out=None) -> None:
    text = D.dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_doc(path: str) -> D.TripleDocument:
    if path == "-":
        return D.loads(sys.stdin.read())
    return D.load(path)


def _vec(v) -> list:
    return D.vector_to_json(v)


# ----------------------------------------------------------------- commands

def cmd_sample(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be positive")
    docs = []
    for n in range(args.count):
        ct, t = sample_triple(args.prior, args.seed + n, args.field, args.collinear)
        docs.append(D.TripleDocument(t, ct, {"prior": ct.prior, "seed": args.seed + n}))
    if args.output is None:
        if len(docs) == 1:
            sys.stdout.write(D.dumps(docs[0]))
        else:
            sys.stdout.write(D.dumps({"documents": [d.to_dict() for d in docs]}))
    elif len(docs) == 1 and not os.path.isdir(args.output):
        D.dump(docs[0], args.output)
    else:
        os.makedirs(args.output, exist_ok=True)
        for n, doc in enumerate(docs):
            D.dump(doc, os.path.join(args.output, f"triple_{args.seed + n:06d}.json"))
    return EXIT_OK


def cmd_check(args) -> int:
    t = _read_doc(args.input).triple
    if args.mode == "F":
        verdict, report = C.classify_F(t, args.tol)
        out = D.constraint_report_to_dict(report, verdict)
    elif args.mode == "E-local":
        verdict, report = C.classify_E_local(t, args.tol)
        out = D.constraint_report_to_dict(report, verdict)
    else:
        verdict = E.hz_compatible(t, args.tol)
        out = {"verdict": verdict.value}
        if verdict is E.HZVerdict.Inapplicable:
            out["reason"] = _hz_reason(t, args.tol)
        else:
            tt = t if t.exact else t.normalized()
            res = E.triangulation_residuals(tt, E.epipoles(tt, args.tol))
            out["triangulation_residuals"] = _vec(res)
    out = {"mode": args.mode, **out}
    _emit(out)
    return VERDICT_EXIT[verdict]


def _hz_reason(t, tol) -> str:
    try:
        e = E.epipoles(t, tol)
    except RankError as exc:
        return f"rank: {exc}"
    return f"epipoles {E.collinearity_status(e, tol).value.lower()}"


def _distinct(points, tol) -> int:
    reps = []
    for p in points:
        if not any(sa.proj_equal(p, q, tol) for q in reps):
            reps.append(p)
    return len(reps)


def cmd_epipoles(args) -> int:
    t = _read_doc(args.input).triple
    try:
        e = E.epipoles(t, args.tol)
    except RankError as exc:
        _emit({"error": "RankError", "factor": exc.factor, "detail": str(exc)})
        return EXIT_INAPPLICABLE
    tt = t if t.exact else t.normalized()
    out = {
        "epipoles": {f"e{i}{j}": _vec(v) for (i, j), v in e.items()},
        "distinct": _distinct([v for _, v in e.items()], args.tol),
        "collinearity": E.collinearity_status(e, args.tol).value,
        "triangulation_residuals": _vec(E.triangulation_residuals(tt, e)),
        "line_membership": {f"{i}{j}{k}": ok for (i, j, k), ok in
                            zip(E.LINE_RELATIONS, E.line_membership_check(t, e, args.tol))},
    }
    _emit(out)
    return EXIT_OK


def _parse_scales(text: str | None, exact: bool):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--scales needs three comma-separated values")
    try:
        vals = [Fraction(p.strip()) if exact else complex(float(Fraction(p.strip())))
                for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --scales value: {exc}") from exc
    if any(v == 0 for v in vals):
        raise UsageError("--scales must be nonzero")
    return vals


def cmd_megarank(args) -> int:
    t = _read_doc(args.input).triple
    scales = _parse_scales(args.scales, t.exact)
    if scales is not None:
        t = rescale(t, *scales)
    tt = t if t.exact else t.normalized()
    M = mega_matrix(tt)
    out = {"exact": tt.exact}
    if tt.exact:
        out["rank"] = sa.exact_rank(M)
    else:
        s = np.linalg.svd(M, compute_uv=False)
        out["rank"] = int(np.sum(s > args.tol * s[0]))
        out["singular_values"] = [float(x) for x in s]
    report = C.constraint_report(tt, (C.ConstraintFamily.Septics,), args.tol)
    idx = report.nonzero_indices(C.ConstraintFamily.Septics)
    out["nonzero_septics"] = [
        {"index": n, "rows": list(C.SEPTIC_INDICES[n].rows), "cols": list(C.SEPTIC_INDICES[n].cols),
         "value": D.scalar_to_json(report.residuals[C.ConstraintFamily.Septics][n])}
        for n in idx]
    out["rank_at_most_6"] = out["rank"] <= 6
    _emit(out)
    return EXIT_OK if out["rank_at_most_6"] else EXIT_NO


def cmd_discover(args) -> int:
    from .syminterp.discovery import DiscoveryConfig, run_discovery

    if args.config:
        try:
            with open(args.config) as fh:
                cfg = DiscoveryConfig.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
            raise DocumentError(f"bad config {args.config}: {exc}") from exc
        source = args.config
    else:
        cfg = DiscoveryConfig()
        source = None
    if args.threads is not None:
        cfg.threads = args.threads
    report = run_discovery(cfg)
    d = json.loads(report.to_json())
    if source is None:
        d["config_notes"].insert(0, "no config given; built-in defaults used")
    if not args.timings:
        d.pop("timings")
    _emit(d, args.output)
    return EXIT_OK


def cmd_dim(args) -> int:
    print(dimension_estimate(args.prior, trials=args.trials, seed=args.seed))
    return EXIT_OK


# ------------------------------------------------------------------- parser

def _prior(text: str) -> str:
    if text in ("Δ", "delta"):
        text = "Delta"
    if text not in PRIORS:
        raise argparse.ArgumentTypeError(f"prior must be one of {', '.join(PRIORS)}")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fundtriples", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sample", help="sample compatible triples from cameras")
    s.add_argument("--prior", type=_prior, default="F")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--field", choices=sa.FIELDS, default=sa.COMPLEX)
    s.add_argument("--collinear", action="store_true", help="collinear camera centers")
    s.add_argument("--output", "-o", help="file (one document) or directory")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("check", help="test membership or compatibility")
    s.add_argument("input", help="triple document, or - for stdin")
    s.add_argument("--mode", choices=("F", "E-local", "HZ"), default="F")
    s.add_argument("--tol", type=float, default=C.DEFAULT_TOL)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("epipoles", help="epipoles and collinearity diagnostics")
    s.add_argument("input")
    s.add_argument("--tol", type=float, default=E.DEFAULT_TOL)
    s.set_defaults(func=cmd_epipoles)

    s = sub.add_parser("megarank", help="rank of the 9x9 block matrix and its septics")
    s.add_argument("input")
    s.add_argument("--scales", help="per-factor scales u12,u13,u23, e.g. 2,3,5")
    s.add_argument("--tol", type=float, default=C.DEFAULT_TOL)
    s.set_defaults(func=cmd_megarank)

    s = sub.add_parser("discover", help="rediscover the quartic constraints")
    s.add_argument("--config", help="JSON object overriding DiscoveryConfig fields")
    s.add_argument("--output", "-o")
    s.add_argument("--threads", type=int)
    s.add_argument("--timings", action="store_true", help="include wall-clock timings")
    s.set_defaults(func=cmd_discover)

    s = sub.add_parser("dim", help="dimension of a prior's variety from Jacobian ranks")
    s.add_argument("--prior", type=_prior, default="F")
    s.add_argument("--trials", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_dim)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, UsageError) as exc:
        print(f"fundtriples: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankError as exc:
        _emit({"error": "RankError", "factor": exc.factor, "detail": str(exc)})
        return EXIT_INAPPLICABLE
    except TripleError as exc:
        print(f"fundtriples: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
