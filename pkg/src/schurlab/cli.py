"""``schurlab`` command line.

Every command writes one JSON document to stdout and a short summary to
stderr.  Exit codes: 0 completed (counterexamples and discrepant fixtures
included), 1 usage or parse error, 2 numerical failure.
"""

import argparse
import json
import secrets
import sys
import time

import numpy as np

from . import fixtures, io, matmap, preserver, stability
from .config import DEFAULT
from .errors import InputError, NumericalError


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _band(text):
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo,hi") from None
    return lo, hi


def build_parser():
    p = _Parser(prog="schurlab", description="Schur stability certificates and stability-preserver tests.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="stability report for a matrix file")
    c.add_argument("file")
    c.add_argument("--stein", nargs="?", const="I", metavar="RFILE",
                   help="attach a Stein certificate for R (identity if no file given)")
    c.add_argument("--classify", action="store_true", help="attach normaloid/spectraloid classification")
    c.add_argument("--tol", type=float, default=None, help="marginal band around the unit circle")

    m = sub.add_parser("map", help="analyze or test a linear map given as MapSpec JSON")
    m.add_argument("spec")
    m.add_argument("action", choices=["analyze", "apply", "test-into", "test-onto", "test-rho", "restrict-sym"])
    m.add_argument("matrix", nargs="?", help="matrix file (apply only)")
    m.add_argument("--trials", type=int, default=1000)
    m.add_argument("--seed", type=int, default=None)
    m.add_argument("--class", dest="sample_class", default=preserver.GENERAL, choices=preserver.CLASSES)
    m.add_argument("--band", type=_band, default=(0.5, 0.999), help="target spectral radius band lo,hi")

    sub.add_parser("paper-examples", help="recompute the published worked examples")

    b = sub.add_parser("basis", help="basis of Schur stable matrices")
    b.add_argument("space", choices=[matmap.FULL, matmap.SYMMETRIC])
    b.add_argument("n", type=int)
    return p


def cmd_check(args, tol):
    if args.tol is not None:
        tol = tol.with_(marginal_band=args.tol)
    A = io.read_matrix(args.file)
    report = stability.is_schur_stable(A, tol)
    if A.shape == (2, 2):
        report.evidence["schur_2x2"] = stability.schur_2x2(A)
    if args.stein is not None:
        R = np.eye(A.shape[0]) if args.stein == "I" else io.read_matrix(args.stein)
        report.evidence["stein"] = stability.solve_stein(A, R, tol)
    if args.classify:
        report.evidence["aloid"] = stability.classify_aloid(A, tol)
    summary = f"{args.file}: {report.verdict}, rho = {report.spectral_radius:.6g}"
    if "stein" in report.evidence:
        summary += f", Stein min eig = {report.evidence['stein'].min_eigenvalue:.3g}"
    return report.as_dict(), summary, tol


def _sample_config(args, L):
    return preserver.SampleConfig(n=L.n, trials=args.trials, seed=args.seed,
                                  sample_class=args.sample_class, radius_band=args.band)


def _analysis(L, tol):
    spec = matmap.map_spectrum(L, tol)
    return {
        "n": L.n,
        "subspace": L.subspace,
        "provenance": L.provenance,
        "spectrum": spec.as_dict(),
        "spectral_radius": spec.spectral_radius,
        "frobenius_operator_norm": matmap.frobenius_operator_norm(L, tol),
        "normal": matmap.map_is_normal(L, tol),
    }


def cmd_map(args, tol):
    L = io.load_map(args.spec, tol)
    action = args.action
    if action != "apply" and args.matrix is not None:
        raise InputError(f"{action} takes no matrix argument")
    if action == "analyze":
        out = _analysis(L, tol)
        return out, f"rho(L) = {out['spectral_radius']:.6g}, normal = {out['normal']}"
    if action == "apply":
        if args.matrix is None:
            raise InputError("apply needs a matrix file")
        A = io.read_matrix(args.matrix)
        LA = matmap.apply(L, A, tol)
        return {"A": A.tolist(), "L(A)": LA.tolist()}, f"applied {L.provenance}"
    if action == "restrict-sym":
        R = matmap.restrict_symmetric(L, tol)
        out = _analysis(R, tol)
        out["rep"] = R.rep.tolist()
        return out, f"restricted rho(L) = {out['spectral_radius']:.6g}"
    cfg = _sample_config(args, L)
    if action == "test-into":
        v = preserver.test_into_preserver(L, cfg, tol)
        return {"sampling": cfg.as_dict(), "verdict": v.as_dict()}, f"{v.outcome} after {v.trials_run} trials"
    if action == "test-onto":
        v = preserver.test_onto_preserver(L, cfg, tol)
        return {"sampling": cfg.as_dict(), "verdict": v.as_dict()}, f"onto = {v.onto}"
    v = preserver.test_rho_preservation(L, cfg, tol)
    return ({"sampling": cfg.as_dict(), "verdict": v.as_dict()},
            f"rho preserved = {v.passed} (max deviation {v.max_deviation:.3g})")


def cmd_paper_examples(args, tol):
    results = fixtures.run_all(tol)
    counts = {}
    for fx in results:
        counts[fx.status] = counts.get(fx.status, 0) + 1
    lines = [f"{fx.id:24s} {fx.status}" for fx in results]
    return {"fixtures": [fx.as_dict() for fx in results], "status_counts": counts}, "\n".join(lines)


def cmd_basis(args, tol):
    basis = preserver.stable_basis(args.space, args.n)
    return basis.as_dict(tol), f"{len(basis.elements)} stable elements, rank {basis.rank}"


COMMANDS = {"check": cmd_check, "map": cmd_map, "paper-examples": cmd_paper_examples, "basis": cmd_basis}


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if getattr(args, "seed", "absent") is None:
        args.seed = secrets.randbits(63)
    tol = DEFAULT
    start = time.perf_counter()
    try:
        result = COMMANDS[args.command](args, tol)
    except InputError as exc:
        print(f"schurlab: error: {exc}", file=stderr)
        return 1
    except NumericalError as exc:
        print(f"schurlab: numerical failure: {exc}", file=stderr)
        return 2
    if len(result) == 3:
        payload, summary, tol = result
    else:
        payload, summary = result
    config = {"tolerances": tol.as_dict()}
    if getattr(args, "seed", None) is not None:
        config["seed"] = args.seed
    report = {
        "command": [args.command] + list(argv if argv is not None else sys.argv[1:])[1:],
        "config": config,
        "results": payload,
        "duration_s": time.perf_counter() - start,
    }
    json.dump(report, stdout, indent=2)
    stdout.write("\n")
    print(summary, file=stderr)
    return 0


def main():
    sys.exit(run())
