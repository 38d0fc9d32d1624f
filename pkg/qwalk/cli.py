"""Command-line front end.

Subcommands emit JSON on stdout (CSV with --csv), write a run manifest into
--out when given and log every run to the audit log.

Exit codes: 0 ok, 1 verification failure, 2 invalid arguments, 3 resource cap.
"""

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from qwalk.config import get_config
from qwalk.errors import (
    GroupError,
    PartitionError,
    PhaseMatrixError,
    QwalkError,
    ResourceCapExceeded,
    ShapeMismatchError,
)
from qwalk.freeprob import asymptotic_law, law_moment
from qwalk.gamma import WALK_METHODS, walk_moment
from qwalk.groups import AbelianGroup
from qwalk.hadamard import PhaseMatrix, dump_phase_matrix, generic_q, load_phase_matrix
from qwalk.logging import RunManifest, get_audit_logger, load_manifest
from qwalk.models import (
    block_ranks,
    check_positive,
    check_projective,
    deform,
    dual,
    dump_model,
    fourier_model,
    verify_wreath_structure,
)
from qwalk.moments import (
    CSV_COLUMNS,
    METHODS,
    MomentReport,
    duality_check,
    haar_moment,
    phase_sum_moment,
    truncated_moment,
)
from qwalk.montecarlo import histogram_csv, mc_moment, mc_spectrum, reference_law, spectrum_ks
from qwalk.rules import LEVELS, format_checks, load_verify_checks
from qwalk.verify import verify_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_CAP = 3

MOMENT_METHODS = METHODS + ("truncated", "phase-sum")


class UsageError(QwalkError):
    """Raised for argument combinations argparse cannot reject on its own."""
    pass


# ============================================================================
# Argument helpers
# ============================================================================

def parse_range(text: str) -> List[int]:
    """"3" -> [3]; "2:6" -> [2, 3, 4, 5, 6] (inclusive)."""
    try:
        if ":" in text:
            lo, hi = (int(part) for part in text.split(":", 1))
            values = list(range(lo, hi + 1))
        else:
            values = [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return values


def group_arg(text: str) -> AbelianGroup:
    try:
        return AbelianGroup.parse(text)
    except GroupError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def resolve_q(source: str, X: AbelianGroup, Y: AbelianGroup, seed: int) -> PhaseMatrix:
    """Q from "random" (seeded), "ones" or a JSON file path."""
    if source == "random":
        return generic_q(X, Y, seed=seed)
    if source == "ones":
        return PhaseMatrix.ones(X, Y)
    try:
        Q = load_phase_matrix(source)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from exc
    if Q.shape != (X.size, Y.size):
        raise ShapeMismatchError(f"Q from {source} has shape {Q.shape}, expected {(X.size, Y.size)}")
    return Q


def _threads(args) -> int:
    return args.threads if args.threads is not None else get_config().THREADS


def _deformed_model(args):
    Q = resolve_q(args.q, args.x, args.y, args.seed)
    return deform(fourier_model(args.x), fourier_model(args.y), Q, args.side), Q


def _emit_csv(rows: List[Dict[str, Any]], columns: Sequence[str], target: str) -> Optional[Path]:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    if target == "-":
        sys.stdout.write(buffer.getvalue())
        return None
    path = Path(target)
    path.write_text(buffer.getvalue())
    return path


# ============================================================================
# Subcommands
# ============================================================================

def cmd_model(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    W, Q = _deformed_model(args)
    projective = check_projective(W)
    wreath = verify_wreath_structure(W, args.x, args.y)
    positivity = check_positive(W, args.p_max)
    ranks = block_ranks(W)
    result = {
        "model": W.name,
        "index_size": W.index_size,
        "block_dim": W.block_dim,
        "projective": projective.model_dump(),
        "wreath": wreath.model_dump(),
        "positivity": positivity.model_dump(),
        "block_ranks": {"min": int(ranks.min()), "max": int(ranks.max())},
    }
    if args.dump:
        manifest.outputs.append(str(dump_model(W, args.dump)))
    if args.dump_q:
        manifest.outputs.append(str(dump_phase_matrix(Q, args.dump_q)))
    return result, EXIT_OK


def cmd_moments(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    W, Q = _deformed_model(args)
    reports: List[MomentReport] = []
    for p in args.p:
        if args.method in METHODS:
            reports.append(haar_moment(W, p, args.method, rounds=args.rounds, samples=args.samples, seed=args.seed))
        elif args.method == "truncated":
            value = truncated_moment(W, p, args.r)
            reports.append(MomentReport(method="truncated", model=W.name, p=p, params={"r": args.r}, value=value))
        else:
            U, V = fourier_model(args.x), fourier_model(args.y)
            value = phase_sum_moment(U, dual(V), Q, p, args.r)
            reports.append(MomentReport(method="phase-sum", model=W.name, p=p, params={"r": args.r}, value=value))
    result = {"model": W.name, "moments": [r.model_dump(mode="json") for r in reports]}
    if args.duality:
        result["duality"] = duality_check(W, max(args.p), args.r).model_dump()
    if args.csv:
        path = _emit_csv([r.csv_row() for r in reports], CSV_COLUMNS, args.csv)
        if path:
            manifest.outputs.append(str(path))
    return result, EXIT_OK


def cmd_walk(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    reports = [walk_moment(args.x, args.y, p, args.method, threads=_threads(args)) for p in args.p]
    result = {
        "walks": [
            {**r.model_dump(mode="json"), "exact": str(r.exact)} for r in reports
        ]
    }
    if len(reports) == 1:
        result = result["walks"][0]
    if args.csv:
        rows = [{"p": r.p, "method": r.method, "value": r.value, "exact": str(r.exact), "count": r.count}
                for r in reports]
        path = _emit_csv(rows, ["p", "method", "value", "exact", "count"], args.csv)
        if path:
            manifest.outputs.append(str(path))
    return result, EXIT_OK


ASYMPT_COLUMNS = ["K", "M", "N", "p", "exact", "exact_scaled", "predicted_scaled", "quadrature_scaled"]


def cmd_asympt(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    rows = []
    for K in args.k:
        M, N = args.alpha * K, args.beta * K
        if not (float(M).is_integer() and float(N).is_integer()):
            raise UsageError(f"alpha K and beta K must be integers, got {M}, {N} at K={K}")
        M, N = int(M), int(N)
        law = asymptotic_law(args.alpha, args.beta, K)
        exact = walk_moment(AbelianGroup.cyclic(M), AbelianGroup.cyclic(N), args.p, threads=_threads(args)).exact
        scale = K ** (args.p - 1)
        rows.append({
            "K": K,
            "M": M,
            "N": N,
            "p": args.p,
            "exact": str(exact),
            "exact_scaled": float(exact / Fraction(scale)),
            "predicted_scaled": law.predicted_moment(args.p) / scale,
            "quadrature_scaled": law_moment(law.law, args.p) / scale,
        })
    path = _emit_csv(rows, ASYMPT_COLUMNS, _csv_target(args))
    if path:
        manifest.outputs.append(str(path))
    return {"rows": rows}, EXIT_OK


def cmd_mc(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    M, N = args.x.size, args.y.size
    if args.spectrum:
        hist = mc_spectrum(M, N, args.samples, args.seed, args.bins, threads=_threads(args))
        result = {
            "M": M,
            "N": N,
            "samples": args.samples,
            "seed": args.seed,
            "mass": hist.mass,
            "mean": hist.mean,
            "ks_reference": spectrum_ks(hist, reference_law(M, N)),
        }
        if args.csv == "-":
            rows = [{"bin_left": lo, "bin_right": hi, "density": d}
                    for lo, hi, d in zip(hist.edges[:-1], hist.edges[1:], hist.density)]
            _emit_csv(rows, ["bin_left", "bin_right", "density"], "-")
        elif args.csv:
            manifest.outputs.append(str(histogram_csv(hist, args.csv)))
        return result, EXIT_OK
    reports = [mc_moment(M, N, p, args.samples, args.seed, threads=_threads(args)) for p in args.p]
    if args.csv:
        path = _emit_csv([r.csv_row() for r in reports], CSV_COLUMNS, args.csv)
        if path:
            manifest.outputs.append(str(path))
    return {"moments": [r.model_dump(mode="json") for r in reports]}, EXIT_OK


def cmd_verify(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    if args.list:
        print(format_checks(load_verify_checks()))
        return {}, EXIT_OK
    only = [item.strip() for item in args.only.split(",")] if args.only else None
    try:
        report = verify_suite(args.level, only, audit=get_audit_logger(), run_id=manifest.run_id)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for result in report.results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.id:<14} {result.wall_time_ms:10.1f} ms  {result.description}", file=sys.stderr)
        for failure in result.failures:
            print(f"      - {failure}", file=sys.stderr)
    payload = report.model_dump(mode="json")
    payload["passed"] = report.passed
    if not report.passed:
        logger.error(f"verify: {len(report.failures)} failure(s)")
    return payload, EXIT_OK if report.passed else EXIT_VERIFY


def strip_out(argv: Sequence[str]) -> List[str]:
    """argv without any "--out DIR" or "--out=DIR"."""
    kept: List[str] = []
    skip = False
    for item in argv:
        if skip:
            skip = False
        elif item == "--out":
            skip = True
        elif not item.startswith("--out="):
            kept.append(item)
    return kept


def cmd_replay(args, manifest: RunManifest) -> Tuple[Dict[str, Any], int]:
    source = load_manifest(args.manifest)
    if not source.argv or source.argv[0] == "replay":
        raise UsageError(f"manifest {args.manifest} has no replayable command")
    # the source run directory is never written to
    argv = strip_out(source.argv)
    if args.replay_out:
        source_dir = Path(args.manifest) if Path(args.manifest).is_dir() else Path(args.manifest).parent
        if Path(args.replay_out).resolve() == source_dir.resolve():
            raise UsageError(f"replay output {args.replay_out} is the source run directory")
        argv += ["--out", args.replay_out]
    code = main(argv)
    return {"replayed": source.run_id, "argv": argv, "exit_code": code}, code


# ============================================================================
# Parser
# ============================================================================

def _add_pair(sub: argparse.ArgumentParser, with_q: bool = True):
    sub.add_argument("--x", type=group_arg, default=AbelianGroup.cyclic(2), help="group X, e.g. Z2 or Z2xZ3")
    sub.add_argument("--y", type=group_arg, default=AbelianGroup.cyclic(2), help="group Y")
    if with_q:
        sub.add_argument("--q", default="random", help="random (seeded), ones, or a JSON file path")
        sub.add_argument("--side", choices=("right", "left"), default="right", help="deformation side")


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--seed", type=int, default=0, help="seed for Q and sampling")
    sub.add_argument("--threads", type=int, default=None, help="worker threads (default QWALK_THREADS or core count)")
    sub.add_argument("--out", default=None, help="directory for manifest.json and result.json")
    sub.add_argument("--csv", nargs="?", const="-", default=None, help="emit a CSV table (to PATH, or stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qwalk",
        description="Random walks on deformed Fourier quantum groups",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s walk --x Z2 --y Z2 --p 2                         # exact value 3
  %(prog)s moments --x Z2 --y Z2 --q random --seed 7 --p 2 --method spectral
  %(prog)s asympt --alpha 1 --beta 1 --k 2:6 --p 3          # CSV of c_p/K^(p-1)
  %(prog)s mc --x Z16 --y Z16 --spectrum --samples 300      # spectrum vs pi_1
  %(prog)s verify --level quick                             # release gate
  %(prog)s replay out/manifest.json                         # re-run a manifest
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("model", help="build and check a deformed Fourier model")
    _add_pair(sub)
    _add_common(sub)
    sub.add_argument("--p-max", type=int, default=2, help="positivity check order")
    sub.add_argument("--dump", default=None, help="write the model JSON to PATH")
    sub.add_argument("--dump-q", default=None, help="write Q JSON to PATH")
    sub.set_defaults(func=cmd_model)

    sub = subparsers.add_parser("moments", help="transfer-matrix moments of a deformed model")
    _add_pair(sub)
    _add_common(sub)
    sub.add_argument("--p", type=parse_range, default=[2], help="order N or range LO:HI")
    sub.add_argument("--r", type=int, default=1, help="truncation order for truncated/phase-sum")
    sub.add_argument("--method", choices=MOMENT_METHODS, default="spectral")
    sub.add_argument("--rounds", type=int, default=None, help="Cesaro rounds (default CESARO_ROUNDS)")
    sub.add_argument("--samples", type=int, default=None, help="trace samples for matrix-free Cesaro (default CESARO_SAMPLES)")
    sub.add_argument("--duality", action="store_true", help="also run the reciprocity check")
    sub.set_defaults(func=cmd_moments)

    sub = subparsers.add_parser("walk", help="exact moments by enumeration")
    _add_pair(sub, with_q=False)
    _add_common(sub)
    sub.add_argument("--p", type=parse_range, default=[2], help="order N or range LO:HI")
    sub.add_argument("--method", choices=WALK_METHODS, default="multiset")
    sub.set_defaults(func=cmd_walk)

    sub = subparsers.add_parser("asympt", help="exact moments against the large-K law")
    _add_common(sub)
    sub.add_argument("--alpha", type=float, default=1.0)
    sub.add_argument("--beta", type=float, default=1.0)
    sub.add_argument("--k", type=parse_range, default=[2, 3, 4], help="K or range LO:HI")
    sub.add_argument("--p", type=int, default=3)
    sub.set_defaults(func=cmd_asympt)

    sub = subparsers.add_parser("mc", help="Monte Carlo moments and spectra over the torus")
    _add_pair(sub, with_q=False)
    _add_common(sub)
    sub.add_argument("--p", type=parse_range, default=[2], help="order N or range LO:HI")
    sub.add_argument("--samples", type=int, default=10_000)
    sub.add_argument("--spectrum", action="store_true", help="pooled eigenvalue histogram of A/N")
    sub.add_argument("--bins", type=int, default=50)
    sub.set_defaults(func=cmd_mc)

    sub = subparsers.add_parser("verify", help="run the cross-oracle verification suite")
    _add_common(sub)
    sub.add_argument("--level", choices=LEVELS, default="quick")
    sub.add_argument("--only", default=None, help="comma-separated check ids")
    sub.add_argument("--list", action="store_true", help="list the planned checks")
    sub.set_defaults(func=cmd_verify)

    sub = subparsers.add_parser("replay", help="re-execute the command stored in a manifest")
    sub.add_argument("manifest", help="manifest.json or the directory containing it")
    sub.add_argument("--out", dest="replay_out", default=None,
                     help="directory for the replayed run (never the source run directory)")
    sub.set_defaults(func=cmd_replay)

    return parser


def _csv_target(args) -> Optional[str]:
    """Where CSV goes; asympt defaults to stdout."""
    target = getattr(args, "csv", None)
    if target is None and args.command == "asympt":
        return "-"
    return target


def _params(args) -> Dict[str, Any]:
    return {
        k: (v.label if isinstance(v, AbelianGroup) else v)
        for k, v in vars(args).items()
        if k != "func"
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    params = _params(args)
    seeds = {"seed": args.seed} if hasattr(args, "seed") else {}
    manifest = RunManifest(command=args.command, argv=argv, params=params, seeds=seeds)
    audit = get_audit_logger()
    audit.log_run(manifest.run_id, args.command, params)

    result: Dict[str, Any] = {}
    try:
        result, code = args.func(args, manifest)
    except ResourceCapExceeded as exc:
        audit.log_cap_exceeded(manifest.run_id, exc.what, exc.requested, exc.cap)
        print(f"qwalk: {exc}", file=sys.stderr)
        code = EXIT_CAP
    except (UsageError, GroupError, PhaseMatrixError, ShapeMismatchError, PartitionError, ValueError) as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        code = EXIT_USAGE
    except QwalkError as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        code = EXIT_VERIFY

    if result and _csv_target(args) != "-":
        print(json.dumps(result, indent=2, default=str))
    if getattr(args, "out", None):
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if result:
            result_path = out / "result.json"
            result_path.write_text(json.dumps(result, indent=2, default=str))
            manifest.outputs.append(str(result_path))
        manifest.finish(code)
        path = manifest.write(out)
        audit.log_artifact(manifest.run_id, path, "manifest")
    else:
        manifest.finish(code)
    audit.log_run(manifest.run_id, args.command, params, finished=True, exit_code=code)
    return code


if __name__ == "__main__":
    sys.exit(main())
