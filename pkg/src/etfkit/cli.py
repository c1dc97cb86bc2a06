"""Command-line entry point.

Exit codes: 0 every requested check passed, 1 some check failed,
2 invalid arguments, 3 unreadable input or unwritable output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .analysis import ALL_CHECKS, analyze, normalized_signature
from .errors import EtfError
from .frames import Frame, dumps, onb, simplex
from .gabor import GroupShape, gabor_steiner
from .roux import roux_detect, roux_theorem_harness
from .signature import signature_of
from .symmetry import k_transitive, tp_automorphisms

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    # on subcommands the defaults are suppressed so a flag given before the
    # subcommand is not overwritten
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--backend", choices=("exact", "float"), default=default("float"))
    parser.add_argument("--tol", type=float, default=default(1e-9))
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--out", default=default(None), help="write JSON here instead of stdout")
    parser.add_argument("--timings", action="store_true", default=default(False),
                        help="include wall-clock timings (reports are then not byte-stable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="etfkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="build a frame and write it as JSON")
    kinds = p.add_subparsers(dest="kind", required=True)
    g = kinds.add_parser("gabor", parents=[common], help="Gabor-Steiner ETF")
    g.add_argument("--m", required=True, help="comma-separated odd factors, e.g. 3,3")
    for kind in ("onb", "simplex"):
        k = kinds.add_parser(kind, parents=[common])
        k.add_argument("--d", type=int, required=True)

    p = sub.add_parser("analyze", parents=[common], help="run checks and emit an analysis report")
    p.add_argument("frame")
    p.add_argument("--checks", default=",".join(ALL_CHECKS),
                   help=f"comma-separated subset of {','.join(ALL_CHECKS)}")
    p.add_argument("--k", type=int, default=3, help="largest transitivity degree to test")
    p.add_argument("--max-nodes", type=int, default=10**7)
    p.add_argument("--r-max", type=int, default=None)

    p = sub.add_parser("signature", parents=[common], help="emit the signature matrix")
    p.add_argument("frame")
    p.add_argument("--normalized", action="store_true", help="emit the normalized form")

    p = sub.add_parser("symmetry", parents=[common], help="triple-product automorphism group")
    p.add_argument("frame")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--max-nodes", type=int, default=10**7)
    p.add_argument("--antiunitary", action="store_true")

    p = sub.add_parser("roux", parents=[common], help="roux-lines detection")
    p.add_argument("frame", nargs="?")
    p.add_argument("--p", type=int, help="run the theorem harness for G(p,...,p)")
    p.add_argument("--s", type=int, default=0, help="harness uses s + 1 factors")
    p.add_argument("--r-max", type=int, default=None)

    p = sub.add_parser("report", parents=[common], help="plain-text summary of a frame or report")
    p.add_argument("path", help="frame JSON or analysis report JSON")
    return parser


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _load_frame(path: str, obj: dict | None = None) -> Frame:
    obj = _read_json(path) if obj is None else obj
    try:
        return Frame.from_json_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path} is not a frame file: {exc}") from exc


def _emit(payload, out: str | None) -> None:
    text = payload if isinstance(payload, str) else dumps(payload)
    if out is None:
        sys.stdout.write(text + "\n")
        return
    try:
        Path(out).write_text(text + "\n")
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc}") from exc


def cmd_construct(args) -> int:
    try:
        if args.kind == "gabor":
            frame = gabor_steiner(GroupShape.parse(args.m))
        elif args.kind == "onb":
            frame = onb(args.d)
        else:
            frame = simplex(args.d)
    except (EtfError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    _emit(frame.to_json_dict(), args.out)
    return EXIT_OK


def _parse_checks(text: str) -> list[str]:
    checks = [c.strip() for c in text.split(",") if c.strip()]
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad or not checks:
        raise UsageError(f"unknown checks {bad}; choose from {','.join(ALL_CHECKS)}")
    return checks


def cmd_analyze(args) -> int:
    checks = _parse_checks(args.checks)
    frame = _load_frame(args.frame)
    report = analyze(frame, checks, backend=args.backend, tol=args.tol, seed=args.seed,
                     max_k=args.k, max_nodes=args.max_nodes, r_max=args.r_max,
                     timings=args.timings)
    _emit(report, args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_signature(args) -> int:
    frame = _load_frame(args.frame)
    try:
        if args.normalized:
            s = normalized_signature(frame, args.backend, args.tol)
        else:
            s = signature_of(frame, "float", args.tol)
    except EtfError as exc:
        _emit({"pass": False, "error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_FAIL
    _emit(s.to_json_dict(), args.out)
    return EXIT_OK


def cmd_symmetry(args) -> int:
    frame = _load_frame(args.frame)
    if not 1 <= args.k <= frame.n:
        raise UsageError(f"--k must lie in 1..{frame.n}")
    try:
        group = tp_automorphisms(frame, max_nodes=args.max_nodes, tol=max(args.tol, 1e-8),
                                 antiunitary=args.antiunitary)
    except EtfError as exc:
        _emit({"pass": False, "error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_FAIL
    ok = k_transitive(group, frame.n, args.k)
    _emit({"k": args.k, "k_transitive": ok, "group": group.to_json_dict(), "pass": ok}, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_roux(args) -> int:
    tol = max(args.tol, 1e-8)
    if args.p is not None:
        if args.frame is not None:
            raise UsageError("give either a frame file or --p, not both")
        try:
            rep = roux_theorem_harness(args.p, args.s, backend=args.backend, tol=tol)
        except (EtfError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    elif args.frame is not None:
        frame = _load_frame(args.frame)
        try:
            sbar = normalized_signature(frame, args.backend, 1e-9, args.r_max)
            rep = roux_detect(sbar, r_max=args.r_max, tol=tol, backend=args.backend)
        except EtfError as exc:
            _emit({"pass": False, "error": type(exc).__name__, "message": str(exc)}, args.out)
            return EXIT_FAIL
    else:
        raise UsageError("roux needs a frame file or --p")
    _emit(rep.to_dict(), args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def render_report(report: dict) -> str:
    f = report["frame"]
    lines = [f"etfkit {report['tool_version']}  {report['input_digest']}",
             f"n={f['n']} d={f['d']} coherence={f['coherence']:.12g} welch={f['welch_bound']:.12g}"]
    for name, result in report["checks"].items():
        mark = "PASS" if result.get("pass") else "FAIL"
        extra = f"  ({result['error']})" if "error" in result else ""
        lines.append(f"{mark}  {name}{extra}")
    lines.append("overall: " + ("PASS" if report["pass"] else "FAIL"))
    return "\n".join(lines)


def cmd_report(args) -> int:
    obj = _read_json(args.path)
    if isinstance(obj, dict) and "checks" in obj and "frame" in obj:
        report = obj
    else:
        frame = _load_frame(args.path, obj)
        report = analyze(frame, backend=args.backend, tol=args.tol, seed=args.seed,
                         timings=args.timings)
    _emit(render_report(report), args.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


COMMANDS = {
    "construct": cmd_construct,
    "analyze": cmd_analyze,
    "signature": cmd_signature,
    "symmetry": cmd_symmetry,
    "roux": cmd_roux,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"etfkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"etfkit: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
