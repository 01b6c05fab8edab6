"""Command-line interface.

Exit codes: 0 success / path-complete / verified, 1 negative verdict,
2 usage, input or resource error.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .errors import PathCompleteError
from .graphs import DEFAULT_SUBSET_CAP, DEFAULT_WORD_CAP, check_path_complete, reduce_universality
from .jsr import DEFAULT_ITER_CAP, conic_scaling_bound, jsr_bounds
from .linalg import DEFAULT_PD_TOL
from .serialize import (
    bundle_to_json,
    certificate_from_json,
    dump_json,
    graph_from_json,
    graph_to_json,
    load_json,
    matrix_set_from_json,
    nfa_from_json,
    with_string_nodes,
)
from .synth import synthesize_conic, synthesize_ellipsoidal
from .verify import EDGE, POST, PRE, REVERSE, verify_certificate

OK, NEGATIVE, ERROR = 0, 1, 2


def _load_graph(path):
    return with_string_nodes(graph_from_json(load_json(path)))


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(dump_json(payload))
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _write_out(args, payload: dict) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dump_json(payload))
    else:
        sys.stdout.write(dump_json(payload))


def cmd_check(args) -> int:
    g = _load_graph(args.graph)
    verdict = check_path_complete(g, cap_subsets=args.cap_subsets)
    payload = {
        "complete": verdict.complete,
        "missing_word": None if verdict.missing_word is None else list(verdict.missing_word),
        "subsets": verdict.subsets,
    }
    if verdict.complete:
        text = "path-complete"
    else:
        text = "not path-complete; missing word: " + " ".join(map(str, verdict.missing_word))
    _emit(args, payload, text)
    return OK if verdict.complete else NEGATIVE


def cmd_synthesize(args) -> int:
    g = _load_graph(args.graph)
    if check_path_complete(g, cap_subsets=args.cap_subsets).complete:
        print("graph is path-complete; no counterexample exists", file=sys.stderr)
        return NEGATIVE
    if args.family == "conic":
        cx = synthesize_conic(g)
        report = verify_certificate(g, cx.matrices, cx.certificate, strict_on_support=True)
    else:
        cx = synthesize_ellipsoidal(g)
        report = verify_certificate(
            g, cx.matrices, cx.certificate, strict_on_support=True, direction=PRE
        )
    if not report.overall:
        # unreachable if the construction is correct
        print("internal error: synthesized certificate failed verification", file=sys.stderr)
        return ERROR
    _write_out(args, bundle_to_json(g, cx, args.family))
    if args.out:
        print(f"wrote {args.family} counterexample to {args.out}", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    s = matrix_set_from_json(load_json(args.matrices))
    cert = certificate_from_json(load_json(args.certificate), args.family)
    report = verify_certificate(
        g,
        s,
        cert,
        strict_on_support=args.strict_on_support,
        direction=args.direction,
        strict=args.strict,
        tol=args.tol,
        orientation=args.orientation,
    )
    payload = report.to_dict()
    lines = [f"overall: {'holds' if report.overall else 'FAILS'}"]
    for c in report.edges:
        label = " ".join(map(str, c.edge.label))
        lines.append(
            f"  {c.edge.src} -> {c.edge.dst} [{label}]: "
            f"{'ok' if c.holds else 'violated'} (slack {c.slack})"
        )
    for v in report.indefinite_nodes:
        lines.append(f"  certificate of {v} is not positive definite")
    _emit(args, payload, "\n".join(lines))
    return OK if report.overall else NEGATIVE


def cmd_jsr(args) -> int:
    s = matrix_set_from_json(load_json(args.matrices))
    bounds = jsr_bounds(s, args.depth, cap_words=args.cap_words)
    gamma = None
    if args.graph:
        gamma = conic_scaling_bound(
            _load_graph(args.graph), s, tol=args.tol, iter_cap=args.iter_cap, cap_words=args.cap_words
        )
        if gamma is None:
            gamma = "inconclusive"
    payload = {
        "t": args.depth,
        "norm": "inf",
        "lower": bounds.lower,
        "lower_witness": list(bounds.lower_witness),
        "upper": bounds.upper,
        "gamma_star": gamma,
    }
    text = (
        f"depth {args.depth} (infinity norm)\n"
        f"lower {bounds.lower!r} via word {' '.join(map(str, bounds.lower_witness))}\n"
        f"upper {bounds.upper!r}"
    )
    if args.graph:
        text += f"\ngamma* {gamma}"
    _emit(args, payload, text)
    return OK


def cmd_reduce(args) -> int:
    n = nfa_from_json(load_json(args.nfa))
    _write_out(args, graph_to_json(reduce_universality(n)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathcomplete",
        description="Path-completeness of Lyapunov inequality graphs and counterexample synthesis.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap-subsets", type=int, default=DEFAULT_SUBSET_CAP)
    common.add_argument("--cap-words", type=int, default=DEFAULT_WORD_CAP)
    common.add_argument("--tol", type=float, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="decide path-completeness")
    p.add_argument("graph")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synthesize", parents=[common], help="build an unstable counterexample")
    p.add_argument("graph")
    p.add_argument("--family", choices=("conic", "ellipsoidal"), default="conic")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", parents=[common], help="check a certificate edge by edge")
    p.add_argument("graph")
    p.add_argument("matrices")
    p.add_argument("certificate")
    p.add_argument("--family", choices=("conic", "ellipsoidal"))
    p.add_argument("--direction", choices=(PRE, POST), default=PRE)
    p.add_argument("--orientation", choices=(EDGE, REVERSE), default=EDGE)
    p.add_argument("--strict", action="store_true", help="ellipsoidal: require a definite gap")
    p.add_argument("--strict-on-support", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("jsr", parents=[common], help="brute-force JSR bounds")
    p.add_argument("matrices")
    p.add_argument("--depth", "-t", type=int, default=4)
    p.add_argument("--graph", help="path-complete graph for the conic scaling bound")
    p.add_argument("--iter-cap", type=int, default=DEFAULT_ITER_CAP)
    p.set_defaults(func=cmd_jsr)

    p = sub.add_parser("reduce", parents=[common], help="automaton universality to path-completeness")
    p.add_argument("nfa")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol is None:
        args.tol = 1e-6 if args.command == "jsr" else DEFAULT_PD_TOL
    if args.cap_subsets < 1 or args.cap_words < 1:
        parser.error("caps must be positive")
    try:
        return args.func(args)
    except PathCompleteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR
    except (ValueError, TypeError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
