"""``afecheck`` command line.

Exit status: 0 on success, 2 when the input or flags are invalid, 1 on an
internal error. With ``--format json`` errors are reported as a JSON object
on stdout as well.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import __version__
from .decision import afe_verdict, analyze, simplicity_verdict
from .errors import AfecheckError, HypothesisError, InputError, ValidationError
from .graph import LabeledGraph, SkewProductSpec, skew_product
from .io import dumps, graph_to_dict, graph_to_dot, graph_to_lines, parse_input, top_graph_to_dot
from .topgraph import NotFound, build_top_graph, find_pseudoloop

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID = 0, 1, 2

_EPS = re.compile(r"^\s*(?:2\s*(?:\^|\*\*)\s*-\s*(\d+)|1\s*/\s*(\d+)|1\s*/\s*2\s*(?:\^|\*\*)\s*(\d+))\s*$")


class UsageError(Exception):
    pass


def parse_epsilon(text: str) -> int:
    """Exponent ``k`` of a dyadic ``eps = 2**-k``: ``2^-4``, ``1/16`` or ``1/2^4``."""
    m = _EPS.match(text)
    if m:
        if m.group(1) is not None:
            return int(m.group(1))
        if m.group(3) is not None:
            return int(m.group(3))
        den = int(m.group(2))
        if den >= 1 and den & (den - 1) == 0:
            return den.bit_length() - 1
    raise UsageError(f"epsilon must be dyadic, 2^-k: got {text!r}")


def _cocycle(text: str):
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cocycle must be an integer or a comma-separated list: {text!r}") from None
    return values[0] if len(values) == 1 else values


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _render_text(obj, indent: int = 0) -> list:
    """Readable rendering of a report dict; verdicts print their label and certificate."""
    pad = "  " * indent
    lines = []
    for key in sorted(obj):
        value = obj[key]
        if isinstance(value, dict) and "status" in value and "label" in value:
            lines.append(f"{pad}{key}: {value['label']}")
            if value.get("certificate"):
                lines.append(f"{pad}  certificate: {json.dumps(value['certificate'], sort_keys=True)}")
            if value.get("note"):
                lines.append(f"{pad}  note: {value['note']}")
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_render_text(value, indent + 1))
        else:
            lines.append(f"{pad}{key}: {json.dumps(value, sort_keys=True)}")
    return lines


def _emit(args, obj: dict, text_override: str | None = None) -> None:
    if args.format == "json":
        sys.stdout.write(dumps(obj))
    elif text_override is not None:
        sys.stdout.write(text_override)
    else:
        sys.stdout.write("\n".join(_render_text(obj)) + "\n")


def _require_graph(src, what: str) -> LabeledGraph:
    if not isinstance(src, LabeledGraph):
        raise UsageError(f"{what} needs a labeled graph, not a forbidden-word language")
    return src


# -- subcommands ----------------------------------------------------------------


def cmd_analyze(args, src) -> dict:
    return analyze(src, M=args.max_block, k=args.k, N=args.N, bound=args.bound).to_dict()


def cmd_verdict(args, src) -> dict:
    return {"afe_verdict": afe_verdict(src, args.max_block).to_dict()}


def cmd_simplicity(args, src) -> dict:
    return {"simplicity": simplicity_verdict(src, args.k, args.N, args.max_block).to_dict()}


def cmd_pseudoloop(args, src) -> dict:
    k = parse_epsilon(args.epsilon)
    T = build_top_graph(src, args.depth)
    if args.vertex is None:
        raise UsageError("pseudoloop needs --vertex")
    try:
        i = T.vertex_index(args.vertex)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    result = find_pseudoloop(T, i, k)
    if isinstance(result, NotFound):
        return {"pseudoloop": result.to_dict(), "vertex": T.vertex_label(i)}
    out = result.to_dict(T)
    out["found"] = True
    return {"pseudoloop": out, "vertex": T.vertex_label(i)}


def cmd_topgraph(args, src) -> dict:
    return {"topgraph": build_top_graph(src, args.depth).to_dict()}


def cmd_skew(args, src) -> dict:
    g = _require_graph(src, "skew")
    try:
        spec = SkewProductSpec(g, _cocycle(args.c), _cocycle(args.d), args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sp = skew_product(spec)
    return {"graph": graph_to_dict(sp.graph), "truncated": sp.truncated,
            "boundary": sp.graph.ordered(sp.boundary), "window": args.window}


def cmd_export_dot(args, src) -> str:
    if args.top:
        return top_graph_to_dot(build_top_graph(src, args.depth))
    return graph_to_dot(_require_graph(src, "export-dot without --top"))


COMMANDS = {
    "analyze": cmd_analyze,
    "verdict": cmd_verdict,
    "pseudoloop": cmd_pseudoloop,
    "simplicity": cmd_simplicity,
    "topgraph": cmd_topgraph,
    "skew": cmd_skew,
    "export-dot": cmd_export_dot,
}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="input file (line format or JSON); '-' for stdin")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0,
                        help="accepted for interface stability; every command is deterministic")

    parser = argparse.ArgumentParser(prog="afecheck", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"afecheck {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("analyze", "full report")
    p.add_argument("--max-block", type=_positive, default=12, dest="max_block")
    p.add_argument("--k", type=_positive, default=4)
    p.add_argument("--N", type=_positive, default=24)
    p.add_argument("--bound", type=_positive, default=4, help="disagreeable search bound")

    p = add("verdict", "AF-embeddability verdict only")
    p.add_argument("--max-block", type=_positive, default=12, dest="max_block")

    p = add("pseudoloop", "find an eps-pseudoloop at a vertex")
    p.add_argument("--vertex")
    p.add_argument("--epsilon", default="2^-4")
    p.add_argument("--depth", type=_positive)

    p = add("simplicity", "bounded minimality verdict")
    p.add_argument("--k", type=_positive, default=4)
    p.add_argument("--N", type=_positive, default=24)
    p.add_argument("--max-block", type=_positive, default=12, dest="max_block")

    p = add("topgraph", "the dual topological graph")
    p.add_argument("--depth", type=_positive)

    p = add("skew", "truncated skew product over the integers")
    p.add_argument("--c", default="1")
    p.add_argument("--d", default="0")
    p.add_argument("--window", type=_positive, default=1)

    p = add("export-dot", "DOT rendering of the graph or of its topological graph")
    p.add_argument("--top", action="store_true")
    p.add_argument("--depth", type=_positive)
    return parser


def _error(args, kind: str, message: str, code: int, invariant: str | None = None) -> int:
    err = {"type": kind, "message": message}
    if invariant:
        err["invariant"] = invariant
    if getattr(args, "format", "text") == "json":
        sys.stdout.write(dumps({"error": err}))
    tag = f" [{invariant}]" if invariant else ""
    sys.stderr.write(f"afecheck: {kind} error: {message}{tag}\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        src = parse_input(_read(args.input))
        result = COMMANDS[args.command](args, src)
        if isinstance(result, str):
            sys.stdout.write(result)
        elif args.command == "skew" and args.format == "text":
            sp = result
            sys.stdout.write(graph_to_lines(LabeledGraph(
                sp["graph"]["vertices"], sp["graph"]["edges"], sp["graph"]["alphabet"], strict=False)))
        else:
            _emit(args, result)
        return EXIT_OK
    except ValidationError as exc:
        return _error(args, "validation", str(exc), EXIT_INVALID, exc.invariant)
    except InputError as exc:
        return _error(args, "input", str(exc), EXIT_INVALID)
    except HypothesisError as exc:
        return _error(args, "hypothesis", str(exc), EXIT_INVALID)
    except UsageError as exc:
        return _error(args, "usage", str(exc), EXIT_INVALID)
    except OSError as exc:
        return _error(args, "input", str(exc), EXIT_INVALID)
    except AfecheckError as exc:
        return _error(args, "internal", str(exc), EXIT_INTERNAL)
    except Exception as exc:  # pragma: no cover - last resort
        return _error(args, "internal", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
