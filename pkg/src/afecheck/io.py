"""Reading labeled graphs and languages; DOT and JSON output.

Line format::

    # comment
    alphabet: a b
    vertices: u v
    edge u v a
    edge v u b

or, for a forbidden-word language, ``alphabet: 0 1`` followed by
``forbidden: 11 10{0,10}1`` (repetition patterns are expanded). ``alphabet``
and ``vertices`` lines are optional for graphs; missing ones are inferred in
order of first use. The JSON forms carry the same keys.
"""

from __future__ import annotations

import json
from typing import Union

from .errors import InputSyntaxError, ValidationError
from .graph import LabeledGraph, LanguageSpec, expand_pattern, fmt_word

Parsed = Union[LabeledGraph, LanguageSpec]


def _forbidden_words(items) -> list:
    words = []
    for item in items:
        words.extend(expand_pattern(item) if "{" in item else [item])
    return words


def _build(alphabet, vertices, edges, forbidden, where=None) -> Parsed:
    if forbidden is not None:
        if edges:
            raise ValidationError("mixed-input", "give either edges or forbidden words, not both")
        if not alphabet:
            raise ValidationError("empty-alphabet", "a forbidden-word language needs an alphabet")
        if not forbidden:
            raise ValidationError("no-forbidden-words", "forbidden list is empty")
        try:
            words = _forbidden_words(forbidden)
        except ValueError as exc:
            raise ValidationError("bad-pattern", str(exc)) from None
        return LanguageSpec.forbidding(alphabet, words)
    if alphabet is None:
        alphabet = list(dict.fromkeys(e[2] for e in edges))
    if vertices is None:
        vertices = list(dict.fromkeys(v for e in edges for v in e[:2]))
    return LabeledGraph(vertices, edges, alphabet)


def parse_lines(text: str) -> Parsed:
    alphabet = vertices = forbidden = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = len(raw) - len(raw.lstrip()) + 1
        if line.startswith("edge") and (len(line) == 4 or line[4].isspace()):
            parts = line.split()
            if len(parts) != 4:
                raise InputSyntaxError("expected 'edge <source> <target> <label>'", lineno, col)
            edges.append(tuple(parts[1:]))
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise InputSyntaxError(f"unrecognized line {line!r}", lineno, col)
        key = key.strip()
        values = rest.split()
        if key == "alphabet":
            alphabet = values
        elif key == "vertices":
            vertices = values
        elif key == "forbidden":
            forbidden = (forbidden or []) + values
        else:
            raise InputSyntaxError(f"unknown key {key!r}", lineno, col)
    return _build(alphabet, vertices, edges, forbidden)


def parse_json(text: str) -> Parsed:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise InputSyntaxError("top-level JSON value must be an object", 1, 1)
    unknown = set(doc) - {"alphabet", "vertices", "edges", "forbidden"}
    if unknown:
        raise InputSyntaxError(f"unknown keys {sorted(unknown)}", 1, 1)
    edges = doc.get("edges", [])
    for i, e in enumerate(edges):
        if not (isinstance(e, list) and len(e) == 3 and all(isinstance(x, str) for x in e)):
            raise InputSyntaxError(f"edge {i} must be [source, target, label]", 1, 1)
    for key in ("alphabet", "vertices", "forbidden"):
        value = doc.get(key)
        if value is not None and not (isinstance(value, list) and all(isinstance(x, str) for x in value)):
            raise InputSyntaxError(f"{key!r} must be a list of strings", 1, 1)
    return _build(doc.get("alphabet"), doc.get("vertices"), [tuple(e) for e in edges],
                  doc.get("forbidden"))


def parse_input(text: str) -> Parsed:
    """Parse either input format; JSON is recognized by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_lines(text)


def graph_to_dict(g: LabeledGraph) -> dict:
    return {"alphabet": list(g.alphabet), "vertices": list(g.vertices),
            "edges": [list(e) for e in g.edges]}


def graph_to_lines(g: LabeledGraph) -> str:
    out = ["alphabet: " + " ".join(g.alphabet), "vertices: " + " ".join(g.vertices)]
    out += [f"edge {s} {t} {a}" for s, t, a in g.edges]
    return "\n".join(out) + "\n"


# -- DOT -------------------------------------------------------------------------


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(g: LabeledGraph, name: str = "E", highlight=()) -> str:
    lines = [f"digraph {_q(name)} {{"]
    for v in g.vertices:
        attrs = ' [style=dashed]' if v in highlight else ""
        lines.append(f"  {_q(v)}{attrs};")
    for s, t, a in g.edges:
        lines.append(f"  {_q(s)} -> {_q(t)} [label={_q(a)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def top_graph_to_dot(T, name: str = "top") -> str:
    lines = [f"digraph {_q(name)} {{"]
    for i in range(len(T.vertices)):
        lines.append(f"  n{i} [label={_q(T.vertex_label(i))}];")
    # arrows run from d(e) to r(e)
    for j, e in enumerate(T.edges):
        label = e.letter if e.ext is None else f"{e.letter} [{e.ext}]"
        lines.append(f"  n{T.d[j]} -> n{T.r[j]} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def language_to_dict(spec: LanguageSpec) -> dict:
    return {"alphabet": list(spec.alphabet), "forbidden": [fmt_word(w) for w in spec.forbidden]}
