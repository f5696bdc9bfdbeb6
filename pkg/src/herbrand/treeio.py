"""JSON, DOT and indented-text forms of Herbrand trees."""
from __future__ import annotations

import json
from typing import Any, Optional

from .frontend import TheorySyntaxError, parse_atom, parse_term
from .logic import Contrad, Exp, GroundTheory, HerbrandTree, Index


def tree_to_json(t: HerbrandTree) -> dict[str, Any]:
    if isinstance(t, Contrad):
        return {"leaf": {"axiom": t.index.axiom, "args": [str(a) for a in t.index.args]}}
    return {"node": {"atom": str(t.atom),
                     "true": tree_to_json(t.if_true),
                     "false": tree_to_json(t.if_false)}}


def tree_from_json(data: Any, th: Optional[GroundTheory] = None) -> HerbrandTree:
    """Inverse of :func:`tree_to_json`; leaf ranks are filled in from ``th``."""
    try:
        if "leaf" in data:
            leaf = data["leaf"]
            i = Index(leaf["axiom"], tuple(parse_term(a) for a in leaf.get("args", [])))
            if th is not None:
                i = Index(i.axiom, i.args, th.rank(i))
            return Contrad(i)
        node = data["node"]
        return Exp(parse_atom(node["atom"]),
                   tree_from_json(node["true"], th),
                   tree_from_json(node["false"], th))
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed tree JSON: {e}") from None
    except TheorySyntaxError as e:
        raise ValueError(f"malformed tree JSON: {e}") from None


def dumps(t: HerbrandTree, indent: Optional[int] = 2) -> str:
    return json.dumps(tree_to_json(t), indent=indent)


def loads(text: str, th: Optional[GroundTheory] = None) -> HerbrandTree:
    return tree_from_json(json.loads(text), th)


def to_dot(t: HerbrandTree, name: str = "herbrand") -> str:
    lines = [f"digraph {name} {{", "  node [fontname=\"Helvetica\"];"]
    counter = 0

    def emit(t: HerbrandTree) -> str:
        nonlocal counter
        me = f"n{counter}"
        counter += 1
        if isinstance(t, Contrad):
            lines.append(f"  {me} [shape=box, label={json.dumps(str(t.index))}];")
            return me
        lines.append(f"  {me} [shape=ellipse, label={json.dumps(str(t.atom))}];")
        yes = emit(t.if_true)
        no = emit(t.if_false)
        lines.append(f"  {me} -> {yes} [label=\"T\"];")
        lines.append(f"  {me} -> {no} [label=\"F\"];")
        return me

    emit(t)
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_text(t: HerbrandTree) -> str:
    out: list[str] = []

    def emit(t: HerbrandTree, prefix: str, label: str) -> None:
        if isinstance(t, Contrad):
            out.append(f"{prefix}{label}contradiction: {t.index}")
            return
        out.append(f"{prefix}{label}{t.atom}?")
        emit(t.if_true, prefix + "  ", "T: ")
        emit(t.if_false, prefix + "  ", "F: ")

    emit(t, "", "")
    return "\n".join(out) + "\n"


def render(t: HerbrandTree, fmt: str) -> str:
    if fmt == "json":
        return dumps(t) + "\n"
    if fmt == "dot":
        return to_dot(t)
    if fmt == "text":
        return to_text(t)
    raise ValueError(f"unknown format {fmt!r}")
