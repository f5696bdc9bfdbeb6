"""Second-order constructor encodings, the prelude, storage operators and decoders."""
from __future__ import annotations

from typing import Optional

from ..logic import Contrad, Exp, GroundTheory, HerbrandTree
from .parser import Program, nat_term, parse_program
from .terms import App, Lam, Ref, Term, Var


def encode_constructor(params: int, args: int, k: int, n: int) -> Term:
    """``λp₁…p_m λa₁…a_j λe₁…e_n. e_k a₁ … a_j``."""
    if not 1 <= k <= n:
        raise ValueError(f"constructor position {k} out of 1..{n}")
    body: Term = Var(f"e{k}")
    for j in range(1, args + 1):
        body = App(body, Var(f"a{j}"))
    for name in ([f"p{i}" for i in range(1, params + 1)] + [f"a{j}" for j in range(1, args + 1)]
                 + [f"e{i}" for i in range(1, n + 1)])[::-1]:
        body = Lam(name, body)
    return body


# datatype -> (parameter count, [(constructor, argument count)])
DATATYPES: dict[str, tuple[int, list[tuple[str, int]]]] = {
    "unit": (0, [("tt", 0)]),
    "bool": (0, [("true", 0), ("false", 0)]),
    "and": (2, [("conj", 2)]),
    "or": (2, [("or_introl", 1), ("or_intror", 1)]),
    "nat": (0, [("O", 0), ("S", 1)]),
    "atom": (0, [("MkAtom", 1)]),
    "index": (0, [("MkIndex", 1)]),
    "term": (0, [("MkTerm", 1)]),
    "tree": (0, [("Contrad", 1), ("Exp", 3)]),
}

STORAGE_TEXT = r"""
# storage operators: rebuild the scrutinee in canonical form, then pass it to f
Define Mnat f n = n (f O) (\m. Mnat (\m'. f (S m')) m) ;;
Define Matom f a = a (\n. Mnat (\n'. f (MkAtom n')) n) ;;
Define Mindex f i = i (\n. Mnat (\n'. f (MkIndex n')) n) ;;
Define Mterm f u = u (\n. Mnat (\n'. f (MkTerm n')) n) ;;
Define Mbool f b = b (f true) (f false) ;;
Define Mtree f t =
  t (Mindex (\i. f (Contrad i)))
    (Matom (\a. Mtree (\t1. Mtree (\t2. f (Exp a t1 t2))))) ;;

Define excl_mid = \_. callcc (\k. or_intror .type .type (\p. k (or_introl .type .type p))) ;;
"""

STORAGE_OPERATORS = {"nat": "Mnat", "atom": "Matom", "index": "Mindex",
                     "term": "Mterm", "bool": "Mbool", "tree": "Mtree"}


def prelude(instructions=("stop", "print")) -> Program:
    base = Program()
    for params, ctors in DATATYPES.values():
        for k, (name, nargs) in enumerate(ctors, start=1):
            base.define(name, encode_constructor(params, nargs, k, len(ctors)))
    return parse_program(STORAGE_TEXT, instructions, base=base)


def with_prelude(text: str, instructions=("stop", "print")) -> Program:
    return parse_program(text, instructions, base=prelude(instructions))


def storage_operator(kind: str) -> Term:
    try:
        return Ref(STORAGE_OPERATORS[kind])
    except KeyError:
        raise ValueError(f"no storage operator for kind {kind!r}") from None


# -- canonical values ---------------------------------------------------------

class DecodeError(ValueError):
    pass


def _wrap(ctor: str, n: int) -> Term:
    return App(Ref(ctor), nat_term(n))


def encode_value(kind: str, v) -> Term:
    if kind == "nat":
        return nat_term(v)
    if kind == "bool":
        return Ref("true" if v else "false")
    if kind in ("atom", "index", "term"):
        return _wrap({"atom": "MkAtom", "index": "MkIndex", "term": "MkTerm"}[kind], v)
    raise ValueError(f"cannot encode kind {kind!r} directly")


def encode_tree(t: HerbrandTree, th: GroundTheory) -> Term:
    if isinstance(t, Contrad):
        return App(Ref("Contrad"), _wrap("MkIndex", th.rank(t.index)))
    return Ref("Exp")(_wrap("MkAtom", th.atom_code(t.atom)),
                      encode_tree(t.if_true, th), encode_tree(t.if_false, th))


def decode_nat(t: Term) -> int:
    n = 0
    while isinstance(t, App) and t.fun == Ref("S"):
        n += 1
        t = t.arg
    if t != Ref("O"):
        raise DecodeError(f"not a canonical natural number: {t}")
    return n


def _unwrap(t: Term, ctor: str) -> int:
    if isinstance(t, App) and t.fun == Ref(ctor):
        return decode_nat(t.arg)
    raise DecodeError(f"expected {ctor} applied to a numeral, found {t}")


def decode_atom_code(t: Term) -> int:
    return _unwrap(t, "MkAtom")


def decode_index_code(t: Term) -> int:
    return _unwrap(t, "MkIndex")


def decode_term_code(t: Term) -> int:
    return _unwrap(t, "MkTerm")


def decode_tree(t: Term, th: Optional[GroundTheory] = None):
    """Decode a canonical tree; without ``th`` atoms and indices stay as codes."""
    def leaf(code: int):
        return th.index(code) if th is not None else code

    def atom(code: int):
        return th.atom_of_code(code) if th is not None else code

    def go(t: Term):
        if isinstance(t, App) and t.fun == Ref("Contrad"):
            return Contrad(leaf(decode_index_code(t.arg)))
        if (isinstance(t, App) and isinstance(t.fun, App) and isinstance(t.fun.fun, App)
                and t.fun.fun.fun == Ref("Exp")):
            return Exp(atom(decode_atom_code(t.fun.fun.arg)), go(t.fun.arg), go(t.arg))
        raise DecodeError(f"not a canonical tree: {t}")

    return go(t)


def decode(kind: str, t: Term, th: Optional[GroundTheory] = None):
    if kind == "nat":
        return decode_nat(t)
    if kind == "bool":
        if t == Ref("true"):
            return True
        if t == Ref("false"):
            return False
        raise DecodeError(f"not a canonical boolean: {t}")
    if kind == "atom":
        c = decode_atom_code(t)
        return th.atom_of_code(c) if th is not None else c
    if kind == "index":
        c = decode_index_code(t)
        return th.index(c) if th is not None else c
    if kind == "term":
        c = decode_term_code(t)
        return th.term_of_code(c) if th is not None else c
    if kind == "tree":
        return decode_tree(t, th)
    raise ValueError(f"unknown kind {kind!r}")
