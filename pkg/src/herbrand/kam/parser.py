"""Reader for λc program files: a sequence of ``Define name args = term ;;``.

Abstraction is written ``\\x. t`` or ``\\x t``; application is juxtaposition.
Free identifiers are resolved at link time to definitions, instructions or
``callcc``; integer literals stand for Scott numerals built from ``S``/``O``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .terms import CALLCC, TYPE, App, Instr, Lam, Ref, Term, Var


class ProgramError(Exception):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(where + message)


class LinkError(ProgramError):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<type>\.type\b)
  | (?P<op>;;|\\|\.|\(|\)|=|λ)
  | (?P<int>\d+)
  | (?P<ident>[^\W\d][\w'$*^]*(?:\.[^\W\d][\w'$*^]*)*)
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ProgramError(f"unexpected character {text[i]!r}", line, i - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, i - start + 1))
        i = m.end()
    toks.append(_Tok("eof", "", line, i - start + 1))
    return toks


@dataclass
class Program:
    """Ordered definitions plus substitution overrides."""

    definitions: dict[str, Term] = field(default_factory=dict)
    overrides: dict[str, Term] = field(default_factory=dict)

    def lookup(self, name: str) -> Term:
        if name in self.overrides:
            return self.overrides[name]
        return self.definitions[name]

    def __contains__(self, name: str) -> bool:
        return name in self.definitions or name in self.overrides

    def define(self, name: str, term: Term) -> None:
        if name in self.definitions:
            raise ProgramError(f"duplicate definition of {name!r}")
        self.definitions[name] = term

    def override(self, name: str, term: Term) -> None:
        """Replace a definition by an equivalent (e.g. faster) term."""
        if name not in self.definitions:
            raise LinkError(f"cannot override undefined {name!r}")
        self.overrides[name] = term

    def merged(self, other: "Program") -> "Program":
        out = Program(dict(self.definitions), {**self.overrides, **other.overrides})
        for name, t in other.definitions.items():
            out.define(name, t)
        return out


def nat_term(n: int) -> Term:
    t: Term = Ref("O")
    for _ in range(n):
        t = App(Ref("S"), t)
    return t


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text:
            raise ProgramError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}",
                               self.tok.line, self.tok.col)
        return self.advance()

    def binder(self) -> str:
        t = self.tok
        if t.kind != "ident":
            raise ProgramError(f"expected a variable after '\\', found {t.text!r}", t.line, t.col)
        name, dot, rest = t.text.partition(".")
        if dot:
            # "\x.body": the lexer glued the binder to the body's first identifier
            self.toks[self.pos] = _Tok("ident", rest, t.line, t.col + len(name) + 1)
            self.toks.insert(self.pos, _Tok("op", ".", t.line, t.col + len(name)))
        else:
            self.advance()
        return name

    def definitions(self) -> list[tuple[str, Term, _Tok]]:
        out = []
        while self.tok.kind != "eof":
            start = self.expect("Define")
            if self.tok.kind != "ident":
                raise ProgramError("expected a definition name", self.tok.line, self.tok.col)
            name = self.advance().text
            params = []
            while self.tok.kind == "ident":
                params.append(self.advance().text)
            self.expect("=")
            body = self.term()
            self.expect(";;")
            for p in reversed(params):
                body = Lam(p, body)
            out.append((name, body, start))
        return out

    def term(self) -> Term:
        if self.tok.text in ("\\", "λ"):
            return self.lam()
        t = self.atom()
        while True:
            if self.tok.text in ("\\", "λ"):
                return App(t, self.lam())
            if self.tok.kind in ("ident", "int", "type") or self.tok.text == "(":
                t = App(t, self.atom())
            else:
                return t

    def lam(self) -> Term:
        self.advance()
        x = self.binder()
        if self.tok.text == ".":
            self.advance()
        return Lam(x, self.term())

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.advance()
            return Var(t.text)
        if t.kind == "int":
            self.advance()
            return nat_term(int(t.text))
        if t.kind == "type":
            self.advance()
            return TYPE
        if t.text == "(":
            self.advance()
            inner = self.term()
            self.expect(")")
            return inner
        raise ProgramError(f"unexpected {t.text or 'end of input'!r}", t.line, t.col)


def parse_term(text: str, program: Optional[Program] = None,
               instructions: Iterable[str] = ()) -> Term:
    """Parse and link a single term against ``program``."""
    r = _Reader(text)
    t = r.term()
    if r.tok.kind != "eof":
        raise ProgramError(f"trailing input {r.tok.text!r}", r.tok.line, r.tok.col)
    names = set(program.definitions) if program else set()
    return link(t, names, set(instructions))


def link(t: Term, defined: set[str], instructions: set[str], where: str = "",
         bound: frozenset = frozenset()) -> Term:
    """Resolve free variables of ``t`` to references, instructions or callcc."""
    if not (t.free - bound):
        return t
    if isinstance(t, Var):
        if t.name in defined:
            return Ref(t.name)
        if t.name in instructions:
            return Instr(t.name)
        if t.name == "callcc":
            return CALLCC
        raise LinkError(f"unresolved reference {t.name!r}{where}")
    if isinstance(t, App):
        return App(link(t.fun, defined, instructions, where, bound),
                   link(t.arg, defined, instructions, where, bound))
    if isinstance(t, Lam):
        return Lam(t.var, link(t.body, defined, instructions, where, bound | {t.var}))
    return t


def parse_program(text: str, instructions: Iterable[str] = (),
                  base: Optional[Program] = None) -> Program:
    """Parse ``Define`` blocks and link them (plus ``base``'s definitions)."""
    instructions = set(instructions)
    entries = _Reader(text).definitions()
    prog = Program() if base is None else Program(dict(base.definitions), dict(base.overrides))
    names = set(prog.definitions)
    for name, _, tok in entries:
        if name in names:
            raise ProgramError(f"duplicate definition of {name!r}", tok.line, tok.col)
        names.add(name)
    for name, body, tok in entries:
        linked = link(body, names, instructions, f" in definition of {name!r} (line {tok.line})")
        prog.definitions[name] = linked
    return prog
