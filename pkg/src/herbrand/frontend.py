"""Theory files: parsing, Herbrand universe/base enumeration, grounding.

A theory file declares a signature and a list of universally quantified
axioms::

    option numerals;
    pred Crow/1, Black/1, White/1;
    axiom crow_black: forall n. ~Crow(n) \\/ Black(n);
    axiom crow42:     Crow(42);
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .enumeration import EmptyUniverse, FamilyEnumerator, TermEnumerator
from .logic import And, Atom, Atomic, Compound, GroundTheory, Index, Not, Or, Term


class TheoryError(Exception):
    """Error in a theory source, with 1-based location when known."""

    kind = "error"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{self.kind}: {message}")


class TheorySyntaxError(TheoryError):
    kind = "syntax error"


class UnknownSymbolError(TheoryError):
    kind = "unknown symbol"


class ArityError(TheoryError):
    kind = "arity mismatch"


class UnboundVariableError(TheoryError):
    kind = "unbound variable"


class DuplicateNameError(TheoryError):
    kind = "duplicate name"


# -- schema syntax -----------------------------------------------------------

@dataclass(frozen=True)
class TVar:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TApp:
    """Term pattern: constant, numeral (int head) or function application."""

    head: Union[str, int]
    args: tuple["Pattern", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return str(self.head)
        return f"{self.head}({','.join(map(str, self.args))})"


Pattern = Union[TVar, TApp]


@dataclass(frozen=True)
class PAtom:
    pred: str
    args: tuple[Pattern, ...] = ()

    def __str__(self) -> str:
        return self.pred if not self.args else f"{self.pred}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class FAtom:
    atom: PAtom


@dataclass(frozen=True)
class FNot:
    body: "Formula"


@dataclass(frozen=True)
class FAnd:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FOr:
    left: "Formula"
    right: "Formula"


Formula = Union[FAtom, FNot, FAnd, FOr]




def formula_atoms(f: Formula) -> list[PAtom]:
    """Atomic patterns of ``f`` left to right (with repetitions)."""
    if isinstance(f, FAtom):
        return [f.atom]
    if isinstance(f, FNot):
        return formula_atoms(f.body)
    return formula_atoms(f.left) + formula_atoms(f.right)


def show_formula(f: Formula) -> str:
    if isinstance(f, FAtom):
        return str(f.atom)
    if isinstance(f, FNot):
        return f"~{show_formula(f.body)}"
    op = "/\\" if isinstance(f, FAnd) else "\\/"
    return f"({show_formula(f.left)} {op} {show_formula(f.right)})"


@dataclass
class Signature:
    constants: list[str] = field(default_factory=list)
    functions: list[tuple[str, int]] = field(default_factory=list)
    predicates: list[tuple[str, int]] = field(default_factory=list)
    numerals: bool = False

    def kind_of(self, name: str) -> Optional[str]:
        if name in self.constants:
            return "constant"
        if name in dict(self.functions):
            return "function"
        if name in dict(self.predicates):
            return "predicate"
        return None


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    variables: tuple[str, ...]
    body: Formula

    def __str__(self) -> str:
        q = f"forall {' '.join(self.variables)}. " if self.variables else ""
        return f"axiom {self.name}: {q}{show_formula(self.body)};"


@dataclass
class TheorySpec:
    signature: Signature
    axioms: list[AxiomSchema]

    def axiom(self, name: str) -> AxiomSchema:
        for a in self.axioms:
            if a.name == name:
                return a
        raise KeyError(f"no axiom named {name}")


# -- lexer -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<op><->|->|/\\|\\/|~|\(|\)|,|;|:|\.|/)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_KEYWORDS = {"const", "fun", "pred", "option", "axiom", "forall"}


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise TheorySyntaxError(f"unexpected character {text[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tok_kind = "kw" if kind == "ident" and m.group() in _KEYWORDS else kind
            toks.append(Tok(tok_kind, m.group(), line, i - line_start + 1))
        i = m.end()
    toks.append(Tok("eof", "", line, i - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature] = None):
        self.toks = tokenize(text)
        self.pos = 0
        self.sig = sig if sig is not None else Signature()

    # token helpers
    @property
    def tok(self) -> Tok:
        return self.toks[self.pos]

    def advance(self) -> Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "kw", "ident"):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Tok:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise TheorySyntaxError(f"expected {text!r}, found {found!r}", self.tok.line, self.tok.col)
        return self.advance()

    def ident(self, what: str = "identifier") -> Tok:
        if self.tok.kind != "ident":
            found = self.tok.text or "end of input"
            raise TheorySyntaxError(f"expected {what}, found {found!r}", self.tok.line, self.tok.col)
        return self.advance()

    def error(self, cls, msg: str, tok: Tok):
        return cls(msg, tok.line, tok.col)

    # declarations
    def theory(self) -> TheorySpec:
        axioms: list[AxiomSchema] = []
        while self.tok.kind != "eof":
            t = self.tok
            if self.accept("const"):
                for name in self.name_list():
                    self.declare(name, "constant")
                    self.sig.constants.append(name.text)
            elif self.accept("fun"):
                for name, k in self.arity_list(min_arity=1):
                    self.declare(name, "function")
                    self.sig.functions.append((name.text, k))
            elif self.accept("pred"):
                for name, k in self.arity_list(min_arity=0):
                    self.declare(name, "predicate")
                    self.sig.predicates.append((name.text, k))
            elif self.accept("option"):
                opt = self.ident("option name")
                if opt.text != "numerals":
                    raise self.error(TheorySyntaxError, f"unknown option {opt.text!r}", opt)
                self.sig.numerals = True
            elif self.accept("axiom"):
                ax = self.axiom_decl()
                if any(a.name == ax.name for a in axioms):
                    raise self.error(DuplicateNameError, f"axiom {ax.name!r} declared twice", t)
                axioms.append(ax)
                continue
            else:
                raise self.error(TheorySyntaxError,
                                 f"expected a declaration, found {t.text!r}", t)
            self.expect(";")
        return TheorySpec(self.sig, axioms)

    def declare(self, name: Tok, kind: str) -> None:
        if self.sig.kind_of(name.text) is not None:
            raise self.error(DuplicateNameError, f"{name.text!r} already declared", name)

    def name_list(self) -> list[Tok]:
        names = [self.ident("symbol name")]
        while self.accept(","):
            names.append(self.ident("symbol name"))
        return names

    def arity_list(self, min_arity: int) -> list[tuple[Tok, int]]:
        out = []
        while True:
            name = self.ident("symbol name")
            self.expect("/")
            k = self.tok
            if k.kind != "int":
                raise self.error(TheorySyntaxError, "expected an arity", k)
            self.advance()
            if int(k.text) < min_arity:
                raise self.error(ArityError, f"{name.text} needs arity >= {min_arity}", k)
            out.append((name, int(k.text)))
            if not self.accept(","):
                return out

    def axiom_decl(self) -> AxiomSchema:
        name = self.ident("axiom name")
        self.expect(":")
        variables: list[str] = []
        if self.accept("forall"):
            while self.tok.kind == "ident":
                v = self.advance()
                if self.sig.kind_of(v.text) is not None:
                    raise self.error(DuplicateNameError, f"variable {v.text!r} shadows a symbol", v)
                if v.text in variables:
                    raise self.error(DuplicateNameError, f"variable {v.text!r} bound twice", v)
                variables.append(v.text)
            if not variables:
                raise self.error(TheorySyntaxError, "forall needs at least one variable", self.tok)
            self.expect(".")
        body = self.formula(set(variables))
        self.expect(";")
        return AxiomSchema(name.text, tuple(variables), body)

    # formulas, loosest first: <->, ->, \/, /\, ~
    def formula(self, bound: set[str]) -> Formula:
        left = self.implication(bound)
        while self.accept("<->"):
            right = self.implication(bound)
            left = FOr(FAnd(left, right), FAnd(FNot(left), FNot(right)))
        return left

    def implication(self, bound: set[str]) -> Formula:
        left = self.disjunction(bound)
        if self.accept("->"):
            right = self.implication(bound)
            return FOr(FNot(left), right)
        return left

    def disjunction(self, bound: set[str]) -> Formula:
        left = self.conjunction(bound)
        while self.accept("\\/"):
            left = FOr(left, self.conjunction(bound))
        return left

    def conjunction(self, bound: set[str]) -> Formula:
        left = self.unary(bound)
        while self.accept("/\\"):
            left = FAnd(left, self.unary(bound))
        return left

    def unary(self, bound: set[str]) -> Formula:
        if self.accept("~"):
            return FNot(self.unary(bound))
        if self.accept("("):
            f = self.formula(bound)
            self.expect(")")
            return f
        return FAtom(self.atom(bound))

    def atom(self, bound: set[str]) -> PAtom:
        name = self.ident("predicate")
        preds = dict(self.sig.predicates)
        if name.text not in preds:
            raise self.error(UnknownSymbolError, f"unknown predicate {name.text!r}", name)
        args = self.arguments(bound)
        if len(args) != preds[name.text]:
            raise self.error(ArityError, f"{name.text} expects {preds[name.text]} "
                                         f"argument(s), got {len(args)}", name)
        return PAtom(name.text, tuple(args))

    def arguments(self, bound: set[str]) -> list[Pattern]:
        if not self.accept("("):
            return []
        args = [self.term(bound)]
        while self.accept(","):
            args.append(self.term(bound))
        self.expect(")")
        return args

    def term(self, bound: set[str]) -> Pattern:
        t = self.tok
        if t.kind == "int":
            self.advance()
            if not self.sig.numerals:
                raise self.error(UnknownSymbolError,
                                 f"numeric literal {t.text} used without 'option numerals'", t)
            return TApp(int(t.text))
        name = self.ident("term")
        if name.text in bound:
            if self.tok.text == "(":
                raise self.error(ArityError, f"variable {name.text} applied to arguments", name)
            return TVar(name.text)
        funs = dict(self.sig.functions)
        if name.text in self.sig.constants:
            if self.tok.text == "(":
                raise self.error(ArityError, f"constant {name.text} applied to arguments", name)
            return TApp(name.text)
        if name.text in funs:
            args = self.arguments(bound)
            if len(args) != funs[name.text]:
                raise self.error(ArityError, f"{name.text} expects {funs[name.text]} "
                                             f"argument(s), got {len(args)}", name)
            return TApp(name.text, tuple(args))
        if self.tok.text == "(":
            raise self.error(UnknownSymbolError, f"unknown function symbol {name.text!r}", name)
        raise self.error(UnboundVariableError, f"{name.text!r} is neither a bound variable "
                                               f"nor a declared constant", name)


def parse_theory(text: str) -> TheorySpec:
    """Parse a theory source; implications and equivalences are desugared."""
    return _Parser(text).theory()


# ground atom / term text, e.g. in tree files and valuations: no signature needed

_GROUND = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\()|(\))|(,))")


def _ground_tokens(text: str) -> list[tuple[str, str]]:
    out, i = [], 0
    text = text.strip()
    while i < len(text):
        m = _GROUND.match(text, i)
        if not m or m.end() == i:
            raise TheorySyntaxError(f"cannot read {text!r} at column {i + 1}")
        kind = ["int", "ident", "(", ")", ","][m.lastindex - 1]
        out.append((kind, m.group(m.lastindex)))
        i = m.end()
        while i < len(text) and text[i].isspace():
            i += 1
    return out


def _ground_term(toks: list[tuple[str, str]], i: int) -> tuple[Term, int]:
    # frames: [head, args]
    stack: list[list] = []
    while True:
        if i >= len(toks):
            raise TheorySyntaxError("unexpected end of term")
        kind, text = toks[i]
        if kind == "int":
            built, i = Term(int(text)), i + 1
        elif kind == "ident":
            if i + 1 < len(toks) and toks[i + 1][0] == "(":
                stack.append([text, []])
                i += 2
                continue
            built, i = Term(text), i + 1
        else:
            raise TheorySyntaxError(f"unexpected {text!r} in term")
        while True:
            if not stack:
                return built, i
            stack[-1][1].append(built)
            if i < len(toks) and toks[i][0] == ",":
                i += 1
                break
            if i < len(toks) and toks[i][0] == ")":
                head, args = stack.pop()
                built, i = Term(head, args), i + 1
                continue
            raise TheorySyntaxError("expected ',' or ')' in term")


def parse_term(text: str) -> Term:
    toks = _ground_tokens(text)
    t, i = _ground_term(toks, 0)
    if i != len(toks):
        raise TheorySyntaxError(f"trailing input in term {text!r}")
    return t


def parse_atom(text: str) -> Atom:
    toks = _ground_tokens(text)
    if not toks or toks[0][0] != "ident":
        raise TheorySyntaxError(f"not an atom: {text!r}")
    t, i = _ground_term(toks, 0)
    if i != len(toks):
        raise TheorySyntaxError(f"trailing input in atom {text!r}")
    return Atom(t.head, t.args)


# -- grounding ---------------------------------------------------------------

def instantiate(t: Pattern, subst: dict[str, Term]) -> Term:
    if isinstance(t, TVar):
        return subst[t.name]
    return Term(t.head, [instantiate(a, subst) for a in t.args])


def ground_formula(f: Formula, subst: dict[str, Term]) -> Compound:
    if isinstance(f, FAtom):
        return Atomic(Atom(f.atom.pred, tuple(instantiate(a, subst) for a in f.atom.args)))
    if isinstance(f, FNot):
        return Not(ground_formula(f.body, subst))
    if isinstance(f, FAnd):
        return And(ground_formula(f.left, subst), ground_formula(f.right, subst))
    return Or(ground_formula(f.left, subst), ground_formula(f.right, subst))


def match(pattern: Pattern, term: Term, subst: dict[str, Term]) -> Optional[dict[str, Term]]:
    """First-order matching of a pattern against a ground term."""
    stack = [(pattern, term)]
    subst = dict(subst)
    while stack:
        p, t = stack.pop()
        if isinstance(p, TVar):
            bound = subst.get(p.name)
            if bound is None:
                subst[p.name] = t
            elif bound is not t:
                return None
        elif p.head != t.head or len(p.args) != len(t.args) or \
                isinstance(p.head, int) != isinstance(t.head, int):
            return None
        else:
            stack.extend(zip(p.args, t.args))
    return subst


class CompiledTheory(GroundTheory):
    """A :class:`TheorySpec` grounded over its Herbrand universe."""

    def __init__(self, spec: TheorySpec):
        if not spec.axioms:
            raise TheoryError("empty theory cannot be contradictory")
        self.spec = spec
        sig = spec.signature
        try:
            self.terms = TermEnumerator(sig.constants, sig.functions, sig.numerals)
        except EmptyUniverse as e:
            raise TheoryError(str(e)) from None
        self._axiom_pos = {a.name: j for j, a in enumerate(spec.axioms)}
        self.index_enum = FamilyEnumerator(self.terms, [len(a.variables) for a in spec.axioms])
        self._pred_pos = {p: j for j, (p, _) in enumerate(sig.predicates)}
        self.atom_enum = FamilyEnumerator(self.terms, [k for _, k in sig.predicates])
        self.size = self.index_enum.size
        self._th_cache: dict[Index, Compound] = {}

    def axiom_arities(self) -> dict[str, int]:
        return {a.name: len(a.variables) for a in self.spec.axioms}

    # terms
    def nth_term(self, k: int) -> Term:
        return self.terms.nth(k)

    def term_rank(self, t: Term) -> int:
        return self.terms.rank(t)

    term_of_code = nth_term
    term_code = term_rank

    # indices
    def index(self, rank: int) -> Index:
        j, args = self.index_enum.nth(rank)
        return Index(self.spec.axioms[j].name, args, rank)

    def rank(self, index: Index) -> int:
        if index.rank is not None:
            return index.rank
        try:
            j = self._axiom_pos[index.axiom]
        except KeyError:
            raise KeyError(f"unknown axiom {index.axiom!r}") from None
        return self.index_enum.rank(j, index.args)

    def index_weight(self, index: Index) -> int:
        return sum(t.weight for t in index.args)

    def th(self, index: Index) -> Compound:
        key = Index(index.axiom, index.args)
        c = self._th_cache.get(key)
        if c is None:
            ax = self.spec.axiom(index.axiom)
            if len(index.args) != len(ax.variables):
                raise ValueError(f"{ax.name} takes {len(ax.variables)} argument(s)")
            c = ground_formula(ax.body, dict(zip(ax.variables, index.args)))
            if len(self._th_cache) < 100_000:
                self._th_cache[key] = c
        return c

    # atoms
    def atom_code(self, atom: Atom) -> int:
        try:
            j = self._pred_pos[atom.pred]
        except KeyError:
            raise KeyError(f"unknown predicate {atom.pred!r}") from None
        return self.atom_enum.rank(j, atom.args)

    def atom_of_code(self, code: int) -> Atom:
        j, args = self.atom_enum.nth(code)
        return Atom(self.spec.signature.predicates[j][0], args)

    # relevance
    def relevant(self, atom: Atom, bound: Optional[int] = None) -> list[Index]:
        max_weight = None
        if bound is not None and not self.terms.finite:
            max_weight = self.index_enum.weight_of_rank(bound) if self.size is None or \
                bound < self.size else None
        found: dict[Index, bool] = {}  # index -> came from a bounded completion
        for ax in self.spec.axioms:
            for pat in formula_atoms(ax.body):
                if pat.pred != atom.pred or len(pat.args) != len(atom.args):
                    continue
                subst: Optional[dict[str, Term]] = {}
                for p, t in zip(pat.args, atom.args):
                    subst = match(p, t, subst)
                    if subst is None:
                        break
                if subst is None:
                    continue
                completed = any(v not in subst for v in ax.variables)
                for args in self._completions(ax, subst, max_weight):
                    i = Index(ax.name, args)
                    found[i] = found.get(i, True) and completed
        out = []
        for i, completed in found.items():
            try:
                r = self.rank(i)
            except ValueError:  # atom mentions symbols outside the signature
                continue
            if completed and bound is not None and not self.terms.finite and r > bound:
                continue
            out.append(Index(i.axiom, i.args, r))
        out.sort(key=lambda i: i.rank)
        return out

    def _completions(self, ax: AxiomSchema, subst: dict[str, Term],
                     max_weight: Optional[int]) -> Iterator[tuple[Term, ...]]:
        free = [v for v in ax.variables if v not in subst]
        if not free:
            yield tuple(subst[v] for v in ax.variables)
            return
        if self.terms.finite:
            consts = [Term(c) for c in self.spec.signature.constants]
            extras: Iterable[tuple[Term, ...]] = itertools.product(consts, repeat=len(free))
        elif max_weight is None:
            return
        else:
            fixed = sum(t.weight for t in subst.values())
            extras = (extra for W in range(len(free), max_weight - fixed + 1)
                      for extra in self.terms.tuples_of_weight(len(free), W))
        for extra in extras:
            full = {**subst, **dict(zip(free, extra))}
            yield tuple(full[v] for v in ax.variables)


def compile_theory(spec: Union[TheorySpec, str]) -> CompiledTheory:
    if isinstance(spec, str):
        spec = parse_theory(spec)
    return CompiledTheory(spec)


def nth_term(sig: Signature, k: int) -> Term:
    return TermEnumerator(sig.constants, sig.functions, sig.numerals).nth(k)


def term_rank(sig: Signature, t: Term) -> int:
    return TermEnumerator(sig.constants, sig.functions, sig.numerals).rank(t)


def nth_index(spec: TheorySpec, k: int) -> Index:
    return CompiledTheory(spec).index(k)


def rank_of_index(spec: TheorySpec, i: Index) -> int:
    return CompiledTheory(spec).rank(i)


def ground(spec: TheorySpec, i: Index) -> Compound:
    return CompiledTheory(spec).th(i)


def relevant_indices(spec: TheorySpec, a: Atom, bound: Optional[int] = None) -> list[Index]:
    return CompiledTheory(spec).relevant(a, bound)
