"""λc terms, stacks and processes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

_EMPTY: frozenset = frozenset()


class Term:
    __slots__ = ()
    free: frozenset

    def __call__(self, *args: "Term") -> "Term":
        t: Term = self
        for a in args:
            t = App(t, a)
        return t

    def __str__(self) -> str:
        return show(self)


def _freeze(obj, free) -> None:
    object.__setattr__(obj, "free", free)


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str
    free: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        _freeze(self, frozenset((self.name,)))

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class App(Term):
    fun: Term
    arg: Term
    free: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        f, a = self.fun.free, self.arg.free
        _freeze(self, f | a if a and f else (f or a))

    def __repr__(self) -> str:
        return f"App({self.fun!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: str
    body: Term
    free: frozenset = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        _freeze(self, self.body.free - {self.var} if self.var in self.body.free else self.body.free)

    def __repr__(self) -> str:
        return f"Lam({self.var!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class Callcc(Term):
    free: frozenset = field(init=False, compare=False, repr=False, default=_EMPTY)

    def __repr__(self) -> str:
        return "Callcc()"


@dataclass(frozen=True, repr=False)
class TypeDummy(Term):
    """The inert ``.type`` constant standing for erased types."""

    free: frozenset = field(init=False, compare=False, repr=False, default=_EMPTY)

    def __repr__(self) -> str:
        return "TypeDummy()"


@dataclass(frozen=True, repr=False)
class Instr(Term):
    name: str
    free: frozenset = field(init=False, compare=False, repr=False, default=_EMPTY)

    def __repr__(self) -> str:
        return f"Instr({self.name!r})"


@dataclass(frozen=True, repr=False)
class Ref(Term):
    """Reference to a program definition, unfolded when it reaches head position."""

    name: str
    free: frozenset = field(init=False, compare=False, repr=False, default=_EMPTY)

    def __repr__(self) -> str:
        return f"Ref({self.name!r})"


@dataclass(frozen=True, repr=False)
class Cont(Term):
    """Continuation constant k_π."""

    stack: "Stack"
    free: frozenset = field(init=False, compare=False, repr=False, default=_EMPTY)

    def __repr__(self) -> str:
        return f"Cont(<{len(self.stack)}>)"


CALLCC = Callcc()
TYPE = TypeDummy()


class Stack:
    """Persistent stack of closed terms over the single bottom ``nil``."""

    __slots__ = ("head", "tail", "depth")

    def __init__(self, head: Optional[Term] = None, tail: Optional["Stack"] = None):
        self.head = head
        self.tail = tail
        self.depth = 0 if tail is None else tail.depth + 1

    def push(self, t: Term) -> "Stack":
        return Stack(t, self)

    def pop(self) -> tuple[Term, "Stack"]:
        if self.tail is None:
            raise IndexError("pop from empty stack")
        return self.head, self.tail

    def __len__(self) -> int:
        return self.depth

    def __bool__(self) -> bool:
        return self.depth > 0

    def __iter__(self) -> Iterator[Term]:
        s = self
        while s.tail is not None:
            yield s.head
            s = s.tail

    def __eq__(self, other) -> bool:
        if not isinstance(other, Stack):
            return NotImplemented
        a, b = self, other
        while True:
            if a is b:
                return True
            if a.depth != b.depth or a.head != b.head:
                return False
            a, b = a.tail, b.tail

    def __hash__(self) -> int:
        return hash((self.depth, tuple(map(hash, self))))

    def __repr__(self) -> str:
        return "Stack(" + ", ".join(show(t) for t in self) + ")"


NIL = Stack()


def stack_of(terms: Iterable[Term]) -> Stack:
    """Stack whose top is the first of ``terms``."""
    s = NIL
    for t in reversed(list(terms)):
        s = s.push(t)
    return s


@dataclass(frozen=True)
class Process:
    head: Term
    stack: Stack = NIL

    def __str__(self) -> str:
        return f"{show(self.head)} ⋆ {show_stack(self.stack)}"


# -- substitution ------------------------------------------------------------

_fresh = itertools.count()


def fresh(base: str, avoid: frozenset) -> str:
    while True:
        name = f"{base.rstrip('0123456789_')}_{next(_fresh)}"
        if name not in avoid:
            return name


def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding ``t[u/x]``."""
    if x not in t.free:
        return t
    if isinstance(t, Var):
        return u
    if isinstance(t, App):
        return App(subst(t.fun, x, u), subst(t.arg, x, u))
    if isinstance(t, Lam):
        if t.var in u.free:
            y = fresh(t.var, u.free | t.body.free)
            return Lam(y, subst(subst(t.body, t.var, Var(y)), x, u))
        return Lam(t.var, subst(t.body, x, u))
    return t


def alpha_equal(a: Term, b: Term) -> bool:
    def go(a: Term, b: Term, env_a: dict, env_b: dict, depth: int) -> bool:
        if isinstance(a, Var) and isinstance(b, Var):
            return env_a.get(a.name, a.name) == env_b.get(b.name, b.name)
        if isinstance(a, Lam) and isinstance(b, Lam):
            marker = ("bound", depth)
            return go(a.body, b.body, {**env_a, a.var: marker}, {**env_b, b.var: marker}, depth + 1)
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fun, b.fun, env_a, env_b, depth) and go(a.arg, b.arg, env_a, env_b, depth)
        return type(a) is type(b) and not isinstance(a, (Var, Lam, App)) and a == b

    return go(a, b, {}, {}, 0)


# -- printing ----------------------------------------------------------------

def _nat_literal(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, App) and t.fun == Ref("S"):
        n += 1
        t = t.arg
    return n if t == Ref("O") and n > 0 else None


def show(t: Term, limit: int = 0) -> str:
    s = _show(t, 0)
    if limit and len(s) > limit:
        return s[: limit - 3] + "..."
    return s


def _show(t: Term, ctx: int) -> str:
    # ctx: 0 top level, 1 function position, 2 argument position
    n = _nat_literal(t)
    if n is not None:
        return str(n)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, (Ref, Instr)):
        return t.name
    if isinstance(t, Callcc):
        return "callcc"
    if isinstance(t, TypeDummy):
        return ".type"
    if isinstance(t, Cont):
        return f"k<{len(t.stack)}>"
    if isinstance(t, Lam):
        s = f"\\{t.var}. {_show(t.body, 0)}"
        return f"({s})" if ctx else s
    if isinstance(t, App):
        s = f"{_show(t.fun, 1)} {_show(t.arg, 2)}"
        return f"({s})" if ctx == 2 else s
    return repr(t)


def show_stack(s: Stack, limit: int = 0) -> str:
    parts = [show(t, limit) for t in s]
    return "·".join(parts + ["nil"])
