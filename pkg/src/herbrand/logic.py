"""Ground atoms, compounds, partial interpretations and Herbrand trees.

Truth values are ``True``, ``False`` or ``None`` (unknown), mirroring an
``option bool``.
"""
from __future__ import annotations

import abc
import itertools
import weakref
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

TruthValue3 = Optional[bool]
UNKNOWN: TruthValue3 = None


class Term:
    """Hash-consed ground term.

    ``head`` is a symbol name (``str``) or a numeric literal (``int``).
    Structurally equal terms are the same object, so equality and hashing
    never recurse (terms like f^10000(a) are routine in enumerations).
    """

    __slots__ = ("head", "args", "weight", "depth", "__weakref__")
    _table: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()

    def __new__(cls, head: Union[str, int], args: Iterable["Term"] = ()):
        args = tuple(args)
        key = (head, args)
        t = cls._table.get(key)
        if t is not None:
            return t
        if isinstance(head, int):
            if args or head < 0:
                raise ValueError("numeric literals are non-negative and take no arguments")
            weight, depth = head + 1, 0
        else:
            if not all(isinstance(a, Term) for a in args):
                raise TypeError("term arguments must be ground terms")
            weight = 1 + sum(a.weight for a in args)
            depth = 1 + max((a.depth for a in args), default=-1)
        t = object.__new__(cls)
        t.head, t.args, t.weight, t.depth = head, args, weight, depth
        cls._table[key] = t
        return t

    def __reduce__(self):
        return (Term, (self.head, self.args))

    @property
    def is_numeral(self) -> bool:
        return isinstance(self.head, int)

    def __str__(self) -> str:
        # iterative: unary chains can be thousands deep
        out: list[str] = []
        stack: list[object] = [self]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                out.append(item)
                continue
            assert isinstance(item, Term)
            out.append(str(item.head))
            if item.args:
                stack.append(")")
                for i, a in enumerate(reversed(item.args)):
                    stack.append(a)
                    if i < len(item.args) - 1:
                        stack.append(",")
                stack.append("(")
        return "".join(out)

    def __repr__(self) -> str:
        return f"Term({str(self)!r})"


def const(name: str) -> Term:
    return Term(name)


def num(n: int) -> Term:
    return Term(n)


def fn(name: str, *args: Term) -> Term:
    return Term(name, args)


@dataclass(frozen=True)
class Atom:
    """Ground atomic formula ``pred(args)``."""

    pred: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Index:
    """Axiom instance: axiom name plus the ground terms for its variables.

    ``rank`` is the position in the owning theory's enumeration; it is
    derived data and does not take part in equality.
    """

    axiom: str
    args: tuple[Term, ...] = ()
    rank: Optional[int] = field(default=None, compare=False)

    def __str__(self) -> str:
        if not self.args:
            return self.axiom
        return f"{self.axiom}@{','.join(str(a) for a in self.args)}"


# -- compounds ---------------------------------------------------------------

class Compound:
    __slots__ = ()

    def __invert__(self) -> "Compound":
        return Not(self)

    def __and__(self, other: "Compound") -> "Compound":
        return And(self, other)

    def __or__(self, other: "Compound") -> "Compound":
        return Or(self, other)


@dataclass(frozen=True)
class Atomic(Compound):
    atom: Atom

    def __str__(self) -> str:
        return str(self.atom)


@dataclass(frozen=True)
class And(Compound):
    left: Compound
    right: Compound

    def __str__(self) -> str:
        return f"({self.left} /\\ {self.right})"


@dataclass(frozen=True)
class Or(Compound):
    left: Compound
    right: Compound

    def __str__(self) -> str:
        return f"({self.left} \\/ {self.right})"


@dataclass(frozen=True)
class Not(Compound):
    body: Compound

    def __str__(self) -> str:
        return f"~{self.body}"


def atoms_of(c: Compound) -> list[Atom]:
    """Atoms of ``c`` in first-occurrence, left-to-right depth-first order."""
    seen: dict[Atom, None] = {}
    stack = [c]
    while stack:
        c = stack.pop()
        if isinstance(c, Atomic):
            seen.setdefault(c.atom)
        elif isinstance(c, (And, Or)):
            stack.append(c.right)
            stack.append(c.left)
        elif isinstance(c, Not):
            stack.append(c.body)
        else:
            raise TypeError(f"not a compound: {c!r}")
    return list(seen)


Valuation = Union[Mapping[Atom, bool], Callable[[Atom], bool]]


def as_oracle(val: Valuation, default: Optional[bool] = None) -> Callable[[Atom], bool]:
    """Turn a mapping (with optional default) or callable into a query function."""
    if callable(val) and not isinstance(val, Mapping):
        return val

    def query(a: Atom) -> bool:
        try:
            return val[a]
        except KeyError:
            if default is None:
                raise KeyError(f"valuation undefined on {a}") from None
            return default

    return query


def eval_compound(val: Valuation, c: Compound) -> bool:
    """Total Boolean evaluation of ``c`` under ``val``."""
    query = as_oracle(val)
    if isinstance(c, Atomic):
        return bool(query(c.atom))
    if isinstance(c, And):
        return eval_compound(query, c.left) and eval_compound(query, c.right)
    if isinstance(c, Or):
        return eval_compound(query, c.left) or eval_compound(query, c.right)
    if isinstance(c, Not):
        return not eval_compound(query, c.body)
    raise TypeError(f"not a compound: {c!r}")


# -- paths (partial interpretations) -----------------------------------------

class Path:
    """Reverse path from a tree position to the root.

    ``Left(a, p)`` records ``a`` true, ``Right(a, p)`` records ``a`` false.
    """

    __slots__ = ()

    def entries(self) -> Iterator[tuple[Atom, bool]]:
        """(atom, value) pairs from the node end towards the root."""
        p = self
        while not isinstance(p, _Top):
            yield p.atom, isinstance(p, Left)
            p = p.parent

    def __len__(self) -> int:
        return sum(1 for _ in self.entries())

    def assignment(self) -> dict[Atom, bool]:
        out: dict[Atom, bool] = {}
        for a, v in self.entries():
            out.setdefault(a, v)
        return out

    def root_first(self) -> list[tuple[Atom, bool]]:
        return list(self.entries())[::-1]

    def __str__(self) -> str:
        parts = [f"{a}={'T' if v else 'F'}" for a, v in self.root_first()]
        return "[" + ", ".join(parts) + "]"


class _Top(Path):
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = object.__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Top"

    def __reduce__(self):
        return (_Top, ())


Top = _Top()


@dataclass(frozen=True, repr=False)
class Left(Path):
    atom: Atom
    parent: Path

    def __repr__(self) -> str:
        return f"Left({self.atom}, {self.parent!r})"


@dataclass(frozen=True, repr=False)
class Right(Path):
    atom: Atom
    parent: Path

    def __repr__(self) -> str:
        return f"Right({self.atom}, {self.parent!r})"


def path_from(assignment: Iterable[tuple[Atom, bool]]) -> Path:
    """Build a path from root-first (atom, value) pairs."""
    p: Path = Top
    for a, v in assignment:
        p = Left(a, p) if v else Right(a, p)
    return p


def find(p: Path, a: Atom) -> TruthValue3:
    for b, v in p.entries():
        if b == a:
            return v
    return UNKNOWN


def peval(p: Path, c: Compound) -> TruthValue3:
    """Kleene strong three-valued evaluation of ``c`` on ``p``."""
    if isinstance(p, dict):
        lookup = p.get
    else:
        lookup = p.assignment().get
    return _peval(lookup, c)


def _peval(lookup, c: Compound) -> TruthValue3:
    if isinstance(c, Atomic):
        return lookup(c.atom)
    if isinstance(c, Not):
        v = _peval(lookup, c.body)
        return None if v is None else not v
    if isinstance(c, And):
        l = _peval(lookup, c.left)
        if l is False:
            return False
        r = _peval(lookup, c.right)
        if r is False:
            return False
        return True if (l and r) else None
    if isinstance(c, Or):
        l = _peval(lookup, c.left)
        if l is True:
            return True
        r = _peval(lookup, c.right)
        if r is True:
            return True
        return False if (l is False and r is False) else None
    raise TypeError(f"not a compound: {c!r}")


# -- Herbrand trees ----------------------------------------------------------

class HerbrandTree:
    __slots__ = ()


@dataclass(frozen=True)
class Contrad(HerbrandTree):
    index: Index


@dataclass(frozen=True)
class Exp(HerbrandTree):
    """Inner node: ``if_true`` is the subtree where ``atom`` holds."""

    atom: Atom
    if_true: HerbrandTree
    if_false: HerbrandTree


def tree_atoms(t: HerbrandTree) -> set[Atom]:
    out: set[Atom] = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Exp):
            out.add(t.atom)
            stack += [t.if_true, t.if_false]
    return out


def tree_leaves(t: HerbrandTree) -> list[Index]:
    """Leaf labels, left to right."""
    out: list[Index] = []
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Contrad):
            out.append(t.index)
        else:
            stack += [t.if_false, t.if_true]
    return out


def tree_inner_nodes(t: HerbrandTree) -> int:
    n, stack = 0, [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Exp):
            n += 1
            stack += [t.if_true, t.if_false]
    return n


def tree_depth(t: HerbrandTree) -> int:
    best, stack = 0, [(t, 0)]
    while stack:
        t, d = stack.pop()
        if isinstance(t, Exp):
            stack += [(t.if_true, d + 1), (t.if_false, d + 1)]
        else:
            best = max(best, d)
    return best


def descend(t: HerbrandTree, oracle: Callable[[Atom], bool]) -> tuple[Index, list[tuple[Atom, bool]]]:
    """Follow ``t`` as a BDD; return the leaf index and the answers given."""
    answers: list[tuple[Atom, bool]] = []
    while isinstance(t, Exp):
        v = bool(oracle(t.atom))
        answers.append((t.atom, v))
        t = t.if_true if v else t.if_false
    return t.index, answers


# -- ground theories ---------------------------------------------------------

class GroundTheory(abc.ABC):
    """Index enumeration plus the ``Th`` map.

    Ranks start at 0 and enumerate the indices without gaps. ``size`` is
    ``None`` when there are infinitely many indices.
    """

    size: Optional[int] = None

    @abc.abstractmethod
    def index(self, rank: int) -> Index:
        """Index at ``rank``; ``IndexError`` past the end of a finite theory."""

    @abc.abstractmethod
    def rank(self, index: Index) -> int:
        ...

    @abc.abstractmethod
    def th(self, index: Index) -> Compound:
        ...

    @abc.abstractmethod
    def relevant(self, atom: Atom, bound: Optional[int] = None) -> list[Index]:
        """Indices whose compound mentions ``atom``, sorted by rank.

        Completions of variables the atom leaves unconstrained are only
        listed up to rank ``bound``.
        """

    # codes used by the abstract machine encodings
    @abc.abstractmethod
    def atom_code(self, atom: Atom) -> int:
        ...

    @abc.abstractmethod
    def atom_of_code(self, code: int) -> Atom:
        ...

    def term_of_code(self, code: int) -> Term:
        raise NotImplementedError(f"{type(self).__name__} has no term enumeration")

    def term_code(self, term: Term) -> int:
        raise NotImplementedError(f"{type(self).__name__} has no term enumeration")

    def axiom_arities(self) -> dict[str, int]:
        """Axiom names, in declaration order, with their number of variables."""
        raise NotImplementedError

    def make_index(self, axiom: str, args: Iterable[Term] = ()) -> Index:
        i = Index(axiom, tuple(args))
        return Index(i.axiom, i.args, self.rank(i))

    def indices(self) -> Iterator[Index]:
        for r in itertools.count():
            if self.size is not None and r >= self.size:
                return
            yield self.index(r)

    def minimum(self) -> Index:
        return self.index(0)

    def pred(self, i: Index) -> Index:
        r = self.rank(i)
        return i if r == 0 else self.index(r - 1)


class FiniteTheory(GroundTheory):
    """A theory given by an explicit list of ``(name, compound)`` axioms."""

    def __init__(self, axioms: Iterable[tuple[str, Compound]]):
        self.axioms = list(axioms)
        names = [n for n, _ in self.axioms]
        if len(set(names)) != len(names):
            raise ValueError("duplicate axiom names")
        if not self.axioms:
            raise ValueError("empty theory cannot be contradictory")
        self.size = len(self.axioms)
        self._rank = {n: r for r, n in enumerate(names)}
        self._atoms: dict[Atom, int] = {}
        self._relevant: dict[Atom, list[Index]] = {}
        for r, (n, c) in enumerate(self.axioms):
            for a in atoms_of(c):
                self._atoms.setdefault(a, len(self._atoms))
                self._relevant.setdefault(a, []).append(Index(n, (), r))
        self._atom_list = list(self._atoms)

    def index(self, rank: int) -> Index:
        if not 0 <= rank < self.size:
            raise IndexError(f"rank {rank} out of range (theory has {self.size} indices)")
        return Index(self.axioms[rank][0], (), rank)

    def rank(self, index: Index) -> int:
        if index.args or index.axiom not in self._rank:
            raise KeyError(f"unknown index {index}")
        return self._rank[index.axiom]

    def th(self, index: Index) -> Compound:
        return self.axioms[self.rank(index)][1]

    def relevant(self, atom: Atom, bound: Optional[int] = None) -> list[Index]:
        return list(self._relevant.get(atom, ()))

    def axiom_arities(self) -> dict[str, int]:
        return {n: 0 for n, _ in self.axioms}

    def atom_code(self, atom: Atom) -> int:
        return self._atoms[atom]

    def atom_of_code(self, code: int) -> Atom:
        if not 0 <= code < len(self._atom_list):
            raise KeyError(f"no atom with code {code}")
        return self._atom_list[code]


# -- the <i, a> order --------------------------------------------------------

@dataclass(frozen=True)
class AtomPair:
    index: Index
    atom: Atom


def pair_key(th: GroundTheory, q: AtomPair) -> tuple[int, int]:
    atoms = atoms_of(th.th(q.index))
    if q.atom not in atoms:
        raise ValueError(f"{q.atom} does not occur in Th({q.index})")
    return th.rank(q.index), atoms.index(q.atom)


def pair_pred(th: GroundTheory, q: AtomPair) -> AtomPair:
    """Predecessor of ``q``; the global minimum is its own predecessor."""
    r, pos = pair_key(th, q)
    if pos > 0:
        return AtomPair(q.index, atoms_of(th.th(q.index))[pos - 1])
    if r > 0:
        prev = th.index(r - 1)
        return AtomPair(prev, atoms_of(th.th(prev))[-1])
    return q


def pair_min(th: GroundTheory) -> AtomPair:
    i = th.index(0)
    return AtomPair(i, atoms_of(th.th(i))[0])


# -- checker -----------------------------------------------------------------

@dataclass(frozen=True)
class CheckReport:
    ok: bool
    path: Optional[Path] = None
    clause: Optional[str] = None  # "leaf" or "node"
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def htree_check(th: GroundTheory, t: HerbrandTree) -> CheckReport:
    """Decide whether ``t`` is a Herbrand tree for ``th``.

    Every leaf ``Contrad i`` must have ``Th i`` false on its path, and every
    inner node's atom must be unassigned on the path above it.
    """
    stack: list[tuple[HerbrandTree, Path, dict[Atom, bool]]] = [(t, Top, {})]
    while stack:
        t, p, assigned = stack.pop()
        if isinstance(t, Contrad):
            try:
                c = th.th(t.index)
            except (KeyError, IndexError, ValueError) as e:
                return CheckReport(False, p, "leaf", f"unknown index {t.index}: {e}")
            v = _peval(assigned.get, c)
            if v is not False:
                shown = "unknown" if v is None else "true"
                return CheckReport(False, p, "leaf",
                                   f"Th({t.index}) = {c} is {shown} on {p}, not false")
        elif isinstance(t, Exp):
            if t.atom in assigned:
                return CheckReport(False, p, "node", f"atom {t.atom} already assigned on {p}")
            stack.append((t.if_false, Right(t.atom, p), {**assigned, t.atom: False}))
            stack.append((t.if_true, Left(t.atom, p), {**assigned, t.atom: True}))
        else:
            return CheckReport(False, p, "node", f"not a tree node: {t!r}")
    return CheckReport(True)
