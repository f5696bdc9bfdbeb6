"""A KAM extended with tree-building instructions.

Two stores survive backtracking: a zipper over the partial Herbrand tree
and a ``cont`` continuation. ``test`` forks on atoms that the working
branch has not decided yet, ``contradict`` closes a branch and resumes a
frozen one, and ``finish`` hands the completed tree to ``cont``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Union

from .kam.encodings import (DecodeError, decode_atom_code, decode_index_code,
                            decode_nat, decode_term_code, decode_tree, encode_tree, prelude)
from .kam.machine import BASE_INSTRUCTIONS, Halt, Machine, Stuck
from .kam.parser import Program, parse_program
from .kam.terms import App, Instr, Lam, Process, Ref, Stack, Term, Var, show
from .logic import (And, Atom, Atomic, Compound, Contrad, Exp, GroundTheory, HerbrandTree,
                    Index, Left, Not, Or, Path, Right, Top, htree_check)

SCHEDULER_INSTRUCTIONS = ("test", "contradict", "finish", "save", "reset")
AXIOM_PREFIX = "Axiom."

HARNESS = "Define eval_tree proof k = save (Mtree k) proof ;;\n"


# -- zipper -------------------------------------------------------------------

@dataclass(frozen=True)
class ZContrad:
    index: Index


@dataclass(frozen=True)
class ZFrozen:
    process: Process


class _Working:
    def __repr__(self) -> str:
        return "Working"


WORKING = _Working()


@dataclass(eq=False)
class ZNode:
    atom: Atom
    left: "ZTree"
    right: "ZTree"


ZTree = Union[ZNode, ZContrad, ZFrozen, _Working]


class Zipper:
    """Partial tree plus the route from the root to the working node."""

    def __init__(self):
        self.reset()

    def reset(self) -> None:
        self.root: ZTree = WORKING
        self.route: Optional[list[tuple[ZNode, bool]]] = []  # (node, went left)

    @property
    def active(self) -> bool:
        return self.route is not None

    def _put(self, t: ZTree) -> None:
        if not self.route:
            self.root = t
            return
        node, went_left = self.route[-1]
        if went_left:
            node.left = t
        else:
            node.right = t

    def knowledge(self) -> dict[Atom, bool]:
        return {node.atom: went_left for node, went_left in self.route or ()}

    def path(self) -> Path:
        p: Path = Top
        for node, went_left in self.route or ():
            p = Left(node.atom, p) if went_left else Right(node.atom, p)
        return p

    def branch(self, atom: Atom, on_true: Process) -> None:
        node = ZNode(atom, ZFrozen(on_true), WORKING)
        self._put(node)
        self.route.append((node, False))

    def seal(self, index: Index) -> None:
        self._put(ZContrad(index))
        self.route = None

    def thaw(self) -> Optional[Process]:
        """Resume the leftmost frozen leaf, or return None when none is left."""
        route: list[tuple[ZNode, bool]] = []
        t = self.root
        stack: list[tuple[ZTree, list]] = [(self.root, [])]
        while stack:
            t, route = stack.pop()
            if isinstance(t, ZFrozen):
                self.route = route
                self._put(WORKING)
                return t.process
            if isinstance(t, ZNode):
                stack.append((t.right, route + [(t, False)]))
                stack.append((t.left, route + [(t, True)]))
        return None

    def count(self, kind) -> int:
        n, todo = 0, [self.root]
        while todo:
            t = todo.pop()
            if isinstance(t, ZNode):
                todo += [t.left, t.right]
            elif kind is WORKING and t is WORKING or kind is not WORKING and isinstance(t, kind):
                n += 1
        return n

    def complete(self) -> bool:
        return self.count(WORKING) == 0 and self.count(ZFrozen) == 0

    def tree(self) -> HerbrandTree:
        def go(t: ZTree) -> HerbrandTree:
            if isinstance(t, ZContrad):
                return Contrad(t.index)
            if isinstance(t, ZNode):
                return Exp(t.atom, go(t.left), go(t.right))
            raise SchedulerError("tree is not complete", self)

        return go(self.root)

    def render(self) -> str:
        out: list[str] = []

        def go(t: ZTree, indent: str, label: str) -> None:
            if isinstance(t, ZNode):
                out.append(f"{indent}{label}{t.atom}?")
                go(t.left, indent + "  ", "T: ")
                go(t.right, indent + "  ", "F: ")
            elif isinstance(t, ZContrad):
                out.append(f"{indent}{label}contradiction: {t.index}")
            elif isinstance(t, ZFrozen):
                out.append(f"{indent}{label}frozen: {show(t.process.head, 60)}")
            else:
                out.append(f"{indent}{label}<working>")

        go(self.root, "", "")
        return "\n".join(out)


class SchedulerError(Exception):
    def __init__(self, message: str, zipper: Optional[Zipper] = None):
        self.zipper_state = zipper.render() if zipper is not None else ""
        detail = f"\nzipper:\n{self.zipper_state}" if self.zipper_state else ""
        super().__init__(message + detail)


# -- axiom realizers ----------------------------------------------------------

def _atom_term(th: GroundTheory, a: Atom) -> Term:
    from .kam.encodings import encode_value
    return encode_value("atom", th.atom_code(a))


def _realize(th: GroundTheory, c: Compound, yes: Term, no: Term) -> Term:
    # yes runs when c holds under the knowledge base, no when it fails
    if isinstance(c, Atomic):
        return Instr("test")(_atom_term(th, c.atom), yes, no)
    if isinstance(c, Not):
        return _realize(th, c.body, no, yes)
    if isinstance(c, And):
        return _realize(th, c.left, _realize(th, c.right, yes, no), no)
    if isinstance(c, Or):
        return _realize(th, c.left, yes, _realize(th, c.right, yes, no))
    raise TypeError(f"not a compound: {c!r}")


def axiom_realizer(th: GroundTheory, i: Index) -> Term:
    """``\\s. R`` where R tests the atoms of Th i and refutes with ``contradict î``."""
    from .kam.encodings import encode_value
    refute = App(Instr("contradict"), encode_value("index", th.rank(i)))
    return Lam("s", _realize(th, th.th(i), Var("s"), refute))


# -- the machine --------------------------------------------------------------

@dataclass(frozen=True)
class Done:
    tree: HerbrandTree


@dataclass(frozen=True)
class TestEvent:
    path: Path
    atom: Atom
    value: bool
    fresh: bool


class SchedulerMachine(Machine):
    def __init__(self, program: Program, th: GroundTheory):
        super().__init__(program)
        self.th = th
        self.zipper = Zipper()
        self.cont: Optional[Term] = None
        self.frozen_created = 0
        self.finished = False
        self.tests: list[TestEvent] = []
        self.instructions.update({
            "test": SchedulerMachine._test, "contradict": SchedulerMachine._contradict,
            "finish": SchedulerMachine._finish, "save": SchedulerMachine._save,
            "reset": SchedulerMachine._reset,
        })
        for name, arity in th.axiom_arities().items():
            self.instructions[AXIOM_PREFIX + name] = _axiom_handler(name, arity)

    def _args(self, name: str, stack: Stack, n: int) -> tuple[list[Term], Stack]:
        if len(stack) < n:
            raise SchedulerError(f"{name} needs {n} arguments, stack has {len(stack)}", self.zipper)
        out = []
        for _ in range(n):
            t, stack = stack.pop()
            out.append(t)
        return out, stack

    def _test(self, stack: Stack):
        (a, u1, u2), rest = self._args("test", stack, 3)
        if not self.zipper.active:
            raise SchedulerError("test with no working node", self.zipper)
        try:
            atom = self.th.atom_of_code(decode_atom_code(a))
        except (DecodeError, KeyError) as e:
            raise SchedulerError(f"test on a malformed atom: {e}", self.zipper) from None
        kb = self.zipper.knowledge()
        path = self.zipper.path()
        if atom in kb:
            self.tests.append(TestEvent(path, atom, kb[atom], False))
            return Process(u1 if kb[atom] else u2, rest)
        self.tests.append(TestEvent(path, atom, False, True))
        self.zipper.branch(atom, Process(u1, rest))
        self.frozen_created += 1
        return Process(u2, rest)

    def _contradict(self, stack: Stack):
        (t,), rest = self._args("contradict", stack, 1)
        if not self.zipper.active:
            raise SchedulerError("contradict with no working node", self.zipper)
        try:
            index = self.th.index(decode_index_code(t))
        except (DecodeError, IndexError, KeyError) as e:
            raise SchedulerError(f"contradict with an undecodable label: {e}", self.zipper) from None
        self.zipper.seal(index)
        resumed = self.zipper.thaw()
        if resumed is not None:
            return resumed
        return self._finish(rest)

    def _finish(self, stack: Stack):
        if self.cont is None:
            raise SchedulerError("finish with an empty cont store", self.zipper)
        if not self.zipper.complete():
            raise SchedulerError("finish on an incomplete tree", self.zipper)
        self.finished = True
        return Process(self.cont, stack.push(encode_tree(self.zipper.tree(), self.th)))

    def _save(self, stack: Stack):
        (c, k), rest = self._args("save", stack, 2)
        self.cont = c
        return Process(k, rest)

    def _reset(self, stack: Stack):
        (k,), rest = self._args("reset", stack, 1)
        self.zipper.reset()
        self.finished = False
        return Process(k, rest)

    def sched_step(self, p: Process) -> Union[Process, Halt, Stuck, Done]:
        _, nxt = self.step(p)
        if isinstance(nxt, Halt) and self.finished:
            return Done(decode_tree(nxt.value, self.th))
        return nxt


def _term_code(t: Term) -> int:
    # a bare numeral is read as the code itself
    try:
        return decode_term_code(t)
    except DecodeError:
        return decode_nat(t)


def _axiom_handler(name: str, arity: int):
    def handler(m: SchedulerMachine, stack: Stack):
        args, rest = m._args(AXIOM_PREFIX + name, stack, arity)
        try:
            terms = [m.th.term_of_code(_term_code(a)) for a in args]
            index = m.th.make_index(name, terms)
        except (DecodeError, KeyError, IndexError, NotImplementedError) as e:
            raise SchedulerError(f"bad argument to {AXIOM_PREFIX}{name}: {e}", m.zipper) from None
        return Process(axiom_realizer(m.th, index), rest)

    return handler


def instruction_names(th: GroundTheory) -> set[str]:
    return (set(BASE_INSTRUCTIONS) | set(SCHEDULER_INSTRUCTIONS)
            | {AXIOM_PREFIX + n for n in th.axiom_arities()})


def load_proof(text: str, th: GroundTheory) -> Program:
    """Link a proof file against the prelude, the harness and the axiom instructions."""
    names = instruction_names(th)
    base = parse_program(HARNESS, names, base=prelude(names))
    return parse_program(text, names, base=base)


BUILTIN_PROOFS = {"whitecrow": "whitecrow.lc", "pseudo": "pseudo.lc"}


def builtin_proof(name: str) -> str:
    try:
        fname = BUILTIN_PROOFS[name]
    except KeyError:
        raise ValueError(f"no builtin proof {name!r}; known: {', '.join(BUILTIN_PROOFS)}") from None
    return resources.files("herbrand").joinpath("data", fname).read_text(encoding="utf-8")


@dataclass
class HerbrandRun:
    tree: HerbrandTree
    steps: int
    frozen: int
    machine: SchedulerMachine
    trace: list[str] = field(default_factory=list)


def run_herbrand(prog: Program, proof: str, th: GroundTheory, fuel: int = 100_000,
                 trace: bool = False) -> HerbrandRun:
    """Run ``eval_tree proof stop`` and return the tree the scheduler built."""
    if proof not in prog:
        raise SchedulerError(f"proof {proof!r} is not defined")
    m = SchedulerMachine(prog, th)
    res = m.run(App(App(Ref("eval_tree"), Ref(proof)), Instr("stop")), fuel=fuel, trace=trace)
    if res.outcome == "out-of-fuel":
        raise SchedulerError(f"fuel exhausted after {res.steps} steps", m.zipper)
    if res.outcome == "stuck":
        raise SchedulerError(f"machine stuck after {res.steps} steps: {res.reason}\n  at {res.process}",
                             m.zipper)
    if not m.finished:
        raise SchedulerError(f"halted by {res.reason} before the tree was complete", m.zipper)
    tree = decode_tree(res.value, th)
    report = htree_check(th, tree)
    if not report:
        raise AssertionError(f"scheduler produced an invalid tree: {report.message}")
    return HerbrandRun(tree, res.steps, m.frozen_created, m, res.trace)
