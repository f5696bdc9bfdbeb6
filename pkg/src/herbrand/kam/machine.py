"""Krivine abstract machine with control: push, grab, save, restore, plus instructions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .parser import Program
from .terms import (NIL, App, Callcc, Cont, Instr, Lam, Process, Ref, Stack, Term,
                    TypeDummy, Var, show, subst)


@dataclass(frozen=True)
class Halt:
    value: Term
    instruction: str = "stop"


@dataclass(frozen=True)
class Stuck:
    process: Process
    reason: str


Step = Union[Process, Halt, Stuck]
Handler = Callable[["Machine", Stack], Step]


def _stop(m: "Machine", stack: Stack) -> Step:
    if not stack:
        return Stuck(Process(Instr("stop"), stack), "stop needs an argument")
    return Halt(stack.head, "stop")


def _print(m: "Machine", stack: Stack) -> Step:
    if not stack:
        return Stuck(Process(Instr("print"), stack), "print needs an argument")
    m.printed.append(stack.head)
    return Halt(stack.head, "print")


BASE_INSTRUCTIONS: dict[str, Handler] = {"stop": _stop, "print": _print}


@dataclass
class RunResult:
    outcome: str  # "halted", "stuck" or "out-of-fuel"
    process: Process
    steps: int
    value: Optional[Term] = None
    reason: str = ""
    trace: list[str] = field(default_factory=list)

    @property
    def halted(self) -> bool:
        return self.outcome == "halted"

    def describe(self) -> str:
        if self.outcome == "halted":
            return f"halted after {self.steps} steps: {show(self.value)}"
        if self.outcome == "stuck":
            return f"stuck after {self.steps} steps: {self.reason}\n  at {self.process}"
        return f"out of fuel after {self.steps} steps\n  at {show(self.process.head, 200)}"


class Machine:
    """Evaluates processes ``t ⋆ π`` against a linked program.

    Unfolding a reference in head position is not counted as a step.
    """

    def __init__(self, program: Optional[Program] = None,
                 instructions: Optional[dict[str, Handler]] = None):
        self.program = program or Program()
        self.instructions: dict[str, Handler] = dict(BASE_INSTRUCTIONS)
        if instructions:
            self.instructions.update(instructions)
        self.printed: list[Term] = []

    @property
    def instruction_names(self) -> set[str]:
        return set(self.instructions)

    def unfold(self, t: Term) -> Union[Term, str]:
        seen = 0
        while isinstance(t, Ref):
            if t.name not in self.program:
                return f"undefined reference {t.name!r}"
            t = self.program.lookup(t.name)
            seen += 1
            if seen > 10_000:
                return f"reference cycle through {t!r}"
        return t

    def step(self, p: Process) -> tuple[str, Step]:
        """One transition; returns the rule name and the successor."""
        head = self.unfold(p.head)
        if isinstance(head, str):
            return "stuck", Stuck(p, head)
        s = p.stack
        if isinstance(head, App):
            return "push", Process(head.fun, s.push(head.arg))
        if isinstance(head, Lam):
            if not s:
                return "stuck", Stuck(p, "abstraction applied to the empty stack")
            return "grab", Process(subst(head.body, head.var, s.head), s.tail)
        if isinstance(head, Callcc):
            if not s:
                return "stuck", Stuck(p, "callcc applied to the empty stack")
            return "save", Process(s.head, s.tail.push(Cont(s.tail)))
        if isinstance(head, Cont):
            if not s:
                return "stuck", Stuck(p, "continuation applied to the empty stack")
            return "restore", Process(s.head, head.stack)
        if isinstance(head, Instr):
            handler = self.instructions.get(head.name)
            if handler is None:
                return "stuck", Stuck(p, f"no rule for instruction {head.name!r}")
            return head.name, handler(self, s)
        if isinstance(head, TypeDummy):
            return "stuck", Stuck(p, ".type in head position")
        if isinstance(head, Var):
            return "stuck", Stuck(p, f"free variable {head.name!r} in head position")
        return "stuck", Stuck(p, f"unknown head {head!r}")

    def run(self, start: Union[Process, Term, str], fuel: int = 1_000_000,
            trace: bool = False, on_step: Optional[Callable[[str, Step], None]] = None) -> RunResult:
        if isinstance(start, str):
            start = Ref(start)
        p = start if isinstance(start, Process) else Process(start, NIL)
        lines: list[str] = []
        steps = 0
        while True:
            if steps >= fuel:
                return RunResult("out-of-fuel", p, steps, trace=lines)
            rule, nxt = self.step(p)
            if isinstance(nxt, Stuck):
                return RunResult("stuck", nxt.process, steps, reason=nxt.reason, trace=lines)
            steps += 1
            if trace:
                lines.append(f"step {steps}: {rule} | {show(p.head, 60)} | {len(p.stack)}")
            if on_step is not None:
                on_step(rule, nxt)
            if isinstance(nxt, Halt):
                return RunResult("halted", p, steps, value=nxt.value,
                                 reason=nxt.instruction, trace=lines)
            p = nxt


def step(p: Process, program: Optional[Program] = None,
         instructions: Optional[dict[str, Handler]] = None) -> Step:
    return Machine(program, instructions).step(p)[1]


def run(program: Program, entry: Union[str, Term], fuel: int = 1_000_000,
        trace: bool = False, instructions: Optional[dict[str, Handler]] = None) -> RunResult:
    return Machine(program, instructions).run(entry, fuel, trace)
