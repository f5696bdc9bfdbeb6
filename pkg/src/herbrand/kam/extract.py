"""Σ⁰₁ witness extraction through the post-wrapper ``M (\\x\\y. y (stop x))``."""
from __future__ import annotations

from typing import Optional, Union

from ..logic import GroundTheory
from .encodings import decode, storage_operator
from .machine import Machine, RunResult
from .parser import Program
from .terms import App, Instr, Lam, Ref, Term, Var


class WitnessError(Exception):
    def __init__(self, message: str, result: Optional[RunResult] = None):
        self.result = result
        super().__init__(message)


def post_wrapper(kind: str) -> Term:
    return App(storage_operator(kind),
               Lam("x", Lam("y", App(Var("y"), App(Instr("stop"), Var("x"))))))


def extract_witness(prog: Program, realizer: Union[str, Term], kind: str,
                    fuel: int = 1_000_000, th: Optional[GroundTheory] = None,
                    machine: Optional[Machine] = None):
    """Run ``realizer T ⋆ nil`` and decode the value ``stop`` receives."""
    head = Ref(realizer) if isinstance(realizer, str) else realizer
    if isinstance(head, Ref) and head.name not in prog:
        raise WitnessError(f"realizer {head.name!r} is not defined")
    m = machine or Machine(prog)
    res = m.run(App(head, post_wrapper(kind)), fuel=fuel)
    if res.outcome == "out-of-fuel":
        raise WitnessError(f"fuel exhausted after {res.steps} steps", res)
    if res.outcome == "stuck":
        raise WitnessError(f"machine stuck: {res.reason}", res)
    if res.reason != "stop":
        raise WitnessError(f"halted by {res.reason!r} rather than stop", res)
    return decode(kind, res.value, th)
