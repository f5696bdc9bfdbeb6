from .encodings import (DecodeError, decode, encode_constructor, encode_tree, encode_value,
                        prelude, storage_operator, with_prelude)
from .extract import WitnessError, extract_witness, post_wrapper
from .machine import Halt, Machine, RunResult, Stuck, run, step
from .parser import LinkError, Program, ProgramError, parse_program, parse_term
from .terms import (CALLCC, NIL, TYPE, App, Callcc, Cont, Instr, Lam, Process, Ref, Stack,
                    Term, TypeDummy, Var, alpha_equal, show, stack_of, subst)

__all__ = [
    "DecodeError", "decode", "encode_constructor", "encode_tree", "encode_value", "prelude",
    "storage_operator", "with_prelude", "WitnessError", "extract_witness", "post_wrapper", "Halt",
    "Machine", "RunResult", "Stuck", "run", "step", "LinkError", "Program", "ProgramError",
    "parse_program", "parse_term", "CALLCC", "NIL", "TYPE", "App", "Callcc", "Cont", "Instr", "Lam",
    "Process", "Ref", "Stack", "Term", "TypeDummy", "Var", "alpha_equal", "show", "stack_of",
    "subst",
]
