import random

import pytest

from herbrand.builder import build_tree
from herbrand.kam import NIL, App, Halt, Instr, Process, Ref, encode_value, stack_of
from herbrand.logic import (And, Atom, Atomic, Contrad, Exp, FiniteTheory, Index, Not, Or,
                            htree_check, num, tree_atoms)
from herbrand.scheduler import (WORKING, Done, SchedulerError, SchedulerMachine, ZContrad, ZFrozen,
                                ZNode, axiom_realizer, builtin_proof, load_proof, run_herbrand)

from oracles import contradictory_theory, satisfiable_theory, sequential_proof, tree_refutes_all

B, W = Atom("B", ()), Atom("W", ())
BW = FiniteTheory([("b", Atomic(B)), ("w", Atomic(W)), ("not_bw", Not(And(Atomic(B), Atomic(W)))),
                   ("taut", Or(Atomic(B), Not(Atomic(B))))])
YES, NO = Instr("yes"), Instr("no")


def machine(th=BW, text="Define unused = \\x. x ;;"):
    m = SchedulerMachine(load_proof(text, th), th)
    m.cont = Instr("stop")
    for probe in ("yes", "no"):
        m.instructions[probe] = lambda mm, st, probe=probe: Halt(Instr(probe), probe)
    return m


def preset(m: SchedulerMachine, assignment: dict[Atom, bool]) -> None:
    """Make ``assignment`` the knowledge base, with sealed siblings."""
    z = m.zipper
    for atom, value in assignment.items():
        node = ZNode(atom, WORKING, ZContrad(Index("b", (), 0))) if value else \
            ZNode(atom, ZContrad(Index("b", (), 0)), WORKING)
        z._put(node)
        z.route.append((node, value))


def drive(m, p, fuel=1000):
    for _ in range(fuel):
        rule, p = m.step(p)
        if not isinstance(p, Process):
            return p
    raise AssertionError("out of fuel")


class TestTestRule:
    def test_fresh_atom_freezes_true_branch(self):
        m = machine()
        a = encode_value("atom", BW.atom_code(B))
        assert drive(m, Process(Instr("test"), stack_of([a, YES, NO]))) == Halt(NO, "no")
        z = m.zipper
        assert isinstance(z.root, ZNode) and z.root.atom == B
        assert isinstance(z.root.left, ZFrozen) and z.root.left.process.head == YES
        assert z.root.right is WORKING
        assert z.knowledge() == {B: False}
        assert m.frozen_created == 1

    def test_known_atom_reads_knowledge(self):
        a = encode_value("atom", BW.atom_code(B))
        for value, expected in ((True, YES), (False, NO)):
            m = machine()
            preset(m, {B: value})
            _, p = m.step(Process(Instr("test"), stack_of([a, YES, NO, Instr("rest")])))
            assert p == Process(expected, stack_of([Instr("rest")]))
            assert m.frozen_created == 0

    def test_contradict_thaws_leftmost(self):
        m = machine()
        a = encode_value("atom", BW.atom_code(B))
        _, p = m.step(Process(Instr("test"), stack_of([a, YES, NO])))
        _, p = m.step(Process(Instr("contradict"), stack_of([encode_value("index", 0)])))
        assert p == Process(YES, NIL)
        assert m.zipper.knowledge() == {B: True}
        assert isinstance(m.zipper.root.right, ZContrad)

    def test_contradict_without_frozen_finishes(self, pc_theory):
        m = machine(pc_theory)
        a = encode_value("atom", 0)
        _, p = m.step(Process(Instr("test"), stack_of([a, YES, NO])))
        _, p = m.step(Process(Instr("contradict"), stack_of([encode_value("index", 0)])))
        _, p = m.step(Process(Instr("contradict"), stack_of([encode_value("index", 1)])))
        assert m.finished and p.head == Instr("stop")

    def test_errors(self):
        m = machine()
        with pytest.raises(SchedulerError, match="needs 3"):
            m.step(Process(Instr("test"), stack_of([YES])))
        with pytest.raises(SchedulerError, match="empty cont"):
            SchedulerMachine(load_proof("", BW), BW).step(Process(Instr("finish"), NIL))
        with pytest.raises(SchedulerError):
            m.step(Process(Instr("contradict"), stack_of([YES])))


class TestRealizers:
    @pytest.mark.parametrize("b, w", [(True, True), (True, False), (False, True), (False, False)])
    def test_not_bw(self, b, w):
        m = machine()
        calls = []
        m.instructions["contradict"] = lambda mm, st: (calls.append(st.head), Halt(st.head, "contradict"))[1]
        preset(m, {B: b, W: w})
        res = m.run(Process(axiom_realizer(BW, Index("not_bw", (), 2)), stack_of([YES])))
        if b and w:
            assert res.reason == "contradict" and calls == [encode_value("index", 2)]
        else:
            assert res.reason == "yes" and calls == []
        assert m.frozen_created == 0

    @pytest.mark.parametrize("kb", [{}, {B: True}, {B: False}])
    def test_tautology_never_contradicts(self, kb):
        m = machine()
        m.instructions["contradict"] = lambda mm, st: pytest.fail("contradict called")
        preset(m, kb)
        res = m.run(Process(axiom_realizer(BW, Index("taut", (), 3)), stack_of([YES])))
        assert res.reason == "yes"


class TestEndToEnd:
    def test_whitecrow(self, whitecrow):
        prog = load_proof(builtin_proof("whitecrow"), whitecrow)
        run = run_herbrand(prog, "proof", whitecrow)
        assert run.tree == build_tree(whitecrow)
        assert run.frozen == 3
        assert tree_refutes_all(whitecrow, run.tree)

    def test_pseudo(self, pseudo):
        run = run_herbrand(load_proof(builtin_proof("pseudo"), pseudo), "proof", pseudo)
        assert htree_check(pseudo, run.tree)
        assert run.tree == build_tree(pseudo)
        assert run.frozen == 3

    def test_sched_step_reaches_done(self, pc_theory):
        prog = load_proof(sequential_proof_pc(), pc_theory)
        m = SchedulerMachine(prog, pc_theory)
        p = Process(App(App(Ref("eval_tree"), Ref("proof")), Instr("stop")), NIL)
        for _ in range(10_000):
            p = m.sched_step(p)
            if not isinstance(p, Process):
                break
        assert isinstance(p, Done)
        assert p.tree == Exp(Atom("P", (pc_theory.term_of_code(0),)), Contrad(Index("nt")), Contrad(Index("t")))

    def test_never_contradicting_proof(self, pc_theory):
        prog = load_proof("Define loop x = loop x ;; Define proof = loop .type ;;", pc_theory)
        with pytest.raises(SchedulerError, match="fuel") as info:
            run_herbrand(prog, "proof", pc_theory, fuel=500)
        assert info.value.zipper_state == "<working>"

    def test_unknown_proof_name(self, pc_theory):
        with pytest.raises(SchedulerError):
            run_herbrand(load_proof("", pc_theory), "proof", pc_theory)

    def test_bad_axiom_argument(self, whitecrow):
        prog = load_proof("Define proof = Axiom.crow_black .type .type ;;", whitecrow)
        with pytest.raises(SchedulerError, match="bad argument"):
            run_herbrand(prog, "proof", whitecrow)


def sequential_proof_pc():
    return "Define proof = Axiom.t (Axiom.nt .type) ;;"


class TestInvariants:
    def test_single_working_node(self, whitecrow):
        prog = load_proof(builtin_proof("whitecrow"), whitecrow)
        m = SchedulerMachine(prog, whitecrow)
        counts = []

        def check(rule, nxt):
            n = m.zipper.count(WORKING)
            counts.append(n)
            assert n == (0 if m.finished else 1)

        res = m.run(App(App(Ref("eval_tree"), Ref("proof")), Instr("stop")), on_step=check)
        assert res.halted and m.finished
        assert len(counts) == res.steps

    @pytest.mark.parametrize("name", ["whitecrow", "pseudo"])
    def test_knowledge_base_coherent(self, name, request):
        th = request.getfixturevalue(name)
        run = run_herbrand(load_proof(builtin_proof(name), th), "proof", th)
        assert run.machine.tests
        for ev in run.machine.tests:
            kb = ev.path.assignment()
            if ev.fresh:
                assert ev.atom not in kb
            else:
                assert kb[ev.atom] == ev.value
            # the path is a route in the final tree
            node = run.tree
            for atom, value in reversed(list(ev.path.entries())):
                assert isinstance(node, Exp) and node.atom == atom
                node = node.if_true if value else node.if_false

    def test_fuzz_contradictory(self):
        rng = random.Random(11)
        for _ in range(100):
            th = contradictory_theory(rng)
            run = run_herbrand(load_proof(sequential_proof(th), th), "proof", th)
            assert htree_check(th, run.tree)
            assert tree_refutes_all(th, run.tree)

    def test_fuzz_satisfiable_fails(self):
        rng = random.Random(12)
        for _ in range(30):
            th = satisfiable_theory(rng)
            with pytest.raises(SchedulerError):
                run_herbrand(load_proof(sequential_proof(th), th), "proof", th, fuel=20_000)


def test_whitecrow_numeral_argument_form(whitecrow):
    prog = load_proof("Define proof = Axiom.crow42 (Axiom.crow_black (MkTerm 42) "
                      "(Axiom.not_bw 42 (Axiom.white42 .type))) ;;", whitecrow)
    run = run_herbrand(prog, "proof", whitecrow)
    assert tree_atoms(run.tree) == {Atom(p, (num(42),)) for p in ("Crow", "Black", "White")}
    assert run.tree.atom == Atom("Crow", (num(42),))
