import pytest
from hypothesis import given
from hypothesis import strategies as st

from herbrand.logic import (And, Atom, AtomPair, Atomic, Contrad, Exp, FiniteTheory, Left, Not, Or,
                            Right, Term, Top, atoms_of, eval_compound, find, fn, htree_check, num,
                            pair_key, pair_min, pair_pred, path_from, peval)

from oracles import classical, false_on_all_extensions, kleene, tree_refutes_all, valuations

C42, B42, W42 = Atom("Crow", (num(42),)), Atom("Black", (num(42),)), Atom("White", (num(42),))
A = Atom("Q", ())


def wc_index(th, name, *args):
    return th.make_index(name, [num(a) for a in args])


def golden_whitecrow(th):
    return Exp(C42,
               Exp(B42,
                   Exp(W42, Contrad(wc_index(th, "not_bw", 42)), Contrad(wc_index(th, "white42"))),
                   Contrad(wc_index(th, "crow_black", 42))),
               Contrad(wc_index(th, "crow42")))


class TestTerms:
    def test_hash_consing(self):
        assert fn("f", Term("a")) is fn("f", Term("a"))
        assert num(3) is num(3)

    def test_numeral_weight(self):
        assert num(5).weight == 6
        assert fn("f", fn("f", Term("a"))).weight == 3

    def test_deep_term_str(self):
        t = Term("a")
        for _ in range(5000):
            t = fn("f", t)
        assert str(t).count("f(") == 5000

    def test_atom_str(self):
        assert str(C42) == "Crow(42)"
        assert str(A) == "Q"


class TestEval:
    def test_atom_lookup(self):
        assert eval_compound({C42: True}, Atomic(C42)) is True

    @pytest.mark.parametrize("v", [True, False])
    def test_excluded_middle(self, v):
        assert eval_compound({A: v}, Or(Atomic(A), Not(Atomic(A)))) is True

    def test_not_bw_instance(self):
        c = Not(And(Atomic(B42), Atomic(W42)))
        assert eval_compound({B42: True, W42: True}, c) is False
        # truth table: false only at B=W=true
        assert [classical(v, c) for v in valuations([B42, W42])] == [True, True, True, False]

    def test_operators(self):
        c = ~Atomic(C42) | Atomic(B42)
        assert c == Or(Not(Atomic(C42)), Atomic(B42))


class TestFindPeval:
    def test_find(self):
        assert find(Top, A) is None
        assert find(Left(C42, Top), C42) is True
        assert find(Right(W42, Left(C42, Top)), C42) is True
        assert find(Right(W42, Left(C42, Top)), W42) is False

    def test_find_first_from_node_end(self):
        assert find(Right(C42, Left(C42, Top)), C42) is False

    def test_peval_examples(self):
        assert peval(Top, Atomic(A)) is None
        assert peval(Right(C42, Top), Atomic(C42)) is False
        assert peval(Left(C42, Top), Or(Not(Atomic(C42)), Atomic(B42))) is None
        assert peval(Left(W42, Left(B42, Top)), Not(And(Atomic(B42), Atomic(W42)))) is False

    def test_path_str_and_assignment(self):
        p = path_from([(C42, True), (B42, False)])
        assert p == Right(B42, Left(C42, Top))
        assert p.assignment() == {C42: True, B42: False}
        assert str(p) == "[Crow(42)=T, Black(42)=F]"


class TestAtomsOf:
    def test_examples(self):
        assert atoms_of(Atomic(A)) == [A]
        assert atoms_of(Or(Not(Atomic(C42)), Atomic(B42))) == [C42, B42]
        assert atoms_of(And(Atomic(A), Atomic(A))) == [A]

    def test_deep_compound(self):
        c = Atomic(A)
        for _ in range(20_000):
            c = Not(c)
        assert atoms_of(c) == [A]


ATOMS = [Atom(f"Q{k}", ()) for k in range(5)]


def compounds(depth=4):
    leaf = st.sampled_from(ATOMS).map(Atomic)
    return st.recursive(leaf, lambda sub: st.one_of(
        sub.map(Not), st.tuples(sub, sub).map(lambda p: And(*p)), st.tuples(sub, sub).map(lambda p: Or(*p))),
        max_leaves=8)


partial = st.dictionaries(st.sampled_from(ATOMS), st.booleans())


class TestKleeneProperties:
    @given(compounds(), partial)
    def test_matches_min_max_tables(self, c, assign):
        assert peval(path_from(assign.items()), c) == kleene(assign, c)

    @given(compounds(), partial, partial)
    def test_monotone(self, c, p, ext):
        v = peval(path_from(p.items()), c)
        q = {**ext, **p}
        if v is not None:
            assert peval(path_from(q.items()), c) == v

    @given(compounds(), partial)
    def test_total_partial_agreement(self, c, p):
        v = peval(path_from(p.items()), c)
        if v is None:
            return
        free = [a for a in atoms_of(c) if a not in p]
        for ext in valuations(free):
            assert eval_compound({**p, **ext}, c) == v

    @given(compounds(), partial)
    def test_false_implies_false_everywhere(self, c, p):
        if peval(path_from(p.items()), c) is False:
            assert false_on_all_extensions(p, c)

    @given(partial, st.sampled_from(ATOMS))
    def test_atomic_is_find(self, p, a):
        path = path_from(p.items())
        assert peval(path, Atomic(a)) == find(path, a)


class TestPairOrder:
    def test_whitecrow_cases(self, whitecrow):
        i0 = wc_index(whitecrow, "crow_black", 0)
        c0, b0 = Atom("Crow", (num(0),)), Atom("Black", (num(0),))
        assert whitecrow.th(i0) == Or(Not(Atomic(c0)), Atomic(b0))
        assert pair_pred(whitecrow, AtomPair(i0, b0)) == AtomPair(i0, c0)
        # case 2: index 1 (white42) has one atom, predecessor is the last atom of index 0
        i1 = whitecrow.index(1)
        assert pair_pred(whitecrow, AtomPair(i1, W42)) == AtomPair(whitecrow.index(0), C42)
        m = pair_min(whitecrow)
        assert m == AtomPair(whitecrow.index(0), C42)
        assert pair_pred(whitecrow, m) == m

    def test_malformed_pair(self, whitecrow):
        with pytest.raises(ValueError):
            pair_key(whitecrow, AtomPair(whitecrow.index(0), W42))

    @pytest.mark.parametrize("name", ["whitecrow", "pseudo"])
    def test_iterates_to_minimum_in_position_steps(self, name, request):
        th = request.getfixturevalue(name)
        pairs = [AtomPair(th.index(r), a) for r in range(21) for a in atoms_of(th.th(th.index(r)))]
        for pos, q in enumerate(pairs):
            steps, cur = 0, q
            while cur != pairs[0]:
                nxt = pair_pred(th, cur)
                assert pair_key(th, nxt) < pair_key(th, cur)
                cur, steps = nxt, steps + 1
            assert steps == pos


class TestChecker:
    def test_root_leaf_rejected(self):
        th = FiniteTheory([("t", Atomic(A))])
        r = htree_check(th, Contrad(th.index(0)))
        assert not r and r.clause == "leaf" and r.path == Top

    def test_golden_whitecrow(self, whitecrow):
        t = golden_whitecrow(whitecrow)
        assert htree_check(whitecrow, t)
        assert tree_refutes_all(whitecrow, t)

    def test_swapped_children_rejected(self, whitecrow):
        t = golden_whitecrow(whitecrow)
        w = t.if_true.if_true
        swapped = Exp(C42, Exp(B42, Exp(W42, w.if_false, w.if_true), t.if_true.if_false), t.if_false)
        r = htree_check(whitecrow, swapped)
        assert not r
        assert r.clause == "leaf"
        assert r.path == Left(W42, Left(B42, Left(C42, Top)))

    def test_repeated_atom_rejected(self):
        th = FiniteTheory([("t", Atomic(A)), ("nt", Not(Atomic(A)))])
        t = Exp(A, Exp(A, Contrad(th.index(1)), Contrad(th.index(1))), Contrad(th.index(0)))
        r = htree_check(th, t)
        assert not r and r.clause == "node"

    def test_deep_tree_is_iterative(self):
        atoms = [Atom(f"R{k}", ()) for k in range(3000)]
        th = FiniteTheory([(f"r{k}", Atomic(a)) for k, a in enumerate(atoms)]
                          + [("last", Not(Atomic(atoms[-1])))])
        chain = Contrad(th.make_index("last"))
        for k in reversed(range(len(atoms))):
            chain = Exp(atoms[k], chain, Contrad(th.make_index(f"r{k}")))
        assert htree_check(th, chain)
        # the innermost leaf now cites r0, which is true there
        broken = Contrad(th.make_index("r0"))
        for k in reversed(range(len(atoms))):
            broken = Exp(atoms[k], broken, Contrad(th.make_index(f"r{k}")))
        r = htree_check(th, broken)
        assert not r and r.clause == "leaf"
