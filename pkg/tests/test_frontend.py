import pytest
from hypothesis import given
from hypothesis import strategies as st

from herbrand.enumeration import EmptyUniverse, FamilyEnumerator, TermEnumerator
from herbrand.frontend import (ArityError, CompiledTheory, DuplicateNameError, TheoryError,
                               TheorySyntaxError, UnboundVariableError, UnknownSymbolError,
                               compile_theory, ground, nth_index, nth_term, parse_atom, parse_term,
                               parse_theory, rank_of_index, relevant_indices, term_rank)
from herbrand.logic import Atom, Atomic, Index, Not, Or, Term, atoms_of, fn, num
from herbrand.theories import builtin_text

from oracles import brute_family, brute_terms

SIGNATURES = [
    (["a"], [("f", 1)], False),
    (["a", "b"], [("f", 1), ("g", 2)], False),
    ([], [], True),
    (["c"], [("g", 2)], True),
    (["a", "b", "c"], [], False),
]


class TestParse:
    def test_whitecrow(self):
        spec = parse_theory(builtin_text("whitecrow"))
        assert spec.signature.numerals
        assert [p for p, _ in spec.signature.predicates] == ["Crow", "Black", "White"]
        assert [a.name for a in spec.axioms] == ["crow_black", "not_bw", "crow42", "white42"]

    def test_pseudo(self):
        spec = parse_theory(builtin_text("pseudo"))
        sig = spec.signature
        assert sig.constants == ["a"] and sig.functions == [("f", 1)] and sig.predicates == [("P", 1)]
        assert len(spec.axioms) == 3

    def test_desugaring(self):
        spec = parse_theory("const a; fun f/1; pred P/1, Q/0;"
                            "axiom x: forall y. P(y) <-> Q; axiom z: Q -> P(a) -> P(f(a));")
        assert str(spec.axioms[0]) == "axiom x: forall y. ((P(y) /\\ Q) \\/ (~P(y) /\\ ~Q));"
        # -> is right associative
        assert str(spec.axioms[1]) == "axiom z: (~Q \\/ (~P(a) \\/ P(f(a))));"

    @pytest.mark.parametrize("src, err, where", [
        ("pred P/1; axiom bad: P(x);", UnboundVariableError, (1, 24)),
        ("const a; pred P/1; axiom bad: P(a,a);", ArityError, (1, 31)),
        ("const a; pred P/1; axiom bad: Q(a);", UnknownSymbolError, (1, 31)),
        ("const a; pred P/1; axiom bad P(a);", TheorySyntaxError, (1, 30)),
        ("const a; pred a/1;", DuplicateNameError, (1, 15)),
        ("const a; pred P/1;\naxiom x: forall y. P(y) -> ;", TheorySyntaxError, (2, 28)),
    ])
    def test_errors_carry_location(self, src, err, where):
        with pytest.raises(err) as info:
            parse_theory(src)
        assert (info.value.line, info.value.col) == where

    def test_empty_theory(self):
        with pytest.raises(TheoryError, match="empty theory"):
            compile_theory("const a; pred P/1;")

    def test_empty_universe(self):
        with pytest.raises(TheoryError):
            compile_theory("pred Q/0; axiom t: Q;")
        with pytest.raises(EmptyUniverse):
            TermEnumerator([], [("f", 1)])

    def test_ground_parsers(self):
        assert parse_term("f(g(a,42))") is fn("f", fn("g", Term("a"), num(42)))
        assert parse_atom("Crow(42)") == Atom("Crow", (num(42),))
        assert parse_atom("Q") == Atom("Q", ())


class TestTermEnumeration:
    @pytest.mark.parametrize("consts, funs, numerals", SIGNATURES)
    def test_agrees_with_brute_force(self, consts, funs, numerals):
        e = TermEnumerator(consts, funs, numerals)
        expected = brute_terms(consts, funs, numerals, 6)
        assert [e.nth(k) for k in range(len(expected))] == expected
        assert [e.rank(t) for t in expected] == list(range(len(expected)))

    def test_frozen_prefix(self):
        e = TermEnumerator(["a", "b"], [("f", 1), ("g", 2)])
        assert [str(e.nth(k)) for k in range(14)] == [
            "a", "b", "f(a)", "f(b)", "f(f(a))", "f(f(b))", "g(a,a)", "g(a,b)", "g(b,a)", "g(b,b)",
            "f(f(f(a)))", "f(f(f(b)))", "f(g(a,a))", "f(g(a,b))"]

    def test_examples(self, pseudo):
        sig = pseudo.spec.signature
        assert nth_term(sig, 0) is Term("a")
        assert nth_term(sig, 2) is fn("f", fn("f", Term("a")))
        assert TermEnumerator([], [], True).nth(5) is num(5)

    def test_constants_before_numeral_at_weight_one(self):
        e = TermEnumerator(["c"], [], True)
        assert [e.nth(k) for k in range(3)] == [Term("c"), num(0), num(1)]

    def test_finite_universe_bounds(self):
        e = TermEnumerator(["a", "b"], [])
        assert e.finite and e.total() == 2
        with pytest.raises(IndexError):
            e.nth(2)

    @given(st.integers(0, 10**4))
    def test_inverse_property(self, k):
        for consts, funs, numerals in SIGNATURES[:4]:
            e = TermEnumerator(consts, funs, numerals)
            assert e.rank(e.nth(k)) == k

    def test_fairness(self):
        e = TermEnumerator(["a", "b"], [("f", 1), ("g", 2)])
        for t in brute_terms(["a", "b"], [("f", 1), ("g", 2)], False, 6):
            assert e.rank(t) < sum(e.count(w) for w in range(1, t.weight + 1))

    def test_deep_term(self, pseudo):
        t = pseudo.nth_term(9999)
        assert t.depth == 9999
        assert pseudo.term_rank(t) == 9999


class TestIndexEnumeration:
    def test_whitecrow_prefix(self, whitecrow):
        # listed by brute force (tests/oracles.brute_family)
        assert [str(whitecrow.index(k)) for k in range(10)] == [
            "crow42", "white42", "crow_black@0", "not_bw@0", "crow_black@1", "not_bw@1",
            "crow_black@2", "not_bw@2", "crow_black@3", "not_bw@3"]

    def test_pseudo_prefix(self, pseudo):
        assert [str(pseudo.index(k)) for k in range(6)] == [
            "base", "neg", "step@a", "step@f(a)", "step@f(f(a))", "step@f(f(f(a)))"]

    def test_family_agrees_with_brute_force(self):
        for consts, funs, numerals in SIGNATURES:
            e = TermEnumerator(consts, funs, numerals)
            terms = brute_terms(consts, funs, numerals, 6)
            for arities in ([1, 2, 0], [0, 0], [2]):
                fam = FamilyEnumerator(e, arities)
                expected = brute_family(terms, arities, 5)
                got = [fam.nth(k) for k in range(len(expected))]
                assert [(j, tuple(a)) for j, a in got] == [(j, tuple(a)) for j, a in expected]

    def test_known_ranks(self, whitecrow):
        assert whitecrow.rank(Index("crow_black", (num(42),))) == 86
        assert whitecrow.rank(Index("not_bw", (num(42),))) == 87
        assert whitecrow.atom_code(Atom("Crow", (num(42),))) == 126

    def test_finite_index_set(self):
        th = compile_theory("const c; pred P/1; axiom t: P(c);")
        assert th.size == 1
        with pytest.raises(IndexError):
            th.index(1)

    def test_wrappers(self, whitecrow):
        spec = whitecrow.spec
        i = nth_index(spec, 2)
        assert i == Index("crow_black", (num(0),))
        assert rank_of_index(spec, i) == 2
        assert term_rank(spec.signature, num(7)) == 7

    @given(st.integers(0, 10**4))
    def test_inverse_property(self, whitecrow, pseudo, k):
        for th in (whitecrow, pseudo):
            i = th.index(k)
            assert th.rank(Index(i.axiom, i.args)) == k
            assert th.atom_code(th.atom_of_code(k)) == k


class TestGround:
    def test_examples(self, whitecrow, pseudo):
        C42, B42 = Atom("Crow", (num(42),)), Atom("Black", (num(42),))
        assert whitecrow.th(Index("crow_black", (num(42),))) == Or(Not(Atomic(C42)), Atomic(B42))
        assert whitecrow.th(Index("crow42")) == Atomic(C42)
        assert whitecrow.th(whitecrow.index(0)) == Atomic(C42)
        fa, ffa = fn("f", Term("a")), fn("f", fn("f", Term("a")))
        assert pseudo.th(Index("step", (fa,))) == Or(Not(Atomic(Atom("P", (fa,)))), Atomic(Atom("P", (ffa,))))
        assert atoms_of(pseudo.th(Index("step", (Term("a"),)))) == [Atom("P", (Term("a"),)), Atom("P", (fa,))]

    def test_stable(self, pseudo):
        i = pseudo.index(7)
        assert ground(pseudo.spec, i) == ground(pseudo.spec, i) == pseudo.th(i)

    def test_arity_checked(self, whitecrow):
        with pytest.raises(ValueError):
            whitecrow.th(Index("crow_black", ()))


def brute_relevant(th: CompiledTheory, limit: int) -> dict[Atom, list[Index]]:
    """Scan the first ``limit`` indices and file each under the atoms it mentions."""
    out: dict[Atom, list[Index]] = {}
    for r in range(limit if th.size is None else min(limit, th.size)):
        i = th.index(r)
        for a in atoms_of(th.th(i)):
            out.setdefault(a, []).append(i)
    return out


class TestRelevance:
    def test_examples(self, whitecrow, pseudo):
        C42 = Atom("Crow", (num(42),))
        assert [str(i) for i in whitecrow.relevant(C42, 500)] == ["crow42", "crow_black@42"]
        fa = fn("f", Term("a"))
        assert [str(i) for i in pseudo.relevant(Atom("P", (fa,)), 500)] == ["step@a", "step@f(a)"]
        assert whitecrow.relevant(Atom("Green", (num(1),)), 500) == []
        assert [str(i) for i in relevant_indices(whitecrow.spec, C42)] == ["crow42", "crow_black@42"]

    @pytest.mark.parametrize("src", [
        builtin_text("whitecrow"),
        builtin_text("pseudo"),
        "const a, b; fun g/2; pred R/2, P/1, Q/1;"
        "axiom sym: forall x y. R(x,y) -> R(y,x);"
        "axiom loose: forall x y. P(x) \\/ Q(y);"
        "axiom base: R(a, g(a,b));",
    ])
    def test_agrees_with_brute_force(self, src):
        th = compile_theory(src)
        expected = brute_relevant(th, 500)
        for code in range(100):
            a = th.atom_of_code(code)
            got = [i for i in th.relevant(a, 499) if th.rank(i) < 500]
            assert got == expected.get(a, []), str(a)

    def test_sorted_by_rank_with_ranks_filled(self, whitecrow):
        got = whitecrow.relevant(Atom("Black", (num(3),)), 100)
        assert [i.rank for i in got] == sorted(i.rank for i in got)
        assert all(i.rank == whitecrow.rank(Index(i.axiom, i.args)) for i in got)
