from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from funasp import corpus_path
from funasp.ast import BOT, And, Exists, Forall, Implies, Not, Or, Signature
from funasp.expand import expand_program
from funasp.htsem import (
    HTInterpretation, SearchSpaceTooLarge, State, all_interpretations, all_states,
    classify_function, equilibrium_models, eval_term, format_state, is_model, satisfies,
    state_leq, theory_equilibrium_models, total,
)
from funasp.parser import load, parse_flp

from helpers import c, eq, f, p, v

SIG = Signature({"a", "b"}, {("f", 1)}, {("q", 1)})
INTERPS = list(all_interpretations(SIG))


def models(text, **kw):
    return [format_state(s) for s in equilibrium_models(parse_flp(text).program, **kw)]


# ---------------------------------------------------------------- terms and states


def test_constant_evaluates_to_itself():
    assert eval_term(State(), c("fish")) == "fish"


def test_strictness():
    s = State({("next", ("1",)): "2"})
    assert eval_term(s, f("next", f("next", c("0")))) is None


def test_nested_evaluation():
    s = State({("next", ("0",)): "1", ("next", ("1",)): "2"})
    assert eval_term(s, f("next", f("next", c("0")))) == "2"


def test_state_order_examples():
    s = State({("next", ("0",)): "1"}, [("p", ())])
    assert state_leq(s, s)
    assert state_leq(State(), s)
    assert not state_leq(State({("next", ("0",)): "1"}), State({("next", ("0",)): "2"}))


def test_state_order_is_partial_order():
    states = list(all_states(Signature({"a", "b"}, {("f", 1)}, {("q", 0)})))
    for x in states:
        assert state_leq(x, x)
    for x, y in product(states, repeat=2):
        if state_leq(x, y) and state_leq(y, x):
            assert x == y
    for x, y, z in product(states[::5], states, states[::5]):
        if state_leq(x, y) and state_leq(y, z):
            assert state_leq(x, z)


def test_interpretation_requires_order():
    with pytest.raises(ValueError):
        HTInterpretation(State({("f", ("a",)): "a"}), State({("f", ("a",)): "b"}))


# ---------------------------------------------------------------- satisfaction


def test_undefined_operand_falsifies_equality():
    i = total(State())
    assert not satisfies(i, "here", eq(f("first"), f("first")))


def test_total_interpretation_decides_equality():
    i = total(State({("second", ()): "fish"}))
    a = eq(f("second"), c("fish"))
    assert satisfies(i, "here", Or((a, Not(a))))


_terms = st.sampled_from([c("a"), c("b"), f("f", c("a")), f("f", c("b")), f("f", f("f", c("a"))),
                          v("X")])
_atoms = st.one_of(st.builds(lambda t: p("q", t), _terms), st.builds(eq, _terms, _terms),
                   st.just(BOT))


def _quantify(g):
    return st.one_of(st.builds(lambda b: Forall(("X",), b), g), st.builds(lambda b: Exists(("X",), b), g))


formulas = st.recursive(
    _atoms,
    lambda g: st.one_of(
        st.builds(lambda x, y: And((x, y)), g, g),
        st.builds(lambda x, y: Or((x, y)), g, g),
        st.builds(Implies, g, g),
        _quantify(g),
    ),
    max_leaves=6,
)


def _closed(g):
    return Forall(("X",), g)


@settings(max_examples=150, deadline=None)
@given(formulas, st.integers(0, len(INTERPS) - 1))
def test_persistence(g, k):
    i = INTERPS[k]
    if satisfies(i, "here", _closed(g)):
        assert satisfies(i, "there", _closed(g))


@settings(max_examples=150, deadline=None)
@given(formulas, st.integers(0, len(INTERPS) - 1))
def test_negation_looks_at_there(g, k):
    i = INTERPS[k]
    assert satisfies(i, "here", Not(_closed(g))) == (not satisfies(i, "there", _closed(g)))


def test_persistence_exhaustive_on_axioms():
    x, y = v("X"), v("Y")
    sample = [eq(f("f", x), y), Or((eq(f("f", x), y), Not(eq(f("f", x), y)))),
              Implies(eq(x, y), eq(f("f", x), f("f", y))), Not(Not(p("q", f("f", x))))]
    for g in sample:
        closed = Forall(("X", "Y"), g)
        for i in INTERPS:
            if satisfies(i, "here", closed):
                assert satisfies(i, "there", closed)


# ---------------------------------------------------------------- models


def _meal_theory(with_fact=True):
    src = load(corpus_path("meal.flp" if with_fact else "meal_nofact.flp"))
    return expand_program(src.program), src.program.signature


def test_meal_model_check():
    th, sig = _meal_theory()
    good = State({("first", ()): "pasta", ("second", ()): "fish"})
    assert is_model(total(good, sig), th)
    assert not is_model(total(State({("first", ()): "pasta"}), sig), th)


def test_empty_theory():
    assert is_model(INTERPS[0], [])


def test_meal_equilibrium():
    assert [format_state(s) for s in equilibrium_models(load(corpus_path("meal.flp")).program)] == [
        "first=pasta second=fish"]


def test_meal_without_fact_derives_nothing():
    assert [format_state(s) for s in equilibrium_models(load(corpus_path("meal_nofact.flp")).program)] == [""]


def test_ham_three_cycle():
    (s,) = equilibrium_models(load(corpus_path("ham.flp")).program)
    assert s.sigma == {("next", ("0",)): "1", ("next", ("1",)): "2", ("next", ("2",)): "0"}
    assert {a.args[0].name for a in s.atoms if a.name == "visited"} == {"0", "1", "2"}


def test_choice_stronger_than_assignment():
    assert models("#evaluable a.\na in {f(b)}.") == []
    assert models("#evaluable a.\na := f(b).") == [""]


def test_default_value():
    assert models("#evaluable g.\ng := a :- not g # a.") == ["g=a"]
    assert models("#evaluable g.\ng := a :- not g # a.\ng := b.") == ["g=b"]


def test_budget_guard():
    with pytest.raises(SearchSpaceTooLarge):
        equilibrium_models(load(corpus_path("ham.flp")).program, max_nodes=2)


def _brute_force(theory, sig):
    """Equilibrium models straight from the definition."""
    out = []
    for t in all_states(sig):
        if not is_model(total(t, sig), theory):
            continue
        smaller = (i for i in all_interpretations(sig) if i.there == t and i.here != t)
        if not any(is_model(i, theory) for i in smaller):
            out.append(format_state(t))
    return sorted(out)


@pytest.mark.parametrize("text", [
    "q(a) :- not q(b).\nq(b) :- not q(a).",
    "f(a) in {a, b}.\nq(X) :- f(X) = b.",
    "f(a) := b :- not f(a) # b.\nf(b) := f(a) :- q(a).\nq(a) :- f(a) = b.",
    "f(a) in {X | q(X)}.\nq(a).\nq(b) :- not q(a).",
    "q(f(a)).\nf(a) := a :- not q(b).",
    "f(X) := X :- q(X), not f(X) # X.\nq(a).\n:- f(b) = b.",
])
def test_search_matches_definition(text):
    prog = parse_flp(text).program
    sig = Signature({"a", "b"}, prog.signature.evaluables | {("f", 1)}, prog.signature.predicates | {("q", 1)})
    theory = expand_program(prog)
    assert [format_state(s) for s in theory_equilibrium_models(theory, sig)] == _brute_force(theory, sig)


# ---------------------------------------------------------------- functions


def test_classify_total_interpretation():
    i = total(State({("f", ("a",)): "a", ("f", ("b",)): "b"}), SIG)
    assert classify_function(i, "f") == {"decidable": True, "total": True}


def test_classify_undefined_everywhere():
    assert classify_function(total(State(), SIG), "f") == {"decidable": True, "total": False}


def test_classify_undecided_entry():
    i = HTInterpretation(State(), State({("f", ("a",)): "a"}), SIG)
    assert classify_function(i, "f") == {"decidable": False, "total": False}


@pytest.mark.parametrize("name", ["meal.flp", "ham.flp", "boolean.flp", "colour3.fasp"])
def test_functions_decidable_in_equilibrium(name):
    prog = load(corpus_path(name)).program
    for s in equilibrium_models(prog):
        for fn, _ in prog.signature.evaluables:
            assert classify_function(total(s, prog.signature), fn)["decidable"]
