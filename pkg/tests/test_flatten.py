import pytest
from hypothesis import assume, given, settings, strategies as st

from funasp import corpus_path, load
from funasp.ast import Signature, format_literal
from funasp.expand import expand_program
from funasp.flatten import (
    TranslationContext, UnsafeProgram, eliminate_equalities, translate_literal, translate_program,
    translate_rule, translate_term, translate_theory, uniqueness_constraints,
)
from funasp.htsem import HTInterpretation, State, all_interpretations, is_model
from funasp.parser import parse_flp
from funasp.random_programs import random_program

from helpers import c, f, v


def ctx_for(text):
    return TranslationContext(parse_flp(text).program.signature)


def lines(rules):
    return [str(r) for r in rules]


def test_constant_term_is_itself():
    tr = translate_term(c("0"), ctx_for("p(next(0))."))
    assert (tr.lp_term, tr.phi) == (c("0"), ())


def test_single_application():
    tr = translate_term(f("next", c("0")), ctx_for("p(next(0))."))
    assert tr.lp_term == v("V_1")
    assert [format_literal(x) for x in tr.phi] == ["holds_next(0,V_1)"]


def test_nested_application():
    tr = translate_term(f("next", f("next", v("X"))), ctx_for("p(next(X)) :- q(X)."))
    assert tr.lp_term == v("V_2")
    assert [format_literal(x) for x in tr.phi] == ["holds_next(X,V_1)", "holds_next(V_1,V_2)"]


def _lit(text):
    src = parse_flp(":- q(X), " + text + ".")
    return translate_literal(src.rules[0].body[1], TranslationContext(src.program.signature))


def test_negated_equality_literal():
    from funasp.ast import _block_formula, format_formula

    assert format_formula(_block_formula(_lit("not f(X) = 0"))) == "not exists V_1 (V_1 = 0 & holds_f(X,V_1))"


def test_apartness_literal():
    from funasp.ast import _block_formula, format_formula

    assert format_formula(_block_formula(_lit("f(X) # 0"))) == "exists V_1 (not V_1 = 0 & holds_f(X,V_1))"


def test_constructor_literal_unchanged():
    assert format_literal(_lit("p(a)")) == "p(a)"


def test_ham_choice_rule():
    src = parse_flp("next(X) in {Z | arc(X,Z)} :- node(X).")
    out = translate_rule(src.rules[0], TranslationContext(src.program.signature))
    assert lines(out) == [
        "holds_next(X,Z) | not holds_next(X,Z) <- arc(X,Z) & node(X)",
        "#false <- not exists Z (holds_next(X,Z) & arc(X,Z)) & node(X)",
    ]


def test_fact_with_function():
    src = parse_flp("visited(next(0)).")
    assert lines(translate_rule(src.rules[0], TranslationContext(src.program.signature))) == [
        "visited(V_1) <- holds_next(0,V_1)"]


def test_uniqueness_constraints():
    assert lines(uniqueness_constraints(Signature({"0"}, {("next", 1)}))) == [
        "#false <- holds_next(X,V) & holds_next(X,W) & not V = W"]
    assert uniqueness_constraints(Signature({"0"})) == []
    assert lines(uniqueness_constraints(Signature({"0"}, {("second", 0)}))) == [
        "#false <- holds_second(V) & holds_second(W) & not V = W"]


def test_normalized_ham():
    text = str(translate_program(load(corpus_path("ham.flp")).program))
    assert text.splitlines()[:4] == [
        "holds_next(X,Z) :- not aux_1(X,Z), arc(X,Z), node(X).",
        "aux_1(X,Z) :- not holds_next(X,Z), arc(X,Z), node(X).",
        "auxp_1(X) :- holds_next(X,Z), arc(X,Z), node(X).",
        ":- not auxp_1(X), node(X).",
    ]


def test_equality_variable_eliminated():
    assert str(translate_program(parse_flp("p(X) :- q(Y), X = Y.").program)) == "p(X) :- q(X).\n"


def test_eliminate_equalities_constants():
    head, body = eliminate_equalities(None, _body("q(X), X = a"))
    assert [format_literal(x) for x in body] == ["q(a)"]
    assert eliminate_equalities(None, _body("q(X), a = b")) is None


def _body(text):
    return parse_flp(":- " + text + ".").rules[0].body


def test_empty_program_with_function():
    prog = parse_flp("#evaluable f.").program
    assert str(translate_program(prog)) == ":- holds_f(V), holds_f(W), V != W.\n"


def test_unsafe_program_rejected():
    with pytest.raises(UnsafeProgram):
        translate_program(parse_flp("f(Z) := 0.").program)
    assert translate_program(parse_flp("f(Z) := 0.").program, check_safety=False)


def test_translation_is_deterministic():
    prog = load(corpus_path("ham.flp")).program
    assert str(translate_program(prog)) == str(translate_program(prog))


# ---------------------------------------------------------------- I |= P iff I* |= Gamma(P)


def star(i, sig):
    """The flattened counterpart of an interpretation."""
    def atoms(s):
        return list(s.atoms) + [("holds_" + fn, args + (val,)) for (fn, args), val in s.sigma.items()]

    return HTInterpretation(State({}, atoms(i.here)), State({}, atoms(i.there)), sig)


def check_correspondence(prog, signature=None):
    sig = signature or prog.signature
    flat = Signature(sig.constructors, (), sig.predicates | {("holds_" + fn, n + 1) for fn, n in sig.evaluables})
    source = expand_program(prog)
    target = [r.to_formula() for r in translate_theory(prog)]
    for i in all_interpretations(sig):
        assert is_model(i, source) == is_model(star(i, flat), target)


@pytest.mark.parametrize("name", ["meal.flp", "meal_nofact.flp", "boolean.flp"])
def test_correspondence_corpus(name):
    check_correspondence(load(corpus_path(name)).program)


@pytest.mark.parametrize("text", [
    "p(X) :- q(X), not f(X) = a.",
    "p(X) :- q(X), f(X) # a.",
    "f(a) in {X | q(X)}.",
    "f(X) := b :- q(X), not f(X) # b.",
    "q(f(f(a))) :- q(a).",
])
def test_correspondence_small(text):
    prog = parse_flp(text).program
    sig = Signature({"a", "b"}, prog.signature.evaluables, prog.signature.predicates)
    check_correspondence(prog, sig)


@settings(max_examples=8, deadline=None)
@given(st.randoms(use_true_random=False))
def test_correspondence_random(rng):
    prog = random_program(rng, max_rules=2)
    sig = prog.signature
    assume(len(sig.entries()) <= 2 and len(sig.constructors) <= 2)
    check_correspondence(prog)
