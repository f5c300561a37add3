"""Acceptance criteria 1-9.

Each test records one PASS/FAIL line. Under pytest the lines appear in the
terminal summary; ``python3 tests/test_acceptance.py`` runs the same checks
and prints them directly. All comparisons are exact (tolerance zero) and the
sample sizes below are fixed.
"""

import sys
from itertools import product
from pathlib import Path


from funasp import corpus_path, load
from funasp.ast import BOT, And, Implies, Not, Or, Signature
from funasp.expand import expand_program
from funasp.faspc import embed, fasp_answer_sets, fasp_ground, project
from funasp.flatten import translate_program, translate_theory
from funasp.htsem import HTInterpretation, State, all_interpretations, equilibrium_models, format_state, is_model
from funasp.lpcore import format_atoms, ground, stable_models, translated_models
from funasp.parser import parse_flp, parse_lp
from funasp.random_programs import random_programs
from funasp.safety import check_flp_rule, check_intermediate, check_lp_program

sys.path.insert(0, str(Path(__file__).parent))
from helpers import c, eq, f, p, v  # noqa: E402
from oracles import hamiltonian_cycles, naive_stable_models, proper_colourings  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
SAFETY_SAMPLE = 200  # random programs for criterion 6
AGREEMENT_SAMPLE = 500  # random programs for criterion 7
SAFETY_SEED, AGREEMENT_SEED = 2024, 7

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[n]


def states(models):
    return [format_state(s) for s in models]


# ---------------------------------------------------------------- 1


def _rename(text, mapping):
    for old, new in mapping:
        text = text.replace(old, new)
    return text


def test_criterion_1_golden_translation():
    prog = load(corpus_path("ham.flp")).program
    lp_text = str(translate_program(prog))
    th_text = "".join(f"{r}\n" for r in translate_theory(prog))
    golden_ok = lp_text == (GOLDEN / "ham.lp").read_text() and th_text == (GOLDEN / "ham.intermediate").read_text()
    # the displayed theory, transcribed; the fresh names V_1, V_2 print there as X and X_2
    displayed = [
        "holds_next(X,Z) | not holds_next(X,Z) <- arc(X,Z) & node(X)",
        "#false <- not exists Z (holds_next(X,Z) & arc(X,Z)) & node(X)",
        "visited(X) <- holds_next(0,X)",
        "visited(X_2) <- holds_next(X,X_2) & visited(X)",
        "#false <- node(X) & not visited(X)",
        "#false <- holds_next(X,V) & holds_next(X,W) & not V = W",
    ]
    ours = [_rename(line, [("V_1", "X"), ("V_2", "X_2")]) for line in th_text.splitlines()]
    ours = [line for line in ours if not line.startswith(("node(", "arc("))]
    normalized = [
        "holds_next(X,Z) :- not aux(X,Z), arc(X,Z), node(X).",
        "aux(X,Z) :- not holds_next(X,Z), arc(X,Z), node(X).",
        "aux'(X) :- holds_next(X,Z), arc(X,Z), node(X).",
        ":- not aux'(X), node(X).",
    ]
    first = [_rename(line, [("auxp_1", "aux'"), ("aux_1", "aux")]) for line in lp_text.splitlines()[:4]]
    ok = golden_ok and ours == displayed and first == normalized
    record(1, ok, f"goldens byte-exact={golden_ok}, displayed theory={ours == displayed}, "
                  f"normalized rules={first == normalized}")


# ---------------------------------------------------------------- 2


def test_criterion_2_meal():
    with_fact = load(corpus_path("meal.flp")).program
    without = load(corpus_path("meal_nofact.flp")).program
    a, b = states(equilibrium_models(with_fact)), states(equilibrium_models(without))
    ta, tb = states(translated_models(with_fact)), states(translated_models(without))
    ok = a == ["first=pasta second=fish"] and b == [""] and a == ta and b == tb
    record(2, ok, f"with fact {a}, without {b}, translation agrees={a == ta and b == tb}")


# ---------------------------------------------------------------- 3

HAM_RULES = """next(X) in {Z | arc(X,Z)} :- node(X).
visited(next(0)).
visited(next(X)) :- visited(X).
:- node(X), not visited(X).
"""

DIGRAPHS = {
    "3-cycle": (3, [(0, 1), (1, 2), (2, 0)]),
    "complete-3": (3, [(i, j) for i in range(3) for j in range(3) if i != j]),
    "complete-4": (4, [(i, j) for i in range(4) for j in range(4) if i != j]),
    "4-cycle-chords": (4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0), (1, 3)]),
    "4-no-cycle": (4, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)]),
}


def _ham_program(n, arcs):
    facts = "".join(f"node({i}).\n" for i in range(n)) + "".join(f"arc({a},{b}).\n" for a, b in arcs)
    return parse_flp(HAM_RULES + facts).program


def test_criterion_3_hamiltonian_counts():
    details, ok = [], True
    for name, (n, arcs) in DIGRAPHS.items():
        prog = _ham_program(n, arcs)
        oracle = equilibrium_models(prog)
        cycles = hamiltonian_cycles(list(range(n)), arcs)
        succ = sorted(sorted(s.sigma.items()) for s in oracle)
        want = sorted(sorted((("next", (str(a),)), str(b)) for a, b in cyc.items()) for cyc in cycles)
        same = len(oracle) == len(cycles) and succ == want and oracle == translated_models(prog)
        ok &= same
        details.append(f"{name}={len(oracle)}/{len(cycles)}")
    record(3, ok, "models/cycles " + " ".join(details))


# ---------------------------------------------------------------- 4


def test_criterion_4_colouring():
    details, ok = [], True
    for name, colours, expected in (("colour3.fasp", "rgb", 6), ("colour2.fasp", "rg", 0)):
        fp = load(corpus_path(name)).fasp
        answer = states(fasp_answer_sets(fasp_ground(fp)))
        flp = embed(fp)
        oracle = sorted(states(project(s, fp) for s in equilibrium_models(flp)))
        translated = sorted(states(project(s, fp) for s in translated_models(flp)))
        brute = proper_colourings(["1", "2", "3"], [("1", "2"), ("2", "3"), ("1", "3")], list(colours))
        same = len(answer) == expected == len(brute) and answer == oracle == translated
        ok &= same
        details.append(f"{name}: {len(answer)} answer sets (expected {expected})")
    record(4, ok, "; ".join(details) + "; three methods equal" if ok else "; ".join(details))


# ---------------------------------------------------------------- 5

SIG5 = Signature({"a", "b"}, {("f", 1)}, {("P", 1)})


def _valid(formula, interps):
    return all(is_model(i, [formula]) for i in interps)


def _e(t):
    return eq(t, t)


def _equiv(a, b):
    return Implies(Or((_e(a), _e(b))), eq(a, b))


def test_criterion_5_validity_suites():
    interps = list(all_interpretations(SIG5))
    pool = [v("X"), f("f", v("X")), f("f", v("Y"))]
    ff = lambda t: f("f", t)  # noqa: E731
    schemata = {
        "symmetry": (2, lambda t1, t2: Implies(eq(t1, t2), eq(t2, t1))),
        "transitivity": (3, lambda t1, t2, t3: Implies(And((eq(t1, t2), eq(t2, t3))), eq(t1, t3))),
        "predicate substitution": (2, lambda t1, t2: Implies(And((eq(t1, t2), p("P", t1))), p("P", t2))),
        "guarded function substitution": (2, lambda t1, t2: Implies(And((eq(t1, t2), _e(ff(t1)))),
                                                                     eq(ff(t1), ff(t2)))),
        "strictness": (1, lambda t: Implies(_e(ff(t)), _e(t))),
        "equivalence congruence": (2, lambda t1, t2: Implies(_equiv(t1, t2), _equiv(ff(t1), ff(t2)))),
    }
    failures = []
    for name, (k, build) in schemata.items():
        for terms in product(pool, repeat=k):
            if not _valid(build(*terms), interps):
                failures.append(name)
                break
    non_valid = {
        "t=t": _e(f("f", v("X"))),
        "decidable equality": Or((eq(f("f", v("X")), v("Y")), Not(eq(f("f", v("X")), v("Y"))))),
        "unguarded function substitution": Implies(eq(v("X"), v("Y")), eq(ff(v("X")), ff(v("Y")))),
    }
    counts = {name: sum(not is_model(i, [g]) for i in interps) for name, g in non_valid.items()}
    missing = [n for n, k in counts.items() if k == 0]
    ok = not failures and not missing
    record(5, ok, f"{len(interps)} interpretations; valid failures={failures}; "
                  f"countermodels " + ", ".join(f"{n}={k}" for n, k in counts.items()))


# ---------------------------------------------------------------- 6


def test_criterion_6_safety():
    def safe(text):
        return check_flp_rule(parse_flp(text).rules[-1]).safe

    examples = {
        "p(f(X),Y) :- q(Y).": True,
        "#evaluable g.\ng in {Y | p(Y)}.": True,
        "p(X) :- q(Y), X = Y.": True,
        "f(Z) := 0.": False,
        "#evaluable g.\ng in {Y | not p(Y)}.": False,
    }
    wrong = [t for t, want in examples.items() if safe(t) != want]
    preserved = 0
    for prog in random_programs(SAFETY_SEED, SAFETY_SAMPLE):
        assert all(check_flp_rule(r).safe for r in prog.rules)
        if check_intermediate(translate_theory(prog)).safe and check_lp_program(translate_program(prog)).safe:
            preserved += 1
    ok = not wrong and preserved == SAFETY_SAMPLE
    record(6, ok, f"examples misclassified={len(wrong)}; translation safe {preserved}/{SAFETY_SAMPLE}")


# ---------------------------------------------------------------- 7


def test_criterion_7_random_agreement():
    agree = 0
    for prog in random_programs(AGREEMENT_SEED, AGREEMENT_SAMPLE):
        assert len(prog.signature.constructors) <= 3 and len(prog.signature.evaluables) <= 2
        assert len(prog.rules) <= 4
        if equilibrium_models(prog) == translated_models(prog):
            agree += 1
    record(7, agree == AGREEMENT_SAMPLE, f"oracle = translation on {agree}/{AGREEMENT_SAMPLE} programs")


# ---------------------------------------------------------------- 8


def test_criterion_8_choice_grounding():
    emb = parse_flp("node(1). node(2). colour(r). colour(g).\nclr(X) in {Y | colour(Y)} :- node(X).").program
    facts = [p("node", c("1")), p("node", c("2")), p("colour", c("r")), p("colour", c("g"))]
    six = []
    for n in ("1", "2"):
        t = f("clr", c(n))
        six += [Or((eq(t, c("r")), Not(eq(t, c("r"))))), Or((eq(t, c("g")), Not(eq(t, c("g")))))]
        six.append(Implies(And((Not(eq(t, c("g"))), Not(eq(t, c("r"))))), BOT))
    sig = emb.signature
    consts = sorted(sig.constructors)
    entries = sig.entries()
    atoms = [(a.name, tuple(x.name for x in a.args)) for a in facts]
    options = [(None, None)] + [(None, x) for x in consts] + [(x, x) for x in consts]
    lhs = expand_program(emb)
    rhs = facts + six
    checked = differ = 0
    for combo in product(options, repeat=len(entries)):
        here = State({e: h for e, (h, _) in zip(entries, combo)}, atoms)
        there = State({e: t for e, (_, t) in zip(entries, combo)}, atoms)
        i = HTInterpretation(here, there, sig)
        checked += 1
        differ += is_model(i, lhs) != is_model(i, rhs)
    record(8, differ == 0, f"{checked} interpretations with the facts fixed; disagreements={differ}")


# ---------------------------------------------------------------- 9


def test_criterion_9_boolean_encoding():
    fun = equilibrium_models(load(corpus_path("boolean.flp")).program)
    as_sets = sorted(" ".join(sorted(fn for (fn, _), val in s.sigma.items() if val == "true")) for s in fun)
    rel = parse_lp(open(corpus_path("boolean.lp")).read())
    stable = sorted(format_atoms(m) for m in stable_models(ground(rel)))
    rules = [(r.head and (r.head.name, ()), [(x.atom.name, ()) for x in r.body if not x.negated],
              [(x.atom.name, ()) for x in r.body if x.negated]) for r in rel.rules]
    naive = sorted(format_atoms(m) for m in naive_stable_models(rules, {(a, ()) for a in "pqrs"}))
    total = all(len(s.sigma) == 4 for s in fun)
    ok = as_sets == stable == naive == ["p r", "q r"] and len(set(as_sets)) == len(fun) and total
    record(9, ok, f"functional models {as_sets} <-> stable models {stable}")


if __name__ == "__main__":
    tests = [g for name, g in sorted(globals().items()) if name.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    for n in sorted(RESULTS):
        print(RESULTS[n])
    sys.exit(1 if failed else 0)
