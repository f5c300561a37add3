"""Random small safe FLP programs for differential testing.

Programs use constants drawn from {a, b, c}, at most two evaluable
functions of arity 0 or 1, predicates p/1, q/1 and r/0, and at most four
rules. Unsafe rules are rejected and redrawn.
"""

from __future__ import annotations

import random

from .ast import (
    BOT, App, Apart, Assign, Choice, ChoiceEnum, Const, Eq, FLPProgram, FLPRule, Literal,
    Pred, Signature, Var,
)
from .safety import check_flp_rule

CONSTANTS = ("a", "b", "c")
FUNCTIONS = (("f", 1), ("g", 0), ("h", 1))
PREDICATES = (("p", 1), ("q", 1), ("r", 0))


class _Gen:
    def __init__(self, rng, consts, funcs):
        self.rng = rng
        self.consts = consts
        self.funcs = funcs

    def term(self, depth=0, vars_=("X", "Y")):
        roll = self.rng.random()
        if self.funcs and depth < 2 and roll < 0.35:
            fn, n = self.rng.choice(self.funcs)
            return App(fn, tuple(self.term(depth + 1, vars_) for _ in range(n)))
        if roll < 0.7:
            return Var(self.rng.choice(vars_))
        return Const(self.rng.choice(self.consts))

    def atom(self, vars_=("X", "Y")):
        roll = self.rng.random()
        if roll < 0.55:
            name, n = self.rng.choice(PREDICATES)
            return Pred(name, tuple(self.term(0, vars_) for _ in range(n)))
        if roll < 0.85:
            return Eq(self.term(0, vars_), self.term(0, vars_))
        return Apart(self.term(0, vars_), self.term(0, vars_))

    def literal(self, vars_=("X", "Y")):
        return Literal(self.atom(vars_), self.rng.random() < 0.3)

    def target(self):
        fn, n = self.rng.choice(self.funcs)
        return App(fn, tuple(self.term(1) for _ in range(n)))

    def head(self):
        kinds = ["pred", "pred", "bot"]
        if self.funcs:
            kinds += ["assign", "assign", "choice", "enum"]
        kind = self.rng.choice(kinds)
        if kind == "pred":
            name, n = self.rng.choice(PREDICATES)
            return Pred(name, tuple(self.term() for _ in range(n)))
        if kind == "bot":
            return BOT
        if kind == "assign":
            return Assign(self.target(), self.term())
        if kind == "choice":
            cond = (Literal(Pred(self.rng.choice(("p", "q")), (Var("Z"),))),)
            if self.rng.random() < 0.4:
                cond += (self.literal(("Z", "X")),)
            return Choice(self.target(), "Z", cond)
        k = self.rng.randint(1, 2)
        return ChoiceEnum(self.target(), tuple(self.term(1) for _ in range(k)))

    def rule(self):
        head = self.head()
        n = self.rng.choice((0, 0, 1, 1, 2, 2, 3)) if head != BOT else self.rng.randint(1, 3)
        return FLPRule(head, tuple(self.literal() for _ in range(n)))


def random_program(rng, max_rules=4, max_tries=200) -> FLPProgram:
    """A random safe program; ``rng`` is a ``random.Random``."""
    consts = tuple(sorted(rng.sample(CONSTANTS, rng.randint(1, 3))))
    funcs = tuple(rng.sample(FUNCTIONS, rng.randint(0, 2)))
    gen = _Gen(rng, consts, funcs)
    rules = []
    for _ in range(rng.randint(1, max_rules)):
        for _ in range(max_tries):
            r = gen.rule()
            if check_flp_rule(r).safe:
                rules.append(r)
                break
    sig = Signature(frozenset(consts), frozenset(funcs), frozenset(PREDICATES))
    return FLPProgram(sig, tuple(rules))


def random_programs(seed, count, **kw):
    rng = random.Random(seed)
    return [random_program(rng, **kw) for _ in range(count)]
