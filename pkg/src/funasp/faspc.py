"""Many-sorted programs with total functions (FASP).

Provides the program representation produced by ``parser.parse_fasp``, its
embedding into FLP (sort predicates plus one choice rule per function),
grounding over declared ranges, and a reduct-based answer-set enumerator
that shares no code with the FLP pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .ast import (
    App, Bot, Choice, Const, FLPProgram, FLPRule, Literal, Pred, Signature, Var,
    format_rule, free_vars, substitute,
)
from .htsem import DEFAULT_MAX_NODES, SearchSpaceTooLarge, State


@dataclass
class FASPProgram:
    types: dict = field(default_factory=dict)  # name -> tuple of constants
    preds: dict = field(default_factory=dict)  # name -> tuple of type names
    funcs: dict = field(default_factory=dict)  # name -> (domain tuple, range)
    vars: dict = field(default_factory=dict)  # variable -> type name
    rules: tuple = ()

    @property
    def constants(self):
        return frozenset(c for elems in self.types.values() for c in elems)

    def signature(self) -> Signature:
        preds = {(p, len(d)) for p, d in self.preds.items()} | {(t, 1) for t in self.types}
        return Signature(self.constants, {(f, len(d)) for f, (d, _) in self.funcs.items()}, preds)

    def entries(self):
        """In-domain function entries, in declaration order."""
        out = []
        for f, (dom, _) in self.funcs.items():
            for args in product(*(self.types[t] for t in dom)):
                out.append((f, tuple(args)))
        return out


def _fn_vars(n):
    return ("X",) if n == 1 else tuple(f"X{i}" for i in range(1, n + 1))


def embed(p: FASPProgram) -> FLPProgram:
    """The FLP program with sort predicates and one choice rule per function."""
    rules = []
    for t, elems in p.types.items():
        rules.extend(FLPRule(Pred(t, (Const(c),))) for c in elems)
    for f, (dom, rng) in p.funcs.items():
        xs = _fn_vars(len(dom))
        head = Choice(App(f, tuple(Var(x) for x in xs)), "Y", (Literal(Pred(rng, (Var("Y"),))),))
        body = tuple(Literal(Pred(t, (Var(x),))) for t, x in zip(dom, xs))
        rules.append(FLPRule(head, body))
    for r in p.rules:
        ranges = tuple(Literal(Pred(p.vars[v], (Var(v),))) for v in free_vars(r))
        rules.append(FLPRule(r.head, r.body + ranges, r.span))
    return FLPProgram(p.signature(), tuple(rules))


def fasp_ground(p: FASPProgram) -> FASPProgram:
    """Substitute every variable by the elements of its range."""
    out = []
    for r in p.rules:
        names = free_vars(r)
        for vals in product(*(p.types[p.vars[v]] for v in names)):
            out.append(substitute(r, {v: Const(c) for v, c in zip(names, vals)}))
    return FASPProgram(dict(p.types), dict(p.preds), dict(p.funcs), dict(p.vars), tuple(out))


def _value(t, sigma):
    if isinstance(t, Const):
        return t.name
    if isinstance(t, App):
        args = tuple(_value(a, sigma) for a in t.args)
        try:
            return sigma[(t.fn, args)]
        except KeyError:
            raise ValueError(f"function {t.fn}{args} is outside its declared domain") from None
    raise ValueError(f"rule is not ground: variable {t.name}")


def fasp_reduct(g: FASPProgram, state: State) -> list:
    """Positive ground rules ``(head, body)``; head is None for constraints."""
    sigma, atoms = state.sigma, {(a.name, tuple(x.name for x in a.args)) for a in state.atoms}
    out = []
    for r in g.rules:
        body = []
        dropped = False
        for lit in r.body:
            a = lit.atom
            if isinstance(a, Pred):
                key = (a.name, tuple(_value(t, sigma) for t in a.args))
                if not lit.negated:
                    body.append(key)
                elif key in atoms:
                    dropped = True
            else:
                same = _value(a.lhs, sigma) == _value(a.rhs, sigma)
                if same == lit.negated:
                    dropped = True
            if dropped:
                break
        if dropped:
            continue
        head = None if isinstance(r.head, Bot) else (r.head.name, tuple(_value(t, sigma) for t in r.head.args))
        out.append((head, tuple(body)))
    return out


def _least(rules):
    model = set()
    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if head is not None and head not in model and all(b in model for b in body):
                model.add(head)
                changed = True
    return model


def fasp_answer_sets(g: FASPProgram, max_nodes=DEFAULT_MAX_NODES) -> list:
    """Answer sets of a ground program, sorted by printed form.

    Every total, type-respecting value map is tried; for each, the atom set
    is guessed only on atoms that occur negated, since the reduct depends on
    nothing else.
    """
    from .htsem import format_state

    entries = g.entries()
    choices = [g.types[g.funcs[f][1]] for f, _ in entries]
    naf = sorted({(lit.atom.name, lit.atom.args) for r in g.rules for lit in r.body
                  if lit.negated and isinstance(lit.atom, Pred)}, key=str)
    nodes = 0
    found = set()
    for vals in product(*choices):
        sigma = dict(zip(entries, vals))
        negs = sorted({(name, tuple(_value(t, sigma) for t in args)) for name, args in naf})
        for bits in product((False, True), repeat=len(negs)):
            nodes += 1
            if nodes > max_nodes:
                raise SearchSpaceTooLarge(f"answer-set enumeration exceeded {max_nodes} candidates")
            guess = {k for k, b in zip(negs, bits) if b}
            reduct = fasp_reduct(g, State(sigma, guess))
            lm = _least([r for r in reduct if r[0] is not None])
            if {k for k in negs if k in lm} != guess:
                continue
            if any(all(b in lm for b in body) for head, body in reduct if head is None):
                continue
            if not _respects_types(g, lm):
                continue
            found.add(State(sigma, lm))
    return sorted(found, key=format_state)


def _respects_types(g, atoms):
    for name, args in atoms:
        dom = g.preds.get(name)
        if dom is None or len(dom) != len(args):
            return False
        if any(a not in g.types[t] for a, t in zip(args, dom)):
            return False
    return True


def project(state: State, p: FASPProgram) -> State:
    """Restrict a state of the embedded program to the FASP signature."""
    inside = set(p.entries())
    sigma = {k: v for k, v in state.sigma.items() if k in inside}
    atoms = [a for a in state.atoms if a.name in p.preds and len(a.args) == len(p.preds[a.name])]
    return State(sigma, atoms)


def format_ground(g: FASPProgram) -> str:
    return "".join(format_rule(r) + "\n" for r in g.rules)
