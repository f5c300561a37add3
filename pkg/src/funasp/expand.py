"""Elimination of derived operators.

Turns E, equivalence, apartness, the bracket, head-guarded rules,
assignments and choices into formulas built only from atoms, the
connectives ``And``/``Or``/``Implies``, ``TOP``/``BOT`` and quantifiers.
"""

from __future__ import annotations

from .ast import (
    BOT, TOP, And, App, Apart, Assign, Bot, Choice, ChoiceEnum, Const, Eq, Equiv,
    Exist, Exists, FLPRule, Forall, HeadGuard, Implies, Literal, Not, Or, Pred, Top,
    Var, is_lp_term, rule_vars,
)


def args_of(x) -> tuple:
    """Structural arguments of a term or atom, deduplicated, in order."""
    if isinstance(x, App):
        out = x.args
    elif isinstance(x, (Var, Const)):
        out = (x,)
    elif isinstance(x, Pred):
        out = x.args
    elif isinstance(x, (Eq, Apart)):
        out = args_of(x.lhs) + args_of(x.rhs)
    else:
        raise TypeError(f"args_of: unsupported {type(x).__name__}")
    return tuple(dict.fromkeys(out))


def existence_guards(terms) -> tuple:
    """``E t`` atoms for the terms that may be undefined.

    Variables and constants always denote, so their guards are dropped.
    """
    return tuple(Eq(t, t) for t in dict.fromkeys(terms) if not is_lp_term(t))


def bracket(f):
    """Replace each atom A by ``(E t1 & ... & E tn) -> A`` over t in Args(A)."""
    if isinstance(f, (Pred, Eq, Apart)):
        guards = existence_guards(args_of(f))
        return Implies(And(guards), f) if guards else f
    if isinstance(f, (Top, Bot)):
        return f
    if isinstance(f, (And, Or)):
        return type(f)(tuple(bracket(i) for i in f.items))
    if isinstance(f, Implies):
        return Implies(bracket(f.antecedent), bracket(f.consequent))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, bracket(f.body))
    raise TypeError(f"bracket: unsupported {type(f).__name__}")


def _fresh(base, taken):
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _choice_formulas(target, var, cond, body):
    """The excluded-middle formula and the existence constraint of a choice."""
    guards = existence_guards(target.args)
    eq = Eq(target, Var(var))
    em = Forall((var,), Implies(And((cond,) + guards + (body,)), Or((eq, Not(eq)))))
    some = Implies(And((Not(Exists((var,), And((cond, eq)))),) + guards + (body,)), BOT)
    return [simplify(em), simplify(some)]


def expand_formula(f):
    """Rewrite every derived node into the core language. Idempotent."""
    return simplify(_expand(f))


def _expand(f):
    if isinstance(f, (Pred, Eq, Top, Bot)):
        return f
    if isinstance(f, Exist):
        return Eq(f.term, f.term)
    if isinstance(f, Apart):
        return And((Eq(f.lhs, f.lhs), Eq(f.rhs, f.rhs), Not(Eq(f.lhs, f.rhs))))
    if isinstance(f, Equiv):
        return Implies(Or((Eq(f.lhs, f.lhs), Eq(f.rhs, f.rhs))), Eq(f.lhs, f.rhs))
    if isinstance(f, Literal):
        a = _expand(f.atom)
        return Not(a) if f.negated else a
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_expand(i) for i in f.items))
    if isinstance(f, Implies):
        return Implies(_expand(f.antecedent), _expand(f.consequent))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.vars, _expand(f.body))
    if isinstance(f, HeadGuard):
        return Implies(_expand(f.body), bracket(_expand_head_formula(f.head)))
    if isinstance(f, Assign):
        return Implies(Eq(f.value, f.value), Eq(f.target, f.value))
    if isinstance(f, (Choice, ChoiceEnum)):
        target, var, cond = _choice_parts(f, set())
        return And(tuple(_choice_formulas(target, var, cond, TOP)))
    raise TypeError(f"expand: unsupported {type(f).__name__}")


def _expand_head_formula(h):
    # Inside a head guard the head is bracketed after expansion; choices are
    # not bracketed because their guards are already explicit.
    return _expand(h)


def _choice_parts(h, taken):
    if isinstance(h, Choice):
        cond = h.condition
        cond = And(cond) if isinstance(cond, tuple) else cond
        return h.target, h.var, _expand(cond)
    var = _fresh("X", taken)
    return h.target, var, Or(tuple(Eq(t, Var(var)) for t in h.values))


def expand_rule(r: FLPRule) -> list:
    """Core formulas equivalent to an FLP rule: one, or two for a choice head."""
    body = And(tuple(_expand(lit) for lit in r.body))
    h = r.head
    if isinstance(h, Bot):
        return [simplify(Implies(body, BOT))]
    if isinstance(h, Pred):
        return [simplify(Implies(body, bracket(h)))]
    if isinstance(h, Assign):
        inner = bracket(Implies(Eq(h.value, h.value), Eq(h.target, h.value)))
        return [simplify(Implies(body, inner))]
    if isinstance(h, (Choice, ChoiceEnum)):
        target, var, cond = _choice_parts(h, set(rule_vars(r)))
        return _choice_formulas(target, var, cond, body)
    raise TypeError(f"expand_rule: unsupported head {type(h).__name__}")


def expand_program(program) -> tuple:
    out = []
    for r in program.rules:
        out.extend(expand_rule(r))
    return tuple(out)


# ---------------------------------------------------------------- simplification


def _trivial_eq(a):
    """TOP/BOT for equalities between terms that always denote, else None."""
    if isinstance(a, Eq) and is_lp_term(a.lhs) and is_lp_term(a.rhs):
        if a.lhs == a.rhs:
            return TOP
        if isinstance(a.lhs, Const) and isinstance(a.rhs, Const):
            return BOT
    return None


def simplify(f):
    """Elementary HT-preserving clean-ups.

    Drops ``#true`` conjuncts and trivially valid existence guards, flattens
    nested conjunctions and disjunctions, and curries ``A -> (C -> D)`` into
    ``C & A -> D`` when D is not ``#false``.
    """
    if isinstance(f, Eq):
        t = _trivial_eq(f)
        return f if t is None else t
    if isinstance(f, (Pred, Top, Bot)):
        return f
    if isinstance(f, And):
        items = []
        for i in f.items:
            s = simplify(i)
            if s == BOT:
                return BOT
            if s == TOP:
                continue
            items.extend(s.items if isinstance(s, And) else (s,))
        items = list(dict.fromkeys(items))
        if not items:
            return TOP
        return items[0] if len(items) == 1 else And(tuple(items))
    if isinstance(f, Or):
        items = []
        for i in f.items:
            s = simplify(i)
            if s == TOP:
                return TOP
            if s == BOT:
                continue
            items.extend(s.items if isinstance(s, Or) else (s,))
        items = list(dict.fromkeys(items))
        if not items:
            return BOT
        return items[0] if len(items) == 1 else Or(tuple(items))
    if isinstance(f, Implies):
        a = simplify(f.antecedent)
        c = simplify(f.consequent)
        if a == BOT or c == TOP:
            return TOP
        if a == TOP:
            return c
        if isinstance(c, Implies) and c.consequent != BOT:
            return simplify(Implies(And((c.antecedent, a)), c.consequent))
        return Implies(a, c)
    if isinstance(f, (Forall, Exists)):
        body = simplify(f.body)
        if body in (TOP, BOT):
            return body
        return type(f)(f.vars, body)
    raise TypeError(f"simplify: unexpected {type(f).__name__}")


def is_core(f) -> bool:
    """True when ``f`` contains no derived operator."""
    if isinstance(f, (Pred, Eq, Top, Bot)):
        return True
    if isinstance(f, (And, Or)):
        return all(is_core(i) for i in f.items)
    if isinstance(f, Implies):
        return is_core(f.antecedent) and is_core(f.consequent)
    if isinstance(f, (Forall, Exists)):
        return is_core(f.body)
    return False
