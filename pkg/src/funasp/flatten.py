"""Flattening of functional programs into function-free normal programs.

Step one replaces every evaluable subterm ``f(t1, ..., tn)`` by a fresh
variable ``V_k`` bound through ``holds_f(t1*, ..., tn*, V_k)`` and yields an
intermediate theory (existential blocks in bodies, ``a | not a`` heads).
Step two turns that theory into LP rules with auxiliary predicates and
removes variable equalities.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    BOT, FRESH_VAR_PREFIX, App, Apart, Assign, Bot, Choice, ChoiceEnum, Const, EMHead, Eq,
    ExistsBlock, FLPProgram, IRule, Literal, LPProgram, LPRule, Pred, Var, free_vars,
    holds_name, substitute,
)
from .safety import check_flp_program


class UnsafeProgram(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__("\n".join(str(v) for v in report.violations))


class TranslationContext:
    """Fresh-name counters and the evaluable-to-predicate table of one run."""

    def __init__(self, signature):
        self.signature = signature
        self.holds = {(f, n): holds_name(f, n, signature)[0] for f, n in signature.evaluables}
        self.var_counter = 0
        self.aux_counter = 0
        self.auxp_counter = 0

    def fresh_var(self):
        self.var_counter += 1
        return Var(f"{FRESH_VAR_PREFIX}{self.var_counter}")

    def holds_atom(self, fn, args, value):
        return Pred(self.holds[(fn, len(args))], tuple(args) + (value,))


@dataclass(frozen=True)
class TermTranslation:
    lp_term: object
    phi: tuple = ()  # positive holds literals
    fresh: tuple = ()  # names of the fresh variables introduced


def translate_term(t, ctx) -> TermTranslation:
    if not isinstance(t, App):
        return TermTranslation(t)
    args, phi, fresh = _translate_terms(t.args, ctx)
    x = ctx.fresh_var()
    phi = phi + (Literal(ctx.holds_atom(t.fn, args, x)),)
    return TermTranslation(x, phi, fresh + (x.name,))


def _translate_terms(terms, ctx):
    lp, phi, fresh = [], (), ()
    for t in terms:
        tr = translate_term(t, ctx)
        lp.append(tr.lp_term)
        phi += tr.phi
        fresh += tr.fresh
    return tuple(lp), phi, fresh


def translate_literal(lit, ctx):
    """A body item: an LP literal, or an existential block."""
    a = lit.atom
    if isinstance(a, Pred):
        args, phi, fresh = _translate_terms(a.args, ctx)
        core = Literal(Pred(a.name, args))
    else:
        (l, r), phi, fresh = _translate_terms((a.lhs, a.rhs), ctx)
        core = Literal(Eq(l, r), isinstance(a, Apart))
    items = (core,) + phi
    if not fresh and len(items) == 1 and not (lit.negated and core.negated):
        return Literal(core.atom, lit.negated or core.negated)
    return ExistsBlock(fresh, items, lit.negated)


def translate_body(body, ctx):
    return tuple(translate_literal(lit, ctx) for lit in body)


def translate_rule(r, ctx) -> list:
    h = r.head
    span = r.span
    if isinstance(h, Bot):
        return [IRule(BOT, translate_body(r.body, ctx), span)]
    if isinstance(h, Pred):
        args, phi, _ = _translate_terms(h.args, ctx)
        return [IRule(Pred(h.name, args), phi + translate_body(r.body, ctx), span)]
    if isinstance(h, Assign):
        args, phi, _ = _translate_terms(h.target.args, ctx)
        val = translate_term(h.value, ctx)
        head = ctx.holds_atom(h.target.fn, args, val.lp_term)
        return [IRule(head, phi + val.phi + translate_body(r.body, ctx), span)]
    if isinstance(h, (Choice, ChoiceEnum)):
        args, phi, _ = _translate_terms(h.target.args, ctx)
        body = translate_body(r.body, ctx)
        if isinstance(h, Choice):
            var = h.var
            conds = [translate_body(h.condition, ctx)]
        else:
            # {t1,...,tn} splits into one condition ti = X per value
            taken = set(free_vars(r))
            var = _fresh_name("X", taken)
            conds = [translate_body((Literal(Eq(t, Var(var))),), ctx) for t in h.values]
        hold = ctx.holds_atom(h.target.fn, args, Var(var))
        out = []
        for i, cond in enumerate(conds):
            if isinstance(h, ChoiceEnum) and isinstance(h.values[i], Const):
                # a constant value goes straight into the head; c = X restricts nothing
                head = ctx.holds_atom(h.target.fn, args, h.values[i])
                out.append(IRule(EMHead(head), phi + body, span))
            else:
                out.append(IRule(EMHead(hold), cond + phi + body, span))
        blocks = tuple(ExistsBlock((var,), (Literal(hold),) + cond, True) for cond in conds)
        out.append(IRule(BOT, blocks + phi + body, span))
        return out
    raise TypeError(f"translate_rule: unsupported head {type(h).__name__}")


def _fresh_name(base, taken):
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def uniqueness_constraints(signature, ctx=None) -> list:
    ctx = ctx or TranslationContext(signature)
    out = []
    for fn, n in sorted(signature.evaluables):
        xs = (Var("X"),) if n == 1 else tuple(Var(f"X{i}") for i in range(1, n + 1))
        v, w = Var("V"), Var("W")
        body = (Literal(ctx.holds_atom(fn, xs, v)), Literal(ctx.holds_atom(fn, xs, w)),
                Literal(Eq(v, w), True))
        out.append(IRule(BOT, body))
    return out


def translate_theory(program: FLPProgram, ctx=None) -> list:
    """The intermediate theory: translated rules, then uniqueness constraints."""
    ctx = ctx or TranslationContext(program.signature)
    out = []
    for r in program.rules:
        out.extend(translate_rule(r, ctx))
    out.extend(uniqueness_constraints(program.signature, ctx))
    return out


# ---------------------------------------------------------------- step two


def _lower(items, context, ctx, emitted):
    """LP literals for a body; negated blocks become auxiliary atoms."""
    flat = []

    def lift(xs):
        for it in xs:
            if isinstance(it, Literal):
                flat.append(it)
            elif not it.negated:
                lift(it.items)
            else:
                flat.append(it)

    lift(items)
    here = [it for it in flat if isinstance(it, Literal) and not it.negated]
    out = []
    for it in flat:
        if isinstance(it, Literal):
            out.append(it)
            continue
        inner = _lower(it.items, context + here, ctx, emitted)
        ctx.auxp_counter += 1
        head = Pred(f"auxp_{ctx.auxp_counter}", tuple(Var(v) for v in free_vars(it)))
        body = inner + [c for c in context + here if c not in inner]
        emitted.append((head, body))
        out.append(Literal(head, True))
    return out


def _is_fresh(v):
    return v.name.startswith(FRESH_VAR_PREFIX)


def eliminate_equalities(head, body):
    """Exhaust the equality rewrite; returns None when the rule is void."""
    body = list(body)
    while True:
        for i, lit in enumerate(body):
            a = lit.atom
            if not isinstance(a, Eq):
                continue
            l, r = a.lhs, a.rhs
            if lit.negated:
                if l == r:
                    return None
                if isinstance(l, Const) and isinstance(r, Const):
                    del body[i]
                    break
                continue
            rest = body[:i] + body[i + 1:]
            if l == r:
                body = rest
                break
            if isinstance(l, Const) and isinstance(r, Const):
                return None
            if isinstance(l, Var) and isinstance(r, Var):
                old, new = (l, r) if _is_fresh(l) and not _is_fresh(r) else (r, l)
            elif isinstance(l, Var):
                old, new = l, r
            else:
                old, new = r, l
            m = {old.name: new}
            head = None if head is None else substitute(head, m)
            body = [substitute(x, m) for x in rest]
            break
        else:
            return head, list(dict.fromkeys(body))


def _emit(out, head, body):
    res = eliminate_equalities(head, body)
    if res is not None:
        out.append(LPRule(*res))


def normalize_rule(r: IRule, ctx) -> list:
    emitted, out = [], []
    body = _lower(r.body, [], ctx, emitted)
    for h, b in emitted:
        _emit(out, h, b)
    if isinstance(r.head, EMHead):
        res = eliminate_equalities(r.head.atom, body)
        if res is None:
            return out
        phi, body = res
        ctx.aux_counter += 1
        names = tuple(dict.fromkeys(free_vars(phi) + free_vars(tuple(body))))
        aux = Pred(f"aux_{ctx.aux_counter}", tuple(Var(v) for v in names))
        _emit(out, phi, [Literal(aux, True)] + body)
        _emit(out, aux, [Literal(phi, True)] + body)
    else:
        _emit(out, None if isinstance(r.head, Bot) else r.head, body)
    return out


def normalize_to_lp(theory, ctx, constants=frozenset()) -> LPProgram:
    rules = []
    for r in theory:
        rules.extend(normalize_rule(r, ctx))
    return LPProgram(tuple(rules), frozenset(constants))


def translate_program(program: FLPProgram, check_safety=True) -> LPProgram:
    if check_safety:
        report = check_flp_program(program)
        if not report.safe:
            raise UnsafeProgram(report)
    ctx = TranslationContext(program.signature)
    theory = translate_theory(program, ctx)
    return normalize_to_lp(theory, ctx, program.signature.constructors)
