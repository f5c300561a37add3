"""Restricted variables and safety checks.

Three levels are checked: source FLP rules, rules of the intermediate
theory (existential blocks in bodies, ``a | not a`` heads) and the final
LP rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ast import (
    App, Apart, Assign, Choice, ChoiceEnum, EMHead, Eq, ExistsBlock, Literal, Pred, Span,
    Var, atom_terms, free_vars, rule_vars, subterms, term_vars,
)

IN_HEAD = "unrestricted-in-head"
UNDER_NEGATION = "unrestricted-under-negation"
CHOICE_VAR = "choice-var-unrestricted"
EXISTS_VAR = "exists-var-unrestricted"
IN_EQUALITY = "unrestricted-in-equality"

_MESSAGES = {
    IN_HEAD: "variable {v} is not restricted in the body but occurs as a head argument",
    UNDER_NEGATION: "variable {v} is not restricted in the body but occurs under negation",
    CHOICE_VAR: "choice variable {v} is not restricted in the choice condition",
    EXISTS_VAR: "quantified variable {v} is not restricted inside its block",
    IN_EQUALITY: "variable {v} is not restricted in the body but is an operand of an equality",
}


@dataclass(frozen=True)
class Violation:
    span: Optional[Span]
    var: str
    reason: str

    @property
    def message(self):
        return _MESSAGES[self.reason].format(v=self.var)

    def __str__(self):
        where = str(self.span) if self.span is not None else "<input>:1:1"
        return f"{where}: error: unsafe rule: {self.message} [{self.reason}]"


@dataclass
class SafetyReport:
    violations: list = field(default_factory=list)

    @property
    def safe(self) -> bool:
        return not self.violations

    def extend(self, other):
        self.violations.extend(other.violations)
        return self


def _restriction(lits, functions=True) -> dict:
    """Map each restricted variable to the indices of the literals restricting it."""
    pos = [lit.atom for lit in lits if not lit.negated]
    by = {}
    for i, a in enumerate(pos):
        found = set()
        if isinstance(a, Pred):
            for t in a.args:
                found.update(term_vars(t))
        if functions:
            for t in atom_terms(a):
                for s in subterms(t):
                    if isinstance(s, App):
                        found.update(x.name for x in s.args if isinstance(x, Var))
            if isinstance(a, Eq):
                for x, y in ((a.lhs, a.rhs), (a.rhs, a.lhs)):
                    if isinstance(x, App) and isinstance(y, Var):
                        found.add(y.name)
        for v in found:
            by.setdefault(v, set()).add(i)
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(pos):
            if isinstance(a, Eq) and isinstance(a.lhs, Var) and isinstance(a.rhs, Var):
                for x, y in ((a.lhs.name, a.rhs.name), (a.rhs.name, a.lhs.name)):
                    if by.get(y, set()) - {i} and i not in by.get(x, set()):
                        by.setdefault(x, set()).add(i)
                        changed = True
    return by


def restricted_vars(body, functions=True) -> set:
    """Variables restricted in a conjunction of literals."""
    return set(_restriction(tuple(body), functions))


def _top_vars(terms):
    return [t.name for t in terms if isinstance(t, Var)]


def _head_top_vars(h):
    if isinstance(h, Pred):
        return _top_vars(h.args)
    if isinstance(h, Assign):
        return _top_vars(h.target.args + (h.value,))
    if isinstance(h, Choice):
        return _top_vars(h.target.args)
    if isinstance(h, ChoiceEnum):
        return _top_vars(h.target.args)
    return []


def check_flp_rule(r) -> SafetyReport:
    found = {}
    restricted = restricted_vars(r.body)
    choice_var = r.head.var if isinstance(r.head, Choice) else None

    def flag(v, reason):
        found.setdefault((v, reason), Violation(r.span, v, reason))

    for lit in r.body:
        if lit.negated:
            for v in free_vars(lit):
                if v not in restricted:
                    flag(v, UNDER_NEGATION)
        elif isinstance(lit.atom, (Eq, Apart)):
            reason = UNDER_NEGATION if isinstance(lit.atom, Apart) else IN_EQUALITY
            for v in _top_vars(atom_terms(lit.atom)):
                if v not in restricted:
                    flag(v, reason)
    for v in _head_top_vars(r.head):
        if v not in restricted:
            flag(v, IN_HEAD)
    if isinstance(r.head, ChoiceEnum):
        # the values form the choice condition, which ends up negated
        for v in free_vars(r.head.values):
            if v not in restricted:
                flag(v, UNDER_NEGATION)
    if choice_var is not None:
        cond = r.head.condition
        for v in free_vars(cond):
            if v != choice_var and v not in restricted:
                flag(v, UNDER_NEGATION)
        if choice_var not in restricted_vars(cond):
            flag(choice_var, CHOICE_VAR)
    order = {v: i for i, v in enumerate(rule_vars(r))}
    return SafetyReport(sorted(found.values(), key=lambda x: (order.get(x.var, 0), x.reason)))


def check_flp_program(program) -> SafetyReport:
    report = SafetyReport()
    for r in program.rules:
        report.extend(check_flp_rule(r))
    return report


def _lifted(items):
    """Literals of a body, with positive blocks unfolded in place."""
    out = []
    for it in items:
        if isinstance(it, Literal):
            out.append(it)
        elif not it.negated:
            out.extend(_lifted(it.items))
    return out


def _blocks(items):
    for it in items:
        if isinstance(it, ExistsBlock):
            yield it
            yield from _blocks(it.items)


def _occurs_negatively(items, v):
    for it in items:
        if isinstance(it, Literal):
            if it.negated and v in free_vars(it):
                return True
        elif it.negated and v in free_vars(it):
            return True
        elif _occurs_negatively(it.items, v):
            return True
    return False


def check_intermediate_rule(r) -> SafetyReport:
    found = []
    restricted = restricted_vars(_lifted(r.body), functions=False)
    head = r.head.atom if isinstance(r.head, EMHead) else r.head
    head_vars = set(free_vars(head))
    for v in free_vars(r):
        if v in restricted:
            continue
        if v in head_vars:
            reason = IN_HEAD
        elif _occurs_negatively(r.body, v):
            reason = UNDER_NEGATION
        else:
            reason = IN_EQUALITY
        found.append(Violation(r.span, v, reason))
    for b in _blocks(r.body):
        inner = restricted_vars(_lifted(b.items), functions=False)
        for v in b.vars:
            if v not in inner:
                found.append(Violation(r.span, v, EXISTS_VAR))
    return SafetyReport(found)


def check_intermediate(rules) -> SafetyReport:
    report = SafetyReport()
    for r in rules:
        report.extend(check_intermediate_rule(r))
    return report


def check_lp_rule(r, span=None) -> SafetyReport:
    """Standard safety: every variable occurs in a positive non-built-in literal."""
    bound = set()
    for lit in r.body:
        if not lit.negated and isinstance(lit.atom, Pred):
            bound.update(free_vars(lit))
    head_vars = set(free_vars(r.head)) if r.head is not None else set()
    found = []
    for v in free_vars(r):
        if v in bound:
            continue
        if v in head_vars:
            reason = IN_HEAD
        elif any(lit.negated and isinstance(lit.atom, Pred) and v in free_vars(lit) for lit in r.body):
            reason = UNDER_NEGATION
        else:
            reason = IN_EQUALITY
        found.append(Violation(span, v, reason))
    return SafetyReport(found)


def check_lp_program(program) -> SafetyReport:
    report = SafetyReport()
    for r in program.rules:
        report.extend(check_lp_rule(r))
    return report
