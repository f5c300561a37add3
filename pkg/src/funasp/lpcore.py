"""A small engine for function-free normal programs.

Grounding over a finite set of constants, the Gelfond-Lifschitz reduct,
least models, stable-model enumeration, and lifting of stable models of a
flattened program back to functional states.

Ground atoms are represented as ``(name, args)`` with ``args`` a tuple of
constant names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .ast import Const, Eq, LPProgram, Pred, Var, format_atom, free_vars
from .htsem import DEFAULT_MAX_NODES, SearchSpaceTooLarge, State, format_state

__all__ = [
    "GroundRule", "GroundProgram", "UnsafeRuleError", "LiftError", "ground", "gl_reduct",
    "least_model", "stable_models", "lift", "format_atoms", "translated_models",
]


class UnsafeRuleError(ValueError):
    pass


class LiftError(ValueError):
    pass


@dataclass(frozen=True)
class GroundRule:
    head: object  # atom key or None for a constraint
    pos: tuple = ()
    neg: tuple = ()


@dataclass
class GroundProgram:
    rules: list = field(default_factory=list)

    @property
    def facts(self):
        return sorted({r.head for r in self.rules if r.head is not None and not r.pos and not r.neg})

    @property
    def constraints(self):
        return [r for r in self.rules if r.head is None]

    @property
    def atoms(self):
        out = set()
        for r in self.rules:
            if r.head is not None:
                out.add(r.head)
            out.update(r.pos)
            out.update(r.neg)
        return out

    def __str__(self):
        lines = []
        for r in self.rules:
            body = [_fmt(a) for a in r.pos] + ["not " + _fmt(a) for a in r.neg]
            head = "" if r.head is None else _fmt(r.head)
            if not body:
                lines.append(f"{head}.")
            else:
                lines.append(f"{head} :- {', '.join(body)}." if head else f":- {', '.join(body)}.")
        return "".join(line + "\n" for line in lines)


def _fmt(key):
    name, args = key
    return format_atom(Pred(name, tuple(Const(a) for a in args)))


def format_atoms(atoms) -> str:
    return " ".join(sorted(_fmt(a) for a in atoms))


def _gterm(t, env):
    if isinstance(t, Var):
        return env[t.name]
    return t.name


def _instances(rule, consts):
    names = free_vars(rule)
    bound = set()
    for lit in rule.body:
        if not lit.negated and isinstance(lit.atom, Pred):
            bound.update(free_vars(lit))
    loose = [v for v in names if v not in bound]
    if loose:
        raise UnsafeRuleError(f"unsafe rule {rule}: variable {loose[0]} is not bound by a positive atom")
    for vals in product(consts, repeat=len(names)):
        env = dict(zip(names, vals))
        pos, neg = [], []
        ok = True
        for lit in rule.body:
            a = lit.atom
            if isinstance(a, Eq):
                if (_gterm(a.lhs, env) == _gterm(a.rhs, env)) == lit.negated:
                    ok = False
                    break
                continue
            key = (a.name, tuple(_gterm(t, env) for t in a.args))
            (neg if lit.negated else pos).append(key)
        if not ok:
            continue
        head = None
        if rule.head is not None:
            head = (rule.head.name, tuple(_gterm(t, env) for t in rule.head.args))
        yield GroundRule(head, tuple(dict.fromkeys(pos)), tuple(dict.fromkeys(neg)))


def ground(program: LPProgram, consts=None, simplify=False) -> GroundProgram:
    """All instances of the rules over the constants.

    Built-in (dis)equalities are decided syntactically. With ``simplify``,
    instances whose positive body mentions an atom that no rule can derive
    are dropped, and negative literals over such atoms are erased.
    """
    consts = sorted(set(consts if consts is not None else program.constants))
    rules = [g for r in program.rules for g in _instances(r, consts)]
    if simplify:
        possible = _possible(rules)
        rules = [GroundRule(r.head, r.pos, tuple(a for a in r.neg if a in possible))
                 for r in rules if all(a in possible for a in r.pos)]
    return GroundProgram(list(dict.fromkeys(rules)))


def _possible(rules):
    return _fixpoint([r for r in rules if r.head is not None], lambda r: True)


def _fixpoint(rules, usable):
    """Least model of the positive parts of the usable rules."""
    watch = {}
    count = []
    model = set()
    queue = []
    for i, r in enumerate(rules):
        if not usable(r):
            count.append(None)
            continue
        count.append(len(set(r.pos)))
        for a in set(r.pos):
            watch.setdefault(a, []).append(i)
        if count[i] == 0:
            queue.append(r.head)
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for i in watch.get(a, ()):
            if count[i] is None:
                continue
            count[i] -= 1
            if count[i] == 0:
                queue.append(rules[i].head)
    return model


def gl_reduct(g: GroundProgram, atoms) -> GroundProgram:
    atoms = set(atoms)
    return GroundProgram([GroundRule(r.head, r.pos, ()) for r in g.rules
                          if not any(a in atoms for a in r.neg)])


def least_model(g: GroundProgram) -> set:
    """Least model of a negation-free program; constraints are ignored."""
    if any(r.neg for r in g.rules):
        raise ValueError("least_model needs a program without negation")
    return _fixpoint([r for r in g.rules if r.head is not None], lambda r: True)


def _violates(constraints, atoms):
    return any(all(a in atoms for a in c.pos) and not any(a in atoms for a in c.neg)
               for c in constraints)


def stable_models(g: GroundProgram, max_nodes=DEFAULT_MAX_NODES) -> list:
    """All stable models, sorted by their printed form.

    Branches on atoms occurring under negation. Each branch is bounded by
    the least model of the rules that certainly apply and by the least model
    of the rules that may still apply.
    """
    rules = [r for r in g.rules if r.head is not None]
    constraints = g.constraints
    naf = sorted({a for r in g.rules for a in r.neg})
    nodes = [0]
    found = set()

    def bounds(assign):
        lower = _fixpoint(rules, lambda r: all(assign.get(a) is False for a in r.neg))
        upper = _fixpoint(rules, lambda r: not any(assign.get(a) is True for a in r.neg))
        return lower, upper

    def search(assign):
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise SearchSpaceTooLarge(f"stable-model search exceeded {max_nodes} nodes")
        while True:
            lower, upper = bounds(assign)
            changed = False
            for a in naf:
                v = assign.get(a)
                if a in lower:
                    if v is False:
                        return
                    if v is None:
                        assign[a] = True
                        changed = True
                elif a not in upper:
                    if v is True:
                        return
                    if v is None:
                        assign[a] = False
                        changed = True
            for c in constraints:
                if all(a in lower for a in c.pos) and not any(a in upper for a in c.neg):
                    return
            if not changed:
                break
        open_atoms = [a for a in naf if a not in assign]
        if not open_atoms:
            model = frozenset(lower)
            if model == frozenset(upper) and not _violates(constraints, model):
                if least_model(gl_reduct(g, model)) == set(model):
                    found.add(model)
            return
        a = open_atoms[0]
        for v in (True, False):
            search({**assign, a: v})

    search({})
    return sorted(found, key=format_atoms)


def lift(atoms, signature) -> State:
    """The functional state encoded by a set of flattened atoms."""
    holds = {("holds_" + f, n + 1): f for f, n in signature.evaluables}
    preds = set(signature.predicates)
    sigma, out = {}, []
    for name, args in atoms:
        if (name, len(args)) in holds:
            key = (holds[(name, len(args))], args[:-1])
            if key in sigma and sigma[key] != args[-1]:
                raise LiftError(f"two values for {key[0]}{key[1]}: {sigma[key]} and {args[-1]}")
            sigma[key] = args[-1]
        elif (name, len(args)) in preds:
            out.append((name, args))
    return State(sigma, out)


def translated_models(program, max_nodes=DEFAULT_MAX_NODES, check_safety=True) -> list:
    """Lifted stable models of the flattened program, sorted like the oracle's."""
    from .flatten import translate_program

    lp = translate_program(program, check_safety=check_safety)
    g = ground(lp, program.signature.constructors, simplify=True)
    states = {lift(m, program.signature) for m in stable_models(g, max_nodes)}
    return sorted(states, key=format_state)
