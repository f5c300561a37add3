"""Abstract syntax shared by every stage of the pipeline.

Terms, atoms and literals of functional logic programs (FLP), the formula
language of here-and-there logic with its derived operators, FLP rules,
LP rules and signatures. All nodes are frozen dataclasses, so they can be
hashed, compared structurally and shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

RESERVED_PREFIXES = ("holds_", "aux")
FRESH_VAR_PREFIX = "V_"


class SignatureError(ValueError):
    pass


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    """A Herbrand constant (0-ary constructor)."""

    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    """Application of an evaluable function; ``args`` is empty for 0-ary ones."""

    fn: str
    args: tuple = ()

    @property
    def arity(self):
        return len(self.args)

    def __str__(self):
        return format_term(self)


Term = Union[Var, Const, App]


def is_lp_term(t) -> bool:
    return not isinstance(t, App)


# ---------------------------------------------------------------- atoms


@dataclass(frozen=True)
class Pred:
    name: str
    args: tuple = ()

    @property
    def arity(self):
        return len(self.args)

    def __str__(self):
        return format_atom(self)


@dataclass(frozen=True)
class Eq:
    lhs: Term
    rhs: Term

    def __str__(self):
        return format_atom(self)


@dataclass(frozen=True)
class Apart:
    lhs: Term
    rhs: Term

    def __str__(self):
        return format_atom(self)


Atom = Union[Pred, Eq, Apart]


@dataclass(frozen=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self):
        return format_literal(self)


def pos(atom) -> Literal:
    return Literal(atom, False)


def neg(atom) -> Literal:
    return Literal(atom, True)


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return "#true"


@dataclass(frozen=True)
class Bot:
    def __str__(self):
        return "#false"


TOP = Top()
BOT = Bot()


@dataclass(frozen=True)
class And:
    items: tuple = ()


@dataclass(frozen=True)
class Or:
    items: tuple = ()


@dataclass(frozen=True)
class Implies:
    antecedent: object
    consequent: object


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: object


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: object


def Not(f):
    """Negation is the derived formula ``f -> #false``."""
    return Implies(f, BOT)


def is_not(f) -> bool:
    return isinstance(f, Implies) and f.consequent == BOT


# Derived nodes. They disappear under expand.expand_formula.


@dataclass(frozen=True)
class Exist:
    """Definedness of a term, ``E t``."""

    term: Term


@dataclass(frozen=True)
class Equiv:
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class HeadGuard:
    """The definedness-aware implication ``head :- body``."""

    head: object
    body: object


@dataclass(frozen=True)
class Assign:
    """``target := value``; also used as an FLP rule head."""

    target: App
    value: Term


@dataclass(frozen=True)
class Choice:
    """``target in {var | condition}``; also used as an FLP rule head.

    ``condition`` is a tuple of literals (FLP heads) or a formula (when
    built by the set-construction sugar).
    """

    target: App
    var: str
    condition: object


@dataclass(frozen=True)
class ChoiceEnum:
    """``target in {t1, ..., tn}``."""

    target: App
    values: tuple


Head = Union[Pred, Bot, Assign, Choice, ChoiceEnum]


# ---------------------------------------------------------------- rules


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    col: int

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


@dataclass(frozen=True)
class FLPRule:
    head: Head
    body: tuple = ()
    span: Optional[Span] = field(default=None, compare=False, hash=False)

    def __str__(self):
        return format_rule(self)


@dataclass(frozen=True)
class LPRule:
    """Function-free rule. ``head`` is a Pred or None for a constraint.

    Negated equalities in the body are built-in syntactic disequalities.
    """

    head: Optional[Pred]
    body: tuple = ()

    def __post_init__(self):
        for lit in self.body:
            for t in atom_terms(lit.atom):
                if not is_lp_term(t):
                    raise ValueError(f"LP rule contains evaluable term {format_term(t)}")

    def __str__(self):
        return format_lp_rule(self)


@dataclass(frozen=True)
class EMHead:
    """The head ``atom | not atom`` of a translated choice rule."""

    atom: Pred


@dataclass(frozen=True)
class ExistsBlock:
    """``exists vars (items)`` in a translated body, optionally negated.

    ``items`` holds literals and nested blocks. A block with no variables is
    a plain (possibly negated) conjunction.
    """

    vars: tuple
    items: tuple
    negated: bool = False


@dataclass(frozen=True)
class IRule:
    """A rule of the intermediate theory produced by the term translation.

    ``head`` is a Pred, BOT or an EMHead; ``body`` holds LP literals and
    ExistsBlocks.
    """

    head: object
    body: tuple = ()
    span: Optional[Span] = field(default=None, compare=False, hash=False)

    def to_formula(self):
        body = And(tuple(_block_formula(b) for b in self.body))
        if isinstance(self.head, EMHead):
            head = Or((self.head.atom, Not(self.head.atom)))
        else:
            head = self.head
        return Implies(body, head)

    def __str__(self):
        return format_formula(self.to_formula())


def _block_formula(item):
    if isinstance(item, Literal):
        return Not(item.atom) if item.negated else item.atom
    inner = And(tuple(_block_formula(i) for i in item.items))
    if len(inner.items) == 1:
        inner = inner.items[0]
    f = Exists(item.vars, inner) if item.vars else inner
    return Not(f) if item.negated else f


@dataclass(frozen=True)
class Signature:
    """Constructors C0, evaluables F and predicates P.

    ``evaluables`` and ``predicates`` hold (name, arity) pairs.
    """

    constructors: frozenset
    evaluables: frozenset = frozenset()
    predicates: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "constructors", frozenset(self.constructors))
        object.__setattr__(self, "evaluables", frozenset(self.evaluables))
        object.__setattr__(self, "predicates", frozenset(self.predicates))
        cons = {(c, 0) for c in self.constructors}
        for a, b, what in ((cons, self.evaluables, "constructor and evaluable"),
                           (cons, self.predicates, "constructor and predicate"),
                           (self.evaluables, self.predicates, "evaluable and predicate")):
            clash = a & b
            if clash:
                name, arity = sorted(clash)[0]
                raise SignatureError(f"{name}/{arity} is declared both as {what}")

    def arity(self, fn):
        for name, n in self.evaluables:
            if name == fn:
                return n
        raise SignatureError(f"unknown evaluable function {fn}")

    def entries(self):
        """Every (f, args) pair over C0, in canonical order."""
        from itertools import product

        consts = sorted(self.constructors)
        out = []
        for name, n in sorted(self.evaluables):
            for args in product(consts, repeat=n):
                out.append((name, args))
        return out

    def with_constants(self, extra):
        return Signature(self.constructors | frozenset(extra), self.evaluables, self.predicates)


@dataclass(frozen=True)
class FLPProgram:
    signature: Signature
    rules: tuple = ()


@dataclass(frozen=True)
class LPProgram:
    rules: tuple = ()
    constants: frozenset = frozenset()

    def __str__(self):
        return "".join(format_lp_rule(r) + "\n" for r in self.rules)


# ---------------------------------------------------------------- traversal


def atom_terms(atom):
    if isinstance(atom, Pred):
        return atom.args
    if isinstance(atom, (Eq, Apart, Equiv)):
        return (atom.lhs, atom.rhs)
    if isinstance(atom, Exist):
        return (atom.term,)
    return ()


def subterms(t) -> tuple:
    """``t`` and all its proper subterms, depth-first, without duplicates."""
    seen = {}

    def walk(u):
        if u not in seen:
            seen[u] = None
        if isinstance(u, App):
            for a in u.args:
                walk(a)

    walk(t)
    return tuple(seen)


def term_vars(t) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    elif isinstance(t, App):
        for a in t.args:
            yield from term_vars(a)


def _ordered(names: Iterable[str]) -> tuple:
    return tuple(dict.fromkeys(names))


def _vars_in(x) -> Iterator[str]:
    """Free variable occurrences in first-occurrence order."""
    if isinstance(x, (Var, Const, App)):
        yield from term_vars(x)
    elif isinstance(x, (Pred, Eq, Apart, Exist, Equiv)):
        for t in atom_terms(x):
            yield from term_vars(t)
    elif isinstance(x, Literal):
        yield from _vars_in(x.atom)
    elif isinstance(x, (And, Or)):
        for i in x.items:
            yield from _vars_in(i)
    elif isinstance(x, Implies):
        yield from _vars_in(x.antecedent)
        yield from _vars_in(x.consequent)
    elif isinstance(x, HeadGuard):
        yield from _vars_in(x.head)
        yield from _vars_in(x.body)
    elif isinstance(x, (Forall, Exists)):
        bound = set(x.vars)
        yield from (v for v in _vars_in(x.body) if v not in bound)
    elif isinstance(x, Assign):
        yield from _vars_in(x.target)
        yield from _vars_in(x.value)
    elif isinstance(x, Choice):
        yield from _vars_in(x.target)
        cond = x.condition if not isinstance(x.condition, tuple) else And(x.condition)
        yield from (v for v in _vars_in(cond) if v != x.var)
    elif isinstance(x, ChoiceEnum):
        yield from _vars_in(x.target)
        for t in x.values:
            yield from term_vars(t)
    elif isinstance(x, FLPRule):
        yield from _vars_in(x.head)
        for lit in x.body:
            yield from _vars_in(lit)
    elif isinstance(x, LPRule):
        if x.head is not None:
            yield from _vars_in(x.head)
        for lit in x.body:
            yield from _vars_in(lit)
    elif isinstance(x, EMHead):
        yield from _vars_in(x.atom)
    elif isinstance(x, ExistsBlock):
        bound = set(x.vars)
        yield from (v for v in _vars_in(x.items) if v not in bound)
    elif isinstance(x, IRule):
        yield from _vars_in(x.head)
        yield from _vars_in(x.body)
    elif isinstance(x, (tuple, list)):
        for i in x:
            yield from _vars_in(i)


def free_vars(x) -> tuple:
    """Variables not bound by a quantifier or a choice binder, first-occurrence order."""
    return _ordered(_vars_in(x))


def rule_vars(r) -> tuple:
    """All variables of an FLP rule, including its choice variable."""
    names = list(free_vars(r))
    if isinstance(r.head, Choice):
        names.append(r.head.var)
    return _ordered(names)


def holds_name(fn: str, arity: int, signature: Optional[Signature] = None):
    """The predicate replacing evaluable ``fn/arity`` after flattening."""
    name = "holds_" + fn
    if signature is not None and (name, arity + 1) in signature.predicates:
        raise SignatureError(f"predicate {name}/{arity + 1} collides with the flattening of {fn}/{arity}")
    return name, arity + 1


# ---------------------------------------------------------------- substitution


def substitute(x, mapping):
    """Replace free variables by terms. ``mapping`` maps names to terms."""
    if not mapping:
        return x
    if isinstance(x, Var):
        return mapping.get(x.name, x)
    if isinstance(x, Const):
        return x
    if isinstance(x, App):
        return App(x.fn, tuple(substitute(a, mapping) for a in x.args))
    if isinstance(x, Pred):
        return Pred(x.name, tuple(substitute(a, mapping) for a in x.args))
    if isinstance(x, (Eq, Apart, Equiv)):
        return type(x)(substitute(x.lhs, mapping), substitute(x.rhs, mapping))
    if isinstance(x, Exist):
        return Exist(substitute(x.term, mapping))
    if isinstance(x, Literal):
        return Literal(substitute(x.atom, mapping), x.negated)
    if isinstance(x, (Top, Bot)):
        return x
    if isinstance(x, (And, Or)):
        return type(x)(tuple(substitute(i, mapping) for i in x.items))
    if isinstance(x, Implies):
        return Implies(substitute(x.antecedent, mapping), substitute(x.consequent, mapping))
    if isinstance(x, HeadGuard):
        return HeadGuard(substitute(x.head, mapping), substitute(x.body, mapping))
    if isinstance(x, (Forall, Exists)):
        inner = {k: v for k, v in mapping.items() if k not in x.vars}
        return type(x)(x.vars, substitute(x.body, inner))
    if isinstance(x, Assign):
        return Assign(substitute(x.target, mapping), substitute(x.value, mapping))
    if isinstance(x, Choice):
        inner = {k: v for k, v in mapping.items() if k != x.var}
        return Choice(substitute(x.target, mapping), x.var, substitute(x.condition, inner))
    if isinstance(x, ChoiceEnum):
        return ChoiceEnum(substitute(x.target, mapping), tuple(substitute(t, mapping) for t in x.values))
    if isinstance(x, tuple):
        return tuple(substitute(i, mapping) for i in x)
    if isinstance(x, FLPRule):
        return FLPRule(substitute(x.head, mapping), substitute(x.body, mapping), x.span)
    if isinstance(x, LPRule):
        head = None if x.head is None else substitute(x.head, mapping)
        return LPRule(head, substitute(x.body, mapping))
    raise TypeError(f"cannot substitute into {type(x).__name__}")


# ---------------------------------------------------------------- printing


def format_term(t) -> str:
    if isinstance(t, App):
        if not t.args:
            return t.fn
        return f"{t.fn}({','.join(format_term(a) for a in t.args)})"
    return t.name


def format_atom(a) -> str:
    if isinstance(a, Pred):
        if not a.args:
            return a.name
        return f"{a.name}({','.join(format_term(t) for t in a.args)})"
    if isinstance(a, Eq):
        return f"{format_term(a.lhs)} = {format_term(a.rhs)}"
    if isinstance(a, Apart):
        return f"{format_term(a.lhs)} # {format_term(a.rhs)}"
    raise TypeError(type(a).__name__)


def format_literal(lit: Literal) -> str:
    if lit.negated and isinstance(lit.atom, Eq):
        return f"{format_term(lit.atom.lhs)} != {format_term(lit.atom.rhs)}"
    return ("not " if lit.negated else "") + format_atom(lit.atom)


def format_head(h) -> str:
    if isinstance(h, Bot):
        return ""
    if isinstance(h, Pred):
        return format_atom(h)
    if isinstance(h, Assign):
        return f"{format_term(h.target)} := {format_term(h.value)}"
    if isinstance(h, Choice):
        cond = ", ".join(format_literal(lit) for lit in h.condition)
        return f"{format_term(h.target)} in {{{h.var} | {cond}}}"
    if isinstance(h, ChoiceEnum):
        return f"{format_term(h.target)} in {{{', '.join(format_term(t) for t in h.values)}}}"
    raise TypeError(type(h).__name__)


def format_rule(r: FLPRule) -> str:
    head = format_head(r.head)
    body = ", ".join(format_literal(lit) for lit in r.body)
    if not body:
        return f"{head}."
    if not head:
        return f":- {body}."
    return f"{head} :- {body}."


def format_lp_rule(r: LPRule) -> str:
    head = "" if r.head is None else format_atom(r.head)
    body = ", ".join(format_literal(lit) for lit in r.body)
    if not body:
        return f"{head}." if head else ":- ."
    if not head:
        return f":- {body}."
    return f"{head} :- {body}."


def format_formula(f, top=True) -> str:
    """Render a formula in the documented ASCII syntax.

    ``&`` conjunction, ``|`` disjunction, ``->`` implication, ``not F`` for
    ``F -> #false``, ``exists X,Y (F)``, ``forall X (F)``, ``E(t)``,
    ``t1 == t2`` for term equivalence (equal, or both undefined). A top-level
    implication with a non-false consequent prints as ``H <- B``.
    """
    if isinstance(f, (Pred, Eq, Apart)):
        return format_atom(f)
    if isinstance(f, (Top, Bot)):
        return str(f)
    if isinstance(f, Literal):
        return format_literal(f)
    if isinstance(f, Exist):
        return f"E({format_term(f.term)})"
    if isinstance(f, Equiv):
        return f"{format_term(f.lhs)} == {format_term(f.rhs)}"
    if isinstance(f, And):
        if not f.items:
            return "#true"
        return " & ".join(format_formula(i, False) for i in f.items)
    if isinstance(f, Or):
        if not f.items:
            return "#false"
        s = " | ".join(format_formula(i, False) for i in f.items)
        return s if top else f"({s})"
    if isinstance(f, Implies):
        if top and f.consequent == BOT and isinstance(f.antecedent, And):
            if not f.antecedent.items:
                return "#false"
            return f"#false <- {format_formula(f.antecedent, False)}"
        if f.consequent == BOT:
            inner = f.antecedent
            s = format_formula(inner, False)
            if isinstance(inner, And) and len(inner.items) > 1:
                s = f"({s})"
            return f"not {s}"
        if top:
            head = format_formula(f.consequent, True)
            ant = f.antecedent
            if isinstance(ant, And) and not ant.items:
                return head
            return f"{head} <- {format_formula(ant, False)}"
        return f"({format_formula(f.antecedent, False)} -> {format_formula(f.consequent, False)})"
    if isinstance(f, (Forall, Exists)):
        q = "forall" if isinstance(f, Forall) else "exists"
        return f"{q} {','.join(f.vars)} ({format_formula(f.body, False)})"
    if isinstance(f, HeadGuard):
        return f"({format_formula(f.head, False)} :- {format_formula(f.body, False)})"
    if isinstance(f, (Assign, Choice, ChoiceEnum)):
        if isinstance(f, Choice) and not isinstance(f.condition, tuple):
            return f"{format_term(f.target)} in {{{f.var} | {format_formula(f.condition, False)}}}"
        return format_head(f)
    raise TypeError(type(f).__name__)
