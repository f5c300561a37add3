"""Here-and-there semantics with partial functions over Herbrand constants.

A state is a pair (sigma, atoms): sigma maps entries ``(f, (c1, ..., cn))``
to a constant name, entries missing from the map are undefined. An
HT-interpretation is a pair of states ``here <= there``.

``satisfies`` follows the satisfaction clauses literally and is the
reference. ``equilibrium_models`` is a search procedure built on a compiled
form of the ground theory; every model it returns is re-checked with
``satisfies``.
"""

from __future__ import annotations

from itertools import product

from .ast import (
    And, App, Bot, Const, Eq, Exists, Forall, Implies, Or, Pred, Top, Var,
    format_atom, format_term, free_vars,
)
from .expand import expand_formula, expand_program, is_core

DEFAULT_MAX_NODES = 1 << 24

HERE = "here"
THERE = "there"


class SearchSpaceTooLarge(RuntimeError):
    """The model search exceeded its node budget."""


def _world(w):
    if w in ("h", HERE):
        return HERE
    if w in ("t", THERE):
        return THERE
    raise ValueError(f"unknown world {w!r}")


def _atom(a):
    if isinstance(a, Pred):
        return Pred(a.name, tuple(x if isinstance(x, Const) else Const(x) for x in a.args))
    name, args = a
    return Pred(name, tuple(Const(x) for x in args))


class State:
    """A functional state: a partial value map plus a set of ground atoms."""

    __slots__ = ("sigma", "atoms")

    def __init__(self, sigma=None, atoms=()):
        self.sigma = {(f, tuple(args)): v for (f, args), v in (sigma or {}).items() if v is not None}
        self.atoms = frozenset(_atom(a) for a in atoms)

    def value(self, fn, args):
        return self.sigma.get((fn, tuple(args)))

    def _key(self):
        return (frozenset(self.sigma.items()), self.atoms)

    def __eq__(self, other):
        return isinstance(other, State) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"State({format_state(self)!r})"


def format_state(s: State) -> str:
    """Sorted atoms, then sorted ``f(args)=value`` for defined entries."""
    atoms = sorted(format_atom(a) for a in s.atoms)
    ents = sorted(f"{format_term(App(f, tuple(Const(a) for a in args)))}={v}"
                  for (f, args), v in s.sigma.items())
    return " ".join(atoms + ents)


class HTInterpretation:
    def __init__(self, here: State, there: State, signature=None):
        if not state_leq(here, there):
            raise ValueError("here-state must be smaller than there-state")
        self.here = here
        self.there = there
        self.signature = signature

    @property
    def constants(self):
        if self.signature is None:
            raise ValueError("interpretation has no signature; quantifiers need C0")
        return sorted(self.signature.constructors)

    def state(self, w):
        return self.here if _world(w) == HERE else self.there


def total(s: State, signature=None) -> HTInterpretation:
    return HTInterpretation(s, s, signature)


def state_leq(a: State, b: State) -> bool:
    if not a.atoms <= b.atoms:
        return False
    return all(b.sigma.get(k) == v for k, v in a.sigma.items())


def eval_term(s: State, t, env=None):
    """Value of a ground term: a constant name, or None when undefined."""
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Var):
        if env is not None and t.name in env:
            return env[t.name]
        raise ValueError(f"cannot evaluate free variable {t.name}")
    if isinstance(t, App):
        vals = []
        for a in t.args:
            v = eval_term(s, a, env)
            if v is None:
                return None
            vals.append(v)
        return s.sigma.get((t.fn, tuple(vals)))
    raise TypeError(f"not a term: {t!r}")


def satisfies(i: HTInterpretation, w, f, env=None) -> bool:
    """The satisfaction relation ``I, w |= f``."""
    if not is_core(f):
        f = expand_formula(f)
    return _sat(i, _world(w), f, env or {})


def _sat(i, w, f, env):
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    s = i.here if w == HERE else i.there
    if isinstance(f, Pred):
        vals = []
        for t in f.args:
            v = eval_term(s, t, env)
            if v is None:
                return False
            vals.append(Const(v))
        return Pred(f.name, tuple(vals)) in s.atoms
    if isinstance(f, Eq):
        lv = eval_term(s, f.lhs, env)
        rv = eval_term(s, f.rhs, env)
        return lv is not None and lv == rv
    if isinstance(f, And):
        return all(_sat(i, w, g, env) for g in f.items)
    if isinstance(f, Or):
        return any(_sat(i, w, g, env) for g in f.items)
    worlds = (HERE, THERE) if w == HERE else (THERE,)
    if isinstance(f, Implies):
        return all(not _sat(i, v, f.antecedent, env) or _sat(i, v, f.consequent, env) for v in worlds)
    if isinstance(f, Forall):
        return all(_sat(i, v, f.body, {**env, **dict(zip(f.vars, cs))})
                   for v in worlds for cs in product(i.constants, repeat=len(f.vars)))
    if isinstance(f, Exists):
        return any(_sat(i, w, f.body, {**env, **dict(zip(f.vars, cs))})
                   for cs in product(i.constants, repeat=len(f.vars)))
    raise TypeError(f"satisfies: unsupported {type(f).__name__}")


def is_model(i: HTInterpretation, theory) -> bool:
    """True iff every formula, closed universally over C0, holds at here."""
    for f in theory:
        if not is_core(f):
            f = expand_formula(f)
        fv = free_vars(f)
        if fv:
            f = Forall(fv, f)
        if not _sat(i, HERE, f, {}):
            return False
    return True


def classify_function(i: HTInterpretation, fn) -> dict:
    sig = i.signature
    arity = sig.arity(fn)
    decidable, is_total = True, True
    for args in product(sorted(sig.constructors), repeat=arity):
        h = i.here.value(fn, args)
        t = i.there.value(fn, args)
        if h != t:
            decidable = False
        if h is None or t is None:
            is_total = False
    return {"decidable": decidable, "total": is_total}


def all_states(signature):
    """Every state over the signature's atoms and entries."""
    consts = sorted(signature.constructors)
    atoms = [(p, args) for p, n in sorted(signature.predicates) for args in product(consts, repeat=n)]
    entries = signature.entries()
    for sig_vals in product([None] + consts, repeat=len(entries)):
        sigma = dict(zip(entries, sig_vals))
        for bits in product((False, True), repeat=len(atoms)):
            yield State(sigma, [a for a, b in zip(atoms, bits) if b])


def all_interpretations(signature):
    """Every HT-interpretation over the signature (exponential; tiny signatures only)."""
    for t in all_states(signature):
        ents = sorted(t.sigma)
        atoms = sorted(t.atoms, key=format_atom)
        for keep in product((False, True), repeat=len(ents)):
            sigma = {k: t.sigma[k] for k, b in zip(ents, keep) if b}
            for bits in product((False, True), repeat=len(atoms)):
                yield HTInterpretation(State(sigma, [a for a, b in zip(atoms, bits) if b]), t, signature)


# ---------------------------------------------------------------- compiled search
#
# Ground formulas compile to tuples: ("T",), ("F",), ("p", name, terms),
# ("eq", t1, t2), ("and", items), ("or", items), ("imp", a, c).
# Ground terms are constant names (str) or (fn, args) pairs. Quantifiers are
# unfolded over C0. Partial assignments map atom keys (name, vals) and entry
# keys (fn, vals); a missing key is unknown.

_U = "?unknown"  # never a valid constant name: it does not match the lexer
_TRUE = ("T",)
_FALSE = ("F",)


def _compile_term(t, env):
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Var):
        return env[t.name]
    return (t.fn, tuple(_compile_term(a, env) for a in t.args))


def _compile(f, env, consts):
    if isinstance(f, Top):
        return _TRUE
    if isinstance(f, Bot):
        return _FALSE
    if isinstance(f, Pred):
        return ("p", f.name, tuple(_compile_term(a, env) for a in f.args))
    if isinstance(f, Eq):
        return ("eq", _compile_term(f.lhs, env), _compile_term(f.rhs, env))
    if isinstance(f, And):
        return ("and", tuple(_compile(g, env, consts) for g in f.items))
    if isinstance(f, Or):
        return ("or", tuple(_compile(g, env, consts) for g in f.items))
    if isinstance(f, Implies):
        return ("imp", _compile(f.antecedent, env, consts), _compile(f.consequent, env, consts))
    if isinstance(f, (Forall, Exists)):
        tag = "and" if isinstance(f, Forall) else "or"
        return (tag, tuple(_compile(f.body, {**env, **dict(zip(f.vars, cs))}, consts)
                           for cs in product(consts, repeat=len(f.vars))))
    raise TypeError(f"cannot compile {type(f).__name__}")


def _tval(t, sig):
    if type(t) is str:
        return t
    fn, args = t
    vals = []
    unknown = False
    for a in args:
        v = _tval(a, sig)
        if v is None:
            return None
        if v is _U:
            unknown = True
        vals.append(v)
    if unknown:
        return _U
    return sig.get((fn, tuple(vals)), _U)


def _ev(f, atoms, sig):
    """Classical three-valued evaluation: True, False or _U."""
    tag = f[0]
    if tag == "p":
        vals = []
        unknown = False
        for t in f[2]:
            v = _tval(t, sig)
            if v is None:
                return False
            if v is _U:
                unknown = True
            vals.append(v)
        if unknown:
            return _U
        return atoms.get((f[1], tuple(vals)), _U)
    if tag == "eq":
        a = _tval(f[1], sig)
        b = _tval(f[2], sig)
        if a is None or b is None:
            return False
        if a is _U or b is _U:
            return _U
        return a == b
    if tag == "and":
        res = True
        for g in f[1]:
            v = _ev(g, atoms, sig)
            if v is False:
                return False
            if v is _U:
                res = _U
        return res
    if tag == "or":
        res = False
        for g in f[1]:
            v = _ev(g, atoms, sig)
            if v is True:
                return True
            if v is _U:
                res = _U
        return res
    if tag == "imp":
        a = _ev(f[1], atoms, sig)
        if a is False:
            return True
        c = _ev(f[2], atoms, sig)
        if c is True:
            return True
        if a is True:
            return c
        return _U
    return tag == "T"


def _ev_here(f, ha, hs, ta, ts):
    """Three-valued evaluation at here; the there-state is total."""
    tag = f[0]
    if tag in ("p", "eq", "T", "F"):
        return _ev(f, ha, hs)
    if tag == "and":
        res = True
        for g in f[1]:
            v = _ev_here(g, ha, hs, ta, ts)
            if v is False:
                return False
            if v is _U:
                res = _U
        return res
    if tag == "or":
        res = False
        for g in f[1]:
            v = _ev_here(g, ha, hs, ta, ts)
            if v is True:
                return True
            if v is _U:
                res = _U
        return res
    # implication: the there-part is decided, the here-part may be unknown
    if _ev(f, ta, ts) is False:
        return False
    if f[2] == _FALSE:
        return True  # by persistence, not-a at there implies not-a at here
    a = _ev_here(f[1], ha, hs, ta, ts)
    if a is False:
        return True
    c = _ev_here(f[2], ha, hs, ta, ts)
    if c is True:
        return True
    if a is True:
        return c
    return _U


def _reduce_term(t, sig):
    if type(t) is str:
        return t
    fn, args = t
    new = []
    for a in args:
        v = _reduce_term(a, sig)
        if v is None:
            return None
        new.append(v)
    new = tuple(new)
    if all(type(a) is str for a in new):
        v = sig.get((fn, new), _U)
        if v is not _U:
            return v
    return (fn, new)


def _reduce(f, atoms, sig):
    """Partially evaluate with the known values; folds decided subformulas."""
    tag = f[0]
    if tag in ("T", "F"):
        return f
    if tag == "p":
        args = tuple(_reduce_term(t, sig) for t in f[2])
        if None in args:
            return _FALSE
        if all(type(a) is str for a in args):
            v = atoms.get((f[1], args), _U)
            if v is not _U:
                return _TRUE if v else _FALSE
        return ("p", f[1], args)
    if tag == "eq":
        a = _reduce_term(f[1], sig)
        b = _reduce_term(f[2], sig)
        if a is None or b is None:
            return _FALSE
        if type(a) is str and type(b) is str:
            return _TRUE if a == b else _FALSE
        return ("eq", a, b)
    if tag in ("and", "or"):
        stop, skip = (_FALSE, _TRUE) if tag == "and" else (_TRUE, _FALSE)
        items = []
        for g in f[1]:
            r = _reduce(g, atoms, sig)
            if r == stop:
                return stop
            if r != skip and r not in items:
                items.append(r)
        if not items:
            return skip
        return items[0] if len(items) == 1 else (tag, tuple(items))
    a = _reduce(f[1], atoms, sig)
    c = _reduce(f[2], atoms, sig)
    if a == _FALSE or c == _TRUE:
        return _TRUE
    if a == _TRUE:
        return c  # persistence makes (#true -> c) equivalent to c at both worlds
    return ("imp", a, c)


def _positive(f, out, pos=True):
    """Collect atom and entry keys with an occurrence of positive polarity.

    Non-ground keys (when an argument is not yet a constant) are recorded as
    ("*", name), covering every key with that name.
    """
    tag = f[0]
    if tag == "p":
        if pos:
            if all(type(a) is str for a in f[2]):
                out.add(("p", f[1], f[2]))
            else:
                out.add(("p*", f[1]))
            for t in f[2]:
                _term_entries(t, out)
    elif tag == "eq":
        if pos:
            _term_entries(f[1], out)
            _term_entries(f[2], out)
    elif tag in ("and", "or"):
        for g in f[1]:
            _positive(g, out, pos)
    elif tag == "imp":
        if f[2] != _FALSE:  # a negated subformula is evaluated at there only
            _positive(f[1], out, not pos)
            _positive(f[2], out, pos)


def _term_entries(t, out):
    if type(t) is str:
        return
    fn, args = t
    if all(type(a) is str for a in args):
        out.add(("f", fn, args))
    else:
        out.add(("f*", fn))
    for a in args:
        _term_entries(a, out)


def _deps(f, out):
    tag = f[0]
    if tag == "p":
        if all(type(a) is str for a in f[2]):
            out.add(("a", (f[1], f[2])))
        else:
            out.add(("a*", f[1]))
        for t in f[2]:
            _term_deps(t, out)
    elif tag == "eq":
        _term_deps(f[1], out)
        _term_deps(f[2], out)
    elif tag in ("and", "or"):
        for g in f[1]:
            _deps(g, out)
    elif tag == "imp":
        _deps(f[1], out)
        _deps(f[2], out)


def _term_deps(t, out):
    if type(t) is str:
        return
    fn, args = t
    if all(type(a) is str for a in args):
        out.add(("e", (fn, args)))
    else:
        out.add(("e*", fn))
    for a in args:
        _term_deps(a, out)


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise SearchSpaceTooLarge(f"search exceeded {self.limit} nodes")


def _ground_theory(formulas, consts):
    out = []
    for f in formulas:
        if not is_core(f):
            f = expand_formula(f)
        fv = free_vars(f)
        for cs in product(consts, repeat=len(fv)):
            out.append(_compile(f, dict(zip(fv, cs)), consts))
    return out


def _prune(theory, atom_keys, entry_keys):
    """Fix atoms and entries that must be false/undefined in every equilibrium model."""
    atoms, sig = {}, {}
    while True:
        theory = [g for g in (_reduce(f, atoms, sig) for f in theory) if g != _TRUE]
        if _FALSE in theory:
            return [_FALSE], atoms, sig
        pos = set()
        for f in theory:
            _positive(f, pos)
        wild_p = {k[1] for k in pos if k[0] == "p*"}
        wild_f = {k[1] for k in pos if k[0] == "f*"}
        changed = False
        for k in atom_keys:
            if k not in atoms and k[0] not in wild_p and ("p", k[0], k[1]) not in pos:
                atoms[k] = False
                changed = True
        for k in entry_keys:
            if k not in sig and k[0] not in wild_f and ("f", k[0], k[1]) not in pos:
                sig[k] = None
                changed = True
        if not changed:
            return theory, atoms, sig


class _Search:
    def __init__(self, theory, atom_keys, entry_keys, consts, budget):
        self.theory, self.fixed_atoms, self.fixed_sig = _prune(theory, atom_keys, entry_keys)
        self.consts = consts
        self.budget = budget
        self.atom_vars = [k for k in atom_keys if k not in self.fixed_atoms]
        self.entry_vars = [k for k in entry_keys if k not in self.fixed_sig]
        deps = []
        for f in self.theory:
            d = set()
            _deps(f, d)
            deps.append(d)
        self.watch = {}
        for idx, d in enumerate(deps):
            for key in d:
                self.watch.setdefault(key, []).append(idx)
        order = []
        seen = set()
        for d in deps:
            for kind in ("e", "a"):
                for key in sorted(k for k in d if k[0] == kind):
                    if key[1] not in seen and (key[1] in self.entry_vars or key[1] in self.atom_vars):
                        seen.add(key[1])
                        order.append(("e" if kind == "e" else "a", key[1]))
        for k in self.entry_vars:
            if k not in seen:
                order.append(("e", k))
        for k in self.atom_vars:
            if k not in seen:
                order.append(("a", k))
        self.order = order

    def _watched(self, kind, key):
        ids = list(self.watch.get((kind, key), ()))
        ids += self.watch.get((kind + "*", key[0]), ())
        return ids

    def total_models(self):
        if _FALSE in self.theory:
            return
        atoms = dict(self.fixed_atoms)
        sig = dict(self.fixed_sig)
        if any(_ev(f, atoms, sig) is False for f in self.theory):
            return
        yield from self._total(0, atoms, sig)

    def _total(self, depth, atoms, sig):
        if depth == len(self.order):
            yield dict(atoms), dict(sig)
            return
        kind, key = self.order[depth]
        values = (False, True) if kind == "a" else [None] + self.consts
        store = atoms if kind == "a" else sig
        ids = self._watched(kind, key)
        for v in values:
            self.budget.tick()
            store[key] = v
            if all(_ev(self.theory[i], atoms, sig) is not False for i in ids):
                yield from self._total(depth + 1, atoms, sig)
        del store[key]

    def has_smaller(self, ta, ts):
        """Is there a here-state strictly below (ts, ta) forming a model?"""
        ha = {k: v for k, v in ta.items() if v is False}
        hs = {k: v for k, v in ts.items() if v is None}
        if any(_ev_here(f, ha, hs, ta, ts) is False for f in self.theory):
            return False
        order = [(kind, key) for kind, key in self.order
                 if (ta.get(key) if kind == "a" else ts.get(key) is not None)]
        return self._smaller(order, 0, ha, hs, ta, ts, False)

    def _smaller(self, order, depth, ha, hs, ta, ts, lowered):
        if depth == len(order):
            return lowered
        kind, key = order[depth]
        store, top = (ha, True) if kind == "a" else (hs, ts[key])
        low = False if kind == "a" else None
        ids = self._watched(kind, key)
        found = False
        for v, is_low in ((low, True), (top, False)):
            self.budget.tick()
            store[key] = v
            if all(_ev_here(self.theory[i], ha, hs, ta, ts) is not False for i in ids):
                if self._smaller(order, depth + 1, ha, hs, ta, ts, lowered or is_low):
                    found = True
                    break
        del store[key]
        return found


def theory_equilibrium_models(formulas, signature, max_nodes=DEFAULT_MAX_NODES):
    """Equilibrium models of a set of formulas, free variables closed over C0."""
    consts = sorted(signature.constructors)
    formulas = [f if is_core(f) else expand_formula(f) for f in formulas]
    theory = _ground_theory(formulas, consts)
    atom_keys = [(p, args) for p, n in sorted(signature.predicates)
                 for args in product(consts, repeat=n)]
    entry_keys = signature.entries()
    search = _Search(theory, atom_keys, entry_keys, consts, _Budget(max_nodes))
    models = []
    for ta, ts in search.total_models():
        if search.has_smaller(ta, ts):
            continue
        s = State(ts, [k for k, v in ta.items() if v])
        if not is_model(total(s, signature), formulas):
            raise AssertionError(f"search produced a non-model {format_state(s)}")
        models.append(s)
    return sorted(models, key=format_state)


def equilibrium_models(program, max_nodes=DEFAULT_MAX_NODES):
    """Equilibrium models of an FLP program, sorted by their printed form."""
    return theory_equilibrium_models(expand_program(program), program.signature, max_nodes)
