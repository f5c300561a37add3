"""Surface syntax for FLP programs, FASP programs and emitted LP programs.

FLP grammar::

    program   := (directive | rule)*
    directive := "#evaluable" NAME ("," NAME)* "."
    rule      := head (":-" body)? "." | ":-" body "."
    head      := predatom | term ":=" term
               | term "in" "{" VAR "|" body "}" | term "in" "{" term ("," term)* "}"
    body      := literal ("," literal)*
    literal   := ("not")? atom
    atom      := predatom | term "=" term | term "!=" term | term "#" term

Identifiers starting with an uppercase letter are variables; everything
else (including numerals) names constants, functions or predicates. A
symbol applied to arguments in term position is an evaluable function; a
bare name is a constant unless declared with ``#evaluable``. ``%`` starts
a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .ast import (
    BOT, FRESH_VAR_PREFIX, RESERVED_PREFIXES, App, Apart, Assign, Bot, Choice,
    ChoiceEnum, Const, Eq, FLPProgram, FLPRule, Literal, LPProgram, LPRule, Pred,
    Signature, SignatureError, Span, Var, format_rule, rule_vars, substitute,
)


@dataclass(frozen=True)
class Diagnostic:
    file: str
    line: int
    col: int
    severity: str
    message: str

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}: {self.severity}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass
class SourceProgram:
    kind: str  # "FLP" or "FASP"
    rules: tuple
    directives: tuple = ()
    provenance: tuple = ()
    signature: Optional[Signature] = None
    fasp: object = None  # faspc.FASPProgram for FASP sources
    file: str = "<input>"

    @property
    def program(self) -> FLPProgram:
        if self.kind == "FASP":
            from .faspc import embed

            return embed(self.fasp)
        return FLPProgram(self.signature, self.rules)


# ---------------------------------------------------------------- lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<directive>\#[a-z]+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<name>[a-z0-9][A-Za-z0-9_]*)
  | (?P<sym>:-|:=|!=|->|=|\#|\(|\)|\{|\}|,|\||\.|:)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # var, name, sym, directive, eof
    text: str
    line: int
    col: int


def tokenize(text, file="<input>"):
    tokens = []
    line, line_start, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            ch = text[i]
            what = "non-ASCII character" if ord(ch) > 127 else "unexpected character"
            raise ParseError([Diagnostic(file, line, i - line_start + 1, "error", f"{what} {ch!r}")])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, i - line_start + 1))
        i = m.end()
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


class _Syntax(Exception):
    def __init__(self, token, message):
        self.token = token
        self.message = message


# Raw terms before symbol resolution: ("var", name, tok) | ("fn", name, args, tok)


class _Reader:
    def __init__(self, tokens, file):
        self.toks = tokens
        self.i = 0
        self.file = file

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text, kind=None):
        t = self.tok
        return t.text == text and (kind is None or t.kind == kind) and t.kind != "eof"

    def take(self):
        t = self.tok
        self.i += 1
        return t

    def expect(self, text, what=None):
        if not self.at(text):
            raise _Syntax(self.tok, f"expected {what or repr(text)}, found {_describe(self.tok)}")
        return self.take()

    def expect_kind(self, kind, what):
        if self.tok.kind != kind:
            raise _Syntax(self.tok, f"expected {what}, found {_describe(self.tok)}")
        return self.take()

    def skip_rule(self):
        while self.tok.kind != "eof" and not self.at("."):
            self.i += 1
        if self.at("."):
            self.i += 1

    def raw_term(self):
        t = self.tok
        if t.kind == "var":
            self.take()
            return ("var", t.text, t)
        if t.kind == "name" and t.text not in ("not", "in"):
            self.take()
            args = []
            if self.at("("):
                self.take()
                args.append(self.raw_term())
                while self.at(","):
                    self.take()
                    args.append(self.raw_term())
                self.expect(")", "',' or ')'")
            return ("fn", t.text, tuple(args), t)
        raise _Syntax(t, f"expected a term, found {_describe(t)}")

    def raw_literal(self):
        negated = False
        start = self.tok
        if self.at("not", "name"):
            self.take()
            negated = True
        lhs = self.raw_term()
        if self.tok.kind == "sym" and self.tok.text in ("=", "!=", "#"):
            op = self.take().text
            rhs = self.raw_term()
            if op == "!=":
                if negated:
                    raise _Syntax(start, "'not' cannot be applied to '!='")
                return ("=", lhs, rhs, True, start)
            return (op, lhs, rhs, negated, start)
        if lhs[0] == "var":
            raise _Syntax(lhs[2], "a variable cannot be used as an atom")
        return ("pred", lhs, None, negated, start)

    def raw_body(self):
        lits = [self.raw_literal()]
        while self.at(","):
            self.take()
            lits.append(self.raw_literal())
        return lits


def _describe(tok):
    return "end of input" if tok.kind == "eof" else repr(tok.text)


# ---------------------------------------------------------------- FLP


class _Resolver:
    """Turns raw terms into AST nodes and records symbol usage."""

    def __init__(self, file, evaluables0, allow_reserved=False, require_lp=False):
        self.file = file
        self.ev0 = set(evaluables0)
        self.allow_reserved = allow_reserved
        self.require_lp = require_lp
        self.diags = []
        self.constants = {}
        self.evaluables = {}
        self.predicates = {}

    def error(self, tok, msg):
        self.diags.append(Diagnostic(self.file, tok.line, tok.col, "error", msg))

    def _check_name(self, name, tok):
        if not self.allow_reserved and name.startswith(RESERVED_PREFIXES):
            self.error(tok, f"name {name!r} uses a reserved prefix")

    def term(self, raw):
        if raw[0] == "var":
            name, tok = raw[1], raw[2]
            if not self.allow_reserved and name.startswith(FRESH_VAR_PREFIX):
                self.error(tok, f"variable {name!r} uses the reserved prefix {FRESH_VAR_PREFIX!r}")
            return Var(name)
        _, name, args, tok = raw
        self._check_name(name, tok)
        if args or name in self.ev0:
            if self.require_lp:
                self.error(tok, f"evaluable function {name}/{len(args)} is not allowed in an LP program")
            self.evaluables.setdefault((name, len(args)), tok)
            return App(name, tuple(self.term(a) for a in args))
        self.constants.setdefault(name, tok)
        return Const(name)

    def pred(self, raw):
        if raw[0] == "var":
            self.error(raw[2], "a variable cannot be used as an atom")
            return Pred("_", ())
        _, name, args, tok = raw
        self._check_name(name, tok)
        self.predicates.setdefault((name, len(args)), tok)
        return Pred(name, tuple(self.term(a) for a in args))

    def literal(self, raw):
        op, lhs, rhs, negated, _ = raw
        if op == "pred":
            return Literal(self.pred(lhs), negated)
        atom = (Eq if op == "=" else Apart)(self.term(lhs), self.term(rhs))
        return Literal(atom, negated)

    def target(self, raw, what):
        t = self.term(raw)
        if not isinstance(t, App):
            tok = raw[2] if raw[0] == "var" else raw[3]
            self.error(tok, f"the head function of {what} must be evaluable"
                            f" (declare 0-ary symbols with #evaluable)")
        return t

    def signature_checks(self):
        """Report symbols used in two roles; returns the signature or None."""
        seen = {}
        for table, role in ((self.constants, "constant"), (self.evaluables, "evaluable function"),
                            (self.predicates, "predicate")):
            for key, tok in table.items():
                key = (key, 0) if isinstance(key, str) else key
                if key in seen and seen[key] != role:
                    self.error(tok, f"{key[0]}/{key[1]} used both as {seen[key]} and as {role}")
                seen.setdefault(key, role)
        for name in self.ev0:
            self.evaluables.setdefault((name, 0), None)
        if self.diags:
            return None
        try:
            return Signature(frozenset(self.constants), frozenset(self.evaluables),
                             frozenset(self.predicates))
        except SignatureError as e:
            self.diags.append(Diagnostic(self.file, 1, 1, "error", str(e)))
            return None


def _fresh_choice_var(name, taken):
    k = 1
    while f"{name}{k}" in taken:
        k += 1
    return f"{name}{k}"


def _capture_free(head, body):
    """Rename the choice variable if it also occurs outside its condition."""
    if not isinstance(head, Choice):
        return head
    outside = set(rule_vars(FLPRule(Pred("_", (head.target,)), body)))
    if head.var not in outside:
        return head
    taken = outside | set(rule_vars(FLPRule(head, body)))
    new = _fresh_choice_var(head.var, taken)
    cond = substitute(head.condition, {head.var: Var(new)})
    return Choice(head.target, new, cond)


def _scan_directives(tokens, file, diags):
    ev0 = []
    for i, t in enumerate(tokens):
        if t.kind == "directive" and t.text == "#evaluable":
            j = i + 1
            while tokens[j].kind == "name":
                ev0.append(tokens[j].text)
                if tokens[j + 1].text == ",":
                    j += 2
                else:
                    break
    return ev0


def parse_flp(text, file="<input>", *, allow_reserved=False) -> SourceProgram:
    """Parse FLP text. Raises ParseError with every diagnostic found."""
    tokens = tokenize(text, file)
    diags = []
    ev0 = _scan_directives(tokens, file, diags)
    res = _Resolver(file, ev0, allow_reserved=allow_reserved)
    rd = _Reader(tokens, file)
    rules, spans, directives = [], [], []
    while rd.tok.kind != "eof":
        start = rd.tok
        try:
            if start.kind == "directive":
                directives.append(_flp_directive(rd))
                continue
            rule = _flp_rule(rd, res)
            if rule is not None:
                span = Span(file, start.line, start.col)
                rules.append(FLPRule(rule.head, rule.body, span))
                spans.append(span)
        except _Syntax as e:
            diags.append(Diagnostic(file, e.token.line, e.token.col, "error", e.message))
            rd.skip_rule()
    sig = res.signature_checks() if not diags else None
    diags.extend(res.diags)
    if diags:
        raise ParseError(sorted(set(diags), key=lambda d: (d.line, d.col, d.message)))
    return SourceProgram("FLP", tuple(rules), tuple(directives), tuple(spans), sig, None, file)


def _flp_directive(rd):
    tok = rd.take()
    if tok.text != "#evaluable":
        raise _Syntax(tok, f"unknown directive {tok.text}")
    names = [rd.expect_kind("name", "a function name").text]
    while rd.at(","):
        rd.take()
        names.append(rd.expect_kind("name", "a function name").text)
    rd.expect(".", "'.'")
    return ("evaluable", tuple(names))


def _flp_rule(rd, res):
    if rd.at(":-"):
        rd.take()
        body = rd.raw_body()
        rd.expect(".", "',' or '.'")
        return FLPRule(BOT, tuple(res.literal(b) for b in body))
    raw = rd.raw_term()
    head = None
    if rd.at(":="):
        rd.take()
        value = rd.raw_term()
        head = ("assign", raw, value)
    elif rd.at("in", "name"):
        rd.take()
        rd.expect("{", "'{'")
        if rd.tok.kind == "var" and rd.peek().text == "|":
            var = rd.take().text
            rd.take()
            cond = rd.raw_body()
            rd.expect("}", "',' or '}'")
            head = ("choice", raw, var, cond)
        else:
            vals = [rd.raw_term()]
            while rd.at(","):
                rd.take()
                vals.append(rd.raw_term())
            rd.expect("}", "',' or '}'")
            head = ("enum", raw, vals)
    else:
        if rd.tok.kind == "sym" and rd.tok.text in ("=", "!=", "#"):
            raise _Syntax(rd.tok, "equality heads are not FLP syntax; use ':=' for assignments")
        head = ("pred", raw)
    body = []
    if rd.at(":-"):
        rd.take()
        body = rd.raw_body()
    rd.expect(".", "',' or '.'" if body else "':-' or '.'")
    lits = tuple(res.literal(b) for b in body)
    kind = head[0]
    if kind == "pred":
        h = res.pred(head[1])
    elif kind == "assign":
        h = Assign(res.target(head[1], "an assignment"), res.term(head[2]))
    elif kind == "choice":
        h = Choice(res.target(head[1], "a choice"), head[2], tuple(res.literal(c) for c in head[3]))
    else:
        h = ChoiceEnum(res.target(head[1], "a choice"), tuple(res.term(v) for v in head[2]))
    return FLPRule(_capture_free(h, lits), lits)


def parse_lp(text, file="<input>") -> LPProgram:
    """Parse function-free LP text, as emitted by the translator."""
    tokens = tokenize(text, file)
    res = _Resolver(file, (), allow_reserved=True, require_lp=True)
    rd = _Reader(tokens, file)
    rules, diags = [], []
    while rd.tok.kind != "eof":
        try:
            if rd.tok.kind == "directive":
                raise _Syntax(rd.tok, "directives are not allowed in LP programs")
            r = _flp_rule(rd, res)
            if not isinstance(r.head, (Pred, Bot)):
                raise _Syntax(rd.toks[rd.i - 1], "LP rule heads must be atoms")
            for lit in r.body:
                if isinstance(lit.atom, Apart):
                    raise _Syntax(rd.toks[rd.i - 1], "'#' is not allowed in LP programs")
            rules.append(r)
        except _Syntax as e:
            diags.append(Diagnostic(file, e.token.line, e.token.col, "error", e.message))
            rd.skip_rule()
    diags.extend(res.diags)
    if diags:
        raise ParseError(diags)
    lp = [LPRule(None if isinstance(r.head, Bot) else r.head, r.body) for r in rules]
    return LPProgram(tuple(lp), frozenset(res.constants))


def format_program(src) -> str:
    """Pretty-print an FLP SourceProgram or FLPProgram."""
    rules = src.rules
    sig = src.signature
    out = []
    used = set()

    def collect(x):
        if isinstance(x, App):
            if not x.args:
                used.add(x.fn)
            for a in x.args:
                collect(a)
        elif isinstance(x, (tuple, list)):
            for i in x:
                collect(i)
        elif hasattr(x, "__dataclass_fields__"):
            for f in x.__dataclass_fields__:
                collect(getattr(x, f))

    collect(rules)
    declared = sorted({n for n, a in sig.evaluables if a == 0} | used) if sig else sorted(used)
    for name in declared:
        out.append(f"#evaluable {name}.")
    out.extend(format_rule(r) for r in rules)
    return "".join(line + "\n" for line in out)


# ---------------------------------------------------------------- FASP


def parse_fasp(text, file="<input>") -> SourceProgram:
    """Parse and type-check a many-sorted FASP program.

    Directives::

        #type NAME = {c1, ..., cn}.
        #pred NAME(type, ...).
        #func NAME(type, ...) -> type.
        #var X, Y : type.

    Rules have a predicate atom or an empty head and a body of (negated)
    predicate and equality atoms.
    """
    from .faspc import FASPProgram

    tokens = tokenize(text, file)
    rd = _Reader(tokens, file)
    diags = []
    types, preds, funcs, vars_, raw_rules, directives = {}, {}, {}, {}, [], []

    def err(tok, msg):
        diags.append(Diagnostic(file, tok.line, tok.col, "error", msg))

    while rd.tok.kind != "eof":
        start = rd.tok
        try:
            if start.kind == "directive":
                d = _fasp_directive(rd, err)
                directives.append(d)
                kind, name = d[0], d[1]
                table = {"type": types, "pred": preds, "func": funcs}.get(kind)
                if kind == "var":
                    for v in d[1]:
                        if v in vars_:
                            err(start, f"variable {v} declared twice")
                        vars_[v] = (d[2], start)
                elif name in table:
                    err(start, f"{kind} {name} declared twice")
                else:
                    table[name] = (d[2:], start)
                continue
            if rd.at(":-"):
                rd.take()
                body = rd.raw_body()
                rd.expect(".", "',' or '.'")
                raw_rules.append((None, body, start))
                continue
            raw = rd.raw_term()
            if rd.at(":=") or rd.at("in", "name"):
                raise _Syntax(rd.tok, "choice and assignment heads are not FASP syntax")
            if rd.tok.kind == "sym" and rd.tok.text in ("=", "!=", "#"):
                raise _Syntax(rd.tok, "FASP rule heads must be predicate atoms")
            body = []
            if rd.at(":-"):
                rd.take()
                body = rd.raw_body()
            rd.expect(".", "',' or '.'")
            raw_rules.append((raw, body, start))
        except _Syntax as e:
            err(e.token, e.message)
            rd.skip_rule()
    if diags:
        raise ParseError(diags)

    checker = _FaspChecker(file, types, preds, funcs, vars_)
    rules, spans = [], []
    for head, body, start in raw_rules:
        span = Span(file, start.line, start.col)
        h = BOT if head is None else checker.pred(head)
        lits = tuple(checker.literal(b) for b in body)
        rules.append(FLPRule(h, lits, span))
        spans.append(span)
    checker.finish()
    if checker.diags:
        raise ParseError(checker.diags)
    prog = FASPProgram(
        types={k: v[0][0] for k, v in types.items()},
        preds={k: v[0][0] for k, v in preds.items()},
        funcs={k: (v[0][0], v[0][1]) for k, v in funcs.items()},
        vars={k: v[0] for k, v in vars_.items()},
        rules=tuple(rules),
    )
    return SourceProgram("FASP", tuple(rules), tuple(directives), tuple(spans), None, prog, file)


def _fasp_directive(rd, err):
    tok = rd.take()
    kind = tok.text[1:]
    if kind == "type":
        name = rd.expect_kind("name", "a type name")
        if name.text == "bool":
            err(name, "type name 'bool' is reserved")
        rd.expect("=", "'='")
        rd.expect("{", "'{'")
        elems = []
        if not rd.at("}"):
            elems.append(rd.expect_kind("name", "a constant").text)
            while rd.at(","):
                rd.take()
                elems.append(rd.expect_kind("name", "a constant").text)
        rd.expect("}", "',' or '}'")
        rd.expect(".", "'.'")
        if not elems:
            err(name, f"type {name.text} has an empty extension")
        return ("type", name.text, tuple(dict.fromkeys(elems)))
    if kind in ("pred", "func"):
        name = rd.expect_kind("name", f"a {kind} name")
        dom = []
        if rd.at("("):
            rd.take()
            if not rd.at(")"):
                dom.append(rd.expect_kind("name", "a type name").text)
                while rd.at(","):
                    rd.take()
                    dom.append(rd.expect_kind("name", "a type name").text)
            rd.expect(")", "',' or ')'")
        if kind == "pred":
            rd.expect(".", "'.'")
            return ("pred", name.text, tuple(dom))
        rd.expect("->", "'->'")
        rng = rd.expect_kind("name", "a type name").text
        rd.expect(".", "'.'")
        if not dom:
            err(name, f"0-ary evaluable function {name.text} is not allowed in FASP")
        return ("func", name.text, tuple(dom), rng)
    if kind == "var":
        names = [rd.expect_kind("var", "a variable").text]
        while rd.at(","):
            rd.take()
            names.append(rd.expect_kind("var", "a variable").text)
        rd.expect(":", "':'")
        ty = rd.expect_kind("name", "a type name").text
        rd.expect(".", "'.'")
        return ("var", tuple(names), ty)
    raise _Syntax(tok, f"unknown directive {tok.text}")


class _FaspChecker:
    def __init__(self, file, types, preds, funcs, vars_):
        self.file = file
        self.types, self.preds, self.funcs, self.vars = types, preds, funcs, vars_
        self.diags = []
        self.members = {}
        for t, ((elems,), _) in types.items():
            for c in elems:
                self.members.setdefault(c, set()).add(t)
        for table, what in ((preds, "predicate"), (funcs, "function")):
            for name, (decl, tok) in table.items():
                for ty in decl[0] + decl[1:]:
                    if ty not in types:
                        self.error(tok, f"undeclared type {ty} in {what} {name}")
        for v, (ty, tok) in vars_.items():
            if ty not in types:
                self.error(tok, f"undeclared type {ty} for variable {v}")
        for t, (_, tok) in types.items():
            if t in preds or t in funcs:
                self.error(tok, f"type name {t} clashes with a declared symbol")

    def error(self, tok, msg):
        self.diags.append(Diagnostic(self.file, tok.line, tok.col, "error", msg))

    def finish(self):
        self.diags.sort(key=lambda d: (d.line, d.col))

    def term(self, raw):
        """Returns (term, set of possible types)."""
        if raw[0] == "var":
            name, tok = raw[1], raw[2]
            if name not in self.vars:
                self.error(tok, f"undeclared variable {name}")
                return Var(name), set()
            return Var(name), {self.vars[name][0]}
        _, name, args, tok = raw
        if name in self.funcs:
            (dom, rng), _ = self.funcs[name]
            if len(args) != len(dom):
                self.error(tok, f"function {name} expects {len(dom)} arguments, got {len(args)}")
                return App(name, ()), set()
            targs = tuple(self._typed(a, ty, f"argument {i + 1} of {name}")
                          for i, (a, ty) in enumerate(zip(args, dom)))
            return App(name, targs), {rng}
        if args:
            self.error(tok, f"undeclared function {name}/{len(args)}")
            return App(name, ()), set()
        if name not in self.members:
            self.error(tok, f"undeclared symbol {name}")
            return Const(name), set()
        return Const(name), set(self.members[name])

    def _typed(self, raw, ty, what):
        t, tys = self.term(raw)
        if tys and ty not in tys:
            tok = raw[2] if raw[0] == "var" else raw[3]
            self.error(tok, f"type mismatch: {what} must be of type {ty}")
        return t

    def pred(self, raw):
        if raw[0] == "var":
            self.error(raw[2], "a variable cannot be used as an atom")
            return Pred("_", ())
        _, name, args, tok = raw
        if name not in self.preds:
            self.error(tok, f"undeclared predicate {name}/{len(args)}")
            return Pred(name, ())
        (dom,), _ = self.preds[name]
        if len(args) != len(dom):
            self.error(tok, f"predicate {name} expects {len(dom)} arguments, got {len(args)}")
            return Pred(name, ())
        return Pred(name, tuple(self._typed(a, ty, f"argument {i + 1} of {name}")
                                for i, (a, ty) in enumerate(zip(args, dom))))

    def literal(self, raw):
        op, lhs, rhs, negated, start = raw
        if op == "pred":
            return Literal(self.pred(lhs), negated)
        if op == "#":
            self.error(start, "apartness '#' is not FASP syntax")
            return Literal(Eq(Const("_"), Const("_")), negated)
        l, lt = self.term(lhs)
        r, rt = self.term(rhs)
        if lt and rt and not (lt & rt):
            self.error(start, "type mismatch: operands of '=' have no common type")
        return Literal(Eq(l, r), negated)


def format_fasp(prog) -> str:
    out = []
    for t, elems in prog.types.items():
        out.append(f"#type {t} = {{{', '.join(elems)}}}.")
    for p, dom in prog.preds.items():
        out.append(f"#pred {p}({', '.join(dom)})." if dom else f"#pred {p}.")
    for f, (dom, rng) in prog.funcs.items():
        out.append(f"#func {f}({', '.join(dom)}) -> {rng}.")
    for v, ty in prog.vars.items():
        out.append(f"#var {v} : {ty}.")
    out.extend(format_rule(r) for r in prog.rules)
    return "".join(line + "\n" for line in out)


def load(path) -> SourceProgram:
    """Read a .flp or .fasp file ("-" reads FLP from standard input)."""
    import sys

    if path == "-":
        return parse_flp(sys.stdin.read(), "<stdin>")
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".fasp"):
        return parse_fasp(text, str(path))
    return parse_flp(text, str(path))
