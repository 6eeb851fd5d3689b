"""Formula ASTs, concrete syntax, and the dependency normal form.

The core language has five constructors: truth, negation, conjunction,
knowing-value atoms ``Kv_i(c)`` and inspection boxes ``[c]``.  Disjunction,
implication, the inspection diamond ``<c>`` and the set forms ``Kv_i(C)``,
``Kv_i(C;D)`` are surface sugar and desugar at parse time.  Normal forms
are boolean combinations of dependency atoms ``Kv_i({...};{...})``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable

RESERVED_AGENT = "_"

_CONST_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_AGENT_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class FormulaError(ValueError):
    """Malformed formula, constant or agent identifier."""


class ParseError(FormulaError):
    """Concrete-syntax error; carries the character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def valid_const(name: str) -> bool:
    return bool(_CONST_RE.match(name))


def valid_agent(name: str) -> bool:
    return bool(_AGENT_RE.match(name))


class Formula:
    """Base class for formula nodes; instances are immutable and compare
    structurally."""

    __slots__ = ()

    def __str__(self) -> str:
        return print_formula(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    pass


@dataclass(frozen=True, slots=True)
class Not(Formula):
    sub: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Kv(Formula):
    agent: str
    const: str


@dataclass(frozen=True, slots=True)
class Inspect(Formula):
    const: str
    sub: Formula


@dataclass(frozen=True, slots=True)
class DepAtom(Formula):
    """Dependency atom: after inspecting all of ``lhs``, the agent knows all
    of ``rhs``.  Only permitted inside normal forms."""

    agent: str
    lhs: frozenset[str]
    rhs: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "lhs", frozenset(self.lhs))
        object.__setattr__(self, "rhs", frozenset(self.rhs))


TOP = Top()


# --- sugar builders (used by the parser and by proof templates) ---

def disjunction(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def implication(left: Formula, right: Formula) -> Formula:
    return disjunction(Not(left), right)


def diamond(const: str, sub: Formula) -> Formula:
    return Not(Inspect(const, Not(sub)))


def boxes(consts: Iterable[str], sub: Formula) -> Formula:
    for c in reversed(list(consts)):
        sub = Inspect(c, sub)
    return sub


def conjunction_all(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        return TOP
    return reduce(And, parts)


def kv_group(agent: str, consts: Iterable[str]) -> Formula:
    return conjunction_all(Kv(agent, c) for c in sorted(set(consts)))


def dependency_formula(agent: str, lhs: Iterable[str], rhs: Iterable[str]) -> Formula:
    """Desugars Kv_i(C;D) into [C]Kv_i(D) with sorted enumeration."""
    return boxes(sorted(set(lhs)), kv_group(agent, rhs))


# --- pattern destructors (shared by printer and proof checker) ---

def match_implication(f: Formula):
    if isinstance(f, Not) and isinstance(f.sub, And):
        l, r = f.sub.left, f.sub.right
        if isinstance(l, Not) and isinstance(l.sub, Not) and isinstance(r, Not):
            return l.sub.sub, r.sub
    return None


def match_disjunction(f: Formula):
    if isinstance(f, Not) and isinstance(f.sub, And):
        l, r = f.sub.left, f.sub.right
        if isinstance(l, Not) and isinstance(r, Not):
            return l.sub, r.sub
    return None


def match_diamond(f: Formula):
    if isinstance(f, Not) and isinstance(f.sub, Inspect) and isinstance(f.sub.sub, Not):
        return f.sub.const, f.sub.sub.sub
    return None


# --- tokenizer / parser ---

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<arrow>->)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<punct>[~&|()\[\]<>;,{}])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, mode, text):
        self.tokens = tokens
        self.mode = mode
        self.text = text
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _pos(self):
        tok = self._peek()
        return tok[2] if tok else len(self.text)

    def _next(self):
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        self.i += 1
        return tok

    def _expect(self, value):
        tok = self._next()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1]!r}", tok[2])
        return tok

    def expect_end(self):
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])

    def parse_implication(self) -> Formula:
        left = self.parse_disjunction()
        tok = self._peek()
        if tok and tok[0] == "arrow":
            self._next()
            return implication(left, self.parse_implication())
        return left

    def parse_disjunction(self) -> Formula:
        f = self.parse_conjunction()
        while True:
            tok = self._peek()
            if tok and tok[1] == "|":
                self._next()
                f = disjunction(f, self.parse_conjunction())
            else:
                return f

    def parse_conjunction(self) -> Formula:
        f = self.parse_prefix()
        while True:
            tok = self._peek()
            if tok and tok[1] == "&":
                self._next()
                f = And(f, self.parse_prefix())
            else:
                return f

    def parse_prefix(self) -> Formula:
        tok = self._peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text))
        if tok[1] == "~":
            self._next()
            return Not(self.parse_prefix())
        if tok[1] == "[":
            self._next()
            consts = self._const_list_until("]")
            if not consts:
                raise ParseError("empty constant list in '[...]' prefix", tok[2])
            sub = self.parse_prefix()
            if len(consts) == 1:
                return Inspect(consts[0], sub)
            return boxes(sorted(set(consts)), sub)
        if tok[1] == "<":
            self._next()
            c = self._const()
            self._expect(">")
            return diamond(c, self.parse_prefix())
        return self.parse_atom()

    def parse_atom(self) -> Formula:
        tok = self._next()
        if tok[1] == "(":
            f = self.parse_implication()
            self._expect(")")
            return f
        if tok[0] == "ident":
            if tok[1] == "T":
                return TOP
            if tok[1] == "Kv" or tok[1].startswith("Kv_"):
                return self._kv_form(tok)
        raise ParseError(f"expected formula, found {tok[1]!r}", tok[2])

    def _kv_form(self, tok) -> Formula:
        if tok[1] == "Kv":
            if self.mode == "multi":
                raise ParseError("agent subscript required in multi mode", tok[2])
            agent = RESERVED_AGENT
        else:
            agent = tok[1][3:]
            if not agent:
                raise ParseError("missing agent after 'Kv_'", tok[2])
            if self.mode == "single":
                raise ParseError("agent subscript not allowed in single mode", tok[2])
            if agent == RESERVED_AGENT:
                raise ParseError(f"agent id {RESERVED_AGENT!r} is reserved", tok[2])
        self._expect("(")
        lhs, lhs_braced = self._const_group()
        rhs = None
        rhs_braced = False
        nxt = self._peek()
        if nxt and nxt[1] == ";":
            self._next()
            rhs, rhs_braced = self._const_group()
        self._expect(")")
        if not lhs and not lhs_braced:
            raise ParseError("empty constant list in 'Kv(...)'", tok[2])
        if rhs is None:
            return kv_group(agent, lhs)
        if not rhs and not rhs_braced:
            raise ParseError("empty constant list after ';' in 'Kv(...)'", tok[2])
        return dependency_formula(agent, lhs, rhs)

    def _const_group(self):
        """One constant group: 'c,d' or braces form '{c,d}' / '{}'."""
        tok = self._peek()
        if tok and tok[1] == "{":
            self._next()
            consts = self._const_list_until("}")
            return consts, True
        consts = []
        while True:
            nxt = self._peek()
            if consts and not (nxt and nxt[1] == ","):
                return consts, False
            if consts:
                self._next()
            elif nxt is None or nxt[0] != "ident":
                return consts, False
            consts.append(self._const())

    def _const_list_until(self, closer):
        consts = []
        tok = self._peek()
        if tok and tok[1] == closer:
            self._next()
            return consts
        while True:
            consts.append(self._const())
            tok = self._next()
            if tok[1] == closer:
                return consts
            if tok[1] != ",":
                raise ParseError(f"expected ',' or {closer!r}, found {tok[1]!r}", tok[2])

    def _const(self) -> str:
        tok = self._next()
        if tok[0] != "ident" or not valid_const(tok[1]):
            raise ParseError(f"expected constant name, found {tok[1]!r}", tok[2])
        return tok[1]


def parse_formula(text: str, mode: str = "single") -> Formula:
    """Parse concrete syntax into a desugared core formula.

    In single mode ``Kv(c)`` binds the reserved agent; in multi mode the
    subscripted forms ``Kv_i(c)`` are required.
    """
    if mode not in ("single", "multi"):
        raise ValueError(f"unknown mode {mode!r}")
    p = _Parser(_tokenize(text), mode, text)
    f = p.parse_implication()
    p.expect_end()
    return f


# --- printer ---

_LVL_IMPL, _LVL_OR, _LVL_AND, _LVL_PREFIX, _LVL_ATOM = 0, 1, 2, 3, 4


def _braced(consts: frozenset[str]) -> str:
    return "{" + ",".join(sorted(consts)) + "}"


def _print(f: Formula, min_level: int) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Kv):
        name = "Kv" if f.agent == RESERVED_AGENT else f"Kv_{f.agent}"
        return f"{name}({f.const})"
    if isinstance(f, DepAtom):
        name = "Kv" if f.agent == RESERVED_AGENT else f"Kv_{f.agent}"
        return f"{name}({_braced(f.lhs)};{_braced(f.rhs)})"
    if isinstance(f, And):
        s = f"{_print(f.left, _LVL_AND)} & {_print(f.right, _LVL_AND + 1)}"
        return f"({s})" if min_level > _LVL_AND else s
    if isinstance(f, Inspect):
        return f"[{f.const}]{_print(f.sub, _LVL_PREFIX)}"
    # Not-headed: prefer sugar that reparses to the identical AST.
    m = match_implication(f)
    if m is not None:
        s = f"{_print(m[0], _LVL_OR)} -> {_print(m[1], _LVL_IMPL)}"
        return f"({s})" if min_level > _LVL_IMPL else s
    m = match_disjunction(f)
    if m is not None:
        s = f"{_print(m[0], _LVL_OR)} | {_print(m[1], _LVL_OR + 1)}"
        return f"({s})" if min_level > _LVL_OR else s
    m = match_diamond(f)
    if m is not None:
        return f"<{m[0]}>{_print(m[1], _LVL_PREFIX)}"
    return f"~{_print(f.sub, _LVL_PREFIX)}"


def print_formula(f: Formula) -> str:
    """Canonical text; ``parse_formula(print_formula(f))`` gives back ``f``."""
    return _print(f, _LVL_IMPL)


# --- analysis / translation ---

_CORE_TYPES = (Top, Not, And, Kv, Inspect)


def is_desugared(f: Formula) -> bool:
    """True if only the five core constructors occur."""
    if isinstance(f, Not):
        return is_desugared(f.sub)
    if isinstance(f, And):
        return is_desugared(f.left) and is_desugared(f.right)
    if isinstance(f, Inspect):
        return is_desugared(f.sub)
    return isinstance(f, _CORE_TYPES)


def is_normal(f: Formula) -> bool:
    """True for boolean combinations of Top and dependency atoms."""
    if isinstance(f, Not):
        return is_normal(f.sub)
    if isinstance(f, And):
        return is_normal(f.left) and is_normal(f.right)
    return isinstance(f, (Top, DepAtom))


def agents_of(f: Formula) -> frozenset[str]:
    """Exactly the agents occurring in Kv constructors / dependency atoms."""
    out: set[str] = set()

    def walk(g: Formula):
        if isinstance(g, (Kv, DepAtom)):
            out.add(g.agent)
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, And):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Inspect):
            walk(g.sub)

    walk(f)
    return frozenset(out)


def signature_of(f: Formula) -> frozenset[str]:
    """All constants occurring in Kv, inspection or dependency positions."""
    out: set[str] = set()

    def walk(g: Formula):
        if isinstance(g, Kv):
            out.add(g.const)
        elif isinstance(g, DepAtom):
            out.update(g.lhs)
            out.update(g.rhs)
        elif isinstance(g, Not):
            walk(g.sub)
        elif isinstance(g, And):
            walk(g.left)
            walk(g.right)
        elif isinstance(g, Inspect):
            out.add(g.const)
            walk(g.sub)

    walk(f)
    return frozenset(out)


def formula_depth(f: Formula) -> int:
    if isinstance(f, Not):
        return 1 + formula_depth(f.sub)
    if isinstance(f, And):
        return 1 + max(formula_depth(f.left), formula_depth(f.right))
    if isinstance(f, Inspect):
        return 1 + formula_depth(f.sub)
    return 0


def translate(f: Formula) -> Formula:
    """Truth-preserving translation into the dependency normal form.

    Boxes are pushed through negations and conjunctions and absorbed into
    dependency atoms; ``[C]T`` collapses to ``T``.
    """
    return _translate(f, frozenset())


def _translate(f: Formula, acc: frozenset[str]) -> Formula:
    if isinstance(f, Top):
        return TOP
    if isinstance(f, Not):
        return Not(_translate(f.sub, acc))
    if isinstance(f, And):
        return And(_translate(f.left, acc), _translate(f.right, acc))
    if isinstance(f, Kv):
        return DepAtom(f.agent, acc, frozenset((f.const,)))
    if isinstance(f, Inspect):
        return _translate(f.sub, acc | {f.const})
    if isinstance(f, DepAtom):
        return DepAtom(f.agent, f.lhs | acc, f.rhs)
    raise FormulaError(f"cannot translate {f!r}")


def all_formulas(consts, agents, max_depth: int) -> list[Formula]:
    """Exhaustive pool of core formulas up to the given nesting depth.

    Deterministic order; used by validity sweeps and as a sampling pool.
    """
    consts = list(consts)
    agents = list(agents)
    pool: dict[Formula, None] = dict.fromkeys(
        [TOP] + [Kv(i, c) for i in agents for c in consts]
    )
    for _ in range(max_depth):
        fresh: dict[Formula, None] = {}
        items = list(pool)
        for f in items:
            fresh.setdefault(Not(f), None)
            for c in consts:
                fresh.setdefault(Inspect(c, f), None)
        for f in items:
            for g in items:
                fresh.setdefault(And(f, g), None)
        pool.update(fresh)
    return list(pool)
