"""Propositional formulas over a declared finite alphabet.

Formulas are immutable trees (in practice DAGs: the symbolic engine shares
subformulas heavily, so every traversal here is iterative and memoised on
node identity).  Model sets are represented as truth-table bitmasks: model
number ``m`` assigns ``names[k]`` to true iff bit ``k`` of ``m`` is set.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

DEFAULT_ORACLE_CAP = 20

RESERVED = frozenset({"T", "F"})
_REF = re.compile(r"\$[A-Za-z0-9_]+\Z")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class UndeclaredVariableError(FormulaError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" at position {position}"
        super().__init__(f"undeclared variable {name!r}{where}")


class CapExceededError(FormulaError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(
            f"alphabet has {size} variables, oracle cap is {cap}"
        )


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __init__(self, names: Iterable[str] = ()):
        names = tuple(names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise FormulaError(f"invalid variable name {name!r}")
            if name in RESERVED:
                raise FormulaError(f"{name!r} is reserved for a constant")
            if name in seen:
                raise FormulaError(f"duplicate variable {name!r}")
            seen.add(name)
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UndeclaredVariableError(name) from None

    @property
    def num_models(self) -> int:
        return 1 << len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << self.num_models) - 1

    def check_cap(self, cap: int = DEFAULT_ORACLE_CAP) -> None:
        if len(self.names) > cap:
            raise CapExceededError(len(self.names), cap)

    def __str__(self) -> str:
        return " ".join(self.names)


# -- formula nodes -----------------------------------------------------------


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __and__(self, other: "Formula") -> "Formula":
        return conj(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return disj(self, other)

    def __invert__(self) -> "Formula":
        return negate(self)

    def __str__(self) -> str:
        return render(self)


def _cached_hash(obj, *parts) -> None:
    object.__setattr__(obj, "_hash", hash((type(obj).__name__,) + parts))


@dataclass(frozen=True, eq=True)
class Var(Formula):
    name: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.name)

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, eq=True)
class Const(Formula):
    value: bool
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, self.value)

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, hash(self.arg))

    def __hash__(self) -> int:
        return self._hash

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class And(Formula):
    args: tuple[Formula, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _cached_hash(self, *map(hash, self.args))

    def __hash__(self) -> int:
        return self._hash

    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class Or(Formula):
    args: tuple[Formula, ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        _cached_hash(self, *map(hash, self.args))

    def __hash__(self) -> int:
        return self._hash

    def children(self):
        return self.args


@dataclass(frozen=True, eq=True)
class Implies(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, hash(self.left), hash(self.right))

    def __hash__(self) -> int:
        return self._hash

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Iff(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _cached_hash(self, hash(self.left), hash(self.right))

    def __hash__(self) -> int:
        return self._hash

    def children(self):
        return (self.left, self.right)


TOP = Const(True)
BOTTOM = Const(False)


def negate(f: Formula) -> Formula:
    """Negation that strips a double negation instead of stacking one."""
    if isinstance(f, Not):
        return f.arg
    if isinstance(f, Const):
        return BOTTOM if f.value else TOP
    return Not(f)


def _nary(cls, unit: Formula, zero: Formula, fs) -> Formula:
    args: list[Formula] = []
    seen: set[int] = set()
    for f in fs:
        for a in (f.args if isinstance(f, cls) else (f,)):
            if a == zero:
                return zero
            if a == unit or id(a) in seen:
                continue
            seen.add(id(a))
            args.append(a)
    if not args:
        return unit
    if len(args) == 1:
        return args[0]
    return cls(tuple(args))


def conj(*fs: Formula) -> Formula:
    """n-ary conjunction with light cleanup.

    Nested conjunctions are spliced one level, ``T`` operands and repeated
    (identical) operands are dropped, and an ``F`` operand absorbs the rest.
    """
    return _nary(And, TOP, BOTTOM, fs)


def disj(*fs: Formula) -> Formula:
    """Dual of ``conj``."""
    return _nary(Or, BOTTOM, TOP, fs)


# -- traversal ---------------------------------------------------------------


def postorder(root: Formula) -> list[Formula]:
    """Distinct nodes of the DAG under ``root``, children before parents."""
    seen: set[int] = set()
    order: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in reversed(node.children()):
            if id(child) not in seen:
                stack.append((child, False))
    return order


def variables(f: Formula) -> list[str]:
    """Variable names in order of first occurrence (left to right)."""
    names: dict[str, None] = {}
    for node in postorder(f):
        if isinstance(node, Var):
            names.setdefault(node.name, None)
    return list(names)


def dag_size(f: Formula) -> int:
    return len(postorder(f))


def check_alphabet(f: Formula, alphabet: Alphabet) -> None:
    for name in variables(f):
        if name not in alphabet:
            raise UndeclaredVariableError(name)


def _fold(f: Formula, leaf: Callable[[Formula], object],
          combine: Callable[[Formula, list], object]):
    values: dict[int, object] = {}
    for node in postorder(f):
        kids = node.children()
        if kids:
            values[id(node)] = combine(node, [values[id(k)] for k in kids])
        else:
            values[id(node)] = leaf(node)
    return values[id(f)]


def evaluate(f: Formula, assignment: dict[str, bool]) -> bool:
    def leaf(node):
        if isinstance(node, Const):
            return node.value
        try:
            return assignment[node.name]
        except KeyError:
            raise UndeclaredVariableError(node.name) from None

    def combine(node, vals):
        if isinstance(node, Not):
            return not vals[0]
        if isinstance(node, And):
            return all(vals)
        if isinstance(node, Or):
            return any(vals)
        if isinstance(node, Implies):
            return (not vals[0]) or vals[1]
        return vals[0] == vals[1]

    return _fold(f, leaf, combine)


# -- rendering and parsing ---------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def render(f: Formula) -> str:
    """Text in the input grammar; parse(render(f)) rebuilds ``f`` exactly."""
    # recursion depth equals formula depth; the engine never renders deep DAGs
    def go(node: Formula, parent: int) -> str:
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Const):
            return "T" if node.value else "F"
        if isinstance(node, Not):
            return "!" + go(node.arg, _PREC[Not])
        if isinstance(node, (And, Or)):
            if not node.args:
                return "T" if isinstance(node, And) else "F"
            prec = _PREC[type(node)]
            text = f" {_SYMBOL[type(node)]} ".join(
                go(a, prec + 1) for a in node.args
            )
        elif isinstance(node, Implies):
            prec = _PREC[Implies]
            text = f"{go(node.left, prec + 1)} -> {go(node.right, prec)}"
        else:
            prec = _PREC[Iff]
            text = f"{go(node.left, prec)} <-> {go(node.right, prec + 1)}"
        if prec < parent:
            return f"({text})"
        return text

    return go(f, 0)


_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()=;])|(\$?[A-Za-z0-9_]+))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise FormulaSyntaxError(f"unexpected character {text[start]!r}",
                                     start, text)
        tok = m.group(1) or m.group(2)
        tokens.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet | None,
                 definitions: dict[str, Formula] | None = None):
        self.text = text
        self.alphabet = alphabet
        self.defs = dict(definitions or {})
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str):
        tok, pos = self.tokens[self.i]
        found = repr(tok) if tok else "end of input"
        raise FormulaSyntaxError(f"{message}, found {found}", pos, self.text)

    def parse(self) -> Formula:
        # leading bindings: let $name = formula;
        while self.peek() == "let" and self.tokens[self.i + 1][0].startswith("$"):
            self.take()
            name, pos = self.take()
            if not _REF.match(name):
                self.i -= 1
                self.error("expected a '$name' reference")
            if name in self.defs:
                raise FormulaSyntaxError(f"{name} is already defined", pos, self.text)
            if self.peek() != "=":
                self.error("expected '='")
            self.take()
            self.defs[name] = self.iff()
            if self.peek() != ";":
                self.error("expected ';'")
            self.take()
        f = self.iff()
        if self.peek() != "":
            self.error("expected operator or end of input")
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp())
        return f

    def or_(self) -> Formula:
        args = [self.and_()]
        while self.peek() == "|":
            self.take()
            args.append(self.and_())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def and_(self) -> Formula:
        args = [self.not_()]
        while self.peek() == "&":
            self.take()
            args.append(self.not_())
        return args[0] if len(args) == 1 else And(tuple(args))

    def not_(self) -> Formula:
        if self.peek() == "!":
            self.take()
            return Not(self.not_())
        return self.atom()

    def atom(self) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            f = self.iff()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return f
        if tok == "T":
            self.take()
            return TOP
        if tok == "F":
            self.take()
            return BOTTOM
        if tok.startswith("$"):
            if tok not in self.defs:
                raise FormulaSyntaxError(f"undefined reference {tok}", pos, self.text)
            self.take()
            return self.defs[tok]
        if tok and _IDENT.match(tok):
            self.take()
            if self.alphabet is not None and tok not in self.alphabet:
                raise UndeclaredVariableError(tok, pos)
            return Var(tok)
        self.error("expected variable, constant, '!' or '('")


def parse_formula(text: str, alphabet: Alphabet | None = None,
                  definitions: dict[str, Formula] | None = None) -> Formula:
    """Parse ``text``; with an alphabet, undeclared variables are rejected.

    Besides the plain grammar, ``text`` may start with bindings
    ``let $a = <formula>;`` and use ``$a`` later on; ``definitions`` supplies
    bindings made elsewhere (e.g. earlier lines of a document).
    """
    return _Parser(text, alphabet, definitions).parse()


# -- shared rendering --------------------------------------------------------

PLAIN_LIMIT = 400


def tree_size(f: Formula) -> int:
    """Node count of ``f`` with all sharing unfolded (may be astronomically large)."""
    size: dict[int, int] = {}
    for node in postorder(f):
        size[id(node)] = 1 + sum(size[id(c)] for c in node.children())
    return size[id(f)]


def render_shared(roots: Sequence[Formula], limit: int = PLAIN_LIMIT,
                  prefix: str = "$") -> tuple[list[tuple[str, str]], list[str]]:
    """Render ``roots`` with shared subformulas named once.

    Returns ``(bindings, texts)``.  When the unfolded roots are no larger than
    ``limit`` nodes there are no bindings.  Otherwise every compound node
    used more than once, and bigger than a handful of nodes, is bound to a
    ``$k`` name, which keeps the output linear in the DAG size.
    """
    if sum(tree_size(r) for r in roots) <= limit:
        return [], [render(r) for r in roots]
    order: list[Formula] = []
    seen: set[int] = set()
    for r in roots:
        for node in postorder(r):
            if id(node) not in seen:
                seen.add(id(node))
                order.append(node)
    uses: dict[int, int] = {}
    for node in order:
        for c in node.children():
            uses[id(c)] = uses.get(id(c), 0) + 1
    for r in roots:
        uses[id(r)] = uses.get(id(r), 0) + 1
    # local size: named children count as one node
    names: dict[int, Var] = {}
    bindings: list[tuple[str, str]] = []
    local: dict[int, int] = {}
    for node in order:
        kids = node.children()
        local[id(node)] = 1 + sum(1 if id(c) in names else local[id(c)] for c in kids)
        if kids and uses.get(id(node), 0) > 1 and local[id(node)] > 4:
            name = f"{prefix}{len(bindings) + 1}"
            bindings.append((name, _render_named(node, names)))
            names[id(node)] = Var(name)  # stands for the reference only
    texts = [names[id(r)].name if id(r) in names else _render_named(r, names)
             for r in roots]
    return bindings, texts


def _render_named(f: Formula, names: dict[int, "Var"]) -> str:
    """``render`` where nodes in ``names`` print as their reference."""
    rebuilt: dict[int, Formula] = {}
    for node in postorder(f):
        if id(node) in names and node is not f:
            continue
        kids = node.children()
        if not kids:
            rebuilt[id(node)] = node
            continue
        new_kids = [names[id(c)] if id(c) in names else rebuilt[id(c)] for c in kids]
        rebuilt[id(node)] = _with_children(node, new_kids)
    return render(rebuilt[id(f)])


def _with_children(node: Formula, kids: list[Formula]) -> Formula:
    if isinstance(node, Not):
        return Not(kids[0])
    if isinstance(node, (And, Or)):
        return type(node)(tuple(kids))
    return type(node)(kids[0], kids[1])


def format_formula(f: Formula, limit: int = PLAIN_LIMIT) -> str:
    """One-line text of ``f``: plain, or ``let $1 = ...; ...; body`` when large."""
    bindings, (body,) = render_shared([f], limit)
    return "".join(f"let {n} = {t}; " for n, t in bindings) + body


# -- model semantics ---------------------------------------------------------

_VAR_MASKS: dict[tuple[int, int], int] = {}


def _var_mask(k: int, n: int) -> int:
    key = (k, n)
    if key not in _VAR_MASKS:
        width = 1 << (k + 1)
        mask = ((1 << (1 << k)) - 1) << (1 << k)
        total = 1 << n
        while width < total:
            mask |= mask << width
            width *= 2
        _VAR_MASKS[key] = mask
    return _VAR_MASKS[key]


def truth_table(f: Formula, alphabet: Alphabet,
                cap: int = DEFAULT_ORACLE_CAP) -> int:
    """Bitmask whose bit ``m`` is set iff model ``m`` satisfies ``f``."""
    alphabet.check_cap(cap)
    n = len(alphabet)
    full = alphabet.full_mask

    def leaf(node):
        if isinstance(node, Const):
            return full if node.value else 0
        return _var_mask(alphabet.index(node.name), n)

    def combine(node, vals):
        if isinstance(node, Not):
            return full & ~vals[0]
        if isinstance(node, And):
            out = full
            for v in vals:
                out &= v
            return out
        if isinstance(node, Or):
            out = 0
            for v in vals:
                out |= v
            return out
        if isinstance(node, Implies):
            return (full & ~vals[0]) | vals[1]
        return full & ~(vals[0] ^ vals[1])

    return _fold(f, leaf, combine)


@dataclass(frozen=True)
class Interpretation:
    alphabet: Alphabet
    index: int

    @classmethod
    def from_dict(cls, alphabet: Alphabet, values: dict[str, bool]):
        missing = [n for n in alphabet if n not in values]
        if missing:
            raise FormulaError(f"interpretation misses {missing}")
        index = sum(1 << k for k, n in enumerate(alphabet) if values[n])
        return cls(alphabet, index)

    def __getitem__(self, name: str) -> bool:
        return bool(self.index >> self.alphabet.index(name) & 1)

    def as_dict(self) -> dict[str, bool]:
        return {n: bool(self.index >> k & 1)
                for k, n in enumerate(self.alphabet)}

    def literals(self) -> list[Formula]:
        return [Var(n) if self.index >> k & 1 else Not(Var(n))
                for k, n in enumerate(self.alphabet)]

    def formula(self) -> Formula:
        return conj(*self.literals())

    def __str__(self) -> str:
        return "&".join(render(l) for l in self.literals()) or "T"


@dataclass(frozen=True)
class ModelSet:
    """A set of interpretations, stored as a truth-table bitmask."""

    alphabet: Alphabet
    mask: int = 0

    @classmethod
    def of(cls, alphabet: Alphabet, models: Iterable) -> "ModelSet":
        mask = 0
        for m in models:
            if isinstance(m, Interpretation):
                if m.alphabet != alphabet:
                    raise FormulaError("interpretation over another alphabet")
                m = m.index
            elif isinstance(m, dict):
                m = Interpretation.from_dict(alphabet, m).index
            mask |= 1 << m
        return cls(alphabet, mask)

    @classmethod
    def everything(cls, alphabet: Alphabet) -> "ModelSet":
        return cls(alphabet, alphabet.full_mask)

    def _same(self, other: "ModelSet") -> None:
        if self.alphabet != other.alphabet:
            raise FormulaError("model sets over different alphabets")

    def __and__(self, other: "ModelSet") -> "ModelSet":
        self._same(other)
        return ModelSet(self.alphabet, self.mask & other.mask)

    def __or__(self, other: "ModelSet") -> "ModelSet":
        self._same(other)
        return ModelSet(self.alphabet, self.mask | other.mask)

    def __sub__(self, other: "ModelSet") -> "ModelSet":
        self._same(other)
        return ModelSet(self.alphabet, self.mask & ~other.mask)

    def complement(self) -> "ModelSet":
        return ModelSet(self.alphabet, self.alphabet.full_mask & ~self.mask)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def indices(self) -> Iterator[int]:
        mask, m = self.mask, 0
        while mask:
            if mask & 1:
                yield m
            mask >>= 1
            m += 1

    def __iter__(self) -> Iterator[Interpretation]:
        for m in self.indices():
            yield Interpretation(self.alphabet, m)

    def __contains__(self, item) -> bool:
        if isinstance(item, Interpretation):
            item = item.index
        return bool(self.mask >> item & 1)

    def issubset(self, other: "ModelSet") -> bool:
        self._same(other)
        return self.mask & ~other.mask == 0

    def __str__(self) -> str:
        return "{" + ", ".join(str(i) for i in self) + "}"


def enumerate_models(f: Formula, alphabet: Alphabet,
                     cap: int = DEFAULT_ORACLE_CAP) -> ModelSet:
    return ModelSet(alphabet, truth_table(f, alphabet, cap))


def formula_of_models(models: ModelSet,
                      alphabet: Alphabet | None = None) -> Formula:
    """Minterm DNF with one disjunct per model, in model order."""
    if alphabet is not None and alphabet != models.alphabet:
        raise FormulaError("model set over another alphabet")
    return disj(*(i.formula() for i in models))


def minterm_formulas(models: ModelSet) -> Sequence[Formula]:
    return [i.formula() for i in models]
