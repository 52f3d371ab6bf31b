"""Propositional core: formulas, worlds, model sets, classical consequence.

A session fixes an ordered list of atoms (at most four).  A *world* is a
valuation of those atoms, encoded as an integer whose binary digits, most
significant first, give the truth values in declared order; ``world_str``
renders exactly that bit-string, so over atoms ``[p, q]`` the world ``10``
makes ``p`` true and ``q`` false.

Formulas are plain ASTs and are kept only for parsing and display.  All
semantic work (equivalence, entailment, operator inputs) goes through
``models``, which canonicalises a formula to its set of worlds; two
formulas are treated as the same sentence exactly when their model sets
coincide.

Grammar, bit-exact::

    atom     := [a-zA-Z][a-zA-Z0-9_]*        ('true'/'false' reserved)
    unary    := '~'
    binary   := '&' | '|' | '->' | '<->'      (precedence high to low)
    parens   := '(' ... ')'

``->`` and ``<->`` associate to the right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .exceptions import FormulaSyntaxError, UnknownAtomError

MAX_ATOMS = 4

WorldSet = frozenset  # frozenset[int]


# ---------------------------------------------------------------------------
# Formula AST


class Formula:
    """Base class; concrete nodes below.  Structural equality only."""

    def __str__(self) -> str:
        return _render(self, 0)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


TOP = Top()
BOTTOM = Bottom()

# Rendering precedence: higher binds tighter.
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5}
_OP_TEXT = {And: " & ", Or: " | ", Implies: " -> ", Iff: " <-> "}


def _render(f: Formula, min_prec: int) -> str:
    """Render ``f``, parenthesising when its precedence is below ``min_prec``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Not):
        return "~" + _render(f.operand, _PREC[Not])
    prec = _PREC[type(f)]
    if isinstance(f, (And, Or)):
        text = _render(f.left, prec) + _OP_TEXT[type(f)] + _render(f.right, prec + 1)
    else:
        text = _render(f.left, prec + 1) + _OP_TEXT[type(f)] + _render(f.right, prec)
    return "(" + text + ")" if prec < min_prec else text


@dataclass(frozen=True)
class Conditional:
    """A non-nested conditional sentence: antecedent => consequent."""

    antecedent: Formula
    consequent: Formula

    def __str__(self) -> str:
        return f"{self.antecedent} => {self.consequent}"


# ---------------------------------------------------------------------------
# Atoms and worlds

_ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


def check_atoms(atoms: Sequence[str]) -> tuple[str, ...]:
    """Validate a declared atom list and return it as a tuple."""
    atoms = tuple(atoms)
    if not atoms:
        raise ValueError("atom list must be nonempty")
    if len(atoms) > MAX_ATOMS:
        raise ValueError(f"at most {MAX_ATOMS} atoms supported, got {len(atoms)}")
    seen = set()
    for name in atoms:
        if not _ATOM_RE.match(name) or name in ("true", "false"):
            raise ValueError(f"invalid atom name {name!r}")
        if name in seen:
            raise ValueError(f"duplicate atom {name!r}")
        seen.add(name)
    return atoms


def world_count(n_atoms: int) -> int:
    return 1 << n_atoms


def all_worlds(n_atoms: int) -> WorldSet:
    return frozenset(range(1 << n_atoms))


def world_str(world: int, n_atoms: int) -> str:
    """Bit-string of a world in declared atom order, e.g. ``10``."""
    return format(world, f"0{n_atoms}b")


def parse_world(text: str, n_atoms: int) -> int:
    if len(text) != n_atoms or any(c not in "01" for c in text):
        raise ValueError(f"world {text!r} is not a {n_atoms}-bit string")
    return int(text, 2)


def atom_holds(world: int, index: int, n_atoms: int) -> bool:
    return bool((world >> (n_atoms - 1 - index)) & 1)


# ---------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op><->|->|[~&|()]))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            # Skip leading whitespace manually to report the right offset.
            stripped = pos
            while stripped < len(text) and text[stripped].isspace():
                stripped += 1
            if stripped == len(text):
                break
            raise FormulaSyntaxError(f"unexpected character {text[stripped]!r}", stripped)
        token = match.group("ident") or match.group("op")
        tokens.append((token, match.end() - len(token)))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, atoms: tuple[str, ...]):
        self.text = text
        self.atoms = atoms
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> str | None:
        if self.index < len(self.tokens):
            return self.tokens[self.index][0]
        return None

    def offset(self) -> int:
        if self.index < len(self.tokens):
            return self.tokens[self.index][1]
        return len(self.text)

    def take(self) -> tuple[str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def parse(self) -> Formula:
        formula = self.parse_iff()
        if self.index != len(self.tokens):
            raise FormulaSyntaxError(f"unexpected token {self.peek()!r}", self.offset())
        return formula

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.parse_iff())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_unary()
        while self.peek() == "&":
            self.take()
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        token = self.peek()
        if token is None:
            raise FormulaSyntaxError("unexpected end of input", self.offset())
        if token == "~":
            self.take()
            return Not(self.parse_unary())
        if token == "(":
            self.take()
            inner = self.parse_iff()
            if self.peek() != ")":
                raise FormulaSyntaxError("expected ')'", self.offset())
            self.take()
            return inner
        if token in ("&", "|", "->", "<->", ")"):
            raise FormulaSyntaxError(f"unexpected token {token!r}", self.offset())
        text, offset = self.take()
        if text == "true":
            return TOP
        if text == "false":
            return BOTTOM
        if text not in self.atoms:
            raise UnknownAtomError(text, offset)
        return Atom(text)


def parse_formula(text: str, atoms: Sequence[str]) -> Formula:
    """Parse a formula over the declared atoms; total on valid input."""
    return _Parser(text, check_atoms(atoms)).parse()


# ---------------------------------------------------------------------------
# Semantics

def models(f: Formula, atoms: Sequence[str]) -> WorldSet:
    """Exact model set of ``f``, by evaluation over all 2^n worlds."""
    atoms = check_atoms(atoms)
    n = len(atoms)
    full = all_worlds(n)

    def walk(g: Formula) -> frozenset:
        if isinstance(g, Atom):
            try:
                i = atoms.index(g.name)
            except ValueError:
                raise UnknownAtomError(g.name, 0) from None
            return frozenset(w for w in full if atom_holds(w, i, n))
        if isinstance(g, Top):
            return full
        if isinstance(g, Bottom):
            return frozenset()
        if isinstance(g, Not):
            return full - walk(g.operand)
        if isinstance(g, And):
            return walk(g.left) & walk(g.right)
        if isinstance(g, Or):
            return walk(g.left) | walk(g.right)
        if isinstance(g, Implies):
            return (full - walk(g.left)) | walk(g.right)
        if isinstance(g, Iff):
            left, right = walk(g.left), walk(g.right)
            return (left & right) | (full - left - right)
        raise TypeError(f"not a formula: {g!r}")

    return walk(f)


def entails(gamma: Iterable[Formula], f: Formula, atoms: Sequence[str]) -> bool:
    """Classical consequence: every world satisfying all of gamma satisfies f."""
    atoms = check_atoms(atoms)
    worlds = all_worlds(len(atoms))
    for g in gamma:
        worlds = worlds & models(g, atoms)
    return worlds <= models(f, atoms)


def dnf_of_worlds(worlds: Iterable[int], atoms: Sequence[str]) -> str:
    """Canonical DNF naming a world set; terms sorted by bit-string.

    The empty set renders as ``false``.  This is the display form for
    belief sets and for input propositions in reports; it parses back to
    the same model set.
    """
    atoms = check_atoms(atoms)
    n = len(atoms)
    ordered = sorted(set(worlds))
    if not ordered:
        return "false"
    terms = []
    for w in ordered:
        literals = [name if atom_holds(w, i, n) else "~" + name for i, name in enumerate(atoms)]
        terms.append(" & ".join(literals))
    return " | ".join(terms)


# ---------------------------------------------------------------------------
# Mixed sets of sentences and conditionals

CondPair = tuple  # (antecedent models, consequent models)


@dataclass(frozen=True)
class MixedSet:
    """A set of plain sentences plus conditionals, in model-set form.

    ``plain_models`` is the model set of the conjunction of the plain
    part (the whole world set when the plain part is empty).  Each entry
    of ``cond_pairs`` is an (antecedent, consequent) pair of model sets.

    ``weakening_closed`` marks sets produced from a total preorder, which
    denote *every* conditional the preorder validates: each stored pair
    maps an antecedent to its minimal worlds, and a conditional is a
    member whenever its consequent contains that minimal set.  Sets built
    from listed sentences are not closed that way: they contain exactly
    what was listed, which is what makes the plain extended-consequence
    operator too weak to reconstruct revision.
    """

    plain_models: frozenset
    cond_pairs: frozenset
    weakening_closed: bool = False

    @staticmethod
    def from_items(
        plain: Iterable[Formula],
        conds: Iterable[Conditional],
        atoms: Sequence[str],
    ) -> "MixedSet":
        atoms = check_atoms(atoms)
        plain_models = all_worlds(len(atoms))
        for f in plain:
            plain_models = plain_models & models(f, atoms)
        pairs = frozenset(
            (models(c.antecedent, atoms), models(c.consequent, atoms)) for c in conds
        )
        return MixedSet(plain_models=plain_models, cond_pairs=pairs)

    def adding_plain(self, sentence_models: frozenset) -> "MixedSet":
        """The set extended with one more plain sentence."""
        return MixedSet(
            plain_models=self.plain_models & sentence_models,
            cond_pairs=self.cond_pairs,
            weakening_closed=self.weakening_closed,
        )

    def strongest_map(self) -> dict:
        """Per antecedent, the intersection of all listed consequents."""
        out: dict = {}
        for antecedent, consequent in self.cond_pairs:
            if antecedent in out:
                out[antecedent] = out[antecedent] & consequent
            else:
                out[antecedent] = consequent
        return out


Item = Union[Formula, Conditional]


def cn_extended_member(delta: MixedSet, item: Item, atoms: Sequence[str]) -> bool:
    """Membership in Cn(delta) where conditionals contribute nothing.

    A plain formula is a member iff it follows classically from the plain
    part.  A conditional is a member iff it is in the set itself: listed
    literally for listed sets, validated by the generating preorder for
    weakening-closed sets.  No inference ever produces a new conditional.
    """
    if isinstance(item, Conditional):
        antecedent = models(item.antecedent, atoms)
        consequent = models(item.consequent, atoms)
        if delta.weakening_closed:
            if not antecedent:
                return True
            return any(
                p == antecedent and q <= consequent for p, q in delta.cond_pairs
            )
        return (antecedent, consequent) in delta.cond_pairs
    return delta.plain_models <= models(item, atoms)
