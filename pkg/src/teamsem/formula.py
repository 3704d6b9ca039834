"""Independence-logic syntax: AST, DSL parser and printer.

Dependence and constancy atoms are not separate node types: ``=(x ; y)`` is
``Indep(y, y, x)`` and ``=(z)`` is ``Indep(z, z, ())``.  The printer recovers
the short forms, so ``parse(str(phi)) == phi``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .team import infer_role

Names = tuple[str, ...]


class Formula:
    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)


@dataclass(frozen=True, eq=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True, eq=True)
class Neq(Formula):
    left: str
    right: str


@dataclass(frozen=True, eq=True)
class Indep(Formula):
    """y ⊥_x z."""

    y: Names
    z: Names
    x: Names = ()

    def __post_init__(self):
        for f in ("y", "z", "x"):
            object.__setattr__(self, f, tuple(getattr(self, f)))

    @property
    def is_dependence(self) -> bool:
        return self.y == self.z


def dep(determinant: Sequence[str], dependent: Sequence[str]) -> Indep:
    """=(x⃗, y⃗) as y⃗ ⊥_x⃗ y⃗."""
    return Indep(tuple(dependent), tuple(dependent), tuple(determinant))


def const(names: Sequence[str]) -> Indep:
    return dep((), names)


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=True)
class ExistsNewSort(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, eq=True)
class ForallNewSort(Formula):
    var: str
    body: Formula


Quantifier = Union[Exists, Forall, ExistsNewSort, ForallNewSort]
QUANTIFIERS = (Exists, Forall, ExistsNewSort, ForallNewSort)
_QUANT_KEYWORD = {Exists: "E", Forall: "A", ExistsNewSort: "Eh", ForallNewSort: "Ah"}
_KEYWORD_QUANT = {v: k for k, v in _QUANT_KEYWORD.items()}
ATOMS = (Eq, Neq, Indep)


def conj(parts: Sequence[Formula]) -> Formula:
    parts = list(parts)
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def conjuncts(phi: Formula) -> Iterator[Formula]:
    if isinstance(phi, And):
        yield from conjuncts(phi.left)
        yield from conjuncts(phi.right)
    else:
        yield phi


def atom_vars(phi: Formula) -> Names:
    if isinstance(phi, (Eq, Neq)):
        return (phi.left, phi.right)
    if isinstance(phi, Indep):
        return phi.y + phi.z + phi.x
    raise TypeError(phi)


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, ATOMS):
        return frozenset(atom_vars(phi))
    if isinstance(phi, (And, Or)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(phi)


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, ATOMS):
        return True
    if isinstance(phi, (And, Or)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def is_dependence_formula(phi: Formula) -> bool:
    """Only dependence/constancy atoms (plus first-order atoms), closed under ∧ ∨ ∃ ∀."""
    if isinstance(phi, (Eq, Neq)):
        return True
    if isinstance(phi, Indep):
        return phi.is_dependence
    if isinstance(phi, (And, Or)):
        return is_dependence_formula(phi.left) and is_dependence_formula(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return is_dependence_formula(phi.body)
    return False


def rename(phi: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of ``old``."""
    sub = lambda t: tuple(new if v == old else v for v in t)
    if isinstance(phi, Eq):
        return Eq(*sub((phi.left, phi.right)))
    if isinstance(phi, Neq):
        return Neq(*sub((phi.left, phi.right)))
    if isinstance(phi, Indep):
        return Indep(sub(phi.y), sub(phi.z), sub(phi.x))
    if isinstance(phi, (And, Or)):
        return type(phi)(rename(phi.left, old, new), rename(phi.right, old, new))
    if isinstance(phi, QUANTIFIERS):
        if phi.var == old:
            return phi
        return type(phi)(phi.var, rename(phi.body, old, new))
    raise TypeError(phi)


def separate_bound_variables(phi: Formula) -> Formula:
    """Rename binders so that no bound variable clashes with a free one or another binder."""
    taken = set(free_vars(phi))

    def fresh(v: str) -> str:
        k = 1
        while f"{v}_{k}" in taken:
            k += 1
        return f"{v}_{k}"

    def walk(f: Formula) -> Formula:
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, (And, Or)):
            return type(f)(walk(f.left), walk(f.right))
        v, body = f.var, f.body
        if v in taken:
            nv = fresh(v)
            body = rename(body, v, nv)
            v = nv
        taken.add(v)
        return type(f)(v, walk(body))

    return walk(phi)


# ------------------------------------------------------------------ printing


def _tuple_text(t: Names) -> str:
    return " ".join(t) if t else "{}"


def to_text(phi: Formula) -> str:
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Neq):
        return f"{phi.left} != {phi.right}"
    if isinstance(phi, Indep):
        if phi.is_dependence and phi.y:
            if phi.x:
                return f"=({_tuple_text(phi.x)} ; {_tuple_text(phi.y)})"
            return f"=({_tuple_text(phi.y)})"
        s = f"{_tuple_text(phi.y)} _||_ {_tuple_text(phi.z)}"
        return s + (f" | {_tuple_text(phi.x)}" if phi.x else "")
    if isinstance(phi, Or):
        right = to_text(phi.right)
        if isinstance(phi.right, Or):
            right = f"({right})"
        return f"{to_text(phi.left)} \\/ {right}"
    if isinstance(phi, And):
        parts = [f"({to_text(p)})" if isinstance(p, Or) else to_text(p) for p in (phi.left, phi.right)]
        # right-nested conjunctions need brackets to keep the left fold
        if isinstance(phi.right, And):
            parts[1] = f"({parts[1]})"
        return " /\\ ".join(parts)
    if isinstance(phi, QUANTIFIERS):
        body = to_text(phi.body)
        if isinstance(phi.body, (And, Or)):
            body = f"( {body} )"
        return f"{_QUANT_KEYWORD[type(phi)]} {phi.var} . {body}"
    raise TypeError(phi)


# ------------------------------------------------------------------- parsing


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}: {text[:pos]}<<HERE>>{text[pos:]}")


_TOKEN = re.compile(
    r"\s*(?:(?P<indep>_\|\|_)|(?P<and>/\\)|(?P<or>\\/)|(?P<dep>=\()|(?P<neq>!=)|(?P<eq>=)"
    r"|(?P<empty>\{\})|(?P<lp>\()|(?P<rp>\))|(?P<semi>;)|(?P<bar>\|)|(?P<dot>\.)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_']*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, i = [], 0
    while i < len(text):
        if text[i:].strip() == "":
            break
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            j = i + len(text[i:]) - len(text[i:].lstrip())
            raise ParseError(f"unexpected character {text[j]!r}", text, j)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        i = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            what = tok[1] or "end of input"
            raise ParseError(f"expected {kind}, found {what!r}", self.text, tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.conj()
        while self.peek()[0] == "or":
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unit()
        while self.peek()[0] == "and":
            self.i += 1
            left = And(left, self.unit())
        return left

    def unit(self) -> Formula:
        kind, val, pos = self.peek()
        if kind == "ident" and val in _KEYWORD_QUANT and self.peek(1)[0] == "ident" and self.peek(2)[0] == "dot":
            self.i += 3
            var = self.toks[self.i - 2][1]
            return _KEYWORD_QUANT[val](var, self.unit())
        if kind == "lp":
            self.i += 1
            f = self.formula()
            self.take("rp")
            return f
        if kind == "dep":
            self.i += 1
            first = self.tuple()
            if self.peek()[0] == "semi":
                self.i += 1
                second = self.tuple()
                self.take("rp")
                return dep(first, second)
            self.take("rp")
            return const(first)
        if kind in ("ident", "empty"):
            if kind == "ident" and self.peek(1)[0] in ("eq", "neq"):
                left = val
                op = self.peek(1)[0]
                self.i += 2
                right = self.take("ident")[1]
                return Eq(left, right) if op == "eq" else Neq(left, right)
            y = self.tuple()
            self.take("indep")
            z = self.tuple()
            x: Names = ()
            if self.peek()[0] == "bar":
                self.i += 1
                x = self.tuple()
            return Indep(y, z, x)
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)

    def tuple(self) -> Names:
        if self.peek()[0] == "empty":
            self.i += 1
            return ()
        names = [self.take("ident")[1]]
        while self.peek()[0] == "ident" and not self._starts_quantifier():
            names.append(self.take("ident")[1])
        return tuple(names)

    def _starts_quantifier(self) -> bool:
        return self.peek()[1] in _KEYWORD_QUANT and self.peek(1)[0] == "ident" and self.peek(2)[0] == "dot"


def parse(text: str, warn_roles: bool = True) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    if p.peek()[0] != "end":
        tok = p.peek()
        raise ParseError(f"unexpected trailing {tok[1]!r}", text, tok[2])
    phi = separate_bound_variables(phi)
    if warn_roles:
        for v in sorted(all_vars(phi)):
            infer_role(v, warn=True)
    return phi


def all_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, ATOMS):
        return frozenset(atom_vars(phi))
    if isinstance(phi, (And, Or)):
        return all_vars(phi.left) | all_vars(phi.right)
    return all_vars(phi.body) | {phi.var}


def parse_atom(text: str) -> Indep:
    phi = parse(text, warn_roles=False)
    if not isinstance(phi, Indep):
        raise ValueError(f"not an independence or dependence atom: {text!r}")
    return phi
