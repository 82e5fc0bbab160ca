"""Surface group presentations, words, and evaluation under representations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .algebra import IDENTITY, UTMat, mat_inv, parse_mat

Syllable = tuple[str, int]


class WordSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


def _free_reduce(syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    stack: list[list] = []
    for name, exp in syllables:
        if exp == 0:
            continue
        if stack and stack[-1][0] == name:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([name, exp])
    return tuple((n, e) for n, e in stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word, stored as ``(generator name, exponent)`` syllables."""

    syllables: tuple[Syllable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "syllables", _free_reduce(self.syllables))

    @classmethod
    def of(cls, *syllables: Syllable) -> "Word":
        return cls(tuple(syllables))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.syllables + other.syllables)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        return Word(base.syllables * abs(n))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.syllables)))

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def is_cyclically_reduced(self) -> bool:
        s = self.syllables
        return len(s) <= 1 or s[0][0] != s[-1][0]

    def substitute(self, mapping: Mapping[str, "Word"]) -> "Word":
        out: list[Syllable] = []
        for g, e in self.syllables:
            image = mapping.get(g, Word.of((g, 1))) ** e
            out.extend(image.syllables)
        return Word(tuple(out))

    def __str__(self) -> str:
        return render_word(self)


def reduce_word(syllables: Iterable[Syllable] | Word) -> Word:
    if isinstance(syllables, Word):
        return syllables
    return Word(tuple(syllables))


def render_word(word: Word) -> str:
    tokens = []
    for name, exp in word.syllables:
        base = name if exp > 0 else name[0].upper() + name[1:]
        tokens.append(base if abs(exp) == 1 else f"{base}^{abs(exp)}")
    return " ".join(tokens)


def commutator_word(a: str, b: str) -> Word:
    return Word(((a, 1), (b, 1), (a, -1), (b, -1)))


def commutator_product(pairs: Iterable[tuple[str, str]]) -> Word:
    w = Word()
    for a, b in pairs:
        w = w * commutator_word(a, b)
    return w


@dataclass(frozen=True)
class Presentation:
    """One of the four one-relator surface group presentations.

    ``kind`` is ``"orientable"`` (genus g, closed orientable surface),
    ``"algae"`` (c_1^2...c_n^2), ``"fungi"`` ([a,b]...c^2) or
    ``"bungee"`` ([a,b]...cdcd^-1).  For g = 1 the handle generators are
    named ``a, b``; ``a1, b1`` are accepted as aliases.
    """

    kind: str
    genus: int
    generators: tuple[str, ...]
    relator: Word
    one_sided: tuple[str, ...] = ()
    aliases: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    @property
    def orientable(self) -> bool:
        return self.kind == "orientable"

    @property
    def euler_genus(self) -> int:
        """Non-orientable genus n (or orientable genus g)."""
        if self.kind == "fungi":
            return 2 * self.genus + 1
        if self.kind == "bungee":
            return 2 * self.genus + 2
        return self.genus

    @property
    def label(self) -> str:
        if self.kind == "orientable":
            return f"S{self.genus}"
        return f"N{self.euler_genus}:{self.kind}"

    def handle_names(self) -> list[tuple[str, str]]:
        g = self.genus if self.kind != "algae" else 0
        if g == 1:
            return [("a", "b")]
        return [(f"a{i}", f"b{i}") for i in range(1, g + 1)]

    def resolve(self, name: str) -> str | None:
        if name in self.generators:
            return name
        return dict(self.aliases).get(name)


def _handles(g: int) -> tuple[list[str], list[tuple[str, str]], tuple]:
    if g == 1:
        pairs = [("a", "b")]
        aliases = (("a1", "a"), ("b1", "b"))
    else:
        pairs = [(f"a{i}", f"b{i}") for i in range(1, g + 1)]
        aliases = ()
    gens = [n for pair in pairs for n in pair]
    return gens, pairs, aliases


def orientable(g: int) -> Presentation:
    if g < 1:
        raise ValueError("orientable genus must be >= 1")
    gens, pairs, aliases = _handles(g)
    return Presentation("orientable", g, tuple(gens), commutator_product(pairs), (), aliases)


def algae(n: int) -> Presentation:
    if n < 1:
        raise ValueError("non-orientable genus must be >= 1")
    gens = tuple(f"c{i}" for i in range(1, n + 1))
    relator = Word(tuple((c, 2) for c in gens))
    return Presentation("algae", n, gens, relator, gens)


def fungi(g: int) -> Presentation:
    if g < 0:
        raise ValueError("g must be >= 0")
    gens, pairs, aliases = _handles(g)
    relator = commutator_product(pairs) * Word.of(("c", 2))
    return Presentation("fungi", g, tuple(gens) + ("c",), relator, ("c",), aliases)


def bungee(g: int) -> Presentation:
    if g < 0:
        raise ValueError("g must be >= 0")
    gens, pairs, aliases = _handles(g)
    relator = commutator_product(pairs) * Word.of(("c", 1), ("d", 1), ("c", 1), ("d", -1))
    # d c d^-1 = c^-1, so d reverses orientation and c is two-sided
    return Presentation("bungee", g, tuple(gens) + ("c", "d"), relator, ("d",), aliases)


_SURFACE_RE = re.compile(r"^(S|N)(\d+)(?::(algae|fungi|bungee))?$")


def parse_surface(text: str) -> Presentation:
    """``S<g>``, ``N<n>``, ``N<n>:algae``, ``N<n>:fungi`` or ``N<n>:bungee``.

    Bare ``N3`` is the genus-3 presentation <a, b, c | aba^-1b^-1c^2>; every
    other bare ``N<n>`` uses the c_1^2...c_n^2 presentation.
    """
    m = _SURFACE_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad surface specifier: {text!r}")
    letter, num, kind = m.group(1), int(m.group(2)), m.group(3)
    if letter == "S":
        if kind:
            raise ValueError(f"orientable surfaces take no suffix: {text!r}")
        return orientable(num)
    if kind is None:
        kind = "fungi" if num == 3 else "algae"
    if kind == "algae":
        return algae(num)
    if kind == "fungi":
        if num % 2 == 0:
            raise ValueError(f"{text}: the fungi presentation needs odd n")
        return fungi((num - 1) // 2)
    if num % 2 == 1 or num < 2:
        raise ValueError(f"{text}: the bungee presentation needs even n >= 2")
    return bungee((num - 2) // 2)


_TOKEN_RE = re.compile(r"^([A-Za-z])(\d*)(?:\^([+-]?\d+))?$")


def parse_word(text: str, p: Presentation) -> Word:
    """Parse whitespace-separated tokens like ``a1``, ``B2``, ``c^-2``.

    An uppercase initial inverts the generator.  Errors carry the 1-based
    column of the offending token.
    """
    syllables: list[Syllable] = []
    for m in re.finditer(r"\S+", text):
        token, col = m.group(0), m.start() + 1
        tm = _TOKEN_RE.match(token)
        if not tm:
            if "^" in token:
                raise WordSyntaxError(f"malformed exponent in {token!r}", col)
            raise WordSyntaxError(f"malformed token {token!r}", col)
        letter, digits, exp_text = tm.groups()
        name = p.resolve(letter.lower() + digits)
        if name is None:
            raise WordSyntaxError(f"unknown generator {token!r} for {p.label}", col)
        exp = int(exp_text) if exp_text is not None else 1
        if exp == 0:
            raise WordSyntaxError(f"zero exponent in {token!r}", col)
        if letter.isupper():
            exp = -exp
        syllables.append((name, exp))
    return Word(tuple(syllables))


def eval_word(w: Word, rho: Mapping[str, UTMat]) -> UTMat:
    result = IDENTITY
    inverses: dict[str, UTMat] = {}
    for name, exp in w.syllables:
        if exp > 0:
            m = rho[name]
        else:
            if name not in inverses:
                inverses[name] = mat_inv(rho[name])
            m = inverses[name]
        result = result @ (m if abs(exp) == 1 else m ** abs(exp))
    return result


def exponent_sums(w: Word, p: Presentation) -> dict[str, int]:
    sums = {g: 0 for g in p.generators}
    for name, exp in w.syllables:
        sums[name] += exp
    return sums


def orientation_character(w: Word, p: Presentation) -> int:
    """+1 for orientation-preserving loops, -1 for orientation-reversing ones."""
    if p.orientable:
        raise ValueError("orientation character is trivial on orientable surfaces")
    total = sum(e for g, e in w.syllables if g in p.one_sided)
    return -1 if total % 2 else 1


@dataclass(frozen=True)
class RelationReport:
    holds_exactly: bool
    holds_projectively: bool
    residual: UTMat


def check_relation(rho: Mapping[str, UTMat], p: Presentation) -> RelationReport:
    image = eval_word(p.relator, rho)
    return RelationReport(image.is_identity(), image.is_scalar(), image)


def parse_assignment(obj: Mapping[str, str], p: Presentation) -> dict[str, UTMat]:
    """Read ``{"a": "2,1,1", ...}`` into a total generator assignment."""
    rho: dict[str, UTMat] = {}
    for key, text in obj.items():
        name = p.resolve(key)
        if name is None:
            raise ValueError(f"unknown generator {key!r} for {p.label}")
        rho[name] = parse_mat(text) if isinstance(text, str) else text
    missing = [g for g in p.generators if g not in rho]
    if missing:
        raise ValueError(f"assignment missing generators: {', '.join(missing)}")
    return rho
