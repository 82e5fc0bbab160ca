"""Words representing simple closed curves, up to automorphism or conjugacy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd

from .groups import Presentation, Word, commutator_product, fungi, algae, bungee, orientable


@dataclass(frozen=True)
class SccClass:
    surface: str
    tag: str
    word: Word
    one_sided: bool = False
    k: int | None = None
    l: int | None = None
    param: int | None = None

    def fields(self) -> dict:
        out = {"kind": self.tag, "one_sided": int(self.one_sided)}
        if self.param is not None:
            out["param"] = self.param
        if self.k is not None:
            out["k"] = self.k
            out["l"] = self.l
        return out

    def to_json(self) -> dict:
        return {**self.fields(), "word": str(self.word)}

    def to_line(self) -> str:
        prefix = " ".join(f"{k}={v}" for k, v in self.fields().items())
        return f"{prefix}\t{self.word}"


@dataclass(frozen=True)
class TorusWordSpec:
    k: int
    l: int
    exponents: tuple[int, ...]

    def word(self) -> Word:
        return Word(tuple(s for n in self.exponents for s in (("a", n), ("b", 1))))


def orientable_representatives(g: int) -> list[SccClass]:
    """a_1 and the separating products [a_1,b_1]...[a_g0,b_g0], g0 < g."""
    p = orientable(g)
    pairs = p.handle_names()
    out = [SccClass(p.label, "nonsep", Word.of((pairs[0][0], 1)))]
    for g0 in range(1, g):
        out.append(SccClass(p.label, "sep", commutator_product(pairs[:g0]), param=g0))
    return out


def nonorientable_representatives(n: int, presentation: str = "algae") -> list[SccClass]:
    """Representatives of the automorphism classes of simple closed curves.

    ``presentation`` picks which of the three presentations of the genus-n
    non-orientable surface the classes are written in; the fungi form needs
    odd n and the bungee form even n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out: list[SccClass] = []
    if presentation == "algae":
        p = algae(n)
        out.append(SccClass(p.label, "case1", Word.of(("c1", 1)), one_sided=True))
        for n0 in range(1, n):
            w = Word(tuple((f"c{i}", 2) for i in range(1, n0 + 1)))
            out.append(SccClass(p.label, "case5", w, param=n0))
        return out
    if presentation == "fungi":
        if n % 2 == 0:
            raise ValueError("the fungi presentation needs odd n")
        p = fungi((n - 1) // 2)
        out.append(SccClass(p.label, "case2", Word.of(("c", 1)), one_sided=True))
    elif presentation == "bungee":
        if n % 2 == 1:
            raise ValueError("the bungee presentation needs even n")
        p = bungee((n - 2) // 2)
    else:
        raise ValueError(f"unknown presentation {presentation!r}")
    pairs = p.handle_names()
    if pairs:
        out.append(SccClass(p.label, "case3", Word.of((pairs[0][0], 1))))
    if presentation == "bungee":
        out.append(SccClass(p.label, "case4", Word.of(("c", 1))))
    for g0 in range(1, len(pairs) + 1):
        out.append(SccClass(p.label, "case6", commutator_product(pairs[:g0]), param=g0))
    return out


def christoffel_exponents(k: int, l: int) -> list[int]:
    """Exponents n_i = floor(i*l/k) - floor((i-1)*l/k), i = 1..k."""
    if k < 1 or l < 1:
        raise ValueError("k and l must be positive")
    if gcd(k, l) != 1:
        raise ValueError(f"k={k} and l={l} must be coprime")
    return [(i * l) // k - ((i - 1) * l) // k for i in range(1, k + 1)]


def cyclic_reduce(w: Word) -> Word:
    s = list(w.syllables)
    while len(s) >= 2 and s[0][0] == s[-1][0]:
        e = s[0][1] + s[-1][1]
        middle = s[1:-1]
        s = ([(s[0][0], e)] + middle) if e else middle
    return Word(tuple(s))


def conjugacy_key(w: Word) -> tuple:
    """Least rotation of the cyclic reduction: equal keys iff conjugate."""
    s = cyclic_reduce(w).syllables
    if not s:
        return ()
    return min(s[i:] + s[:i] for i in range(len(s)))


def torus_symmetries() -> list[dict[str, Word]]:
    """The 8 substitutions generated by a -> a^-1, b -> b^-1 and a <-> b."""
    out = []
    for sa, sb, swap in itertools.product((1, -1), (1, -1), (False, True)):
        na, nb = ("b", "a") if swap else ("a", "b")
        out.append({"a": Word.of((na, sa)), "b": Word.of((nb, sb))})
    return out


def genus3_catalog(max_k: int, max_n: int, include_squares: bool = True) -> list[SccClass]:
    """Simple-loop representatives in <a, b, c | aba^-1b^-1c^2>, up to conjugacy.

    Torus words come from the Christoffel exponents for all coprime (k, l)
    with k <= max_k and floor(l/k) <= max_n, closed under the 8 torus
    symmetries.  Words are deduplicated up to conjugacy.
    """
    if max_k < 1 or max_n < 1:
        raise ValueError("max_k and max_n must be >= 1")
    label = fungi(1).label
    entries: list[SccClass] = []
    seen: set = set()

    def add(word, tag, one_sided=False, k=None, l=None):
        key = conjugacy_key(word)
        if key in seen:
            return
        seen.add(key)
        entries.append(SccClass(label, tag, cyclic_reduce(word), one_sided, k, l))

    for g in ("a", "b"):
        add(Word.of((g, 1)), "base")
        add(Word.of((g, -1)), "base")
    for e in (1, -1, 2, -2):
        add(Word.of(("c", e)), "base", one_sided=e % 2 == 1)

    torus: list[tuple[Word, int, int]] = []
    for k in range(1, max_k + 1):
        for l in range(1, (max_n + 1) * k):
            if gcd(k, l) != 1:
                continue
            w = TorusWordSpec(k, l, tuple(christoffel_exponents(k, l))).word()
            for sym in torus_symmetries():
                torus.append((w.substitute(sym), k, l))
    for w, k, l in torus:
        add(w, "torus", k=k, l=l)

    ac, binv_c = Word.of(("a", 1), ("c", 1)), Word.of(("b", -1), ("c", 1))
    for e in (1, -1, 2, -2):
        add(ac ** e, "ac", one_sided=e % 2 == 1)
    for e in (1, -1, 2, -2):
        add(binv_c ** e, "binv_c", one_sided=e % 2 == 1)
    for w, k, l in torus:
        for e in (1, -1, 2, -2):
            add(w * Word.of(("c", e)), "wc", one_sided=e % 2 == 1, k=k, l=l)

    if include_squares:
        for entry in [e for e in entries if e.one_sided]:
            add(entry.word ** 2, "square", k=entry.k, l=entry.l)
    return entries


def catalog_for(p: Presentation, max_k: int = 2, max_n: int = 2,
                include_squares: bool = True, classes_only: bool = False) -> list[SccClass]:
    if p.kind == "orientable":
        return orientable_representatives(p.genus)
    if p.kind == "fungi" and p.genus == 1 and not classes_only:
        return genus3_catalog(max_k, max_n, include_squares)
    return nonorientable_representatives(p.euler_genus, p.kind)
