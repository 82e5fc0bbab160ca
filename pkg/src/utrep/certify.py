"""Incompressibility certificates for the genus-3 non-orientable surface and
the Klein bottle, plus multiplicative independence over Q."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .algebra import UTMat, as_exact, format_mat, format_scalar, mat_mul, p_poly
from .groups import (
    RelationReport,
    Word,
    bungee,
    check_relation,
    eval_word,
    fungi,
    orientation_character,
    parse_word,
)
from .repspace import PreconditionError
from .scc import SccClass, genus3_catalog


@dataclass
class Check:
    name: str
    status: str
    witness: object = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Certificate:
    inputs: dict
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "accept" if self.checks and all(c.passed for c in self.checks) else "reject"

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "inputs": self.inputs,
            "checks": [c.to_json() for c in self.checks],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }

    def to_text(self) -> str:
        lines = [f"inputs {_text_inputs(self.inputs)}"]
        for c in self.checks:
            tail = f" witness={c.witness}" if c.witness is not None else ""
            lines.append(f"check {c.name} {c.status}{tail}")
        lines += [f"note {n}" for n in self.notes]
        lines.append(f"verdict {self.verdict}")
        return "\n".join(lines)


def _text_inputs(inputs: dict) -> str:
    parts = []
    for k, v in inputs.items():
        parts.append(f"{k}={','.join(v) if isinstance(v, list) else v}")
    return " ".join(parts)


# -- multiplicative independence ------------------------------------------


def coprime_base(numbers: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 over which every input factors."""
    base: list[int] = []
    todo = [abs(n) for n in numbers]
    while todo:
        m = todo.pop()
        if m <= 1:
            continue
        for i, b in enumerate(base):
            g = gcd(m, b)
            if g > 1:
                base.pop(i)
                todo += [g, b // g, m // g]
                break
        else:
            base.append(m)
    return sorted(base)


def _valuations(n: int, base: Sequence[int]) -> list[int]:
    out = []
    for b in base:
        v = 0
        while n % b == 0:
            n //= b
            v += 1
        out.append(v)
    if n != 1:
        raise ArithmeticError("number does not factor over the base")
    return out


def exponent_vector(q: Fraction, base: Sequence[int]) -> list[int]:
    num, den = _valuations(q.numerator, base), _valuations(q.denominator, base)
    return [a - b for a, b in zip(num, den)]


@dataclass(frozen=True)
class MultIndepResult:
    independent: bool
    witness: tuple[int, int] | None = None


def mult_indep(x, z) -> MultIndepResult:
    """Decide whether x**p * z**q == 1 forces p = q = 0, for positive rationals.

    The exponent vectors of x and z over a common coprime base have rank 2
    exactly when they are independent; otherwise a primitive kernel vector
    is returned, normalized so its first nonzero entry is positive.
    """
    x, z = Fraction(as_exact(x)), Fraction(as_exact(z))
    if not (x > 0 and z > 0):
        raise ValueError("x and z must be positive")
    base = coprime_base([x.numerator, x.denominator, z.numerator, z.denominator])
    vx, vz = exponent_vector(x, base), exponent_vector(z, base)
    if not any(vx):
        return MultIndepResult(False, (1, 0))
    if not any(vz):
        return MultIndepResult(False, (0, 1))
    for i in range(len(base)):
        for j in range(i + 1, len(base)):
            if vx[i] * vz[j] - vx[j] * vz[i] != 0:
                return MultIndepResult(True)
    j = next(i for i, v in enumerate(vx) if v)
    p, q = vz[j], -vx[j]
    g = gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return MultIndepResult(False, (p, q))


# -- genus 3 --------------------------------------------------------------


def genus3_assignment(x, y, z, w, lower_right: int = 1) -> dict[str, UTMat]:
    """a -> (x, y), b -> (z, w), c -> (1, -p/2) with c's lower-right entry +-1."""
    x, y, z, w = (as_exact(v) for v in (x, y, z, w))
    return {
        "a": UTMat(x, y),
        "b": UTMat(z, w),
        "c": UTMat(Fraction(1), -p_poly(x, y, z, w) / 2, lower_right),
    }


@dataclass(frozen=True)
class KernelScan:
    identity: tuple[SccClass, ...]
    minus_identity: tuple[SccClass, ...]
    scanned: int

    @property
    def empty(self) -> bool:
        return not self.identity and not self.minus_identity


def scan_kernel(rho: Mapping[str, UTMat], catalog: Iterable[SccClass]) -> KernelScan:
    """Evaluate every catalog word; collect those mapping to I and to -I."""
    ident, minus = [], []
    count = 0
    for entry in catalog:
        count += 1
        image = eval_word(entry.word, rho)
        if image.is_identity():
            ident.append(entry)
        elif image.is_minus_identity():
            minus.append(entry)
    return KernelScan(tuple(ident), tuple(minus), count)


def certify_genus3(x, y, z, w, scan_k: int | None = None, scan_n: int | None = None,
                   include_squares: bool = True) -> Certificate:
    """Check the hypotheses that make the genus-3 assignment incompressible.

    Accepts when x, z > 0 are multiplicatively independent, p(x, y, z, w) != 0
    and the relator holds.  Then any catalog word with nonzero (a, b) exponent
    sums (l, k) has upper-left entry x**l z**k != 1, and c, c**2 map to
    nontrivial unipotents whose upper entry is a nonzero multiple of p.
    ``scan_k``/``scan_n`` additionally run an exact kernel scan over the
    genus-3 catalog of that size.
    """
    x, y, z, w = (as_exact(v) for v in (x, y, z, w))
    cert = Certificate({"point": [format_scalar(v) for v in (x, y, z, w)]})
    cert.checks.append(Check("x_positive", "pass" if x > 0 else "fail",
                             None if x > 0 else format_scalar(x)))
    cert.checks.append(Check("z_positive", "pass" if z > 0 else "fail",
                             None if z > 0 else format_scalar(z)))
    if x > 0 and z > 0:
        mi = mult_indep(x, z)
        cert.checks.append(Check("mult_indep", "pass" if mi.independent else "fail",
                                 None if mi.independent else list(mi.witness)))
    else:
        cert.checks.append(Check("mult_indep", "skipped"))
    p = p_poly(x, y, z, w)
    cert.checks.append(Check("p_nonzero", "pass" if p != 0 else "fail",
                             format_scalar(p) if p == 0 else None))
    if x != 0 and z != 0:
        rel = check_relation(genus3_assignment(x, y, z, w), fungi(1))
        cert.checks.append(Check("relation", "pass" if rel.holds_exactly else "fail",
                                 None if rel.holds_exactly else format_mat(rel.residual)))
    else:
        cert.checks.append(Check("relation", "skipped"))

    if cert.accepted:
        cert.notes.append("words with (l,k) != (0,0) map to upper-left x^l z^k != 1")
        cert.notes.append(f"c^e maps to (1, -e*p/2) with p = {format_scalar(p)}")
        cert.notes.append("positive diagonal: -I never occurs, image is torsion-free")
    if scan_k is not None or scan_n is not None:
        k, n = scan_k or 6, scan_n or 6
        if x > 0 and z > 0:
            scan = scan_kernel(genus3_assignment(x, y, z, w), genus3_catalog(k, n, include_squares))
            killed = [str(e.word) for e in scan.identity + scan.minus_identity]
            cert.checks.append(Check("catalog_scan", "pass" if not killed else "fail",
                                     killed or None))
            cert.notes.append(f"scan K={k} N={n} squares={int(include_squares)} words={scan.scanned}")
        else:
            cert.checks.append(Check("catalog_scan", "skipped"))
    return cert


@dataclass(frozen=True)
class DetRow:
    word: Word
    det: int
    character: int

    @property
    def agrees(self) -> bool:
        return self.det == self.character


@dataclass(frozen=True)
class TwoSidedReport:
    assignment: dict
    relation: RelationReport
    det_table: tuple[DetRow, ...]


DEFAULT_TWO_SIDED_WORDS = ("c", "a c", "B c", "a b")


def two_sided_variant(x, y, z, w, words: Iterable[Word | str] | None = None) -> TwoSidedReport:
    """Flip the lower-right entry of C to -1 and measure what happens.

    The relation is evaluated and reported as found.  For each word the
    determinant of its image is listed next to its orientation character.
    """
    if not certify_genus3(x, y, z, w).accepted:
        raise PreconditionError("two-sided variant needs an accepted genus-3 point")
    p = fungi(1)
    rho = genus3_assignment(x, y, z, w, lower_right=-1)
    rel = check_relation(rho, p)
    rows = []
    for word in (DEFAULT_TWO_SIDED_WORDS if words is None else words):
        if isinstance(word, str):
            word = parse_word(word, p)
        rows.append(DetRow(word, eval_word(word, rho).det, orientation_character(word, p)))
    return TwoSidedReport(rho, rel, tuple(rows))


# -- Klein bottle ---------------------------------------------------------

KLEIN_LOOPS = ("c", "d", "c d", "d^2", "c d c d")


def klein_analyze(z, w, c_sign: int) -> Certificate:
    """C = c_sign * I, D = (z, w): relation check and the five simple loops."""
    z, w = as_exact(z), as_exact(w)
    if not z > 0:
        raise ValueError("z must be positive")
    if c_sign not in (1, -1):
        raise ValueError("c_sign must be +1 or -1")
    p = bungee(0)
    rho = {"c": UTMat(Fraction(c_sign), Fraction(0)), "d": UTMat(z, w)}
    cert = Certificate({"z": format_scalar(z), "w": format_scalar(w), "c_sign": c_sign})
    rel = check_relation(rho, p)
    cert.checks.append(Check("relation", "pass" if rel.holds_exactly else "fail",
                             None if rel.holds_exactly else format_mat(rel.residual)))
    projective = []
    for text in KLEIN_LOOPS:
        word = parse_word(text, p)
        image = eval_word(word, rho)
        cert.checks.append(Check(f"loop:{word}", "fail" if image.is_identity() else "pass",
                                 str(word) if image.is_identity() else None))
        if image.is_scalar():
            projective.append(str(word))
    if c_sign == -1:
        cert.notes.append("image contains -I, so it has torsion")
    if projective:
        cert.notes.append("projectivizing kills: " + ", ".join(projective))
    return cert


@dataclass(frozen=True)
class KleinSolution:
    d: UTMat
    solutions: tuple[UTMat, ...]
    free_family: bool


def klein_solutions(z, w) -> KleinSolution:
    """All upper-triangular SL2 matrices C with C D C D^-1 = I, for D = (z, w).

    The diagonal is multiplicative, so the upper-left entry of C D C D^-1 is
    x**2 and x = +-1.  For each such x the upper-right entry is affine in y;
    it is sampled at y = 0 and y = 1 by direct multiplication and solved.
    """
    d = UTMat(as_exact(z), as_exact(w))
    d_inv = d.inverse()

    def upper_right(x, y):
        c = UTMat(x, y)
        return mat_mul(mat_mul(mat_mul(c, d), c), d_inv).y

    sols, free = [], False
    for x in (Fraction(1), Fraction(-1)):
        b = upper_right(x, Fraction(0))
        a = upper_right(x, Fraction(1)) - b
        if a != 0:
            c = UTMat(x, -b / a)
            if mat_mul(mat_mul(mat_mul(c, d), c), d_inv).is_identity():
                sols.append(c)
        elif b == 0:
            free = True
    return KleinSolution(d, tuple(sols), free)


@dataclass(frozen=True)
class KleinFormReport:
    samples: tuple[KleinSolution, ...]
    counterexamples: tuple[KleinSolution, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def klein_forced_form(samples: int = 100, seed: int = 0) -> KleinFormReport:
    """Sample D and confirm every solution C of C D C D^-1 = I is +-I."""
    rng = random.Random(f"klein/{seed}")
    results, bad = [], []
    for _ in range(samples):
        z = Fraction(rng.choice([-1, 1]) * rng.randint(1, 10), rng.randint(1, 10))
        w = Fraction(rng.randint(-10, 10), rng.randint(1, 10))
        sol = klein_solutions(z, w)
        results.append(sol)
        if sol.free_family or any(not c.is_scalar() for c in sol.solutions):
            bad.append(sol)
    return KleinFormReport(tuple(results), tuple(bad))
