"""Upper-triangular representation varieties and their perturbation moves.

Four coordinate spaces are supported, named by a ``"<kind>:<genus>"`` tag:

``U:g``        (x1, y1, z1, w1, ..., xg, yg, zg, wg), sum of p over blocks = 0
``V:n``        (x1, y1, ..., xn, yn), prod s_i = 1 and q_n = 0
``VFungi:g``   U-blocks then (x, y) with x = 1 and sum p + 2y = 0
``VBungee:g``  U-blocks then (x, y, z, w) with x = 1 and
               sum p + y (z**2 + 1) = 0

Only the positive-diagonal component is used: every x_i and z_i must be > 0.

Each ``perturb_*`` move takes a point that kills some simple loop and
returns a nearby point that does not, staying on the variety.  Moves are
exact on rational input except :func:`perturb_kill_prefix_squares`, whose
square roots may be irrational (those coordinates come back as floats).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .algebra import (
    ApproxScalar,
    Scalar,
    SquareCoords,
    UTMat,
    as_exact,
    format_scalar,
    p_poly,
    parse_scalar,
    q_poly,
    square_coords,
    square_coords_inv,
)
from .groups import Presentation, Word, algae, bungee, commutator_product, fungi, orientable

APPROX_TOL = 1e-12

SPACE_KINDS = ("U", "V", "VFungi", "VBungee")


class PreconditionError(ValueError):
    pass


def parse_space(space: str) -> tuple[str, int]:
    kind, _, num = space.partition(":")
    if kind not in SPACE_KINDS or not num.isdigit():
        raise ValueError(f"bad space tag {space!r}")
    return kind, int(num)


def space_dim(space: str) -> int:
    kind, g = parse_space(space)
    return {"U": 4 * g, "V": 2 * g, "VFungi": 4 * g + 2, "VBungee": 4 * g + 4}[kind]


def space_presentation(space: str) -> Presentation:
    kind, g = parse_space(space)
    return {"U": orientable, "V": algae, "VFungi": fungi, "VBungee": bungee}[kind](g)


def presentation_space(p: Presentation) -> str:
    kind = {"orientable": "U", "algae": "V", "fungi": "VFungi", "bungee": "VBungee"}[p.kind]
    return f"{kind}:{p.genus}"


@dataclass(frozen=True)
class RepPoint:
    space: str
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(as_exact(c) for c in self.coords))
        if len(self.coords) != space_dim(self.space):
            raise ValueError(
                f"{self.space} needs {space_dim(self.space)} coordinates, got {len(self.coords)}"
            )

    @property
    def kind(self) -> str:
        return parse_space(self.space)[0]

    @property
    def genus(self) -> int:
        return parse_space(self.space)[1]

    @property
    def approximate(self) -> bool:
        return any(isinstance(c, float) for c in self.coords)

    def blocks(self) -> list[tuple]:
        """The (x, y, z, w) handle blocks (U, VFungi, VBungee only)."""
        g = self.genus
        return [tuple(self.coords[4 * i: 4 * i + 4]) for i in range(g)]

    def replace(self, changes: dict[int, Scalar]) -> "RepPoint":
        coords = list(self.coords)
        for i, v in changes.items():
            coords[i] = v
        return RepPoint(self.space, tuple(coords))

    def distance(self, other: "RepPoint") -> float:
        return max(abs(float(a - b)) for a, b in zip(self.coords, other.coords))

    def to_json(self) -> dict:
        out = {"space": self.space, "coords": [format_scalar(c) for c in self.coords]}
        if self.approximate:
            out["approximate"] = True
            out["residual"] = membership(self).residual
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "RepPoint":
        coords = []
        for c in obj["coords"]:
            try:
                coords.append(parse_scalar(c))
            except ValueError:
                if not obj.get("approximate"):
                    raise
                coords.append(float(c))
        return cls(obj["space"], tuple(coords))


def parse_point(space: str, text: str) -> RepPoint:
    return RepPoint(space, tuple(parse_scalar(t) for t in text.split(",")))


@dataclass(frozen=True)
class Membership:
    ok: bool
    constraint: str | None = None
    residual: Scalar = 0

    def __bool__(self) -> bool:
        return self.ok


def _zero(value, approximate: bool, tol: float) -> bool:
    return abs(value) <= tol if approximate else value == 0


def _block_sum(blocks) -> Scalar:
    return sum((p_poly(*b) for b in blocks), Fraction(0))


def _square_list(coords) -> list[SquareCoords]:
    return [square_coords(coords[2 * i], coords[2 * i + 1]) for i in range(len(coords) // 2)]


def membership(pt: RepPoint, tol: float = APPROX_TOL) -> Membership:
    """Evaluate the defining constraints of ``pt.space`` at ``pt``.

    Exact points must satisfy every equation exactly; points carrying float
    coordinates are accepted when each residual is at most ``tol``.
    """
    approx = pt.approximate
    c = pt.coords
    kind, g = pt.kind, pt.genus

    if kind == "V":
        for i in range(g):
            if not c[2 * i] > 0:
                return Membership(False, f"x{i + 1}>0", c[2 * i])
        sq = _square_list(c)
        prod = Fraction(1)
        for s in sq:
            prod = prod * s.s
        if not _zero(prod - 1, approx, tol):
            return Membership(False, "prod_s=1", prod - 1)
        q = q_poly(sq)
        if not _zero(q, approx, tol):
            return Membership(False, "q=0", q)
        return Membership(True, None, max(abs(prod - 1), abs(q)) if approx else 0)

    for i, (x, _, z, _) in enumerate(pt.blocks()):
        if not x > 0:
            return Membership(False, f"x{i + 1}>0", x)
        if not z > 0:
            return Membership(False, f"z{i + 1}>0", z)
    total = _block_sum(pt.blocks())
    if kind == "VFungi":
        x, y = c[4 * g], c[4 * g + 1]
        if x != 1:
            return Membership(False, "x=1", x - 1)
        total = total + 2 * y
    elif kind == "VBungee":
        x, y, z, _ = c[4 * g: 4 * g + 4]
        if x != 1:
            return Membership(False, "x=1", x - 1)
        if not z > 0:
            return Membership(False, f"z{g + 1}>0", z)
        total = total + x * y * (z * z + 1)
    if not _zero(total, approx, tol):
        return Membership(False, "relator", total)
    return Membership(True, None, abs(total) if approx else 0)


def assignment(pt: RepPoint) -> dict[str, UTMat]:
    """Generator images for ``pt`` without checking the relation."""
    p = space_presentation(pt.space)
    c = pt.coords
    rho: dict[str, UTMat] = {}
    if pt.kind == "V":
        for i, name in enumerate(p.generators):
            rho[name] = UTMat(c[2 * i], c[2 * i + 1])
        return rho
    for (a, b), (x, y, z, w) in zip(p.handle_names(), pt.blocks()):
        rho[a] = UTMat(x, y)
        rho[b] = UTMat(z, w)
    g = pt.genus
    if pt.kind == "VFungi":
        rho["c"] = UTMat(c[4 * g], c[4 * g + 1])
    elif pt.kind == "VBungee":
        rho["c"] = UTMat(c[4 * g], c[4 * g + 1])
        rho["d"] = UTMat(c[4 * g + 2], c[4 * g + 3])
    return rho


def rep_of(pt: RepPoint) -> dict[str, UTMat]:
    m = membership(pt)
    if not m:
        raise PreconditionError(f"point is not in {pt.space}: {m.constraint} (residual {m.residual})")
    return assignment(pt)


_SAMPLE_VALUES = sorted({Fraction(p, q) for p in range(-10, 11) for q in range(1, 11)})
_POSITIVE_VALUES = [v for v in _SAMPLE_VALUES if v > 0]


def sample_point(space: str, seed: int) -> RepPoint:
    """A deterministic pseudo-random point of ``space``.

    Free coordinates are small rationals p/q with |p|, q <= 10; one closing
    coordinate is then solved for exactly.
    """
    kind, g = parse_space(space)
    rng = random.Random(f"{space}/{seed}")
    pos = lambda: rng.choice(_POSITIVE_VALUES)  # noqa: E731
    free = lambda: rng.choice(_SAMPLE_VALUES)  # noqa: E731

    if kind == "V":
        if g == 0:
            return RepPoint(space, ())
        xs = [pos() for _ in range(g - 1)]
        ys = [free() for _ in range(g - 1)]
        prod = Fraction(1)
        for x in xs:
            prod *= x
        xs.append(1 / prod)
        sq = [square_coords(x, y) for x, y in zip(xs, ys)] + [SquareCoords(xs[-1] ** 2, Fraction(0))]
        coeff = Fraction(1)
        for s in sq[:-1]:
            coeff *= s.s
        t_n = -q_poly(sq) / coeff
        ys.append(t_n / (xs[-1] + 1 / xs[-1]))
        return RepPoint(space, tuple(v for pair in zip(xs, ys) for v in pair))

    blocks = [[pos(), free(), pos(), free()] for _ in range(g)]
    if kind == "U":
        if g == 0:
            return RepPoint(space, ())
        last = blocks[-1]
        while last[2] == 1:
            last[2] = pos()
        x, _, z, w = last
        rest = _block_sum(tuple(b) for b in blocks[:-1])
        # p(x, y, z, w) = x(1 - z^2) y - z w (1 - x^2), linear in y
        last[1] = (z * w * (1 - x * x) - rest) / (x * (1 - z * z))
        return RepPoint(space, tuple(v for b in blocks for v in b))
    total = _block_sum(tuple(b) for b in blocks)
    flat = [v for b in blocks for v in b]
    if kind == "VFungi":
        return RepPoint(space, tuple(flat + [Fraction(1), -total / 2]))
    z, w = pos(), free()
    return RepPoint(space, tuple(flat + [Fraction(1), -total / (z * z + 1), z, w]))


def torus_rep(x: Scalar, z: Scalar) -> RepPoint:
    """Diagonal images a -> diag(x, 1/x), b -> diag(z, 1/z) of the torus group."""
    x, z = as_exact(x), as_exact(z)
    if not (x > 0 and z > 0):
        raise ValueError("x and z must be positive")
    return RepPoint("U:1", (x, Fraction(0), z, Fraction(0)))


# -- perturbation moves ---------------------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise PreconditionError(message)


def _check_eps(eps):
    eps = as_exact(eps)
    _require(eps >= 0, "epsilon must be nonnegative")
    return eps


def _require_kind(pt: RepPoint, kind: str):
    _require(pt.kind == kind, f"expected a {kind} point, got {pt.space}")
    m = membership(pt)
    _require(m.ok, f"input is not in {pt.space}: {m.constraint}")


def _shift_block(pt: RepPoint, i: int, delta) -> dict[int, Scalar] | None:
    """Coordinate change moving p of block i by ``delta``, or None.

    Uses w_i when x_i != 1 and y_i when z_i != 1 (p is linear in each).
    """
    x, y, z, w = pt.blocks()[i]
    if x != 1:
        return {4 * i + 3: w - delta / (z * (1 - x * x))}
    if z != 1:
        return {4 * i + 1: y + delta / (x * (1 - z * z))}
    return None


def _require_prefix_killed(pt: RepPoint, g0: int):
    total = _block_sum(pt.blocks()[:g0])
    _require(_zero(total, pt.approximate, APPROX_TOL), f"[a1,b1]...[a{g0},b{g0}] is not killed")


def _prefix_shift(pt: RepPoint, g0: int, delta) -> dict[int, Scalar]:
    for i in range(g0):
        change = _shift_block(pt, i, delta)
        if change is not None:
            return change
    raise PreconditionError(
        f"no block i <= {g0} with x_i != 1 or z_i != 1; regularize the point first"
    )


def perturb_kill_a1(pt: RepPoint, eps) -> RepPoint:
    """U(g): move a point killing a_1 off the locus {x1 = 1, y1 = 0}."""
    eps = _check_eps(eps)
    _require_kind(pt, "U")
    x1, y1, z1, w1 = pt.blocks()[0]
    _require(x1 == 1 and y1 == 0, "a_1 is not killed: need x1 = 1 and y1 = 0")
    if z1 == 1:
        return pt.replace({1: eps})
    y_new = -eps * (2 + eps) / (1 + eps) * z1 * w1 / (1 - z1 * z1)
    return pt.replace({0: 1 + eps, 1: y_new})


def perturb_separating(pt: RepPoint, g0: int, eps) -> RepPoint:
    """U(g): make the first ``g0`` handles contribute -eps, the rest +eps."""
    eps = _check_eps(eps)
    _require_kind(pt, "U")
    g = pt.genus
    _require(1 <= g0 < g, f"need 1 <= g0 < g, got g0={g0}, g={g}")
    _require_prefix_killed(pt, g0)
    changes = _prefix_shift(pt, g0, -eps)
    for j in range(g0, g):
        back = _shift_block(pt, j, eps)
        if back is not None:
            changes.update(back)
            return pt.replace(changes)
    raise PreconditionError(f"no block j > {g0} with x_j != 1 or z_j != 1; regularize first")


def _st(pt: RepPoint) -> list[SquareCoords]:
    return _square_list(pt.coords)


def _solve_last_t(sq: list[SquareCoords]) -> Fraction:
    # q_n is linear in t_n with coefficient s_1...s_{n-1}
    head = sq[:-1] + [SquareCoords(sq[-1].s, Fraction(0))]
    coeff = Fraction(1)
    for s in sq[:-1]:
        coeff = coeff * s.s
    return -q_poly(head) / coeff


def perturb_kill_c1(pt: RepPoint, eps) -> RepPoint:
    """V(n): set t_1 = eps and re-solve t_n so that q_n stays 0."""
    eps = _check_eps(eps)
    _require_kind(pt, "V")
    n = pt.genus
    _require(n >= 2, "c_1 cannot be perturbed when n = 1")
    c = pt.coords
    _require(c[0] == 1 and c[1] == 0, "c_1 is not killed: need x1 = 1 and y1 = 0")
    sq = _st(pt)
    sq[0] = SquareCoords(sq[0].s, eps)
    t_n = _solve_last_t(sq)
    x1, xn = c[0], c[2 * n - 2]
    return pt.replace({1: eps / (x1 + 1 / x1), 2 * n - 1: t_n / (xn + 1 / xn)})


@dataclass(frozen=True)
class PrefixPerturbation:
    """Result of :func:`perturb_kill_prefix_squares`.

    ``square_coords`` satisfy the V(n) equations exactly; ``point`` is their
    image in (x, y) coordinates, exact when the changed s-values are rational
    squares and float otherwise (``residual`` bounds the conversion error).
    """

    square_coords: tuple[SquareCoords, ...]
    point: RepPoint
    exact: bool
    residual: float


def prefix_squares_st(pt: RepPoint, n0: int, eps) -> list[SquareCoords]:
    eps = _check_eps(eps)
    _require_kind(pt, "V")
    n = pt.genus
    _require(1 <= n0 < n, f"need 1 <= n0 < n, got n0={n0}, n={n}")
    sq = _st(pt)
    prod = Fraction(1)
    for s in sq[:n0]:
        prod *= s.s
    _require(prod == 1 and q_poly(sq[:n0]) == 0, f"c1^2...c{n0}^2 is not killed")
    s1 = sq[0].s + eps
    rest = Fraction(1)
    for s in sq[1: n - 1]:
        rest *= s.s
    sq[0] = SquareCoords(s1, sq[0].t)
    sq[-1] = SquareCoords(1 / (s1 * rest), sq[-1].t)
    sq[-1] = SquareCoords(sq[-1].s, _solve_last_t(sq))
    return sq


def perturb_kill_prefix_squares(pt: RepPoint, n0: int, eps) -> PrefixPerturbation:
    """V(n): scale s_1 by +eps, rebalance s_n, re-solve t_n."""
    sq = prefix_squares_st(pt, n0, eps)
    n = pt.genus
    changes: dict[int, Scalar] = {}
    residual = 0.0
    exact = True
    for i in (0, n - 1):
        x, y = square_coords_inv(sq[i].s, sq[i].t)
        if isinstance(x, ApproxScalar):
            exact = False
            residual = max(residual, x.residual, y.residual)
            x, y = x.value, y.value
        changes[2 * i], changes[2 * i + 1] = x, y
    point = pt.replace(changes)
    if not exact:
        residual = max(residual, float(abs(membership(point, tol=math.inf).residual)))
    return PrefixPerturbation(tuple(sq), point, exact, residual)


def perturb_fungi_commutator(pt: RepPoint, g0: int, eps) -> RepPoint:
    """VFungi(g): shift the first g0 handles by -eps and y by +eps/2."""
    eps = _check_eps(eps)
    _require_kind(pt, "VFungi")
    g = pt.genus
    _require(1 <= g0 <= g, f"need 1 <= g0 <= g, got g0={g0}, g={g}")
    _require_prefix_killed(pt, g0)
    changes = _prefix_shift(pt, g0, -eps)
    changes[4 * g + 1] = pt.coords[4 * g + 1] + eps / 2
    return pt.replace(changes)


def perturb_fungi_a1(pt: RepPoint, eps) -> RepPoint:
    eps = _check_eps(eps)
    _require_kind(pt, "VFungi")
    g = pt.genus
    _require(g >= 1, "no handle generator a_1 when g = 0")
    x1, y1, z1, w1 = pt.blocks()[0]
    _require(x1 == 1 and y1 == 0, "a_1 is not killed: need x1 = 1 and y1 = 0")
    total = p_poly(Fraction(1), eps, z1, w1) + _block_sum(pt.blocks()[1:])
    return pt.replace({1: eps, 4 * g + 1: -total / 2})


def perturb_bungee_commutator(pt: RepPoint, g0: int, eps) -> RepPoint:
    """VBungee(g): shift the first g0 handles by -eps, y_{g+1} by eps/(z^2+1)."""
    eps = _check_eps(eps)
    _require_kind(pt, "VBungee")
    g = pt.genus
    _require(1 <= g0 <= g, f"need 1 <= g0 <= g, got g0={g0}, g={g}")
    _require_prefix_killed(pt, g0)
    changes = _prefix_shift(pt, g0, -eps)
    y, z = pt.coords[4 * g + 1], pt.coords[4 * g + 2]
    changes[4 * g + 1] = y + eps / (z * z + 1)
    return pt.replace(changes)


def perturb_bungee_a1(pt: RepPoint, eps) -> RepPoint:
    eps = _check_eps(eps)
    _require_kind(pt, "VBungee")
    g = pt.genus
    _require(g >= 1, "no handle generator a_1 when g = 0")
    x1, y1, z1, w1 = pt.blocks()[0]
    _require(x1 == 1 and y1 == 0, "a_1 is not killed: need x1 = 1 and y1 = 0")
    total = p_poly(Fraction(1), eps, z1, w1) + _block_sum(pt.blocks()[1:])
    z = pt.coords[4 * g + 2]
    return pt.replace({1: eps, 4 * g + 1: -total / (z * z + 1)})


PERTURBATIONS = {
    "kill-a1": ("U", False),
    "separating": ("U", True),
    "kill-c1": ("V", False),
    "prefix": ("V", True),
    "fungi": ("VFungi", True),
    "fungi-a1": ("VFungi", False),
    "bungee": ("VBungee", True),
    "bungee-a1": ("VBungee", False),
}


def parse_case(case: str) -> tuple[str, int | None]:
    name, _, param = case.partition(":")
    if name not in PERTURBATIONS:
        raise ValueError(f"unknown perturbation case {case!r}")
    needs_param = PERTURBATIONS[name][1]
    if needs_param != bool(param):
        raise ValueError(f"case {name!r} {'needs' if needs_param else 'takes no'} ':<int>' parameter")
    if param and not param.isdigit():
        raise ValueError(f"bad parameter in {case!r}")
    return name, int(param) if param else None


def perturb(pt: RepPoint, case: str, eps) -> RepPoint:
    """Dispatch ``case`` (e.g. ``"separating:1"``); always returns a RepPoint."""
    name, param = parse_case(case)
    if name == "kill-a1":
        return perturb_kill_a1(pt, eps)
    if name == "separating":
        return perturb_separating(pt, param, eps)
    if name == "kill-c1":
        return perturb_kill_c1(pt, eps)
    if name == "prefix":
        return perturb_kill_prefix_squares(pt, param, eps).point
    if name == "fungi":
        return perturb_fungi_commutator(pt, param, eps)
    if name == "fungi-a1":
        return perturb_fungi_a1(pt, eps)
    if name == "bungee":
        return perturb_bungee_commutator(pt, param, eps)
    return perturb_bungee_a1(pt, eps)


def targeted_word(space: str, case: str) -> Word:
    """The simple loop that ``case`` stops from being killed."""
    name, param = parse_case(case)
    p = space_presentation(space)
    if name in ("kill-a1", "fungi-a1", "bungee-a1"):
        return Word.of((p.handle_names()[0][0], 1))
    if name == "kill-c1":
        return Word.of(("c1", 1))
    if name == "prefix":
        return Word(tuple((f"c{i}", 2) for i in range(1, param + 1)))
    return commutator_product(p.handle_names()[:param])


# -- generic zeros of p ---------------------------------------------------


def lemma_pee_term(x, y, z, w, n: int) -> tuple:
    """Term ``n >= 1`` of a sequence of zeros of p converging to (x, y, z, w).

    Every term has x_n != +-1 or z_n != +-1.  When x and z are both +-1 and
    y != 0, z_n is a root of a quadratic and comes back as a float.
    """
    x, y, z, w = (as_exact(v) for v in (x, y, z, w))
    if x == 0 or z == 0:
        raise ValueError("x and z must be nonzero")
    if p_poly(x, y, z, w) != 0:
        raise ValueError("p(x, y, z, w) must vanish")
    if n < 1:
        raise ValueError("n must be >= 1")
    if x * x != 1 or z * z != 1:
        return (x, y, z, w)
    step = Fraction(1, n * n)
    if y == 0:
        return (x, y, z * (1 + step), w)
    xn = x * (1 + step)
    # sign of the radical picked so that z_n -> z as x_n -> x
    sign = -int(z) * int(x) * (1 if y > 0 else -1)
    fx, fy, fw = float(xn), float(y), float(w)
    u = 1 - fx * fx
    zn = (fw * u + sign * math.sqrt(fw * fw * u * u + 4 * fx * fx * fy * fy)) / (-2 * fx * fy)
    return (xn, y, zn, w)


def lemma_pee_seq(x, y, z, w, start: int = 1) -> Iterator[tuple]:
    n = start
    while True:
        yield lemma_pee_term(x, y, z, w, n)
        n += 1


def regularize(pt: RepPoint, blocks: Sequence[int], n: int) -> RepPoint:
    """Replace the given handle blocks by term ``n`` of their generic-zero sequence."""
    changes: dict[int, Scalar] = {}
    for i in blocks:
        block = pt.blocks()[i]
        if p_poly(*block) != 0:
            continue  # already generic
        for j, v in enumerate(lemma_pee_term(*block, n)):
            changes[4 * i + j] = v
    return pt.replace(changes)
