"""Exact arithmetic for upper-triangular 2x2 matrices.

A matrix is kept in the normal form ``(x, y, det)`` standing for

    ( x   y     )
    ( 0   det/x )

with ``det`` in ``{+1, -1}``.  Scalars are :class:`fractions.Fraction`, so
every identity below is checked with no rounding at all.  Floats are only
accepted where a square root forces them (see :func:`square_coords_inv`).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[Fraction, float]

_SCALAR_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_scalar(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a reduced Fraction."""
    s = text.strip()
    if not _SCALAR_RE.match(s):
        raise ValueError(f"not an exact rational: {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_scalar(value: Scalar) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(Fraction(value))


def as_exact(value) -> Scalar:
    if isinstance(value, (Fraction, float)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_scalar(value)
    raise TypeError(f"cannot use {value!r} as a scalar")


@dataclass(frozen=True)
class ApproxScalar:
    """A float produced by an irrational step, with its residual bound."""

    value: float
    residual: float

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class UTMat:
    x: Scalar
    y: Scalar = Fraction(0)
    det: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", as_exact(self.x))
        object.__setattr__(self, "y", as_exact(self.y))
        if self.x == 0:
            raise ValueError("upper-left entry must be nonzero")
        if self.det not in (1, -1):
            raise ValueError(f"det must be +1 or -1, got {self.det}")

    @property
    def lower_right(self) -> Scalar:
        return self.det / self.x

    def entries(self) -> tuple:
        return ((self.x, self.y), (0, self.lower_right))

    def __matmul__(self, other: "UTMat") -> "UTMat":
        return mat_mul(self, other)

    def __pow__(self, n: int) -> "UTMat":
        if n < 0:
            return mat_inv(self) ** (-n)
        result = IDENTITY
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def inverse(self) -> "UTMat":
        return mat_inv(self)

    def is_identity(self) -> bool:
        return self.x == 1 and self.y == 0 and self.det == 1

    def is_minus_identity(self) -> bool:
        return self.x == -1 and self.y == 0 and self.det == 1

    def is_scalar(self) -> bool:
        """True for +-I, i.e. trivial after projectivizing."""
        return self.is_identity() or self.is_minus_identity()

    def __str__(self) -> str:
        return format_mat(self)


IDENTITY = UTMat(Fraction(1), Fraction(0), 1)


def mat_mul(a: UTMat, b: UTMat) -> UTMat:
    # (x1 y1; 0 d1/x1)(x2 y2; 0 d2/x2)
    return UTMat(a.x * b.x, a.x * b.y + a.y * b.det / b.x, a.det * b.det)


def mat_inv(a: UTMat) -> UTMat:
    # inverse of (x y; 0 d/x) is (1/x, -y/d; 0, x/d) and d = 1/d
    return UTMat(1 / a.x, -a.y * a.det, a.det)


def mat_prod(mats: Sequence[UTMat]) -> UTMat:
    result = IDENTITY
    for m in mats:
        result = result @ m
    return result


def commutator(a: UTMat, b: UTMat) -> UTMat:
    """``[A, B] = A B A^-1 B^-1`` for SL2 inputs, via the closed form.

    The result is always unipotent with upper entry
    ``p_poly(a.x, a.y, b.x, b.y)``.
    """
    if a.det != 1 or b.det != 1:
        raise ValueError("commutator closed form needs det +1 matrices")
    return UTMat(Fraction(1), p_poly(a.x, a.y, b.x, b.y), 1)


def p_poly(x: Scalar, y: Scalar, z: Scalar, w: Scalar) -> Scalar:
    return x * y * (1 - z * z) - z * w * (1 - x * x)


@dataclass(frozen=True)
class SquareCoords:
    """Coordinates ``(s, t)`` of ``C**2`` for ``C = (x, y; 0, 1/x)``, ``x > 0``."""

    s: Scalar
    t: Scalar

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError(f"s must be positive, got {self.s}")

    def matrix(self) -> UTMat:
        return UTMat(self.s, self.t, 1)


def square_coords(x: Scalar, y: Scalar) -> SquareCoords:
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    return SquareCoords(x * x, y * (x + 1 / x))


def exact_sqrt(q: Fraction) -> Fraction | None:
    """Square root of a nonnegative rational, or None if it is irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


def square_coords_inv(s: Scalar, t: Scalar):
    """Invert ``(x, y) -> (x**2, y*(x + 1/x))`` on the positive-x half plane.

    Returns ``(x, y)`` as Fractions when ``s`` is a rational square.
    Otherwise both come back as :class:`ApproxScalar` with the residual of
    the forward map.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    if not isinstance(s, float) and not isinstance(t, float):
        root = exact_sqrt(s)
        if root is not None:
            return root, t / (root + 1 / root)
    x = math.sqrt(float(s))
    y = float(t) / (x + 1 / x)
    return (
        ApproxScalar(x, abs(x * x - float(s))),
        ApproxScalar(y, abs(y * (x + 1 / x) - float(t))),
    )


def q_poly(coords: Sequence[SquareCoords]) -> Scalar:
    """Upper-right entry of ``C_1**2 ... C_n**2`` from square coordinates.

    For ``n >= 2`` this is the closed form

        s_1...s_{n-1} t_n + sum_{i=2}^{n-1} s_1...s_{i-1} t_i / (s_{i+1}...s_n)
            + t_1 / (s_2...s_n)

    and for ``n == 1`` it is just ``t_1``.
    """
    n = len(coords)
    if n < 1:
        raise ValueError("q_poly needs at least one factor")
    s = [c.s for c in coords]
    t = [c.t for c in coords]
    if n == 1:
        return t[0]

    def prod(vals):
        out = Fraction(1)
        for v in vals:
            out = out * v
        return out

    first = prod(s[: n - 1]) * t[n - 1]
    middle = sum(
        (prod(s[: i - 1]) * t[i - 1] / prod(s[i:]) for i in range(2, n)),
        Fraction(0),
    )
    last = t[0] / prod(s[1:])
    return first + middle + last


def cdcd_form(c: UTMat, d: UTMat) -> UTMat:
    """``C D C D^-1`` from its closed form (both inputs det +1)."""
    if c.det != 1 or d.det != 1:
        raise ValueError("cdcd_form needs det +1 matrices")
    x, y, z, w = c.x, c.y, d.x, d.y
    x2 = x * x
    return UTMat(x2, x * y * (z * z + 1 / x2) + z * w * (1 - x2), 1)


def parse_mat(text: str) -> UTMat:
    """Parse ``"x,y,det"`` (det optional, defaults to 1)."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3):
        raise ValueError(f"matrix must be 'x,y' or 'x,y,det': {text!r}")
    det = 1
    if len(parts) == 3:
        if parts[2] not in ("1", "-1", "+1"):
            raise ValueError(f"det must be 1 or -1: {text!r}")
        det = int(parts[2])
    return UTMat(parse_scalar(parts[0]), parse_scalar(parts[1]), det)


def format_mat(m: UTMat) -> str:
    return f"{format_scalar(m.x)},{format_scalar(m.y)},{m.det}"
